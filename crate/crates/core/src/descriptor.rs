//! The closed family of transformable functions and its small expression
//! language.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := number? '*'? atom | number
//! atom := 'const' number? | 'pow(' p ')' | 'exp(' a ')' | 'sin(' a ')'
//!       | 'cos(' a ')' | 'ml(' beta ',' a ')'
//! ```
//!
//! `pow(p)` is `S(t)^p`, `exp(a)` is `e^{aS(t)}` and `ml(beta, a)` is
//! `E_β(-a S(t)^β)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::special::{mittag_leffler, ml_derivative, MLSign, MLSpec};
use crate::staircase::Staircase;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionDescriptor {
    Const(f64),
    /// `c · S(t)^p`
    Power {
        p: f64,
        c: f64,
    },
    /// `c · e^{a S(t)}`
    Exp {
        a: f64,
        c: f64,
    },
    /// `c · sin(a S(t))`
    Sin {
        a: f64,
        c: f64,
    },
    /// `c · cos(a S(t))`
    Cos {
        a: f64,
        c: f64,
    },
    /// `c · E_β(σ·scale · S(t)^β)`
    ML {
        spec: MLSpec,
        c: f64,
    },
    Sum(Vec<FunctionDescriptor>),
}

use FunctionDescriptor as FD;

impl FunctionDescriptor {
    pub fn constant(c: f64) -> Self {
        FD::Const(c)
    }

    pub fn power(p: f64, c: f64) -> Result<Self> {
        if !(p > -1.0) || !p.is_finite() {
            return invalid(format!("pow({p}): exponent must exceed -1"));
        }
        Ok(FD::Power { p, c })
    }

    pub fn exp(a: f64, c: f64) -> Self {
        FD::Exp { a, c }
    }

    pub fn sin(a: f64, c: f64) -> Self {
        FD::Sin { a, c }
    }

    pub fn cos(a: f64, c: f64) -> Self {
        FD::Cos { a, c }
    }

    /// `c · E_β(-a S(t)^β)`.
    pub fn ml(beta: f64, a: f64, c: f64) -> Result<Self> {
        Ok(FD::ML {
            spec: MLSpec::decaying(beta, a)?,
            c,
        })
    }

    /// Flattened sum; a single part is returned as is.
    pub fn sum(parts: Vec<FunctionDescriptor>) -> Result<Self> {
        let mut flat = Vec::with_capacity(parts.len());
        for part in parts {
            match part {
                FD::Sum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => invalid("empty sum"),
            1 => Ok(flat.pop().expect("one part")),
            _ => Ok(FD::Sum(flat)),
        }
    }

    /// The non-sum parts.
    pub fn atoms(&self) -> &[FunctionDescriptor] {
        match self {
            FD::Sum(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        match self {
            FD::Const(c) => FD::Const(k * c),
            FD::Power { p, c } => FD::Power { p: *p, c: k * c },
            FD::Exp { a, c } => FD::Exp { a: *a, c: k * c },
            FD::Sin { a, c } => FD::Sin { a: *a, c: k * c },
            FD::Cos { a, c } => FD::Cos { a: *a, c: k * c },
            FD::ML { spec, c } => FD::ML { spec: *spec, c: k * c },
            FD::Sum(parts) => FD::Sum(parts.iter().map(|d| d.scaled(k)).collect()),
        }
    }

    /// Value as a function of the staircase variable `u = S(t)`.
    pub fn eval_at_u(&self, u: f64) -> Result<f64> {
        self.derivative_at_u(u, 0)
    }

    /// `k`-th derivative with respect to `u = S(t)`.
    pub fn derivative_at_u(&self, u: f64, k: u32) -> Result<f64> {
        let kf = k as f64;
        Ok(match self {
            FD::Const(c) => {
                if k == 0 {
                    *c
                } else {
                    0.0
                }
            }
            FD::Power { p, c } => {
                if u < 0.0 {
                    return Err(Error::OutOfRange(u));
                }
                let coef = c * falling(*p, k);
                if coef == 0.0 {
                    0.0
                } else {
                    coef * u.powf(p - kf)
                }
            }
            FD::Exp { a, c } => c * a.powi(k as i32) * (a * u).exp(),
            FD::Sin { a, c } => c * a.powi(k as i32) * (a * u + kf * FRAC_PI_2).sin(),
            FD::Cos { a, c } => c * a.powi(k as i32) * (a * u + kf * FRAC_PI_2).cos(),
            FD::ML { spec, c } => {
                if u < 0.0 {
                    return Err(Error::OutOfRange(u));
                }
                if k == 0 {
                    c * mittag_leffler(spec, u)?
                } else {
                    c * ml_derivative(spec, u, k)?
                }
            }
            FD::Sum(parts) => {
                let mut acc = 0.0;
                for d in parts {
                    acc += d.derivative_at_u(u, k)?;
                }
                acc
            }
        })
    }

    /// Pointwise value `f(t)` through the staircase.
    pub fn eval(&self, st: &Staircase, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return invalid(format!("descriptors are evaluated at t >= 0, got {t}"));
        }
        self.eval_at_u(st.eval(t))
    }

    /// An upper bound for `|f|` at `u`, used to place quadrature cut-offs.
    pub fn envelope_at_u(&self, u: f64) -> f64 {
        match self {
            FD::Const(c) => c.abs(),
            FD::Power { p, c } => c.abs() * u.max(0.0).powf(*p),
            FD::Exp { a, c } => c.abs() * (a * u).exp(),
            FD::Sin { c, .. } | FD::Cos { c, .. } => c.abs(),
            FD::ML { spec, c } => match spec.sign {
                MLSign::Minus => c.abs(),
                MLSign::Plus => c.abs() * mittag_leffler(spec, u.max(0.0)).unwrap_or(f64::INFINITY),
            },
            FD::Sum(parts) => parts.iter().map(|d| d.envelope_at_u(u)).sum(),
        }
    }
}

/// `Γ(p+1)/Γ(p-k+1)`, the coefficient of the `k`-th derivative of `u^p`.
fn falling(p: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= p - i as f64;
    }
    acc
}

fn write_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    write!(f, "{x}")
}

fn write_atom(f: &mut fmt::Formatter<'_>, d: &FunctionDescriptor, magnitude_only: bool) -> fmt::Result {
    let (c, body): (f64, String) = match d {
        FD::Const(c) => (*c, "const".to_string()),
        FD::Power { p, c } => (*c, format!("pow({p})")),
        FD::Exp { a, c } => (*c, format!("exp({a})")),
        FD::Sin { a, c } => (*c, format!("sin({a})")),
        FD::Cos { a, c } => (*c, format!("cos({a})")),
        FD::ML { spec, c } => (*c, format!("ml({}, {})", spec.beta, spec.rate())),
        FD::Sum(_) => unreachable!("sums are flattened"),
    };
    let c = if magnitude_only { c.abs() } else { c };
    if c == 1.0 {
        write!(f, "{body}")
    } else {
        write_num(f, c)?;
        write!(f, "*{body}")
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.atoms().iter().enumerate() {
            if i == 0 {
                write_atom(f, d, false)?;
            } else if coefficient(d).is_sign_negative() {
                write!(f, " - ")?;
                write_atom(f, d, true)?;
            } else {
                write!(f, " + ")?;
                write_atom(f, d, false)?;
            }
        }
        Ok(())
    }
}

fn coefficient(d: &FunctionDescriptor) -> f64 {
    match d {
        FD::Const(c)
        | FD::Power { c, .. }
        | FD::Exp { c, .. }
        | FD::Sin { c, .. }
        | FD::Cos { c, .. }
        | FD::ML { c, .. } => *c,
        FD::Sum(_) => 1.0,
    }
}

impl FromStr for FunctionDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

/// Parses the expression language into a descriptor.
pub fn parse_expr(text: &str) -> Result<FunctionDescriptor> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut parts = Vec::new();
    p.skip_ws();
    let mut sign = 1.0;
    if let Some(b) = p.peek() {
        if b == b'+' || b == b'-' {
            // a leading sign belongs to the coefficient unless a number follows
            if !p.number_follows_sign() {
                sign = if b == b'-' { -1.0 } else { 1.0 };
                p.pos += 1;
            }
        }
    }
    parts.push(p.term(sign)?);
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                parts.push(p.term(1.0)?);
            }
            Some(b'-') => {
                p.pos += 1;
                parts.push(p.term(-1.0)?);
            }
            Some(_) => return p.fail("expected '+', '-' or end of input"),
        }
    }
    FunctionDescriptor::sum(parts)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn number_follows_sign(&self) -> bool {
        let mut i = self.pos + 1;
        while matches!(self.src.get(i), Some(b) if b.is_ascii_whitespace()) {
            i += 1;
        }
        matches!(self.src.get(i), Some(b) if b.is_ascii_digit() || *b == b'.')
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("expected '{}'", byte as char))
        }
    }

    fn try_number(&mut self) -> Option<Result<f64>> {
        self.skip_ws();
        let start = self.pos;
        let mut i = self.pos;
        if matches!(self.src.get(i), Some(b'+' | b'-')) {
            i += 1;
            while matches!(self.src.get(i), Some(b) if b.is_ascii_whitespace()) {
                i += 1;
            }
        }
        let digits_start = i;
        while matches!(self.src.get(i), Some(b) if b.is_ascii_digit()) {
            i += 1;
        }
        if self.src.get(i) == Some(&b'.') {
            i += 1;
            while matches!(self.src.get(i), Some(b) if b.is_ascii_digit()) {
                i += 1;
            }
        }
        let mantissa = &self.src[digits_start..i];
        if mantissa.is_empty() || mantissa == b"." {
            return None;
        }
        if matches!(self.src.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(self.src.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            if matches!(self.src.get(j), Some(b) if b.is_ascii_digit()) {
                while matches!(self.src.get(j), Some(b) if b.is_ascii_digit()) {
                    j += 1;
                }
                i = j;
            }
        }
        let text: String = std::str::from_utf8(&self.src[start..i])
            .expect("ascii")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        self.pos = i;
        Some(text.parse::<f64>().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number '{text}'"),
        }))
    }

    fn number(&mut self) -> Result<f64> {
        match self.try_number() {
            Some(r) => r,
            None => self.fail("expected a number"),
        }
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn term(&mut self, sign: f64) -> Result<FunctionDescriptor> {
        self.skip_ws();
        let mut coef = sign;
        if let Some(n) = self.try_number() {
            coef *= n?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else if !matches!(self.peek(), Some(b) if b.is_ascii_alphabetic()) {
                return Ok(FD::Const(coef));
            }
        }
        self.skip_ws();
        let at = self.pos;
        let name = self.word().to_string();
        let d = match name.as_str() {
            "const" => {
                let save = self.pos;
                self.skip_ws();
                match self.peek() {
                    Some(b) if b.is_ascii_digit() || b == b'.' => {
                        let n = self.number()?;
                        FD::Const(coef * n)
                    }
                    _ => {
                        self.pos = save;
                        FD::Const(coef)
                    }
                }
            }
            "pow" => {
                self.expect(b'(')?;
                let p = self.number()?;
                self.expect(b')')?;
                FunctionDescriptor::power(p, coef).map_err(|e| match e {
                    Error::InvalidArgument(m) => Error::Syntax { offset: at, message: m },
                    other => other,
                })?
            }
            "exp" | "sin" | "cos" => {
                self.expect(b'(')?;
                let a = self.number()?;
                self.expect(b')')?;
                match name.as_str() {
                    "exp" => FD::exp(a, coef),
                    "sin" => FD::sin(a, coef),
                    _ => FD::cos(a, coef),
                }
            }
            "ml" => {
                self.expect(b'(')?;
                let beta = self.number()?;
                self.expect(b',')?;
                let a = self.number()?;
                self.expect(b')')?;
                FunctionDescriptor::ml(beta, a, coef).map_err(|e| match e {
                    Error::InvalidArgument(m) => Error::Syntax { offset: at, message: m },
                    other => other,
                })?
            }
            "" => {
                self.pos = at;
                return self.fail("expected a term");
            }
            _ => {
                self.pos = at;
                return self.fail(&format!("unknown function '{name}'"));
            }
        };
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let d = parse_expr("2*exp(-0.5) + pow(1)").unwrap();
        assert_eq!(d, FD::Sum(vec![FD::exp(-0.5, 2.0), FD::power(1.0, 1.0).unwrap()]));
        let d = parse_expr("ml(0.5, 1)").unwrap();
        assert_eq!(d, FD::ml(0.5, 1.0, 1.0).unwrap());
        if let FD::ML { spec, .. } = d {
            assert_eq!(spec.sign, MLSign::Minus);
            assert_eq!(spec.scale, 1.0);
        }
        assert_eq!(parse_expr("const 1").unwrap(), FD::Const(1.0));
        assert_eq!(parse_expr("3").unwrap(), FD::Const(3.0));
        assert_eq!(parse_expr("-2 * const").unwrap(), FD::Const(-2.0));
        assert_eq!(parse_expr(" - sin(2)").unwrap(), FD::sin(2.0, -1.0));
        assert_eq!(parse_expr("1.5e-1cos(3)").unwrap(), FD::cos(3.0, 0.15));
        assert_eq!(
            parse_expr("const - ml(0.5,2)").unwrap(),
            FD::Sum(vec![FD::Const(1.0), FD::ml(0.5, 2.0, -1.0).unwrap()])
        );
    }

    #[test]
    fn reports_offsets() {
        match parse_expr("pow(-2)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match parse_expr("exp(1) + foo(2)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("{other:?}"),
        }
        match parse_expr("exp(1") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("").is_err());
        assert!(parse_expr("exp(1) exp(2)").is_err());
        assert!(parse_expr("ml(0, 1)").is_err());
    }

    #[test]
    fn prints_grammar() {
        let d = FD::sum(vec![
            FD::Const(1.0),
            FD::ml(0.5, 2.0, -1.0).unwrap(),
            FD::exp(-1.0, 2.5),
        ])
        .unwrap();
        assert_eq!(d.to_string(), "const - ml(0.5, 2) + 2.5*exp(-1)");
    }

    #[test]
    fn evaluation() {
        let st = Staircase::identity();
        let d = parse_expr("2*exp(-0.5) + pow(1)").unwrap();
        let t = 1.7;
        assert!((d.eval(&st, t).unwrap() - (2.0 * (-0.85f64).exp() + 1.7)).abs() < 1e-14);
        assert!(d.eval(&st, -1.0).is_err());
        let cantor = Staircase::cantor().unwrap();
        let a = cantor.alpha();
        let c = FD::Const(1.0 / statrs::function::gamma::gamma(a + 1.0));
        assert_eq!(
            c.eval(&cantor, 0.4).unwrap(),
            1.0 / statrs::function::gamma::gamma(a + 1.0)
        );
    }

    #[test]
    fn derivatives_in_u() {
        let p = FD::power(2.0, 3.0).unwrap();
        assert_eq!(p.derivative_at_u(1.5, 1).unwrap(), 9.0);
        assert_eq!(p.derivative_at_u(1.5, 3).unwrap(), 0.0);
        let s = FD::sin(2.0, 1.0);
        assert!((s.derivative_at_u(0.3, 1).unwrap() - 2.0 * 0.6f64.cos()).abs() < 1e-15);
        assert!((s.derivative_at_u(0.3, 2).unwrap() + 4.0 * 0.6f64.sin()).abs() < 1e-14);
        assert_eq!(FD::Const(4.0).derivative_at_u(1.0, 1).unwrap(), 0.0);
    }

    fn coef() -> impl Strategy<Value = f64> {
        prop_oneof![Just(1.0), -50.0..50.0f64]
    }

    fn atom() -> impl Strategy<Value = FunctionDescriptor> {
        prop_oneof![
            coef().prop_map(FD::Const),
            (-0.99..4.0f64, coef()).prop_map(|(p, c)| FD::power(p, c).unwrap()),
            (-5.0..5.0f64, coef()).prop_map(|(a, c)| FD::exp(a, c)),
            (-5.0..5.0f64, coef()).prop_map(|(a, c)| FD::sin(a, c)),
            (-5.0..5.0f64, coef()).prop_map(|(a, c)| FD::cos(a, c)),
            (0.05..2.0f64, -5.0..5.0f64, coef()).prop_map(|(b, a, c)| FD::ml(b, a, c).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(parts in prop::collection::vec(atom(), 1..5)) {
            let d = FunctionDescriptor::sum(parts).unwrap();
            let text = d.to_string();
            let back = parse_expr(&text).unwrap();
            prop_assert_eq!(back, d, "text: {}", text);
        }

        #[test]
        fn sum_is_linear(a in atom(), b in atom(), u in 0.0..3.0f64) {
            let s = FunctionDescriptor::sum(vec![a.clone(), b.clone()]).unwrap();
            let lhs = s.eval_at_u(u).unwrap();
            let rhs = a.eval_at_u(u).unwrap() + b.eval_at_u(u).unwrap();
            prop_assume!(rhs.is_finite());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
