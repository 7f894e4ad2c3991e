//! Generalized rational expressions `Σ aᵢ s^{μᵢ} / Σ bⱼ s^{νⱼ}` with real
//! exponents, the codomain of the transform rules.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::format::sig12;

/// Exponents closer than this are the same power of `s`.
pub const EXP_TOL: f64 = 1e-12;
/// A merged coefficient this small relative to the magnitudes that produced
/// it is a cancellation, not a value.
pub const CANCEL_TOL: f64 = 1e-13;

const MAX_DIVISION_STEPS: usize = 64;

/// Generalized polynomial `Σ cᵢ s^{eᵢ}`, terms sorted by exponent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GenPoly {
    terms: Vec<(f64, f64)>,
}

impl GenPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0.0)
    }

    pub fn monomial(c: f64, e: f64) -> Self {
        Self::from_terms(vec![(c, e)])
    }

    /// Builds a polynomial from `(coefficient, exponent)` pairs.
    pub fn from_terms(terms: Vec<(f64, f64)>) -> Self {
        Self::normalize(terms.into_iter().map(|(c, e)| (c, e, c.abs())).collect())
    }

    fn normalize(mut raw: Vec<(f64, f64, f64)>) -> Self {
        raw.retain(|t| t.0 != 0.0);
        raw.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(f64, f64, f64)> = Vec::with_capacity(raw.len());
        for (c, e, g) in raw {
            match merged.last_mut() {
                Some(last) if (e - last.1).abs() <= EXP_TOL => {
                    last.0 += c;
                    last.2 += g;
                }
                _ => merged.push((c, e, g)),
            }
        }
        let terms = merged
            .into_iter()
            .filter(|&(c, _, g)| c != 0.0 && c.abs() > CANCEL_TOL * g)
            .map(|(c, e, _)| (c, if e == 0.0 { 0.0 } else { e }))
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<f64> {
        self.terms.first().map(|t| t.1)
    }

    pub fn max_exp(&self) -> Option<f64> {
        self.terms.last().map(|t| t.1)
    }

    /// Largest coefficient magnitude, 0 for the zero polynomial.
    pub fn max_abs_coef(&self) -> f64 {
        self.terms.iter().map(|t| t.0.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(c, e)| (k * c, e)).collect())
    }

    /// Multiplies by `s^mu`.
    pub fn shift(&self, mu: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|&(c, e)| (c, e + mu)).collect(),
        }
    }

    /// The substitution `s ↦ 1/s`.
    pub fn reciprocal_substitute(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|&(c, e)| (c, -e)).collect())
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, e)| if e == 0.0 { c } else { c * s.powf(e) })
            .sum()
    }

    /// Coefficient-level comparison with relative tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| (a.1 - b.1).abs() <= EXP_TOL && (a.0 - b.0).abs() <= tol * a.0.abs().max(b.0.abs()))
    }

    /// Exact quotient `self / d` by highest-term-first division, if one exists.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dc, de) = *d.terms.last().expect("non-empty");
        let floor = self.min_exp()? - d.min_exp()?;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        for _ in 0..MAX_DIVISION_STEPS {
            let Some(&(rc, re)) = rem.terms.last() else {
                return Some(Self::from_terms(quotient));
            };
            let qe = re - de;
            if qe < floor - EXP_TOL {
                return None;
            }
            let qc = rc / dc;
            quotient.push((qc, qe));
            rem = rem.sub_gross(&d.shift(qe).scale(qc));
        }
        None
    }

    fn with_gross(&self) -> Vec<(f64, f64, f64)> {
        self.terms.iter().map(|&(c, e)| (c, e, c.abs())).collect()
    }

    fn sub_gross(&self, other: &Self) -> Self {
        let mut raw = self.with_gross();
        raw.extend(other.terms.iter().map(|&(c, e)| (-c, e, c.abs())));
        Self::normalize(raw)
    }
}

impl Add for &GenPoly {
    type Output = GenPoly;
    fn add(self, rhs: &GenPoly) -> GenPoly {
        let mut raw = self.with_gross();
        raw.extend(rhs.with_gross());
        GenPoly::normalize(raw)
    }
}

impl Sub for &GenPoly {
    type Output = GenPoly;
    fn sub(self, rhs: &GenPoly) -> GenPoly {
        self.sub_gross(rhs)
    }
}

impl Neg for &GenPoly {
    type Output = GenPoly;
    fn neg(self) -> GenPoly {
        GenPoly {
            terms: self.terms.iter().map(|&(c, e)| (-c, e)).collect(),
        }
    }
}

impl Mul for &GenPoly {
    type Output = GenPoly;
    fn mul(self, rhs: &GenPoly) -> GenPoly {
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for &(a, x) in &self.terms {
            for &(b, y) in &rhs.terms {
                raw.push((a * b, x + y, (a * b).abs()));
            }
        }
        GenPoly::normalize(raw)
    }
}

/// Generalized rational expression in `s = S_F^α(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformExpr {
    num: GenPoly,
    den: GenPoly,
}

impl TransformExpr {
    /// Builds and simplifies `num / den`.
    pub fn new(num: GenPoly, den: GenPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { num, den }.simplify())
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self {
            num: GenPoly::constant(c),
            den: GenPoly::constant(1.0),
        }
    }

    /// `c · s^e`.
    pub fn monomial(c: f64, e: f64) -> Self {
        Self {
            num: GenPoly::monomial(c, e),
            den: GenPoly::constant(1.0),
        }
    }

    pub fn numerator(&self) -> &GenPoly {
        &self.num
    }

    pub fn denominator(&self) -> &GenPoly {
        &self.den
    }

    /// Structural zero: the numerator has no terms left.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Multiplies by `s^mu`.
    pub fn shift(&self, mu: f64) -> Self {
        Self {
            num: self.num.shift(mu),
            den: self.den.clone(),
        }
        .simplify()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den.approx_eq(&rhs.den, 1e-13) {
            return Self {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .simplify();
        }
        if let Some(k) = rhs.den.exact_div(&self.den) {
            // rhs.den = k · self.den
            return Self {
                num: &(&self.num * &k) + &rhs.num,
                den: rhs.den.clone(),
            }
            .simplify();
        }
        if let Some(k) = self.den.exact_div(&rhs.den) {
            return Self {
                num: &self.num + &(&rhs.num * &k),
                den: self.den.clone(),
            }
            .simplify();
        }
        Self {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .simplify()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .simplify()
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self {
            num: &self.num * &rhs.den,
            den: &self.den * &rhs.num,
        }
        .simplify())
    }

    /// Canonical form: common powers of `s` cancelled, exact polynomial
    /// factors divided out, lowest denominator term equal to `1·s⁰`.
    pub fn simplify(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let mu = self.den.min_exp().expect("non-zero denominator");
        let mut num = self.num.shift(-mu);
        let mut den = self.den.shift(-mu);
        if den.terms.len() > 1 {
            if let Some(q) = num.exact_div(&den) {
                num = q;
                den = GenPoly::constant(1.0);
            } else if num.terms.len() > 1 {
                // den = q · num, so num/den = 1/q
                if let Some(q) = den.exact_div(&num) {
                    num = GenPoly::constant(1.0);
                    den = q;
                }
            }
        }
        let mu = den.min_exp().expect("non-zero denominator");
        if mu != 0.0 {
            num = num.shift(-mu);
            den = den.shift(-mu);
        }
        let lead = den.terms[0].0;
        if lead != 1.0 {
            num = num.scale(1.0 / lead);
            den = den.scale(1.0 / lead);
        }
        Self { num, den }
    }

    /// Value at `s > 0`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "transform variable must be positive, got {s}"
            )));
        }
        let d = self.den.eval(s);
        if d == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(s) / d)
    }

    /// The substitution `s ↦ 1/s`.
    pub fn substitute_reciprocal(&self) -> Self {
        Self {
            num: self.num.reciprocal_substitute(),
            den: self.den.reciprocal_substitute(),
        }
        .simplify()
    }

    /// Coefficient-level equality after simplification.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.num.approx_eq(&other.num, tol) && self.den.approx_eq(&other.den, tol)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &GenPoly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, &(c, e)) in p.terms.iter().enumerate() {
        let mag = if i > 0 {
            write!(f, "{}", if c < 0.0 { "-" } else { "+" })?;
            c.abs()
        } else {
            c
        };
        if e == 0.0 {
            write!(f, "{}", sig12(mag))?;
            continue;
        }
        if mag == -1.0 {
            write!(f, "-")?;
        } else if mag != 1.0 {
            write!(f, "{}*", sig12(mag))?;
        }
        if (e - 1.0).abs() <= EXP_TOL {
            write!(f, "s")?;
        } else {
            write!(f, "s^{}", sig12(e))?;
        }
    }
    Ok(())
}

impl fmt::Display for TransformExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trivial_den = self.den.terms == [(1.0, 0.0)];
        let multi = self.num.terms.len() > 1;
        if trivial_den {
            return write_poly(f, &self.num);
        }
        if multi {
            write!(f, "(")?;
        }
        write_poly(f, &self.num)?;
        if multi {
            write!(f, ")")?;
        }
        write!(f, "/(")?;
        write_poly(f, &self.den)?;
        write!(f, ")")
    }
}
