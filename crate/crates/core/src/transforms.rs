//! Fractal Sumudu and Laplace transforms, by rule and by quadrature.
//!
//! With `s = S(v)` the Sumudu transform is `(1/s) ∫ e^{-S(t)/s} f(t) d_F^α t`
//! and the Laplace transform `∫ e^{-s S(t)} f(t) d_F^α t`. Both are computed
//! in `u = S(t)`, where they are the classical transforms of `f̃(u)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::descriptor::FunctionDescriptor;
use crate::error::{invalid, Error, Result};
use crate::expr::{GenPoly, TransformExpr};
use crate::quad;
use crate::special::{gamma_fn, MLSign};
use crate::staircase::Staircase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Sumudu,
    Laplace,
}

/// Open interval of `s` on which a transform formula holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub lower: f64,
    pub upper: f64,
}

impl Validity {
    pub fn all() -> Self {
        Self {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }

    pub fn contains(&self, s: f64) -> bool {
        s > self.lower && s < self.upper
    }

    fn intersect(self, other: Self) -> Self {
        Self {
            lower: self.lower.max(other.lower),
            upper: self.upper.min(other.upper),
        }
    }
}

/// A rule-table transform with the region where it is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTransform {
    pub expr: TransformExpr,
    pub validity: Validity,
}

fn rational(num: Vec<(f64, f64)>, den: Vec<(f64, f64)>) -> TransformExpr {
    TransformExpr::new(GenPoly::from_terms(num), GenPoly::from_terms(den)).expect("non-zero denominator")
}

fn sumudu_atom(d: &FunctionDescriptor) -> (TransformExpr, Validity) {
    use FunctionDescriptor as FD;
    let all = Validity::all();
    match *d {
        FD::Const(c) => (TransformExpr::constant(c), all),
        FD::Power { p, c } => (TransformExpr::monomial(c * gamma_fn(p + 1.0), p), all),
        FD::Exp { a, c } => {
            let v = if a == 0.0 {
                all
            } else {
                Validity {
                    lower: 0.0,
                    upper: 1.0 / a.abs(),
                }
            };
            (rational(vec![(c, 0.0)], vec![(1.0, 0.0), (-a, 1.0)]), v)
        }
        FD::Sin { a, c } => (rational(vec![(c * a, 1.0)], vec![(1.0, 0.0), (a * a, 2.0)]), all),
        FD::Cos { a, c } => (rational(vec![(c, 0.0)], vec![(1.0, 0.0), (a * a, 2.0)]), all),
        FD::ML { spec, c } => {
            let v = match spec.sign {
                MLSign::Minus => all,
                MLSign::Plus => Validity {
                    lower: 0.0,
                    upper: spec.scale.powf(-1.0 / spec.beta),
                },
            };
            (rational(vec![(c, 0.0)], vec![(1.0, 0.0), (spec.rate(), spec.beta)]), v)
        }
        FD::Sum(_) => unreachable!("atoms only"),
    }
}

/// Sumudu transform by the rule table.
pub fn sumudu_rule(d: &FunctionDescriptor) -> RuleTransform {
    let mut expr = TransformExpr::zero();
    let mut validity = Validity::all();
    for atom in d.atoms() {
        let (e, v) = sumudu_atom(atom);
        expr = expr.add(&e);
        validity = validity.intersect(v);
    }
    RuleTransform { expr, validity }
}

/// Laplace transform from the Sumudu rule via `L[f](s) = (1/s) Su[f](1/s)`.
pub fn laplace_rule(d: &FunctionDescriptor) -> RuleTransform {
    let su = sumudu_rule(d);
    let expr = su.expr.substitute_reciprocal().shift(-1.0);
    let validity = Validity {
        lower: if su.validity.upper.is_finite() {
            1.0 / su.validity.upper
        } else {
            0.0
        },
        upper: if su.validity.lower > 0.0 {
            1.0 / su.validity.lower
        } else {
            f64::INFINITY
        },
    };
    RuleTransform { expr, validity }
}

pub fn rule(kind: TransformKind, d: &FunctionDescriptor) -> RuleTransform {
    match kind {
        TransformKind::Sumudu => sumudu_rule(d),
        TransformKind::Laplace => laplace_rule(d),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    TrapezoidInU,
    GaussLaguerreInU,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Truncate the infinite range where the integrand drops below this.
    pub truncation_tail: f64,
    pub panels: usize,
    pub scheme: QuadratureScheme,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            truncation_tail: 1e-12,
            panels: 4096,
            scheme: QuadratureScheme::TrapezoidInU,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 16 {
            return invalid(format!("panels = {} is below the minimum of 16", self.panels));
        }
        if !(self.truncation_tail > 0.0 && self.truncation_tail <= 1e-6) {
            return invalid(format!(
                "truncation tail {} must lie in (0, 1e-6]",
                self.truncation_tail
            ));
        }
        Ok(())
    }
}

/// Exponent `m` of the graded mesh `u = U w^m` that smooths the algebraic
/// behaviour of `f̃` at the origin.
pub fn grading_for(d: &FunctionDescriptor) -> f64 {
    use FunctionDescriptor as FD;
    let mut m: f64 = 2.0;
    for atom in d.atoms() {
        match *atom {
            FD::Power { p, .. } if p.fract() != 0.0 => m = m.max(3.0 / (p + 1.0)),
            FD::ML { spec, .. } if spec.beta.fract() != 0.0 => m = m.max(2.0 / spec.beta),
            _ => {}
        }
    }
    m.min(16.0)
}

/// `∫_{x0}^∞ e^{-x} g(x) dx` with a truncation found from the envelope of `g`.
fn laguerre_type_integral<G, E>(mut g: G, env: E, x0: f64, grading: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
    E: Fn(f64) -> f64,
{
    cfg.validate()?;
    match cfg.scheme {
        QuadratureScheme::GaussLaguerreInU => {
            let (nodes, weights) = quad::gauss_laguerre(cfg.panels.min(100));
            let mut acc = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                acc += w * g(x0 + x)?;
            }
            Ok((-x0).exp() * acc)
        }
        QuadratureScheme::TrapezoidInU => {
            let weighted = |x: f64| (-x).exp() * env(x);
            let reference = [0.25, 0.5, 1.0, 2.0]
                .iter()
                .map(|&d| weighted(x0 + d))
                .filter(|v| v.is_finite())
                .fold(f64::MIN_POSITIVE, f64::max);
            let mut upper = x0 + 8.0;
            while !(weighted(upper) <= cfg.truncation_tail * reference) {
                upper = x0 + 1.5 * (upper - x0);
                if upper - x0 > 1e5 {
                    return Err(Error::NoConvergence(
                        "integral did not converge: the integrand does not decay".to_string(),
                    ));
                }
            }
            let len = upper - x0;
            let m = grading;
            let h = |w: f64| -> Result<f64> {
                if w == 0.0 {
                    return Ok(0.0);
                }
                let x = x0 + len * w.powf(m);
                Ok((-x).exp() * g(x)? * len * m * w.powf(m - 1.0))
            };
            quad::simpson(h, 0.0, 1.0, cfg.panels)
        }
    }
}

/// Sumudu transform at `s` of a function given in the staircase variable.
pub fn sumudu_numeric_u<F, E>(f: F, envelope: E, s: f64, grading: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    E: Fn(f64) -> f64,
{
    if !(s > 0.0) {
        return invalid(format!("Sumudu transform needs S(v) > 0, got {s}"));
    }
    laguerre_type_integral(|x| f(s * x), |x| envelope(s * x), 0.0, grading, cfg)
}

/// Laplace transform at `s` of a function given in the staircase variable.
pub fn laplace_numeric_u<F, E>(f: F, envelope: E, s: f64, grading: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    E: Fn(f64) -> f64,
{
    if !(s > 0.0) {
        return invalid(format!("Laplace transform needs S(v) > 0, got {s}"));
    }
    Ok(laguerre_type_integral(|x| f(x / s), |x| envelope(x / s), 0.0, grading, cfg)? / s)
}

fn check_lower_limit(st: &Staircase) -> Result<()> {
    let u0 = st.eval(0.0);
    if u0 != 0.0 {
        return invalid(format!("transforms integrate from t = 0 and need S(0) = 0, got {u0}"));
    }
    Ok(())
}

/// Sumudu transform of `d` at `v` by quadrature.
pub fn sumudu_numeric(d: &FunctionDescriptor, st: &Staircase, v: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_lower_limit(st)?;
    let s = st.eval(v);
    let validity = sumudu_rule(d).validity;
    if !validity.contains(s) {
        return Err(Error::OutsideValidity(format!(
            "S(v) = {s} is outside ({}, {})",
            validity.lower, validity.upper
        )));
    }
    sumudu_numeric_u(|u| d.eval_at_u(u), |u| d.envelope_at_u(u), s, grading_for(d), cfg)
}

/// Laplace transform of `d` at `v` by quadrature.
pub fn laplace_numeric(d: &FunctionDescriptor, st: &Staircase, v: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_lower_limit(st)?;
    let s = st.eval(v);
    let validity = laplace_rule(d).validity;
    if !validity.contains(s) {
        return Err(Error::OutsideValidity(format!(
            "S(v) = {s} is outside ({}, {})",
            validity.lower, validity.upper
        )));
    }
    laplace_numeric_u(|u| d.eval_at_u(u), |u| d.envelope_at_u(u), s, grading_for(d), cfg)
}

pub fn transform_numeric(
    kind: TransformKind,
    d: &FunctionDescriptor,
    st: &Staircase,
    v: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match kind {
        TransformKind::Sumudu => sumudu_numeric(d, st, v, cfg),
        TransformKind::Laplace => laplace_numeric(d, st, v, cfg),
    }
}

/// Sumudu transform of the F-derivative: `(Sf - f(0))/s`.
pub fn transform_of_derivative(sf: &TransformExpr, f0: f64) -> TransformExpr {
    sf.sub(&TransformExpr::constant(f0)).shift(-1.0)
}

/// Sumudu transform of `∫_0^t f d_F^α`: `s · Sf`.
pub fn transform_of_integral(sf: &TransformExpr) -> TransformExpr {
    sf.shift(1.0)
}

/// Sumudu transform of the order-β Riemann-Liouville integral: `s^β · Sf`.
pub fn transform_rl_integral(sf: &TransformExpr, beta: f64) -> Result<TransformExpr> {
    if !(beta >= 0.0) {
        return invalid(format!("integral order must be >= 0, got {beta}"));
    }
    Ok(sf.shift(beta))
}

/// Number of initial terms for derivative order `beta`: `⌈β⌉`.
pub fn derivative_terms(beta: f64) -> Result<usize> {
    if !(beta > 0.0) || !beta.is_finite() {
        return invalid(format!("derivative order must be positive, got {beta}"));
    }
    Ok(beta.ceil() as usize)
}

/// Sumudu transform of the Riemann-Liouville derivative:
/// `s^{-β} Sf - Σ_{k=1..n} s^{-k} init[k-1]`, `init[k-1] = D^{β-k} f(0)`.
pub fn transform_rl_derivative(sf: &TransformExpr, beta: f64, init_terms: &[f64]) -> Result<TransformExpr> {
    let n = derivative_terms(beta)?;
    if init_terms.len() != n {
        return invalid(format!(
            "order {beta} needs {n} initial terms, got {}",
            init_terms.len()
        ));
    }
    let mut out = sf.shift(-beta);
    for (k, &c) in init_terms.iter().enumerate() {
        out = out.sub(&TransformExpr::monomial(c, -((k + 1) as f64)));
    }
    Ok(out)
}

/// Sumudu transform of the Caputo derivative:
/// `s^{-β} Sf - Σ_{j=0..n-1} s^{-(β-j)} f^{(j)}(0)`.
pub fn transform_caputo(sf: &TransformExpr, beta: f64, derivs_at_0: &[f64]) -> Result<TransformExpr> {
    let n = derivative_terms(beta)?;
    if derivs_at_0.len() != n {
        return invalid(format!(
            "order {beta} needs {n} initial derivatives, got {}",
            derivs_at_0.len()
        ));
    }
    let mut out = sf.shift(-beta);
    for (j, &c) in derivs_at_0.iter().enumerate() {
        out = out.sub(&TransformExpr::monomial(c, -(beta - j as f64)));
    }
    Ok(out)
}

/// Sumudu transform of the wsk derivative:
/// `(N/(1-γ)) (Sf - f(0)) / (1 + (γ/(1-γ)) s)`.
pub fn transform_wsk(sf: &TransformExpr, gamma: f64, f0: f64, n_gamma: f64) -> Result<TransformExpr> {
    if !(0.0..1.0).contains(&gamma) {
        return invalid(format!("wsk order must lie in [0, 1), got {gamma}"));
    }
    let kernel = rational(
        vec![(n_gamma / (1.0 - gamma), 0.0)],
        vec![(1.0, 0.0), (gamma / (1.0 - gamma), 1.0)],
    );
    Ok(sf.sub(&TransformExpr::constant(f0)).mul(&kernel))
}

/// `(f * g)(u) = ∫_0^u f̃(u - w) g̃(w) dw`.
pub fn convolution_at_u(f: &FunctionDescriptor, g: &FunctionDescriptor, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return invalid(format!("convolution needs u >= 0, got {u}"));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let integrand = |w: f64| -> Result<f64> {
        let a = f.eval_at_u((u - w).max(0.0))?;
        let b = g.eval_at_u(w)?;
        let v = a * b;
        Ok(if v.is_finite() { v } else { 0.0 })
    };
    let mid = 0.5 * u;
    Ok(quad::adaptive(integrand, 0.0, mid, 1e-15, 1e-12)? + quad::adaptive(integrand, mid, u, 1e-15, 1e-12)?)
}

/// Fractal convolution `(f * g)(t)` evaluated in `u = S(t)`.
pub fn convolution_numeric(f: &FunctionDescriptor, g: &FunctionDescriptor, st: &Staircase, t: f64) -> Result<f64> {
    convolution_at_u(f, g, st.eval(t))
}

/// Inverse Sumudu transform for the rule-table shapes and their partial
/// fractions. The answer is checked by transforming it back.
pub fn inverse_sumudu_rule(e: &TransformExpr) -> Result<FunctionDescriptor> {
    let e = e.simplify();
    if e.is_zero() {
        return Ok(FunctionDescriptor::Const(0.0));
    }
    let d = invert_shape(&e)?;
    let back = sumudu_rule(&d).expr;
    let probe = [0.13, 0.37, 0.61, 0.89, 1.7];
    let scale = probe
        .iter()
        .filter_map(|&s| e.eval(s).ok())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    for &s in &probe {
        let (Ok(want), Ok(got)) = (e.eval(s), back.eval(s)) else {
            continue;
        };
        if (want - got).abs() > 1e-9 * scale.max(want.abs()) {
            return Err(Error::Unrecognized(format!("{e} (round trip differs at s = {s})")));
        }
    }
    Ok(d)
}

fn unrecognized<T>(e: &TransformExpr, why: &str) -> Result<T> {
    Err(Error::Unrecognized(format!("{e}: {why}")))
}

fn monomial_atom(c: f64, p: f64) -> Result<FunctionDescriptor> {
    if p.abs() <= 1e-12 {
        return Ok(FunctionDescriptor::Const(c));
    }
    FunctionDescriptor::power(p, c / gamma_fn(p + 1.0))
}

fn invert_shape(e: &TransformExpr) -> Result<FunctionDescriptor> {
    let num = e.numerator();
    let den = e.denominator();
    let mut parts = Vec::new();
    if den.terms() == [(1.0, 0.0)] {
        for &(c, p) in num.terms() {
            if p <= -1.0 {
                return unrecognized(e, "power of s at or below -1");
            }
            parts.push(monomial_atom(c, p)?);
        }
        return FunctionDescriptor::sum(parts);
    }
    let exps: Vec<f64> = num.terms().iter().chain(den.terms()).map(|t| t.1).collect();
    if exps.iter().any(|&x| x < 0.0) {
        return unrecognized(e, "negative powers of s next to a denominator");
    }
    let Some(g) = lattice_step(&exps) else {
        return unrecognized(e, "exponents do not share a common step");
    };
    let to_poly = |p: &GenPoly| -> Vec<f64> {
        let deg = (p.max_exp().unwrap_or(0.0) / g).round() as usize;
        let mut c = vec![0.0; deg + 1];
        for &(coef, x) in p.terms() {
            c[(x / g).round() as usize] += coef;
        }
        c
    };
    let n = to_poly(num);
    let dpoly = to_poly(den);
    let (q, r) = poly_divmod(&n, &dpoly);
    for (k, &c) in q.iter().enumerate() {
        if c != 0.0 && c.abs() > 1e-13 * q.iter().fold(0.0_f64, |m, v| m.max(v.abs())) {
            parts.push(monomial_atom(c, g * k as f64)?);
        }
    }
    if r.iter().any(|&c| c != 0.0) {
        parts.extend(partial_fractions(e, &r, &dpoly, g)?);
    }
    if parts.is_empty() {
        return Ok(FunctionDescriptor::Const(0.0));
    }
    FunctionDescriptor::sum(parts)
}

/// Largest `g` with every exponent an integer multiple of `g`.
fn lattice_step(exps: &[f64]) -> Option<f64> {
    let mut g = 0.0_f64;
    for &x in exps.iter().filter(|x| **x > 1e-12) {
        g = if g == 0.0 { x } else { real_gcd(g, x) };
    }
    if g <= 1e-6 {
        return None;
    }
    let ok = exps.iter().all(|&x| {
        let k = x / g;
        (k - k.round()).abs() < 1e-9 * k.max(1.0) && k.round() <= 64.0
    });
    ok.then_some(g)
}

fn real_gcd(mut a: f64, mut b: f64) -> f64 {
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    for _ in 0..64 {
        if b <= 1e-9 * a {
            return a;
        }
        let r = a - (a / b).floor() * b;
        // remainders within rounding of b are zero remainders
        let r = if (b - r).abs() <= 1e-9 * a { 0.0 } else { r };
        a = b;
        b = r;
    }
    a
}

/// Quotient and remainder of coefficient vectors (index = degree).
fn poly_divmod(n: &[f64], d: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dd = d.len() - 1;
    let lead = d[dd];
    let mut r = n.to_vec();
    if n.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![0.0; n.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / lead;
        q[k] = c;
        for (j, &dj) in d.iter().enumerate() {
            r[k + j] -= c * dj;
        }
        r[k + dd] = 0.0;
    }
    r.truncate(dd);
    (q, r)
}

fn horner(c: &[f64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

fn horner_derivative(c: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &a) in c.iter().enumerate().skip(1).rev() {
        acc = acc * x + a * k as f64;
    }
    acc
}

/// Roots of a real polynomial by Aberth iteration.
fn poly_roots(c: &[f64]) -> Option<Vec<Complex64>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let monic: Vec<f64> = c.iter().map(|a| a / lead).collect();
    let radius = 1.0 + monic[..deg].iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            Complex64::from_polar(
                0.5 * radius,
                2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let p = horner(&monic, z[i]);
            let dp = horner_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut rep = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    rep += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * rep);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            return Some(z);
        }
    }
    let ok = z
        .iter()
        .all(|&r| horner(&monic, r).norm() < 1e-10 * (1.0 + r.norm()).powi(deg as i32));
    ok.then_some(z)
}

fn partial_fractions(e: &TransformExpr, r: &[f64], d: &[f64], g: f64) -> Result<Vec<FunctionDescriptor>> {
    let Some(mut roots) = poly_roots(d) else {
        return unrecognized(e, "denominator roots did not converge");
    };
    let scale = roots.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    for z in roots.iter_mut() {
        if z.im.abs() <= 1e-10 * scale {
            z.im = 0.0;
        }
        if z.re.abs() <= 1e-10 * scale {
            z.re = 0.0;
        }
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= 1e-6 * scale {
                return unrecognized(e, "repeated denominator factor");
            }
        }
    }
    let is_one = |x: f64| (x - 1.0).abs() <= 1e-12;
    let is_two = |x: f64| (x - 2.0).abs() <= 1e-12;
    let mut out = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = roots[i];
        let residue = horner(r, z) / horner_derivative(d, z);
        if z.im == 0.0 {
            // A/(x - z) = C/(1 + b x), C = -A/z, b = -1/z
            let c = -residue.re / z.re;
            let b = -1.0 / z.re;
            if is_one(g) {
                out.push(FunctionDescriptor::exp(-b, c));
            } else if is_two(g) && b > 0.0 {
                out.push(FunctionDescriptor::cos(b.sqrt(), c));
            } else {
                out.push(FunctionDescriptor::ml(g, b, c)?);
            }
            continue;
        }
        let Some(j) = (0..roots.len()).find(|&j| !used[j] && (roots[j] - z.conj()).norm() <= 1e-8 * scale) else {
            return unrecognized(e, "unpaired complex root");
        };
        used[j] = true;
        if z.re != 0.0 {
            return unrecognized(e, "damped oscillation is outside the descriptor family");
        }
        // A/(x - iμ) + conj = (2 Re A x - 2 μ Im A)/(x² + μ²)
        let mu = z.im.abs();
        let a_lin = 2.0 * residue.re;
        let a_const = -2.0 * z.im * residue.im;
        let two_g = 2.0 * g;
        if a_const != 0.0 {
            let c = a_const / (mu * mu);
            let b = 1.0 / (mu * mu);
            if is_one(two_g) {
                out.push(FunctionDescriptor::exp(-b, c));
            } else if is_two(two_g) {
                out.push(FunctionDescriptor::cos(1.0 / mu, c));
            } else {
                out.push(FunctionDescriptor::ml(two_g, b, c)?);
            }
        }
        if a_lin.abs() > 1e-14 * a_const.abs() {
            if !is_one(g) {
                return unrecognized(e, "odd term over a quadratic factor");
            }
            // a_lin x/(x² + μ²) = C · a s/(1 + a² s²) with a = 1/μ
            out.push(FunctionDescriptor::sin(1.0 / mu, a_lin / mu));
        }
    }
    Ok(out)
}
