//! Fractal derivative and integral operators, evaluated in `u = S(t)`.
//!
//! Kernel exponents are the classical ones after the substitution: order-β
//! Riemann-Liouville and Caputo operators use `(U - u)^{n-β-1}/Γ(n-β)` with
//! `n = ⌈β⌉`, and the N-derivative uses the same kernel with
//! `n = ⌊γ⌋ + 1`.

use crate::descriptor::FunctionDescriptor;
use crate::error::{invalid, Error, Result};
use crate::quad::{self, pow1pm1};
use crate::special::{fractal_beta, gamma_fn};
use crate::staircase::Staircase;
use crate::transforms::grading_for;

/// A function of the staircase variable.
pub trait UFunction {
    fn value(&self, u: f64) -> Result<f64>;

    /// `k`-th derivative in `u`.
    fn derivative(&self, u: f64, k: u32) -> Result<f64>;

    fn as_descriptor(&self) -> Option<&FunctionDescriptor> {
        None
    }
}

impl UFunction for FunctionDescriptor {
    fn value(&self, u: f64) -> Result<f64> {
        self.eval_at_u(u)
    }

    fn derivative(&self, u: f64, k: u32) -> Result<f64> {
        self.derivative_at_u(u, k)
    }

    fn as_descriptor(&self) -> Option<&FunctionDescriptor> {
        Some(self)
    }
}

/// Samples `f(tᵢ)` on a grid that is uniform in `u = S(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    u: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    /// Wraps samples; the grid must be increasing and uniform in `u`.
    pub fn new(st: &Staircase, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 3 {
            return invalid("sampled function needs at least 3 matching grid points and values");
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("sample grid must be strictly increasing");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("sample values must be finite");
        }
        let u: Vec<f64> = grid.iter().map(|&t| st.eval(t)).collect();
        let h = (u[u.len() - 1] - u[0]) / (u.len() - 1) as f64;
        if !(h > 0.0) || u.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
            return invalid("sample grid must be uniform in S(t)");
        }
        Ok(Self { grid, u, values })
    }

    /// Samples `d` at `n + 1` points with `S(tᵢ) = i · S(x_max)/n`.
    pub fn from_descriptor(d: &FunctionDescriptor, st: &Staircase, x_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return invalid("need at least 2 intervals");
        }
        let top = st.eval(x_max);
        let base = st.eval(0.0);
        let mut grid = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let u = base + (top - base) * i as f64 / n as f64;
            grid.push(if i == n { x_max } else { st.inverse(u)? });
            values.push(d.eval_at_u(u)?);
        }
        Self::new(st, grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn step(&self) -> f64 {
        (self.u[self.u.len() - 1] - self.u[0]) / (self.u.len() - 1) as f64
    }

    fn locate(&self, u: f64) -> Result<(usize, f64)> {
        let h = self.step();
        let lo = self.u[0];
        let hi = self.u[self.u.len() - 1];
        if u < lo - 1e-12 * h || u > hi + 1e-12 * h {
            return Err(Error::OutOfRange(u));
        }
        let x = ((u - lo) / h).clamp(0.0, (self.u.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.u.len() - 2);
        Ok((i, x - i as f64))
    }
}

impl UFunction for SampledFunction {
    fn value(&self, u: f64) -> Result<f64> {
        let (i, w) = self.locate(u)?;
        Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }

    fn derivative(&self, u: f64, k: u32) -> Result<f64> {
        let h = self.step();
        let (i, w) = self.locate(u)?;
        let j = if w > 0.5 { i + 1 } else { i };
        let n = self.values.len();
        let v = &self.values;
        match k {
            0 => self.value(u),
            1 => Ok(if j == 0 {
                (v[1] - v[0]) / h
            } else if j == n - 1 {
                (v[n - 1] - v[n - 2]) / h
            } else {
                (v[j + 1] - v[j - 1]) / (2.0 * h)
            }),
            2 => {
                let c = j.clamp(1, n - 2);
                Ok((v[c + 1] - 2.0 * v[c] + v[c - 1]) / (h * h))
            }
            _ => invalid("sampled functions support derivatives up to order 2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    /// Uniform panels on `[0, S(x)]` for the product-integration rules.
    pub panels: usize,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self { panels: 2000 }
    }
}

impl OperatorConfig {
    fn validate(&self) -> Result<()> {
        if self.panels < 16 {
            return invalid(format!("panels = {} is below the minimum of 16", self.panels));
        }
        Ok(())
    }
}

fn upper_u(st: &Staircase, x: f64) -> Result<f64> {
    let u0 = st.eval(0.0);
    if u0 != 0.0 {
        return invalid(format!("operators integrate from t = 0 and need S(0) = 0, got {u0}"));
    }
    let u = st.eval(x);
    if !(u >= 0.0) {
        return Err(Error::OutOfRange(u));
    }
    Ok(u)
}

/// `D_F^α f(t) = df̃/du` at `u = S(t)`.
pub fn local_fderivative(f: &dyn UFunction, st: &Staircase, t: f64) -> Result<f64> {
    f.derivative(st.eval(t), 1)
}

/// `∫_a^b f d_F^α t = ∫_{S(a)}^{S(b)} f̃(u) du`.
pub fn fractal_integral(f: &dyn UFunction, st: &Staircase, a: f64, b: f64, cfg: &OperatorConfig) -> Result<f64> {
    cfg.validate()?;
    let (ua, ub) = (st.eval(a), st.eval(b));
    if ua == ub {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if ua < ub { (ua, ub, 1.0) } else { (ub, ua, -1.0) };
    // grade the mesh towards an algebraic singularity at u = 0
    let m = match f.as_descriptor() {
        Some(d) if lo == 0.0 => grading_for(d),
        _ => 1.0,
    };
    let len = hi - lo;
    let g = |w: f64| -> Result<f64> {
        if m == 1.0 {
            return f.value(lo + len * w);
        }
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(f.value(lo + len * w.powf(m))? * len * m * w.powf(m - 1.0))
    };
    let scale = if m == 1.0 { len } else { 1.0 };
    Ok(sign * scale * quad::simpson(g, 0.0, 1.0, cfg.panels)?)
}

fn samples(f: &dyn UFunction, top: f64, n: usize, k: u32) -> Result<Vec<f64>> {
    let h = top / n as f64;
    (0..=n)
        .map(|j| {
            let u = if j == n { top } else { h * j as f64 };
            let v = f.derivative(u, k)?;
            if v.is_finite() || j > 0 {
                return Ok(v);
            }
            // integrable singularity at the origin: use the mean over [0, h/2]
            // implied by the value at h/2
            f.derivative(0.5 * h, k)
        })
        .collect()
}

/// Product-trapezoid weights `a_j` with
/// `∫_0^U (U-u)^{β-1} f(u) du ≈ h^β/(β(β+1)) Σ a_j f_j`.
fn fractional_trapezoid_weights(beta: f64, n: usize) -> Vec<f64> {
    let nf = n as f64;
    let b1 = beta + 1.0;
    let mut a = vec![0.0; n + 1];
    // (n-1)^{β+1} - (n-1-β) n^β, rearranged to avoid cancellation
    a[0] = nf.powf(beta) * ((nf - 1.0) * pow1pm1(-1.0 / nf, beta) + beta);
    for (j, w) in a.iter_mut().enumerate().take(n).skip(1) {
        // second difference of m^{β+1} at m = n - j
        let m = (n - j) as f64;
        *w = m.powf(b1) * (pow1pm1(1.0 / m, b1) + pow1pm1(-1.0 / m, b1));
    }
    a[n] = 1.0;
    a
}

/// `(1/Γ(β)) ∫_0^U (U-u)^{β-1} g_j` by product trapezoid on samples `g`.
fn rl_integral_samples(g: &[f64], top: f64, beta: f64) -> f64 {
    let n = g.len() - 1;
    let h = top / n as f64;
    let a = fractional_trapezoid_weights(beta, n);
    let sum: f64 = a.iter().zip(g).map(|(w, v)| w * v).sum();
    h.powf(beta) / gamma_fn(beta + 2.0) * sum
}

/// Riemann-Liouville fractal integral of order `beta`:
/// `(1/Γ(β)) ∫_0^{S(x)} (S(x) - u)^{β-1} f̃(u) du`.
pub fn rl_integral(f: &dyn UFunction, st: &Staircase, beta: f64, x: f64, cfg: &OperatorConfig) -> Result<f64> {
    cfg.validate()?;
    if !(beta > 0.0) {
        return invalid(format!("integral order must be positive, got {beta}"));
    }
    let top = upper_u(st, x)?;
    rl_integral_u(f, beta, top, cfg)
}

fn rl_integral_u(f: &dyn UFunction, beta: f64, top: f64, cfg: &OperatorConfig) -> Result<f64> {
    if top == 0.0 {
        return Ok(0.0);
    }
    let g = samples(f, top, cfg.panels, 0)?;
    Ok(rl_integral_samples(&g, top, beta))
}

/// `n`-th derivative of `U ↦ h(U)` by a central difference of step `δ`.
fn central_difference<H: Fn(f64) -> Result<f64>>(h: H, top: f64, n: u32, delta: f64) -> Result<f64> {
    match n {
        1 => Ok(
            (-h(top + 2.0 * delta)? + 8.0 * h(top + delta)? - 8.0 * h(top - delta)? + h(top - 2.0 * delta)?)
                / (12.0 * delta),
        ),
        2 => Ok(
            (-h(top + 2.0 * delta)? + 16.0 * h(top + delta)? - 30.0 * h(top)? + 16.0 * h(top - delta)?
                - h(top - 2.0 * delta)?)
                / (12.0 * delta * delta),
        ),
        _ => {
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 0..=n {
                let offset = (n as f64 / 2.0 - k as f64) * delta;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * h(top + offset)?;
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            Ok(acc / delta.powi(n as i32))
        }
    }
}

/// Riemann-Liouville fractal derivative: `(d/du)^n I^{n-β} f̃` at `S(x)`.
pub fn rl_derivative(f: &dyn UFunction, st: &Staircase, beta: f64, x: f64, cfg: &OperatorConfig) -> Result<f64> {
    cfg.validate()?;
    let n = order_ceil(beta)?;
    let top = upper_u(st, x)?;
    if beta == n as f64 {
        return f.derivative(top, n);
    }
    if top == 0.0 {
        return invalid("the Riemann-Liouville derivative needs S(x) > 0");
    }
    let delta = top / 64.0;
    central_difference(|u| rl_integral_u(f, n as f64 - beta, u, cfg), top, n, delta)
}

fn order_ceil(beta: f64) -> Result<u32> {
    if !(beta > 0.0) || !beta.is_finite() {
        return invalid(format!("derivative order must be positive, got {beta}"));
    }
    Ok(beta.ceil() as u32)
}

/// L1 product integration of `(1/Γ(1-θ)) ∫_0^U (U-u)^{-θ} g'(u) du` from
/// samples of `g`, `0 <= θ < 1`.
fn l1_samples(g: &[f64], top: f64, theta: f64) -> f64 {
    let n = g.len() - 1;
    let h = top / n as f64;
    let e = 1.0 - theta;
    let mut acc = 0.0;
    for j in 0..n {
        let k = (n - 1 - j) as f64;
        let b = if k == 0.0 { 1.0 } else { k.powf(e) * pow1pm1(1.0 / k, e) };
        acc += b * (g[j + 1] - g[j]);
    }
    h.powf(-theta) / gamma_fn(2.0 - theta) * acc
}

fn caputo_like(f: &dyn UFunction, order: f64, n: u32, top: f64, cfg: &OperatorConfig) -> Result<f64> {
    if top == 0.0 {
        return Ok(0.0);
    }
    let g = samples(f, top, cfg.panels, n - 1)?;
    Ok(l1_samples(&g, top, order - (n - 1) as f64))
}

/// Caputo fractal derivative:
/// `(1/Γ(n-β)) ∫_0^{S(x)} (S(x)-u)^{n-β-1} f̃^{(n)}(u) du`, `n = ⌈β⌉`.
pub fn caputo_derivative(f: &dyn UFunction, st: &Staircase, beta: f64, x: f64, cfg: &OperatorConfig) -> Result<f64> {
    cfg.validate()?;
    let n = order_ceil(beta)?;
    let top = upper_u(st, x)?;
    if beta == n as f64 {
        return f.derivative(top, n);
    }
    caputo_like(f, beta, n, top, cfg)
}

/// `n = ⌊γ⌋ + 1`, so that `γ ∈ [n-1, n)`.
pub fn n_order(gamma: f64) -> Result<u32> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return invalid(format!("N-derivative order must be >= 0, got {gamma}"));
    }
    Ok(gamma.floor() as u32 + 1)
}

/// The N-derivative of order `γ`, with kernel exponent `n - γ - 1`.
///
/// Power terms `S^p` with `p <= n - 1` contribute 0, following the power
/// rule's case split.
pub fn n_derivative(f: &dyn UFunction, st: &Staircase, gamma: f64, x: f64, cfg: &OperatorConfig) -> Result<f64> {
    cfg.validate()?;
    let n = n_order(gamma)?;
    let top = upper_u(st, x)?;
    if let Some(d) = f.as_descriptor() {
        let mut acc = 0.0;
        for atom in d.atoms() {
            acc += match *atom {
                FunctionDescriptor::Power { p, .. } if p <= (n - 1) as f64 => 0.0,
                _ => caputo_like(atom, gamma, n, top, cfg)?,
            };
        }
        return Ok(acc);
    }
    caputo_like(f, gamma, n, top, cfg)
}

/// Power rule `N^γ S^p = c · S^{e}`; returns `(c, e)`, or `(0, 0)` when
/// `p <= n - 1`.
pub fn n_derivative_power_rule(p: f64, gamma: f64) -> Result<(f64, f64)> {
    let n = n_order(gamma)? as f64;
    if !(p > n - 1.0) {
        return Ok((0.0, 0.0));
    }
    // Γ(p+1)/(Γ(p-n+1) Γ(n-γ)) · B(p-n+1, n-γ) = Γ(p+1)/Γ(p-γ+1)
    let beta = fractal_beta(p - n + 1.0, n - gamma)?;
    let coef = gamma_fn(p + 1.0) / (gamma_fn(p - n + 1.0) * gamma_fn(n - gamma)) * beta;
    Ok((coef, p - gamma))
}

/// wsk derivative:
/// `(N/(1-γ)) ∫_0^{S(x)} e^{-γ(S(x)-u)/(1-γ)} f̃'(u) du`.
///
/// `f̃` is taken piecewise linear on the panels and the exponential kernel
/// is integrated exactly on each.
pub fn wsk_derivative(
    f: &dyn UFunction,
    st: &Staircase,
    gamma: f64,
    n_gamma: f64,
    x: f64,
    cfg: &OperatorConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&gamma) {
        return invalid(format!("wsk order must lie in [0, 1), got {gamma}"));
    }
    let top = upper_u(st, x)?;
    if top == 0.0 {
        return Ok(0.0);
    }
    let g = samples(f, top, cfg.panels, 0)?;
    Ok(n_gamma / (1.0 - gamma) * wsk_samples(&g, top, gamma / (1.0 - gamma)))
}

/// `∫_0^U e^{-κ(U-u)} g'(u) du` for piecewise-linear `g`.
pub(crate) fn wsk_samples(g: &[f64], top: f64, kappa: f64) -> f64 {
    let n = g.len() - 1;
    let h = top / n as f64;
    let mut acc = 0.0;
    for j in 0..n {
        // ∫ over panel j of e^{-κ(U-u)} du, divided by h
        let far = (n - 1 - j) as f64 * h;
        let w = if kappa == 0.0 {
            1.0
        } else {
            (-kappa * far).exp() * (-(-kappa * h).exp_m1()) / (kappa * h)
        };
        acc += w * (g[j + 1] - g[j]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::parse_expr;

    fn d(text: &str) -> FunctionDescriptor {
        parse_expr(text).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn local_derivative_and_integral() {
        let st = Staircase::cantor().unwrap();
        let cfg = OperatorConfig::default();
        assert_eq!(local_fderivative(&d("const 3"), &st, 0.4).unwrap(), 0.0);
        let s = st.eval(0.7);
        assert!((local_fderivative(&d("pow(2)"), &st, 0.7).unwrap() - 2.0 * s).abs() < 1e-14);
        let one = fractal_integral(&d("const 1"), &st, 0.0, 0.7, &cfg).unwrap();
        assert!((one - s).abs() < 1e-14);
        let s1 = st.eval(1.0);
        let sq = fractal_integral(&d("pow(1)"), &st, 0.0, 1.0, &cfg).unwrap();
        assert!((sq - s1 * s1 / 2.0).abs() < 1e-12);
        let line = Staircase::identity();
        let e = fractal_integral(&d("exp(-1)"), &line, 0.0, 2.0, &cfg).unwrap();
        assert!((e - (1.0 - (-2f64).exp())).abs() < 1e-8);
        let r = fractal_integral(&d("pow(-0.5)"), &line, 0.0, 4.0, &cfg).unwrap();
        assert!((r - 4.0).abs() < 1e-8, "{r}");
    }

    #[test]
    fn trapezoid_weights_sum_to_kernel_mass() {
        for &beta in &[0.3, 0.5, 1.0, 1.7] {
            let n = 50;
            let a = fractional_trapezoid_weights(beta, n);
            // integrating f = 1 gives U^β/Γ(β+1)
            let sum: f64 = a.iter().sum();
            let want = (n as f64).powf(beta) * (beta + 1.0);
            assert!(rel(sum, want) < 1e-12, "β={beta}: {sum} vs {want}");
        }
    }

    #[test]
    fn rl_integral_examples() {
        let cfg = OperatorConfig::default();
        let st = Staircase::cantor().unwrap();
        let s = st.eval(0.9);
        let c = rl_integral(&d("const 1"), &st, 0.4, 0.9, &cfg).unwrap();
        assert!(
            rel(c, s.powf(0.4) / gamma_fn(1.4)) < 1e-12,
            "{}",
            rel(c, s.powf(0.4) / gamma_fn(1.4))
        );
        let one = rl_integral(&d("exp(-1)"), &st, 1.0, 0.9, &cfg).unwrap();
        let plain = fractal_integral(&d("exp(-1)"), &st, 0.0, 0.9, &cfg).unwrap();
        assert!((one - plain).abs() < 1e-7);
        let p = rl_integral(&d("pow(1)"), &st, 0.5, 0.9, &cfg).unwrap();
        assert!(rel(p, s.powf(1.5) / gamma_fn(2.5)) < 1e-10);
    }

    #[test]
    fn rl_derivative_examples() {
        let cfg = OperatorConfig::default();
        let st = Staircase::identity();
        let c = rl_derivative(&d("2*const"), &st, 0.3, 1.5, &cfg).unwrap();
        assert!(rel(c, 2.0 * 1.5f64.powf(-0.3) / gamma_fn(0.7)) < 1e-6, "{c}");
        let near = rl_derivative(&d("pow(2)"), &st, 0.999, 1.0, &cfg).unwrap();
        assert!((near - 2.0).abs() < 1e-2);
        assert!(rl_derivative(&d("const 1"), &st, 0.5, 0.0, &cfg).is_err());
    }

    #[test]
    fn caputo_examples() {
        let cfg = OperatorConfig::default();
        let st = Staircase::cantor().unwrap();
        assert_eq!(caputo_derivative(&d("const 5"), &st, 0.6, 0.8, &cfg).unwrap(), 0.0);
        let s = st.eval(0.8);
        let p = caputo_derivative(&d("pow(1)"), &st, 0.6, 0.8, &cfg).unwrap();
        assert!(rel(p, s.powf(0.4) / gamma_fn(1.4)) < 1e-12);
        let ml = d("ml(0.6, 1.3)");
        let c = caputo_derivative(&ml, &st, 0.6, 0.8, &cfg).unwrap();
        let want = -1.3 * ml.eval(&st, 0.8).unwrap();
        assert!((c - want).abs() < 1e-3 * want.abs(), "{c} vs {want}");
        let whole = caputo_derivative(&d("exp(0.5)"), &st, 1.0, 0.8, &cfg).unwrap();
        assert!(rel(whole, 0.5 * (0.5 * s).exp()) < 1e-14);
    }

    #[test]
    fn n_derivative_examples() {
        let cfg = OperatorConfig::default();
        let st = Staircase::identity();
        assert_eq!(n_derivative(&d("const 2"), &st, 0.4, 1.0, &cfg).unwrap(), 0.0);
        let (c, e) = n_derivative_power_rule(1.0, 0.5).unwrap();
        assert!((c - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-13 && e == 0.5);
        assert_eq!(n_derivative_power_rule(2.0, 1.0).unwrap().1, 1.0);
        assert!((n_derivative_power_rule(2.0, 1.0).unwrap().0 - 2.0).abs() < 1e-14);
        assert_eq!(n_derivative_power_rule(1.0, 1.2).unwrap(), (0.0, 0.0));
        assert_eq!(n_derivative(&d("pow(0.5)"), &st, 1.2, 1.0, &cfg).unwrap(), 0.0);
        let v = n_derivative(&d("pow(2)"), &st, 1.0, 1.5, &cfg).unwrap();
        assert!((v - 3.0).abs() < 1e-10);
    }

    #[test]
    fn wsk_examples() {
        let cfg = OperatorConfig::default();
        let st = Staircase::cantor().unwrap();
        let f = d("exp(-1) + pow(1.5)");
        let x = 1.3;
        let w = wsk_derivative(&f, &st, 0.0, 1.0, x, &cfg).unwrap();
        let want = f.eval(&st, x).unwrap() - f.eval(&st, 0.0).unwrap();
        assert!((w - want).abs() < 1e-10);
        assert_eq!(wsk_derivative(&d("const 3"), &st, 0.5, 1.0, x, &cfg).unwrap(), 0.0);
        // e^{at}, γ = 1/2, N = 1: 2a (e^{ax} - e^{-x})/(a + 1)
        let line = Staircase::identity();
        let a = 0.4;
        let got = wsk_derivative(&FunctionDescriptor::exp(a, 1.0), &line, 0.5, 1.0, 2.0, &cfg).unwrap();
        let want = 2.0 * a * ((2.0 * a).exp() - (-2f64).exp()) / (a + 1.0);
        assert!(rel(got, want) < 1e-6);
        assert!(wsk_derivative(&f, &st, 1.0, 1.0, x, &cfg).is_err());
    }

    #[test]
    fn sampled_functions() {
        let st = Staircase::cantor().unwrap();
        let f = d("exp(-0.5)");
        let s = SampledFunction::from_descriptor(&f, &st, 2.0, 4000).unwrap();
        let x = st.inverse(0.6 * st.eval(2.0)).unwrap();
        let u = st.eval(x);
        assert!((s.value(u).unwrap() - f.eval_at_u(u).unwrap()).abs() < 1e-7);
        assert!((local_fderivative(&s, &st, x).unwrap() + 0.5 * (-0.5 * u).exp()).abs() < 1e-6);
        let cfg = OperatorConfig::default();
        let a = caputo_derivative(&s, &st, 0.5, x, &cfg).unwrap();
        let b = caputo_derivative(&f, &st, 0.5, x, &cfg).unwrap();
        assert!((a - b).abs() < 1e-5);
        assert!(SampledFunction::new(&st, vec![0.0, 0.1, 0.5], vec![1.0, 2.0, 3.0]).is_err());
        assert!(SampledFunction::new(&st, vec![0.0, 0.2, 0.1], vec![1.0, 2.0, 3.0]).is_err());
    }
}
