//! Gamma, Beta and Mittag-Leffler functions, plus the fractal exponential and
//! trigonometric functions `e^{aS(t)}`, `sin(aS(t))`, `cos(aS(t))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{invalid, Error, Result};
use crate::quad;
use crate::staircase::Staircase;

const SERIES_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

/// Classical Gamma function.
pub fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}

/// `1/Γ(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 170.0 {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// `Γ_F^α(x) = ∫_0^∞ e^{-S(t)} S(t)^{S(x)-1} d_F^α t`, computed in `u = S(t)`.
pub fn fractal_gamma(st: &Staircase, x: f64) -> Result<f64> {
    let z = st.eval(x);
    gamma_integral(z)
}

/// `∫_0^∞ e^{-u} u^{z-1} du` by quadrature.
pub fn gamma_integral(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return invalid(format!("gamma integral diverges for S(x) = {z}"));
    }
    // ∫_0^1 u^{z-1} e^{-u} du with u = w^{1/z} is (1/z) ∫_0^1 e^{-w^{1/z}} dw
    let head = quad::adaptive(|w| Ok((-w.powf(1.0 / z)).exp()), 0.0, 1.0, 1e-300, 1e-13)? / z;
    let integrand = |u: f64| (-u + (z - 1.0) * u.ln()).exp();
    let mut upper = (2.0 * z).max(8.0);
    while integrand(upper) > 1e-14 * head.max(1e-300) && upper < 1e4 {
        upper *= 1.5;
    }
    let peak = (z - 1.0).max(1.0).min(upper);
    let mut tail = quad::adaptive(|u| Ok(integrand(u)), 1.0, peak, 1e-300, 1e-13)?;
    tail += quad::adaptive(|u| Ok(integrand(u)), peak, upper, 1e-300, 1e-13)?;
    Ok(head + tail)
}

/// Beta function `Γ(m1)Γ(m2)/Γ(m1+m2)`.
pub fn fractal_beta(m1: f64, m2: f64) -> Result<f64> {
    if !(m1 > 0.0 && m2 > 0.0) {
        return invalid(format!("beta needs positive arguments, got ({m1}, {m2})"));
    }
    if m1 + m2 < 170.0 {
        Ok(gamma(m1) * gamma(m2) / gamma(m1 + m2))
    } else {
        Ok((ln_gamma(m1) + ln_gamma(m2) - ln_gamma(m1 + m2)).exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MLSign {
    Plus,
    Minus,
}

impl MLSign {
    pub fn value(self) -> f64 {
        match self {
            MLSign::Plus => 1.0,
            MLSign::Minus => -1.0,
        }
    }
}

/// One-parameter Mittag-Leffler function `E_β(sign · scale · u^β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLSpec {
    pub beta: f64,
    pub scale: f64,
    pub sign: MLSign,
}

impl MLSpec {
    /// Normalizes so that `scale >= 0`; a zero scale carries the minus sign.
    pub fn new(beta: f64, scale: f64, sign: MLSign) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return invalid(format!("Mittag-Leffler order must be positive, got {beta}"));
        }
        if !scale.is_finite() {
            return invalid(format!("Mittag-Leffler scale must be finite, got {scale}"));
        }
        let signed = sign.value() * scale;
        let sign = if signed > 0.0 { MLSign::Plus } else { MLSign::Minus };
        Ok(Self {
            beta,
            scale: signed.abs(),
            sign,
        })
    }

    /// `E_β(-a u^β)`.
    pub fn decaying(beta: f64, a: f64) -> Result<Self> {
        Self::new(beta, a, MLSign::Minus)
    }

    /// The `a` in `E_β(-a u^β)`.
    pub fn rate(&self) -> f64 {
        -self.coefficient()
    }

    /// The signed coefficient `σ·scale` multiplying `u^β`.
    pub fn coefficient(&self) -> f64 {
        self.sign.value() * self.scale
    }
}

/// Evaluates `E_β(σ a u^β)` for `u >= 0`.
pub fn mittag_leffler(spec: &MLSpec, u: f64) -> Result<f64> {
    ml_derivative(spec, u, 0)
}

/// First derivative of `u ↦ E_β(σ a u^β)`.
pub fn mittag_leffler_derivative(spec: &MLSpec, u: f64) -> Result<f64> {
    ml_derivative(spec, u, 1)
}

/// `k`-th derivative of `u ↦ E_β(c u^β)`, `c = σ·scale`.
pub fn ml_derivative(spec: &MLSpec, u: f64, k: u32) -> Result<f64> {
    if !(u >= 0.0) {
        return invalid(format!("Mittag-Leffler argument must be >= 0, got {u}"));
    }
    let beta = spec.beta;
    let c = spec.coefficient();
    if c == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    if u == 0.0 {
        return Ok(ml_derivative_at_zero(beta, c, k));
    }
    let z = c * u.powf(beta);
    if beta == 1.0 {
        return Ok(c.powi(k as i32) * z.exp());
    }
    if beta == 2.0 {
        return Ok(cos_like_derivative(c, u, k));
    }
    let t = z.abs().powf(1.0 / beta);
    if beta < 1.0 && z < 0.0 && t > 2.0 {
        return ml_decay_integral(beta, c.abs(), u, k);
    }
    if beta < 1.0 && z > 0.0 && t > 40.0 {
        // E_β(z) ≈ e^{z^{1/β}}/β, the algebraic remainder is below rounding
        return Ok(c.powf(k as f64 / beta) * t.exp() / beta);
    }
    ml_series(beta, c, u, k)
}

fn ml_derivative_at_zero(beta: f64, c: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    let mut value = 0.0;
    let mut j = 1u32;
    loop {
        let e = beta * j as f64;
        if e > kf + 1e-12 {
            break;
        }
        let coef = c.powi(j as i32) * rgamma(e + 1.0 - kf);
        if (e - kf).abs() <= 1e-12 {
            value += coef;
        } else if coef != 0.0 {
            return coef.signum() * f64::INFINITY;
        }
        j += 1;
    }
    value
}

fn cos_like_derivative(c: f64, u: f64, k: u32) -> f64 {
    // E_2(c u²) is cosh(√c u) for c > 0 and cos(√|c| u) for c < 0
    let w = c.abs().sqrt();
    let x = w * u;
    let scale = w.powi(k as i32);
    if c > 0.0 {
        scale * if k.is_multiple_of(2) { x.cosh() } else { x.sinh() }
    } else {
        let phase = k as f64 * PI / 2.0;
        scale * (x + phase).cos()
    }
}

fn ml_series(beta: f64, c: f64, u: f64, k: u32) -> Result<f64> {
    let kf = k as f64;
    let lnu = u.ln();
    let lnc = c.abs().ln();
    let peak = (c.abs().powf(1.0 / beta) * u + kf) / beta;
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    let mut small_run = 0;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        let arg = beta * jf + 1.0 - kf;
        let sign = if c < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
        let term = if arg > 0.0 {
            sign * (jf * lnc + (beta * jf - kf) * lnu - ln_gamma(arg)).exp()
        } else {
            sign * (jf * lnc + (beta * jf - kf) * lnu).exp() * rgamma(arg)
        };
        sum += term;
        largest = largest.max(term.abs());
        if jf > peak && term.abs() <= SERIES_TOL * sum.abs().max(1e-300) {
            small_run += 1;
            if small_run >= 2 {
                if largest > 1e8 * sum.abs().max(1e-300) {
                    return Err(Error::NoConvergence(format!(
                        "Mittag-Leffler series for β = {beta} lost precision to cancellation"
                    )));
                }
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        if !sum.is_finite() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence(format!(
        "Mittag-Leffler series for β = {beta} did not settle in {MAX_TERMS} terms"
    )))
}

/// `d^k/du^k E_β(-a u^β)` for `0 < β < 1` from the Laplace-type integral
/// `E_β(-t^β) = ∫_0^∞ e^{-rt} K_β(r) dr`, split at `r = 1`.
fn ml_decay_integral(beta: f64, a: f64, u: f64, k: u32) -> Result<f64> {
    let lam = a.powf(1.0 / beta);
    let t = lam * u;
    let cb = (beta * PI).cos();
    let inv = 1.0 / beta;
    let kf = k as f64;
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    let near = quad::adaptive(
        |w: f64| {
            let r = w.powf(inv);
            Ok(r.powf(kf) * (-t * r).exp() / (w * w + 2.0 * w * cb + 1.0))
        },
        0.0,
        1.0,
        1e-300,
        1e-14,
    )?;
    let far = quad::adaptive(
        |y: f64| {
            if y == 0.0 {
                return Ok(0.0);
            }
            let r = y.powf(-inv);
            Ok(r.powf(kf) * (-t * r).exp() / (1.0 + 2.0 * y * cb + y * y))
        },
        0.0,
        1.0,
        1e-300,
        1e-14,
    )?;
    Ok(sign * lam.powf(kf) * (beta * PI).sin() / (PI * beta) * (near + far))
}

pub fn fractal_exp(st: &Staircase, a: f64, t: f64) -> f64 {
    (a * st.eval(t)).exp()
}

pub fn fractal_sin(st: &Staircase, a: f64, t: f64) -> f64 {
    (a * st.eval(t)).sin()
}

pub fn fractal_cos(st: &Staircase, a: f64, t: f64) -> f64 {
    (a * st.eval(t)).cos()
}
