//! The integral staircase `S_F^α`, the change of variable that turns fractal
//! calculus on `F` into ordinary calculus in `u = S_F^α(t)`.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::format::sig12;
use crate::support::{FractalSupport, MassConfig};

/// Snap distance used by the digit maps at construction-cell boundaries.
const SNAP: f64 = 1e-12;

/// Monotone staircase function of a support, anchored at `origin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Staircase {
    support: FractalSupport,
    origin: f64,
    calibration: f64,
    /// Mass between the base point of the support and `origin`.
    offset: f64,
}

impl Staircase {
    /// Builds `S` anchored at `origin`. For Cantor-like supports the
    /// calibration constant is the measured mass of the base interval.
    pub fn build(support: FractalSupport, origin: f64) -> Result<Self> {
        if !origin.is_finite() {
            return invalid("staircase origin must be finite");
        }
        let calibration = match support.base() {
            None => 1.0,
            Some((a, b)) => support.mass_function(a, b, &MassConfig::default())?.value,
        };
        Self::with_calibration(support, origin, calibration)
    }

    /// Builds a staircase with a known calibration constant, skipping the
    /// mass computation.
    pub fn with_calibration(support: FractalSupport, origin: f64, calibration: f64) -> Result<Self> {
        if !(calibration > 0.0) || !calibration.is_finite() {
            return invalid(format!("calibration {calibration} must be positive"));
        }
        let mut st = Self {
            support,
            origin,
            calibration,
            offset: 0.0,
        };
        st.offset = st.base_mass(origin);
        Ok(st)
    }

    pub fn identity() -> Self {
        Self {
            support: FractalSupport::identity_line(),
            origin: 0.0,
            calibration: 1.0,
            offset: 0.0,
        }
    }

    /// Middle-third Cantor staircase anchored at 0.
    pub fn cantor() -> Result<Self> {
        Self::build(FractalSupport::middle_third(), 0.0)
    }

    pub fn support(&self) -> &FractalSupport {
        &self.support
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// `γ^α(F, a, b)` for the base interval `[a, b]`; 1 for the line.
    pub fn calibration(&self) -> f64 {
        self.calibration
    }

    pub fn alpha(&self) -> f64 {
        self.support.alpha()
    }

    fn base_mass(&self, x: f64) -> f64 {
        match (self.support.base(), self.support.contraction()) {
            (Some((a, b)), Some(rho)) => self.calibration * devil_extended(rho, (x - a) / (b - a)),
            _ => x,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.support.is_identity() {
            return x - self.origin;
        }
        self.base_mass(x) - self.offset
    }

    /// Smallest `x` with `S(x) = u`; on a plateau this is its left end.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(Error::OutOfRange(u));
        }
        let (a, b, rho) = match (self.support.base(), self.support.contraction()) {
            (Some((a, b)), Some(rho)) => (a, b, rho),
            _ => return Ok(u + self.origin),
        };
        let mut w = (u + self.offset) / self.calibration;
        if w < 0.0 {
            if w > -SNAP {
                w = 0.0;
            } else {
                return Err(Error::OutOfRange(u));
            }
        }
        Ok(a + (b - a) * devil_inverse_extended(rho, w))
    }

    /// Writes the `x,S` tabulation on a uniform grid of `samples` points.
    pub fn write_csv<W: Write>(&self, lo: f64, hi: f64, samples: usize, mut w: W) -> io::Result<()> {
        writeln!(w, "x,S")?;
        for x in tabulation_grid(lo, hi, samples) {
            writeln!(w, "{},{}", sig12(x), sig12(self.eval(x)))?;
        }
        Ok(())
    }
}

/// `samples` evenly spaced points from `lo` to `hi`, both included.
pub fn tabulation_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    if samples == 1 {
        return vec![lo];
    }
    (0..samples)
        .map(|i| {
            if i + 1 == samples {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (samples - 1) as f64
            }
        })
        .collect()
}

/// Devil's staircase on `[0, 1]`: ternary-style digits 0/2 become binary 0/1.
///
/// The digit map multiplies by `1/ρ` at every step, so the state is kept as
/// an unevaluated sum `hi + lo` to stop rounding error growing with depth.
pub fn devil(rho: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 1.0;
    }
    let m = expansion_factor(rho);
    let (mut hi, mut lo) = (y, 0.0);
    let mut acc = 0.0;
    let mut weight = 0.5;
    for _ in 0..80 {
        let v = hi + lo;
        if v <= SNAP {
            return acc;
        }
        if v >= 1.0 - SNAP {
            return acc + 2.0 * weight;
        }
        (hi, lo) = dd_scale(hi, lo, m);
        let z = hi + lo;
        if z <= 1.0 + SNAP {
            if z > 1.0 {
                (hi, lo) = (1.0, 0.0);
            }
        } else if z >= m - 1.0 - SNAP {
            acc += weight;
            (hi, lo) = dd_add(hi, lo, -(m - 1.0));
            if hi + lo < 0.0 {
                (hi, lo) = (0.0, 0.0);
            }
        } else {
            return acc + weight;
        }
        weight *= 0.5;
        if weight < 1e-18 {
            break;
        }
    }
    acc
}

/// `1/ρ`, snapped to an integer when it is one up to rounding.
fn expansion_factor(rho: f64) -> f64 {
    let m = 1.0 / rho;
    if (m - m.round()).abs() < 1e-12 * m {
        m.round()
    } else {
        m
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn dd_scale(hi: f64, lo: f64, m: f64) -> (f64, f64) {
    let p = hi * m;
    let e = hi.mul_add(m, -p);
    two_sum(p, e + lo * m)
}

fn dd_add(hi: f64, lo: f64, c: f64) -> (f64, f64) {
    let (s, e) = two_sum(hi, c);
    two_sum(s, e + lo)
}

/// Devil's staircase continued to `[0, ∞)` by `D(y / ρ) = 2 D(y)`.
pub fn devil_extended(rho: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let mut y = y;
    let mut factor = 1.0;
    while y > 1.0 {
        y *= rho;
        factor *= 2.0;
    }
    factor * devil(rho, y)
}

/// Left-endpoint inverse of [`devil`] on `[0, 1]`.
pub fn devil_inverse(rho: f64, mut w: f64) -> f64 {
    let mut lo = 0.0;
    let mut scale = 1.0;
    for _ in 0..80 {
        if w <= SNAP {
            return lo;
        }
        if w >= 1.0 - SNAP {
            return lo + scale;
        }
        if (w - 0.5).abs() <= SNAP {
            w = 0.5;
        }
        if w <= 0.5 {
            w *= 2.0;
        } else {
            lo += scale * (1.0 - rho);
            w = 2.0 * w - 1.0;
        }
        scale *= rho;
        if scale < 1e-18 {
            break;
        }
    }
    lo
}

fn devil_inverse_extended(rho: f64, w: f64) -> f64 {
    let mut w = w;
    let mut factor = 1.0;
    while w > 1.0 {
        w *= 0.5;
        factor /= rho;
    }
    factor * devil_inverse(rho, w)
}
