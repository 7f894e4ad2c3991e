//! Fractal supports and the partition-based mass machinery.
//!
//! A support is either the whole real line (`alpha = 1`) or a self-similar
//! Cantor-like set built on a base interval by repeatedly removing an open
//! middle piece. The Cantor family is continued to `[a, ∞)` by scaling the
//! base construction up, so the staircase grows without bound.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};

/// Recursion cap for membership decisions on degenerate intervals.
const MAX_DEPTH: usize = 64;

// Collar pushing partition points off the set and into the gaps, relative to
// the covering cell's length, with a floor above rounding error.
const COLLAR_REL: f64 = 1e-10;
const COLLAR_ABS: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SupportKind {
    IdentityLine,
    CantorLike {
        removal_ratio: f64,
        base_interval: (f64, f64),
    },
}

/// A fractal set together with its order `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractalSupport {
    kind: SupportKind,
    alpha: f64,
}

impl FractalSupport {
    pub fn identity_line() -> Self {
        Self {
            kind: SupportKind::IdentityLine,
            alpha: 1.0,
        }
    }

    /// Cantor-like set on `base` with the open middle fraction `removal_ratio`
    /// taken out at every level. The order is the similarity dimension
    /// `ln 2 / ln(1/ρ)` with `ρ = (1 - removal_ratio) / 2`.
    pub fn cantor_like(removal_ratio: f64, base: (f64, f64)) -> Result<Self> {
        if !(removal_ratio > 0.0 && removal_ratio < 1.0) {
            return invalid(format!("removal ratio {removal_ratio} must lie in (0, 1)"));
        }
        if !(base.0 < base.1) || !base.0.is_finite() || !base.1.is_finite() {
            return invalid(format!("base interval [{}, {}] is empty", base.0, base.1));
        }
        let rho = 0.5 * (1.0 - removal_ratio);
        Ok(Self {
            kind: SupportKind::CantorLike {
                removal_ratio,
                base_interval: base,
            },
            alpha: 2f64.ln() / (1.0 / rho).ln(),
        })
    }

    /// The classical middle-third Cantor set on `[0, 1]`.
    pub fn middle_third() -> Self {
        Self::cantor_like(1.0 / 3.0, (0.0, 1.0)).expect("valid constants")
    }

    pub fn kind(&self) -> &SupportKind {
        &self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, SupportKind::IdentityLine)
    }

    /// Contraction factor `ρ` of each of the two pieces, `None` for the line.
    pub fn contraction(&self) -> Option<f64> {
        match self.kind {
            SupportKind::IdentityLine => None,
            SupportKind::CantorLike { removal_ratio, .. } => Some(0.5 * (1.0 - removal_ratio)),
        }
    }

    pub(crate) fn base(&self) -> Option<(f64, f64)> {
        match self.kind {
            SupportKind::IdentityLine => None,
            SupportKind::CantorLike { base_interval, .. } => Some(base_interval),
        }
    }

    fn unit_coord(&self, x: f64) -> f64 {
        match self.base() {
            None => x,
            Some((a, b)) => (x - a) / (b - a),
        }
    }

    fn line_coord(&self, y: f64) -> f64 {
        match self.base() {
            None => y,
            Some((a, b)) => a + (b - a) * y,
        }
    }

    /// Flag function: whether the closed interval `[lo, hi]` meets the set.
    pub fn flag_value(&self, lo: f64, hi: f64) -> bool {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        match self.contraction() {
            None => true,
            Some(rho) => cantor_meets(rho, self.unit_coord(lo), self.unit_coord(hi)),
        }
    }

    /// `σ^α[F, P]`: the α-weighted sum of flagged partition cells.
    pub fn sigma_alpha(&self, partition: &Partition) -> f64 {
        let pts = partition.points();
        if pts.len() < 2 {
            return 0.0;
        }
        let norm = gamma(self.alpha + 1.0);
        pts.windows(2)
            .filter(|w| self.flag_value(w[0], w[1]))
            .map(|w| (w[1] - w[0]).powf(self.alpha))
            .sum::<f64>()
            / norm
    }

    /// Coarse-grained mass: the infimum of `σ^α` over partitions of `[x, y]`
    /// with mesh at most `delta`.
    ///
    /// For Cantor-like sets the candidate partition covers the set by the
    /// construction cells one level below `delta`, refines the cells cut by
    /// the interval ends, and places partition points a tiny collar inside
    /// the gaps so that gap cells carry a zero flag. The value is an upper
    /// bound of the infimum that tightens as `delta` shrinks.
    pub fn coarse_mass(&self, x: f64, y: f64, delta: f64) -> Result<f64> {
        if !(delta > 0.0) {
            return invalid(format!("mesh bound delta = {delta} must be positive"));
        }
        if x > y {
            return invalid(format!("coarse mass needs x <= y, got [{x}, {y}]"));
        }
        if x == y {
            return Ok(0.0);
        }
        match self.contraction() {
            None => Ok(y - x),
            Some(_) => {
                let partition = self.covering_partition(x, y, delta)?;
                Ok(self.sigma_alpha(&partition))
            }
        }
    }

    /// Builds the near-optimal partition used by [`Self::coarse_mass`].
    pub fn covering_partition(&self, x: f64, y: f64, delta: f64) -> Result<Partition> {
        let rho = match self.contraction() {
            None => {
                let n = ((y - x) / delta).ceil().max(1.0) as usize;
                let pts = (0..=n).map(|i| x + (y - x) * i as f64 / n as f64).collect();
                return Partition::new(pts);
            }
            Some(rho) => rho,
        };
        let scale = self.line_coord(1.0) - self.line_coord(0.0);
        let (p, q) = (self.unit_coord(x), self.unit_coord(y));
        let du = delta / scale;

        let mut top = 1.0;
        while top < q {
            top /= rho;
        }
        let mut depth = 0usize;
        while top * rho.powi(depth as i32) * (1.0 + 2.0 * COLLAR_REL) + 2.0 * COLLAR_ABS * top > du {
            depth += 1;
            if depth > 40 {
                return invalid(format!("mesh bound {delta} is below the supported resolution"));
            }
        }
        let collar = (COLLAR_REL * top * rho.powi(depth as i32)).max(COLLAR_ABS * top);
        // deepest refinement level at which neighbouring cells stay separated
        // by more than the widest collar on each side
        let gap_frac = 1.0 - 2.0 * rho;
        let mut max_depth = depth;
        while gap_frac * top * rho.powi(max_depth as i32 + 1) > 8.0 * collar && max_depth < 60 {
            max_depth += 1;
        }

        let mut cover = Vec::new();
        if q > 0.0 {
            cover_cells(rho, 0.0, top, 0, depth, max_depth, p, q, &mut cover);
        }
        cover.sort_by(|a, b| a.0.total_cmp(&b.0));

        // expand each covering interval by the collar, then fill the gaps with
        // zero-flag cells of width at most du
        let mut pts = vec![p];
        for &(lo, hi) in &cover {
            let pad = (COLLAR_REL * (hi - lo)).max(COLLAR_ABS * top);
            let lo = (lo - pad).max(p);
            let hi = (hi + pad).min(q);
            let last = *pts.last().expect("non-empty");
            if lo > last {
                push_filled(&mut pts, last, lo, du);
            }
            let last = *pts.last().expect("non-empty");
            if hi > last {
                pts.push(hi);
            }
        }
        let last = *pts.last().expect("non-empty");
        if q > last {
            push_filled(&mut pts, last, q, du);
        }
        let mut real: Vec<f64> = pts.into_iter().map(|u| self.line_coord(u)).collect();
        real[0] = x;
        *real.last_mut().expect("non-empty") = y;
        real.dedup_by(|a, b| *a <= *b);
        Partition::new(real)
    }

    /// Mass function `γ^α(F, x, y)` as the limit of the coarse-grained mass
    /// over the geometric mesh sequence `δ_k = L ρ^k`.
    pub fn mass_function(&self, x: f64, y: f64, cfg: &MassConfig) -> Result<MassEstimate> {
        if x > y {
            return invalid(format!("mass function needs x <= y, got [{x}, {y}]"));
        }
        let rho = match self.contraction() {
            None => {
                return Ok(MassEstimate {
                    value: y - x,
                    error: 0.0,
                    levels: 1,
                })
            }
            Some(rho) => rho,
        };
        let scale = self.line_coord(1.0) - self.line_coord(0.0);
        let mut history: Vec<f64> = Vec::new();
        for k in 1..=cfg.max_depth {
            let delta = scale * rho.powi(k as i32);
            let v = self.coarse_mass(x, y, delta)?;
            history.push(v);
            let n = history.len();
            if n >= cfg.min_levels.max(2) {
                let diff = (history[n - 1] - history[n - 2]).abs();
                if diff <= cfg.rel_tol * history[n - 1].abs().max(f64::MIN_POSITIVE) || diff == 0.0 {
                    return Ok(MassEstimate {
                        value: extrapolate(&history),
                        error: diff,
                        levels: n,
                    });
                }
            }
        }
        let n = history.len();
        let diff = if n >= 2 {
            (history[n - 1] - history[n - 2]).abs()
        } else {
            f64::INFINITY
        };
        Err(Error::NoConvergence(format!(
            "mass on [{x}, {y}] changed by {diff:e} at depth {}",
            cfg.max_depth
        )))
    }
}

fn push_filled(pts: &mut Vec<f64>, from: f64, to: f64, du: f64) {
    let n = ((to - from) / du).ceil().max(1.0) as usize;
    for i in 1..n {
        pts.push(from + (to - from) * i as f64 / n as f64);
    }
    pts.push(to);
}

/// Aitken Δ² on the last three levels when they contract geometrically.
fn extrapolate(h: &[f64]) -> f64 {
    let n = h.len();
    if n < 3 {
        return h[n - 1];
    }
    let (a, b, c) = (h[n - 3], h[n - 2], h[n - 1]);
    let d1 = b - a;
    let d2 = c - b;
    let denom = d2 - d1;
    if d1 == 0.0 || denom == 0.0 {
        return c;
    }
    let ratio = d2 / d1;
    if !(0.0..0.9).contains(&ratio) {
        return c;
    }
    c - d2 * d2 / denom
}

/// Collects intervals covering `F ∩ [p, q]` in unit coordinates.
#[allow(clippy::too_many_arguments)]
fn cover_cells(
    rho: f64,
    lo: f64,
    len: f64,
    level: usize,
    depth: usize,
    max_depth: usize,
    p: f64,
    q: f64,
    out: &mut Vec<(f64, f64)>,
) -> f64 {
    let hi = lo + len;
    if hi < p || lo > q {
        return 0.0;
    }
    let inside = lo >= p && hi <= q;
    if level < depth || (!inside && level < max_depth) {
        if level >= depth {
            // partial cell: either take the clipped piece whole or refine it
            let clip = (lo.max(p), hi.min(q));
            let whole = if cantor_meets(rho, clip.0, clip.1) {
                (clip.1 - clip.0).max(0.0).powf(alpha_of(rho))
            } else {
                0.0
            };
            let mut refined = Vec::new();
            let mut cost = cover_cells(rho, lo, len * rho, level + 1, depth, max_depth, p, q, &mut refined);
            cost += cover_cells(
                rho,
                hi - len * rho,
                len * rho,
                level + 1,
                depth,
                max_depth,
                p,
                q,
                &mut refined,
            );
            if whole < cost {
                if whole > 0.0 || clip.1 >= clip.0 && cantor_meets(rho, clip.0, clip.1) {
                    out.push(clip);
                }
                return whole;
            }
            out.extend(refined);
            return cost;
        }
        let a = cover_cells(rho, lo, len * rho, level + 1, depth, max_depth, p, q, out);
        let b = cover_cells(rho, hi - len * rho, len * rho, level + 1, depth, max_depth, p, q, out);
        return a + b;
    }
    let clip = (lo.max(p), hi.min(q));
    if !inside && !cantor_meets(rho, clip.0, clip.1) {
        return 0.0;
    }
    out.push(clip);
    (clip.1 - clip.0).max(0.0).powf(alpha_of(rho))
}

fn alpha_of(rho: f64) -> f64 {
    2f64.ln() / (1.0 / rho).ln()
}

/// Exact intersection test of `[p, q]` with the continued Cantor set in unit
/// coordinates. Cell endpoints belong to the set.
fn cantor_meets(rho: f64, p: f64, q: f64) -> bool {
    if q < 0.0 {
        return false;
    }
    if p <= 0.0 {
        return true;
    }
    let mut len = 1.0;
    while len < q {
        len /= rho;
    }
    let mut lo = 0.0;
    for _ in 0..MAX_DEPTH {
        let hi = lo + len;
        if p > hi || q < lo {
            return false;
        }
        if p <= lo || q >= hi {
            return true;
        }
        let left_hi = lo + rho * len;
        let right_lo = hi - rho * len;
        if (p <= left_hi && q >= left_hi) || (p <= right_lo && q >= right_lo) {
            return true;
        }
        if q < left_hi {
            len *= rho;
        } else if p > right_lo {
            lo = right_lo;
            len *= rho;
        } else {
            return false;
        }
    }
    true
}

/// Settings for the δ → 0 limit of the coarse-grained mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassConfig {
    pub rel_tol: f64,
    pub max_depth: usize,
    pub min_levels: usize,
}

impl Default for MassConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            max_depth: 12,
            min_levels: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassEstimate {
    pub value: f64,
    /// Difference between the last two mesh levels.
    pub error: f64,
    pub levels: usize,
}

/// An ordered subdivision `x = t_0 < t_1 < … < t_n = y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
    mesh: f64,
}

impl Partition {
    /// A single point is accepted as the degenerate partition of `[x, x]`.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return invalid("partition needs at least one point");
        }
        if points.iter().any(|p| !p.is_finite()) {
            return invalid("partition points must be finite");
        }
        let mut mesh = 0.0f64;
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return invalid(format!("partition not strictly increasing at {} -> {}", w[0], w[1]));
            }
            mesh = mesh.max(w[1] - w[0]);
        }
        Ok(Self { points, mesh })
    }

    pub fn uniform(x: f64, y: f64, cells: usize) -> Result<Self> {
        if cells == 0 || !(x < y) {
            return invalid(format!("uniform partition of [{x}, {y}] with {cells} cells"));
        }
        Self::new((0..=cells).map(|i| x + (y - x) * i as f64 / cells as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }
}
