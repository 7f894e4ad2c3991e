//! Price-adjustment models driven by Caputo and wsk fractal derivatives.
//!
//! Demand `q_d = d0 - d1 p` and supply `q_s = -s0 + s1 p` balance at
//! `p* = (d0 + s0)/(d1 + s1)`. With `D = d1 + s1`, `Q = d0 + s0` and
//! `E = d2 + s2` the four models are
//!
//! ```text
//! caputo      D^β p + λ D p = λ Q
//! caputo-exp  D^β p - (D/E) p = -Q/E
//! wsk         W^γ p + k D p = k Q
//! wsk-exp     W^γ p - (D/E) p = -Q/E
//! ```
//!
//! each of the form `op p + λ₁ p = r` in `u = S(t)`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::descriptor::FunctionDescriptor;
use crate::error::{invalid, Error, Result};
use crate::expr::TransformExpr;
use crate::format::{round12, sig12};
use crate::quad::pow1pm1;
use crate::special::gamma_fn;
use crate::staircase::Staircase;
use crate::transforms::{sumudu_rule, transform_caputo, transform_wsk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelTag {
    CaputoNoExp,
    CaputoExp,
    WskNoExp,
    WskExp,
}

impl ModelTag {
    pub const ALL: [ModelTag; 4] = [
        ModelTag::CaputoNoExp,
        ModelTag::CaputoExp,
        ModelTag::WskNoExp,
        ModelTag::WskExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelTag::CaputoNoExp => "caputo",
            ModelTag::CaputoExp => "caputo-exp",
            ModelTag::WskNoExp => "wsk",
            ModelTag::WskExp => "wsk-exp",
        }
    }

    pub fn is_caputo(self) -> bool {
        matches!(self, ModelTag::CaputoNoExp | ModelTag::CaputoExp)
    }

    pub fn has_expectations(self) -> bool {
        matches!(self, ModelTag::CaputoExp | ModelTag::WskExp)
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caputo" => Ok(ModelTag::CaputoNoExp),
            "caputo-exp" => Ok(ModelTag::CaputoExp),
            "wsk" => Ok(ModelTag::WskNoExp),
            "wsk-exp" => Ok(ModelTag::WskExp),
            other => invalid(format!(
                "unknown model '{other}' (expected caputo, caputo-exp, wsk or wsk-exp)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub d0: f64,
    pub d1: f64,
    pub s0: f64,
    pub s1: f64,
    pub d2: f64,
    pub s2: f64,
    pub lambda: f64,
    pub k: f64,
    pub beta: f64,
    pub gamma: f64,
    pub n_gamma: f64,
    pub p0: f64,
    pub expectations: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            d0: 10.0,
            d1: 2.0,
            s0: 2.0,
            s1: 1.0,
            d2: 1.0,
            s2: 1.0,
            lambda: 0.5,
            k: 1.0,
            beta: 0.7,
            gamma: 0.5,
            n_gamma: 1.0,
            p0: 0.0,
            expectations: false,
        }
    }
}

/// Which closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolutionForm {
    /// Closed forms whose transform residual vanishes.
    #[default]
    Adopted,
    /// The formulas exactly as printed in the source derivation.
    AsPrinted,
}

/// `p* = (d0 + s0)/(d1 + s1)`.
pub fn equilibrium_price(params: &ModelParams) -> f64 {
    (params.d0 + params.s0) / (params.d1 + params.s1)
}

/// The model as `op p + λ₁ p = r`, with the operator prefactor.
#[derive(Debug, Clone, Copy)]
struct Linear {
    lambda1: f64,
    r: f64,
}

impl ModelParams {
    fn sums(&self) -> (f64, f64, f64) {
        (self.d1 + self.s1, self.d0 + self.s0, self.d2 + self.s2)
    }

    /// Checks the invariants the chosen model relies on.
    pub fn validate(&self, tag: ModelTag) -> Result<()> {
        let named = [
            ("d0", self.d0),
            ("d1", self.d1),
            ("s0", self.s0),
            ("s1", self.s1),
            ("d2", self.d2),
            ("s2", self.s2),
            ("lambda", self.lambda),
            ("k", self.k),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("n_gamma", self.n_gamma),
            ("p0", self.p0),
        ];
        if let Some((name, _)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return invalid(format!("parameter {name} must be finite"));
        }
        for (name, v) in [("d0", self.d0), ("d1", self.d1), ("s0", self.s0), ("s1", self.s1)] {
            if !(v > 0.0) {
                return invalid(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.p0 >= 0.0) {
            return invalid(format!("p0 must be non-negative, got {}", self.p0));
        }
        let (d, _, e) = self.sums();
        if tag.has_expectations() && e == 0.0 {
            return invalid("expectation models need d2 + s2 != 0");
        }
        if tag.is_caputo() {
            if !(self.beta > 0.0 && self.beta <= 1.0) {
                return invalid(format!("beta must lie in (0, 1], got {}", self.beta));
            }
            if tag == ModelTag::CaputoNoExp && !(self.lambda > 0.0) {
                return invalid(format!("lambda must be positive, got {}", self.lambda));
            }
        } else {
            if !(0.0..1.0).contains(&self.gamma) {
                return invalid(format!("gamma must lie in [0, 1), got {}", self.gamma));
            }
            if !(self.n_gamma > 0.0) {
                return invalid(format!("n_gamma must be positive, got {}", self.n_gamma));
            }
            if tag == ModelTag::WskNoExp && !(self.k > 0.0) {
                return invalid(format!("k must be positive, got {}", self.k));
            }
            if tag == ModelTag::WskExp {
                let denom = self.n_gamma * e - (1.0 - self.gamma) * d;
                if denom.abs() <= 1e-12 * (self.n_gamma * e.abs() + d) {
                    return invalid("singular wsk-exp model: N(γ)(d2+s2) - (1-γ)(d1+s1) = 0");
                }
            }
        }
        Ok(())
    }

    fn linear(&self, tag: ModelTag) -> Linear {
        let (d, q, e) = self.sums();
        match tag {
            ModelTag::CaputoNoExp => Linear {
                lambda1: self.lambda * d,
                r: self.lambda * q,
            },
            ModelTag::WskNoExp => Linear {
                lambda1: self.k * d,
                r: self.k * q,
            },
            ModelTag::CaputoExp | ModelTag::WskExp => Linear {
                lambda1: -d / e,
                r: -q / e,
            },
        }
    }
}

/// The closed-form solution as a descriptor in `u = S(t)`.
pub fn solution_descriptor(params: &ModelParams, tag: ModelTag, form: SolutionForm) -> Result<FunctionDescriptor> {
    params.validate(tag)?;
    let (d, q, e) = params.sums();
    let p_star = q / d;
    let p0 = params.p0;
    let gamma = params.gamma;
    let n = params.n_gamma;
    let parts = match (tag, form) {
        (ModelTag::CaputoNoExp, SolutionForm::Adopted) => {
            let b = params.lambda * d;
            vec![
                FunctionDescriptor::Const(p_star),
                FunctionDescriptor::ml(params.beta, b, p0 - p_star)?,
            ]
        }
        (ModelTag::CaputoNoExp, SolutionForm::AsPrinted) => {
            let b = params.lambda * d;
            let second = params.lambda * q / d;
            vec![
                FunctionDescriptor::Const(second),
                FunctionDescriptor::ml(params.beta, b, p0 - second)?,
            ]
        }
        (ModelTag::CaputoExp, _) => {
            let growth = d / e;
            vec![
                FunctionDescriptor::Const(p_star),
                FunctionDescriptor::ml(params.beta, -growth, p0 - p_star)?,
            ]
        }
        (ModelTag::WskNoExp, form) => {
            let denom = n + params.k * (1.0 - gamma) * d;
            let c = params.k * gamma * d / denom;
            let first = match form {
                SolutionForm::Adopted => p_star + n / denom * (p0 - p_star),
                SolutionForm::AsPrinted => n * p0 / denom,
            };
            vec![
                FunctionDescriptor::Const(p_star),
                FunctionDescriptor::exp(-c, first - p_star),
            ]
        }
        (ModelTag::WskExp, form) => {
            let denom = n * e - (1.0 - gamma) * d;
            let c = gamma * d / denom;
            match form {
                SolutionForm::Adopted => vec![
                    FunctionDescriptor::Const(p_star),
                    FunctionDescriptor::exp(c, n * e / denom * (p0 - p_star)),
                ],
                SolutionForm::AsPrinted => {
                    let first = (n * p0 * e + q * (1.0 - gamma)) / denom;
                    vec![
                        FunctionDescriptor::Const(-p_star),
                        FunctionDescriptor::exp(c, first + p_star),
                    ]
                }
            }
        }
    };
    FunctionDescriptor::sum(parts)
}

/// Growth rate of the transient: the transient decays when this is negative.
fn transient_rate(params: &ModelParams, tag: ModelTag) -> f64 {
    let (d, _, e) = params.sums();
    match tag {
        ModelTag::CaputoNoExp => -params.lambda * d,
        ModelTag::CaputoExp => d / e,
        ModelTag::WskNoExp => -params.k * params.gamma * d,
        ModelTag::WskExp => params.gamma * d / (params.n_gamma * e - (1.0 - params.gamma) * d),
    }
}

/// A sampled price path.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceTrajectory {
    pub t_grid: Vec<f64>,
    pub p_values: Vec<f64>,
    pub model_tag: ModelTag,
    pub equilibrium: f64,
    /// False when the transient grows without bound.
    pub stable: bool,
}

impl PriceTrajectory {
    /// Largest pointwise distance to another trajectory on the same grid.
    pub fn sup_distance(&self, other: &PriceTrajectory) -> Result<f64> {
        if self.t_grid.len() != other.t_grid.len() {
            return invalid("trajectories live on different grids");
        }
        Ok(self
            .p_values
            .iter()
            .zip(&other.p_values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Evaluates a closed form on `t_grid`.
pub fn solve(
    params: &ModelParams,
    tag: ModelTag,
    st: &Staircase,
    t_grid: &[f64],
    form: SolutionForm,
) -> Result<PriceTrajectory> {
    let sol = solution_descriptor(params, tag, form)?;
    if t_grid.is_empty() {
        return invalid("empty time grid");
    }
    let p_values = t_grid.iter().map(|&t| sol.eval(st, t)).collect::<Result<Vec<_>>>()?;
    let stable = transient_rate(params, tag) < 0.0 || params.p0 == equilibrium_price(params);
    Ok(PriceTrajectory {
        t_grid: t_grid.to_vec(),
        p_values,
        model_tag: tag,
        equilibrium: equilibrium_price(params),
        stable,
    })
}

/// Caputo model (with or without expectations, per `params.expectations`).
pub fn solve_caputo(params: &ModelParams, st: &Staircase, t_grid: &[f64]) -> Result<PriceTrajectory> {
    let tag = if params.expectations {
        ModelTag::CaputoExp
    } else {
        ModelTag::CaputoNoExp
    };
    solve(params, tag, st, t_grid, SolutionForm::Adopted)
}

/// wsk model (with or without expectations, per `params.expectations`).
pub fn solve_wsk(params: &ModelParams, st: &Staircase, t_grid: &[f64]) -> Result<PriceTrajectory> {
    let tag = if params.expectations {
        ModelTag::WskExp
    } else {
        ModelTag::WskNoExp
    };
    solve(params, tag, st, t_grid, SolutionForm::Adopted)
}

/// Substitutes the closed form's Sumudu transform into the transformed model
/// equation. A correct solution leaves the structurally zero expression.
pub fn transform_residual(params: &ModelParams, tag: ModelTag, form: SolutionForm) -> Result<TransformExpr> {
    let sol = solution_descriptor(params, tag, form)?;
    let sp = sumudu_rule(&sol).expr;
    let lin = params.linear(tag);
    let op = if tag.is_caputo() {
        transform_caputo(&sp, params.beta, &[params.p0])?
    } else {
        transform_wsk(&sp, params.gamma, params.p0, params.n_gamma)?
    };
    Ok(op.add(&sp.scale(lin.lambda1)).sub(&TransformExpr::constant(lin.r)))
}

/// Integrates the model numerically on `steps` panels uniform in `u`, up to
/// `t_end`.
///
/// Caputo models use the product-trapezoid rule on the equivalent Volterra
/// equation `p = p0 + I^β[r - λ₁ p]`; wsk models use piecewise-linear `p`
/// with exact exponential-kernel weights, started from the jump value that
/// the integral equation forces at `t = 0+`.
pub fn forward_solve(
    params: &ModelParams,
    st: &Staircase,
    tag: ModelTag,
    steps: usize,
    t_end: f64,
) -> Result<PriceTrajectory> {
    params.validate(tag)?;
    if steps < 16 {
        return invalid(format!("forward solve needs at least 16 steps, got {steps}"));
    }
    if st.eval(0.0) != 0.0 {
        return invalid("forward solve starts at t = 0 and needs S(0) = 0");
    }
    let top = st.eval(t_end);
    if !(top > 0.0) {
        return invalid(format!("t_end = {t_end} must satisfy S(t_end) > 0"));
    }
    let h = top / steps as f64;
    let lin = params.linear(tag);
    let p = if tag.is_caputo() {
        caputo_march(params.p0, params.beta, lin, h, steps)
    } else {
        wsk_march(params, lin, h, steps)
    };
    let mut t_grid = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        t_grid.push(if j == steps { t_end } else { st.inverse(h * j as f64)? });
    }
    let stable = transient_rate(params, tag) < 0.0 || params.p0 == equilibrium_price(params);
    Ok(PriceTrajectory {
        t_grid,
        p_values: p,
        model_tag: tag,
        equilibrium: equilibrium_price(params),
        stable,
    })
}

fn caputo_march(p0: f64, beta: f64, lin: Linear, h: f64, steps: usize) -> Vec<f64> {
    let b1 = beta + 1.0;
    // second differences of m^{β+1}, m = 1..steps-1
    let w2: Vec<f64> = (0..steps)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                let m = m as f64;
                m.powf(b1) * (pow1pm1(1.0 / m, b1) + pow1pm1(-1.0 / m, b1))
            }
        })
        .collect();
    let c = h.powf(beta) / gamma_fn(beta + 2.0);
    let rhs = |p: f64| lin.r - lin.lambda1 * p;
    let mut p = vec![p0];
    let mut f = vec![rhs(p0)];
    for n in 1..=steps {
        let nf = n as f64;
        let a0 = nf.powf(beta) * ((nf - 1.0) * pow1pm1(-1.0 / nf, beta) + beta);
        let mut hist = a0 * f[0];
        for j in 1..n {
            hist += w2[n - j] * f[j];
        }
        // p_n = p0 + c (hist + r - λ₁ p_n)
        let pn = (p0 + c * (hist + lin.r)) / (1.0 + c * lin.lambda1);
        p.push(pn);
        f.push(rhs(pn));
    }
    p
}

fn wsk_march(params: &ModelParams, lin: Linear, h: f64, steps: usize) -> Vec<f64> {
    let m = params.n_gamma / (1.0 - params.gamma);
    let kappa = params.gamma / (1.0 - params.gamma);
    let decay = (-kappa * h).exp();
    let w = if kappa == 0.0 {
        1.0
    } else {
        -(-kappa * h).exp_m1() / (kappa * h)
    };
    // at u = 0+ the memory integral holds only the jump: m (p⁺ - p0) + λ₁ p⁺ = r
    let start = (m * params.p0 + lin.r) / (m + lin.lambda1);
    let mut p = vec![start];
    let mut memory = start - params.p0;
    for _ in 1..=steps {
        let prev = *p.last().expect("non-empty");
        let carried = decay * memory;
        let pn = (lin.r - m * carried + m * w * prev) / (m * w + lin.lambda1);
        memory = carried + w * (pn - prev);
        p.push(pn);
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => invalid(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

fn rounded(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round12(x)).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

/// Writes a trajectory as CSV (`t,p,equilibrium`) or as a JSON object.
pub fn emit_trajectory<W: Write>(
    traj: &PriceTrajectory,
    params: &ModelParams,
    format: OutputFormat,
    mut out: W,
) -> Result<()> {
    if traj.t_grid.is_empty() {
        return invalid("cannot emit an empty trajectory");
    }
    let io_err = |e: io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    match format {
        OutputFormat::Csv => {
            writeln!(out, "t,p,equilibrium").map_err(io_err)?;
            let eq = sig12(traj.equilibrium);
            for (t, p) in traj.t_grid.iter().zip(&traj.p_values) {
                writeln!(out, "{},{},{}", sig12(*t), sig12(*p), eq).map_err(io_err)?;
            }
        }
        OutputFormat::Json => {
            let echo = serde_json::to_value(params).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let echo = match echo {
                serde_json::Value::Object(map) => serde_json::Value::Object(
                    map.into_iter()
                        .map(|(k, v)| {
                            let v = v.as_f64().map_or(v, rounded);
                            (k, v)
                        })
                        .collect(),
                ),
                other => other,
            };
            let doc = serde_json::json!({
                "model": traj.model_tag.name(),
                "params_echo": echo,
                "t": traj.t_grid.iter().map(|&x| rounded(x)).collect::<Vec<_>>(),
                "p": traj.p_values.iter().map(|&x| rounded(x)).collect::<Vec<_>>(),
                "p_star": rounded(traj.equilibrium),
                "stable": traj.stable,
            });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(())
}
