use std::fmt::Write as _;
use std::time::Instant;

use fracsum::econ::{self, ModelParams, ModelTag, OutputFormat, SolutionForm};
use fracsum::format::{round12, sig12};
use fracsum::operators::{
    caputo_derivative, fractal_integral, local_fderivative, n_derivative, rl_derivative, rl_integral, wsk_derivative,
};
use fracsum::staircase::tabulation_grid;
use fracsum::transforms::{rule, transform_numeric, TransformKind};
use fracsum::verify::run_suite;
use fracsum::FunctionDescriptor;
use serde_json::{json, Value};

use crate::config::{FileConfig, RunConfig};
use crate::{
    CliError, Format, KindName, ModeName, OpName, OperatorArgs, Outcome, SolveArgs, StaircaseArgs, SupportName,
    TransformArgs,
};

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn json_body(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("serializable");
    out.push(b'\n');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn ok(body: Vec<u8>) -> Result<Outcome, CliError> {
    Ok(Outcome { body, failure: None })
}

fn support_name(s: SupportName) -> &'static str {
    match s {
        SupportName::Line => "line",
        SupportName::Cantor => "cantor",
    }
}

fn parse_descriptor(text: &str) -> Result<FunctionDescriptor, CliError> {
    text.parse::<FunctionDescriptor>()
        .map_err(|e| CliError::Invalid(format!("in '{text}': {e}")))
}

pub fn staircase(cfg: &RunConfig, a: &StaircaseArgs) -> Result<Outcome, CliError> {
    if !(a.from.is_finite() && a.to.is_finite() && a.from < a.to) {
        return Err(CliError::Invalid(format!("invalid range [{}, {}]", a.from, a.to)));
    }
    if a.samples < 2 {
        return Err(CliError::Invalid(format!("need at least 2 samples, got {}", a.samples)));
    }
    let st = &cfg.staircase;
    let xs = tabulation_grid(a.from, a.to, a.samples);
    match cfg.format {
        Format::Csv => {
            let mut body = Vec::new();
            st.write_csv(a.from, a.to, a.samples, &mut body)
                .expect("writing to memory");
            ok(body)
        }
        Format::Json => {
            let s: Vec<f64> = xs.iter().map(|&x| st.eval(x)).collect();
            ok(json_body(&json!({
                "support": support_name(cfg.support),
                "alpha": num(st.alpha()),
                "x": nums(&xs),
                "S": nums(&s),
            })))
        }
    }
}

pub fn transform(cfg: &RunConfig, a: &TransformArgs) -> Result<Outcome, CliError> {
    let d = parse_descriptor(&a.expr)?;
    let kind = match a.kind {
        KindName::Sumudu => TransformKind::Sumudu,
        KindName::Laplace => TransformKind::Laplace,
    };
    let rt = rule(kind, &d);
    let st = &cfg.staircase;
    let numeric = a.mode == ModeName::Numeric;
    if numeric && a.v.is_empty() {
        return Err(CliError::Invalid("numeric mode needs at least one --v value".into()));
    }
    let kind_name = match kind {
        TransformKind::Sumudu => "sumudu",
        TransformKind::Laplace => "laplace",
    };
    // (v, s, rule, numeric)
    let mut rows = Vec::with_capacity(a.v.len());
    for &v in &a.v {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Invalid(format!("v must be positive, got {v}")));
        }
        let s = st.eval(v);
        if !rt.validity.contains(s) {
            return Err(CliError::Invalid(format!(
                "S(v) = {} at v = {v} lies outside the validity region ({}, {})",
                sig12(s),
                sig12(rt.validity.lower),
                sig12(rt.validity.upper)
            )));
        }
        let r = rt.expr.eval(s)?;
        let q = if numeric {
            Some(transform_numeric(kind, &d, st, v, &cfg.quadrature)?)
        } else {
            None
        };
        rows.push((v, s, r, q));
    }
    match cfg.format {
        Format::Csv => {
            let mut out = String::new();
            if rows.is_empty() {
                writeln!(out, "{}", rt.expr).unwrap();
                return ok(out.into_bytes());
            }
            writeln!(out, "# {kind_name}[{d}] = {}", rt.expr).unwrap();
            writeln!(out, "{}", if numeric { "v,s,rule,numeric,delta" } else { "v,s,rule" }).unwrap();
            for (v, s, r, q) in &rows {
                write!(out, "{},{},{}", sig12(*v), sig12(*s), sig12(*r)).unwrap();
                if let Some(q) = q {
                    write!(out, ",{},{}", sig12(*q), sig12(q - r)).unwrap();
                }
                out.push('\n');
            }
            ok(out.into_bytes())
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(v, s, r, q)| {
                    let mut row = json!({ "v": num(*v), "s": num(*s), "rule": num(*r) });
                    if let Some(q) = q {
                        row["numeric"] = num(*q);
                        row["delta"] = num(q - r);
                    }
                    row
                })
                .collect();
            ok(json_body(&json!({
                "kind": kind_name,
                "function": d.to_string(),
                "rule": rt.expr.to_string(),
                "rows": rows,
            })))
        }
    }
}

pub fn operator(cfg: &RunConfig, a: &OperatorArgs) -> Result<Outcome, CliError> {
    let d = parse_descriptor(&a.expr)?;
    let st = &cfg.staircase;
    let oc = &cfg.operator;
    let order = || {
        a.order
            .ok_or_else(|| CliError::Invalid("this operator needs --order".into()))
    };
    let mut values = Vec::with_capacity(a.x.len());
    for &x in &a.x {
        let v = match a.op {
            OpName::Local => local_fderivative(&d, st, x)?,
            OpName::Integral => fractal_integral(&d, st, 0.0, x, oc)?,
            OpName::RlIntegral => rl_integral(&d, st, order()?, x, oc)?,
            OpName::RlDerivative => rl_derivative(&d, st, order()?, x, oc)?,
            OpName::Caputo => caputo_derivative(&d, st, order()?, x, oc)?,
            OpName::NDerivative => n_derivative(&d, st, order()?, x, oc)?,
            OpName::Wsk => wsk_derivative(&d, st, order()?, a.n_gamma, x, oc)?,
        };
        values.push(v);
    }
    match cfg.format {
        Format::Csv => {
            let mut out = String::from("x,value\n");
            for (x, v) in a.x.iter().zip(&values) {
                writeln!(out, "{},{}", sig12(*x), sig12(*v)).unwrap();
            }
            ok(out.into_bytes())
        }
        Format::Json => ok(json_body(&json!({
            "function": d.to_string(),
            "order": a.order.map(num),
            "x": nums(&a.x),
            "value": nums(&values),
        }))),
    }
}

fn model_params(file: &FileConfig, a: &SolveArgs, tag: ModelTag) -> ModelParams {
    let mut p = file.params.unwrap_or_default();
    let overrides = [
        (a.d0, &mut p.d0),
        (a.d1, &mut p.d1),
        (a.s0, &mut p.s0),
        (a.s1, &mut p.s1),
        (a.d2, &mut p.d2),
        (a.s2, &mut p.s2),
        (a.lambda, &mut p.lambda),
        (a.k, &mut p.k),
        (a.beta, &mut p.beta),
        (a.gamma, &mut p.gamma),
        (a.n_gamma, &mut p.n_gamma),
        (a.p0, &mut p.p0),
    ];
    for (flag, slot) in overrides {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    p.expectations = tag.has_expectations();
    p
}

/// Steps used by the `--verify` forward solve.
const VERIFY_STEPS: usize = 2000;

pub fn solve(cfg: &RunConfig, file: &FileConfig, a: &SolveArgs) -> Result<Outcome, CliError> {
    let tag: ModelTag = a.model.parse()?;
    let params = model_params(file, a, tag);
    params.validate(tag)?;
    let t_start = a.t_start.or(file.t_start).unwrap_or(0.0);
    let t_end = a.t_end.or(file.t_end).unwrap_or(5.0);
    let steps = a.steps.or(file.steps).unwrap_or(100);
    if !(t_start >= 0.0 && t_end > t_start && t_end.is_finite()) {
        return Err(CliError::Invalid(format!("invalid time range [{t_start}, {t_end}]")));
    }
    if steps == 0 {
        return Err(CliError::Invalid("steps must be positive".into()));
    }
    let form = if a.as_printed {
        SolutionForm::AsPrinted
    } else {
        SolutionForm::Adopted
    };
    let grid = tabulation_grid(t_start, t_end, steps + 1);
    let st = &cfg.staircase;
    let traj = econ::solve(&params, tag, st, &grid, form)?;
    if !traj.stable {
        eprintln!(
            "note: the {tag} transient grows, so the price moves away from p* = {}",
            sig12(traj.equilibrium)
        );
    }
    let mut body = Vec::new();
    let fmt = match cfg.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    econ::emit_trajectory(&traj, &params, fmt, &mut body)?;
    let mut failure = None;
    if a.verify {
        let residual = econ::transform_residual(&params, tag, form)?;
        eprintln!("transform residual: {residual}");
        let fwd = econ::forward_solve(&params, st, tag, VERIFY_STEPS, t_end)?;
        let exact = econ::solve(&params, tag, st, &fwd.t_grid, form)?;
        let dev = fwd.sup_distance(&exact)?;
        eprintln!("forward solve ({VERIFY_STEPS} steps) max deviation: {}", sig12(dev));
        if !residual.is_zero() {
            failure = Some(CliError::Verification(format!(
                "the {tag} closed form does not satisfy the transformed model equation"
            )));
        }
    }
    Ok(Outcome { body, failure })
}

pub fn verify_suite(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let outcomes = run_suite();
    eprintln!("verify-suite finished in {:.2} s", start.elapsed().as_secs_f64());
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let body = match cfg.format {
        Format::Csv => {
            let mut out = String::from("id,check,result,detail\n");
            for o in &outcomes {
                writeln!(
                    out,
                    "{},{},{},{}",
                    o.id,
                    csv_field(o.name),
                    if o.passed { "pass" } else { "fail" },
                    csv_field(&o.detail)
                )
                .unwrap();
            }
            out.into_bytes()
        }
        Format::Json => json_body(&Value::Array(
            outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "check": o.name, "passed": o.passed, "detail": o.detail }))
                .collect(),
        )),
    };
    let failure = (failed > 0).then(|| CliError::Verification(format!("{failed} of {} checks failed", outcomes.len())));
    Ok(Outcome { body, failure })
}
