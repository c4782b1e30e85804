use std::path::Path;
use std::sync::Arc;

use semicrossed::algebra::{opnorm_bracket, Series, TruncationParams};
use semicrossed::dynamics::DynamicalSystem;
use semicrossed::harness::{case_rng, crosscheck, random_series_with, EnumBudget};
use semicrossed::ideals::{Decision, IdealSpec, Verdict};
use semicrossed::units::{residual, verify_witness, Side, UnitNet, Witness};
use serde::Serialize;
use serde_json::{json, Value};

use crate::files::{load_series, load_spec, load_system, load_witness};
use crate::{Cli, CliError, Command, CrosscheckArgs, DecideArgs};

pub struct Output {
    pub record: Value,
    pub code: u8,
}

fn record(schema: &str, body: impl Serialize) -> Value {
    let mut v = json!({ "schema": schema });
    match serde_json::to_value(body).expect("serializable record") {
        Value::Object(fields) => v.as_object_mut().unwrap().extend(fields),
        other => {
            v["value"] = other;
        }
    }
    v
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => 0,
        Verdict::No => 1,
    }
}

fn need<'a>(path: &'a Option<std::path::PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref().ok_or_else(|| CliError::Input(format!("--{flag} is required")))
}

fn system(cli: &Cli) -> Result<Arc<DynamicalSystem>, CliError> {
    load_system(need(&cli.system, "system")?)
}

fn spec(cli: &Cli) -> Result<IdealSpec, CliError> {
    load_spec(need(&cli.spec, "spec")?, system(cli)?)
}

/// A spec that satisfies `(*)` and its form's invariants.
fn valid_spec(cli: &Cli) -> Result<IdealSpec, CliError> {
    let spec = spec(cli)?;
    if let Some(c) = spec.validate_star()?.first_failure() {
        return Err(CliError::Input(format!("invalid spec: {}: {}", c.name, c.detail)));
    }
    Ok(spec)
}

fn series(cli: &Cli) -> Result<Series, CliError> {
    load_series(need(&cli.series, "series")?)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Validate { radius } => validate(cli, *radius),
        Command::Decide(args) => decide(cli, args),
        Command::Witness { side } => witness(cli, *side),
        Command::Unit { window } => unit(cli, *window),
        Command::Residual { side, window } => residual_cmd(cli, *side, *window),
        Command::Norm { schedule } => norm(cli, schedule),
        Command::Crosscheck(args) => crosscheck_cmd(cli, args),
        Command::VerifyWitness { witness, samples } => verify(cli, witness, *samples),
    }
}

fn validate(cli: &Cli, radius: i64) -> Result<Output, CliError> {
    let sys = system(cli)?;
    let sys_report = sys.validate(radius);
    let spec_report = match &cli.spec {
        Some(p) => Some(load_spec(p, sys.clone())?.validate_star()?),
        None => None,
    };
    let passed = sys_report.passed() && spec_report.as_ref().is_none_or(|r| r.passed());
    let rec = record(
        "semicrossed.validate/1",
        json!({ "passed": passed, "system": sys_report, "spec": spec_report }),
    );
    Ok(Output { record: rec, code: if passed { 0 } else { 2 } })
}

fn decide(cli: &Cli, args: &DecideArgs) -> Result<Output, CliError> {
    let spec = spec(cli)?;
    let (question, decision): (&str, Decision) = if args.right {
        ("right", spec.decide_right_au()?)
    } else if args.left {
        ("left", spec.decide_left_au()?)
    } else if args.au {
        ("au", spec.decide_au()?)
    } else {
        ("m-ideal", spec.decide_m_ideal()?)
    };
    let code = verdict_code(decision.verdict);
    let rec = record(
        "semicrossed.decision/1",
        json!({ "question": question, "system": spec.system().label(), "spec": spec.to_string(), "decision": decision }),
    );
    Ok(Output { record: flatten_decision(rec), code })
}

/// Lifts the decision fields to the top level of the record.
fn flatten_decision(mut rec: Value) -> Value {
    if let Some(Value::Object(d)) = rec.as_object_mut().and_then(|o| o.remove("decision")) {
        rec.as_object_mut().unwrap().extend(d);
    }
    rec
}

fn witness(cli: &Cli, side: Side) -> Result<Output, CliError> {
    let spec = spec(cli)?;
    let decision = match side {
        Side::Right => spec.decide_right_au()?,
        Side::Left => spec.decide_left_au()?,
    };
    let rec = record(
        "semicrossed.witness/1",
        json!({
            "side": side,
            "system": spec.system().label(),
            "spec": spec.to_string(),
            "verdict": decision.verdict,
            "rule": decision.rule,
            "witness": decision.witness(),
        }),
    );
    Ok(Output { record: rec, code: verdict_code(decision.verdict) })
}

fn unit(cli: &Cli, radius: usize) -> Result<Output, CliError> {
    let spec = valid_spec(cli)?;
    let net = UnitNet::new(&spec);
    let u = net.element(radius)?;
    let rec = record(
        "semicrossed.unit/1",
        json!({
            "spec": spec.to_string(),
            "radius": radius,
            "window": net.window(radius),
            "element": u.to_string(),
            "l1_norm": u.l1_norm().to_string(),
        }),
    );
    Ok(Output { record: rec, code: 0 })
}

fn residual_cmd(cli: &Cli, side: Side, radius: usize) -> Result<Output, CliError> {
    let spec = valid_spec(cli)?;
    let a = series(cli)?;
    let window = spec.system().window(radius);
    let r = residual(&spec, side, &a, &window)?;
    let rec = record(
        "semicrossed.residual/1",
        json!({
            "side": side,
            "spec": spec.to_string(),
            "series": a.to_string(),
            "radius": radius,
            "residual": r.to_string(),
            "residual_f64": r.to_f64(),
            "exact_zero": r.is_zero(),
        }),
    );
    Ok(Output { record: rec, code: 0 })
}

fn parse_schedule(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let bad = || CliError::Input(format!("schedule must be RADIUS:EXTRA_LEVELS[,...], got {s:?}"));
    s.split(',')
        .map(|step| {
            let (r, k) = step.trim().split_once(':').ok_or_else(bad)?;
            Ok((r.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn norm(cli: &Cli, schedule: &str) -> Result<Output, CliError> {
    let sys = system(cli)?;
    let a = series(cli)?;
    for x in a.support_points() {
        if !sys.in_carrier(x) {
            return Err(CliError::Input(format!("series is supported at {x}, outside the carrier")));
        }
    }
    let steps = parse_schedule(schedule)?;
    let params: Vec<TruncationParams> =
        steps.iter().map(|&(r, k)| TruncationParams::adequate_for(&a, sys.window(r), k)).collect();
    let bracket = opnorm_bracket(&sys, &a, &params)?;
    let rec = record(
        "semicrossed.norm/1",
        json!({
            "series": a.to_string(),
            "schedule": steps.iter().map(|(r, k)| json!({ "radius": r, "extra_levels": k })).collect::<Vec<_>>(),
            "lower": bracket.lower,
            "upper": bracket.upper.to_string(),
            "upper_f64": bracket.upper.to_f64(),
            "sup_coeff_norm": a.sup_coeff_norm().to_string(),
            "steps": bracket.steps,
        }),
    );
    Ok(Output { record: rec, code: 0 })
}

fn crosscheck_cmd(cli: &Cli, args: &CrosscheckArgs) -> Result<Output, CliError> {
    let b = EnumBudget {
        max_carrier: args.max_carrier,
        max_stable_len: args.max_stable_len,
        template_window: args.template_window,
        seed: cli.seed,
        sample_count: args.sample_count,
        cond2_horizon: args.cond2_horizon,
        obstruction_samples: args.obstruction_samples,
    };
    if b.max_carrier > 6 || b.max_stable_len > 4 {
        return Err(CliError::Capability(format!(
            "enumeration budget too large (max_carrier {} > 6 or max_stable_len {} > 4)",
            b.max_carrier, b.max_stable_len
        )));
    }
    let report = crosscheck(&b, args.mutation);
    let code = if report.passed() { 0 } else { 1 };
    Ok(Output { record: serde_json::to_value(&report).expect("serializable report"), code })
}

fn verify(cli: &Cli, path: &Path, samples: usize) -> Result<Output, CliError> {
    let spec = valid_spec(cli)?;
    let w: Witness = load_witness(path)?;
    let net = UnitNet::new(&spec);
    let b = EnumBudget { seed: cli.seed, ..EnumBudget::default() };
    let mut vs: Vec<Series> = (0..=b.template_window).map(|r| net.element(r)).collect::<Result<_, _>>()?;
    let mut rng = case_rng(cli.seed, 0);
    for _ in 0..samples {
        vs.push(random_series_with(spec.system(), Some(&spec), &b, &mut rng)?);
    }
    let checks = verify_witness(&spec, &w, &vs)?;
    let passed = checks.iter().all(|c| c.pass);
    let failures: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    let rec = record(
        "semicrossed.verify-witness/1",
        json!({
            "spec": spec.to_string(),
            "witness": w,
            "passed": passed,
            "checks": checks.len(),
            "failures": failures,
        }),
    );
    Ok(Output { record: rec, code: if passed { 0 } else { 1 } })
}
