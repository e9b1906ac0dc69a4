use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use syndyn_core::collective::{
    contraction_deviation, hp_sigma_minus, hp_sigma_plus, order_parameter, sigma_minus, sigma_plus,
    DickeState, LadderResult,
};
use syndyn_core::doubled::{
    heat_relation_check, linear_ramp, mode_report, stationary_theta, FockCutoff, ModeReport,
    ThetaVacuum,
};
use syndyn_core::fibonacci::{fib, fib_pow};
use syndyn_core::output::{format_float, to_json_string};
use syndyn_core::syntax::{parse_script, run_script, Lexicon};
use syndyn_core::xbar::{counts_only, grow, symmetric, FTreeNode};

use crate::args::{Cli, Command, DickeOp, Format, Global, Route};
use crate::Failure;

pub fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if !(g.tail_tol > 0.0 && g.tail_tol.is_finite()) {
        return Err(Failure::Usage(format!("--tail-tol must be positive, got {}", g.tail_tol)));
    }
    if g.parallel_modes == 0 {
        return Err(Failure::Usage("--parallel-modes must be at least 1".into()));
    }
    if g.parallel_modes > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(g.parallel_modes)
            .build_global()
            .map_err(|e| Failure::Compute(e.to_string()))?;
    }
    match cli.command {
        Command::Tree { depth, counts_only, symmetric } => tree(g, depth, counts_only, symmetric),
        Command::Fib { n, matrix } => fibonacci(g, n, matrix),
        Command::Dicke { n, l, op, route } => dicke(g, n, l, op, route),
        Command::Bogoliubov { theta, modes, report, concept } => bogoliubov(g, theta, modes, report, concept),
        Command::Entropy { theta_sweep, bits, format } => entropy(g, &theta_sweep, bits, format),
        Command::Heat { omega, beta, ramp, rate, center } => heat(g, omega, beta, &ramp, rate, center),
        Command::Derive { lexicon, script } => derive(g, &lexicon, &script),
        Command::Selftest { only, json } => selftest(g, &only, json),
    }
}

fn emit_text(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Compute(format!("writing {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Compute(e.to_string()))
        }
    }
}

fn emit<T: Serialize>(g: &Global, value: &T) -> Result<(), Failure> {
    let text = to_json_string(value).map_err(|e| Failure::Compute(e.to_string()))?;
    emit_text(g, &text)
}

fn cutoff(g: &Global) -> Result<FockCutoff, Failure> {
    Ok(FockCutoff::with_tolerance(g.n_max, g.tail_tol)?)
}

/// Splits `a:b:c` into three fields.
fn triple<'a>(flag: &str, s: &'a str) -> Result<[&'a str; 3], Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    parts
        .try_into()
        .map_err(|_| Failure::Usage(format!("--{flag} expects three ':'-separated fields, got '{s}'")))
}

fn number<T: std::str::FromStr>(flag: &str, s: &str) -> Result<T, Failure> {
    s.trim().parse().map_err(|_| Failure::Usage(format!("--{flag}: cannot parse '{s}'")))
}

/// Points `a, a + step, …` up to `b` inclusive, allowing for rounding in `(b − a)/step`.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>, Failure> {
    let [a, b, step] = triple("theta-sweep", s)?;
    let (a, b, step): (f64, f64, f64) =
        (number("theta-sweep", a)?, number("theta-sweep", b)?, number("theta-sweep", step)?);
    if !(a.is_finite() && b.is_finite() && step > 0.0 && step.is_finite() && b >= a) {
        return Err(Failure::Usage(format!("--theta-sweep needs start ≤ stop and step > 0, got '{s}'")));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| a + step * k as f64).collect())
}

fn tree(g: &Global, depth: usize, only_counts: bool, mirror: bool) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct TreeOut {
        depth: usize,
        symmetric: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        nodes: Option<Vec<FTreeNode>>,
        counts: Vec<[u64; 2]>,
        totals: Vec<u64>,
    }
    let (nodes, counts) = if only_counts {
        let c = counts_only(depth)?;
        let c = if mirror { c.into_iter().map(|(z, o)| (o, z)).collect() } else { c };
        (None, c)
    } else {
        let t = grow(depth)?;
        let t = if mirror { symmetric(&t) } else { t };
        (Some(t.nodes().to_vec()), t.counts())
    };
    emit(
        g,
        &TreeOut {
            depth,
            symmetric: mirror,
            nodes,
            totals: counts.iter().map(|&(z, o)| z + o).collect(),
            counts: counts.into_iter().map(|(z, o)| [z, o]).collect(),
        },
    )
}

fn fibonacci(g: &Global, n: u64, matrix: bool) -> Result<(), Failure> {
    let wide = |x: i128| {
        u64::try_from(x).map_err(|_| Failure::Compute(format!("F_{n} = {x} does not fit a JSON integer")))
    };
    if matrix {
        let m = fib_pow(n)?;
        let mut rows = [[0u64; 2]; 2];
        for (r, row) in rows.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = wide(m.entry(r, c))?;
            }
        }
        emit(g, &json!({ "n": n, "matrix": rows }))
    } else {
        emit(g, &json!({ "n": n, "fib": wide(fib(n)?)? }))
    }
}

fn dicke(g: &Global, n: u64, l: u64, op: DickeOp, route: Route) -> Result<(), Failure> {
    let s = DickeState::new(n, l)?;
    let deviation = contraction_deviation(n, l)?;
    let ladder = |r: LadderResult| (r.coefficient, r.state);
    let (coefficient, state) = match (op, route) {
        (DickeOp::SigmaPlus, Route::Ladder) => ladder(sigma_plus(s)),
        (DickeOp::SigmaPlus, Route::Hp) => ladder(hp_sigma_plus(s)),
        (DickeOp::SigmaMinus, Route::Ladder) => ladder(sigma_minus(s)),
        (DickeOp::SigmaMinus, Route::Hp) => ladder(hp_sigma_minus(s)),
        (DickeOp::S3, _) => (order_parameter(s), Some(s)),
        (DickeOp::Contraction, _) => (deviation, Some(s)),
    };
    let op = match op {
        DickeOp::SigmaPlus => "sigma+",
        DickeOp::SigmaMinus => "sigma-",
        DickeOp::S3 => "s3",
        DickeOp::Contraction => "contraction",
    };
    emit(g, &json!({ "n": n, "l": l, "op": op, "coefficient": coefficient, "state": state, "deviation": deviation }))
}

fn bogoliubov(g: &Global, theta: f64, modes: usize, report: bool, concept: Option<String>) -> Result<(), Failure> {
    if modes == 0 {
        return Err(Failure::Usage("--modes must be at least 1".into()));
    }
    let cut = cutoff(g)?;
    let strip = |mut m: ModeReport| {
        if !report {
            m.weights.clear();
        }
        m
    };
    if modes == 1 && concept.is_none() {
        return emit(g, &strip(mode_report(theta, cut)?));
    }
    let mut r = ThetaVacuum::new(vec![theta; modes], cut)?.report(concept, g.parallel_modes > 1)?;
    r.modes = r.modes.into_iter().map(strip).collect();
    emit(g, &r)
}

fn entropy(g: &Global, sweep: &str, bits: bool, format: Format) -> Result<(), Failure> {
    let thetas = parse_sweep(sweep)?;
    let cut = cutoff(g)?;
    let unit = if bits { std::f64::consts::LN_2 } else { 1.0 };
    let one = |&t: &f64| mode_report(t, cut);
    let rows: Vec<ModeReport> = if g.parallel_modes > 1 {
        thetas.par_iter().map(one).collect::<Result<_, _>>()?
    } else {
        thetas.iter().map(one).collect::<Result<_, _>>()?
    };
    match format {
        Format::Csv => {
            let mut text = String::from("theta,entropy,number,overlap_with_bare\n");
            for r in &rows {
                let cells = [r.theta, r.entropy / unit, r.number_expectation, r.overlap_with_bare];
                text.push_str(&cells.map(format_float).join(","));
                text.push('\n');
            }
            emit_text(g, &text)
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "theta": r.theta,
                        "entropy": r.entropy / unit,
                        "number": r.number_expectation,
                        "overlap_with_bare": r.overlap_with_bare,
                    })
                })
                .collect();
            emit(g, &json!({ "unit": if bits { "bits" } else { "nats" }, "rows": rows }))
        }
    }
}

fn heat(g: &Global, omega: f64, beta: f64, ramp: &str, rate: f64, center: Option<f64>) -> Result<(), Failure> {
    let [t0, t1, steps] = triple("ramp", ramp)?;
    let (t0, t1, steps): (f64, f64, usize) = (number("ramp", t0)?, number("ramp", t1)?, number("ramp", steps)?);
    let center = match center {
        Some(c) => c,
        None => stationary_theta(omega, beta)?,
    };
    let path = linear_ramp(t0, t1, steps, center, rate)?;
    emit(g, &heat_relation_check(&path, omega, beta, cutoff(g)?)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Compute(format!("reading {}: {e}", path.display())))
}

fn derive(g: &Global, lexicon: &Path, script: &Path) -> Result<(), Failure> {
    let lex = Lexicon::from_json(&read(lexicon)?).map_err(|e| Failure::Compute(e.to_string()))?;
    let steps = parse_script(&read(script)?).map_err(|e| Failure::Compute(e.to_string()))?;
    let outcome = run_script(Arc::new(lex), &steps);
    emit(g, &outcome)?;
    match outcome.errors.first() {
        None => Ok(()),
        Some(e) if e.crash => {
            eprintln!("derivation crashed at step {} ({}): {}", e.step, e.kind, e.message);
            Err(Failure::Crash)
        }
        Some(e) => Err(Failure::Compute(format!("step {} ({}): {}", e.step, e.kind, e.message))),
    }
}

fn selftest(g: &Global, only: &[u8], as_json: bool) -> Result<(), Failure> {
    let criteria = syndyn_acceptance::criteria();
    if let Some(bad) = only.iter().find(|id| !criteria.iter().any(|c| c.id == **id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let chosen = criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id));
    let outcomes: Vec<_> = chosen.map(syndyn_acceptance::run).collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    if as_json {
        let rows: Vec<_> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id,
                    "title": o.title,
                    "passed": o.passed,
                    "detail": o.detail,
                    "seconds": o.elapsed.as_secs_f64(),
                    "budget_seconds": o.budget.as_secs_f64(),
                })
            })
            .collect();
        emit(g, &json!({ "passed": passed, "total": outcomes.len(), "criteria": rows }))?;
    } else {
        let mut text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
        text.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
        emit_text(g, &text)?;
    }
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(Failure::Compute(format!("{} criteria failed", outcomes.len() - passed)))
    }
}
