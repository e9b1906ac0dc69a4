//! Acceptance criteria for syndyn, each checked against an independent
//! oracle. Used by the `selftest` subcommand and the acceptance test target.

pub mod golden;
pub mod oracle;
pub mod random;

use std::fmt;
use std::time::{Duration, Instant};

use syndyn_core::collective::{
    contraction_deviation, hp_sigma_minus, hp_sigma_plus, order_parameter, sigma_minus, sigma_plus,
    su2_commutator_expectation, DickeState,
};
use syndyn_core::doubled::{
    annihilation_residuals, entropy_report, foliation_overlap, generator_vacuum_vector,
    heat_relation_check, linear_ramp, minimize_free_energy, mode_overlap, number_routes,
    overlap_with_bare, stationary_theta, theta_vacuum_vector, FockCutoff,
};
use syndyn_core::fibonacci::{fib, fib_matrix, fib_pow, IntMatrix2};
use syndyn_core::su2::{pauli, Matrix2, Pauli};
use syndyn_core::syntax::LfNode;
use syndyn_core::xbar::{counts_only, grow};

/// Entropy of one mode at θ = 0.5, `cosh²θ ln cosh²θ − sinh²θ ln sinh²θ`.
pub const ENTROPY_AT_HALF: f64 = 0.659_452_959_168;

type Check = fn() -> Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub budget: Duration,
    check: Check,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tree_counts() -> Result<String, String> {
    let counts = counts_only(25).map_err(|e| e.to_string())?;
    ensure(counts.len() == 26, || format!("{} steps", counts.len()))?;
    for (n, &(zeros, ones)) in counts.iter().enumerate() {
        let total = (zeros + ones) as i128;
        let expect = oracle::fib_iter(n as u64 + 1);
        ensure(total == expect, || format!("step {n}: {total} != Fib({}) = {expect}", n + 1))?;
        let via_matrix = fib(n as u64 + 1).map_err(|e| e.to_string())?;
        ensure(total == via_matrix, || format!("step {n}: matrix route gives {via_matrix}"))?;
        if n > 0 {
            let split = (oracle::fib_iter(n as u64 - 1), oracle::fib_iter(n as u64));
            ensure((zeros as i128, ones as i128) == split, || format!("step {n}: ({zeros}, {ones})"))?;
        }
    }
    let tree = grow(20).map_err(|e| e.to_string())?;
    ensure(tree.counts() == counts[..=20], || "materialized tree disagrees with recurrence".into())?;
    let last = counts[25].0 + counts[25].1;
    Ok(format!("26 steps exact, step 25 total = {last}"))
}

fn fibonacci_identities() -> Result<String, String> {
    let f = fib_matrix();
    for n in 1..=40u64 {
        let m = fib_pow(n).map_err(|e| e.to_string())?;
        let (a, b, c) = (oracle::fib_iter(n + 1), oracle::fib_iter(n), oracle::fib_iter(n - 1));
        ensure(m == IntMatrix2([[a, b], [b, c]]), || format!("F^{n} = {m:?}"))?;
        let decomposed = IntMatrix2::IDENTITY
            .checked_scale(c)
            .and_then(|i| f.checked_scale(b).and_then(|g| i.checked_add(&g)));
        ensure(decomposed == Some(m), || format!("F^{n} != F_(n-1) I + F_n F"))?;
    }
    let table: [([[i128; 2]; 2], i128, i128); 6] = [
        ([[1, 1], [1, 0]], 0, 1),
        ([[2, 1], [1, 1]], 1, 1),
        ([[3, 2], [2, 1]], 1, 2),
        ([[5, 3], [3, 2]], 2, 3),
        ([[8, 5], [5, 3]], 3, 5),
        ([[13, 8], [8, 5]], 5, 8),
    ];
    for (k, (entries, ci, cf)) in table.iter().enumerate() {
        let n = k as u64 + 1;
        let m = fib_pow(n).map_err(|e| e.to_string())?;
        ensure(m.0 == *entries, || format!("table row n={n}: {m:?}"))?;
        let sum = IntMatrix2::IDENTITY.checked_scale(*ci).zip(f.checked_scale(*cf));
        let sum = sum.and_then(|(x, y)| x.checked_add(&y));
        ensure(sum == Some(m), || format!("table row n={n}: {ci} I + {cf} F"))?;
    }
    let half = Matrix2::from_real([[0.5, 0.0], [0.0, 0.5]]);
    let built = half + pauli(Pauli::S3) + pauli(Pauli::S1) + pauli(Pauli::S1);
    let target = Matrix2::from_real([[1.0, 1.0], [1.0, 0.0]]);
    ensure(built.max_abs_diff(&target) == 0.0, || format!("½I + σ₃ + 2σ₁ = {built:?}"))?;
    Ok("n = 1..40 exact, table n = 1..6 verbatim, F = ½I + σ₃ + 2σ₁".into())
}

fn dicke_oracle() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for n in 1..=10u32 {
        for l in 0..=n {
            let s = DickeState::new(n as u64, l as u64).map_err(|e| e.to_string())?;
            let v = oracle::dicke_vector(n, l);
            for (raise, formula, hp) in [
                (true, sigma_plus(s), hp_sigma_plus(s)),
                (false, sigma_minus(s), hp_sigma_minus(s)),
            ] {
                let moved = if raise { oracle::collective_raise(n, &v) } else { oracle::collective_lower(n, &v) };
                let target_l = if raise { l.checked_add(1).filter(|&t| t <= n) } else { l.checked_sub(1) };
                let (coef, res) = match target_l {
                    Some(t) => {
                        let w = oracle::dicke_vector(n, t);
                        let c = oracle::dot(&moved, &w);
                        (c, oracle::residual(&moved, c, &w))
                    }
                    None => (0.0, moved.iter().map(|x| x.abs()).fold(0.0, f64::max)),
                };
                ensure(res <= 1e-10, || format!("N={n} l={l}: image not a Dicke state ({res:e})"))?;
                let want_state = target_l.map(|t| DickeState::new(n as u64, t as u64).unwrap());
                for (route, r) in [("ladder", formula), ("HP", hp)] {
                    let d = (r.coefficient - coef).abs();
                    worst = worst.max(d);
                    ensure(d <= 1e-10, || format!("{route} N={n} l={l} raise={raise}: {} vs {coef}", r.coefficient))?;
                    if coef != 0.0 {
                        ensure(r.state == want_state, || format!("{route} N={n} l={l}: wrong target"))?;
                    }
                }
                checked += 1;
            }
            let s3 = oracle::collective_s3(n, &v);
            ensure((order_parameter(s) - s3).abs() <= 1e-10, || format!("σ₃ N={n} l={l}"))?;
            let comm = oracle::dot(&v, &oracle::collective_lower(n, &oracle::collective_raise(n, &v)))
                - oracle::dot(&v, &oracle::collective_raise(n, &oracle::collective_lower(n, &v)));
            ensure((su2_commutator_expectation(s) - comm).abs() <= 1e-10, || format!("[σ⁻,σ⁺] N={n} l={l}"))?;
        }
    }
    Ok(format!("{checked} ladder actions vs 2^N brute force, max diff {worst:.1e}"))
}

fn contraction() -> Result<String, String> {
    let mut samples = Vec::new();
    for &n in &[1u64, 2, 3, 10, 99, 1_000, 12_345, 100_000, 999_983, 1_000_000] {
        for l in [0, 1, 2, 10, n / 7, n / 3, n / 2, n - 1, n] {
            if l <= n {
                samples.push((n, l));
            }
        }
    }
    let mut worst: f64 = 0.0;
    for &(n, l) in &samples {
        let d = contraction_deviation(n, l).map_err(|e| e.to_string())?;
        let exact = 2.0 * l as f64 / n as f64;
        worst = worst.max((d - exact).abs());
        ensure((d - exact).abs() <= 1e-12, || format!("N={n} l={l}: {d} vs {exact}"))?;
        let s = DickeState::new(n, l).map_err(|e| e.to_string())?;
        let (up, down) = (sigma_plus(s).coefficient, sigma_minus(s).coefficient);
        let via_ladder = ((up * up - down * down) / n as f64 - 1.0).abs();
        ensure((via_ladder - exact).abs() <= 1e-9, || format!("ladder route N={n} l={l}: {via_ladder}"))?;
    }
    let d = contraction_deviation(10_000, 10).map_err(|e| e.to_string())?;
    ensure((d - 2.0e-3).abs() <= 1e-15, || format!("(1e4, 10) -> {d}"))?;
    Ok(format!("{} samples, max |dev − 2l/N| = {worst:.1e}, (1e4,10) = {d:.3e}", samples.len()))
}

fn cutoff60() -> Result<FockCutoff, String> {
    FockCutoff::new(60).map_err(|e| e.to_string())
}

fn bogoliubov_vacuum() -> Result<String, String> {
    let (theta, cut) = (0.5, cutoff60()?);
    let (ra, rt) = annihilation_residuals(theta, cut).map_err(|e| e.to_string())?;
    ensure(ra <= 1e-12 && rt <= 1e-12, || format!("annihilation residuals {ra:e}, {rt:e}"))?;
    let nr = number_routes(theta, cut).map_err(|e| e.to_string())?;
    let s2 = theta.sinh().powi(2);
    ensure((nr.n_a - s2).abs() <= 1e-9, || format!("<N> = {} vs {s2}", nr.n_a))?;
    ensure((nr.tilde_route - s2).abs() <= 1e-9, || format!("tilde route {}", nr.tilde_route))?;
    ensure((nr.n_a - nr.n_tilde).abs() <= 1e-12, || "N_A != N_tilde".into())?;
    let o = overlap_with_bare(theta, cut).map_err(|e| e.to_string())?;
    ensure((o - 1.0 / theta.cosh()).abs() <= 1e-12, || format!("<0|0(θ)> = {o}"))?;
    let a = theta_vacuum_vector(theta, cut).map_err(|e| e.to_string())?;
    let b = generator_vacuum_vector(theta, cut).map_err(|e| e.to_string())?;
    let gap = (&a - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    ensure(gap <= 1e-9, || format!("generator route differs by {gap:e}"))?;
    Ok(format!("residual {:.1e}, <N> = {:.12}, overlap = {o:.12}, exp route gap {gap:.1e}", ra.max(rt), nr.n_a))
}

fn foliation() -> Result<String, String> {
    let cut = cutoff60()?;
    for (x, y) in [(0.5, 0.0), (0.0, 0.5), (0.2, 0.9), (-0.4, 0.3), (0.6, 0.6)] {
        let o = mode_overlap(x, y, cut).map_err(|e| e.to_string())?;
        let want = 1.0 / (x - y).cosh();
        ensure((o - want).abs() <= 1e-12, || format!("mode overlap ({x}, {y}) = {o} vs {want}"))?;
    }
    let mut prev = 1.0;
    let mut last = 1.0;
    for m in 1..=100 {
        let r = foliation_overlap(&vec![0.5; m], &vec![0.0; m], cut, m % 2 == 0).map_err(|e| e.to_string())?;
        ensure(r.max_mode_deviation <= 1e-12, || format!("M={m}: per-mode gap {:e}", r.max_mode_deviation))?;
        ensure(r.overlap < prev, || format!("M={m}: overlap not decreasing"))?;
        prev = r.overlap;
        last = r.overlap;
    }
    ensure(last < 1e-5, || format!("M=100 overlap {last:e}"))?;
    Ok(format!("per-mode 1/cosh Δθ to 1e-12, M=100 product = {last:.6e}"))
}

fn entropy() -> Result<String, String> {
    let theta = 0.5;
    let r = entropy_report(theta, cutoff60()?).map_err(|e| e.to_string())?;
    let by_weights = oracle::entropy_by_weights(theta);
    let (c2, s2) = (theta.cosh().powi(2), theta.sinh().powi(2));
    let closed = c2 * c2.ln() - s2 * s2.ln();
    for (name, v) in [("weights", r.entropy), ("operator", r.operator_route), ("closed form", r.closed_form)] {
        ensure((v - by_weights).abs() <= 1e-9, || format!("{name} route {v} vs oracle {by_weights}"))?;
        ensure((v - closed).abs() <= 1e-9, || format!("{name} route {v} vs formula {closed}"))?;
    }
    ensure((r.entropy - ENTROPY_AT_HALF).abs() <= 1e-9, || format!("S = {}", r.entropy))?;
    Ok(format!("S(0.5) = {:.12} by weights, operator and closed form", r.entropy))
}

fn free_energy_and_heat() -> Result<String, String> {
    let cut = cutoff60()?;
    let m = minimize_free_energy(1.0, 1.0, cut).map_err(|e| e.to_string())?;
    let bose = 1.0 / (1f64.exp() - 1.0);
    ensure((m.sinh2 - bose).abs() <= 1e-6, || format!("sinh²θ* = {} vs {bose}", m.sinh2))?;
    let star = stationary_theta(1.0, 1.0).map_err(|e| e.to_string())?;
    ensure(oracle::free_energy_slope(star, 1.0, 1.0).abs() <= 1e-12, || "θ* not stationary".into())?;
    let mut worst: f64 = 0.0;
    for offset in [0.0, 3.7e-4, -6.1e-4] {
        let ramp = linear_ramp(0.0, 0.1, 100, star + offset, 1.0).map_err(|e| e.to_string())?;
        let r = heat_relation_check(&ramp, 1.0, 1.0, cut).map_err(|e| e.to_string())?;
        ensure(r.brackets_stationary, || "ramp misses θ*".into())?;
        ensure(r.max_residual <= 1e-4, || format!("heat residual {:e} (offset {offset})", r.max_residual))?;
        worst = worst.max(r.max_residual);
    }
    Ok(format!("sinh²θ* = {:.9} (1/(e−1) = {bose:.9}), heat residual ≤ {worst:.1e}", m.sinh2))
}

fn count_positions(n: &LfNode, lex: &str, out: &mut (usize, usize)) {
    match n {
        LfNode::Leaf { lex: l, pronounced, .. } if l == lex => {
            out.0 += 1;
            out.1 += usize::from(*pronounced);
        }
        LfNode::Leaf { .. } => {}
        LfNode::Set { members, .. } => members.iter().for_each(|m| count_positions(m, lex, out)),
    }
}

fn narrow_syntax() -> Result<String, String> {
    let stats = random::check_random_derivations(0x5eed, 10_000);
    ensure(stats.violations.is_empty(), || {
        format!("{} violations, first: {}", stats.violations.len(), stats.violations[0])
    })?;
    ensure(stats.derivations == 10_000, || format!("{} derivations", stats.derivations))?;
    ensure(stats.pic_rejections > 0 && stats.internal_merges > 0, || "no PIC or IM coverage".into())?;
    let (outcome, text) = golden::render()?;
    ensure(outcome.converged(), || format!("golden derivation failed: {:?}", outcome.errors))?;
    let pf = outcome.pf.clone().unwrap_or_default().join(" ");
    ensure(pf == "which books did you read", || format!("pf = {pf:?}"))?;
    let mut which = (0, 0);
    count_positions(outcome.lf.as_ref().expect("converged"), "which", &mut which);
    ensure(which == (2, 1), || format!("'which' occurs {} times, pronounced {}", which.0, which.1))?;
    ensure(text == golden::EXPECTED, || "output differs from the golden file".into())?;
    Ok(format!(
        "10^4 derivations ({} EM, {} IM, {} PIC rejections, {} closes), 0 violations; golden match",
        stats.external_merges, stats.internal_merges, stats.pic_rejections, stats.closes
    ))
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, secs, check| Criterion { id, title, budget: Duration::from_secs(secs), check };
    vec![
        c(1, "Fibonacci tree counts", 1, tree_counts as Check),
        c(2, "Fibonacci matrix identities", 1, fibonacci_identities),
        c(3, "Dicke brute-force oracle", 30, dicke_oracle),
        c(4, "Contraction deviation", 1, contraction),
        c(5, "Bogoliubov θ-vacuum", 10, bogoliubov_vacuum),
        c(6, "Foliation overlaps", 5, foliation),
        c(7, "Entropy", 1, entropy),
        c(8, "Free energy and heat", 5, free_energy_and_heat),
        c(9, "Narrow syntax properties", 60, narrow_syntax),
    ]
}

pub fn run(c: &Criterion) -> Outcome {
    let start = Instant::now();
    let result = (c.check)();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e),
    };
    if passed && elapsed > c.budget {
        passed = false;
        detail = format!("over budget of {}s: {detail}", c.budget.as_secs());
    }
    Outcome { id: c.id, title: c.title, passed, detail, elapsed, budget: c.budget }
}

pub fn run_all() -> Vec<Outcome> {
    criteria().iter().map(run).collect()
}
