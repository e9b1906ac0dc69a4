//! Pair-number weights, entropy, free energy and the heat relation.
//!
//! Entropy is returned as the nonnegative `−Σ W_n ln W_n` (nats). This is
//! exactly the vacuum expectation of the entropy operator
//! `S_A = −(A†A ln sinh²θ − AA† ln cosh²θ)`; the bare sum `Σ W_n ln W_n` is its
//! negative.

use rayon::prelude::*;
use serde::Serialize;

use super::operator::{ladder_ops, FockCutoff, TwoModeOperator};
use super::vacuum::{overlap_with_bare, pair_amplitudes, theta_vacuum_vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weights {
    /// `W_n = tanh^{2n}θ / cosh²θ`, `n = 0..=n_max`.
    pub weights: Vec<f64>,
    /// `1 − Σ W_n = tanh^{2(n_max+1)}θ`.
    pub tail: f64,
}

pub fn weights(theta: f64, cutoff: FockCutoff) -> Weights {
    Weights {
        weights: pair_amplitudes(theta, cutoff).into_iter().map(|a| a * a).collect(),
        tail: cutoff.tail(theta),
    }
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `cosh²θ ln cosh²θ − sinh²θ ln sinh²θ`.
pub fn entropy_closed_form(theta: f64) -> f64 {
    xlnx(theta.cosh().powi(2)) - xlnx(theta.sinh().powi(2))
}

/// The entropy operator `S_A` as a (diagonal) matrix.
///
/// At θ = 0 the coefficient `ln sinh²θ` diverges on states the bare vacuum
/// never populates; the operator is taken as zero there.
pub fn entropy_operator(theta: f64, cutoff: FockCutoff) -> TwoModeOperator {
    if theta == 0.0 {
        return TwoModeOperator::zero(cutoff);
    }
    let ops = ladder_ops(cutoff);
    let ln_s2 = theta.sinh().powi(2).ln();
    let ln_c2 = theta.cosh().powi(2).ln();
    let number = &ops.a_dag * &ops.a;
    let anti = &ops.a * &ops.a_dag;
    -&(&number.scale_real(ln_s2) - &anti.scale_real(ln_c2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `−Σ W_n ln W_n` over the truncated weights.
    pub entropy: f64,
    /// `⟨0(θ)|S_A|0(θ)⟩` from the operator matrices.
    pub operator_route: f64,
    pub closed_form: f64,
    pub tail: f64,
}

pub fn entropy_report(theta: f64, cutoff: FockCutoff) -> Result<EntropyReport> {
    let tail = cutoff.check(theta)?;
    let w = weights(theta, cutoff);
    let entropy = -w.weights.iter().map(|&x| xlnx(x)).sum::<f64>();
    let v = theta_vacuum_vector(theta, cutoff)?;
    let operator_route = entropy_operator(theta, cutoff).expectation(&v).re;
    Ok(EntropyReport {
        entropy,
        operator_route,
        closed_form: entropy_closed_form(theta),
        tail,
    })
}

/// `−Σ W_n ln W_n` in nats.
pub fn entropy(theta: f64, cutoff: FockCutoff) -> Result<f64> {
    Ok(entropy_report(theta, cutoff)?.entropy)
}

/// Mean pair number `Σ n W_n` and entropy, both from the weights.
fn number_and_entropy(theta: f64, cutoff: FockCutoff) -> (f64, f64) {
    let w = weights(theta, cutoff).weights;
    let n = w.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
    let s = -w.iter().map(|&x| xlnx(x)).sum::<f64>();
    (n, s)
}

fn check_thermal(omega: f64, beta: f64) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergy {
    pub value: f64,
    pub energy: f64,
    pub entropy: f64,
    pub tail: f64,
}

/// `⟨0(θ)|(H_A − S_A/β)|0(θ)⟩` with `H_A = ω A†A`.
pub fn free_energy(theta: f64, omega: f64, beta: f64, cutoff: FockCutoff) -> Result<FreeEnergy> {
    check_thermal(omega, beta)?;
    let tail = cutoff.check(theta)?;
    let (n, s) = number_and_entropy(theta, cutoff);
    let energy = omega * n;
    Ok(FreeEnergy { value: energy - s / beta, energy, entropy: s, tail })
}

/// Stationary point of the free energy: `sinh²θ* = 1/(e^{βω} − 1)`.
pub fn stationary_theta(omega: f64, beta: f64) -> Result<f64> {
    check_thermal(omega, beta)?;
    Ok((1.0 / (beta * omega).exp_m1()).sqrt().asinh())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    pub theta: f64,
    pub sinh2: f64,
    pub free_energy: f64,
    /// Bose occupation `1/(e^{βω} − 1)` for comparison.
    pub bose: f64,
}

/// Minimizes the free energy over `θ ∈ [0, θ_max]` by golden-section search.
pub fn minimize_free_energy(omega: f64, beta: f64, cutoff: FockCutoff) -> Result<Minimum> {
    check_thermal(omega, beta)?;
    let f = |t: f64| {
        let (n, s) = number_and_entropy(t, cutoff);
        omega * n - s / beta
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, cutoff.max_theta());
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let theta = 0.5 * (lo + hi);
    if cutoff.max_theta() - theta < 1e-9 {
        // pinned at the boundary: the true minimum lies beyond the cutoff
        cutoff.check(cutoff.max_theta() * 1.01)?;
    }
    Ok(Minimum {
        theta,
        sinh2: theta.sinh().powi(2),
        free_energy: f(theta),
        bose: 1.0 / (beta * omega).exp_m1(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatSample {
    pub t: f64,
    pub theta: f64,
    pub de_dt: f64,
    pub ds_dt_over_beta: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatReport {
    pub omega: f64,
    pub beta: f64,
    pub theta_star: f64,
    /// Whether two adjacent samples straddle `θ*`.
    pub brackets_stationary: bool,
    /// Indices (into `samples`) where the residual is evaluated.
    pub stationary_samples: Vec<usize>,
    /// `|dE/dt − (1/β) dS/dt|` at `θ*`, the largest over crossings.
    pub max_residual: f64,
    /// Largest residual over every interior sample.
    pub path_max_residual: f64,
    pub samples: Vec<HeatSample>,
}

/// Finite-difference check of `dE = (1/β) dS` along a θ(t) path.
///
/// The residual `dE/dt − (1/β) dS/dt` is `dF/dt`, which vanishes where the
/// path crosses the stationary point `θ*(ω, β)`. It is reported there,
/// interpolated between the samples on either side, and at the sample nearest
/// `θ*` when the path never reaches it.
pub fn heat_relation_check(
    path: &[(f64, f64)],
    omega: f64,
    beta: f64,
    cutoff: FockCutoff,
) -> Result<HeatReport> {
    check_thermal(omega, beta)?;
    if path.len() < 3 {
        return Err(Error::DegeneratePath(format!("need at least 3 samples, got {}", path.len())));
    }
    for w in path.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::DegeneratePath(format!(
                "times must strictly increase ({} then {})",
                w[0].0, w[1].0
            )));
        }
    }
    for &(_, theta) in path {
        cutoff.check(theta)?;
    }
    let theta_star = stationary_theta(omega, beta)?;
    let values: Vec<(f64, f64)> = path
        .par_iter()
        .map(|&(_, theta)| {
            let (n, s) = number_and_entropy(theta, cutoff);
            (omega * n, s)
        })
        .collect();
    let samples: Vec<HeatSample> = (1..path.len() - 1)
        .map(|i| {
            let dt = path[i + 1].0 - path[i - 1].0;
            let de_dt = (values[i + 1].0 - values[i - 1].0) / dt;
            let ds = (values[i + 1].1 - values[i - 1].1) / dt / beta;
            HeatSample {
                t: path[i].0,
                theta: path[i].1,
                de_dt,
                ds_dt_over_beta: ds,
                residual: de_dt - ds,
            }
        })
        .collect();
    let mut crossings = Vec::new();
    let mut at_star = Vec::new();
    for k in 0..samples.len().saturating_sub(1) {
        let (a, b) = (&samples[k], &samples[k + 1]);
        if a.theta != b.theta && a.theta.min(b.theta) <= theta_star && theta_star <= a.theta.max(b.theta) {
            let w = (theta_star - a.theta) / (b.theta - a.theta);
            at_star.push((a.residual + w * (b.residual - a.residual)).abs());
            crossings.extend([k, k + 1]);
        }
    }
    crossings.dedup();
    let brackets_stationary = !at_star.is_empty();
    let (stationary_samples, max_residual) = if brackets_stationary {
        (crossings, at_star.into_iter().fold(0.0, f64::max))
    } else {
        let nearest = (0..samples.len())
            .min_by(|&a, &b| {
                let da = (samples[a].theta - theta_star).abs();
                let db = (samples[b].theta - theta_star).abs();
                da.total_cmp(&db)
            })
            .expect("at least one interior sample");
        (vec![nearest], samples[nearest].residual.abs())
    };
    let path_max_residual = samples.iter().map(|s| s.residual.abs()).fold(0.0, f64::max);
    Ok(HeatReport {
        omega,
        beta,
        theta_star,
        brackets_stationary,
        stationary_samples,
        max_residual,
        path_max_residual,
        samples,
    })
}

/// Linear ramp `θ(t) = θ_c + rate·(t − t_mid)` sampled at `steps + 1` points.
pub fn linear_ramp(t0: f64, t1: f64, steps: usize, theta_center: f64, rate: f64) -> Result<Vec<(f64, f64)>> {
    if steps < 2 || !(t1 > t0) {
        return Err(Error::DegeneratePath(format!("ramp {t0}:{t1}:{steps}")));
    }
    let mid = 0.5 * (t0 + t1);
    Ok((0..=steps)
        .map(|k| {
            let t = t0 + (t1 - t0) * k as f64 / steps as f64;
            (t, theta_center + rate * (t - mid))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeReport {
    pub theta: f64,
    pub overlap_with_bare: f64,
    pub number_expectation: f64,
    pub entropy: f64,
    pub weights: Vec<f64>,
    pub tail: f64,
}

pub fn mode_report(theta: f64, cutoff: FockCutoff) -> Result<ModeReport> {
    let tail = cutoff.check(theta)?;
    let w = weights(theta, cutoff);
    let (number, entropy) = number_and_entropy(theta, cutoff);
    Ok(ModeReport {
        theta,
        overlap_with_bare: overlap_with_bare(theta, cutoff)?,
        number_expectation: number,
        entropy,
        weights: w.weights,
        tail,
    })
}

/// A multi-mode θ-vacuum, one θ per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVacuum {
    thetas: Vec<f64>,
    cutoff: FockCutoff,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VacuumReport {
    pub concept: Option<String>,
    pub modes: Vec<ModeReport>,
    /// `Π_k ⟨0|0(θ_k)⟩`.
    pub overlap_with_bare: f64,
    pub total_number: f64,
    pub total_entropy: f64,
    pub max_tail: f64,
}

impl ThetaVacuum {
    pub fn new(thetas: Vec<f64>, cutoff: FockCutoff) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidArgument("a θ-vacuum needs at least one mode".into()));
        }
        for &t in &thetas {
            cutoff.check(t)?;
        }
        Ok(Self { thetas, cutoff })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    /// Per-mode reports merged by reduction: overlaps multiply, numbers and entropies add.
    pub fn report(&self, concept: Option<String>, parallel: bool) -> Result<VacuumReport> {
        let modes: Vec<ModeReport> = if parallel {
            self.thetas.par_iter().map(|&t| mode_report(t, self.cutoff)).collect::<Result<_>>()?
        } else {
            self.thetas.iter().map(|&t| mode_report(t, self.cutoff)).collect::<Result<_>>()?
        };
        Ok(VacuumReport {
            concept,
            overlap_with_bare: modes.iter().map(|m| m.overlap_with_bare).product(),
            total_number: modes.iter().map(|m| m.number_expectation).sum(),
            total_entropy: modes.iter().map(|m| m.entropy).sum(),
            max_tail: modes.iter().map(|m| m.tail).fold(0.0, f64::max),
            modes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut() -> FockCutoff {
        FockCutoff::new(60).unwrap()
    }

    #[test]
    fn weights_examples() {
        let w0 = weights(0.0, cut());
        assert_eq!(w0.weights[0], 1.0);
        assert!(w0.weights[1..].iter().all(|&x| x == 0.0));
        let w = weights(0.5, cut());
        let v = theta_vacuum_vector(0.5, cut()).unwrap();
        assert!((w.weights[0] - v[0].norm_sqr()).abs() < 1e-15);
        assert!((w.weights[0] - 0.786448).abs() < 1e-6);
        assert!(w.weights.windows(2).all(|p| p[1] < p[0]));
        assert!(w.weights.iter().all(|&x| x > 0.0 && x < 1.0));
        let sum: f64 = w.weights.iter().sum();
        assert!((sum + w.tail - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(0.0, cut()).unwrap(), 0.0);
        let r = entropy_report(0.5, cut()).unwrap();
        assert!((r.entropy - r.closed_form).abs() <= 1e-9);
        assert!((r.entropy - 0.659_452_959_168).abs() < 1e-9);
        assert!((r.operator_route - r.entropy).abs() <= 1e-9);
        let mut prev = 0.0;
        for k in 1..=10 {
            let s = entropy(0.1 * k as f64, cut()).unwrap();
            assert!(s > prev);
            prev = s;
        }
        assert_eq!(entropy(-0.5, cut()).unwrap(), entropy(0.5, cut()).unwrap());
    }

    #[test]
    fn free_energy_examples() {
        assert_eq!(free_energy(0.0, 1.0, 1.0, cut()).unwrap().value, 0.0);
        let f = free_energy(0.5, 1.0, 1.0, cut()).unwrap();
        let expect = 0.5f64.sinh().powi(2) - entropy(0.5, cut()).unwrap();
        assert!((f.value - expect).abs() < 1e-12);
        assert!((f.value + 0.387_912_641_760).abs() < 1e-9);
        assert!(free_energy(0.5, -1.0, 1.0, cut()).is_err());
        assert!(free_energy(0.5, 1.0, 0.0, cut()).is_err());
    }

    #[test]
    fn minimum_is_bose() {
        for (omega, beta) in [(1.0, 1.0), (2.0, 0.7), (0.5, 3.0)] {
            let m = minimize_free_energy(omega, beta, cut()).unwrap();
            assert!((m.sinh2 - m.bose).abs() <= 1e-6, "{m:?}");
            let star = stationary_theta(omega, beta).unwrap();
            assert!((m.theta - star).abs() < 1e-6);
        }
        // βω too small: the minimum sits beyond what the cutoff can represent
        assert!(matches!(minimize_free_energy(0.01, 1.0, cut()), Err(Error::TailTolerance { .. })));
    }

    #[test]
    fn heat_relation() {
        let star = stationary_theta(1.0, 1.0).unwrap();
        let ramp = linear_ramp(0.0, 0.1, 100, star, 1.0).unwrap();
        let r = heat_relation_check(&ramp, 1.0, 1.0, cut()).unwrap();
        assert!(r.brackets_stationary);
        assert!(r.max_residual <= 1e-4, "{}", r.max_residual);

        let flat: Vec<_> = (0..5).map(|k| (k as f64, 0.3)).collect();
        let r = heat_relation_check(&flat, 1.0, 1.0, cut()).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.path_max_residual, 0.0);

        let r = heat_relation_check(&ramp, 1.0, 2.0, cut()).unwrap();
        assert!(!r.brackets_stationary);
        assert!(r.max_residual > 1e-2);
    }

    #[test]
    fn heat_errors() {
        assert!(matches!(
            heat_relation_check(&[(0.0, 0.1), (1.0, 0.2)], 1.0, 1.0, cut()),
            Err(Error::DegeneratePath(_))
        ));
        assert!(matches!(
            heat_relation_check(&[(0.0, 0.1), (0.0, 0.2), (1.0, 0.3)], 1.0, 1.0, cut()),
            Err(Error::DegeneratePath(_))
        ));
        assert!(linear_ramp(1.0, 0.0, 10, 0.5, 1.0).is_err());
    }

    #[test]
    fn vacuum_report_factorizes() {
        let v = ThetaVacuum::new(vec![0.5, 0.2, 0.5], cut()).unwrap();
        let r = v.report(Some("read-books".into()), true).unwrap();
        let serial = v.report(Some("read-books".into()), false).unwrap();
        assert_eq!(r, serial);
        let expect = 1.0 / (0.5f64.cosh().powi(2) * 0.2f64.cosh());
        assert!((r.overlap_with_bare - expect).abs() < 1e-12);
        let n: f64 = [0.5f64, 0.2, 0.5].iter().map(|t| t.sinh().powi(2)).sum();
        assert!((r.total_number - n).abs() < 1e-9);
        assert!(ThetaVacuum::new(vec![], cut()).is_err());
        assert!(ThetaVacuum::new(vec![5.0], cut()).is_err());
    }
}
