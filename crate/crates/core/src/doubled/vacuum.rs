//! The θ-vacuum `|0(θ)⟩ = (1/coshθ) exp(tanhθ A†Ã†)|0⟩` and its observables.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::operator::{bogoliubov, generator_i_g, ladder_ops, FockCutoff};
use crate::error::{Error, Result};

/// Amplitudes `tanhⁿθ / coshθ` on `|n, n⟩`, `n = 0..=n_max`.
pub fn pair_amplitudes(theta: f64, cutoff: FockCutoff) -> Vec<f64> {
    let t = theta.tanh();
    let mut amp = 1.0 / theta.cosh();
    let mut out = Vec::with_capacity(cutoff.levels());
    for _ in 0..cutoff.levels() {
        out.push(amp);
        amp *= t;
    }
    out
}

/// The normal-ordered θ-vacuum on the truncated space. Components are exact,
/// so the norm falls short of 1 by the reported tail.
pub fn theta_vacuum_vector(theta: f64, cutoff: FockCutoff) -> Result<DVector<Complex64>> {
    cutoff.check(theta)?;
    let mut v = DVector::zeros(cutoff.dim());
    for (n, amp) in pair_amplitudes(theta, cutoff).into_iter().enumerate() {
        v[cutoff.index(n, n)] = Complex64::new(amp, 0.0);
    }
    Ok(v)
}

/// `exp(iθG)|0⟩` by dense matrix exponential of `iθG` on the pair sector
/// `span{|n,n⟩}`, which `G` leaves invariant.
pub fn generator_vacuum_vector(theta: f64, cutoff: FockCutoff) -> Result<DVector<Complex64>> {
    cutoff.check(theta)?;
    let ig = generator_i_g(&ladder_ops(cutoff));
    let sector: Vec<usize> = (0..cutoff.levels()).map(|n| cutoff.index(n, n)).collect();
    let leak = ig
        .triplets()
        .filter(|(r, c, _)| sector.contains(c) && !sector.contains(r))
        .count();
    debug_assert_eq!(leak, 0, "generator leaves the pair sector");
    let block = ig.block(&sector) * Complex64::new(theta, 0.0);
    let u = block.exp();
    let mut v = DVector::zeros(cutoff.dim());
    for (k, &i) in sector.iter().enumerate() {
        v[i] = u[(k, 0)];
    }
    Ok(v)
}

/// Annihilation residuals `‖A(θ)|0(θ)⟩‖` and `‖Ã(θ)|0(θ)⟩‖`.
pub fn annihilation_residuals(theta: f64, cutoff: FockCutoff) -> Result<(f64, f64)> {
    let b = bogoliubov(theta, cutoff)?;
    let v = theta_vacuum_vector(theta, cutoff)?;
    Ok((b.a.apply(&v).norm(), b.at.apply(&v).norm()))
}

/// `⟨0|0(θ)⟩` from the vector.
pub fn overlap_with_bare(theta: f64, cutoff: FockCutoff) -> Result<f64> {
    let v = theta_vacuum_vector(theta, cutoff)?;
    Ok(v[cutoff.index(0, 0)].re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumberRoutes {
    /// `⟨A†A⟩`.
    pub n_a: f64,
    /// `⟨Ã†Ã⟩`.
    pub n_tilde: f64,
    /// `sinh²θ · ⟨Ã(θ)Ã(θ)†⟩`, the tilde-operator form.
    pub tilde_route: f64,
    pub closed_form: f64,
    pub tail: f64,
}

/// Occupation numbers of the θ-vacuum by three operator routes.
///
/// Since `A|0(θ)⟩ = sinhθ Ã(θ)†|0(θ)⟩`, the non-tilde number is carried
/// entirely by the tilde operators.
pub fn number_routes(theta: f64, cutoff: FockCutoff) -> Result<NumberRoutes> {
    let tail = cutoff.check(theta)?;
    let ops = ladder_ops(cutoff);
    let v = theta_vacuum_vector(theta, cutoff)?;
    let n_a = (&ops.a_dag * &ops.a).expectation(&v).re;
    let n_tilde = (&ops.at_dag * &ops.at).expectation(&v).re;
    let b = bogoliubov(theta, cutoff)?;
    let raised = b.at.adjoint().apply(&v);
    let tilde_route = theta.sinh().powi(2) * raised.norm_squared();
    Ok(NumberRoutes {
        n_a,
        n_tilde,
        tilde_route,
        closed_form: theta.sinh().powi(2),
        tail,
    })
}

/// `⟨0(θ)|A†A|0(θ)⟩`.
pub fn number_expectation(theta: f64, cutoff: FockCutoff) -> Result<f64> {
    Ok(number_routes(theta, cutoff)?.n_a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoliationReport {
    /// Product of per-mode vector overlaps.
    pub overlap: f64,
    /// Product of `1/cosh(θ_k − θ'_k)`.
    pub closed_form: f64,
    pub per_mode: Vec<f64>,
    /// Largest per-mode gap between vector and closed form.
    pub max_mode_deviation: f64,
}

/// Per-mode vector overlap `⟨0(θ')|0(θ)⟩`.
pub fn mode_overlap(theta_a: f64, theta_b: f64, cutoff: FockCutoff) -> Result<f64> {
    cutoff.check(theta_a)?;
    cutoff.check(theta_b)?;
    let a = pair_amplitudes(theta_a, cutoff);
    let b = pair_amplitudes(theta_b, cutoff);
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}

/// Overlap of two multi-mode θ-vacua; modes factorize, so overlaps multiply.
pub fn foliation_overlap(
    thetas_a: &[f64],
    thetas_b: &[f64],
    cutoff: FockCutoff,
    parallel: bool,
) -> Result<FoliationReport> {
    if thetas_a.len() != thetas_b.len() {
        return Err(Error::InvalidArgument(format!(
            "mode counts differ: {} vs {}",
            thetas_a.len(),
            thetas_b.len()
        )));
    }
    let one = |(&x, &y): (&f64, &f64)| -> Result<(f64, f64)> {
        Ok((mode_overlap(x, y, cutoff)?, 1.0 / (x - y).cosh()))
    };
    let pairs: Vec<(f64, f64)> = if parallel {
        thetas_a.par_iter().zip(thetas_b.par_iter()).map(one).collect::<Result<_>>()?
    } else {
        thetas_a.iter().zip(thetas_b).map(one).collect::<Result<_>>()?
    };
    Ok(FoliationReport {
        overlap: pairs.iter().map(|p| p.0).product(),
        closed_form: pairs.iter().map(|p| p.1).product(),
        max_mode_deviation: pairs.iter().map(|p| (p.0 - p.1).abs()).fold(0.0, f64::max),
        per_mode: pairs.into_iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn vacuum_at_zero_is_bare() {
        let v = theta_vacuum_vector(0.0, c(10)).unwrap();
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
        assert_eq!(v.norm(), 1.0);
    }

    #[test]
    fn bare_overlap_closed_form() {
        let o = overlap_with_bare(0.5, c(60)).unwrap();
        assert!((o - 1.0 / 0.5f64.cosh()).abs() <= 1e-12);
        assert!((o - 0.886819).abs() < 1e-6);
    }

    #[test]
    fn pair_structure_only() {
        let cut = c(12);
        let v = theta_vacuum_vector(0.4, cut).unwrap();
        for i in 0..cut.dim() {
            let (a, t) = cut.occupations(i);
            if a != t {
                assert_eq!(v[i], Complex64::new(0.0, 0.0));
            }
        }
        let tail = cut.tail(0.4);
        assert!((v.norm_squared() - (1.0 - tail)).abs() < 1e-14);
    }

    #[test]
    fn annihilated_by_transformed_operators() {
        let (ra, rt) = annihilation_residuals(0.5, c(60)).unwrap();
        assert!(ra <= 1e-12 && rt <= 1e-12, "{ra} {rt}");
        // truncation bound, plus a rounding floor it falls far below
        let bound = 10.0 * 0.5f64.tanh().powi(60) + 64.0 * f64::EPSILON;
        assert!(ra <= bound && rt <= bound, "{ra} {rt}");
    }

    #[test]
    fn number_routes_agree() {
        let r = number_routes(0.5, c(60)).unwrap();
        assert!((r.n_a - 0.5f64.sinh().powi(2)).abs() <= 1e-9);
        assert!((r.n_a - 0.271541).abs() < 1e-6);
        assert!((r.n_a - r.n_tilde).abs() <= 1e-12);
        assert!((r.tilde_route - r.closed_form).abs() <= 1e-9);
        assert_eq!(number_expectation(0.0, c(20)).unwrap(), 0.0);
        for theta in [0.1, 0.3, 0.7, 1.0, -0.6] {
            let r = number_routes(theta, c(60)).unwrap();
            assert!((r.n_a - r.n_tilde).abs() <= 1e-12);
        }
    }

    #[test]
    fn generator_route_matches_normal_ordered() {
        for (theta, n) in [(0.5, 60), (0.6, 40), (0.2, 40), (-0.4, 45)] {
            let a = theta_vacuum_vector(theta, c(n)).unwrap();
            let b = generator_vacuum_vector(theta, c(n)).unwrap();
            assert!((&a - &b).camax() <= 1e-9, "theta={theta} n_max={n}");
        }
    }

    #[test]
    fn foliation_examples() {
        let cut = c(60);
        let same = foliation_overlap(&[0.2, 0.5], &[0.2, 0.5], cut, false).unwrap();
        assert!((same.overlap - 1.0).abs() < 1e-12);
        let r = foliation_overlap(&vec![0.5; 100], &vec![0.0; 100], cut, true).unwrap();
        let expect = (1.0 / 0.5f64.cosh()).powi(100);
        assert!((r.overlap - expect).abs() / expect < 1e-10);
        assert!(r.overlap < 1e-5 && r.overlap > 6e-6);
        assert!(r.max_mode_deviation <= 1e-12);
        assert!(foliation_overlap(&[0.1], &[0.1, 0.2], cut, false).is_err());
    }

    #[test]
    fn mode_overlap_is_sech_of_difference() {
        let cut = c(60);
        for (x, y) in [(0.5, 0.0), (0.3, 0.9), (-0.2, 0.4), (0.7, 0.7)] {
            let o = mode_overlap(x, y, cut).unwrap();
            assert!((o - 1.0 / (x - y).cosh()).abs() <= 1e-12, "{x} {y}");
        }
    }
}
