//! Operators on the truncated two-mode space `Fock(A) ⊗ Fock(Ã)`.
//!
//! Basis `|n_A, n_Ã⟩`, `0 ≤ n ≤ n_max`, indexed `n_A·(n_max+1) + n_Ã`.
//! Ladder operators have at most one entry per column, so storage is sparse.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default per-mode occupation cutoff.
pub const DEFAULT_N_MAX: usize = 60;
/// Default bound on the discarded tail `tanh^{2(n_max+1)}θ`.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCutoff {
    n_max: usize,
    tail_tolerance: f64,
}

impl Default for FockCutoff {
    fn default() -> Self {
        Self { n_max: DEFAULT_N_MAX, tail_tolerance: DEFAULT_TAIL_TOLERANCE }
    }
}

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        Self::with_tolerance(n_max, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn with_tolerance(n_max: usize, tail_tolerance: f64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance.is_finite()) {
            return Err(Error::InvalidArgument("tail tolerance must be positive and finite".into()));
        }
        Ok(Self { n_max, tail_tolerance })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Single-mode dimension `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    /// Two-mode dimension `(n_max + 1)²`.
    pub fn dim(&self) -> usize {
        self.levels() * self.levels()
    }

    pub fn index(&self, n_a: usize, n_t: usize) -> usize {
        n_a * self.levels() + n_t
    }

    pub fn occupations(&self, index: usize) -> (usize, usize) {
        (index / self.levels(), index % self.levels())
    }

    /// Weight discarded by the cutoff, `tanh^{2(n_max+1)}θ`.
    pub fn tail(&self, theta: f64) -> f64 {
        theta.tanh().abs().powi(2 * (self.n_max as i32 + 1))
    }

    /// Fails when the discarded weight at `theta` exceeds the tolerance.
    pub fn check(&self, theta: f64) -> Result<f64> {
        if !theta.is_finite() {
            return Err(Error::NonFinite("theta"));
        }
        let tail = self.tail(theta);
        if tail > self.tail_tolerance {
            return Err(Error::TailTolerance {
                theta,
                n_max: self.n_max,
                tail,
                tolerance: self.tail_tolerance,
            });
        }
        Ok(tail)
    }

    /// Largest `|θ|` whose tail stays within tolerance.
    pub fn max_theta(&self) -> f64 {
        let t = self.tail_tolerance.powf(1.0 / (2.0 * (self.n_max as f64 + 1.0)));
        t.min(1.0 - f64::EPSILON).atanh()
    }
}

/// Sparse complex operator on the truncated two-mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOperator {
    cutoff: FockCutoff,
    matrix: CsrMatrix<Complex64>,
}

impl TwoModeOperator {
    fn from_triplets(cutoff: FockCutoff, entries: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let dim = cutoff.dim();
        let mut coo = CooMatrix::new(dim, dim);
        for (r, c, v) in entries {
            if v != Complex64::new(0.0, 0.0) {
                coo.push(r, c, v);
            }
        }
        Self { cutoff, matrix: CsrMatrix::from(&coo) }
    }

    pub fn zero(cutoff: FockCutoff) -> Self {
        Self::from_triplets(cutoff, std::iter::empty())
    }

    pub fn identity(cutoff: FockCutoff) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::from_triplets(cutoff, (0..cutoff.dim()).map(|i| (i, i, one)))
    }

    /// Operator diagonal in the number basis, `f(n_A, n_Ã)`.
    pub fn diagonal(cutoff: FockCutoff, f: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_triplets(
            cutoff,
            (0..cutoff.dim()).map(|i| {
                let (a, t) = cutoff.occupations(i);
                (i, i, Complex64::new(f(a, t), 0.0))
            }),
        )
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn csr(&self) -> &CsrMatrix<Complex64> {
        &self.matrix
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix
            .get_entry(row, col)
            .map(|e| e.into_value())
            .unwrap_or_default()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.matrix.triplet_iter().map(|(r, c, v)| (r, c, *v))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.cutoff, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_triplets(self.cutoff, self.triplets().map(|(r, c, v)| (r, c, v * factor)))
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(v.len(), self.cutoff.dim(), "vector dimension mismatch");
        let mut out = DVector::zeros(v.len());
        for (r, c, x) in self.triplets() {
            out[r] += x * v[c];
        }
        out
    }

    /// `⟨v|self|v⟩`.
    pub fn expectation(&self, v: &DVector<Complex64>) -> Complex64 {
        v.dotc(&self.apply(v))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.cutoff.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Restriction to the listed basis states, as a dense block.
    pub fn block(&self, basis: &[usize]) -> DMatrix<Complex64> {
        let pos: std::collections::HashMap<usize, usize> =
            basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (r, c, v) in self.triplets() {
            if let (Some(&i), Some(&j)) = (pos.get(&r), pos.get(&c)) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Largest deviation of `self·|j⟩` from `target·|j⟩` over basis columns
    /// selected by `cols`.
    pub fn max_column_deviation(&self, target: &Self, cols: impl Fn(usize, usize) -> bool) -> f64 {
        let diff = self - target;
        diff.triplets()
            .filter(|&(_, c, _)| {
                let (a, t) = self.cutoff.occupations(c);
                cols(a, t)
            })
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

fn check_same(a: &TwoModeOperator, b: &TwoModeOperator) {
    assert_eq!(a.cutoff.n_max, b.cutoff.n_max, "operators on different cutoffs");
}

impl Add for &TwoModeOperator {
    type Output = TwoModeOperator;
    fn add(self, rhs: Self) -> TwoModeOperator {
        check_same(self, rhs);
        TwoModeOperator { cutoff: self.cutoff, matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &TwoModeOperator {
    type Output = TwoModeOperator;
    fn sub(self, rhs: Self) -> TwoModeOperator {
        check_same(self, rhs);
        TwoModeOperator { cutoff: self.cutoff, matrix: &self.matrix - &rhs.matrix }
    }
}

impl Neg for &TwoModeOperator {
    type Output = TwoModeOperator;
    fn neg(self) -> TwoModeOperator {
        self.scale_real(-1.0)
    }
}

impl Mul for &TwoModeOperator {
    type Output = TwoModeOperator;
    fn mul(self, rhs: Self) -> TwoModeOperator {
        check_same(self, rhs);
        TwoModeOperator { cutoff: self.cutoff, matrix: &self.matrix * &rhs.matrix }
    }
}

/// `ab − ba`.
pub fn commutator(a: &TwoModeOperator, b: &TwoModeOperator) -> TwoModeOperator {
    &(a * b) - &(b * a)
}

/// The four ladder operators of the doubled algebra.
#[derive(Debug, Clone)]
pub struct LadderOps {
    pub a: TwoModeOperator,
    pub a_dag: TwoModeOperator,
    pub at: TwoModeOperator,
    pub at_dag: TwoModeOperator,
}

/// `A = a ⊗ 1`, `Ã = 1 ⊗ a` with `a|n⟩ = √n|n−1⟩`, and their adjoints.
pub fn ladder_ops(cutoff: FockCutoff) -> LadderOps {
    let levels = cutoff.levels();
    let a = TwoModeOperator::from_triplets(
        cutoff,
        (1..levels).flat_map(|na| {
            (0..levels).map(move |nt| {
                (cutoff.index(na - 1, nt), cutoff.index(na, nt), Complex64::new((na as f64).sqrt(), 0.0))
            })
        }),
    );
    let at = TwoModeOperator::from_triplets(
        cutoff,
        (0..levels).flat_map(|na| {
            (1..levels).map(move |nt| {
                (cutoff.index(na, nt - 1), cutoff.index(na, nt), Complex64::new((nt as f64).sqrt(), 0.0))
            })
        }),
    );
    LadderOps {
        a_dag: a.adjoint(),
        at_dag: at.adjoint(),
        a,
        at,
    }
}

/// `A(θ) = A coshθ − Ã† sinhθ` and `Ã(θ) = Ã coshθ − A† sinhθ`.
#[derive(Debug, Clone)]
pub struct BogoliubovOps {
    pub theta: f64,
    pub a: TwoModeOperator,
    pub at: TwoModeOperator,
    pub tail: f64,
}

pub fn bogoliubov(theta: f64, cutoff: FockCutoff) -> Result<BogoliubovOps> {
    let tail = cutoff.check(theta)?;
    Ok(bogoliubov_from(&ladder_ops(cutoff), theta, tail))
}

/// Transformation applied to arbitrary operator pairs, used for the inverse check.
pub fn bogoliubov_transform(
    a: &TwoModeOperator,
    at: &TwoModeOperator,
    theta: f64,
) -> (TwoModeOperator, TwoModeOperator) {
    let (c, s) = (theta.cosh(), theta.sinh());
    (
        &a.scale_real(c) - &at.adjoint().scale_real(s),
        &at.scale_real(c) - &a.adjoint().scale_real(s),
    )
}

fn bogoliubov_from(ops: &LadderOps, theta: f64, tail: f64) -> BogoliubovOps {
    let (a, at) = bogoliubov_transform(&ops.a, &ops.at, theta);
    BogoliubovOps { theta, a, at, tail }
}

/// `iG = A†Ã† − AÃ`, so that `exp(iθG)` generates the θ-vacuum.
pub fn generator_i_g(ops: &LadderOps) -> TwoModeOperator {
    &(&ops.a_dag * &ops.at_dag) - &(&ops.a * &ops.at)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(cutoff: FockCutoff, na: usize, nt: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(cutoff.dim());
        v[cutoff.index(na, nt)] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn cutoff_validation() {
        assert!(FockCutoff::new(0).is_err());
        assert!(FockCutoff::with_tolerance(5, 0.0).is_err());
        let c = FockCutoff::new(60).unwrap();
        assert!(c.check(0.5).is_ok());
        assert!(matches!(c.check(3.0), Err(Error::TailTolerance { .. })));
        let m = c.max_theta();
        assert!(c.check(m * 0.999).is_ok());
        assert!(c.check(m * 1.001).is_err());
    }

    #[test]
    fn ladder_structure() {
        let c = FockCutoff::new(6).unwrap();
        let ops = ladder_ops(c);
        assert_eq!(ops.a.adjoint(), ops.a_dag);
        assert_eq!(ops.at.adjoint(), ops.at_dag);
        assert_eq!(ops.a_dag.adjoint(), ops.a);
        assert!(ops.a.apply(&basis(c, 0, 0)).norm() == 0.0);
        assert!(ops.at.apply(&basis(c, 0, 0)).norm() == 0.0);
        let v = ops.a_dag.apply(&basis(c, 2, 3));
        assert!((v[c.index(3, 3)].re - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ccr_on_bare_operators() {
        let c = FockCutoff::new(8).unwrap();
        let ops = ladder_ops(c);
        let id = TwoModeOperator::identity(c);
        let interior = |a: usize, t: usize| a < c.n_max() && t < c.n_max();
        assert!(commutator(&ops.a, &ops.a_dag).max_column_deviation(&id, |a, _| a < c.n_max()) <= 1e-14);
        assert!(commutator(&ops.at, &ops.at_dag).max_column_deviation(&id, |_, t| t < c.n_max()) <= 1e-14);
        let zero = TwoModeOperator::zero(c);
        assert_eq!(commutator(&ops.a, &ops.at).max_column_deviation(&zero, |_, _| true), 0.0);
        assert!(commutator(&ops.a, &ops.at_dag).max_column_deviation(&zero, interior) <= 1e-14);
        assert_eq!(commutator(&ops.a_dag, &ops.at_dag).max_column_deviation(&zero, |_, _| true), 0.0);
    }

    #[test]
    fn bogoliubov_identity_at_zero() {
        let c = FockCutoff::new(10).unwrap();
        let ops = ladder_ops(c);
        let b = bogoliubov(0.0, c).unwrap();
        assert_eq!(b.a, ops.a);
        assert_eq!(b.at, ops.at);
        assert_eq!(b.tail, 0.0);
    }

    #[test]
    fn bogoliubov_ccr_and_inverse() {
        let c = FockCutoff::new(40).unwrap();
        let id = TwoModeOperator::identity(c);
        let zero = TwoModeOperator::zero(c);
        let interior = |a: usize, t: usize| a + 1 < c.n_max() && t + 1 < c.n_max();
        for theta in [0.1, 0.5, -0.3, 0.8] {
            let b = bogoliubov(theta, c).unwrap();
            let ad = b.a.adjoint();
            let atd = b.at.adjoint();
            assert!(commutator(&b.a, &ad).max_column_deviation(&id, interior) < 1e-12);
            assert!(commutator(&b.at, &atd).max_column_deviation(&id, interior) < 1e-12);
            for (x, y) in [(&b.a, &b.at), (&b.a, &atd), (&ad, &b.at), (&ad, &atd)] {
                assert!(commutator(x, y).max_column_deviation(&zero, interior) < 1e-12);
            }
            let (ra, rt) = bogoliubov_transform(&b.a, &b.at, -theta);
            let ops = ladder_ops(c);
            assert!(ra.max_column_deviation(&ops.a, interior) < 1e-12);
            assert!(rt.max_column_deviation(&ops.at, interior) < 1e-12);
        }
    }

    #[test]
    fn generator_is_antihermitian() {
        let c = FockCutoff::new(5).unwrap();
        let k = generator_i_g(&ladder_ops(c));
        assert_eq!(k.adjoint(), -&k);
    }

    #[test]
    fn dense_and_block_views() {
        let c = FockCutoff::new(3).unwrap();
        let ops = ladder_ops(c);
        let d = ops.a.to_dense();
        assert_eq!(d.nrows(), 16);
        assert_eq!(d[(c.index(1, 2), c.index(2, 2))], Complex64::new(2f64.sqrt(), 0.0));
        let pairs: Vec<_> = (0..=3).map(|n| c.index(n, n)).collect();
        let blk = generator_i_g(&ops).block(&pairs);
        assert_eq!(blk[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(blk[(0, 1)], Complex64::new(-1.0, 0.0));
    }
}
