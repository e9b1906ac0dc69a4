//! Pauli / su(2) generators on a single two-level element.
//!
//! Conventions follow the printed ones: `σ₁, σ₂, σ₃` carry a factor ½, while
//! the ladder matrices `σ± = σ₁ ± iσ₂` come out as unit-entry matrices. With
//! these, `[σ₃, σ±] = ±σ±` and `[σ⁻, σ⁺] = −2σ₃` hold exactly.
//!
//! Basis kets are `|1⟩ = (1, 0)ᵀ` (excited) and `|0⟩ = (0, 1)ᵀ` (ground).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const HALF: Complex = Complex::new(0.5, 0.0);
const I_HALF: Complex = Complex::new(0.0, 0.5);

/// Which constant matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    S1,
    S2,
    S3,
    Id,
    Plus,
    Minus,
}

/// A 2×2 complex matrix, row major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix2 {
    entries: [[Complex; 2]; 2],
}

impl Matrix2 {
    /// Builds a matrix, rejecting non-finite entries.
    pub fn new(entries: [[Complex; 2]; 2]) -> Result<Self> {
        if entries.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self { entries })
        } else {
            Err(Error::NonFinite("Matrix2 entry"))
        }
    }

    pub const fn zero() -> Self {
        Self { entries: [[ZERO, ZERO], [ZERO, ZERO]] }
    }

    pub const fn identity() -> Self {
        Self { entries: [[ONE, ZERO], [ZERO, ONE]] }
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        Self {
            entries: rows.map(|r| r.map(|x| Complex::new(x, 0.0))),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.entries[row][col]
    }

    pub fn entries(&self) -> [[Complex; 2]; 2] {
        self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self {
            entries: [[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]],
        }
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            entries: self.entries.map(|r| r.map(|z| z * factor)),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = *self - *other;
        d.entries.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

impl Add for Matrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] += rhs.entries[r][c];
            }
        }
        out
    }
}

impl Sub for Matrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            entries: self.entries.map(|r| r.map(|z| -z)),
        }
    }
}

impl Mul for Matrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }
}

impl Mul<Ket2> for Matrix2 {
    type Output = Ket2;
    fn mul(self, k: Ket2) -> Ket2 {
        apply(&self, &k)
    }
}

/// A two-component state vector.
#[derive(Clone, Copy, PartialEq)]
pub struct Ket2 {
    amplitudes: [Complex; 2],
}

impl Ket2 {
    pub fn new(amplitudes: [Complex; 2]) -> Result<Self> {
        if amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self { amplitudes })
        } else {
            Err(Error::NonFinite("Ket2 amplitude"))
        }
    }

    /// Ground state `|0⟩ = (0, 1)ᵀ`.
    pub const fn ground() -> Self {
        Self { amplitudes: [ZERO, ONE] }
    }

    /// Excited state `|1⟩ = (1, 0)ᵀ`.
    pub const fn excited() -> Self {
        Self { amplitudes: [ONE, ZERO] }
    }

    pub const fn zero() -> Self {
        Self { amplitudes: [ZERO, ZERO] }
    }

    pub fn amplitudes(&self) -> [Complex; 2] {
        self.amplitudes
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Ket2) -> Complex {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes == [ZERO, ZERO]
    }
}

impl fmt::Debug for Ket2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})ᵀ", self.amplitudes[0], self.amplitudes[1])
    }
}

pub fn pauli(which: Pauli) -> Matrix2 {
    match which {
        Pauli::S1 => Matrix2 { entries: [[ZERO, HALF], [HALF, ZERO]] },
        Pauli::S2 => Matrix2 { entries: [[ZERO, -I_HALF], [I_HALF, ZERO]] },
        Pauli::S3 => Matrix2 { entries: [[HALF, ZERO], [ZERO, -HALF]] },
        Pauli::Id => Matrix2::identity(),
        Pauli::Plus => Matrix2 { entries: [[ZERO, ONE], [ZERO, ZERO]] },
        Pauli::Minus => Matrix2 { entries: [[ZERO, ZERO], [ONE, ZERO]] },
    }
}

/// `ab − ba`.
pub fn commutator(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    *a * *b - *b * *a
}

pub fn apply(m: &Matrix2, k: &Ket2) -> Ket2 {
    let e = &m.entries;
    let v = &k.amplitudes;
    Ket2 {
        amplitudes: [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]],
    }
}
