//! The Fibonacci matrix `F = [[1,1],[1,0]]` and its powers.
//!
//! `Fⁿ = [[F_{n+1}, F_n], [F_n, F_{n-1}]] = F_{n-1}·I + F_n·F` for `n ≥ 1`,
//! with `F₀ = 0`. Powers are computed by repeated squaring with checked
//! 128-bit arithmetic; the `bigint` feature adds an unbounded variant.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// 2×2 integer matrix with overflow-checked arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IntMatrix2(pub [[i128; 2]; 2]);

impl IntMatrix2 {
    pub const IDENTITY: Self = Self([[1, 0], [0, 1]]);

    pub fn entry(&self, row: usize, col: usize) -> i128 {
        self.0[row][col]
    }

    pub fn determinant(&self) -> Option<i128> {
        let [[a, b], [c, d]] = self.0;
        a.checked_mul(d)?.checked_sub(b.checked_mul(c)?)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[0i128; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0]
                    .checked_mul(b[0][c])?
                    .checked_add(a[r][1].checked_mul(b[1][c])?)?;
            }
        }
        Some(Self(out))
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        let mut out = [[0i128; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = self.0[r][c].checked_add(rhs.0[r][c])?;
            }
        }
        Some(Self(out))
    }

    pub fn checked_scale(&self, k: i128) -> Option<Self> {
        let mut out = [[0i128; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = self.0[r][c].checked_mul(k)?;
            }
        }
        Some(Self(out))
    }
}

impl fmt::Debug for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn fib_matrix() -> IntMatrix2 {
    IntMatrix2([[1, 1], [1, 0]])
}

/// `Fⁿ` by exponentiation by squaring. `n` must be at least 1.
pub fn fib_pow(n: u64) -> Result<IntMatrix2> {
    if n == 0 {
        return Err(Error::InvalidArgument("fib_pow requires n >= 1".into()));
    }
    let overflow = || Error::Overflow { n: n + 1 };
    let mut result = IntMatrix2::IDENTITY;
    let mut base = fib_matrix();
    let mut e = n;
    loop {
        if e & 1 == 1 {
            result = result.checked_mul(&base).ok_or_else(overflow)?;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.checked_mul(&base).ok_or_else(overflow)?;
    }
    Ok(result)
}

/// `F_n` with `F₀ = 0`, read off entry (1,0) of `Fⁿ`.
pub fn fib(n: u64) -> Result<i128> {
    if n == 0 {
        return Ok(0);
    }
    // Fⁿ carries F_{n+1}, which overflows one index before F_n does.
    match fib_pow(n) {
        Ok(m) => Ok(m.entry(1, 0)),
        Err(Error::Overflow { .. }) if n > 1 => fib_pow(n - 1)
            .map(|m| m.entry(0, 0))
            .map_err(|_| Error::Overflow { n }),
        Err(e) => Err(e),
    }
}

#[cfg(feature = "bigint")]
pub mod big {
    //! Unbounded variant of [`super::fib_pow`].
    use num_bigint::BigInt;

    pub type BigMatrix2 = [[BigInt; 2]; 2];

    fn mul(a: &BigMatrix2, b: &BigMatrix2) -> BigMatrix2 {
        let cell = |r: usize, c: usize| &a[r][0] * &b[0][c] + &a[r][1] * &b[1][c];
        [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]]
    }

    pub fn fib_pow(n: u64) -> Option<BigMatrix2> {
        if n == 0 {
            return None;
        }
        let one = || BigInt::from(1);
        let zero = || BigInt::from(0);
        let mut result = [[one(), zero()], [zero(), one()]];
        let mut base = [[one(), one()], [one(), zero()]];
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = mul(&result, &base);
            }
            base = mul(&base, &base);
            e >>= 1;
        }
        Some(result)
    }

    pub fn fib(n: u64) -> BigInt {
        match fib_pow(n) {
            None => BigInt::from(0),
            Some(m) => m[1][0].clone(),
        }
    }
}
