//! Collective ladder dynamics on symmetric N-element states `|l⟩_p`.
//!
//! States are stored as `(N, l)` pairs. σ± act as
//! `σ⁺|l⟩ = √(l+1)√(N−l)|l+1⟩`, `σ⁻|l⟩ = √(N−l+1)√l|l−1⟩`; the Holstein–Primakoff
//! form `σ⁺ = √N S⁺ A_S`, `σ⁻ = √N A_S S⁻` with `A_S = √(1 − S⁺S⁻/N)` reproduces
//! them. For `N ≫ l` the rescaled `S± = σ±/√N` obey `[S⁻, S⁺] → 1`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DickeState {
    n: u64,
    l: u64,
}

impl DickeState {
    pub fn new(n: u64, l: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("particle count N must be positive".into()));
        }
        if l > n {
            return Err(Error::InvalidArgument(format!("excitation count l={l} exceeds N={n}")));
        }
        Ok(Self { n, l })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn l(&self) -> u64 {
        self.l
    }
}

/// Outcome of a ladder operator: a nonnegative coefficient and the target state,
/// or annihilation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderResult {
    pub coefficient: f64,
    pub state: Option<DickeState>,
}

impl LadderResult {
    const ANNIHILATED: Self = Self { coefficient: 0.0, state: None };

    fn to(coefficient: f64, n: u64, l: u64) -> Self {
        if coefficient == 0.0 {
            Self::ANNIHILATED
        } else {
            Self { coefficient, state: Some(DickeState { n, l }) }
        }
    }

    pub fn is_annihilated(&self) -> bool {
        self.state.is_none()
    }
}

pub fn sigma_plus(s: DickeState) -> LadderResult {
    let DickeState { n, l } = s;
    if l == n {
        return LadderResult::ANNIHILATED;
    }
    LadderResult::to(((l + 1) as f64).sqrt() * ((n - l) as f64).sqrt(), n, l + 1)
}

pub fn sigma_minus(s: DickeState) -> LadderResult {
    let DickeState { n, l } = s;
    if l == 0 {
        return LadderResult::ANNIHILATED;
    }
    LadderResult::to(((n - l + 1) as f64).sqrt() * (l as f64).sqrt(), n, l - 1)
}

/// `⟨l|σ₃|l⟩_p = l − N/2`.
pub fn order_parameter(s: DickeState) -> f64 {
    s.l as f64 - s.n as f64 / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpOp {
    SPlus,
    SMinus,
}

/// Bare Holstein–Primakoff boson operators `S±`.
///
/// `S⁺` has no cutoff of its own beyond the storage bound `l ≤ N`.
pub fn hp_operators(s: DickeState, which: HpOp) -> LadderResult {
    let DickeState { n, l } = s;
    match which {
        HpOp::SPlus if l < n => LadderResult::to(((l + 1) as f64).sqrt(), n, l + 1),
        HpOp::SPlus => LadderResult::ANNIHILATED,
        HpOp::SMinus if l > 0 => LadderResult::to((l as f64).sqrt(), n, l - 1),
        HpOp::SMinus => LadderResult::ANNIHILATED,
    }
}

/// `A_S = √(1 − S⁺S⁻/N)` on `|l⟩`, i.e. `√(1 − l/N)`.
pub fn a_s(s: DickeState) -> f64 {
    (1.0 - s.l as f64 / s.n as f64).max(0.0).sqrt()
}

fn then(first: LadderResult, op: impl Fn(DickeState) -> LadderResult) -> LadderResult {
    match first.state {
        None => LadderResult::ANNIHILATED,
        Some(s) => {
            let r = op(s);
            LadderResult { coefficient: first.coefficient * r.coefficient, ..r }
                .normalized()
        }
    }
}

impl LadderResult {
    fn normalized(self) -> Self {
        if self.coefficient == 0.0 {
            Self::ANNIHILATED
        } else {
            self
        }
    }
}

/// `√N · S⁺ · A_S`: `A_S` acts first, on the incoming state.
pub fn hp_sigma_plus(s: DickeState) -> LadderResult {
    let scaled = LadderResult { coefficient: (s.n as f64).sqrt() * a_s(s), state: Some(s) }.normalized();
    then(scaled, |t| hp_operators(t, HpOp::SPlus))
}

/// `√N · A_S · S⁻`: `S⁻` acts first, then `A_S` on the lowered state.
pub fn hp_sigma_minus(s: DickeState) -> LadderResult {
    let lowered = hp_operators(s, HpOp::SMinus);
    then(lowered, |t| LadderResult {
        coefficient: (t.n as f64).sqrt() * a_s(t),
        state: Some(t),
    })
}

/// `⟨l|[σ⁻, σ⁺]|l⟩` from the ladder coefficients.
pub fn su2_commutator_expectation(s: DickeState) -> f64 {
    let up = sigma_plus(s).coefficient;
    let down = sigma_minus(s).coefficient;
    up * up - down * down
}

/// `|⟨l|[S⁻, S⁺]|l⟩ − 1|` with `S± = σ±/√N`; analytically `2l/N`.
///
/// Uses the closed form of the diagonal element,
/// `((l+1)(N−l) − l(N−l+1))/N = 1 − 2l/N`, evaluated in integers.
pub fn contraction_deviation(n: u64, l: u64) -> Result<f64> {
    let s = DickeState::new(n, l)?;
    let (n, l) = (s.n as i128, s.l as i128);
    let numer = (l + 1) * (n - l) - l * (n - l + 1);
    Ok(((numer - n) as f64 / n as f64).abs())
}
