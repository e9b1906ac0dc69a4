//! Algebraic dynamics for Minimalist syntax.
//!
//! Two halves share this crate:
//!
//! * a symbolic derivation engine ([`syntax`]) with External/Internal Merge over
//!   unordered sets, phases with impenetrability, labeling at transfer and
//!   externalization that pronounces one copy per occurrence class;
//! * numerics for the SU(2) tree dynamics ([`su2`], [`xbar`], [`fibonacci`]),
//!   the collective ladder ([`collective`]) and the doubled algebra with its
//!   θ-vacua and thermodynamics ([`doubled`]).

pub mod collective;
pub mod doubled;
mod error;
pub mod fibonacci;
pub mod output;
pub mod su2;
pub mod syntax;
pub mod xbar;

pub use error::{Error, Result};
