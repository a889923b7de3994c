//! Models of plane curves over discretely valued fields, computed from the
//! Newton polytope of the defining equation with exact arithmetic.
//!
//! The pipeline goes: parse/ingest the equation ([`curve`]), build the
//! regular subdivision of the Newton polygon induced by coefficient
//! valuations ([`polytope`]), reduce the equation along each stratum and
//! decide regularity ([`schemes`]), assemble the special fibre of the
//! toroidal model and its dual graph ([`model`]), contract to the minimal
//! normal-crossings fibre ([`minimal`]), and read off reduction types,
//! homology, tame inertia, local polynomials and differentials
//! ([`invariants`]). [`elliptic`] runs the shift loop for Weierstrass
//! equations and reports Kodaira types.

pub mod algebra;
pub mod curve;
pub mod elliptic;
pub mod error;
pub mod invariants;
pub mod minimal;
pub mod model;
pub mod polytope;
pub mod report;
pub mod schemes;

pub use error::{Error, Result};

/// Enumeration and chain-length budgets; hard errors, never silent
/// truncation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Cap on field elements visited per brute-force count.
    pub max_enum: u128,
    /// Cap on intermediate fractions per slope chain.
    pub max_farey: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_enum: 1_000_000,
            max_farey: 100_000,
        }
    }
}
