use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
///
/// `code()` gives the stable string identifier used by the CLI; the
/// `Display` text can change freely.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("input polynomial is zero or a single monomial")]
    NotACurve,
    #[error("denominator of coefficient at ({0}, {1}) is divisible by p")]
    BadDenominator(i64, i64),
    #[error("ramification degree {0} is divisible by the residue characteristic")]
    WildExtension(u64),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("Newton polygon has zero area")]
    ZeroVolume,
    #[error("enumeration budget exceeded: needed {needed} field elements, cap {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("invalid slope interval: left endpoint must exceed right endpoint")]
    InvalidInterval,
    #[error("curve has genus 0")]
    GenusZero,
    #[error("curve is not regular for this subdivision")]
    NotRegular,
    #[error("curve is not semistable")]
    NotSemistable,
    #[error("subdivision does not consist of a single tame face")]
    NotSingleTameFace,
    #[error("Weierstrass equation is singular (zero discriminant)")]
    SingularCurve,
    #[error("shift loop failed to terminate within the iteration cap")]
    NonTermination,
    #[error("all faces are removable")]
    AllRemovable,
    #[error("chart specialization mismatch at edge {edge} chart {chart}: {detail}")]
    SpecializationMismatch {
        edge: usize,
        chart: usize,
        detail: String,
    },
    #[error("both partial derivatives vanish identically")]
    InseparableBothWays,
    #[error("point does not reduce to a multiplicity-one component")]
    NoRationalComponent,
}

impl Error {
    /// Stable machine-readable code for CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotACurve => "NotACurve",
            Error::BadDenominator(..) => "BadDenominator",
            Error::WildExtension(..) => "WildExtension",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ZeroVolume => "ZeroVolume",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InvalidInterval => "InvalidInterval",
            Error::GenusZero => "GenusZero",
            Error::NotRegular => "NotRegular",
            Error::NotSemistable => "NotSemistable",
            Error::NotSingleTameFace => "NotSingleTameFace",
            Error::SingularCurve => "SingularCurve",
            Error::NonTermination => "NonTermination",
            Error::AllRemovable => "AllRemovable",
            Error::SpecializationMismatch { .. } => "SpecializationMismatch",
            Error::InseparableBothWays => "InseparableBothWays",
            Error::NoRationalComponent => "NoRationalComponent",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
