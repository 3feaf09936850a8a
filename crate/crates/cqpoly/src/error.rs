//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// Verification failures are never errors; they are reported through
/// [`crate::verify::report::VerificationReport`]. Errors indicate invalid
/// inputs or internal inconsistencies (a non-divisible numerator, for
/// instance, signals a formula error upstream and is deliberately loud).
#[derive(Debug, Error)]
pub enum QError {
    /// A constructor or operation precondition was violated.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An infinite product overflowed; reports which factor blew up.
    #[error("infinite product overflowed at factor {factor_index}")]
    ProductOverflow { factor_index: usize },

    /// A series denominator vanished (lower parameter hit a pole).
    #[error("series denominator vanishes: lower parameter {parameter} at term {term_index}")]
    SeriesPole { parameter: String, term_index: usize },

    /// A non-terminating series failed its tail test within the cutoff.
    #[error("series did not converge within {terms} terms (last |term|/|sum| = {ratio:.3e})")]
    SeriesNonConvergent { terms: usize, ratio: f64 },

    /// The q-exponential e_q was evaluated at (numerically) a pole.
    #[error("pole of e_q: |({z_re}+{z_im}i; q)_inf| = {magnitude:.3e} below tolerance")]
    EqPole { z_re: f64, z_im: f64, magnitude: f64 },

    /// Division by (z - 1/z) left a remainder: the numerator was not the
    /// image of a polynomial under an antisymmetric difference.
    #[error("not divisible by z - 1/z: relative remainder {remainder:.3e}")]
    NonDivisible { remainder: f64 },

    /// A symmetric Laurent polynomial was constructed from visibly
    /// asymmetric data.
    #[error("symmetry violation: relative asymmetry {asymmetry:.3e}")]
    AsymmetricInput { asymmetry: f64 },

    /// A graded basis expansion hit a vanishing leading coefficient.
    #[error("leading coefficient underflow in basis expansion at degree {degree}")]
    SingularLeading { degree: usize },

    /// A graded basis expansion failed to reconstruct its input.
    #[error("basis expansion reconstruction residual {residual:.3e} above tolerance")]
    ExpansionResidual { residual: f64 },

    /// A lowering operator was applied to a function of t-degree zero.
    #[error("operator would produce a negative t-degree")]
    NegativeTDegree,

    /// Weight parameters outside the positivity domain.
    #[error("weight parameters outside positivity domain: max |param| = {max_abs}")]
    WeightDomain { max_abs: f64 },

    /// A closed-form denominator product vanished.
    #[error("denominator product vanishes: {0}")]
    VanishingDenominator(String),
}

pub type Result<T> = std::result::Result<T, QError>;
