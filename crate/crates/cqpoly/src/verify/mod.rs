//! Numerical verification of the identity stock: every module here turns
//! one family of claims into a [`report::VerificationReport`] with explicit
//! grids, residuals, and tolerances. The acceptance suite in [`suite`]
//! bundles them into the criteria the test target and the CLI expose.

pub mod actions;
pub mod classical;
pub mod ladders;
pub mod matrix_elements;
pub mod quadrature;
pub mod report;
pub mod suite;

use num_complex::Complex64;

/// Relative difference with an underflow guard: when both values have
/// dropped below any representable significance the pair is counted as
/// agreeing exactly rather than producing 0/0.
pub(crate) fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale < 1e-280 {
        return 0.0;
    }
    (a - b).norm() / scale
}
