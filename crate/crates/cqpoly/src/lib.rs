//! Numerical library for continuous q-orthogonal polynomials and the
//! divided-difference operator algebras acting on them.
//!
//! The crate is organized in layers:
//!
//! - [`qcore`]: q-shifted factorials, infinite q-products, basic
//!   hypergeometric series, and the classical q-exponentials.
//! - [`laurent`]: exact arithmetic on (symmetric) Laurent polynomials in z,
//!   where x = (z + 1/z)/2, plus the graded basis-expansion oracle.
//! - [`qfuncs`]: the special functions built on top: the psi building
//!   blocks, the eigen-exponential of the divided-difference operator tau,
//!   and the second Jackson q-Bessel function.
//! - [`qpoly`]: continuous q-Hermite, continuous q-ultraspherical and
//!   Askey-Wilson polynomials with their recurrences, special values and
//!   orthogonality weight.
//! - [`qops`]: the operators tau, tau*, mu, tau-tilde and the algebra
//!   generators J+, J-, K, P0, P+, P- acting exactly on basis functions,
//!   with relation checkers for the q-Heisenberg and quantum sl(2) algebras.
//! - [`verify`]: the identity-verification engine: generating-function and
//!   q-Fourier-Gegenbauer expansions, matrix-element recursions,
//!   orthogonality quadrature, and classical-limit sweeps.
//!
//! All computations are pure functions of their inputs; every public type is
//! immutable after construction, so unrestricted concurrent use is safe.

mod dd;
pub mod error;
pub mod laurent;
pub mod qcore;
pub mod qfuncs;
pub mod qops;
pub mod qpoly;
pub mod verify;

pub use error::{QError, Result};
pub use qcore::QContext;
pub use verify::report::VerificationReport;
