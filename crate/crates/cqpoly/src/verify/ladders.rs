//! Coefficientwise checks of the first-order ladder relations: the
//! difference operators acting on the polynomial families land exactly on
//! the displayed scalar multiples of neighbouring family members.
//!
//! All residuals are relative to the larger side's largest coefficient:
//! at order 25 the raw coefficients reach 1e7 and an absolute bound would
//! sit below what f64 arithmetic can resolve.

use num_complex::Complex64;

use crate::error::Result;
use crate::laurent::SymLaurent;
use crate::qcore::QContext;
use crate::qfuncs::psi_n_laurent;
use crate::qops::{mu_z, tau_star_z, tau_z};
use crate::qpoly::{hermite_laurent, ultraspherical_laurent};
use crate::verify::report::VerificationReport;

fn ladder_residual(lhs: &SymLaurent, rhs: &SymLaurent) -> f64 {
    let scale = lhs.max_coeff_norm().max(rhs.max_coeff_norm()).max(1e-250);
    lhs.sub(rhs).max_coeff_norm() / scale
}

/// The three Hermite ladders (lowering, raising, diagonal) for n ≤ nmax,
/// plus the ψ lowering ladder for each supplied parameter a.
///
/// Relation index in the grid rows: 0 lowering, 1 raising, 2 diagonal,
/// 3 ψ-lowering. a is recorded as (a_re, a_im), zero on Hermite rows.
pub fn hermite_ladders_report(
    nmax: usize,
    psi_a: &[Complex64],
    tol: f64,
    ctx: &QContext,
) -> Result<VerificationReport> {
    let q = ctx.q();
    let mut grid = Vec::new();
    let mut residuals = Vec::new();
    let row = |relation: f64, n: usize, a: Complex64| {
        vec![
            ("relation".to_string(), relation),
            ("n".to_string(), n as f64),
            ("a_re".to_string(), a.re),
            ("a_im".to_string(), a.im),
            ("q".to_string(), q),
        ]
    };
    for n in 0..=nmax {
        let h = hermite_laurent(n, ctx);
        // lowering: τ H_n = q^{n/2}(1 - q^{-n}) H_{n-1}
        let lhs = tau_z(&h, ctx)?;
        let rhs = if n == 0 {
            SymLaurent::zero()
        } else {
            let s = ctx.q_half_pow(n as i64) * (1.0 - ctx.q_half_pow(-2 * n as i64));
            hermite_laurent(n - 1, ctx).scale(Complex64::new(s, 0.0))
        };
        grid.push(row(0.0, n, Complex64::ZERO));
        residuals.push(ladder_residual(&lhs, &rhs));
        // raising: τ* H_n = -q^{-(n+1)/2} H_{n+1}
        let lhs = tau_star_z(&h, ctx)?;
        let s = -ctx.q_half_pow(-(n as i64 + 1));
        let rhs = hermite_laurent(n + 1, ctx).scale(Complex64::new(s, 0.0));
        grid.push(row(1.0, n, Complex64::ZERO));
        residuals.push(ladder_residual(&lhs, &rhs));
        // diagonal: μ H_n = q^{-n/2} H_n
        let lhs = mu_z(&h, ctx)?;
        let rhs = h.scale(Complex64::new(ctx.q_half_pow(-(n as i64)), 0.0));
        grid.push(row(2.0, n, Complex64::ZERO));
        residuals.push(ladder_residual(&lhs, &rhs));
    }
    for &a in psi_a {
        for n in 0..=nmax {
            // ψ lowering: τ ψ_n = a q^{-n/2}(1 - q^n) ψ_{n-1}
            let lhs = tau_z(&psi_n_laurent(a, n, ctx), ctx)?;
            let rhs = if n == 0 {
                SymLaurent::zero()
            } else {
                let s = a * ctx.q_half_pow(-(n as i64)) * (1.0 - ctx.q_half_pow(2 * n as i64));
                psi_n_laurent(a, n - 1, ctx).scale(s)
            };
            grid.push(row(3.0, n, a));
            residuals.push(ladder_residual(&lhs, &rhs));
        }
    }
    Ok(VerificationReport::new(
        "hermite-ladders",
        grid,
        residuals,
        tol,
        vec![],
    ))
}

/// The ultraspherical lowering ladder, which also shifts the parameter:
/// τ C_n(x; q^m) = -q^{-n/2}(1 - q^m) C_{n-1}(x; q^{m+1}), for n ≤ nmax
/// and 1 ≤ m ≤ m_max.
pub fn ultra_ladder_report(
    nmax: usize,
    m_max: i64,
    tol: f64,
    ctx: &QContext,
) -> Result<VerificationReport> {
    let q = ctx.q();
    let mut grid = Vec::new();
    let mut residuals = Vec::new();
    for m in 1..=m_max {
        for n in 0..=nmax {
            let lhs = tau_z(&ultraspherical_laurent(n, m, ctx)?, ctx)?;
            let rhs = if n == 0 {
                SymLaurent::zero()
            } else {
                let s = -ctx.q_half_pow(-(n as i64)) * (1.0 - q.powi(m as i32));
                ultraspherical_laurent(n - 1, m + 1, ctx)?.scale(Complex64::new(s, 0.0))
            };
            grid.push(vec![
                ("n".to_string(), n as f64),
                ("m".to_string(), m as f64),
                ("q".to_string(), q),
            ]);
            residuals.push(ladder_residual(&lhs, &rhs));
        }
    }
    Ok(VerificationReport::new(
        "ultra-ladder",
        grid,
        residuals,
        tol,
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_ladders_pass_at_high_order() {
        for &q in &[0.3, 0.5, 0.8] {
            let ctx = QContext::new(q).unwrap();
            let a_params = [Complex64::new(0.0, -1.0), Complex64::new(0.6, 0.0)];
            let rep = hermite_ladders_report(25, &a_params, 1e-10, &ctx).unwrap();
            assert!(rep.passed, "q={q}: worst {:?}", rep.worst_point());
        }
    }

    #[test]
    fn ultra_ladder_passes() {
        for &q in &[0.3, 0.5, 0.8] {
            let ctx = QContext::new(q).unwrap();
            let rep = ultra_ladder_report(12, 4, 1e-10, &ctx).unwrap();
            assert!(rep.passed, "q={q}: worst {:?}", rep.worst_point());
        }
    }
}
