//! q-shifted factorials, infinite q-products, basic hypergeometric series,
//! and the classical q-exponentials e_q and E_q.
//!
//! Everything here takes a [`QContext`] carrying the base q, truncation
//! controls, and the two tolerance levels used throughout the crate:
//! `tol_exact` for finitely-representable identities and `tol_series` for
//! truncated-series identities.

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::verify::report::VerificationReport;

/// Immutable evaluation context: the base q and truncation/tolerance policy.
///
/// Infinite products truncate by a tail-log bound rather than a fixed factor
/// count, so accuracy is uniform in q (q near 1 silently gets more factors,
/// bounded by `product_cutoff`).
#[derive(Debug, Clone, Copy)]
pub struct QContext {
    q: f64,
    product_cutoff: usize,
    series_cutoff: usize,
    tol_exact: f64,
    tol_series: f64,
}

impl QContext {
    pub const DEFAULT_TOL_EXACT: f64 = 1e-12;
    pub const DEFAULT_TOL_SERIES: f64 = 1e-8;

    /// Context with default tolerances. Rejects q outside the open
    /// interval (0, 1).
    pub fn new(q: f64) -> Result<Self> {
        Self::with_tolerances(q, Self::DEFAULT_TOL_EXACT, Self::DEFAULT_TOL_SERIES)
    }

    /// Context with explicit tolerances; requires 0 < tol_exact <= tol_series.
    pub fn with_tolerances(q: f64, tol_exact: f64, tol_series: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QError::InvalidParameter(format!(
                "q must lie strictly inside (0, 1), got {q}"
            )));
        }
        if !(tol_exact > 0.0 && tol_series > 0.0 && tol_exact <= tol_series) {
            return Err(QError::InvalidParameter(format!(
                "tolerances must satisfy 0 < tol_exact <= tol_series, got {tol_exact} and {tol_series}"
            )));
        }
        // Smallest K with q^K < eps * tol_exact; hard-capped so q extremely
        // close to 1 cannot demand an unbounded factor count.
        let target = f64::EPSILON * tol_exact;
        let k = (target.ln() / q.ln()).ceil();
        let product_cutoff = if k.is_finite() {
            (k as usize).clamp(64, 50_000_000)
        } else {
            64
        };
        Ok(QContext {
            q,
            product_cutoff,
            series_cutoff: 500,
            tol_exact,
            tol_series,
        })
    }

    /// Same context with a different series term cap.
    pub fn with_series_cutoff(mut self, series_cutoff: usize) -> Result<Self> {
        if series_cutoff == 0 {
            return Err(QError::InvalidParameter(
                "series_cutoff must be positive".into(),
            ));
        }
        self.series_cutoff = series_cutoff;
        Ok(self)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn product_cutoff(&self) -> usize {
        self.product_cutoff
    }

    pub fn series_cutoff(&self) -> usize {
        self.series_cutoff
    }

    pub fn tol_exact(&self) -> f64 {
        self.tol_exact
    }

    pub fn tol_series(&self) -> f64 {
        self.tol_series
    }

    /// q^(k/2) for an integer number of half-steps k (positive or negative).
    pub fn q_half_pow(&self, half_steps: i64) -> f64 {
        if half_steps % 2 == 0 {
            self.q.powi((half_steps / 2) as i32)
        } else {
            self.q.sqrt().powi(half_steps as i32)
        }
    }
}

/// Finite q-shifted factorial: the product of (1 - a q^k) for k < n.
pub fn qpochhammer(a: Complex64, n: usize, ctx: &QContext) -> Complex64 {
    qpochhammer_base(a, ctx.q(), n)
}

/// Finite shifted factorial with an explicit base (used for base q^2 forms).
pub fn qpochhammer_base(a: Complex64, base: f64, n: usize) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut bk = 1.0;
    for _ in 0..n {
        prod *= Complex64::new(1.0, 0.0) - a * bk;
        bk *= base;
    }
    prod
}

/// Infinite q-shifted factorial: the product of (1 - a q^k) over all k >= 0.
///
/// Truncates once the log of the remaining tail product is certainly below
/// a tenth of `tol_exact`; reports overflow with the offending factor index
/// if |a| is large enough to blow up an intermediate.
pub fn qpochhammer_inf(a: Complex64, ctx: &QContext) -> Result<Complex64> {
    qpochhammer_inf_base(a, ctx.q(), ctx)
}

/// Infinite shifted factorial with an explicit base in (0, 1).
pub fn qpochhammer_inf_base(a: Complex64, base: f64, ctx: &QContext) -> Result<Complex64> {
    if !(base > 0.0 && base < 1.0) {
        return Err(QError::InvalidParameter(format!(
            "product base must lie in (0, 1), got {base}"
        )));
    }
    let tail_target = ctx.tol_exact() / 10.0;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut bk = 1.0;
    let abs_a = a.norm();
    for k in 0..ctx.product_cutoff() {
        // |log of remaining tail| <= |a| base^k / (1 - base) once the terms
        // are small; the bound is monotone so testing it first is safe.
        if abs_a * bk / (1.0 - base) < tail_target {
            return Ok(prod);
        }
        prod *= Complex64::new(1.0, 0.0) - a * bk;
        if !prod.is_finite() {
            return Err(QError::ProductOverflow { factor_index: k });
        }
        if prod.norm() == 0.0 {
            return Ok(prod);
        }
        bk *= base;
    }
    Ok(prod)
}

/// Product of q-shifted factorials over a parameter list; `n = None` means
/// every factor is the infinite product.
pub fn qpochhammer_multi(
    params: &[Complex64],
    n: Option<usize>,
    ctx: &QContext,
) -> Result<Complex64> {
    let mut prod = Complex64::new(1.0, 0.0);
    for &a in params {
        prod *= match n {
            Some(n) => qpochhammer(a, n, ctx),
            None => qpochhammer_inf(a, ctx)?,
        };
    }
    Ok(prod)
}

/// Basic hypergeometric series with r upper and s lower parameters.
///
/// Each term carries the balancing factor [(-1)^n q^(n(n-1)/2)]^(1+s-r).
/// If an upper parameter equals q^(-N) the series terminates at n = N and
/// is summed exactly; otherwise it runs to the context's series cutoff and
/// the last retained term must pass the tail test against `tol_series`.
pub fn phi_rs(
    upper: &[Complex64],
    lower: &[Complex64],
    arg: Complex64,
    ctx: &QContext,
) -> Result<Complex64> {
    let q = ctx.q();
    let balance = 1 + lower.len() as i32 - upper.len() as i32;

    // Detect exactly terminating upper parameters a = q^(-N).
    let mut termination: Option<usize> = None;
    for &a in upper {
        if a.im == 0.0 && a.re > 1.0 {
            let n_est = (-a.re.ln() / q.ln()).round();
            if n_est >= 0.0 && n_est < 1e6 {
                let n_est = n_est as usize;
                if (a * Complex64::new(q.powi(n_est as i32), 0.0) - 1.0).norm() < 1e-9 {
                    termination = Some(termination.map_or(n_est, |t: usize| t.min(n_est)));
                }
            }
        }
    }

    let n_max = match termination {
        Some(t) => t,
        None => ctx.series_cutoff() - 1,
    };

    let one = Complex64::new(1.0, 0.0);
    let mut term = one;
    let mut sum = one;
    let mut qn = 1.0; // q^n
    for n in 0..n_max {
        let mut ratio = one;
        for &a in upper {
            ratio *= one - a * qn;
        }
        for (j, &b) in lower.iter().enumerate() {
            let factor = one - b * qn;
            if factor.norm() < 1e-12 {
                return Err(QError::SeriesPole {
                    parameter: format!("lower[{j}] = {b}"),
                    term_index: n,
                });
            }
            ratio /= factor;
        }
        ratio /= 1.0 - q * qn; // the (q; q)_n factor
        if balance != 0 {
            let bal = -q.powi(n as i32); // (-1) q^n
            ratio *= bal.powi(balance);
        }
        term *= ratio * arg;
        sum += term;
        qn *= q;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        if n > 4 && term.norm() < 1e-30 * sum.norm() {
            return Ok(sum);
        }
    }

    if termination.is_none() {
        let rel = term.norm() / sum.norm().max(f64::MIN_POSITIVE);
        if rel > ctx.tol_series() {
            return Err(QError::SeriesNonConvergent {
                terms: ctx.series_cutoff(),
                ratio: rel,
            });
        }
    }
    Ok(sum)
}

/// q-exponential e_q(z) = 1/(z;q)_inf, evaluated through the product form.
pub fn e_q(zarg: Complex64, ctx: &QContext) -> Result<Complex64> {
    let denom = qpochhammer_inf(zarg, ctx)?;
    if denom.norm() < ctx.tol_exact() {
        return Err(QError::EqPole {
            z_re: zarg.re,
            z_im: zarg.im,
            magnitude: denom.norm(),
        });
    }
    Ok(denom.finv())
}

/// q-exponential E_q(z) = (-z;q)_inf, evaluated through the product form.
pub fn big_e_q(zarg: Complex64, ctx: &QContext) -> Result<Complex64> {
    qpochhammer_inf(-zarg, ctx)
}

/// Checks the q-binomial summation: the series sum of (a;q)_n/(q;q)_n z^n
/// against the product ratio (az;q)_inf/(z;q)_inf. Requires |z| < 1.
pub fn verify_q_binomial(
    a: Complex64,
    zarg: Complex64,
    ctx: &QContext,
) -> Result<VerificationReport> {
    if zarg.norm() >= 1.0 {
        return Err(QError::InvalidParameter(format!(
            "q-binomial check requires |z| < 1, got |z| = {}",
            zarg.norm()
        )));
    }
    let q = ctx.q();
    let one = Complex64::new(1.0, 0.0);
    let mut term = one;
    let mut lhs = one;
    let mut qn = 1.0;
    for n in 0..ctx.series_cutoff() - 1 {
        term *= (one - a * qn) / (1.0 - q * qn) * zarg;
        lhs += term;
        qn *= q;
        if n > 4 && term.norm() < 1e-30 * lhs.norm() {
            break;
        }
    }
    let rhs = qpochhammer_inf(a * zarg, ctx)? / qpochhammer_inf(zarg, ctx)?;
    let residual = (lhs - rhs).norm();
    let grid = vec![vec![
        ("a_re".to_string(), a.re),
        ("a_im".to_string(), a.im),
        ("z_re".to_string(), zarg.re),
        ("z_im".to_string(), zarg.im),
        ("q".to_string(), q),
    ]];
    Ok(VerificationReport::new(
        "q-binomial",
        grid,
        vec![residual],
        ctx.tol_series(),
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn context_rejects_bad_q() {
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(1.0).is_err());
        assert!(QContext::new(-0.5).is_err());
        assert!(QContext::new(1.5).is_err());
        assert!(QContext::new(0.5).is_ok());
    }

    #[test]
    fn context_rejects_bad_tolerances() {
        assert!(QContext::with_tolerances(0.5, 1e-8, 1e-12).is_err());
        assert!(QContext::with_tolerances(0.5, 0.0, 1e-8).is_err());
        assert!(QContext::with_tolerances(0.5, 1e-12, 1e-8).is_ok());
    }

    #[test]
    fn pochhammer_edge_cases() {
        let ctx = QContext::new(0.5).unwrap();
        assert_eq!(qpochhammer(c(0.3, 0.0), 0, &ctx), c(1.0, 0.0));
        assert_eq!(qpochhammer(c(0.0, 0.0), 7, &ctx), c(1.0, 0.0));
        let q = ctx.q();
        let got = qpochhammer(c(q, 0.0), 1, &ctx);
        assert!((got - c(1.0 - q, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pochhammer_product_recurrence() {
        // (a;q)_{n+1} = (a;q)_n (1 - a q^n) for n up to 200.
        let ctx = QContext::new(0.7).unwrap();
        let a = c(0.4, 0.3);
        let mut prev = c(1.0, 0.0);
        for n in 0..200usize {
            let next = qpochhammer(a, n + 1, &ctx);
            let step = prev * (c(1.0, 0.0) - a * ctx.q().powi(n as i32));
            assert!((next - step).norm() <= 1e-12 * step.norm().max(1.0));
            prev = next;
        }
    }

    #[test]
    fn pochhammer_inf_trivials() {
        let ctx = QContext::new(0.5).unwrap();
        assert_eq!(qpochhammer_inf(c(0.0, 0.0), &ctx).unwrap(), c(1.0, 0.0));
        assert_eq!(qpochhammer_inf(c(1.0, 0.0), &ctx).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pochhammer_inf_matches_long_product() {
        let ctx = QContext::new(0.5).unwrap();
        let a = c(0.5, 0.0);
        let brute = qpochhammer(a, 200, &ctx);
        let got = qpochhammer_inf(a, &ctx).unwrap();
        assert!((got - brute).norm() < ctx.tol_exact());
    }

    #[test]
    fn pochhammer_inf_splits() {
        // (a;q)_inf = (a;q)_K (a q^K; q)_inf for K in {1, 5, 20}.
        let ctx = QContext::new(0.6).unwrap();
        let a = c(0.8, -0.1);
        let full = qpochhammer_inf(a, &ctx).unwrap();
        for k in [1usize, 5, 20] {
            let head = qpochhammer(a, k, &ctx);
            let tail = qpochhammer_inf(a * ctx.q().powi(k as i32), &ctx).unwrap();
            assert!((full - head * tail).norm() < ctx.tol_exact());
        }
    }

    #[test]
    fn multi_pochhammer() {
        let ctx = QContext::new(0.5).unwrap();
        assert_eq!(
            qpochhammer_multi(&[], Some(5), &ctx).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            qpochhammer_multi(&[c(0.0, 0.0), c(0.0, 0.0)], None, &ctx).unwrap(),
            c(1.0, 0.0)
        );
        let q = ctx.q();
        let got = qpochhammer_multi(&[c(q, 0.0), c(q, 0.0)], Some(1), &ctx).unwrap();
        assert!((got - c((1.0 - q) * (1.0 - q), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phi_with_unit_upper_parameter_is_one() {
        // (1;q)_n = 0 for n >= 1, so only the constant term survives.
        let ctx = QContext::new(0.5).unwrap();
        let got = phi_rs(&[c(1.0, 0.0)], &[], c(0.3, 0.0), &ctx).unwrap();
        assert!((got - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phi_terminating_at_zero_is_one() {
        let ctx = QContext::new(0.5).unwrap();
        // Upper parameter q^0 = 1 terminates the 4-phi-3 at its first term.
        let upper = [c(1.0, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)];
        let lower = [c(0.5, 0.0), c(0.6, 0.0), c(0.7, 0.0)];
        let got = phi_rs(&upper, &lower, c(0.5, 0.0), &ctx).unwrap();
        assert!((got - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phi_termination_is_cutoff_independent() {
        let ctx_small = QContext::new(0.5).unwrap().with_series_cutoff(40).unwrap();
        let ctx_large = QContext::new(0.5).unwrap().with_series_cutoff(400).unwrap();
        let qinv3 = c(0.5f64.powi(-3), 0.0);
        let upper = [qinv3, c(0.4, 0.0)];
        let lower = [c(0.25, 0.0)];
        let a = phi_rs(&upper, &lower, c(0.8, 0.0), &ctx_small).unwrap();
        let b = phi_rs(&upper, &lower, c(0.8, 0.0), &ctx_large).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn phi_reports_lower_pole() {
        let ctx = QContext::new(0.5).unwrap();
        // Lower parameter q^{-2} hits 1 - b q^2 = 0 at term index 2.
        let err = phi_rs(
            &[c(0.3, 0.0)],
            &[c(0.5f64.powi(-2), 0.0)],
            c(0.2, 0.0),
            &ctx,
        )
        .unwrap_err();
        match err {
            QError::SeriesPole { term_index, .. } => assert_eq!(term_index, 2),
            other => panic!("expected SeriesPole, got {other:?}"),
        }
    }

    #[test]
    fn eq_product_vs_series() {
        // e_q(z) equals its 60-term series; E_q likewise with the signed
        // triangular powers.
        let ctx = QContext::new(0.5).unwrap();
        let z = c(0.3, 0.2);
        let q = ctx.q();
        let mut series = c(0.0, 0.0);
        let mut term = c(1.0, 0.0);
        for n in 0..60 {
            series += term;
            term *= z / (1.0 - q.powi(n + 1));
        }
        let got = e_q(z, &ctx).unwrap();
        assert!((got - series).norm() < ctx.tol_series());

        let mut big_series = c(0.0, 0.0);
        let mut big_term = c(1.0, 0.0);
        for n in 0..60i32 {
            big_series += big_term;
            big_term *= z * q.powi(n) / (1.0 - q.powi(n + 1));
        }
        let big_got = big_e_q(z, &ctx).unwrap();
        assert!((big_got - big_series).norm() < ctx.tol_series());
    }

    #[test]
    fn eq_trivials_and_pole() {
        let ctx = QContext::new(0.5).unwrap();
        assert_eq!(e_q(c(0.0, 0.0), &ctx).unwrap(), c(1.0, 0.0));
        assert_eq!(big_e_q(c(0.0, 0.0), &ctx).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            e_q(c(1.0, 0.0), &ctx),
            Err(QError::EqPole { .. })
        ));
    }

    #[test]
    fn eq_inverse_identities() {
        // e_q(z)(z;q)_inf = 1 and E_q(z)/(-z;q)_inf = 1 on |z| <= 0.9.
        let ctx = QContext::new(0.7).unwrap();
        for &z in &[c(0.9, 0.0), c(-0.5, 0.4), c(0.0, -0.9), c(0.3, 0.3)] {
            let p = qpochhammer_inf(z, &ctx).unwrap();
            assert!((e_q(z, &ctx).unwrap() * p - c(1.0, 0.0)).norm() < ctx.tol_exact());
            let m = qpochhammer_inf(-z, &ctx).unwrap();
            assert!((big_e_q(z, &ctx).unwrap() / m - c(1.0, 0.0)).norm() < ctx.tol_exact());
        }
    }

    #[test]
    fn q_binomial_cases() {
        let ctx = QContext::new(0.5).unwrap();
        let zero = verify_q_binomial(c(0.0, 0.0), c(0.0, 0.0), &ctx).unwrap();
        assert!(zero.passed);
        assert_eq!(zero.max_residual, 0.0);

        let r = verify_q_binomial(c(0.5, 0.0), c(0.5, 0.0), &ctx).unwrap();
        assert!(r.passed, "max residual {}", r.max_residual);

        let ctx64 = QContext::new(0.64).unwrap();
        let r2 = verify_q_binomial(c(0.64 * 0.64, 0.0), c(-0.25, 0.0), &ctx64).unwrap();
        assert!(r2.passed, "max residual {}", r2.max_residual);

        assert!(verify_q_binomial(c(0.1, 0.0), c(1.2, 0.0), &ctx).is_err());
    }

    #[test]
    fn q_half_pow_signs() {
        let ctx = QContext::new(0.81).unwrap();
        assert!((ctx.q_half_pow(2) - 0.81).abs() < 1e-15);
        assert!((ctx.q_half_pow(1) - 0.9).abs() < 1e-15);
        assert!((ctx.q_half_pow(-1) - 1.0 / 0.9).abs() < 1e-15);
        assert!((ctx.q_half_pow(0) - 1.0).abs() < 1e-15);
    }
}
