//! Orthogonal polynomial families: continuous q-Hermite, continuous
//! q-ultraspherical (Rogers), and Askey–Wilson, plus the Askey–Wilson
//! weight, leading coefficients, and special values at x = 0.
//!
//! The ultraspherical family is defined here by its explicit symmetric
//! Laurent sum (exact, finitely many real coefficients, no denominator
//! hazards); the three-term recurrences and the Askey–Wilson reduction are
//! verification surfaces checked against that definition, never used as
//! the definition themselves.

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::laurent::{BasisFunction, SymLaurent};
use crate::qcore::{phi_rs, qpochhammer_base, qpochhammer_inf, QContext};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// (q;q)_j for j = 0..=n.
fn qq_table(n: usize, q: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    t.push(acc);
    for j in 1..=n {
        acc *= 1.0 - q.powi(j as i32);
        t.push(acc);
    }
    t
}

// ======================================================================
// Continuous q-Hermite
// ======================================================================

/// H_n(x|q) = Σ_k (q;q)_n / ((q;q)_k (q;q)_{n-k}) z^(n-2k), exact.
pub fn hermite_laurent(n: usize, ctx: &QContext) -> SymLaurent {
    let qq = qq_table(n, ctx.q());
    let half = (0..=n / 2).map(|k| {
        let e = (n - 2 * k) as i64;
        let coeff = qq[n] / (qq[k] * qq[n - k]);
        (e, Complex64::new(coeff, 0.0))
    });
    SymLaurent::from_half(half)
}

/// H_n(x|q) by the upward three-term recurrence
/// f_{n+1} = 2x f_n - (1 - q^n) f_{n-1}, f_0 = 1, f_1 = 2x.
pub fn hermite_eval(n: usize, x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - (1.0 - q.powi(k as i32)) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

// ======================================================================
// Continuous q-ultraspherical (Rogers)
// ======================================================================

/// C_n(x; β|q) = Σ_k A_k A_{n-k} z^(n-2k) with A_j = (β;q)_j/(q;q)_j,
/// for any real β.
pub fn ultraspherical_laurent_beta(n: usize, beta: f64, ctx: &QContext) -> SymLaurent {
    let q = ctx.q();
    let qq = qq_table(n, q);
    let mut a = Vec::with_capacity(n + 1);
    let mut poch = 1.0;
    a.push(1.0);
    for j in 1..=n {
        poch *= 1.0 - beta * q.powi(j as i32 - 1);
        a.push(poch / qq[j]);
    }
    let half = (0..=n / 2).map(|k| {
        let e = (n - 2 * k) as i64;
        (e, Complex64::new(a[k] * a[n - k], 0.0))
    });
    SymLaurent::from_half(half)
}

/// C_n(x; q^m|q) for integer m >= 1 (the two-variable module parameter).
pub fn ultraspherical_laurent(n: usize, m: i64, ctx: &QContext) -> Result<SymLaurent> {
    if m < 1 {
        return Err(QError::InvalidParameter(format!(
            "ultraspherical parameter exponent must be >= 1, got {m}"
        )));
    }
    Ok(ultraspherical_laurent_beta(n, ctx.q().powi(m as i32), ctx))
}

/// C_n(x; β|q) by the upward recurrence
/// C_{n+1} = [2x(1 - β q^n) C_n - (1 - β² q^(n-1)) C_{n-1}] / (1 - q^(n+1)).
pub fn ultraspherical_eval(n: usize, beta: f64, x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x * (1.0 - beta) / (1.0 - q);
    for k in 1..n {
        let ki = k as i32;
        let next = (2.0 * x * (1.0 - beta * q.powi(ki)) * cur
            - (1.0 - beta * beta * q.powi(ki - 1)) * prev)
            / (1.0 - q.powi(ki + 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// All H_k(x|q) for k = 0..=nmax by one pass of the recurrence.
pub(crate) fn hermite_seq(nmax: usize, x: f64, ctx: &QContext) -> Vec<f64> {
    let q = ctx.q();
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax >= 1 {
        out.push(2.0 * x);
    }
    for k in 1..nmax {
        let next = 2.0 * x * out[k] - (1.0 - q.powi(k as i32)) * out[k - 1];
        out.push(next);
    }
    out
}

/// All C_k(x; β|q) for k = 0..=nmax by one pass of the recurrence.
pub(crate) fn ultraspherical_seq(nmax: usize, beta: f64, x: f64, ctx: &QContext) -> Vec<f64> {
    let q = ctx.q();
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax >= 1 {
        out.push(2.0 * x * (1.0 - beta) / (1.0 - q));
    }
    for k in 1..nmax {
        let ki = k as i32;
        let next = (2.0 * x * (1.0 - beta * q.powi(ki)) * out[k]
            - (1.0 - beta * beta * q.powi(ki - 1)) * out[k - 1])
            / (1.0 - q.powi(ki + 1));
        out.push(next);
    }
    out
}

/// Leading x-coefficient of C_n(x; q^m|q): 2^n (q^m;q)_n/(q;q)_n.
pub fn ultraspherical_leading_coeff(n: usize, m: i64, ctx: &QContext) -> Result<f64> {
    if m < 1 {
        return Err(QError::InvalidParameter(format!(
            "ultraspherical parameter exponent must be >= 1, got {m}"
        )));
    }
    let q = ctx.q();
    let beta = q.powi(m as i32);
    let num = qpochhammer_base(Complex64::new(beta, 0.0), q, n).re;
    let den = qpochhammer_base(Complex64::new(q, 0.0), q, n).re;
    Ok(2.0f64.powi(n as i32) * num / den)
}

// ======================================================================
// The two-variable graded basis
// ======================================================================

/// z-part of the graded basis function with upper index ell and t-degree m:
/// q^(m(ell-m)/2) (q;q)_{ell-m}/(q^(2m);q)_{ell-m} C_{ell-m}(x; q^m|q).
///
/// At m = 0 that normalization degenerates (numerator and denominator both
/// vanish); its limit is (z^ell + z^(-ell))/2 for ell >= 1 and 1 for
/// ell = 0, which is what this returns — the m = 0 floor the lowering
/// operators land on.
pub fn q_basis_laurent(ell: i64, m: i64, ctx: &QContext) -> Result<SymLaurent> {
    if m < 0 || ell < m {
        return Err(QError::InvalidParameter(format!(
            "basis indices need 0 <= m <= ell, got ell={ell}, m={m}"
        )));
    }
    let n = (ell - m) as usize;
    if m == 0 {
        return Ok(if n == 0 {
            SymLaurent::one()
        } else {
            SymLaurent::from_half([(n as i64, Complex64::new(0.5, 0.0))])
        });
    }
    let q = ctx.q();
    let num = qpochhammer_base(Complex64::new(q, 0.0), q, n).re;
    let den = qpochhammer_base(Complex64::new(q.powi(2 * m as i32), 0.0), q, n).re;
    let prefactor = ctx.q_half_pow(m * (ell - m)) * num / den;
    let poly = ultraspherical_laurent(n, m, ctx)?;
    Ok(poly.scale(Complex64::new(prefactor, 0.0)))
}

/// The full basis function: z-part together with its t-degree.
pub fn q_basis(ell: i64, m: i64, ctx: &QContext) -> Result<BasisFunction> {
    BasisFunction::new(q_basis_laurent(ell, m, ctx)?, m)
}

// ======================================================================
// Askey–Wilson
// ======================================================================

/// p_n(x; a,b,c,d | q) through the terminating balanced series
/// a^(-n) (ab,ac,ad;q)_n 4φ3(q^(-n), abcd q^(n-1), a e^{iθ}, a e^{-iθ};
/// ab, ac, ad | q; q).
///
/// The family is symmetric in (a,b,c,d); the largest-magnitude parameter
/// is rotated into the leading slot so the a^(-n) prefactor is well
/// defined even when some parameters vanish. With all four parameters
/// zero the polynomial is exactly H_n(x|q).
pub fn askey_wilson(
    n: usize,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    x: f64,
    ctx: &QContext,
) -> Result<f64> {
    let mut params = [a, b, c, d];
    params.sort_by(|u, v| v.abs().total_cmp(&u.abs()));
    let [a, b, c, d] = params;
    if a == 0.0 {
        return Ok(hermite_eval(n, x, ctx));
    }
    let q = ctx.q();
    let z = unit_or_real_z(x);
    let zinv = z.finv();
    let qn = q.powi(n as i32);
    let upper = [
        Complex64::new(1.0 / qn, 0.0),
        Complex64::new(a * b * c * d * qn / q, 0.0),
        z * a,
        zinv * a,
    ];
    let lower = [
        Complex64::new(a * b, 0.0),
        Complex64::new(a * c, 0.0),
        Complex64::new(a * d, 0.0),
    ];
    let phi = phi_rs(&upper, &lower, Complex64::new(q, 0.0), ctx)?;
    let mut prefactor = a.powi(-(n as i32));
    for &p in &[a * b, a * c, a * d] {
        prefactor *= qpochhammer_base(Complex64::new(p, 0.0), q, n).re;
    }
    Ok((phi * prefactor).re)
}

fn unit_or_real_z(x: f64) -> Complex64 {
    if x.abs() <= 1.0 {
        Complex64::new(x, (1.0 - x * x).max(0.0).sqrt())
    } else {
        Complex64::new(x + x.signum() * (x * x - 1.0).sqrt(), 0.0)
    }
}

/// Askey–Wilson orthogonality weight at angle θ:
/// |(e^{2iθ};q)_∞ / ((a e^{iθ};q)_∞ (b e^{iθ};q)_∞ (c e^{iθ};q)_∞ (d e^{iθ};q)_∞)|².
/// Requires max(|a|,|b|,|c|,|d|) < 1 (the positivity domain).
pub fn aw_weight(theta: f64, a: f64, b: f64, c: f64, d: f64, ctx: &QContext) -> Result<f64> {
    let max_abs = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if max_abs >= 1.0 {
        return Err(QError::WeightDomain { max_abs });
    }
    let z = Complex64::from_polar(1.0, theta);
    let num = qpochhammer_inf(z * z, ctx)?;
    let mut den = Complex64::new(1.0, 0.0);
    for &p in &[a, b, c, d] {
        den *= qpochhammer_inf(z * p, ctx)?;
    }
    let r = num.norm() / den.norm();
    Ok(r * r)
}

// ======================================================================
// Special values at x = 0
// ======================================================================

/// A polynomial family member named by degree and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolySpec {
    Hermite { n: usize },
    Ultraspherical { n: usize, beta: f64 },
    AskeyWilson { n: usize, a: f64, b: f64, c: f64, d: f64 },
}

/// Value at x = 0 computed from the defining sum or recurrence (the
/// trusted route; no closed forms involved).
pub fn special_value_at_zero(spec: &PolySpec, ctx: &QContext) -> Result<f64> {
    match *spec {
        PolySpec::Hermite { n } => Ok(hermite_eval(n, 0.0, ctx)),
        PolySpec::Ultraspherical { n, beta } => {
            Ok(ultraspherical_laurent_beta(n, beta, ctx).eval_x(ZERO).re)
        }
        PolySpec::AskeyWilson { n, a, b, c, d } => askey_wilson(n, a, b, c, d, 0.0, ctx),
    }
}

/// Outcome of checking a closed-form x = 0 value against the defining sum.
#[derive(Debug, Clone, Copy)]
pub struct ZeroComparison {
    /// Value from the defining sum (authoritative).
    pub direct: f64,
    /// The closed form under test.
    pub closed_form: f64,
    pub deviation: f64,
    /// For the ultraspherical family only: a β-dependent closed form
    /// (-1)^k (β²;q²)_k/(q²;q²)_k determined empirically from the defining
    /// sum; it matches `direct` to machine precision, unlike `closed_form`
    /// whose expression carries no β dependence.
    pub corrected_closed_form: Option<f64>,
    pub corrected_deviation: Option<f64>,
}

/// Compare the tabulated x = 0 closed form of a family against the
/// defining sum. For the Hermite family the two agree; for the
/// ultraspherical family the tabulated form disagrees (it lacks any β
/// dependence) and the deviation is reported rather than asserted, with
/// the empirically determined corrected form alongside.
pub fn special_value_zero_comparison(spec: &PolySpec, ctx: &QContext) -> Result<ZeroComparison> {
    let q = ctx.q();
    let q2 = q * q;
    match *spec {
        PolySpec::Hermite { n } => {
            let direct = hermite_eval(n, 0.0, ctx);
            let closed_form = if n % 2 == 1 {
                0.0
            } else {
                let k = n / 2;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * qpochhammer_base(Complex64::new(q, 0.0), q2, k).re
            };
            Ok(ZeroComparison {
                direct,
                closed_form,
                deviation: (direct - closed_form).abs(),
                corrected_closed_form: None,
                corrected_deviation: None,
            })
        }
        PolySpec::Ultraspherical { n, beta } => {
            let direct = special_value_at_zero(spec, ctx)?;
            let (closed_form, corrected) = if n % 2 == 1 {
                (0.0, 0.0)
            } else {
                let k = n / 2;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let tab = sign * qpochhammer_base(Complex64::new(q.powi(2 * k as i32), 0.0), q2, k).re
                    / qpochhammer_base(Complex64::new(q.powi(k as i32), 0.0), q2, k).re;
                let fixed = sign * qpochhammer_base(Complex64::new(beta * beta, 0.0), q2, k).re
                    / qpochhammer_base(Complex64::new(q2, 0.0), q2, k).re;
                (tab, fixed)
            };
            Ok(ZeroComparison {
                direct,
                closed_form,
                deviation: (direct - closed_form).abs(),
                corrected_closed_form: Some(corrected),
                corrected_deviation: Some((direct - corrected).abs()),
            })
        }
        PolySpec::AskeyWilson { .. } => Err(QError::InvalidParameter(
            "no tabulated x=0 closed form for the four-parameter family".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    #[test]
    fn hermite_base_cases() {
        let ctx = ctx(0.5);
        assert_eq!(hermite_laurent(0, &ctx), SymLaurent::one());
        let h1 = hermite_laurent(1, &ctx);
        assert_eq!(h1.coeff(1), c(1.0, 0.0));
        assert_eq!(h1.coeff(-1), c(1.0, 0.0));
        assert_eq!(h1.coeff(0), ZERO);
        // H_2(0) = -(1 - q)
        assert!((hermite_eval(2, 0.0, &ctx) + 0.5).abs() < 1e-15);
        // H_4(0) = (1-q)(1-q³)
        let q = ctx.q();
        assert!((hermite_eval(4, 0.0, &ctx) - (1.0 - q) * (1.0 - q.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn hermite_eval_matches_laurent() {
        for &q in &[0.3, 0.8] {
            let ctx = ctx(q);
            for n in 0..=30usize {
                let lp = hermite_laurent(n, &ctx);
                for i in 0..20 {
                    let x = -0.95 + 0.1 * i as f64;
                    let via_l = lp.eval_x(c(x, 0.0)).re;
                    let via_r = hermite_eval(n, x, &ctx);
                    assert!(
                        (via_l - via_r).abs() < 1e-12 * via_r.abs().max(1.0),
                        "q={q} n={n} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn ultraspherical_examples() {
        let ctx = ctx(0.5);
        assert_eq!(
            ultraspherical_laurent(0, 3, &ctx).unwrap(),
            SymLaurent::one()
        );
        for m in 1..=4i64 {
            let q = ctx.q();
            let c1 = ultraspherical_laurent(1, m, &ctx).unwrap();
            let expect = (1.0 - q.powi(m as i32)) / (1.0 - q);
            assert!((c1.coeff(1).re - expect).abs() < 1e-15);
            assert_eq!(c1.coeff(1), c1.coeff(-1));
        }
        assert!(ultraspherical_laurent(2, 0, &ctx).is_err());
    }

    #[test]
    fn ultraspherical_parity_support() {
        let ctx = ctx(0.7);
        for n in 0..=9usize {
            let p = ultraspherical_laurent(n, 2, &ctx).unwrap();
            for (k, v) in p.as_laurent().iter() {
                assert_eq!(
                    (k.rem_euclid(2)) as usize,
                    n % 2,
                    "exponent {k} in degree {n}"
                );
                assert!(v.im == 0.0);
            }
        }
    }

    #[test]
    fn ultraspherical_eval_matches_laurent() {
        for &q in &[0.3, 0.8] {
            let ctx = ctx(q);
            for m in 1..=4i64 {
                let beta = q.powi(m as i32);
                for n in 0..=12usize {
                    let lp = ultraspherical_laurent(n, m, &ctx).unwrap();
                    for i in 0..10 {
                        let x = -0.9 + 0.2 * i as f64;
                        let via_l = lp.eval_x(c(x, 0.0)).re;
                        let via_r = ultraspherical_eval(n, beta, x, &ctx);
                        assert!(
                            (via_l - via_r).abs() < 1e-11 * via_r.abs().max(1.0),
                            "q={q} m={m} n={n} x={x}: {via_l} vs {via_r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ultraspherical_beta_zero_is_scaled_hermite() {
        let ctx = ctx(0.6);
        let q = ctx.q();
        let mut qq = 1.0;
        for n in 0..=10usize {
            if n > 0 {
                qq *= 1.0 - q.powi(n as i32);
            }
            for &x in &[-0.7, 0.2, 0.9] {
                let lhs = ultraspherical_eval(n, 0.0, x, &ctx) * qq;
                let rhs = hermite_eval(n, x, &ctx);
                assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn leading_coeff_matches_x_poly() {
        let ctx = ctx(0.45);
        for (n, m) in [(1usize, 1i64), (3, 2), (5, 1), (7, 3)] {
            let lead = ultraspherical_leading_coeff(n, m, &ctx).unwrap();
            let xp = ultraspherical_laurent(n, m, &ctx).unwrap().to_x_poly();
            assert_eq!(xp.len(), n + 1);
            assert!(
                (xp[n].re - lead).abs() < 1e-12 * lead.abs(),
                "n={n} m={m}: {} vs {lead}",
                xp[n].re
            );
        }
        assert!((ultraspherical_leading_coeff(0, 2, &ctx).unwrap() - 1.0).abs() < 1e-15);
        assert!((ultraspherical_leading_coeff(1, 1, &ctx).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn basis_function_normalization() {
        let ctx = ctx(0.5);
        // m = ell: the polynomial part is exactly 1.
        for ell in 1..=4i64 {
            assert_eq!(q_basis_laurent(ell, ell, &ctx).unwrap(), SymLaurent::one());
        }
        // m = 0 floor: half Chebyshev.
        let q03 = q_basis_laurent(3, 0, &ctx).unwrap();
        assert_eq!(q03.coeff(3), c(0.5, 0.0));
        assert_eq!(q03.coeff(1), ZERO);
        assert_eq!(q_basis_laurent(0, 0, &ctx).unwrap(), SymLaurent::one());
        assert!(q_basis_laurent(1, 2, &ctx).is_err());
    }

    #[test]
    fn askey_wilson_hermite_degeneration() {
        let ctx = ctx(0.5);
        for n in 0..=8usize {
            for &x in &[-0.6, 0.0, 0.3, 0.95] {
                let aw = askey_wilson(n, 0.0, 0.0, 0.0, 0.0, x, &ctx).unwrap();
                let h = hermite_eval(n, x, &ctx);
                assert!((aw - h).abs() < 1e-12 * h.abs().max(1.0), "n={n} x={x}");
            }
        }
        // Consistency between the exact-zero path and tiny parameters. The
        // generic path cancels to order a^n against the a^{-n} prefactor,
        // so rounding grows like eps^{-n}·ulp; n stays small and eps splits
        // the difference between that and the O(eps) parameter shift.
        let eps = 1e-5;
        for n in 0..=2usize {
            let aw0 = askey_wilson(n, 0.0, 0.0, 0.0, 0.0, 0.4, &ctx).unwrap();
            let aw1 = askey_wilson(n, eps, eps / 2.0, -eps, eps / 3.0, 0.4, &ctx).unwrap();
            assert!((aw0 - aw1).abs() < 1e-4 * aw0.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn askey_wilson_parameter_symmetry() {
        let ctx = ctx(0.5);
        let (a, b, cc, d) = (0.3, -0.5, 0.7, 0.2);
        for n in 0..=5usize {
            let p1 = askey_wilson(n, a, b, cc, d, 0.35, &ctx).unwrap();
            let p2 = askey_wilson(n, d, cc, b, a, 0.35, &ctx).unwrap();
            assert!((p1 - p2).abs() < 1e-10 * p1.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn askey_wilson_ultraspherical_reduction() {
        // With a=β^(1/2), b=β^(1/2)q^(1/2), c=-β^(1/2), d=-β^(1/2)q^(1/2):
        // C_n(x;β|q) = (β²;q)_n / ((βq^(1/2);q)_n (-β;q)_n (-βq^(1/2);q)_n (q;q)_n) p_n.
        let ctx = ctx(0.5);
        let q = ctx.q();
        let beta = q;
        let (sb, sq) = (beta.sqrt(), q.sqrt());
        for n in 0..=5usize {
            for &x in &[-0.4, 0.15, 0.8] {
                let p = askey_wilson(n, sb, sb * sq, -sb, -sb * sq, x, &ctx).unwrap();
                let mut ratio = qpochhammer_base(c(beta * beta, 0.0), q, n).re;
                for &t in &[beta * sq, -beta, -beta * sq, q] {
                    ratio /= qpochhammer_base(c(t, 0.0), q, n).re;
                }
                let lhs = ratio * p;
                let rhs = ultraspherical_eval(n, beta, x, &ctx);
                assert!(
                    (lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0),
                    "n={n} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn weight_basics() {
        let ctx = ctx(0.5);
        // all-zero parameters: |(e^{2iθ};q)_∞|²
        let theta = std::f64::consts::FRAC_PI_2;
        let w = aw_weight(theta, 0.0, 0.0, 0.0, 0.0, &ctx).unwrap();
        let direct = qpochhammer_inf(c(-1.0, 0.0), &ctx).unwrap().norm();
        assert!((w - direct * direct).abs() < 1e-12 * w);
        assert!(w > 0.0);
        // symmetry θ ↔ π−θ for a negation-closed parameter set
        let (a, b) = (0.6, 0.3);
        for &t in &[0.4, 1.0, 1.4] {
            let w1 = aw_weight(t, a, b, -a, -b, &ctx).unwrap();
            let w2 = aw_weight(std::f64::consts::PI - t, a, b, -a, -b, &ctx).unwrap();
            assert!((w1 - w2).abs() < 1e-10 * w1.abs());
        }
        assert!(matches!(
            aw_weight(0.5, 1.2, 0.0, 0.0, 0.0, &ctx),
            Err(QError::WeightDomain { .. })
        ));
    }

    #[test]
    fn hermite_special_values() {
        for &q in &[0.3, 0.5, 0.8] {
            let ctx = ctx(q);
            for n in 0..=20usize {
                let cmp =
                    special_value_zero_comparison(&PolySpec::Hermite { n }, &ctx).unwrap();
                assert!(cmp.deviation < 1e-12, "q={q} n={n}: {}", cmp.deviation);
            }
        }
    }

    #[test]
    fn ultraspherical_zero_value_closed_forms() {
        // The β-dependent corrected form matches the defining sum; the
        // β-free tabulated form does not (for m >= 1 it misses by O(1)).
        for &q in &[0.3, 0.5, 0.8] {
            let ctx = ctx(q);
            for m in 1..=4i64 {
                let beta = q.powi(m as i32);
                for k in 1..=5usize {
                    let spec = PolySpec::Ultraspherical { n: 2 * k, beta };
                    let cmp = special_value_zero_comparison(&spec, &ctx).unwrap();
                    assert!(
                        cmp.corrected_deviation.unwrap() < 1e-12 * cmp.direct.abs().max(1.0),
                        "q={q} m={m} k={k}: corrected deviates {}",
                        cmp.corrected_deviation.unwrap()
                    );
                }
                // odd degrees vanish identically
                let odd = PolySpec::Ultraspherical { n: 7, beta };
                assert_eq!(special_value_at_zero(&odd, &ctx).unwrap(), 0.0);
            }
        }
        // The tabulated form's deviation at n=2, m=1 is exactly q.
        let ctx5 = ctx(0.5);
        let cmp = special_value_zero_comparison(
            &PolySpec::Ultraspherical { n: 2, beta: 0.5 },
            &ctx5,
        )
        .unwrap();
        assert!((cmp.direct + 1.0).abs() < 1e-14);
        assert!((cmp.deviation - 0.5).abs() < 1e-12);
    }
}
