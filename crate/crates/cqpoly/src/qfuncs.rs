//! The special functions built from the ψ building blocks: the symmetric
//! products ψ_n, the q-exponential ℰ_q assembled from them, and the second
//! Jackson q-Bessel function.
//!
//! ψ_n(a, x) is a product of n quadratic factors whose magnitudes range
//! from roughly q^(-(n-1)) down to q^(n-1); multiplying them in a fixed
//! order can overflow (or underflow) long before the final value does, so
//! the pointwise evaluators interleave large and small factors to keep
//! every partial product bounded near the largest single factor.

use num_complex::Complex64;

use crate::dd::{Dd, Ddc};
use crate::error::{QError, Result};
use crate::laurent::SymLaurent;
use crate::qcore::{qpochhammer_base, QContext};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The factor (1 - c z)(1 - c/z) collapsed at z + 1/z = 2x.
#[inline]
fn quad_factor(c: Complex64, x: f64) -> Complex64 {
    ONE + c * c - c * (2.0 * x)
}

/// Multiply a list of factors in a magnitude-balancing order: take from the
/// large end while the accumulator is small, from the small end otherwise.
/// Partial products then never exceed (max factor) x (modest constant).
fn balanced_product(factors: &[Complex64]) -> Complex64 {
    let mut lo = 0usize;
    let mut hi = factors.len();
    let mut acc = ONE;
    while lo < hi {
        if acc.norm_sqr() <= 1.0 {
            acc *= factors[lo];
            lo += 1;
        } else {
            hi -= 1;
            acc *= factors[hi];
        }
    }
    acc
}

/// ψ_n(a, x): the product over j < n of (1 - c_j e^{iθ})(1 - c_j e^{-iθ})
/// with c_j = a q^((1-n)/2 + j) and x = cos θ.
///
/// ψ_0 = 1 identically. The value grows like q^(-n²/4), so pointwise
/// evaluation is meaningful for moderate n (n ≲ 45 for q ≤ 0.8); the ℰ_q
/// summation below never forms the bare ψ_n, it folds the convergence
/// factor q^(n²/4) into each quadratic factor first.
pub fn psi_n(a: Complex64, x: f64, n: usize, ctx: &QContext) -> Complex64 {
    if n == 0 {
        return ONE;
    }
    let q = ctx.q();
    // c_j = a q^((1-n)/2 + j), descending magnitude as j grows.
    let c0 = a * ctx.q_half_pow(1 - n as i64);
    let factors: Vec<Complex64> = (0..n)
        .map(|j| quad_factor(c0 * q.powi(j as i32), x))
        .collect();
    balanced_product(&factors)
}

/// ψ_n(a, ·) as an exact symmetric Laurent polynomial of degree n.
pub fn psi_n_laurent(a: Complex64, n: usize, ctx: &QContext) -> SymLaurent {
    scaled_psi_laurent(a, n, ONE, ctx)
}

/// (s^n) ψ_n(a, ·) with the scalar s distributed across the n factors, so
/// that a strongly decaying s (such as q^(n/4) b / (q;q)-type factors)
/// tames the q^(-n²/4) coefficient growth of the bare ψ_n.
fn scaled_psi_laurent(a: Complex64, n: usize, s: Complex64, ctx: &QContext) -> SymLaurent {
    let q = ctx.q();
    let mut acc = SymLaurent::one();
    if n == 0 {
        return acc;
    }
    let c0 = a * ctx.q_half_pow(1 - n as i64);
    for j in 0..n {
        let c = c0 * q.powi(j as i32);
        // (1 - c z)(1 - c/z) = (1 + c²) - c z - c z⁻¹, then scaled by s.
        let tri = SymLaurent::from_half([(0, (ONE + c * c) * s), (1, -c * s)]);
        acc = acc.mul(&tri);
    }
    acc
}

/// Truncation control for the ℰ_q series.
#[derive(Debug, Clone, Copy)]
pub struct EqSeriesControl {
    pub max_n: usize,
    pub tail_tol: f64,
}

impl Default for EqSeriesControl {
    fn default() -> Self {
        EqSeriesControl {
            max_n: 60,
            tail_tol: 1e-14,
        }
    }
}

impl EqSeriesControl {
    pub fn new(max_n: usize, tail_tol: f64) -> Result<Self> {
        if max_n == 0 {
            return Err(QError::InvalidParameter("max_n must be >= 1".into()));
        }
        if !(tail_tol > 0.0) {
            return Err(QError::InvalidParameter(
                "tail_tol must be positive".into(),
            ));
        }
        Ok(EqSeriesControl { max_n, tail_tol })
    }
}

/// Result of an ℰ_q evaluation: the truncated value plus convergence
/// metadata. A failed tail test is a flag, not an error; callers decide.
#[derive(Debug, Clone, Copy)]
pub struct EpsQResult {
    pub value: Complex64,
    pub converged: bool,
    pub terms_used: usize,
    /// |last term| / |partial sum| at truncation.
    pub tail_ratio: f64,
}

/// The n-th term of the ℰ_q series, q^(n²/4)/(q;q)_n ψ_n(a,x) b^n,
/// evaluated as a balanced product of n bounded factors
/// q^(n/4) b (1 + c_j² - 2 c_j x)/(1 - q^(j+1)), in double-double
/// arithmetic. The factors are ordered by descending magnitude, so the
/// balanced product keeps every partial product near the largest factor.
fn eps_q_term_dd(two_x: f64, a: Complex64, b: Complex64, n: usize, q: Dd, qh: Dd) -> Ddc {
    if n == 0 {
        return Ddc::ONE;
    }
    let quarter = qh.sqrt();
    let scale = Ddc::from(b).mul_dd(quarter.powi(n as i64));
    let mut c = Ddc::from(a).mul_dd(qh.powi(1 - n as i64));
    let mut qp = q; // q^{j+1}
    let mut factors = Vec::with_capacity(n);
    let two_x = Dd::from(two_x);
    for _ in 0..n {
        let quad = Ddc::ONE.add(c.mul(c)).sub(c.mul_dd(two_x));
        factors.push(quad.mul(scale).div_dd(Dd::ONE.sub(qp)));
        c = c.mul_dd(q);
        qp = qp.mul(q);
    }
    let mut lo = 0usize;
    let mut hi = factors.len();
    let mut acc = Ddc::ONE;
    while lo < hi {
        if acc.mag_hi() <= 1.0 {
            acc = acc.mul(factors[lo]);
            lo += 1;
        } else {
            hi -= 1;
            acc = acc.mul(factors[hi]);
        }
    }
    acc
}

/// ℰ_q(x; a, b) = Σ_n q^(n²/4)/(q;q)_n ψ_n(a, x) b^n, truncated at
/// control.max_n. Convergence of the series is geometric with ratio |b|
/// (the q^(n²/4) factor exactly cancels the growth of ψ_n, it does not
/// accelerate the tail), so |b| >= 1 never converges and |b| near 1 needs
/// many terms; see [`eps_q_order_for`] for an order estimate.
///
/// Terms and sum are evaluated in compensated (double-double) arithmetic:
/// near q = 1 the terms tower many orders of magnitude above the value
/// (at q = 0.95, |b| = 0.75 the peak term reaches ~10¹¹ against a sum of
/// order one), and plain f64 would surrender most of its digits to that
/// cancellation.
pub fn eps_q(
    x: f64,
    a: Complex64,
    b: Complex64,
    control: EqSeriesControl,
    ctx: &QContext,
) -> EpsQResult {
    let q = Dd::from(ctx.q());
    let qh = q.sqrt();
    let mut sum = Ddc::ZERO;
    let mut last = ONE;
    for n in 0..=control.max_n {
        let term = eps_q_term_dd(2.0 * x, a, b, n, q, qh);
        sum = sum.add(term);
        last = term.value();
    }
    let value = sum.value();
    let tail_ratio = last.norm() / value.norm().max(f64::MIN_POSITIVE);
    EpsQResult {
        value,
        converged: tail_ratio < control.tail_tol,
        terms_used: control.max_n + 1,
        tail_ratio,
    }
}

/// Smallest truncation order N with (bound on the tail) < tol, using the
/// geometric model |term_n| <= |b|^n · C(q) with C(q) = 1/(q;q)_∞²-scale
/// headroom. Returns None when |b| >= 1 (the series does not converge).
pub fn eps_q_order_for(b: Complex64, tol: f64, ctx: &QContext) -> Option<usize> {
    let r = b.norm();
    if r >= 1.0 {
        return None;
    }
    if r == 0.0 {
        return Some(1);
    }
    let qq_inf = qpochhammer_base(Complex64::new(ctx.q(), 0.0), ctx.q(), 400).norm();
    let headroom = (1.0 / (qq_inf * qq_inf)).max(1.0);
    // r^(N+1)/(1-r) * headroom < tol
    let n = ((tol * (1.0 - r) / headroom).ln() / r.ln()).ceil();
    Some((n.max(1.0) as usize).min(5_000))
}

/// ℰ_q(x; a, b) as a truncated symmetric Laurent polynomial: the partial
/// sum of the scaled ψ_n terms through order max_n. The z-degree equals
/// max_n; coefficients of each term are bounded, so the construction is
/// overflow-safe for the orders the projection oracles use.
pub fn eps_q_laurent(a: Complex64, b: Complex64, max_n: usize, ctx: &QContext) -> SymLaurent {
    let q = ctx.q();
    let quarter = ctx.q_half_pow(1).sqrt();
    let mut acc = SymLaurent::zero();
    for n in 0..=max_n {
        let term = if n == 0 {
            SymLaurent::one()
        } else {
            let scale = b * quarter.powi(n as i32);
            // distribute (q;q)_n across the factors as well
            let mut t = SymLaurent::one();
            let c0 = a * ctx.q_half_pow(1 - n as i64);
            for j in 0..n {
                let c = c0 * q.powi(j as i32);
                let s = scale / (1.0 - q.powi(j as i32 + 1));
                let tri = SymLaurent::from_half([(0, (ONE + c * c) * s), (1, -c * s)]);
                t = t.mul(&tri);
            }
            t
        };
        acc = acc.add(&term);
    }
    acc
}

// The q-Bessel series alternates with terms that peak orders of magnitude
// above the sum near q = 0.9; double-double accumulation keeps all of f64.
fn qbessel2_real(nu: usize, half: f64, ctx: &QContext) -> f64 {
    let q = Dd::from(ctx.q());
    let one = Dd::from(1.0);
    let h = Dd::from(half);
    // term_0 = (z/2)^ν / (q;q)_ν, with q^ν kept as a side product
    let mut term = one;
    let mut qnu = one;
    let mut poch = one;
    for _ in 0..nu {
        term = term.mul(h);
        qnu = qnu.mul(q);
        poch = poch.mul(one.add(qnu.neg()));
    }
    term = term.div(poch);
    let mut sum = term;
    let hh = h.mul(h);
    let q2 = q.mul(q);
    let mut qn1 = q; // q^{n+1}
    let mut qn1nu = qnu.mul(q); // q^{n+1+ν}
    let mut qfac = qnu.mul(q); // q^{2n+1+ν}
    for _ in 0..ctx.series_cutoff() {
        let den = one.add(qn1.neg()).mul(one.add(qn1nu.neg()));
        term = term.mul(qfac).mul(hh).neg().div(den);
        sum = sum.add(term);
        if term.value().abs() < 1e-25 * sum.value().abs().max(f64::MIN_POSITIVE) {
            break;
        }
        qn1 = qn1.mul(q);
        qn1nu = qn1nu.mul(q);
        qfac = qfac.mul(q2);
    }
    sum.value()
}

/// Second Jackson q-Bessel function of integer order ν ≥ 0:
/// Σ_n q^(n(n+ν)) (-1)^n / ((q;q)_n (q;q)_{n+ν}) (z/2)^(2n+ν).
/// The q^(n²) decay truncates the series almost immediately. Real arguments
/// are summed in compensated (double-double) arithmetic independent of the
/// context tolerances, so the result is accurate to f64 even where the
/// alternating terms peak far above the sum.
pub fn qbessel2(nu: usize, zarg: Complex64, ctx: &QContext) -> Complex64 {
    let q = ctx.q();
    let half = zarg * 0.5;
    if half.norm() == 0.0 {
        return if nu == 0 {
            ONE
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if zarg.im == 0.0 {
        return Complex64::new(qbessel2_real(nu, half.re, ctx), 0.0);
    }
    // term_0 = (z/2)^ν / (q;q)_ν
    let mut term = half.powi(nu as i32) / qpochhammer_base(Complex64::new(q, 0.0), q, nu);
    let mut sum = term;
    let hh = half * half;
    for n in 0..ctx.series_cutoff() {
        let ni = n as i32;
        term *= -q.powi(2 * ni + 1 + nu as i32) * hh
            / ((1.0 - q.powi(ni + 1)) * (1.0 - q.powi(ni + 1 + nu as i32)));
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}
