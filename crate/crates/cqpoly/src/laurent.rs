//! Laurent-polynomial arithmetic in z, the symmetric subtype that carries
//! functions of x = (z + 1/z)/2, t-graded basis functions, and the
//! basis-expansion oracle.
//!
//! * [`Laurent`]: finitely supported complex coefficients on integer
//!   exponents, no symmetry requirement. Intermediate results of operator
//!   application live here.
//! * [`SymLaurent`]: invariant under z -> 1/z, the exact carrier for
//!   polynomials in x. Symmetry is exact (bitwise) after construction;
//!   constructors from general data average the two halves and reject
//!   inputs whose asymmetry exceeds `tol_exact` relative to the largest
//!   coefficient.
//! * [`BasisFunction`]: a SymLaurent together with a nonnegative t-degree.
//! * [`expand_in_q_basis`]: expands a basis function over the graded
//!   family with the same t-degree, by top-down elimination on
//!   z-exponents. This is the oracle other modules compare their
//!   closed-form ladder coefficients against.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::qcore::QContext;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

// ======================================================================
// Laurent: general (asymmetric) Laurent polynomials
// ======================================================================

/// Finitely supported Laurent polynomial in z over the complex numbers.
///
/// Canonical form: coefficients with magnitude exactly 0 are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Laurent {
    coeffs: BTreeMap<i64, Complex64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(0, Complex64::new(1.0, 0.0))
    }

    /// Single term c z^k.
    pub fn monomial(k: i64, c: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != ZERO {
            coeffs.insert(k, c);
        }
        Laurent { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut out = Laurent::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn add_term(&mut self, k: i64, c: Complex64) {
        if c == ZERO {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_term(k, -c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Laurent {
        if s == ZERO {
            return Laurent::zero();
        }
        Laurent {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ka, ca) in self.iter() {
            for (kb, cb) in other.iter() {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }

    /// Multiply by z^d (exponent shift).
    pub fn mul_z_pow(&self, d: i64) -> Laurent {
        Laurent {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k + d, c)).collect(),
        }
    }

    /// Substitute z -> 1/z (mirror the exponents).
    pub fn reflect(&self) -> Laurent {
        Laurent {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c)).collect(),
        }
    }

    pub fn eval_z(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| c * z.powi(k as i32))
            .sum()
    }
}

/// Half-integer q-shift: the coefficient of z^k picks up q^(k·half_steps/2).
/// Exponents never change, so integer exponent storage is closed under it.
pub fn shift_z(f: &Laurent, half_steps: i64, ctx: &QContext) -> Laurent {
    Laurent {
        coeffs: f
            .coeffs
            .iter()
            .map(|(&k, &c)| (k, c * ctx.q_half_pow(k * half_steps)))
            .filter(|&(_, c)| c != ZERO)
            .collect(),
    }
}

/// Exact quotient f / (z - 1/z), top-down elimination.
///
/// Every numerator produced by the divided-difference operators vanishes at
/// z = +1 and z = -1, so the remainder must be noise; a remainder above
/// `tol_exact` relative to the largest input coefficient is reported as an
/// error, which is the load-bearing signal that an upstream formula is
/// wrong rather than merely inaccurate.
pub fn divide_by_z_minus_zinv(f: &Laurent, ctx: &QContext) -> Result<Laurent> {
    if f.is_zero() {
        return Ok(Laurent::zero());
    }
    // f / (z - 1/z) = (f z) / (z^2 - 1); divide densely by z^2 - 1.
    let shifted = f.mul_z_pow(1);
    let lo = shifted.min_exp().expect("nonzero");
    let hi = shifted.max_exp().expect("nonzero");
    let width = (hi - lo) as usize;
    let mut dense = vec![ZERO; width + 1];
    for (k, c) in shifted.iter() {
        dense[(k - lo) as usize] = c;
    }
    let quot_len = width.saturating_sub(1);
    let mut quot = vec![ZERO; quot_len];
    for i in (2..=width).rev() {
        let c = dense[i];
        quot[i - 2] = c;
        dense[i - 2] += c;
        dense[i] = ZERO;
    }
    let mut remainder = dense[0].norm();
    if width >= 1 {
        remainder = remainder.max(dense[1].norm());
    }
    if remainder > ctx.tol_exact() * f.max_coeff_norm().max(f64::MIN_POSITIVE) {
        return Err(QError::NonDivisible { remainder });
    }
    Ok(Laurent::from_terms(
        quot.iter().enumerate().map(|(j, &c)| (lo + j as i64, c)),
    ))
}

// ======================================================================
// SymLaurent: the z -> 1/z invariant subtype
// ======================================================================

/// Laurent polynomial invariant under z -> 1/z; equivalently a polynomial
/// in x = (z + 1/z)/2. The stored halves are bitwise equal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymLaurent {
    inner: Laurent,
}

impl SymLaurent {
    pub fn zero() -> Self {
        SymLaurent::default()
    }

    pub fn one() -> Self {
        SymLaurent {
            inner: Laurent::one(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        SymLaurent {
            inner: Laurent::monomial(0, c),
        }
    }

    /// Construct from a general Laurent polynomial. The asymmetry
    /// max|c_k - c_{-k}| must stay below `tol_exact` relative to the
    /// largest coefficient; the retained value is the average of the two
    /// halves so the invariant holds exactly afterwards.
    pub fn from_laurent(f: &Laurent, ctx: &QContext) -> Result<Self> {
        let maxc = f.max_coeff_norm();
        if maxc == 0.0 {
            return Ok(SymLaurent::zero());
        }
        let mut asymmetry: f64 = 0.0;
        for (k, c) in f.iter() {
            asymmetry = asymmetry.max((c - f.coeff(-k)).norm());
        }
        if asymmetry > ctx.tol_exact() * maxc {
            return Err(QError::AsymmetricInput {
                asymmetry: asymmetry / maxc,
            });
        }
        let mut inner = Laurent::zero();
        let hi = f.max_exp().expect("nonzero").max(-f.min_exp().expect("nonzero"));
        for k in 0..=hi {
            let avg = (f.coeff(k) + f.coeff(-k)) * 0.5;
            if avg != ZERO {
                inner.coeffs.insert(k, avg);
                if k > 0 {
                    inner.coeffs.insert(-k, avg);
                }
            }
        }
        Ok(SymLaurent { inner })
    }

    /// Construct from the nonnegative-exponent half; each coefficient at
    /// k > 0 is mirrored onto -k.
    pub fn from_half<I: IntoIterator<Item = (i64, Complex64)>>(half: I) -> Self {
        let mut inner = Laurent::zero();
        for (k, c) in half {
            assert!(k >= 0, "from_half takes exponents k >= 0");
            if c == ZERO {
                continue;
            }
            inner.coeffs.insert(k, c);
            if k > 0 {
                inner.coeffs.insert(-k, c);
            }
        }
        SymLaurent { inner }
    }

    pub fn as_laurent(&self) -> &Laurent {
        &self.inner
    }

    pub fn into_laurent(self) -> Laurent {
        self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.inner.coeff(k)
    }

    /// Largest exponent present (None for the zero polynomial).
    pub fn degree(&self) -> Option<i64> {
        self.inner.max_exp()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.inner.max_coeff_norm()
    }

    pub fn add(&self, other: &SymLaurent) -> SymLaurent {
        SymLaurent {
            inner: self.inner.add(&other.inner),
        }
    }

    pub fn sub(&self, other: &SymLaurent) -> SymLaurent {
        SymLaurent {
            inner: self.inner.sub(&other.inner),
        }
    }

    pub fn scale(&self, s: Complex64) -> SymLaurent {
        SymLaurent {
            inner: self.inner.scale(s),
        }
    }

    /// Product of symmetric polynomials is symmetric; the two halves of the
    /// raw product can disagree by rounding order, so they are re-averaged.
    pub fn mul(&self, other: &SymLaurent) -> SymLaurent {
        let raw = self.inner.mul(&other.inner);
        SymLaurent::average_halves(&raw)
    }

    fn average_halves(raw: &Laurent) -> SymLaurent {
        let mut inner = Laurent::zero();
        if let (Some(lo), Some(hi)) = (raw.min_exp(), raw.max_exp()) {
            for k in 0..=hi.max(-lo) {
                let avg = (raw.coeff(k) + raw.coeff(-k)) * 0.5;
                if avg != ZERO {
                    inner.coeffs.insert(k, avg);
                    if k > 0 {
                        inner.coeffs.insert(-k, avg);
                    }
                }
            }
        }
        SymLaurent { inner }
    }

    /// Evaluate as a function of x, using z^k + z^(-k) = 2 T_k(x) with the
    /// three-term Chebyshev recurrence (valid for any complex x).
    pub fn eval_x(&self, x: Complex64) -> Complex64 {
        let d = match self.degree() {
            None => return ZERO,
            Some(d) => d,
        };
        let mut acc = self.coeff(0);
        let mut t_prev = Complex64::new(1.0, 0.0); // T_0
        let mut t_cur = x; // T_1
        for k in 1..=d {
            acc += self.coeff(k) * 2.0 * t_cur;
            let t_next = 2.0 * x * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
        }
        acc
    }

    /// Coefficients p_0..p_d of the same function written in powers of x.
    pub fn to_x_poly(&self) -> Vec<Complex64> {
        let d = match self.degree() {
            None => return vec![],
            Some(d) => d as usize,
        };
        let mut out = vec![ZERO; d + 1];
        out[0] = self.coeff(0);
        // Chebyshev monomial rows, built by the recurrence.
        let mut t_prev: Vec<f64> = vec![1.0]; // T_0
        let mut t_cur: Vec<f64> = vec![0.0, 1.0]; // T_1
        for k in 1..=d {
            let c = self.coeff(k as i64);
            if c != ZERO {
                for (j, &tj) in t_cur.iter().enumerate() {
                    if tj != 0.0 {
                        out[j] += c * (2.0 * tj);
                    }
                }
            }
            if k < d {
                let mut t_next = vec![0.0; k + 2];
                for (j, &tj) in t_cur.iter().enumerate() {
                    t_next[j + 1] += 2.0 * tj;
                }
                for (j, &tj) in t_prev.iter().enumerate() {
                    t_next[j] -= tj;
                }
                t_prev = std::mem::replace(&mut t_cur, t_next);
            }
        }
        while out.len() > 1 && *out.last().unwrap() == ZERO {
            out.pop();
        }
        out
    }

    /// Inverse of [`to_x_poly`]: x^n = 2^(-n) Σ_j binom(n,j) z^(n-2j).
    /// The binomial rows are exactly symmetric, so the result satisfies the
    /// symmetry invariant bitwise.
    pub fn from_x_poly(p: &[Complex64]) -> SymLaurent {
        let mut inner = Laurent::zero();
        let mut row: Vec<f64> = vec![1.0];
        for (n, &pn) in p.iter().enumerate() {
            if pn != ZERO {
                let scale = 0.5f64.powi(n as i32);
                for (j, &b) in row.iter().enumerate() {
                    inner.add_term(n as i64 - 2 * j as i64, pn * (b * scale));
                }
            }
            let mut next = vec![0.0; n + 2];
            next[0] = 1.0;
            next[n + 1] = 1.0;
            for j in 1..=n {
                next[j] = row[j - 1] + row[j];
            }
            row = next;
        }
        SymLaurent::average_halves(&inner)
    }
}

// ======================================================================
// BasisFunction: SymLaurent x t^m
// ======================================================================

/// A symmetric Laurent polynomial carrying a t-monomial of degree m >= 0.
/// On such a function the t-shift operator acts as the scalar q^m.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    poly: SymLaurent,
    tdeg: i64,
}

impl BasisFunction {
    pub fn new(poly: SymLaurent, tdeg: i64) -> Result<Self> {
        if tdeg < 0 {
            return Err(QError::NegativeTDegree);
        }
        Ok(BasisFunction { poly, tdeg })
    }

    pub fn poly(&self) -> &SymLaurent {
        &self.poly
    }

    pub fn tdeg(&self) -> i64 {
        self.tdeg
    }
}

// ======================================================================
// Basis expansion oracle
// ======================================================================

/// Expand a symmetric polynomial over a graded basis whose n-th member has
/// top exponent exactly n, by eliminating the highest remaining exponent.
/// Returns the coefficient vector indexed by basis degree.
///
/// Elimination happens on z-coefficients, where every basis member is
/// uniformly bounded, rather than on x-power coefficients (whose basis
/// change is exponentially ill-conditioned in the degree).
pub(crate) fn expand_in_graded_basis(
    g: &SymLaurent,
    basis: &[SymLaurent],
    ctx: &QContext,
) -> Result<Vec<Complex64>> {
    let d = match g.degree() {
        None => return Ok(vec![]),
        Some(d) => d as usize,
    };
    assert!(
        basis.len() > d,
        "graded basis must reach the degree of the target"
    );
    let scale_in = g.max_coeff_norm();
    let mut rest = g.clone();
    let mut coeffs = vec![ZERO; d + 1];
    for n in (0..=d).rev() {
        let top = rest.coeff(n as i64);
        if top == ZERO {
            continue;
        }
        let lead = basis[n].coeff(n as i64);
        if lead.norm() < 1e-250 {
            return Err(QError::SingularLeading { degree: n });
        }
        let c = top / lead;
        coeffs[n] = c;
        rest = rest.sub(&basis[n].scale(c));
    }
    let residual = rest.max_coeff_norm();
    if residual > ctx.tol_exact() * scale_in.max(f64::MIN_POSITIVE) {
        return Err(QError::ExpansionResidual { residual });
    }
    Ok(coeffs)
}

/// Expand a basis function of t-degree m over the two-variable family with
/// the same t-degree. Keys of the result are (upper index, m); the upper
/// index runs from m to m + deg(g.poly).
pub fn expand_in_q_basis(
    g: &BasisFunction,
    ctx: &QContext,
) -> Result<BTreeMap<(i64, i64), Complex64>> {
    let m = g.tdeg();
    let d = match g.poly().degree() {
        None => return Ok(BTreeMap::new()),
        Some(d) => d,
    };
    let basis: Vec<SymLaurent> = (0..=d)
        .map(|n| crate::qpoly::q_basis_laurent(m + n, m, ctx))
        .collect::<Result<_>>()?;
    let coeffs = expand_in_graded_basis(g.poly(), &basis, ctx)?;
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(n, c)| ((m + n as i64, m), c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx() -> QContext {
        QContext::new(0.5).unwrap()
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let f = Laurent::from_terms([(2, c(1.0, 0.0)), (2, c(-1.0, 0.0)), (0, c(3.0, 0.0))]);
        assert_eq!(f.coeff(2), ZERO);
        assert_eq!(f.max_exp(), Some(0));
    }

    #[test]
    fn shift_z_examples() {
        let ctx = ctx();
        let q = ctx.q();
        // z + 1/z, one positive half-step.
        let f = Laurent::from_terms([(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let g = shift_z(&f, 1, &ctx);
        assert!((g.coeff(1) - c(q.sqrt(), 0.0)).norm() < 1e-15);
        assert!((g.coeff(-1) - c(1.0 / q.sqrt(), 0.0)).norm() < 1e-15);
        // Constants are fixed.
        let one = Laurent::one();
        assert_eq!(shift_z(&one, 7, &ctx), one);
        // Round trip.
        let back = shift_z(&g, -1, &ctx);
        for (k, v) in f.iter() {
            assert!((back.coeff(k) - v).norm() < 1e-14);
        }
    }

    #[test]
    fn divide_examples() {
        let ctx = ctx();
        let f = Laurent::from_terms([(1, c(1.0, 0.0)), (-1, c(-1.0, 0.0))]);
        assert_eq!(divide_by_z_minus_zinv(&f, &ctx).unwrap(), Laurent::one());

        let f2 = Laurent::from_terms([(2, c(1.0, 0.0)), (-2, c(-1.0, 0.0))]);
        let expect2 = Laurent::from_terms([(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        assert_eq!(divide_by_z_minus_zinv(&f2, &ctx).unwrap(), expect2);

        let f3 = Laurent::from_terms([(3, c(1.0, 0.0)), (-3, c(-1.0, 0.0))]);
        let q3 = divide_by_z_minus_zinv(&f3, &ctx).unwrap();
        let expect3 = Laurent::from_terms([
            (2, c(1.0, 0.0)),
            (0, c(1.0, 0.0)),
            (-2, c(1.0, 0.0)),
        ]);
        assert_eq!(q3, expect3);
        // Re-multiplying recovers the numerator.
        let zmz = Laurent::from_terms([(1, c(1.0, 0.0)), (-1, c(-1.0, 0.0))]);
        assert_eq!(q3.mul(&zmz), f3);
    }

    #[test]
    fn divide_rejects_non_divisible() {
        let ctx = ctx();
        let f = Laurent::from_terms([(1, c(1.0, 0.0))]); // plain z
        assert!(matches!(
            divide_by_z_minus_zinv(&f, &ctx),
            Err(QError::NonDivisible { .. })
        ));
    }

    #[test]
    fn symmetry_enforced_on_construction() {
        let ctx = ctx();
        let bad = Laurent::from_terms([(1, c(1.0, 0.0)), (-1, c(1.1, 0.0))]);
        assert!(matches!(
            SymLaurent::from_laurent(&bad, &ctx),
            Err(QError::AsymmetricInput { .. })
        ));
        let good = Laurent::from_terms([(1, c(2.0, 1.0)), (-1, c(2.0, 1.0)), (0, c(5.0, 0.0))]);
        let s = SymLaurent::from_laurent(&good, &ctx).unwrap();
        assert_eq!(s.coeff(1), s.coeff(-1));
        assert_eq!(s.coeff(0), c(5.0, 0.0));
    }

    #[test]
    fn x_poly_examples() {
        let one = SymLaurent::one();
        assert_eq!(one.to_x_poly(), vec![c(1.0, 0.0)]);

        let two_x = SymLaurent::from_half([(1, c(1.0, 0.0))]);
        assert_eq!(two_x.to_x_poly(), vec![ZERO, c(2.0, 0.0)]);

        let cheb2 = SymLaurent::from_half([(2, c(1.0, 0.0))]);
        assert_eq!(
            cheb2.to_x_poly(),
            vec![c(-2.0, 0.0), ZERO, c(4.0, 0.0)]
        );

        assert_eq!(SymLaurent::from_x_poly(&[c(1.0, 0.0)]), SymLaurent::one());
        assert_eq!(
            SymLaurent::from_x_poly(&[ZERO, c(2.0, 0.0)]),
            SymLaurent::from_half([(1, c(1.0, 0.0))])
        );
    }

    #[test]
    fn eval_x_matches_eval_z() {
        let f = SymLaurent::from_half([
            (0, c(0.7, -0.2)),
            (1, c(1.5, 0.0)),
            (3, c(-0.25, 0.1)),
            (4, c(0.0, 2.0)),
        ]);
        for &theta in &[0.3, 1.1, 2.9] {
            let z = Complex64::from_polar(1.0, theta);
            let x = c(theta.cos(), 0.0);
            let via_z = f.as_laurent().eval_z(z);
            let via_x = f.eval_x(x);
            assert!((via_z - via_x).norm() < 1e-13);
        }
    }

    #[test]
    fn expansion_recovers_basis_element() {
        let ctx = QContext::new(0.6).unwrap();
        for (ell, m) in [(2i64, 2i64), (4, 2), (5, 1), (3, 0)] {
            let q = crate::qpoly::q_basis_laurent(ell, m, &ctx).unwrap();
            let g = BasisFunction::new(q, m).unwrap();
            let coeffs = expand_in_q_basis(&g, &ctx).unwrap();
            for ((l, mm), v) in coeffs {
                assert_eq!(mm, m);
                let expect = if l == ell { 1.0 } else { 0.0 };
                assert!(
                    (v - c(expect, 0.0)).norm() < ctx.tol_exact() * 10.0,
                    "({l},{mm}) -> {v}"
                );
            }
        }
    }

    #[test]
    fn expansion_of_pure_t_power() {
        let ctx = ctx();
        let g = BasisFunction::new(SymLaurent::one(), 2).unwrap();
        let coeffs = expand_in_q_basis(&g, &ctx).unwrap();
        assert_eq!(coeffs.len(), 1);
        let v = coeffs[&(2, 2)];
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
    }
}
