//! Numerical orthogonality: the Gram matrix of a polynomial family under
//! its displayed weight, computed with Gauss-Legendre quadrature in θ,
//! must be diagonal to quadrature accuracy. The integrand is analytic in
//! θ, so the rule converges geometrically and 200 nodes leave a wide
//! margin at the orders checked here.

use std::f64::consts::PI;

use crate::error::Result;
use crate::qcore::QContext;
use crate::qpoly::{aw_weight, hermite_seq, ultraspherical_seq};
use crate::verify::report::VerificationReport;

/// Legendre P_n and its derivative at x, by the three-term recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on (-1, 1). Newton iteration from the
/// Chebyshev guess; each root is mirrored so the rule is symmetric.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pd(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pd(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Families with a displayed orthogonality weight on x = cos θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthoFamily {
    Hermite,
    /// Parameter β = q^m.
    Ultraspherical { m: i64 },
}

impl OrthoFamily {
    fn identity_id(self) -> &'static str {
        match self {
            OrthoFamily::Hermite => "orthogonality-hermite",
            OrthoFamily::Ultraspherical { .. } => "orthogonality-ultraspherical",
        }
    }

    /// The four weight parameters specializing the general weight.
    fn weight_params(self, ctx: &QContext) -> [f64; 4] {
        match self {
            OrthoFamily::Hermite => [0.0; 4],
            OrthoFamily::Ultraspherical { m } => {
                let sb = ctx.q_half_pow(m); // β^{1/2} = q^{m/2}
                let sq = ctx.q_half_pow(1);
                [sb, sb * sq, -sb, -sb * sq]
            }
        }
    }
}

/// Gram matrix G_ij = ∫_0^π p_i(cos θ) p_j(cos θ) w(θ) dθ for degrees
/// up to nmax, by Gauss-Legendre quadrature with quad_points nodes.
pub fn gram_matrix(
    family: OrthoFamily,
    nmax: usize,
    quad_points: usize,
    ctx: &QContext,
) -> Result<Vec<Vec<f64>>> {
    let (nodes, weights) = gauss_legendre(quad_points);
    let [a, b, c, d] = family.weight_params(ctx);
    let mut g = vec![vec![0.0f64; nmax + 1]; nmax + 1];
    for (t, wq) in nodes.iter().zip(&weights) {
        let theta = PI * (t + 1.0) / 2.0;
        let x = theta.cos();
        let w = aw_weight(theta, a, b, c, d, ctx)? * wq * PI / 2.0;
        let vals = match family {
            OrthoFamily::Hermite => hermite_seq(nmax, x, ctx),
            OrthoFamily::Ultraspherical { m } => {
                ultraspherical_seq(nmax, ctx.q().powi(m as i32), x, ctx)
            }
        };
        for i in 0..=nmax {
            for j in i..=nmax {
                g[i][j] += w * vals[i] * vals[j];
            }
        }
    }
    for i in 0..=nmax {
        for j in 0..i {
            g[i][j] = g[j][i];
        }
    }
    Ok(g)
}

/// Off-diagonal Gram entries normalized by the diagonal,
/// |G_ij|/√(G_ii G_jj) for i < j. Non-positive diagonal entries are
/// reported as failures with residual 1.
pub fn orthogonality_report(
    family: OrthoFamily,
    nmax: usize,
    quad_points: usize,
    tol: f64,
    ctx: &QContext,
) -> Result<VerificationReport> {
    let g = gram_matrix(family, nmax, quad_points, ctx)?;
    let q = ctx.q();
    let m = match family {
        OrthoFamily::Hermite => 0,
        OrthoFamily::Ultraspherical { m } => m,
    };
    let mut grid = Vec::new();
    let mut residuals = Vec::new();
    let mut metadata = vec![format!("{quad_points}-node Gauss-Legendre rule")];
    for i in 0..=nmax {
        if g[i][i] <= 0.0 {
            metadata.push(format!("diagonal entry {i} not positive: {}", g[i][i]));
            grid.push(vec![
                ("i".to_string(), i as f64),
                ("j".to_string(), i as f64),
                ("m".to_string(), m as f64),
                ("q".to_string(), q),
            ]);
            residuals.push(1.0);
        }
    }
    for i in 0..=nmax {
        for j in (i + 1)..=nmax {
            let denom = (g[i][i] * g[j][j]).sqrt();
            grid.push(vec![
                ("i".to_string(), i as f64),
                ("j".to_string(), j as f64),
                ("m".to_string(), m as f64),
                ("q".to_string(), q),
            ]);
            residuals.push(if denom > 0.0 { g[i][j].abs() / denom } else { 1.0 });
        }
    }
    Ok(VerificationReport::new(
        family.identity_id(),
        grid,
        residuals,
        tol,
        metadata,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_monomials() {
        let (nodes, weights) = gauss_legendre(12);
        assert_eq!(nodes.len(), 12);
        // ∫_{-1}^1 x^k dx = 0 (odd), 2/(k+1) (even); exact through k=23.
        for k in 0..=23usize {
            let got: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * x.powi(k as i32))
                .sum();
            let expect = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - expect).abs() < 1e-13, "k={k}: {got} vs {expect}");
        }
        // symmetry is exact
        for i in 0..6 {
            assert_eq!(nodes[i], -nodes[11 - i]);
            assert_eq!(weights[i], weights[11 - i]);
        }
    }

    #[test]
    fn hermite_family_is_orthogonal() {
        let ctx = QContext::new(0.5).unwrap();
        let rep = orthogonality_report(OrthoFamily::Hermite, 10, 200, 1e-8, &ctx).unwrap();
        assert!(rep.passed, "worst {:?}", rep.worst_point());
    }

    #[test]
    fn ultraspherical_family_is_orthogonal() {
        let ctx = QContext::new(0.7).unwrap();
        for m in [1i64, 2] {
            let rep =
                orthogonality_report(OrthoFamily::Ultraspherical { m }, 8, 200, 1e-8, &ctx)
                    .unwrap();
            assert!(rep.passed, "m={m}: worst {:?}", rep.worst_point());
        }
    }
}
