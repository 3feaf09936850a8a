//! Report types shared by every verification: a grid of evaluation
//! points with per-point residuals, and coefficient tables produced
//! either by closed forms or by the projection oracle.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of checking one identity over a parameter grid.
///
/// Invariants enforced by the constructor: one residual per grid point,
/// `max_residual` is the exact maximum (0 for an empty grid), and
/// `passed` ⇔ `max_residual < tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    /// Named parameters of each evaluation point, in evaluation order.
    pub grid: Vec<Vec<(String, f64)>>,
    /// Nonnegative per-point residuals, parallel to `grid`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Free-form notes: truncation orders, flagged discrepancies,
    /// resolved prefactor candidates, and similar.
    pub metadata: Vec<String>,
}

impl VerificationReport {
    pub fn new(
        identity_id: &str,
        grid: Vec<Vec<(String, f64)>>,
        residuals: Vec<f64>,
        tolerance: f64,
        metadata: Vec<String>,
    ) -> Self {
        assert_eq!(grid.len(), residuals.len(), "one residual per grid point");
        debug_assert!(
            residuals.iter().all(|r| r.is_finite() && *r >= 0.0),
            "residuals must be finite and nonnegative"
        );
        let max_residual = residuals.iter().copied().fold(0.0f64, f64::max);
        VerificationReport {
            identity_id: identity_id.to_string(),
            grid,
            residuals,
            max_residual,
            tolerance,
            passed: max_residual < tolerance,
            metadata,
        }
    }

    /// The grid point carrying the largest residual, if any.
    pub fn worst_point(&self) -> Option<(&[(String, f64)], f64)> {
        let (idx, r) = self
            .residuals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        Some((&self.grid[idx], *r))
    }
}

/// Where the numbers in a coefficient table came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Independent expansion in the graded basis by exact linear algebra.
    ProjectionOracle,
    /// Evaluated from a closed-form expression.
    ClosedForm,
}

/// A table of expansion coefficients indexed 0..=kmax: either the U_k
/// coefficients of the exponential's Hermite-basis expansion, or the
/// W_ell^k coefficients of its graded-basis expansion at fixed order ell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixElementTable {
    /// "hermite-gen" for U tables, "gegenbauer-gen" for W tables.
    pub kind: String,
    pub b: Complex64,
    /// Basis order for W tables; absent for U tables.
    pub ell: Option<i64>,
    /// Contiguous indices 0..=kmax.
    pub values: BTreeMap<usize, Complex64>,
    pub provenance: Provenance,
}

impl MatrixElementTable {
    pub fn value(&self, k: usize) -> Complex64 {
        self.values
            .get(&k)
            .copied()
            .unwrap_or_else(|| panic!("table {} has no index {k}", self.kind))
    }

    pub fn kmax(&self) -> usize {
        self.values.keys().next_back().copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_invariants() {
        let grid = vec![
            vec![("x".to_string(), 0.5)],
            vec![("x".to_string(), -0.5)],
        ];
        let rep = VerificationReport::new("demo", grid, vec![1e-12, 3e-9], 1e-8, vec![]);
        assert!(rep.passed);
        assert_eq!(rep.max_residual, 3e-9);
        let (point, worst) = rep.worst_point().unwrap();
        assert_eq!(point[0].1, -0.5);
        assert_eq!(worst, 3e-9);

        let rep = VerificationReport::new("demo", vec![vec![]], vec![2e-8], 1e-8, vec![]);
        assert!(!rep.passed);

        let empty = VerificationReport::new("demo", vec![], vec![], 1e-8, vec![]);
        assert!(empty.passed);
        assert_eq!(empty.max_residual, 0.0);
        assert!(empty.worst_point().is_none());
    }

    #[test]
    fn report_serde_round_trip() {
        let rep = VerificationReport::new(
            "demo",
            vec![vec![("q".to_string(), 0.5), ("n".to_string(), 3.0)]],
            vec![4.5e-13],
            1e-12,
            vec!["note".to_string()],
        );
        let json = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(rep, back);
    }

    #[test]
    fn table_accessors() {
        let mut values = BTreeMap::new();
        values.insert(0usize, Complex64::new(1.0, 0.0));
        values.insert(1usize, Complex64::new(0.0, 0.25));
        let t = MatrixElementTable {
            kind: "hermite-gen".to_string(),
            b: Complex64::new(0.8, 0.0),
            ell: None,
            values,
            provenance: Provenance::ClosedForm,
        };
        assert_eq!(t.kmax(), 1);
        assert_eq!(t.value(1).im, 0.25);
    }
}
