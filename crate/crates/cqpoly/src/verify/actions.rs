//! Oracle validation of the displayed action coefficients of the algebra
//! generators on the graded basis.
//!
//! The generators themselves are defined by difference operators; their
//! action coefficients on Q_m^ℓ are *claims* that this module checks by
//! expanding the operator output in the basis (exact linear algebra).
//! Policy per claim:
//!   hard-match  — the displayed formula is asserted to the tolerance;
//!   match-or-flag — a mismatch is recorded in metadata with both values
//!                   and does not fail the report (known-typo policy).
//! Support sets follow the same policy: mass outside the displayed target
//! vectors fails a hard-match block and is flagged in a match-or-flag one.
//! The t-lowering display genuinely needs the flag: beyond first order the
//! true action reaches down the whole parity ladder (Q_{m-1}^{ℓ-3}, ...),
//! not just the two displayed vectors.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::laurent::expand_in_q_basis;
use crate::qcore::QContext;
use crate::qops::{apply_generator, OperatorTag};
use crate::qpoly::q_basis;
use crate::verify::report::VerificationReport;

/// Displayed raising coefficient: J₊ Q_m^ℓ = coeff · Q_{m+1}^ℓ.
pub(crate) fn displayed_raising_coeff(ell: i64, m: i64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    q / (1.0 - q) * (1.0 - q.powi((m - ell) as i32)) * (1.0 - q.powi((m + ell) as i32))
        / ((1.0 - q.powi(2 * m as i32 + 1)) * (1.0 - q.powi(m as i32)))
}

/// Displayed lowering coefficient: J₋ Q_m^ℓ = coeff · Q_{m-1}^ℓ.
pub(crate) fn displayed_lowering_coeff(m: i64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    -q.powi(1 - m as i32) / (1.0 - q)
        * (1.0 - q.powi(2 * m as i32 - 1))
        * (1.0 + q.powi(m as i32 - 1))
}

/// Displayed x-action coefficients:
/// P₀ Q_m^ℓ = up · Q_m^{ℓ+1} + down · Q_m^{ℓ-1}.
pub(crate) fn displayed_x_coeffs(ell: i64, m: i64, ctx: &QContext) -> (f64, f64) {
    let q = ctx.q();
    let up = ctx.q_half_pow(-m) / 2.0 * (1.0 - q.powi((ell + m) as i32))
        / (1.0 - q.powi(ell as i32));
    let down = ctx.q_half_pow(m) / 2.0 * (1.0 - q.powi((ell - m) as i32))
        / (1.0 - q.powi(ell as i32));
    (up, down)
}

/// Displayed t-raising coefficients:
/// P₊ Q_m^ℓ = f · Q_{m+1}^{ℓ-1} + h · Q_{m+1}^{ℓ+1}; returns (f, h).
pub(crate) fn displayed_t_raising_coeffs(ell: i64, m: i64, ctx: &QContext) -> (f64, f64) {
    let q = ctx.q();
    let (li, mi) = (ell as i32, m as i32);
    let shared = (1.0 - q.powi(mi))
        / ((1.0 - q.powi(2 * mi)) * (1.0 - q.powi(2 * mi + 1)) * (1.0 - q.powi(li)));
    let f = -ctx.q_half_pow(m - ell)
        * (1.0 - q.powi(li - mi))
        * (1.0 - q.powi(li - mi - 1))
        * q.powi(2 * mi + 1)
        * shared;
    let h = ctx.q_half_pow(m - ell)
        * (1.0 - q.powi(li + mi))
        * (1.0 - q.powi(li + mi + 1))
        * shared;
    (f, h)
}

/// Displayed t-lowering coefficients:
/// P₋ Q_m^ℓ = r · Q_{m-1}^{ℓ-1} + s · Q_{m-1}^{ℓ+1}; returns (r, s).
/// Undefined at m = 1 (denominator 1 - q^{m-1} vanishes): returns None.
pub(crate) fn displayed_t_lowering_coeffs(ell: i64, m: i64, ctx: &QContext) -> Option<(f64, f64)> {
    if m == 1 {
        return None;
    }
    let q = ctx.q();
    let (li, mi) = (ell as i32, m as i32);
    let r = ctx.q_half_pow(ell - m) * (1.0 - q.powi(2 * mi - 1)) / (1.0 - q.powi(li + mi - 1))
        * (1.0
            + (1.0 - q.powi(2 * mi - 1)) * (1.0 - q.powi(li - mi + 1))
                / (4.0 * (1.0 - q.powi(mi - 1)) * (1.0 - q.powi(li))));
    let s = -ctx.q_half_pow(ell - 3 * m + 2) * (1.0 - q.powi(2 * mi - 2))
        * (1.0 - q.powi(2 * mi - 1))
        / (4.0 * (1.0 - q.powi(mi - 1)) * (1.0 - q.powi(li)));
    Some((r, s))
}

fn fmt_c(v: Complex64) -> String {
    if v.im == 0.0 {
        format!("{:.12e}", v.re)
    } else {
        format!("{:.12e}{:+.12e}i", v.re, v.im)
    }
}

struct ActionCheck<'a> {
    block: &'a str,
    policy: Policy,
    /// (upper index, t-degree, displayed coefficient); None for the
    /// coefficient means "displayed form undefined here".
    expected: Vec<(i64, i64, Option<f64>)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Policy {
    HardMatch,
    MatchOrFlag,
}

/// Compare one generator application against displayed coefficients.
/// Returns per-target residuals plus metadata lines for flags.
fn check_action(
    tag: OperatorTag,
    ell: i64,
    m: i64,
    spec: ActionCheck,
    tol: f64,
    ctx: &QContext,
    residuals: &mut Vec<f64>,
    grid: &mut Vec<Vec<(String, f64)>>,
    metadata: &mut Vec<String>,
) -> Result<()> {
    let f = q_basis(ell, m, ctx)?;
    let out = apply_generator(tag, &f, ctx)?;
    let oracle: BTreeMap<(i64, i64), Complex64> = expand_in_q_basis(&out, ctx)?;
    let scale = oracle
        .values()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1e-250);

    // Support exactness: every oracle entry with weight must be expected.
    let expected_keys: Vec<(i64, i64)> = spec
        .expected
        .iter()
        .filter(|(_, _, c)| c.map_or(true, |v| v != 0.0))
        .map(|&(l, mm, _)| (l, mm))
        .collect();
    let mut support_violation = 0.0f64;
    for (key, val) in &oracle {
        if val.norm() > 1e-9 * scale && !expected_keys.contains(key) {
            // A flag-policy block treats stray support like any other
            // deviation of the displayed formula: record it, keep going.
            if spec.policy == Policy::HardMatch {
                support_violation = 2.0;
            }
            metadata.push(format!(
                "{}: unexpected support at (ell={}, m={}) from Q_{m}^{ell}: |c| = {:.3e}{}",
                spec.block,
                key.0,
                key.1,
                val.norm(),
                if spec.policy == Policy::MatchOrFlag {
                    "; flagged"
                } else {
                    ""
                }
            ));
        }
    }
    grid.push(vec![
        ("block".to_string(), block_index(spec.block)),
        ("target".to_string(), -1.0),
        ("ell".to_string(), ell as f64),
        ("m".to_string(), m as f64),
        ("q".to_string(), ctx.q()),
    ]);
    residuals.push(support_violation);

    for (target_idx, &(l_t, m_t, disp)) in spec.expected.iter().enumerate() {
        let got = oracle
            .get(&(l_t, m_t))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0));
        let resid = match disp {
            Some(v) => {
                let d = (got - Complex64::new(v, 0.0)).norm()
                    / got.norm().max(v.abs()).max(1e-250);
                if d.is_finite() && (d < tol || spec.policy == Policy::HardMatch) {
                    d
                } else {
                    metadata.push(format!(
                        "{} at (ell={ell}, m={m}) -> (ell={l_t}, m={m_t}): displayed {v:.12e}, oracle {}; flagged",
                        spec.block,
                        fmt_c(got)
                    ));
                    0.0
                }
            }
            None => {
                metadata.push(format!(
                    "{} at (ell={ell}, m={m}) -> (ell={l_t}, m={m_t}): displayed form undefined (vanishing denominator), oracle {}; flagged",
                    spec.block,
                    fmt_c(got)
                ));
                0.0
            }
        };
        grid.push(vec![
            ("block".to_string(), block_index(spec.block)),
            ("target".to_string(), target_idx as f64),
            ("ell".to_string(), ell as f64),
            ("m".to_string(), m as f64),
            ("q".to_string(), ctx.q()),
        ]);
        residuals.push(resid);
    }
    Ok(())
}

fn block_index(block: &str) -> f64 {
    match block {
        "raising" => 0.0,
        "lowering" => 1.0,
        "x-action" => 2.0,
        "t-raising" => 3.0,
        "t-lowering" => 4.0,
        _ => -1.0,
    }
}

/// Validate all five displayed generator actions on the grid
/// 1 ≤ m ≤ m_max, m ≤ ℓ ≤ m + dmax.
///
/// Hard-matched: the lowering action and the x action. Match-or-flag:
/// the raising action and both t-shift actions (their displays carry
/// known defects; the oracle values are recorded alongside).
pub fn module_actions_report(m_max: i64, dmax: i64, ctx: &QContext) -> Result<VerificationReport> {
    if m_max < 1 || dmax < 0 {
        return Err(QError::InvalidParameter(format!(
            "need m_max >= 1 and dmax >= 0, got {m_max}, {dmax}"
        )));
    }
    let tol = 1e-9;
    let mut grid = Vec::new();
    let mut residuals = Vec::new();
    let mut metadata = vec![
        "blocks: 0 raising (flag), 1 lowering (hard), 2 x-action (hard), 3 t-raising (flag), 4 t-lowering (flag)".to_string(),
        "target = -1 rows check support; residual 2 on violation in hard blocks, flag in flag blocks"
            .to_string(),
    ];
    for m in 1..=m_max {
        for d in 0..=dmax {
            let ell = m + d;
            check_action(
                OperatorTag::JPlus,
                ell,
                m,
                ActionCheck {
                    block: "raising",
                    policy: Policy::MatchOrFlag,
                    expected: vec![(ell, m + 1, Some(displayed_raising_coeff(ell, m, ctx)))],
                },
                tol,
                ctx,
                &mut residuals,
                &mut grid,
                &mut metadata,
            )?;
            check_action(
                OperatorTag::JMinus,
                ell,
                m,
                ActionCheck {
                    block: "lowering",
                    policy: Policy::HardMatch,
                    expected: vec![(ell, m - 1, Some(displayed_lowering_coeff(m, ctx)))],
                },
                tol,
                ctx,
                &mut residuals,
                &mut grid,
                &mut metadata,
            )?;
            let (up, down) = displayed_x_coeffs(ell, m, ctx);
            check_action(
                OperatorTag::P0,
                ell,
                m,
                ActionCheck {
                    block: "x-action",
                    policy: Policy::HardMatch,
                    expected: vec![(ell + 1, m, Some(up)), (ell - 1, m, Some(down))],
                },
                tol,
                ctx,
                &mut residuals,
                &mut grid,
                &mut metadata,
            )?;
            let (f_c, h_c) = displayed_t_raising_coeffs(ell, m, ctx);
            check_action(
                OperatorTag::PPlus,
                ell,
                m,
                ActionCheck {
                    block: "t-raising",
                    policy: Policy::MatchOrFlag,
                    expected: vec![(ell - 1, m + 1, Some(f_c)), (ell + 1, m + 1, Some(h_c))],
                },
                tol,
                ctx,
                &mut residuals,
                &mut grid,
                &mut metadata,
            )?;
            let rs = displayed_t_lowering_coeffs(ell, m, ctx);
            check_action(
                OperatorTag::PMinus,
                ell,
                m,
                ActionCheck {
                    block: "t-lowering",
                    policy: Policy::MatchOrFlag,
                    expected: match rs {
                        Some((r, s)) => vec![(ell - 1, m - 1, Some(r)), (ell + 1, m - 1, Some(s))],
                        None => vec![(ell - 1, m - 1, None), (ell + 1, m - 1, None)],
                    },
                },
                tol,
                ctx,
                &mut residuals,
                &mut grid,
                &mut metadata,
            )?;
        }
    }
    Ok(VerificationReport::new(
        "module-actions",
        grid,
        residuals,
        tol,
        metadata,
    ))
}
