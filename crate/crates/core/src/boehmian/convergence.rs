use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::Boehmian;
use crate::tolerances::Tolerances;
use crate::{Error, Result};

/// Relative slack allowed when checking that residuals do not increase.
const MONOTONE_SLACK: f64 = 1e-9;

/// `1, 2, 4, …` up to and including `horizon`.
pub fn geometric_schedule(horizon: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = 1;
    while m < horizon {
        out.push(m);
        m *= 2;
    }
    if horizon > 0 {
        out.push(horizon);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConvergenceRow {
    /// Index of the delta term the residuals are taken against (the diagonal
    /// check leaves this equal to `m`).
    pub n: usize,
    /// `(m, relative residual)` along the schedule.
    pub residuals: Vec<(usize, f64)>,
    pub nonincreasing: bool,
    pub final_below: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConvergenceReport {
    pub kind: String,
    pub horizon: usize,
    pub eps_conv: f64,
    pub rows: Vec<ConvergenceRow>,
    pub pass: bool,
    pub scope: String,
}

fn check_shared(x: &Boehmian, b: &Boehmian) -> Result<()> {
    let (dx, db) = (x.repr().denominator(), b.repr().denominator());
    if !dx.same_family(db) || x.repr().op() != b.repr().op() {
        return Err(Error::Precondition(format!(
            "sequence and limit must share one delta family, got {} and {}",
            dx.label(),
            db.label()
        )));
    }
    Ok(())
}

fn finish_row(n: usize, residuals: Vec<(usize, f64)>, eps: f64) -> ConvergenceRow {
    let nonincreasing = residuals
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + MONOTONE_SLACK) + 1e-300);
    let final_below = residuals.last().is_some_and(|&(_, r)| r < eps);
    ConvergenceRow {
        n,
        residuals,
        nonincreasing,
        final_below,
        pass: nonincreasing && final_below,
    }
}

/// δ-convergence on a finite prefix: for each `n ≤ window`,
/// `‖Xₘ⋆δₙ − X⋆δₙ‖₁ / ‖X⋆δₙ‖₁` must not increase along
/// [`geometric_schedule`]`(horizon)` and must end below `eps_conv`.
pub fn delta_convergence_check(
    seq: &dyn Fn(usize) -> Result<Boehmian>,
    limit: &Boehmian,
    window: usize,
    horizon: usize,
    eps_conv: f64,
) -> Result<ConvergenceReport> {
    if horizon == 0 || window == 0 {
        return Err(Error::Precondition("window and horizon must be at least 1".into()));
    }
    let schedule = geometric_schedule(horizon);
    let members = schedule.iter().map(|&m| seq(m)).collect::<Result<Vec<_>>>()?;
    for x in &members {
        check_shared(x, limit)?;
    }
    let mut rows = Vec::with_capacity(window);
    for n in 1..=window {
        let target = limit.act_on_own_delta(n)?;
        let scale = target.l1_norm();
        let mut residuals = Vec::with_capacity(schedule.len());
        for (&m, x) in schedule.iter().zip(&members) {
            let r = x.act_on_own_delta(n)?.sub(&target)?.l1_norm();
            residuals.push((m, Tolerances::relative(r, scale)));
        }
        rows.push(finish_row(n, residuals, eps_conv));
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(ConvergenceReport {
        kind: "delta".into(),
        horizon,
        eps_conv,
        rows,
        pass,
        scope: format!("finite prefix: n = 1..={window}, m along 1, 2, 4, …, {horizon}"),
    })
}

/// Δ-convergence on a finite prefix: `‖(Xₘ − X)⋆δₘ‖₁ / ‖X⋆δₘ‖₁` along the
/// schedule must not increase and must end below `eps_conv`.
pub fn big_delta_convergence_check(
    seq: &dyn Fn(usize) -> Result<Boehmian>,
    limit: &Boehmian,
    horizon: usize,
    eps_conv: f64,
) -> Result<ConvergenceReport> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    let mut residuals = Vec::new();
    for m in geometric_schedule(horizon) {
        let x = seq(m)?;
        check_shared(&x, limit)?;
        let target = limit.act_on_own_delta(m)?;
        let r = x.act_on_own_delta(m)?.sub(&target)?.l1_norm();
        residuals.push((m, Tolerances::relative(r, target.l1_norm())));
    }
    let row = finish_row(horizon, residuals, eps_conv);
    let pass = row.pass;
    Ok(ConvergenceReport {
        kind: "big_delta".into(),
        horizon,
        eps_conv,
        rows: alloc::vec![row],
        pass,
        scope: format!("finite prefix: diagonal m along 1, 2, 4, …, {horizon}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_shapes() {
        assert_eq!(geometric_schedule(64), [1, 2, 4, 8, 16, 32, 64]);
        assert_eq!(geometric_schedule(20), [1, 2, 4, 8, 16, 20]);
        assert_eq!(geometric_schedule(1), [1]);
        assert!(geometric_schedule(0).is_empty());
    }
}
