//! The Hartley transform of a Boehmian `β = [fₙ/δₙ]`.
//!
//! At each `t` the smallest `k` in the check window with `|𝓒(δₖ)(t)| ≥ c_min`
//! is chosen and `𝓗(β)(t) = 𝓗(fₖ)(t) / 𝓒(δₖ)(t)`. Because `𝓗(fₙ) =
//! 𝓗(β)·𝓒(δₙ)` for a quotient, the choice of `k` does not matter beyond
//! quadrature error; the smallest one keeps the division well conditioned.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::boehmian::{delta_convergence_check, equivalent, geometric_schedule, Boehmian, Quotient};
use crate::grid::GridSpec;
use crate::math::SQRT_2PI;
use crate::transforms::{cosine_c, hartley, TableValues, TransformTable};
use crate::{Error, Result};

/// Default continuity threshold on `sup_t |𝓗(βₘ) − 𝓗(β)|`.
pub const CONTINUITY_TOL: f64 = 1e-3;
/// Transform magnitude below which the injectivity probe fires.
pub const INJECTIVITY_TRIGGER: f64 = 1e-6;
/// Largest numerator norm tolerated once the probe fires.
pub const INJECTIVITY_NUMERATOR_TOL: f64 = 1e-3;

/// Result of [`ext_hartley`], with per-`t` diagnostics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExtHartley {
    pub table: TransformTable,
    /// The `k` used at each `t`.
    pub chosen_k: Vec<usize>,
    /// `𝓗(f_N)(t)` at the window end `N`.
    pub raw: Vec<f64>,
    /// `|𝓗(β)(t) − 𝓗(f_N)(t)|`.
    pub gap: Vec<f64>,
    /// `|1 − 𝓒(δ_N)(t)|·|𝓗(β)(t)|`.
    pub gap_bound: Vec<f64>,
    /// Every gap is within its bound up to the quotient tolerance.
    pub gap_bound_ok: bool,
    /// Adjacent values differ by at most `L·Δt` with `L` from the representative.
    pub lipschitz_ok: bool,
    pub window: usize,
    pub c_min: f64,
}

impl ExtHartley {
    pub fn values(&self) -> &[f64] {
        self.table.real().unwrap_or_default()
    }
}

struct Tables {
    cos: BTreeMap<usize, Vec<f64>>,
    har: BTreeMap<usize, Vec<f64>>,
}

impl Tables {
    fn cos(&mut self, q: &Quotient, k: usize, t_grid: &GridSpec) -> Result<&[f64]> {
        if let Entry::Vacant(e) = self.cos.entry(k) {
            e.insert(cosine_c(&q.delta(k)?, t_grid).real().unwrap_or_default().to_vec());
        }
        Ok(&self.cos[&k])
    }

    fn har(&mut self, q: &Quotient, k: usize, t_grid: &GridSpec) -> Result<&[f64]> {
        if let Entry::Vacant(e) = self.har.entry(k) {
            e.insert(hartley(&q.term(k)?, t_grid).real().unwrap_or_default().to_vec());
        }
        Ok(&self.har[&k])
    }
}

/// `𝓗(β)` on `t_grid` for `β = b`.
pub fn ext_hartley(b: &Boehmian, t_grid: &GridSpec, c_min: f64) -> Result<ExtHartley> {
    ext_hartley_quotient(b.repr(), t_grid, c_min)
}

pub fn ext_hartley_quotient(q: &Quotient, t_grid: &GridSpec, c_min: f64) -> Result<ExtHartley> {
    if !(c_min > 0.0 && c_min < 1.0) {
        return Err(Error::Config(format!("c_min must lie in (0, 1), got {c_min}")));
    }
    let window = q.window();
    let nt = t_grid.len();
    let mut tables = Tables {
        cos: BTreeMap::new(),
        har: BTreeMap::new(),
    };
    let mut chosen_k = alloc::vec![0usize; nt];
    let mut pending: Vec<usize> = (0..nt).collect();
    for k in 1..=window {
        if pending.is_empty() {
            break;
        }
        let c = tables.cos(q, k, t_grid)?;
        pending.retain(|&j| {
            if c[j].abs() >= c_min {
                chosen_k[j] = k;
                false
            } else {
                true
            }
        });
    }
    if let Some(&j) = pending.first() {
        let t = t_grid.point(j);
        let required_k = q
            .denominator()
            .index_for_cosine_floor(t.abs(), c_min, 1 << 24)
            .unwrap_or(usize::MAX);
        return Err(Error::Evaluation { t, window, required_k });
    }

    let mut values = alloc::vec![0.0; nt];
    for j in 0..nt {
        let k = chosen_k[j];
        let c = tables.cos(q, k, t_grid)?[j];
        values[j] = tables.har(q, k, t_grid)?[j] / c;
    }

    let raw = tables.har(q, window, t_grid)?.to_vec();
    let c_last = tables.cos(q, window, t_grid)?.to_vec();
    let eps = q.settings().eps_quot;
    let mut gap = Vec::with_capacity(nt);
    let mut gap_bound = Vec::with_capacity(nt);
    let mut gap_bound_ok = true;
    for j in 0..nt {
        let g = (values[j] - raw[j]).abs();
        let bound = (1.0 - c_last[j]).abs() * values[j].abs();
        // The identity 𝓗(f_N) = 𝓗(β)·𝓒(δ_N) holds only up to the quotient residual.
        let slack = eps * (values[j].abs() + raw[j].abs()) + 1e-12;
        gap_bound_ok &= g <= bound + slack;
        gap.push(g);
        gap_bound.push(bound);
    }

    let lipschitz_ok = lipschitz_check(q, t_grid, c_min, &chosen_k, &values, &mut tables)?;

    Ok(ExtHartley {
        table: TransformTable::new(*t_grid, TableValues::Real(values), "ext_hartley")?,
        chosen_k,
        raw,
        gap,
        gap_bound,
        gap_bound_ok,
        lipschitz_ok,
        window,
        c_min,
    })
}

/// Bounds the slope of `𝓗(fₖ)/𝓒(δₖ)` between adjacent grid points through
/// `|𝓗(f)'| ≤ ∫|x f|/√π` and `|𝓒(δ)'| ≤ ∫|x δ|`.
fn lipschitz_check(
    q: &Quotient,
    t_grid: &GridSpec,
    c_min: f64,
    chosen_k: &[usize],
    values: &[f64],
    tables: &mut Tables,
) -> Result<bool> {
    let dt = t_grid.step();
    let eps = q.settings().eps_quot;
    let mut consts: BTreeMap<usize, Option<f64>> = BTreeMap::new();
    for (j, w) in chosen_k.windows(2).enumerate() {
        let k = w[0].max(w[1]);
        let l = match consts.get(&k) {
            Some(&l) => l,
            None => {
                let (f, d) = (q.term(k)?, q.delta(k)?);
                let md = d.first_abs_moment();
                let floor = c_min - md * dt;
                let l = (floor > 0.0).then(|| {
                    f.first_abs_moment() / (crate::math::sqrt(core::f64::consts::PI) * floor)
                        + f.l1_norm() * 2.0 / SQRT_2PI * md / (floor * floor)
                });
                consts.insert(k, l);
                l
            }
        };
        let Some(l) = l else { continue };
        let (a, b) = if w[0] == w[1] {
            (values[j], values[j + 1])
        } else {
            let c = tables.cos(q, k, t_grid)?;
            let (c0, c1) = (c[j], c[j + 1]);
            if c0.abs() < c_min || c1.abs() < c_min {
                continue;
            }
            let h = tables.har(q, k, t_grid)?;
            (h[j] / c0, h[j + 1] / c1)
        };
        if (a - b).abs() > l * dt * (1.0 + 1e-9) + eps * (a.abs() + b.abs()) + 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sup_t |𝓗(embed(f, d))(t) − 𝓗(f)(t)|`.
pub fn consistency_residual(
    f: &crate::GridFunction,
    d: &crate::DeltaSequence,
    t_grid: &GridSpec,
    c_min: f64,
) -> Result<f64> {
    let b = Boehmian::embed(f, d)?;
    let ext = ext_hartley(&b, t_grid, c_min)?;
    ext.table.sup_distance(&hartley(f, t_grid))
}

/// `sup_t |𝓗(q1) − 𝓗(q2)|`; the quotients must be equivalent.
pub fn representative_independence_residual(
    q1: &Quotient,
    q2: &Quotient,
    t_grid: &GridSpec,
    c_min: f64,
) -> Result<f64> {
    let window = q1.window().min(q2.window());
    let eps = q1.settings().eps_quot.max(q2.settings().eps_quot);
    let e = equivalent(q1, q2, window, eps)?;
    if !e.equivalent {
        return Err(Error::Precondition(format!(
            "quotients are not equivalent: residual {:e} at (m, n) = {:?}",
            e.max_residual, e.worst
        )));
    }
    let a = ext_hartley_quotient(q1, t_grid, c_min)?;
    let b = ext_hartley_quotient(q2, t_grid, c_min)?;
    a.table.sup_distance(&b.table)
}

/// `sup_t |𝓗(c1·b1 + c2·b2) − (c1·𝓗(b1) + c2·𝓗(b2))|`.
pub fn linearity_residual(
    b1: &Boehmian,
    b2: &Boehmian,
    c1: f64,
    c2: f64,
    t_grid: &GridSpec,
    c_min: f64,
) -> Result<f64> {
    let combo = b1.scale(c1)?.add(&b2.scale(c2)?)?;
    let lhs = ext_hartley(&combo, t_grid, c_min)?;
    let h1 = ext_hartley(b1, t_grid, c_min)?;
    let h2 = ext_hartley(b2, t_grid, c_min)?;
    Ok(lhs
        .values()
        .iter()
        .zip(h1.values().iter().zip(h2.values()))
        .map(|(l, (a, b))| (l - (c1 * a + c2 * b)).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InjectivityReport {
    pub sup_transform: f64,
    pub max_numerator_l1: f64,
    pub triggered: bool,
    pub pass: bool,
}

/// If `𝓗(β)` vanishes on `t_grid` (sup ≤ 1e-6), every verified numerator must be small.
pub fn injectivity_probe(b: &Boehmian, t_grid: &GridSpec, c_min: f64) -> Result<InjectivityReport> {
    let ext = ext_hartley(b, t_grid, c_min)?;
    let sup_transform = ext.table.sup_abs();
    let mut max_numerator_l1: f64 = 0.0;
    for n in 1..=b.repr().window() {
        max_numerator_l1 = max_numerator_l1.max(b.repr().term(n)?.l1_norm());
    }
    let triggered = sup_transform <= INJECTIVITY_TRIGGER;
    Ok(InjectivityReport {
        sup_transform,
        max_numerator_l1,
        triggered,
        pass: !triggered || max_numerator_l1 <= INJECTIVITY_NUMERATOR_TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContinuityReport {
    /// `(m, sup_t |𝓗(βₘ) − 𝓗(β)|)` along `1, 2, 4, …, horizon`.
    pub residuals: Vec<(usize, f64)>,
    pub nonincreasing: bool,
    pub final_below: bool,
    pub tolerance: f64,
    pub pass: bool,
    pub scope: String,
}

/// Checks that `𝓗(βₘ) → 𝓗(β)` uniformly on `t_grid` for a δ-convergent
/// sequence. The δ-convergence itself is verified first.
pub fn continuity_residual(
    seq: &dyn Fn(usize) -> Result<Boehmian>,
    limit: &Boehmian,
    t_grid: &GridSpec,
    horizon: usize,
    eps_conv: f64,
    c_min: f64,
) -> Result<ContinuityReport> {
    let pre = delta_convergence_check(seq, limit, limit.repr().window(), horizon, eps_conv)?;
    if !pre.pass {
        return Err(Error::Precondition(
            "the sequence does not δ-converge to the limit on the checked prefix".into(),
        ));
    }
    let target = ext_hartley(limit, t_grid, c_min)?;
    let mut residuals = Vec::new();
    for m in geometric_schedule(horizon) {
        let e = ext_hartley(&seq(m)?, t_grid, c_min)?;
        residuals.push((m, e.table.sup_distance(&target.table)?));
    }
    let nonincreasing = residuals.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-15);
    let final_below = residuals.last().is_some_and(|&(_, r)| r < CONTINUITY_TOL);
    Ok(ContinuityReport {
        residuals,
        nonincreasing,
        final_below,
        tolerance: CONTINUITY_TOL,
        pass: nonincreasing && final_below,
        scope: format!(
            "finite prefix: m along 1, 2, 4, …, {horizon}; t on [{}, {}]",
            t_grid.lo(),
            t_grid.hi()
        ),
    })
}
