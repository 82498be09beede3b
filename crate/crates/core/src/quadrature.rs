//! Composite quadrature on uniform grids.
//!
//! The trapezoid rule is the working rule everywhere: its weights are `h` in the
//! interior and `h/2` at the two window ends, so lattice sums behave exactly like
//! Riemann sums for functions that vanish at the window edges. Simpson's rule is
//! kept for oracle cross-checks.

use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Rule {
    #[default]
    Trapezoid,
    Simpson,
}

/// Trapezoid weight of grid point `i`.
#[inline]
pub fn trapezoid_weight(grid: &GridSpec, i: usize) -> f64 {
    let h = grid.step();
    if i == 0 || i + 1 == grid.len() {
        0.5 * h
    } else {
        h
    }
}

/// Composite Simpson weight of grid point `i`.
///
/// With an odd number of intervals the last interval falls back to the
/// trapezoid rule.
pub fn simpson_weight(grid: &GridSpec, i: usize) -> f64 {
    let n = grid.len();
    let h = grid.step();
    let intervals = n - 1;
    let even = intervals - intervals % 2;
    let mut w = 0.0;
    if i <= even && even > 0 {
        w += if i == 0 || i == even {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    if even < intervals && i + 1 >= n - 1 {
        w += 0.5 * h;
    }
    w
}

/// Weight of grid point `i` under `rule`.
#[inline]
pub fn weight(grid: &GridSpec, rule: Rule, i: usize) -> f64 {
    match rule {
        Rule::Trapezoid => trapezoid_weight(grid, i),
        Rule::Simpson => simpson_weight(grid, i),
    }
}

/// Integrates `samples` over the whole grid.
pub fn integrate(grid: &GridSpec, samples: &[f64], rule: Rule) -> f64 {
    debug_assert_eq!(samples.len(), grid.len());
    samples.iter().enumerate().map(|(i, v)| weight(grid, rule, i) * v).sum()
}

/// Integrates `f` over `[a, b]` with `intervals` Simpson panels (rounded up to even).
///
/// Used by oracles that evaluate closed forms directly rather than sampled data.
pub fn simpson_fn(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> f64 {
    let m = intervals.max(2) + intervals % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let x = a + (b - a) * (i as f64) / (m as f64);
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    acc * h / 3.0
}
