//! The non-commutative convolution `#`, the classical convolution `∗`, and
//! residuals for their algebraic laws.
//!
//! Both products are evaluated as lattice sums on a grid symmetric about zero,
//! so `x ± y` always lands on a sample. The sum runs over the declared support
//! of the right operand only; with mollifiers on the right (`f # δₙ`) the cost is
//! close to linear in the grid size.
//!
//! Splitting `f(x+y) + f(x−y)` into a correlation and a convolution gives
//! `f # g = f ∗ even(g)`, which [`fast_sharp`] uses and which explains every law
//! checked here.

use alloc::vec::Vec;

use crate::grid::{linear_combine, GridFunction};
use crate::preset::Preset;
use crate::quadrature;
use crate::{Error, GridSpec, Result};

/// Mass allowed to fall outside the window, relative to `‖f‖₁‖g‖₁`.
pub const OVERFLOW_TOL: f64 = 1e-9;

/// The product acting on the right of a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Product {
    /// `(f # g)(x) = ½ ∫ [f(x+y) + f(x−y)] g(y) dy`
    #[default]
    Sharp,
    /// `(f ∗ g)(x) = ∫ f(x−y) g(y) dy`
    Classical,
}

impl Product {
    pub fn apply(self, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
        match self {
            Product::Sharp => sharp_convolve(f, g),
            Product::Classical => classical_convolve(f, g),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Product::Sharp => "#",
            Product::Classical => "*",
        }
    }
}

#[derive(Clone, Copy)]
enum Kernel {
    Sharp,
    Classical,
}

/// `f # g`.
///
/// The result is supported in `(supp f − supp g) ∪ (supp f + supp g)`. Reads of
/// `f` outside the window are zero. If the part of the result that falls outside
/// the window carries more than [`OVERFLOW_TOL`]`·‖f‖₁‖g‖₁` of mass the call
/// fails with [`Error::WindowOverflow`].
pub fn sharp_convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    lattice_convolve(f, g, Kernel::Sharp)
}

/// `f ∗ g` by the same lattice quadrature.
pub fn classical_convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    lattice_convolve(f, g, Kernel::Classical)
}

/// `f # g` computed as `f ∗ even(g)`.
pub fn fast_sharp(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    classical_convolve(f, &g.even_part()?)
}

fn lattice_convolve(f: &GridFunction, g: &GridFunction, kernel: Kernel) -> Result<GridFunction> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *f.grid();
    let c = grid.center()? as isize;
    let (Some((fa, fb)), Some((ga, gb))) = (f.support_span(), g.support_span()) else {
        return Ok(GridFunction::zeros(grid));
    };
    let (fa, fb) = (fa as isize, fb as isize);
    // Offsets of g's support relative to x = 0, with quadrature weights folded in.
    let ka = ga as isize - c;
    let kb = gb as isize - c;
    let taps: Vec<(isize, f64)> = (ga..=gb)
        .map(|j| (j as isize - c, g.samples()[j] * quadrature::trapezoid_weight(&grid, j)))
        .filter(|(_, w)| *w != 0.0)
        .collect();
    if taps.is_empty() || f.is_zero() {
        return Ok(GridFunction::zeros(grid));
    }
    let (lo_i, hi_i) = match kernel {
        Kernel::Sharp => (fa + ka.min(-kb), fb + kb.max(-ka)),
        Kernel::Classical => (fa + ka, fb + kb),
    };

    let n = grid.len() as isize;
    let h = grid.step();
    let mut samples = alloc::vec![0.0; grid.len()];
    let mut outside_mass = 0.0;
    for i in lo_i..=hi_i {
        let value = match kernel {
            Kernel::Sharp => {
                let mut acc = 0.0;
                for &(k, w) in &taps {
                    acc += w * (f.at(i + k) + f.at(i - k));
                }
                0.5 * acc
            }
            Kernel::Classical => {
                let mut acc = 0.0;
                for &(k, w) in &taps {
                    acc += w * f.at(i - k);
                }
                acc
            }
        };
        if (0..n).contains(&i) {
            samples[i as usize] = value;
        } else {
            outside_mass += value.abs() * h;
        }
    }

    let scale = f.l1_norm() * g.l1_norm();
    if outside_mass > OVERFLOW_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::WindowOverflow {
            mass: outside_mass,
            needed_lo: grid.lo() + lo_i as f64 * h,
            needed_hi: grid.lo() + hi_i as f64 * h,
        });
    }
    let s = lo_i.clamp(0, n - 1) as usize;
    let e = hi_i.clamp(0, n - 1) as usize;
    Ok(GridFunction::from_parts(grid, samples, (grid.point(s), grid.point(e))).trimmed())
}

/// `‖f # g‖₁ − ‖f‖₁‖g‖₁`; nonpositive up to quadrature slack.
pub fn young_residual(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    Ok(sharp_convolve(f, g)?.l1_norm() - f.l1_norm() * g.l1_norm())
}

/// `(‖(f#g)#h − f#(g#h)‖₁, ‖f#(g#h) − (f#h)#g‖₁)`.
pub fn associativity_residuals(f: &GridFunction, g: &GridFunction, h: &GridFunction) -> Result<(f64, f64)> {
    associativity_residuals_with(Product::Sharp, f, g, h)
}

pub fn associativity_residuals_with(
    op: Product,
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
) -> Result<(f64, f64)> {
    let left = op.apply(&op.apply(f, g)?, h)?;
    let middle = op.apply(f, &op.apply(g, h)?)?;
    let right = op.apply(&op.apply(f, h)?, g)?;
    Ok((left.sub(&middle)?.l1_norm(), middle.sub(&right)?.l1_norm()))
}

/// The mirror pair `(e^{−x}𝟙[x≥0], e^{x}𝟙[x≤0])` sampled on `grid`.
pub fn example_pair(grid: &GridSpec, tail_cutoff: f64) -> Result<(GridFunction, GridFunction)> {
    Ok((
        Preset::ExpRight.sample(grid, tail_cutoff)?,
        Preset::ExpLeft.sample(grid, tail_cutoff)?,
    ))
}

/// `‖f#g − g#f‖₁` for the mirror exponential pair; 1 in the continuum.
pub fn noncommutativity_witness(grid: &GridSpec, tail_cutoff: f64) -> Result<f64> {
    let (f, g) = example_pair(grid, tail_cutoff)?;
    commutator_norm(Product::Sharp, &f, &g)
}

/// `‖f⋆g − g⋆f‖₁`.
pub fn commutator_norm(op: Product, f: &GridFunction, g: &GridFunction) -> Result<f64> {
    Ok(op.apply(f, g)?.sub(&op.apply(g, f)?)?.l1_norm())
}

/// `‖(c·f₁ + f₂)⋆g − (c·(f₁⋆g) + f₂⋆g)‖₁`.
pub fn bilinearity_residual(
    op: Product,
    c: f64,
    f1: &GridFunction,
    f2: &GridFunction,
    g: &GridFunction,
) -> Result<f64> {
    let lhs = op.apply(&linear_combine(c, f1, 1.0, f2)?, g)?;
    let rhs = linear_combine(c, &op.apply(f1, g)?, 1.0, &op.apply(f2, g)?)?;
    Ok(lhs.sub(&rhs)?.l1_norm())
}
