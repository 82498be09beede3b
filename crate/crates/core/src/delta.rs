//! Delta sequences: unit mass, uniformly bounded L¹ norm, shrinking support.
//!
//! A [`DeltaSequence`] is a generator `n ↦ δₙ` (indices start at 1) together
//! with the bound `M` on `‖δₙ‖₁` and the support radius `r(n)`. Built-in
//! families are renormalized on the grid so the trapezoid mass of every term is
//! 1 to rounding.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::grid::{GridFunction, GridSpec};
use crate::math;
use crate::sharp::Product;
use crate::transforms::cosine_c;
use crate::{Error, Result};

/// Tolerance on `|∫δₙ − 1|`.
pub const MASS_TOL: f64 = 1e-9;

pub type Generator = Arc<dyn Fn(usize) -> Result<GridFunction> + Send + Sync>;
pub type Radius = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FamilyKind {
    /// Symmetric unit-mass hat on `[−1/n, 1/n]`.
    TriangleSym,
    /// Normalized `exp(−1/(1−(nx)²))` on `[−1/n, 1/n]`.
    BumpSym,
    /// `n·𝟙[0, 1/n]`; deliberately not even.
    BoxRight,
    /// Termwise product of two families.
    SharpProduct,
    /// Anything built through [`DeltaSequence::custom`].
    Custom,
}

impl FamilyKind {
    pub const BASIC: [FamilyKind; 3] = [FamilyKind::TriangleSym, FamilyKind::BumpSym, FamilyKind::BoxRight];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::TriangleSym => "triangle_sym",
            FamilyKind::BumpSym => "bump_sym",
            FamilyKind::BoxRight => "box_right",
            FamilyKind::SharpProduct => "sharp_product",
            FamilyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "triangle_sym" => Ok(FamilyKind::TriangleSym),
            "bump_sym" => Ok(FamilyKind::BumpSym),
            "box_right" => Ok(FamilyKind::BoxRight),
            other => Err(Error::Config(format!("unknown delta family {other:?}"))),
        }
    }
}

/// An indexed family `n ↦ δₙ`, `n ≥ 1`.
#[derive(Clone)]
pub struct DeltaSequence {
    kind: FamilyKind,
    label: String,
    grid: GridSpec,
    bound_m: f64,
    generator: Generator,
    radius: Radius,
}

impl fmt::Debug for DeltaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeltaSequence")
            .field("kind", &self.kind)
            .field("label", &self.label)
            .field("grid", &self.grid)
            .field("bound_m", &self.bound_m)
            .finish_non_exhaustive()
    }
}

impl DeltaSequence {
    /// A built-in family on `grid`.
    pub fn make_family(kind: FamilyKind, grid: GridSpec) -> Result<Self> {
        grid.center()?;
        let shape: fn(f64) -> f64 = match kind {
            // u = n·x
            FamilyKind::TriangleSym => |u| (1.0 - u.abs()).max(0.0),
            FamilyKind::BumpSym => |u| {
                if u.abs() < 1.0 {
                    math::exp(-1.0 / (1.0 - u * u))
                } else {
                    0.0
                }
            },
            FamilyKind::BoxRight => |u| if (0.0..=1.0).contains(&u) { 1.0 } else { 0.0 },
            FamilyKind::SharpProduct | FamilyKind::Custom => {
                return Err(Error::Config(format!("{kind} is not a built-in family")));
            }
        };
        let symmetric = kind != FamilyKind::BoxRight;
        let generator: Generator = Arc::new(move |n| {
            let r = check_resolution(&grid, n)?;
            let support = if symmetric { (-r, r) } else { (0.0, r) };
            let snap = 1e-7 * grid.step();
            let raw = GridFunction::from_fn(grid, support, |x| {
                let u = x / r;
                if !symmetric && ((u - 0.0).abs() * r <= snap || (u - 1.0).abs() * r <= snap) {
                    0.5
                } else {
                    shape(u)
                }
            })?;
            let mass = raw.integral();
            Ok(raw.scaled(1.0 / mass))
        });
        Ok(Self {
            kind,
            label: String::from(kind.name()),
            grid,
            bound_m: 1.0,
            generator,
            radius: Arc::new(|n| 1.0 / n as f64),
        })
    }

    /// A user-supplied family. `bound_m` and `radius` are claims checked by
    /// [`verify_axioms`], not trusted.
    pub fn custom(
        label: impl Into<String>,
        grid: GridSpec,
        bound_m: f64,
        radius: impl Fn(usize) -> f64 + Send + Sync + 'static,
        generator: impl Fn(usize) -> Result<GridFunction> + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind: FamilyKind::Custom,
            label: label.into(),
            grid,
            bound_m,
            generator: Arc::new(generator),
            radius: Arc::new(radius),
        }
    }

    /// `δₙ`.
    pub fn term(&self, n: usize) -> Result<GridFunction> {
        if n == 0 {
            return Err(Error::Precondition("delta sequences are indexed from 1".into()));
        }
        let d = (self.generator)(n)?;
        if d.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(d)
    }

    pub fn support_radius(&self, n: usize) -> f64 {
        (self.radius)(n)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn bound_m(&self) -> f64 {
        self.bound_m
    }

    /// Same label on the same grid.
    pub fn same_family(&self, other: &Self) -> bool {
        self.label == other.label && self.grid == other.grid
    }

    /// Largest `n` whose built-in term resolves on this grid (`1/n ≥ 2h`).
    pub fn max_resolved_index(grid: &GridSpec) -> usize {
        math::floor(1.0 / (2.0 * grid.step()) + 1e-9) as usize
    }

    /// Smallest `k` with `M·K·r(k) ≤ 1 − c_min`, searched up to `limit`.
    pub fn index_for_cosine_floor(&self, k_abs: f64, c_min: f64, limit: usize) -> Option<usize> {
        (1..=limit).find(|&k| self.bound_m * k_abs * self.support_radius(k) <= 1.0 - c_min)
    }
}

fn check_resolution(grid: &GridSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("delta sequences are indexed from 1".into()));
    }
    let r = 1.0 / n as f64;
    let step = grid.step();
    if r < 2.0 * step * (1.0 - 1e-12) {
        return Err(Error::Resolution { n, radius: r, step });
    }
    Ok(r)
}

/// `n ↦ δₙ # ψₙ`, with `M = M₁M₂` and `r = r₁ + r₂`.
pub fn sharp_product_family(d1: &DeltaSequence, d2: &DeltaSequence) -> Result<DeltaSequence> {
    product_family(Product::Sharp, d1, d2)
}

/// Termwise product of two families under `op`.
pub fn product_family(op: Product, d1: &DeltaSequence, d2: &DeltaSequence) -> Result<DeltaSequence> {
    if d1.grid != d2.grid {
        return Err(Error::GridMismatch);
    }
    let (a, b) = (d1.clone(), d2.clone());
    let (ra, rb) = (d1.radius.clone(), d2.radius.clone());
    let generator: Generator = Arc::new(move |n| op.apply(&a.term(n)?, &b.term(n)?));
    Ok(DeltaSequence {
        kind: FamilyKind::SharpProduct,
        label: format!("({}{}{})", d1.label, op.symbol(), d2.label),
        grid: d1.grid,
        bound_m: d1.bound_m * d2.bound_m,
        generator,
        radius: Arc::new(move |n| ra(n) + rb(n)),
    })
}

/// One row of a [`DeltaReport`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeltaRow {
    pub n: usize,
    pub mass: f64,
    pub abs_mass: f64,
    pub radius: f64,
    /// Declared support of the generated term.
    pub support: (f64, f64),
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
}

/// Per-index verdicts for unit mass (P1), bounded mass (P2) and shrinking support (P3).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeltaReport {
    pub family: String,
    pub n_max: usize,
    pub bound_m: f64,
    pub rows: Vec<DeltaRow>,
    /// `r(n_max) ≤ 2/n_max`.
    pub final_radius_ok: bool,
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub all_pass: bool,
    pub scope: String,
}

/// Checks P1–P3 for `n = 1..=n_max`.
pub fn verify_axioms(d: &DeltaSequence, n_max: usize) -> Result<DeltaReport> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(n_max);
    let mut prev_radius = f64::INFINITY;
    for n in 1..=n_max {
        let term = d.term(n)?;
        let mass = term.integral();
        let abs_mass = term.l1_norm();
        let radius = d.support_radius(n);
        let support = term.support();
        let slack = 1e-9 + 1e-7 * d.grid.step();
        let inside = term.is_zero() || (support.0 >= -radius - slack && support.1 <= radius + slack);
        rows.push(DeltaRow {
            n,
            mass,
            abs_mass,
            radius,
            support,
            p1: (mass - 1.0).abs() <= MASS_TOL,
            p2: abs_mass <= d.bound_m * (1.0 + MASS_TOL),
            p3: inside && radius <= prev_radius && radius.is_finite(),
        });
        prev_radius = radius;
    }
    let final_radius_ok = d.support_radius(n_max) <= 2.0 / n_max as f64 + 1e-15;
    let p1 = rows.iter().all(|r| r.p1);
    let p2 = rows.iter().all(|r| r.p2);
    let p3 = rows.iter().all(|r| r.p3) && final_radius_ok;
    Ok(DeltaReport {
        family: d.label.clone(),
        n_max,
        bound_m: d.bound_m,
        rows,
        final_radius_ok,
        p1,
        p2,
        p3,
        all_pass: p1 && p2 && p3,
        scope: format!("finite prefix n = 1..={n_max}"),
    })
}

/// `‖f # δₙ − f‖₁`.
pub fn approx_identity_error(f: &GridFunction, d: &DeltaSequence, n: usize) -> Result<f64> {
    approx_identity_error_with(Product::Sharp, f, d, n)
}

pub fn approx_identity_error_with(op: Product, f: &GridFunction, d: &DeltaSequence, n: usize) -> Result<f64> {
    Ok(op.apply(f, &d.term(n)?)?.sub(f)?.l1_norm())
}

/// `sup_{|t| ≤ K} |𝓒(δₙ)(t) − 1|` on a 1001-point grid over `[−K, K]`.
pub fn cosine_limit_error(d: &DeltaSequence, n: usize, k_abs: f64) -> Result<f64> {
    let t_grid = GridSpec::symmetric(k_abs, 1001)?;
    cosine_limit_error_on(d, n, &t_grid)
}

pub fn cosine_limit_error_on(d: &DeltaSequence, n: usize, t_grid: &GridSpec) -> Result<f64> {
    let c = cosine_c(&d.term(n)?, t_grid);
    Ok(c.real()
        .unwrap_or_default()
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max))
}
