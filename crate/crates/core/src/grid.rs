//! Uniform grids and sampled functions with a declared support.

use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::quadrature::{self, Rule};
use crate::{Error, Result};

/// Relative slack used when snapping real coordinates onto grid indices.
const INDEX_EPS: f64 = 1e-9;

/// Samples outside the declared support must not exceed this fraction of the
/// function's sup norm (or of 1, whichever is larger).
pub const SUPPORT_TOL: f64 = 1e-9;

/// A uniform grid `lo = x₀ < x₁ < … < x_{n−1} = hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawGrid"))]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    n: usize,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawGrid {
    lo: f64,
    hi: f64,
    n: usize,
}

#[cfg(feature = "serde")]
impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;

    fn try_from(r: RawGrid) -> Result<Self> {
        Self::new(r.lo, r.hi, r.n)
    }
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Grid(format!("endpoints must be finite, got [{lo}, {hi}]")));
        }
        if lo >= hi {
            return Err(Error::Grid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 samples, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    /// `[-half_width, half_width]` with `n` samples.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    /// `[-30, 30]` with 6001 samples (`h = 0.01`).
    pub fn desk_default() -> Self {
        Self {
            lo: -30.0,
            hi: 30.0,
            n: 6001,
        }
    }

    /// `[-10, 10]` with 2001 samples, the default transform grid.
    pub fn t_default() -> Self {
        Self {
            lo: -10.0,
            hi: 10.0,
            n: 2001,
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    /// Coordinate of sample `i`. On a symmetric grid `x_{n−1−i} = −x_i` exactly.
    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        if self.is_symmetric() {
            let c = (self.n - 1) / 2;
            self.hi * (i as f64 - c as f64) / c as f64
        } else if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i as f64) / ((self.n - 1) as f64)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Symmetric about zero with zero itself a sample.
    pub fn is_symmetric(&self) -> bool {
        self.n % 2 == 1 && (self.lo + self.hi).abs() <= 1e-12 * self.hi.abs()
    }

    /// Index of `x = 0` on a symmetric grid.
    pub fn center(&self) -> Result<usize> {
        if self.is_symmetric() {
            Ok((self.n - 1) / 2)
        } else {
            Err(Error::Grid(format!(
                "operation needs a grid symmetric about 0 with 0 as a sample, got [{}, {}] with {} samples",
                self.lo, self.hi, self.n
            )))
        }
    }

    /// Inclusive index range of the samples lying in `[a, b]`, or `None`.
    pub fn index_span(&self, a: f64, b: f64) -> Option<(usize, usize)> {
        if a > b {
            return None;
        }
        let h = self.step();
        let first = math::ceil((a - self.lo) / h - INDEX_EPS).max(0.0);
        let last = math::floor((b - self.lo) / h + INDEX_EPS).min((self.n - 1) as f64);
        if first > last {
            None
        } else {
            Some((first as usize, last as usize))
        }
    }

    /// Nearest sample index to `x`, clamped to the window.
    pub fn nearest(&self, x: f64) -> usize {
        let r = (x - self.lo) / self.step();
        let i = math::floor(r + 0.5);
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = INDEX_EPS * self.step();
        x >= self.lo - slack && x <= self.hi + slack
    }
}

/// A real function sampled on a [`GridSpec`].
///
/// Samples outside `support` are (numerically) zero; routines iterate over the
/// support only.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: GridSpec,
    samples: Vec<f64>,
    support: (f64, f64),
}

impl GridFunction {
    /// Builds a function, validating length, finiteness and the support claim.
    pub fn new(grid: GridSpec, samples: Vec<f64>, support: (f64, f64)) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidFunction(format!(
                "{} samples for a grid of {}",
                samples.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!("sample {i} is not finite ({v})")));
        }
        let (a, b) = support;
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::InvalidFunction(format!("bad support [{a}, {b}]")));
        }
        if !(grid.contains(a) && grid.contains(b)) {
            return Err(Error::InvalidFunction(format!(
                "support [{a}, {b}] leaves the window [{}, {}]",
                grid.lo(),
                grid.hi()
            )));
        }
        let f = Self::from_parts(grid, samples, support);
        let tol = SUPPORT_TOL * f.sup_norm().max(1.0);
        let span = grid.index_span(a, b);
        let outside = f.samples.iter().enumerate().find(|(i, v)| {
            let inside = span.is_some_and(|(s, e)| *i >= s && *i <= e);
            !inside && v.abs() > tol
        });
        if let Some((i, v)) = outside {
            return Err(Error::InvalidFunction(format!(
                "sample {i} = {v:e} at x = {} lies outside the declared support [{a}, {b}]",
                grid.point(i)
            )));
        }
        Ok(f)
    }

    pub(crate) fn from_parts(grid: GridSpec, samples: Vec<f64>, support: (f64, f64)) -> Self {
        Self { grid, samples, support }
    }

    /// The zero function. Its support is the single sample nearest the window centre.
    pub fn zeros(grid: GridSpec) -> Self {
        let x = grid.point(grid.nearest(0.5 * (grid.lo() + grid.hi())));
        Self {
            grid,
            samples: alloc::vec![0.0; grid.len()],
            support: (x, x),
        }
    }

    /// Samples `f` on the grid points inside `support`; zero elsewhere.
    pub fn from_fn(grid: GridSpec, support: (f64, f64), f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut samples = alloc::vec![0.0; grid.len()];
        if let Some((s, e)) = grid.index_span(support.0, support.1) {
            for (i, v) in samples.iter_mut().enumerate().take(e + 1).skip(s) {
                *v = f(grid.point(i));
            }
        }
        let a = support.0.max(grid.lo());
        let b = support.1.min(grid.hi());
        Self::new(grid, samples, (a, b))
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Inclusive index range covered by the declared support.
    #[inline]
    pub fn support_span(&self) -> Option<(usize, usize)> {
        self.grid.index_span(self.support.0, self.support.1)
    }

    /// Sample at a possibly out-of-window index; zero outside the window.
    #[inline]
    pub fn at(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.samples.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|v| *v == 0.0)
    }

    /// Trapezoid integral over the support.
    pub fn integral(&self) -> f64 {
        self.integral_with(Rule::Trapezoid)
    }

    pub fn integral_with(&self, rule: Rule) -> f64 {
        self.weighted_sum(rule, |v| v)
    }

    /// Trapezoid approximation of `∫|f|`.
    pub fn l1_norm(&self) -> f64 {
        self.weighted_sum(Rule::Trapezoid, f64::abs)
    }

    pub fn l1_norm_with(&self, rule: Rule) -> f64 {
        self.weighted_sum(rule, f64::abs)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid approximation of `∫|x f(x)| dx`.
    pub fn first_abs_moment(&self) -> f64 {
        let Some((s, e)) = self.support_span() else {
            return 0.0;
        };
        (s..=e)
            .map(|i| quadrature::trapezoid_weight(&self.grid, i) * (self.grid.point(i) * self.samples[i]).abs())
            .sum()
    }

    fn weighted_sum(&self, rule: Rule, map: impl Fn(f64) -> f64) -> f64 {
        match rule {
            // Samples outside the support are zero, so the support sum is the grid sum.
            Rule::Trapezoid => {
                let Some((s, e)) = self.support_span() else {
                    return 0.0;
                };
                (s..=e)
                    .map(|i| quadrature::trapezoid_weight(&self.grid, i) * map(self.samples[i]))
                    .sum()
            }
            Rule::Simpson => (0..self.grid.len())
                .map(|i| quadrature::simpson_weight(&self.grid, i) * map(self.samples[i]))
                .sum(),
        }
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zeros(self.grid);
        }
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|v| c * v).collect(),
            support: self.support,
        }
    }

    /// `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        linear_combine(1.0, self, -1.0, other)
    }

    /// `x ↦ f(−x)`; needs a symmetric grid.
    pub fn reflect(&self) -> Result<Self> {
        self.grid.center()?;
        let mut samples = self.samples.clone();
        samples.reverse();
        Ok(Self {
            grid: self.grid,
            samples,
            support: (-self.support.1, -self.support.0),
        })
    }

    /// `(g(x) + g(−x)) / 2`.
    pub fn even_part(&self) -> Result<Self> {
        self.grid.center()?;
        let n = self.samples.len();
        let samples = (0..n)
            .map(|i| 0.5 * (self.samples[i] + self.samples[n - 1 - i]))
            .collect();
        let r = self.support.0.abs().max(self.support.1.abs());
        Ok(Self {
            grid: self.grid,
            samples,
            support: (-r, r),
        }
        .trimmed())
    }

    /// Linear interpolation onto another grid. Points outside this function's
    /// window read as zero.
    pub fn resample(&self, target: GridSpec) -> Result<Self> {
        let h = self.grid.step();
        let n = self.grid.len();
        let value = |x: f64| -> f64 {
            if !self.grid.contains(x) {
                return 0.0;
            }
            let r = ((x - self.grid.lo()) / h).clamp(0.0, (n - 1) as f64);
            let i = (math::floor(r) as usize).min(n - 2);
            let frac = r - i as f64;
            self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
        };
        let a = self.support.0 - h;
        let b = self.support.1 + h;
        let (a, b) = (a.max(target.lo()), b.min(target.hi()));
        if a > b {
            return Ok(Self::zeros(target));
        }
        Self::from_fn(target, (a, b), value).map(Self::trimmed)
    }

    /// Shrinks the declared support to the hull of the exactly-nonzero samples.
    pub(crate) fn trimmed(self) -> Self {
        let Some((s, e)) = self.support_span() else {
            return Self::zeros(self.grid);
        };
        let first = (s..=e).find(|&i| self.samples[i] != 0.0);
        let last = (s..=e).rev().find(|&i| self.samples[i] != 0.0);
        match (first, last) {
            (Some(f), Some(l)) => {
                let support = (self.grid.point(f), self.grid.point(l));
                Self { support, ..self }
            }
            _ => Self::zeros(self.grid),
        }
    }
}

/// Pointwise `c1·f + c2·g`; both functions must share a grid.
pub fn linear_combine(c1: f64, f: &GridFunction, c2: f64, g: &GridFunction) -> Result<GridFunction> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let samples = f.samples.iter().zip(&g.samples).map(|(a, b)| c1 * a + c2 * b).collect();
    let support = match (c1 != 0.0, c2 != 0.0) {
        (true, true) => (f.support.0.min(g.support.0), f.support.1.max(g.support.1)),
        (true, false) => f.support,
        (false, true) => g.support,
        (false, false) => return Ok(GridFunction::zeros(f.grid)),
    };
    Ok(GridFunction {
        grid: f.grid,
        samples,
        support,
    }
    .trimmed())
}
