//! Hartley, full-line cosine and Fourier transforms by direct quadrature.
//!
//! Normalizations:
//!
//! ```text
//! 𝓗(f)(t) = (1/√(2π)) ∫ f(x) (cos xt + sin xt) dx
//! 𝓕(f)(t) = (1/√(2π)) ∫ f(x) e^{−ixt} dx
//! 𝓒(f)(t) =           ∫ f(x) cos xt dx
//! ```
//!
//! `𝓒` carries no prefactor; with these conventions `𝓗(f # g) = 𝓗(f)·𝓒(g)` and
//! `𝓒(f # g) = 𝓒(f)·𝓒(g)` hold without extra constants.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::grid::{GridFunction, GridSpec};
use crate::math::{self, SQRT_2PI};
use crate::quadrature;
use crate::sharp::sharp_convolve;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TransformKind {
    Hartley,
    Cosine,
    Fourier,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Hartley => "hartley",
            TransformKind::Cosine => "cosine",
            TransformKind::Fourier => "fourier",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TableValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// Sampled transform values on a uniform `t` grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TransformTable {
    pub t_grid: GridSpec,
    pub values: TableValues,
    pub source: String,
}

impl TransformTable {
    pub fn new(t_grid: GridSpec, values: TableValues, source: impl Into<String>) -> Result<Self> {
        let (len, finite) = match &values {
            TableValues::Real(v) => (v.len(), v.iter().all(|x| x.is_finite())),
            TableValues::Complex(v) => (v.len(), v.iter().all(|z| z.re.is_finite() && z.im.is_finite())),
        };
        if len != t_grid.len() {
            return Err(Error::InvalidFunction(alloc::format!(
                "table has {len} values for a t grid of {}",
                t_grid.len()
            )));
        }
        if !finite {
            return Err(Error::InvalidFunction("table values must be finite".into()));
        }
        Ok(Self {
            t_grid,
            values,
            source: source.into(),
        })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn real(&self) -> Option<&[f64]> {
        match &self.values {
            TableValues::Real(v) => Some(v),
            TableValues::Complex(_) => None,
        }
    }

    pub fn complex(&self) -> Option<&[Complex64]> {
        match &self.values {
            TableValues::Complex(v) => Some(v),
            TableValues::Real(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|value_j|` for each row.
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.values {
            TableValues::Real(v) => v.iter().map(|x| x.abs()).collect(),
            TableValues::Complex(v) => v.iter().map(|z| z.norm()).collect(),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.magnitudes().into_iter().fold(0.0, f64::max)
    }

    /// Reinterprets a real table as a function of `t`, support = whole grid.
    pub fn to_grid_function(&self) -> Result<GridFunction> {
        let v = self
            .real()
            .ok_or_else(|| Error::Precondition("complex tables cannot be read as real functions".into()))?;
        GridFunction::new(self.t_grid, v.to_vec(), (self.t_grid.lo(), self.t_grid.hi()))
    }

    /// `sup_j |self_j − other_j|`; both tables must share a `t` grid.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.t_grid != other.t_grid {
            return Err(Error::GridMismatch);
        }
        let d = match (&self.values, &other.values) {
            (TableValues::Real(a), TableValues::Real(b)) => {
                a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
            }
            (TableValues::Complex(a), TableValues::Complex(b)) => {
                a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
            }
            _ => return Err(Error::Precondition("cannot compare real and complex tables".into())),
        };
        Ok(d)
    }
}

/// Per-`t` sums `(Σ w f cos xt, Σ w f sin xt)` over the support of `f`.
fn cos_sin_sums(f: &GridFunction, t_grid: &GridSpec) -> Vec<(f64, f64)> {
    let grid = f.grid();
    let Some((s, e)) = f.support_span() else {
        return alloc::vec![(0.0, 0.0); t_grid.len()];
    };
    let nodes: Vec<(f64, f64)> = (s..=e)
        .map(|i| (grid.point(i), quadrature::trapezoid_weight(grid, i) * f.samples()[i]))
        .filter(|(_, w)| *w != 0.0)
        .collect();
    t_grid
        .points()
        .map(|t| {
            let mut c = 0.0;
            let mut sn = 0.0;
            for &(x, w) in &nodes {
                let (si, co) = math::sin_cos(x * t);
                c += w * co;
                sn += w * si;
            }
            (c, sn)
        })
        .collect()
}

/// `𝓗(f)` on `t_grid`.
pub fn hartley(f: &GridFunction, t_grid: &GridSpec) -> TransformTable {
    let values = cos_sin_sums(f, t_grid)
        .into_iter()
        .map(|(c, s)| (c + s) / SQRT_2PI)
        .collect();
    TransformTable {
        t_grid: *t_grid,
        values: TableValues::Real(values),
        source: String::from("f"),
    }
}

/// `𝓒(f)` on `t_grid`, without a `1/√(2π)` prefactor.
pub fn cosine_c(f: &GridFunction, t_grid: &GridSpec) -> TransformTable {
    let grid = f.grid();
    let values = match f.support_span() {
        None => alloc::vec![0.0; t_grid.len()],
        Some((s, e)) => {
            let nodes: Vec<(f64, f64)> = (s..=e)
                .map(|i| (grid.point(i), quadrature::trapezoid_weight(grid, i) * f.samples()[i]))
                .filter(|(_, w)| *w != 0.0)
                .collect();
            t_grid
                .points()
                .map(|t| nodes.iter().map(|&(x, w)| w * libm::cos(x * t)).sum())
                .collect()
        }
    };
    TransformTable {
        t_grid: *t_grid,
        values: TableValues::Real(values),
        source: String::from("f"),
    }
}

/// `𝓕(f)` on `t_grid`.
pub fn fourier(f: &GridFunction, t_grid: &GridSpec) -> TransformTable {
    let values = cos_sin_sums(f, t_grid)
        .into_iter()
        .map(|(c, s)| Complex64::new(c / SQRT_2PI, -s / SQRT_2PI))
        .collect();
    TransformTable {
        t_grid: *t_grid,
        values: TableValues::Complex(values),
        source: String::from("f"),
    }
}

/// Dispatch on `kind`.
pub fn transform(kind: TransformKind, f: &GridFunction, t_grid: &GridSpec) -> TransformTable {
    match kind {
        TransformKind::Hartley => hartley(f, t_grid),
        TransformKind::Cosine => cosine_c(f, t_grid),
        TransformKind::Fourier => fourier(f, t_grid),
    }
}

/// Sup residual of `𝓕(f)(t) = [𝓗(f)(t) + 𝓗(f)(−t)]/2 − i[𝓗(f)(t) − 𝓗(f)(−t)]/2`.
///
/// The reflected table `t ↦ 𝓗(f)(−t)` plays the role of `𝓗(−f)`; the `t`
/// grid must therefore be symmetric.
pub fn fourier_hartley_relation_residual(f: &GridFunction, t_grid: &GridSpec) -> Result<f64> {
    t_grid.center()?;
    let h = hartley(f, t_grid);
    let fo = fourier(f, t_grid);
    let (h, fo) = (h.real().unwrap_or_default(), fo.complex().unwrap_or_default());
    let n = h.len();
    let residual = (0..n)
        .map(|j| {
            let (ht, hm) = (h[j], h[n - 1 - j]);
            let predicted = Complex64::new(0.5 * (ht + hm), -0.5 * (ht - hm));
            (fo[j] - predicted).norm()
        })
        .fold(0.0, f64::max);
    Ok(residual)
}

/// `sup_t |𝓗(f # g)(t) − 𝓗(f)(t)·𝓒(g)(t)|`.
pub fn hartley_convolution_residual(f: &GridFunction, g: &GridFunction, t_grid: &GridSpec) -> Result<f64> {
    let fg = sharp_convolve(f, g)?;
    let lhs = hartley(&fg, t_grid);
    let hf = hartley(f, t_grid);
    let cg = cosine_c(g, t_grid);
    Ok(product_residual(&lhs, &hf, &cg))
}

/// `sup_t |𝓒(f # g)(t) − 𝓒(f)(t)·𝓒(g)(t)|`.
pub fn cosine_convolution_residual(f: &GridFunction, g: &GridFunction, t_grid: &GridSpec) -> Result<f64> {
    let fg = sharp_convolve(f, g)?;
    let lhs = cosine_c(&fg, t_grid);
    let cf = cosine_c(f, t_grid);
    let cg = cosine_c(g, t_grid);
    Ok(product_residual(&lhs, &cf, &cg))
}

fn product_residual(lhs: &TransformTable, a: &TransformTable, b: &TransformTable) -> f64 {
    let (l, a, b) = (
        lhs.real().unwrap_or_default(),
        a.real().unwrap_or_default(),
        b.real().unwrap_or_default(),
    );
    l.iter()
        .zip(a.iter().zip(b))
        .map(|(l, (a, b))| (l - a * b).abs())
        .fold(0.0, f64::max)
}

/// Lipschitz constant for `𝓗(f)`: `∫|x f(x)| dx` bounds `|d𝓗(f)/dt|`
/// because `|cas'| ≤ √2 < √(2π)`.
pub fn hartley_lipschitz_bound(f: &GridFunction) -> f64 {
    f.first_abs_moment()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linear_combine;
    use crate::preset::Preset;

    #[test]
    fn zero_function_transforms_to_zero() {
        let g = GridSpec::symmetric(5.0, 501).unwrap();
        let z = GridFunction::zeros(g);
        let t = GridSpec::t_default();
        assert_eq!(hartley(&z, &t).sup_abs(), 0.0);
        assert_eq!(cosine_c(&z, &t).sup_abs(), 0.0);
        assert_eq!(fourier_hartley_relation_residual(&z, &t).unwrap(), 0.0);
        let f = Preset::Gaussian { sigma: 1.0 }.sample(&g, 1e-12).unwrap();
        assert_eq!(hartley_convolution_residual(&f, &z, &t).unwrap(), 0.0);
        assert_eq!(cosine_convolution_residual(&z, &f, &t).unwrap(), 0.0);
    }

    #[test]
    fn cosine_of_box_is_sinc() {
        // 𝓒(𝟙[−1,1])(t) = 2 sin t / t.
        let g = GridSpec::symmetric(1.5, 300_001).unwrap();
        let b = Preset::Box { a: -1.0, b: 1.0 }.sample(&g, 1e-12).unwrap();
        let t = GridSpec::symmetric(10.0, 201).unwrap();
        let c = cosine_c(&b, &t);
        for (j, tv) in t.points().enumerate() {
            let exact = if tv == 0.0 { 2.0 } else { 2.0 * libm::sin(tv) / tv };
            assert!((c.real().unwrap()[j] - exact).abs() < 1e-8, "t={tv}");
        }
    }

    #[test]
    fn cosine_kills_odd_functions() {
        let g = GridSpec::symmetric(30.0, 6001).unwrap();
        let r = Preset::ExpRight.sample(&g, 1e-12).unwrap();
        let odd = linear_combine(1.0, &r, -1.0, &r.reflect().unwrap()).unwrap();
        assert!(cosine_c(&odd, &GridSpec::t_default()).sup_abs() < 1e-14);
    }

    #[test]
    fn fourier_of_even_is_real_and_bounds_hartley() {
        let g = GridSpec::symmetric(10.0, 2001).unwrap();
        let t = GridSpec::t_default();
        let gauss = Preset::Gaussian { sigma: 1.0 }.sample(&g, 1e-12).unwrap();
        let fo = fourier(&gauss, &t);
        assert!(fo.complex().unwrap().iter().all(|z| z.im.abs() < 1e-15));
        let g30 = GridSpec::desk_default();
        for p in [
            Preset::ExpRight,
            Preset::Box { a: 0.0, b: 1.0 },
            Preset::Triangle {
                center: 1.0,
                half_width: 0.5,
            },
        ] {
            let f = p.sample(&g30, 1e-12).unwrap();
            let h = hartley(&f, &t);
            let fo = fourier(&f, &t);
            for (hv, fv) in h.real().unwrap().iter().zip(fo.complex().unwrap()) {
                assert!(hv.abs() <= 2.0 * fv.norm() + 1e-14);
            }
            assert!(h.sup_abs() <= f.l1_norm());
        }
    }

    #[test]
    fn fourier_of_exp_right_matches_closed_form() {
        // 𝓕(e^{−x}𝟙[x≥0])(t) = (1/√(2π)) / (1 + it); O(h²) error from the kink-free tail.
        let g = GridSpec::symmetric(30.0, 60_001).unwrap();
        let f = Preset::ExpRight.sample(&g, 1e-12).unwrap();
        let t = GridSpec::symmetric(10.0, 201).unwrap();
        let fo = fourier(&f, &t);
        for (j, tv) in t.points().enumerate() {
            let exact = Complex64::new(1.0, 0.0) / Complex64::new(1.0, tv) / SQRT_2PI;
            assert!((fo.complex().unwrap()[j] - exact).norm() < 1e-6, "t={tv}");
        }
        assert!(fourier_hartley_relation_residual(&f, &t).unwrap() < 1e-8);
    }

    #[test]
    fn relation_needs_symmetric_t_grid() {
        let g = GridSpec::symmetric(5.0, 501).unwrap();
        let f = Preset::Gaussian { sigma: 1.0 }.sample(&g, 1e-12).unwrap();
        assert!(fourier_hartley_relation_residual(&f, &GridSpec::new(0.0, 1.0, 11).unwrap()).is_err());
    }

    #[test]
    fn hartley_is_lipschitz() {
        let g = GridSpec::desk_default();
        let t = GridSpec::t_default();
        for p in [
            Preset::ExpRight,
            Preset::Gaussian { sigma: 2.0 },
            Preset::Box { a: -1.0, b: 3.0 },
        ] {
            let f = p.sample(&g, 1e-12).unwrap();
            let h = hartley(&f, &t);
            let l = hartley_lipschitz_bound(&f);
            let v = h.real().unwrap();
            let dt = t.step();
            assert!(v.windows(2).all(|w| (w[1] - w[0]).abs() <= l * dt + 1e-15));
        }
    }
}
