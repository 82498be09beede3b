//! Closed-form integrable functions used as ground truth.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::grid::{GridFunction, GridSpec};
use crate::math;
use crate::{Error, Result};

/// A named closed-form function.
///
/// `ExpRight` and `ExpLeft` are the mirror pair `e^{−x}·𝟙[x ≥ 0]` and
/// `e^{x}·𝟙[x ≤ 0]` on which `#` is visibly non-commutative.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "String", try_from = "String"))]
pub enum Preset {
    ExpRight,
    ExpLeft,
    /// `e^{−x²/(2σ²)}`, peak 1.
    Gaussian {
        sigma: f64,
    },
    /// Indicator of `[a, b]`.
    Box {
        a: f64,
        b: f64,
    },
    /// Hat of height 1 on `[center − half_width, center + half_width]`.
    Triangle {
        center: f64,
        half_width: f64,
    },
    /// `(1/width)·𝟙[0, width]`, unit mass.
    ScaledBoxRight {
        width: f64,
    },
}

/// The grid step exceeds half the preset's characteristic width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionWarning {
    pub step: f64,
    pub width: f64,
}

impl fmt::Display for ResolutionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "grid step {} is coarser than half the characteristic width {}",
            self.step, self.width
        )
    }
}

impl Preset {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Preset::ExpRight | Preset::ExpLeft => true,
            Preset::Gaussian { sigma } => sigma.is_finite() && sigma > 0.0,
            Preset::Box { a, b } => a.is_finite() && b.is_finite() && a < b,
            Preset::Triangle { center, half_width } => center.is_finite() && half_width.is_finite() && half_width > 0.0,
            Preset::ScaledBoxRight { width } => width.is_finite() && width > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid parameters for preset {self}")))
        }
    }

    /// Exact pointwise value.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Preset::ExpRight => {
                if x >= 0.0 {
                    math::exp(-x)
                } else {
                    0.0
                }
            }
            Preset::ExpLeft => {
                if x <= 0.0 {
                    math::exp(x)
                } else {
                    0.0
                }
            }
            Preset::Gaussian { sigma } => {
                let u = x / sigma;
                math::exp(-0.5 * u * u)
            }
            Preset::Box { a, b } => {
                if x >= a && x <= b {
                    1.0
                } else {
                    0.0
                }
            }
            Preset::Triangle { center, half_width } => (1.0 - (x - center).abs() / half_width).max(0.0),
            Preset::ScaledBoxRight { width } => {
                if (0.0..=width).contains(&x) {
                    1.0 / width
                } else {
                    0.0
                }
            }
        }
    }

    /// Jump discontinuities with their one-sided limits `(x, left, right)`.
    pub fn jumps(&self) -> Vec<(f64, f64, f64)> {
        match *self {
            Preset::ExpRight => alloc::vec![(0.0, 0.0, 1.0)],
            Preset::ExpLeft => alloc::vec![(0.0, 1.0, 0.0)],
            Preset::Gaussian { .. } | Preset::Triangle { .. } => Vec::new(),
            Preset::Box { a, b } => alloc::vec![(a, 0.0, 1.0), (b, 1.0, 0.0)],
            Preset::ScaledBoxRight { width } => {
                alloc::vec![(0.0, 0.0, 1.0 / width), (width, 1.0 / width, 0.0)]
            }
        }
    }

    /// Smallest interval outside which `|p| < tail_cutoff`.
    pub fn tail_support(&self, tail_cutoff: f64) -> (f64, f64) {
        let reach = if tail_cutoff < 1.0 { -math::ln(tail_cutoff) } else { 0.0 };
        match *self {
            Preset::ExpRight => (0.0, reach),
            Preset::ExpLeft => (-reach, 0.0),
            Preset::Gaussian { sigma } => {
                let r = sigma * math::sqrt(2.0 * reach);
                (-r, r)
            }
            Preset::Box { a, b } => (a, b),
            Preset::Triangle { center, half_width } => (center - half_width, center + half_width),
            Preset::ScaledBoxRight { width } => (0.0, width),
        }
    }

    pub fn characteristic_width(&self) -> f64 {
        match *self {
            Preset::ExpRight | Preset::ExpLeft => 1.0,
            Preset::Gaussian { sigma } => sigma,
            Preset::Box { a, b } => b - a,
            Preset::Triangle { half_width, .. } => half_width,
            Preset::ScaledBoxRight { width } => width,
        }
    }

    /// `∫ p` over ℝ.
    pub fn exact_integral(&self) -> f64 {
        match *self {
            Preset::ExpRight | Preset::ExpLeft | Preset::ScaledBoxRight { .. } => 1.0,
            Preset::Gaussian { sigma } => sigma * math::SQRT_2PI,
            Preset::Box { a, b } => b - a,
            Preset::Triangle { half_width, .. } => half_width,
        }
    }

    /// `∫ |p|` over ℝ; every preset is nonnegative.
    pub fn exact_l1(&self) -> f64 {
        self.exact_integral()
    }

    pub fn resolution_warning(&self, grid: &GridSpec) -> Option<ResolutionWarning> {
        let step = grid.step();
        let width = self.characteristic_width();
        (step > 0.5 * width).then_some(ResolutionWarning { step, width })
    }

    /// Samples the preset on `grid`.
    ///
    /// Samples equal `eval` except at a jump discontinuity that falls on a grid
    /// point, where the mean of the one-sided limits is stored; that keeps the
    /// trapezoid rule second-order on piecewise-smooth integrands. Samples
    /// outside the tail support are exactly zero.
    pub fn sample(&self, grid: &GridSpec, tail_cutoff: f64) -> Result<GridFunction> {
        self.validate()?;
        if !(tail_cutoff.is_finite() && tail_cutoff > 0.0) {
            return Err(Error::Config(format!(
                "tail_cutoff must be positive, got {tail_cutoff}"
            )));
        }
        let (a, b) = self.tail_support(tail_cutoff);
        let (a, b) = (a.max(grid.lo()), b.min(grid.hi()));
        if a > b || grid.index_span(a, b).is_none() {
            return Err(Error::Grid(format!(
                "preset {self} has no samples in the window [{}, {}]",
                grid.lo(),
                grid.hi()
            )));
        }
        let snap = 1e-7 * grid.step();
        let jumps = self.jumps();
        GridFunction::from_fn(*grid, (a, b), |x| {
            match jumps.iter().find(|(j, _, _)| (x - j).abs() <= snap) {
                Some(&(_, left, right)) => 0.5 * (left + right),
                None => self.eval(x),
            }
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Preset::ExpRight => write!(f, "exp_right"),
            Preset::ExpLeft => write!(f, "exp_left"),
            Preset::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
            Preset::Box { a, b } => write!(f, "box:{a}:{b}"),
            Preset::Triangle { center, half_width } => write!(f, "triangle:{center}:{half_width}"),
            Preset::ScaledBoxRight { width } => write!(f, "scaled_box_right:{width}"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Parses `kind[:param…]`, e.g. `gaussian`, `gaussian:0.5`, `box:-1:1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default();
        let params = parts
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad parameter {p:?} in preset {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let arity = |want: usize| -> Result<()> {
            if params.is_empty() || params.len() == want {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "preset {kind} takes {want} parameters, got {}",
                    params.len()
                )))
            }
        };
        let p = |i: usize, default: f64| params.get(i).copied().unwrap_or(default);
        let preset = match kind {
            "exp_right" => {
                arity(0)?;
                Preset::ExpRight
            }
            "exp_left" => {
                arity(0)?;
                Preset::ExpLeft
            }
            "gaussian" => {
                arity(1)?;
                Preset::Gaussian { sigma: p(0, 1.0) }
            }
            "box" => {
                arity(2)?;
                Preset::Box {
                    a: p(0, 0.0),
                    b: p(1, 1.0),
                }
            }
            "triangle" => {
                arity(2)?;
                Preset::Triangle {
                    center: p(0, 0.0),
                    half_width: p(1, 1.0),
                }
            }
            "scaled_box_right" => {
                arity(1)?;
                Preset::ScaledBoxRight { width: p(0, 1.0) }
            }
            other => return Err(Error::Config(format!("unknown preset kind {other:?}"))),
        };
        preset.validate()?;
        Ok(preset)
    }
}

impl From<Preset> for String {
    fn from(p: Preset) -> String {
        format!("{p}")
    }
}

impl TryFrom<String> for Preset {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Parses a comma-separated preset list.
pub fn parse_battery(s: &str) -> Result<Vec<Preset>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Battery used by the suite verbs when none is configured.
pub fn default_battery() -> Vec<Preset> {
    alloc::vec![
        Preset::Gaussian { sigma: 1.0 },
        Preset::ExpRight,
        Preset::ExpLeft,
        Preset::Box { a: 0.0, b: 1.0 },
        Preset::Triangle {
            center: 0.0,
            half_width: 1.0
        },
    ]
}

pub(crate) fn names(battery: &[Preset]) -> Vec<String> {
    battery.iter().map(|p| format!("{p}")).collect()
}
