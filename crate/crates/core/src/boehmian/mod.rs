//! Quotients `fₙ/δₙ`, their equivalence, and Boehmian arithmetic.
//!
//! Sequences are generators. Only the first `window` indices are verified
//! (and cached); every verdict is a statement about that finite prefix.

mod axioms;
mod convergence;

pub use axioms::{axiom_suite, AxiomCheck, AxiomConfig, AxiomReport};
pub use convergence::{
    big_delta_convergence_check, delta_convergence_check, geometric_schedule, ConvergenceReport, ConvergenceRow,
};

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::delta::{product_family, DeltaSequence};
use crate::grid::{linear_combine, GridFunction, GridSpec};
use crate::sharp::Product;
use crate::tolerances::Tolerances;
use crate::{Error, Result};

/// Default number of verified indices.
pub const DEFAULT_WINDOW: usize = 8;

pub type Numerator = Arc<dyn Fn(usize) -> Result<GridFunction> + Send + Sync>;

/// Parameters shared by every quotient built from another.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuotientSettings {
    pub window: usize,
    pub eps_quot: f64,
    pub op: Product,
}

impl Default for QuotientSettings {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            eps_quot: Tolerances::default().eps_quot,
            op: Product::Sharp,
        }
    }
}

/// A verified pair `((fₙ), (δₙ))` with `fₙ⋆δₘ = fₘ⋆δₙ` for `m, n ≤ window`.
#[derive(Clone)]
pub struct Quotient {
    inner: Arc<Inner>,
}

struct Inner {
    numerator: Numerator,
    denominator: DeltaSequence,
    settings: QuotientSettings,
    terms: Vec<GridFunction>,
    deltas: Vec<GridFunction>,
    max_residual: f64,
}

impl fmt::Debug for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quotient")
            .field("denominator", &self.inner.denominator.label())
            .field("settings", &self.inner.settings)
            .field("max_residual", &self.inner.max_residual)
            .finish_non_exhaustive()
    }
}

/// `‖a⋆b − c⋆d‖₁` relative to `max(‖a‖‖b‖, ‖c‖‖d‖)`.
fn cross_residual(op: Product, a: &GridFunction, b: &GridFunction, c: &GridFunction, d: &GridFunction) -> Result<f64> {
    let diff = op.apply(a, b)?.sub(&op.apply(c, d)?)?.l1_norm();
    let scale = (a.l1_norm() * b.l1_norm()).max(c.l1_norm() * d.l1_norm());
    Ok(Tolerances::relative(diff, scale))
}

/// Builds and verifies a quotient. Fails with [`Error::QuotientViolation`]
/// naming the first `(m, n)` whose residual exceeds `eps_quot`.
pub fn make_quotient(
    numerator: impl Fn(usize) -> Result<GridFunction> + Send + Sync + 'static,
    denominator: DeltaSequence,
    settings: QuotientSettings,
) -> Result<Quotient> {
    make_quotient_arc(Arc::new(numerator), denominator, settings)
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn make_quotient_arc(numerator: Numerator, denominator: DeltaSequence, settings: QuotientSettings) -> Result<Quotient> {
    if settings.window == 0 {
        return Err(Error::Precondition("check window must be at least 1".into()));
    }
    if !(settings.eps_quot > 0.0) {
        return Err(Error::Config(format!(
            "eps_quot must be positive, got {}",
            settings.eps_quot
        )));
    }
    let n_max = settings.window;
    let mut terms = Vec::with_capacity(n_max);
    let mut deltas = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let f = numerator(n)?;
        if f.grid() != denominator.grid() {
            return Err(Error::GridMismatch);
        }
        terms.push(f);
        deltas.push(denominator.term(n)?);
    }
    let mut max_residual: f64 = 0.0;
    for m in 1..=n_max {
        for n in (m + 1)..=n_max {
            let r = cross_residual(
                settings.op,
                &terms[n - 1],
                &deltas[m - 1],
                &terms[m - 1],
                &deltas[n - 1],
            )?;
            if !(r <= settings.eps_quot) {
                return Err(Error::QuotientViolation {
                    m,
                    n,
                    residual: r,
                    tolerance: settings.eps_quot,
                });
            }
            max_residual = max_residual.max(r);
        }
    }
    Ok(Quotient {
        inner: Arc::new(Inner {
            numerator,
            denominator,
            settings,
            terms,
            deltas,
            max_residual,
        }),
    })
}

impl Quotient {
    /// `fₙ`; cached inside the window, generated beyond it.
    pub fn term(&self, n: usize) -> Result<GridFunction> {
        match n {
            0 => Err(Error::Precondition("quotient sequences are indexed from 1".into())),
            n if n <= self.inner.terms.len() => Ok(self.inner.terms[n - 1].clone()),
            n => (self.inner.numerator)(n),
        }
    }

    /// `δₙ`.
    pub fn delta(&self, n: usize) -> Result<GridFunction> {
        match n {
            0 => Err(Error::Precondition("quotient sequences are indexed from 1".into())),
            n if n <= self.inner.deltas.len() => Ok(self.inner.deltas[n - 1].clone()),
            n => self.inner.denominator.term(n),
        }
    }

    pub fn denominator(&self) -> &DeltaSequence {
        &self.inner.denominator
    }

    pub fn settings(&self) -> QuotientSettings {
        self.inner.settings
    }

    pub fn window(&self) -> usize {
        self.inner.settings.window
    }

    pub fn op(&self) -> Product {
        self.inner.settings.op
    }

    pub fn grid(&self) -> &GridSpec {
        self.inner.denominator.grid()
    }

    /// Largest cross-condition residual found during verification.
    pub fn max_residual(&self) -> f64 {
        self.inner.max_residual
    }

    fn numerator(&self) -> Numerator {
        let q = self.clone();
        Arc::new(move |n| q.term(n))
    }
}

/// Result of [`equivalent`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Equivalence {
    pub equivalent: bool,
    pub max_residual: f64,
    pub worst: (usize, usize),
    pub tolerance: f64,
    pub window: usize,
}

/// Checks `gₙ⋆tₘ = hₘ⋆sₙ` for all `m, n ≤ window`, where `q1 = gₙ/sₙ` and
/// `q2 = hₙ/tₙ`. The residual is symmetric in the two arguments.
pub fn equivalent(q1: &Quotient, q2: &Quotient, window: usize, eps_quot: f64) -> Result<Equivalence> {
    if q1.grid() != q2.grid() {
        return Err(Error::GridMismatch);
    }
    if q1.op() != q2.op() {
        return Err(Error::Precondition("quotients use different products".into()));
    }
    let op = q1.op();
    let mut max_residual: f64 = 0.0;
    let mut worst = (1, 1);
    for m in 1..=window {
        let (hm, tm) = (q2.term(m)?, q2.delta(m)?);
        for n in 1..=window {
            let (gn, sn) = (q1.term(n)?, q1.delta(n)?);
            let r = cross_residual(op, &gn, &tm, &hm, &sn)?;
            if r > max_residual || r.is_nan() {
                max_residual = r;
                worst = (m, n);
            }
        }
    }
    Ok(Equivalence {
        equivalent: max_residual <= eps_quot,
        max_residual,
        worst,
        tolerance: eps_quot,
        window,
    })
}

/// A handle on the equivalence class of a quotient.
#[derive(Debug, Clone)]
pub struct Boehmian {
    repr: Quotient,
    label: String,
}

impl Boehmian {
    pub fn from_quotient(repr: Quotient, label: impl Into<String>) -> Self {
        Self {
            repr,
            label: label.into(),
        }
    }

    /// `[(f⋆δₙ)/(δₙ)]`.
    pub fn embed(f: &GridFunction, d: &DeltaSequence) -> Result<Self> {
        Self::embed_with(f, d, QuotientSettings::default())
    }

    pub fn embed_with(f: &GridFunction, d: &DeltaSequence, settings: QuotientSettings) -> Result<Self> {
        if f.grid() != d.grid() {
            return Err(Error::GridMismatch);
        }
        let (f0, d0) = (f.clone(), d.clone());
        let op = settings.op;
        let q = make_quotient(move |n| op.apply(&f0, &d0.term(n)?), d.clone(), settings)?;
        Ok(Self::from_quotient(q, format!("embed(·, {})", d.label())))
    }

    /// `[0/δₙ]`.
    pub fn zero(d: &DeltaSequence, settings: QuotientSettings) -> Result<Self> {
        let grid = *d.grid();
        let q = make_quotient(move |_| Ok(GridFunction::zeros(grid)), d.clone(), settings)?;
        Ok(Self::from_quotient(q, "0"))
    }

    pub fn repr(&self) -> &Quotient {
        &self.repr
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `[(fₙ⋆tₙ + gₙ⋆sₙ)/(sₙ⋆tₙ)]` for `self = [fₙ/sₙ]`, `other = [gₙ/tₙ]`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self.repr.clone(), other.repr.clone());
        if a.grid() != b.grid() {
            return Err(Error::GridMismatch);
        }
        if a.op() != b.op() {
            return Err(Error::Precondition("Boehmians use different products".into()));
        }
        let op = a.op();
        let denominator = product_family(op, a.denominator(), b.denominator())?;
        let settings = QuotientSettings {
            window: a.window().min(b.window()),
            ..a.settings()
        };
        let q = make_quotient(
            move |n| {
                let left = op.apply(&a.term(n)?, &b.delta(n)?)?;
                let right = op.apply(&b.term(n)?, &a.delta(n)?)?;
                linear_combine(1.0, &left, 1.0, &right)
            },
            denominator,
            settings,
        )?;
        Ok(Self::from_quotient(q, format!("({} + {})", self.label, other.label)))
    }

    /// `[c·fₙ/δₙ]`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidFunction(format!("scale factor {c} is not finite")));
        }
        let a = self.repr.clone();
        let q = make_quotient(
            move |n| Ok(a.term(n)?.scaled(c)),
            self.repr.denominator().clone(),
            self.repr.settings(),
        )?;
        Ok(Self::from_quotient(q, format!("{c}·{}", self.label)))
    }

    /// `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0)?)
    }

    /// `[(fₙ⋆t)/δₙ]`.
    pub fn star_extend(&self, t: &GridFunction) -> Result<Self> {
        if t.grid() != self.repr.grid() {
            return Err(Error::GridMismatch);
        }
        let (a, t0) = (self.repr.clone(), t.clone());
        let op = a.op();
        let q = make_quotient(
            move |n| op.apply(&a.term(n)?, &t0),
            self.repr.denominator().clone(),
            self.repr.settings(),
        )?;
        Ok(Self::from_quotient(q, format!("{}{}t", self.label, op.symbol())))
    }

    /// `X⋆δₙ` for the representative's own denominator, which is `fₙ`.
    pub fn act_on_own_delta(&self, n: usize) -> Result<GridFunction> {
        self.repr.term(n)
    }

    pub fn equivalent_to(&self, other: &Self) -> Result<Equivalence> {
        let window = self.repr.window().min(other.repr.window());
        equivalent(&self.repr, &other.repr, window, self.repr.settings().eps_quot)
    }

    /// Re-runs the cross-condition check on the cached window.
    pub fn reverify(&self) -> Result<f64> {
        let q = make_quotient_arc(
            self.repr.numerator(),
            self.repr.denominator().clone(),
            self.repr.settings(),
        )?;
        Ok(q.max_residual())
    }
}

/// The quotient `(f⋆δₙ⋆ψₙ)/(δₙ⋆ψₙ)`, equivalent to `embed(f, d)`.
pub fn padded_quotient(
    f: &GridFunction,
    d: &DeltaSequence,
    psi: &DeltaSequence,
    settings: QuotientSettings,
) -> Result<Quotient> {
    let op = settings.op;
    let denominator = product_family(op, d, psi)?;
    let (f0, d0, p0) = (f.clone(), d.clone(), psi.clone());
    make_quotient(
        move |n| op.apply(&op.apply(&f0, &d0.term(n)?)?, &p0.term(n)?),
        denominator,
        settings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::FamilyKind;
    use crate::preset::Preset;

    fn setup() -> (GridSpec, DeltaSequence, GridFunction) {
        let grid = GridSpec::desk_default();
        let d = DeltaSequence::make_family(FamilyKind::TriangleSym, grid).unwrap();
        let f = Preset::Gaussian { sigma: 1.0 }.sample(&grid, 1e-12).unwrap();
        (grid, d, f)
    }

    #[test]
    fn embedding_is_a_quotient() {
        let (_, d, f) = setup();
        let b = Boehmian::embed(&f, &d).unwrap();
        assert!(b.repr().max_residual() <= 1e-12, "{}", b.repr().max_residual());
    }

    #[test]
    fn constant_numerator_is_rejected() {
        let (_, d, _) = setup();
        let grid = *d.grid();
        let g = Preset::Box { a: 0.0, b: 1.0 }.sample(&grid, 1e-12).unwrap();
        let err = make_quotient(move |_| Ok(g.clone()), d, QuotientSettings::default()).unwrap_err();
        assert!(matches!(err, Error::QuotientViolation { m: 1, n: 2, .. }), "{err:?}");
    }

    #[test]
    fn zero_quotient_has_zero_residual() {
        let (_, d, _) = setup();
        let z = Boehmian::zero(&d, QuotientSettings::default()).unwrap();
        assert_eq!(z.repr().max_residual(), 0.0);
    }

    #[test]
    fn equivalence_is_symmetric_and_reflexive() {
        let (grid, d, f) = setup();
        let d2 = DeltaSequence::make_family(FamilyKind::BoxRight, grid).unwrap();
        let a = Boehmian::embed(&f, &d).unwrap();
        let b = Boehmian::embed(&f, &d2).unwrap();
        let ab = a.equivalent_to(&b).unwrap();
        let ba = b.equivalent_to(&a).unwrap();
        assert_eq!(ab.max_residual, ba.max_residual);
        assert!(ab.equivalent);
        assert!(a.equivalent_to(&a).unwrap().equivalent);
    }

    #[test]
    fn sum_with_negative_is_zero() {
        let (_, d, f) = setup();
        let a = Boehmian::embed(&f, &d).unwrap();
        let z = Boehmian::zero(&d, QuotientSettings::default()).unwrap();
        let diff = a.sub(&a).unwrap();
        assert!(diff.equivalent_to(&z).unwrap().equivalent);
        assert!(a.add(&z).unwrap().equivalent_to(&a).unwrap().equivalent);
    }

    #[test]
    fn window_zero_rejected() {
        let (_, d, f) = setup();
        let s = QuotientSettings {
            window: 0,
            ..Default::default()
        };
        assert!(Boehmian::embed_with(&f, &d, s).is_err());
    }
}
