use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{equivalent, padded_quotient, Boehmian, QuotientSettings};
use crate::delta::{approx_identity_error_with, product_family, verify_axioms, DeltaSequence, FamilyKind};
use crate::grid::{linear_combine, GridFunction, GridSpec};
use crate::preset::{default_battery, Preset};
use crate::sharp::{associativity_residuals_with, bilinearity_residual, commutator_norm, example_pair, Product};
use crate::tolerances::Tolerances;
use crate::Result;

/// Inputs of [`axiom_suite`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxiomConfig {
    pub grid: GridSpec,
    pub battery: Vec<Preset>,
    pub tolerances: Tolerances,
    pub op: Product,
    /// Quotient check window for the transitivity chain.
    pub window: usize,
    pub families: Vec<FamilyKind>,
    /// Prefix length for the delta-family checks on `grid`.
    pub delta_nmax: usize,
    /// Finer grid used for the approximate-identity check.
    pub identity_grid: GridSpec,
    /// Largest index of the approximate-identity schedule `8, 16, …`.
    pub identity_horizon: usize,
    /// Required `‖g⋆δₙ − g‖₁ / ‖g‖₁` at the horizon.
    pub identity_rel: f64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::desk_default(),
            battery: default_battery(),
            tolerances: Tolerances::default(),
            op: Product::Sharp,
            window: super::DEFAULT_WINDOW,
            families: FamilyKind::BASIC.to_vec(),
            delta_nmax: 32,
            identity_grid: GridSpec::symmetric(32.0, 16385).expect("valid grid"),
            identity_horizon: 128,
            identity_rel: 0.01,
        }
    }
}

/// One axiom's verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AxiomCheck {
    pub name: String,
    pub statement: String,
    /// Whether the statement held on every case (vacuously if there were none).
    pub holds: bool,
    pub expected_to_hold: bool,
    pub as_expected: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub witness: Option<f64>,
    pub error: Option<String>,
    pub scope: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AxiomReport {
    pub product: Product,
    pub battery: Vec<String>,
    pub families: Vec<String>,
    pub checks: Vec<AxiomCheck>,
    pub all_as_expected: bool,
}

impl AxiomReport {
    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Outcome {
    holds: bool,
    max_residual: f64,
    cases: usize,
    witness: Option<f64>,
}

impl Outcome {
    fn threshold(max_residual: f64, tolerance: f64, cases: usize) -> Self {
        Self {
            holds: cases == 0 || max_residual <= tolerance,
            max_residual,
            cases,
            witness: None,
        }
    }
}

fn finish(
    name: &str,
    statement: &str,
    tolerance: f64,
    expected_to_hold: bool,
    scope: &str,
    outcome: Result<Outcome>,
    extra: impl Fn(&Outcome) -> bool,
) -> AxiomCheck {
    match outcome {
        Ok(o) => {
            let as_expected = if o.cases == 0 {
                true
            } else {
                o.holds == expected_to_hold && extra(&o)
            };
            AxiomCheck {
                name: name.into(),
                statement: statement.into(),
                holds: o.holds,
                expected_to_hold,
                as_expected,
                max_residual: o.max_residual,
                tolerance,
                cases: o.cases,
                witness: o.witness,
                error: None,
                scope: scope.into(),
            }
        }
        Err(e) => AxiomCheck {
            name: name.into(),
            statement: statement.into(),
            holds: false,
            expected_to_hold,
            as_expected: false,
            max_residual: f64::NAN,
            tolerance,
            cases: 0,
            witness: None,
            error: Some(e.to_string()),
            scope: scope.into(),
        },
    }
}

type BatteryCheck<'a> = dyn Fn(&[GridFunction], &[GridFunction]) -> Result<Outcome> + 'a;

/// Index of the delta terms used wherever an element of `S` is drawn from a family.
const SAMPLE_INDEX: usize = 4;

/// Runs every axiom as a residual check over the battery and the delta
/// families. Never fails; problems are recorded in the report.
pub fn axiom_suite(cfg: &AxiomConfig) -> AxiomReport {
    let tol = cfg.tolerances;
    let op = cfg.op;
    let cutoff = tol.tail_cutoff;
    let sampled: Result<Vec<GridFunction>> = cfg.battery.iter().map(|p| p.sample(&cfg.grid, cutoff)).collect();
    let family_terms: Result<Vec<GridFunction>> = cfg
        .families
        .iter()
        .map(|&k| DeltaSequence::make_family(k, cfg.grid)?.term(SAMPLE_INDEX))
        .collect();
    let battery_scope = format!(
        "preset battery ({} functions) on the configured grid",
        cfg.battery.len()
    );
    let battery_and_terms = |f: &BatteryCheck<'_>| -> Result<Outcome> {
        let b = sampled.as_ref().map_err(Clone::clone)?;
        let t = family_terms.as_ref().map_err(Clone::clone)?;
        if b.is_empty() {
            return Ok(Outcome::threshold(0.0, 1.0, 0));
        }
        f(b, t)
    };

    let mut checks = Vec::new();

    checks.push(finish(
        "A1",
        "(g1+g2)⋆s = g1⋆s + g2⋆s",
        tol.tol_assoc,
        true,
        &battery_scope,
        battery_and_terms(&|b, _| {
            let mut worst: f64 = 0.0;
            let mut cases = 0;
            for i in 0..b.len() {
                for j in (i + 1)..b.len() {
                    for s in b {
                        let r = bilinearity_residual(op, 1.0, &b[i], &b[j], s)?;
                        let scale = (b[i].l1_norm() + b[j].l1_norm()) * s.l1_norm();
                        worst = worst.max(Tolerances::relative(r, scale));
                        cases += 1;
                    }
                }
            }
            Ok(Outcome::threshold(worst, tol.tol_assoc, cases))
        }),
        |_| true,
    ));

    checks.push(finish(
        "A2",
        "(c·g)⋆s = c·(g⋆s)",
        tol.tol_assoc,
        true,
        &battery_scope,
        battery_and_terms(&|b, t| {
            let mut worst: f64 = 0.0;
            let mut cases = 0;
            for (i, g) in b.iter().enumerate() {
                let s = &b[(i + 1) % b.len()];
                for s in core::iter::once(s).chain(t.iter()) {
                    for c in [-2.5, 0.5, 3.0] {
                        let lhs = op.apply(&g.scaled(c), s)?;
                        let rhs = op.apply(g, s)?.scaled(c);
                        let r = lhs.sub(&rhs)?.l1_norm();
                        worst = worst.max(Tolerances::relative(r, c.abs() * g.l1_norm() * s.l1_norm()));
                        cases += 1;
                    }
                }
            }
            Ok(Outcome::threshold(worst, tol.tol_assoc, cases))
        }),
        |_| true,
    ));

    // A3 and A4′ share the triple evaluations.
    let triples = battery_and_terms(&|b, t| {
        let n = b.len();
        let mut list: Vec<(&GridFunction, &GridFunction, &GridFunction)> = Vec::new();
        for i in 0..n {
            list.push((&b[i], &b[(i + 1) % n], &b[(i + 2) % n]));
            list.push((&b[i], &b[(i + 2) % n], &b[(i + 1) % n]));
            for (x, y) in t.iter().zip(t.iter().skip(1)) {
                list.push((&b[i], x, y));
                list.push((&b[i], y, x));
            }
        }
        let (mut w3, mut w4): (f64, f64) = (0.0, 0.0);
        for (f, g, h) in &list {
            let (r3, r4) = associativity_residuals_with(op, f, g, h)?;
            let scale = f.l1_norm() * g.l1_norm() * h.l1_norm();
            w3 = w3.max(Tolerances::relative(r3, scale));
            w4 = w4.max(Tolerances::relative(r4, scale));
        }
        Ok(Outcome {
            holds: true,
            max_residual: w3,
            cases: list.len(),
            witness: Some(w4),
        })
    });
    let split = |second: bool| -> Result<Outcome> {
        let o = triples.as_ref().map_err(Clone::clone)?;
        let r = if second {
            o.witness.unwrap_or(0.0)
        } else {
            o.max_residual
        };
        Ok(Outcome::threshold(r, tol.tol_assoc, o.cases))
    };
    let triple_scope = format!("{battery_scope}, cyclic triples plus delta terms of index {SAMPLE_INDEX}");
    checks.push(finish(
        "A3",
        "g⋆(s⋆t) = (g⋆s)⋆t",
        tol.tol_assoc,
        true,
        &triple_scope,
        split(false),
        |_| true,
    ));

    let commutes = op == Product::Classical;
    let a4 = battery_and_terms(&|b, t| {
        let all: Vec<&GridFunction> = b.iter().chain(t.iter()).collect();
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                let r = commutator_norm(op, all[i], all[j])?;
                worst = worst.max(Tolerances::relative(r, all[i].l1_norm() * all[j].l1_norm()));
                cases += 1;
            }
        }
        let (f, g) = example_pair(&cfg.grid, cutoff)?;
        let witness = commutator_norm(op, &f, &g)?;
        Ok(Outcome {
            witness: Some(witness),
            ..Outcome::threshold(worst, tol.tol_assoc, cases)
        })
    });
    checks.push(finish(
        "A4",
        "s⋆t = t⋆s",
        tol.tol_assoc,
        commutes,
        &format!("{battery_scope} plus delta terms; witness is ‖f⋆g − g⋆f‖₁ for the mirror exponential pair"),
        a4,
        |o| commutes || o.witness.is_some_and(|w| (w - 1.0).abs() <= 1e-3),
    ));

    checks.push(finish(
        "A4'",
        "g⋆(s⋆t) = (g⋆t)⋆s",
        tol.tol_assoc,
        true,
        &triple_scope,
        split(true),
        |_| true,
    ));

    checks.push(finish(
        "A_c",
        "gₖ → g implies gₖ⋆s → g⋆s",
        tol.tol_assoc,
        true,
        &format!("{battery_scope}, gₖ = g + h/k for k = 1, 2, 4, …, 64"),
        battery_and_terms(&|b, _| {
            let n = b.len();
            let mut worst: f64 = 0.0;
            let mut cases = 0;
            let mut monotone = true;
            for i in 0..n {
                let (g, h, s) = (&b[i], &b[(i + 1) % n], &b[(i + 2) % n]);
                let base = op.apply(g, s)?;
                let mut prev = f64::INFINITY;
                for k in super::geometric_schedule(64) {
                    let gk = linear_combine(1.0, g, 1.0 / k as f64, h)?;
                    let r = op.apply(&gk, s)?.sub(&base)?.l1_norm();
                    let bound = gk.sub(g)?.l1_norm() * s.l1_norm();
                    // Excess over the Young bound, relative to it.
                    worst = worst.max(Tolerances::relative((r - bound).max(0.0), bound));
                    monotone &= r <= prev * (1.0 + 1e-9);
                    prev = r;
                    cases += 1;
                }
            }
            let mut o = Outcome::threshold(worst, tol.tol_assoc, cases);
            o.holds &= monotone;
            Ok(o)
        }),
        |_| true,
    ));

    let kinds: Vec<FamilyKind> = cfg.families.clone();
    let delta1 = (|| -> Result<Outcome> {
        let fams = kinds
            .iter()
            .map(|&k| DeltaSequence::make_family(k, cfg.grid))
            .collect::<Result<Vec<_>>>()?;
        let n_max = cfg
            .delta_nmax
            .min(DeltaSequence::max_resolved_index(&cfg.grid) / 2)
            .max(1);
        let mut holds = true;
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        let mut record = |d: &DeltaSequence| -> Result<()> {
            let r = verify_axioms(d, n_max)?;
            holds &= r.all_pass;
            for row in &r.rows {
                worst = worst.max((row.mass - 1.0).abs());
            }
            cases += 1;
            Ok(())
        };
        for d in &fams {
            record(d)?;
        }
        for a in &fams {
            for b in &fams {
                record(&product_family(op, a, b)?)?;
            }
        }
        Ok(Outcome {
            holds,
            max_residual: worst,
            cases,
            witness: None,
        })
    })();
    checks.push(finish(
        "Δ1",
        "(sₙ), (tₙ) ∈ Δ implies (sₙ⋆tₙ) ∈ Δ",
        crate::delta::MASS_TOL,
        true,
        &format!(
            "families {:?} and all ordered products, n = 1..={}",
            kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
            cfg.delta_nmax
                .min(DeltaSequence::max_resolved_index(&cfg.grid) / 2)
                .max(1)
        ),
        delta1,
        |_| true,
    ));

    let schedule: Vec<usize> = {
        let mut v = Vec::new();
        let mut n = 8;
        while n <= cfg.identity_horizon {
            v.push(n);
            n *= 2;
        }
        v
    };
    let delta2 = (|| -> Result<Outcome> {
        if cfg.battery.is_empty() {
            return Ok(Outcome::threshold(0.0, 1.0, 0));
        }
        let mut holds = true;
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        for &k in &kinds {
            let d = DeltaSequence::make_family(k, cfg.identity_grid)?;
            for p in &cfg.battery {
                let g = p.sample(&cfg.identity_grid, cutoff)?;
                let norm = g.l1_norm();
                let mut prev = f64::INFINITY;
                let mut last = f64::INFINITY;
                for &n in &schedule {
                    let e = Tolerances::relative(approx_identity_error_with(op, &g, &d, n)?, norm);
                    holds &= e < prev;
                    prev = e;
                    last = e;
                }
                holds &= last < cfg.identity_rel;
                worst = worst.max(last);
                cases += 1;
            }
        }
        Ok(Outcome {
            holds: holds && !schedule.is_empty(),
            max_residual: worst,
            cases,
            witness: None,
        })
    })();
    checks.push(finish(
        "Δ2",
        "g⋆sₙ → g",
        cfg.identity_rel,
        true,
        &format!(
            "preset battery on the identity grid [{}, {}] with {} points, n along {:?}; strictly decreasing and below the tolerance at the last index",
            cfg.identity_grid.lo(),
            cfg.identity_grid.hi(),
            cfg.identity_grid.len(),
            schedule
        ),
        delta2,
        |_| true,
    ));

    let chain = (|| -> Result<Outcome> {
        let b = sampled.as_ref().map_err(Clone::clone)?;
        if b.is_empty() || kinds.is_empty() {
            return Ok(Outcome::threshold(0.0, 1.0, 0));
        }
        let fam = |i: usize| DeltaSequence::make_family(kinds[i % kinds.len()], cfg.grid);
        let (d1, d2, d3) = (fam(0)?, fam(1)?, fam(2)?);
        let settings = QuotientSettings {
            window: cfg.window,
            eps_quot: tol.eps_quot,
            op,
        };
        let mut holds = true;
        let mut worst: f64 = 0.0;
        for f in b {
            let q1 = Boehmian::embed_with(f, &d1, settings)?.repr().clone();
            let q2 = padded_quotient(f, &d1, &d2, settings)?;
            let q3 = Boehmian::embed_with(f, &d3, settings)?.repr().clone();
            let e12 = equivalent(&q1, &q2, cfg.window, tol.eps_quot)?;
            let e23 = equivalent(&q2, &q3, cfg.window, tol.eps_quot)?;
            let e13 = equivalent(&q1, &q3, cfg.window, 3.0 * tol.eps_quot)?;
            holds &= e12.equivalent && e23.equivalent && e13.equivalent;
            worst = worst.max(e13.max_residual / tol.eps_quot);
        }
        Ok(Outcome {
            holds,
            max_residual: worst,
            cases: b.len(),
            witness: None,
        })
    })();
    checks.push(finish(
        "transitivity",
        "q1 ∼ q2 and q2 ∼ q3 imply q1 ∼ q3 within 3·eps_quot",
        3.0,
        true,
        &format!(
            "per battery function: embed, padded quotient and a second family, m, n ≤ {}; residual in units of eps_quot",
            cfg.window
        ),
        chain,
        |_| true,
    ));

    let all_as_expected = checks.iter().all(|c| c.as_expected);
    AxiomReport {
        product: op,
        battery: crate::preset::names(&cfg.battery),
        families: kinds.iter().map(|k| k.name().to_string()).collect(),
        checks,
        all_as_expected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn empty_battery_is_vacuous() {
        let cfg = AxiomConfig {
            battery: vec![],
            ..Default::default()
        };
        let r = axiom_suite(&cfg);
        assert!(r.all_as_expected, "{r:#?}");
        assert_eq!(r.check("A1").unwrap().cases, 0);
        assert_eq!(r.check("A4").unwrap().cases, 0);
    }
}
