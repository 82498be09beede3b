use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use gboehm_core::boehmian::{
    axiom_suite, delta_convergence_check, equivalent, padded_quotient, ConvergenceReport, QuotientSettings,
};
use gboehm_core::delta::{sharp_product_family, verify_axioms};
use gboehm_core::ext_hartley::ext_hartley;
use gboehm_core::grid::linear_combine;
use gboehm_core::sharp::{commutator_norm, example_pair};
use gboehm_core::transforms::{hartley, transform};
use gboehm_core::{Boehmian, DeltaSequence, FamilyKind, GridFunction, Preset, Product};
use serde::Serialize;

use crate::cli::{Cli, Command};
use crate::config::{Format, RunConfig};
use crate::io;

/// Contract on the example tables: `max |2(f#g) − closed form|`.
pub const EXAMPLE_TOL: f64 = 1e-4;
/// Half-width of the window the example tables cover.
pub const EXAMPLE_RANGE: f64 = 20.0;
/// Contract on `sup_t |𝓗(embed(f, d)) − 𝓗(f)|`.
pub const CONSISTENCY_TOL: f64 = 1e-4;

/// What a successful run found. Any entry in `violations` means exit status 1.
#[derive(Debug, Default)]
pub struct Outcome {
    pub violations: Vec<String>,
}

impl Outcome {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool: &'static str,
    version: &'static str,
    verb: &'a str,
    config: &'a RunConfig,
    report: T,
}

fn envelope<T: Serialize>(verb: &str, cfg: &RunConfig, report: T) -> Result<String> {
    let e = Envelope {
        tool: "gboehm",
        version: env!("CARGO_PKG_VERSION"),
        verb,
        config: cfg,
        report,
    };
    Ok(serde_json::to_string_pretty(&e)? + "\n")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.global.resolve()?;
    let verb = cli.command.name();
    log::debug!("{verb} with {cfg:?}");
    match &cli.command {
        Command::Transform { function, kind } => {
            let f = resolve_function(function, &cfg)?;
            let table = transform((*kind).into(), &f, &cfg.t_grid).with_source(function.clone());
            io::emit(cfg.out.as_deref(), &io::table_to_string(&table, cfg.format)?)?;
            Ok(Outcome::default())
        }
        Command::Convolve { f, g, op } => {
            let (ff, gg) = (resolve_function(f, &cfg)?, resolve_function(g, &cfg)?);
            let product = Product::from(*op).apply(&ff, &gg)?;
            io::emit(cfg.out.as_deref(), &io::function_to_string(&product, cfg.format)?)?;
            Ok(Outcome::default())
        }
        Command::DeltaCheck { family } => delta_check(verb, family, &cfg),
        Command::BoehmianVerify { scenario, family } => boehmian_verify(verb, scenario, family, &cfg),
        Command::Axioms { op } => {
            let mut cfg = cfg;
            if let Some(op) = op {
                cfg.op = (*op).into();
            }
            report_format(&cfg);
            let report = axiom_suite(&cfg.axiom_config());
            let mut outcome = Outcome::default();
            for c in &report.checks {
                outcome.require(c.as_expected, || match &c.error {
                    Some(e) => format!("{}: {e}", c.name),
                    None => format!(
                        "{}: holds={} (expected {}), residual {:e}, tolerance {:e}",
                        c.name, c.holds, c.expected_to_hold, c.max_residual, c.tolerance
                    ),
                });
            }
            io::emit(cfg.out.as_deref(), &envelope(verb, &cfg, &report)?)?;
            Ok(outcome)
        }
        Command::ExtHartley {
            scenario,
            family,
            sidecar,
        } => ext_hartley_verb(verb, scenario, family, sidecar.as_deref(), &cfg),
        Command::Example3 => example3(verb, &cfg),
    }
}

fn report_format(cfg: &RunConfig) {
    if cfg.format == Format::Csv && cfg.out.is_some() {
        log::info!("reports are always written as JSON");
    }
}

/// A preset name, or a path to a function file.
pub fn resolve_function(arg: &str, cfg: &RunConfig) -> Result<GridFunction> {
    let path = Path::new(arg);
    if path.is_file() {
        return io::read_function(path);
    }
    let preset: Preset = arg
        .parse()
        .map_err(|e| anyhow!("{arg:?} is neither a known preset nor a readable file ({e})"))?;
    if let Some(w) = preset.resolution_warning(&cfg.grid) {
        log::warn!("{arg}: grid step {} is coarse for feature width {}", w.step, w.width);
    }
    Ok(preset.sample(&cfg.grid, cfg.tolerances.tail_cutoff)?)
}

/// A built-in family, or a product `a#b` of two.
pub fn resolve_family(name: &str, cfg: &RunConfig) -> Result<DeltaSequence> {
    let build = |s: &str| -> Result<DeltaSequence> {
        let kind: FamilyKind = s.parse()?;
        Ok(DeltaSequence::make_family(kind, cfg.grid)?)
    };
    match name.split_once('#') {
        Some((a, b)) => Ok(sharp_product_family(&build(a)?, &build(b)?)?),
        None => build(name),
    }
}

fn delta_check(verb: &str, family: &str, cfg: &RunConfig) -> Result<Outcome> {
    report_format(cfg);
    let d = resolve_family(family, cfg)?;
    let report = verify_axioms(&d, cfg.nmax)?;
    let mut outcome = Outcome::default();
    outcome.require(report.p1, || format!("{family}: unit mass fails"));
    outcome.require(report.p2, || format!("{family}: mass bound fails"));
    outcome.require(report.p3, || format!("{family}: support does not shrink as declared"));
    io::emit(cfg.out.as_deref(), &envelope(verb, cfg, &report)?)?;
    Ok(outcome)
}

#[derive(Serialize)]
struct Item {
    name: String,
    pass: bool,
    residual: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    scenario: String,
    family: String,
    window: usize,
    items: Vec<Item>,
    convergence: ConvergenceReport,
    all_pass: bool,
    scope: String,
}

fn boehmian_verify(verb: &str, scenario: &str, family: &str, cfg: &RunConfig) -> Result<Outcome> {
    report_format(cfg);
    let f = resolve_function(scenario, cfg)?;
    let d = resolve_family(family, cfg)?;
    let eps = cfg.tolerances.eps_quot;
    let settings = QuotientSettings {
        window: cfg.window,
        eps_quot: eps,
        op: cfg.op,
    };
    let b = Boehmian::embed_with(&f, &d, settings).context("embedding")?;
    let zero = Boehmian::zero(&d, settings)?;
    let mut items = Vec::new();
    let mut push = |name: String, residual: f64, tolerance: f64| {
        items.push(Item {
            name,
            pass: residual <= tolerance,
            residual,
            tolerance,
        });
    };

    push("quotient".into(), b.repr().max_residual(), eps);
    for other in FamilyKind::BASIC {
        if other.name() == family {
            continue;
        }
        let d2 = DeltaSequence::make_family(other, cfg.grid)?;
        let e = b.equivalent_to(&Boehmian::embed_with(&f, &d2, settings)?)?;
        push(format!("equivalent_via_{other}"), e.max_residual, eps);
    }
    let psi_kind = if family == FamilyKind::BoxRight.name() {
        FamilyKind::TriangleSym
    } else {
        FamilyKind::BoxRight
    };
    let psi = DeltaSequence::make_family(psi_kind, cfg.grid)?;
    let padded = padded_quotient(&f, &d, &psi, settings)?;
    push(
        format!("padded_by_{psi_kind}"),
        equivalent(b.repr(), &padded, cfg.window, eps)?.max_residual,
        eps,
    );
    push("add_zero".into(), b.add(&zero)?.equivalent_to(&b)?.max_residual, eps);
    push("sub_self".into(), b.sub(&b)?.equivalent_to(&zero)?.max_residual, eps);
    push("scale_reverify".into(), b.scale(-2.5)?.reverify()?, eps);
    let t = DeltaSequence::make_family(FamilyKind::BoxRight, cfg.grid)?.term(10)?;
    let direct = Boehmian::embed_with(&cfg.op.apply(&f, &t)?, &d, settings)?;
    push(
        "star_extend".into(),
        b.star_extend(&t)?.equivalent_to(&direct)?.max_residual,
        eps,
    );

    // Xₘ = embed(f + g/m) with ‖g‖₁ = 5% of ‖f‖₁.
    let bump = Preset::Triangle {
        center: 1.0,
        half_width: 0.1,
    }
    .sample(&cfg.grid, cfg.tolerances.tail_cutoff)?;
    let norm = f.l1_norm();
    let g = bump.scaled(0.05 * if norm > 1e-12 { norm } else { 1.0 } / bump.l1_norm());
    let seq = |m: usize| Boehmian::embed_with(&linear_combine(1.0, &f, 1.0 / m as f64, &g)?, &d, settings);
    let convergence = delta_convergence_check(&seq, &b, cfg.window, cfg.horizon, cfg.tolerances.eps_conv)?;

    let mut outcome = Outcome::default();
    for it in &items {
        outcome.require(it.pass, || {
            format!("{}: residual {:e} > {:e}", it.name, it.residual, it.tolerance)
        });
    }
    outcome.require(convergence.pass, || "delta convergence of f + g/m fails".into());
    let report = VerifyReport {
        scenario: scenario.into(),
        family: d.label().into(),
        window: cfg.window,
        all_pass: outcome.violations.is_empty(),
        items,
        convergence,
        scope: format!("finite prefix: indices up to {}", cfg.window),
    };
    io::emit(cfg.out.as_deref(), &envelope(verb, cfg, &report)?)?;
    Ok(outcome)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    scenario: &'a str,
    family: &'a str,
    window: usize,
    c_min: f64,
    chosen_k: &'a [usize],
    raw: &'a [f64],
    gap: &'a [f64],
    gap_bound: &'a [f64],
    gap_bound_ok: bool,
    lipschitz_ok: bool,
    consistency_residual: f64,
    consistency_tolerance: f64,
}

fn sidecar_path(explicit: Option<&Path>, out: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| out.map(|o| o.with_extension("sidecar.json")))
}

fn ext_hartley_verb(
    verb: &str,
    scenario: &str,
    family: &str,
    sidecar: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let f = resolve_function(scenario, cfg)?;
    let d = resolve_family(family, cfg)?;
    let settings = QuotientSettings {
        window: cfg.window,
        eps_quot: cfg.tolerances.eps_quot,
        op: cfg.op,
    };
    let b = Boehmian::embed_with(&f, &d, settings)?;
    let ext = ext_hartley(&b, &cfg.t_grid, cfg.tolerances.c_min)?;
    let consistency = ext.table.sup_distance(&hartley(&f, &cfg.t_grid))?;
    let table = ext
        .table
        .clone()
        .with_source(format!("ext_hartley(embed({scenario}, {}))", d.label()));
    io::emit(cfg.out.as_deref(), &io::table_to_string(&table, cfg.format)?)?;

    match sidecar_path(sidecar, cfg.out.as_deref()) {
        Some(path) => {
            let doc = Sidecar {
                scenario,
                family: d.label(),
                window: ext.window,
                c_min: ext.c_min,
                chosen_k: &ext.chosen_k,
                raw: &ext.raw,
                gap: &ext.gap,
                gap_bound: &ext.gap_bound,
                gap_bound_ok: ext.gap_bound_ok,
                lipschitz_ok: ext.lipschitz_ok,
                consistency_residual: consistency,
                consistency_tolerance: CONSISTENCY_TOL,
            };
            io::write_atomic(&path, envelope(verb, cfg, &doc)?.as_bytes())?;
            log::info!("wrote {}", path.display());
        }
        None => log::info!("no --out or --sidecar given; per-t diagnostics not written"),
    }

    let mut outcome = Outcome::default();
    outcome.require(consistency <= CONSISTENCY_TOL, || {
        format!("consistency residual {consistency:e} > {CONSISTENCY_TOL:e}")
    });
    outcome.require(ext.gap_bound_ok, || {
        "stable value and raw limit violate the gap bound".into()
    });
    outcome.require(ext.lipschitz_ok, || "adjacent values exceed the Lipschitz bound".into());
    Ok(outcome)
}

/// `2·(f#g)` for the mirror exponentials, as printed (unhalved convention).
pub fn closed_form_2fg(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp() * (x + 0.5)
    } else {
        x.exp() / 2.0
    }
}

/// `2·(g#f)` for the mirror exponentials.
pub fn closed_form_2gf(x: f64) -> f64 {
    if x > 0.0 {
        0.5 * (-x).exp()
    } else {
        x.exp() * (-x + 0.5)
    }
}

#[derive(Serialize, Default)]
struct Example3 {
    x: Vec<f64>,
    numeric_2fg: Vec<f64>,
    closed_form_fg: Vec<f64>,
    abs_diff_fg: Vec<f64>,
    numeric_2gf: Vec<f64>,
    closed_form_gf: Vec<f64>,
    abs_diff_gf: Vec<f64>,
    max_abs_diff_fg: f64,
    max_abs_diff_gf: f64,
    /// `‖f#g − g#f‖₁`.
    witness: f64,
}

fn example3(verb: &str, cfg: &RunConfig) -> Result<Outcome> {
    let (f, g) = example_pair(&cfg.grid, cfg.tolerances.tail_cutoff)?;
    let fg = Product::Sharp.apply(&f, &g)?;
    let gf = Product::Sharp.apply(&g, &f)?;
    let mut ex = Example3 {
        witness: commutator_norm(Product::Sharp, &f, &g)?,
        ..Default::default()
    };
    for (i, x) in cfg.grid.points().enumerate() {
        if x.abs() > EXAMPLE_RANGE {
            continue;
        }
        let (a, b) = (2.0 * fg.samples()[i], 2.0 * gf.samples()[i]);
        let (ca, cb) = (closed_form_2fg(x), closed_form_2gf(x));
        ex.x.push(x);
        ex.numeric_2fg.push(a);
        ex.closed_form_fg.push(ca);
        ex.abs_diff_fg.push((a - ca).abs());
        ex.numeric_2gf.push(b);
        ex.closed_form_gf.push(cb);
        ex.abs_diff_gf.push((b - cb).abs());
        ex.max_abs_diff_fg = ex.max_abs_diff_fg.max((a - ca).abs());
        ex.max_abs_diff_gf = ex.max_abs_diff_gf.max((b - cb).abs());
    }
    log::info!(
        "max |diff| f#g {:e}, g#f {:e}, witness {}",
        ex.max_abs_diff_fg,
        ex.max_abs_diff_gf,
        ex.witness
    );
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("x,numeric_2fg,closed_form_fg,|diff|,numeric_2gf,closed_form_gf,|diff_gf|\n");
            for i in 0..ex.x.len() {
                writeln!(
                    s,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    ex.x[i],
                    ex.numeric_2fg[i],
                    ex.closed_form_fg[i],
                    ex.abs_diff_fg[i],
                    ex.numeric_2gf[i],
                    ex.closed_form_gf[i],
                    ex.abs_diff_gf[i]
                )?;
            }
            s
        }
        Format::Json => envelope(verb, cfg, &ex)?,
    };
    io::emit(cfg.out.as_deref(), &text)?;
    let mut outcome = Outcome::default();
    outcome.require(ex.max_abs_diff_fg <= EXAMPLE_TOL, || {
        format!("f#g differs from its closed form by {:e}", ex.max_abs_diff_fg)
    });
    outcome.require(ex.max_abs_diff_gf <= EXAMPLE_TOL, || {
        format!("g#f differs from its closed form by {:e}", ex.max_abs_diff_gf)
    });
    Ok(outcome)
}
