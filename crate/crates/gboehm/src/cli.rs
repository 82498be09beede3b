use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gboehm_core::TransformKind;

use crate::config::{Format, RunConfig, CONFIG_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "gboehm",
    version,
    about = "Sharp convolution, delta sequences, G-Boehmians and their Hartley transform"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Config file (key=value or JSON); read after $GBOEHM_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Function grid as lo:hi:n.
    #[arg(long, global = true, value_name = "LO:HI:N", allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Transform grid as lo:hi:n.
    #[arg(long, global = true, value_name = "LO:HI:N", allow_hyphen_values = true)]
    pub tgrid: Option<String>,
    /// Quotient and equivalence tolerance (relative L¹).
    #[arg(long, global = true)]
    pub tol_quot: Option<f64>,
    /// Convolution-theorem tolerance (relative to ‖f‖₁‖g‖₁).
    #[arg(long, global = true)]
    pub tol_conv: Option<f64>,
    /// Convergence threshold (relative L¹).
    #[arg(long, global = true)]
    pub eps_conv: Option<f64>,
    /// Associativity tolerance (relative L¹).
    #[arg(long, global = true)]
    pub tol_assoc: Option<f64>,
    /// Smallest admissible |C(δₖ)(t)| in the extended transform.
    #[arg(long, global = true)]
    pub cmin: Option<f64>,
    /// Comma-separated preset list for suite verbs.
    #[arg(long, global = true)]
    pub battery: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Prefix length for delta-family checks.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Quotient check window.
    #[arg(long, global = true)]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Hartley,
    Cosine,
    Fourier,
}

impl From<KindArg> for TransformKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Hartley => TransformKind::Hartley,
            KindArg::Cosine => TransformKind::Cosine,
            KindArg::Fourier => TransformKind::Fourier,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OpArg {
    Sharp,
    #[value(alias = "classical")]
    Classic,
}

impl From<OpArg> for gboehm_core::Product {
    fn from(o: OpArg) -> Self {
        match o {
            OpArg::Sharp => gboehm_core::Product::Sharp,
            OpArg::Classic => gboehm_core::Product::Classical,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hartley, cosine or Fourier transform of a preset or function file.
    Transform {
        /// Preset name (e.g. gaussian, box:0:1) or path to a CSV/JSON function.
        function: String,
        #[arg(long, value_enum, default_value = "hartley")]
        kind: KindArg,
    },
    /// Sharp or classical convolution of two functions.
    Convolve {
        f: String,
        g: String,
        #[arg(long, value_enum, default_value = "sharp")]
        op: OpArg,
    },
    /// Unit mass, bounded mass and shrinking support for a delta family.
    DeltaCheck {
        /// triangle_sym, bump_sym, box_right, or a product such as triangle_sym#box_right.
        family: String,
    },
    /// Quotient, equivalence, arithmetic and convergence checks for one preset.
    BoehmianVerify {
        scenario: String,
        #[arg(long, default_value = "triangle_sym")]
        family: String,
    },
    /// The full axiom suite over the preset battery.
    Axioms {
        #[arg(long, value_enum)]
        op: Option<OpArg>,
    },
    /// Extended Hartley transform of an embedded preset.
    ExtHartley {
        scenario: String,
        #[arg(long, default_value = "triangle_sym")]
        family: String,
        /// Where to write the per-t diagnostics; defaults to <out>.sidecar.json.
        #[arg(long, value_name = "PATH")]
        sidecar: Option<PathBuf>,
    },
    /// Tables for the mirror-exponential non-commutativity example.
    #[command(name = "example-3")]
    Example3,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Transform { .. } => "transform",
            Command::Convolve { .. } => "convolve",
            Command::DeltaCheck { .. } => "delta-check",
            Command::BoehmianVerify { .. } => "boehmian-verify",
            Command::Axioms { .. } => "axioms",
            Command::ExtHartley { .. } => "ext-hartley",
            Command::Example3 => "example-3",
        }
    }
}

impl GlobalArgs {
    /// Defaults, then `$GBOEHM_CONFIG`, then `--config`, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty()) {
            cfg.apply_file(PathBuf::from(path).as_path())
                .with_context(|| format!("loading ${CONFIG_ENV}"))?;
        }
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let mut set = |key: &str, v: Option<String>| -> Result<()> {
            match v {
                Some(v) => cfg.set(key, &v),
                None => Ok(()),
            }
        };
        set("grid", self.grid.clone())?;
        set("tgrid", self.tgrid.clone())?;
        set("eps_quot", self.tol_quot.map(|v| v.to_string()))?;
        set("tol_conv", self.tol_conv.map(|v| v.to_string()))?;
        set("eps_conv", self.eps_conv.map(|v| v.to_string()))?;
        set("tol_assoc", self.tol_assoc.map(|v| v.to_string()))?;
        set("c_min", self.cmin.map(|v| v.to_string()))?;
        set("battery", self.battery.clone())?;
        set("nmax", self.nmax.map(|v| v.to_string()))?;
        set("window", self.window.map(|v| v.to_string()))?;
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
