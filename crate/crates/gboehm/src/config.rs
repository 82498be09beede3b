//! Run configuration: defaults, then a config file (key=value or JSON), then
//! command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use gboehm_core::boehmian::AxiomConfig;
use gboehm_core::preset::{default_battery, parse_battery};
use gboehm_core::{FamilyKind, GridSpec, Preset, Product, Tolerances};
use serde::Serialize;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "GBOEHM_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?} (expected csv or json)"),
        }
    }
}

/// Everything a verb needs besides its positional arguments.
///
/// The output path is deliberately left out of the serialized snapshot so
/// that reports written to different files stay byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub t_grid: GridSpec,
    pub tolerances: Tolerances,
    pub battery: Vec<Preset>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Prefix length for delta-family checks.
    pub nmax: usize,
    /// Quotient check window.
    pub window: usize,
    /// Convergence horizon.
    pub horizon: usize,
    pub op: Product,
    pub identity_grid: GridSpec,
    pub identity_horizon: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let axioms = AxiomConfig::default();
        Self {
            grid: GridSpec::desk_default(),
            t_grid: GridSpec::t_default(),
            tolerances: Tolerances::default(),
            battery: default_battery(),
            format: Format::Csv,
            out: None,
            nmax: axioms.delta_nmax,
            window: axioms.window,
            horizon: 64,
            op: Product::Sharp,
            identity_grid: axioms.identity_grid,
            identity_horizon: axioms.identity_horizon,
        }
    }
}

/// Parses `lo:hi:n`.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        bail!("grid must look like lo:hi:n, got {s:?}");
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad grid lower bound in {s:?}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad grid upper bound in {s:?}"))?;
    let n: usize = n.trim().parse().with_context(|| format!("bad grid size in {s:?}"))?;
    Ok(GridSpec::new(lo, hi, n)?)
}

pub fn parse_op(s: &str) -> Result<Product> {
    match s.trim() {
        "sharp" | "#" => Ok(Product::Sharp),
        "classic" | "classical" | "*" => Ok(Product::Classical),
        other => bail!("unknown product {other:?} (expected sharp or classic)"),
    }
}

fn positive(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("{key}: not a number: {value:?}"))?;
    if !(v.is_finite() && v > 0.0) {
        bail!("{key} must be positive and finite, got {v}");
    }
    Ok(v)
}

fn count(key: &str, value: &str) -> Result<usize> {
    let v: usize = value
        .trim()
        .parse()
        .with_context(|| format!("{key}: not a positive integer: {value:?}"))?;
    if v == 0 {
        bail!("{key} must be at least 1");
    }
    Ok(v)
}

impl RunConfig {
    /// Sets one option by its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let t = &mut self.tolerances;
        match key.trim().replace('-', "_").as_str() {
            "grid" => self.grid = parse_grid(value)?,
            "tgrid" | "t_grid" => self.t_grid = parse_grid(value)?,
            "identity_grid" => self.identity_grid = parse_grid(value)?,
            "eps_quot" | "tol_quot" => t.eps_quot = positive(key, value)?,
            "eps_conv" => t.eps_conv = positive(key, value)?,
            "tol_conv" => t.tol_conv = positive(key, value)?,
            "tol_assoc" => t.tol_assoc = positive(key, value)?,
            "c_min" | "cmin" => t.c_min = positive(key, value)?,
            "tail_cutoff" => t.tail_cutoff = positive(key, value)?,
            "battery" => self.battery = parse_battery(value)?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "nmax" => self.nmax = count(key, value)?,
            "window" => self.window = count(key, value)?,
            "horizon" => self.horizon = count(key, value)?,
            "identity_horizon" => self.identity_horizon = count(key, value)?,
            "op" => self.op = parse_op(value)?,
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    /// Applies a config file. JSON is recognised by a leading `{`; anything
    /// else is read as `key = value` lines with `#` comments.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        self.apply_text(&text)
            .with_context(|| format!("in config {}", path.display()))
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        if text.trim_start().starts_with('{') {
            let value: serde_json::Value = serde_json::from_str(text)?;
            let map = value
                .as_object()
                .ok_or_else(|| anyhow!("config JSON must be an object"))?;
            for (key, v) in map {
                self.set(key, &json_to_setting(v)?)?;
            }
        } else {
            for (lineno, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| anyhow!("line {}: expected key = value", lineno + 1))?;
                self.set(key, value).with_context(|| format!("line {}", lineno + 1))?;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        Ok(())
    }

    pub fn axiom_config(&self) -> AxiomConfig {
        AxiomConfig {
            grid: self.grid,
            battery: self.battery.clone(),
            tolerances: self.tolerances,
            op: self.op,
            window: self.window,
            families: FamilyKind::BASIC.to_vec(),
            delta_nmax: self.nmax,
            identity_grid: self.identity_grid,
            identity_horizon: self.identity_horizon,
            ..AxiomConfig::default()
        }
    }
}

/// Turns a JSON config value into the string form accepted by [`RunConfig::set`].
fn json_to_setting(v: &serde_json::Value) -> Result<String> {
    use serde_json::Value;
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Array(items) => items.iter().map(json_to_setting).collect::<Result<Vec<_>>>()?.join(","),
        Value::Object(o) => {
            let get = |k: &str| {
                o.get(k)
                    .map(json_to_setting)
                    .transpose()?
                    .ok_or_else(|| anyhow!("grid object needs {k}"))
            };
            format!("{}:{}:{}", get("lo")?, get("hi")?, get("n")?)
        }
        other => bail!("unsupported config value {other}"),
    })
}
