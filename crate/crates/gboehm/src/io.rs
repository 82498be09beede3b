//! File formats for sampled functions and transform tables, and atomic output.
//!
//! CSV numbers are written with 17 significant digits; JSON numbers use the
//! shortest representation that reads back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gboehm_core::{GridFunction, GridSpec, TableValues, TransformTable};
use serde::{Deserialize, Serialize};

use crate::config::Format;

/// Relative tolerance when recovering a uniform grid from CSV abscissae.
const ABSCISSA_TOL: f64 = 1e-9;

#[derive(Serialize, Deserialize)]
struct FunctionDoc {
    grid: GridSpec,
    samples: Vec<f64>,
    support: [f64; 2],
}

#[derive(Serialize)]
struct TableDoc<'a> {
    t_grid: GridSpec,
    source: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    re: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    im: Option<Vec<f64>>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn function_to_string(f: &GridFunction, format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut s = String::from("x,value\n");
            for (x, v) in f.grid().points().zip(f.samples()) {
                writeln!(s, "{},{}", num(x), num(*v))?;
            }
            Ok(s)
        }
        Format::Json => {
            let (a, b) = f.support();
            let doc = FunctionDoc {
                grid: *f.grid(),
                samples: f.samples().to_vec(),
                support: [a, b],
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

/// Reads a function written by [`function_to_string`]. CSV input must sit on
/// a uniform grid; its support is taken to be the hull of the nonzero samples.
pub fn function_from_str(text: &str, format: Format) -> Result<GridFunction> {
    match format {
        Format::Json => {
            let doc: FunctionDoc = serde_json::from_str(text)?;
            Ok(GridFunction::new(
                doc.grid,
                doc.samples,
                (doc.support[0], doc.support[1]),
            )?)
        }
        Format::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            let mut xs = Vec::new();
            let mut vs = Vec::new();
            for (i, rec) in reader.deserialize::<(f64, f64)>().enumerate() {
                let (x, v) = rec.with_context(|| format!("row {}", i + 1))?;
                xs.push(x);
                vs.push(v);
            }
            let (Some(&lo), Some(&hi)) = (xs.first(), xs.last()) else {
                bail!("function file has no rows");
            };
            let grid = GridSpec::new(lo, hi, xs.len())?;
            for (i, &x) in xs.iter().enumerate() {
                if (x - grid.point(i)).abs() > ABSCISSA_TOL * grid.step().max(x.abs()) {
                    bail!(
                        "row {}: abscissa {x} is off the uniform grid (expected {})",
                        i + 1,
                        grid.point(i)
                    );
                }
            }
            let nonzero: Vec<usize> = vs
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, _)| i)
                .collect();
            match (nonzero.first(), nonzero.last()) {
                (Some(&a), Some(&b)) => Ok(GridFunction::new(grid, vs, (grid.point(a), grid.point(b)))?),
                _ => Ok(GridFunction::zeros(grid)),
            }
        }
    }
}

pub fn read_function(path: &Path) -> Result<GridFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    function_from_str(&text, format_for_path(path)).with_context(|| format!("parsing {}", path.display()))
}

/// JSON for `.json` paths, CSV otherwise.
pub fn format_for_path(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    }
}

pub fn table_to_string(table: &TransformTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut s = String::new();
            match &table.values {
                TableValues::Real(v) => {
                    s.push_str("t,value\n");
                    for (t, y) in table.t_grid.points().zip(v) {
                        writeln!(s, "{},{}", num(t), num(*y))?;
                    }
                }
                TableValues::Complex(v) => {
                    s.push_str("t,re,im\n");
                    for (t, z) in table.t_grid.points().zip(v) {
                        writeln!(s, "{},{},{}", num(t), num(z.re), num(z.im))?;
                    }
                }
            }
            Ok(s)
        }
        Format::Json => {
            let mut doc = TableDoc {
                t_grid: table.t_grid,
                source: &table.source,
                values: None,
                re: None,
                im: None,
            };
            match &table.values {
                TableValues::Real(v) => doc.values = Some(v.clone()),
                TableValues::Complex(v) => {
                    doc.re = Some(v.iter().map(|z| z.re).collect());
                    doc.im = Some(v.iter().map(|z| z.im).collect());
                }
            }
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| anyhow!("writing {}: {}", path.display(), e.error))?;
    Ok(())
}

/// Sends `contents` to `path` (atomically) or to standard output.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => {
            write_atomic(p, contents.as_bytes())?;
            log::info!("wrote {}", p.display());
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(contents.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}
