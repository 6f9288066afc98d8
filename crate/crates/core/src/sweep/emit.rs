//! Writing sweep results.
//!
//! CSV column order:
//!
//! 1. swept parameters, in axis order;
//! 2. requested outputs, always in this order:
//!    `pi_s, mu_a, mu_b, mutual_info, discord,
//!    v11, v12, v13, v14, v22, v23, v24, v33, v34, v44, nu1, nu2,
//!    near_divergence, negative_pi_s, discord_converged, discord_clipped, failure`
//!    (the covariance block is `covariance`, the `nu` pair is `sympl_eigs`,
//!    the last five are `diagnostics`);
//! 3. `oracle_max_z` when a Monte-Carlo check was configured;
//! 4. `stable`.
//!
//! Floats carry 17 significant digits. Missing values (unstable points, or
//! failures) are empty cells.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::{Format, Output, SweepConfig};
use super::run::{SweepRecord, SweepResult};
use super::svg;

pub const COVARIANCE_COLUMNS: [&str; 10] = [
    "v11", "v12", "v13", "v14", "v22", "v23", "v24", "v33", "v34", "v44",
];

/// Formats a float with 17 significant digits; NaN becomes an empty cell.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, format_float)
}

fn flag(b: bool) -> String {
    b.to_string()
}

/// Header row for a configuration.
pub fn columns(cfg: &SweepConfig) -> Vec<String> {
    let mut cols: Vec<String> = cfg
        .axes
        .iter()
        .map(|a| a.name.as_str().to_string())
        .collect();
    for o in &cfg.outputs {
        match o {
            Output::PiS | Output::MuA | Output::MuB | Output::MutualInfo | Output::Discord => {
                cols.push(o.as_str().into())
            }
            Output::Covariance => cols.extend(COVARIANCE_COLUMNS.iter().map(|c| c.to_string())),
            Output::SymplEigs => cols.extend(["nu1".into(), "nu2".into()]),
            Output::Diagnostics => cols.extend(
                [
                    "near_divergence",
                    "negative_pi_s",
                    "discord_converged",
                    "discord_clipped",
                    "failure",
                ]
                .map(String::from),
            ),
        }
    }
    if cfg.oracle.is_some() {
        cols.push("oracle_max_z".into());
    }
    cols.push("stable".into());
    cols
}

/// One CSV row, aligned with [`columns`].
pub fn row(cfg: &SweepConfig, rec: &SweepRecord) -> Vec<String> {
    let r = &rec.report;
    let mut cells: Vec<String> = rec.coordinates.iter().map(|&x| format_float(x)).collect();
    for o in &cfg.outputs {
        match o {
            Output::PiS => cells.push(opt(r.entropy.map(|e| e.pi_s))),
            Output::MuA => cells.push(opt(r.entropy.map(|e| e.mu_a))),
            Output::MuB => cells.push(opt(r.entropy.map(|e| e.mu_b))),
            Output::MutualInfo => cells.push(opt(r.mutual_info)),
            Output::Discord => cells.push(opt(r.discord.as_ref().map(|d| d.discord))),
            Output::Covariance => match &rec.covariance {
                Some(v) => cells.extend(v.iter().map(|&x| format_float(x))),
                None => cells.extend(std::iter::repeat_n(String::new(), 10)),
            },
            Output::SymplEigs => {
                cells.push(opt(r.symplectic.map(|s| s.0)));
                cells.push(opt(r.symplectic.map(|s| s.1)));
            }
            Output::Diagnostics => {
                cells.push(flag(r.near_divergence));
                cells.push(flag(r.negative_pi_s));
                cells.push(
                    r.discord
                        .as_ref()
                        .map_or_else(String::new, |d| flag(d.converged)),
                );
                cells.push(
                    r.discord
                        .as_ref()
                        .map_or_else(String::new, |d| flag(d.clipped)),
                );
                cells.push(r.failure.clone().unwrap_or_default());
            }
        }
    }
    if cfg.oracle.is_some() {
        cells.push(opt(rec.oracle_max_z));
    }
    cells.push(flag(r.stable));
    cells
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::InvalidSettings(format!("csv: {e}"));
    w.write_record(columns(&result.config)).map_err(csv_err)?;
    for rec in &result.records {
        w.write_record(row(&result.config, rec)).map_err(csv_err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidSettings(format!("csv: {e}")))?;
    Ok(())
}

/// CSV text of a result, as written by [`emit`].
pub fn to_csv_string(result: &SweepResult) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    columns: Vec<String>,
    rows: usize,
    stable_rows: usize,
    /// Base seed and one derived seed per row when the oracle runs.
    oracle_seeds: Option<OracleSeeds>,
    config: &'a SweepConfig,
}

#[derive(Serialize)]
struct OracleSeeds {
    base: u64,
    per_point: Vec<u64>,
}

/// Path of the sidecar metadata file: `<path>.meta.json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    f.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    f.flush().map_err(|e| Error::io(path, e))
}

/// Writes the data file in the configured format, its metadata sidecar and,
/// when requested, SVG plots. Returns every path written.
pub fn emit(result: &SweepResult) -> Result<Vec<PathBuf>> {
    let cfg = &result.config;
    let path = cfg.output_path.as_path();
    match cfg.format {
        Format::Csv => {
            let text = to_csv_string(result)?;
            let mut f = create(path)?;
            f.write_all(text.as_bytes())
                .map_err(|e| Error::io(path, e))?;
            f.flush().map_err(|e| Error::io(path, e))?;
        }
        Format::Json => write_json(path, result)?,
    }
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        columns: columns(cfg),
        rows: result.records.len(),
        stable_rows: result.stable_count(),
        oracle_seeds: cfg.oracle.map(|o| OracleSeeds {
            base: o.rng_seed,
            per_point: result
                .records
                .iter()
                .map(|r| super::run::point_seed(o.rng_seed, r.index))
                .collect(),
        }),
        config: cfg,
    };
    let meta_path = metadata_path(path);
    write_json(&meta_path, &meta)?;
    let mut written = vec![path.to_path_buf(), meta_path];
    if cfg.plot {
        written.extend(svg::write_plots(result)?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{EffectiveParams, ParamName};
    use crate::sweep::config::Axis;
    use crate::sweep::run::run_sweep_with_workers;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), "");
        let x = 0.123_456_789_012_345_68_f64;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn three_point_csv() {
        let cfg = SweepConfig::new(
            "t",
            EffectiveParams::default(),
            vec![Axis::new(ParamName::DeltaA, vec![-1.0, 0.0, 1.0])],
            &[Output::MuB, Output::PiS, Output::Covariance],
        );
        let res = run_sweep_with_workers(&cfg, 1).unwrap();
        let text = to_csv_string(&res).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("delta_a,pi_s,mu_b,v11,v12,"));
        assert!(lines[0].ends_with(",v44,stable"));
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 14));
    }

    #[test]
    fn unstable_rows_are_empty() {
        let base = EffectiveParams {
            chi_mag: 0.5,
            ..EffectiveParams::default()
        };
        let cfg = SweepConfig::new(
            "t",
            base,
            vec![Axis::new(ParamName::DeltaA, vec![0.0])],
            &[Output::PiS, Output::Discord],
        );
        let res = run_sweep_with_workers(&cfg, 1).unwrap();
        let text = to_csv_string(&res).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "0.0000000000000000e0,,,false");
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            metadata_path(Path::new("out/a.csv")),
            PathBuf::from("out/a.csv.meta.json")
        );
    }
}
