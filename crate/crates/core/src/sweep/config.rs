//! Sweep configuration files.
//!
//! The primary encoding is TOML; JSON with the same structure is accepted
//! for files ending in `.json`. Numbers may be written as strings with a `pi`
//! suffix (`"0.8pi"`, `"-pi"`), which is convenient for phases.
//!
//! ```toml
//! [base]            # any EffectiveParams field; omitted fields keep defaults
//! kappa = 0.5
//! chi = 0.3
//! phi = "0.8pi"
//!
//! [[axes]]
//! name = "delta_a"
//! min = -3.0
//! max = 3.0
//! count = 601
//!
//! [[axes]]
//! name = "n_b"
//! values = [10, 100]
//!
//! [output]
//! quantities = ["pi_s", "mu_a", "mu_b"]
//! path = "out/sweep.csv"
//! format = "csv"    # or "json"
//! plot = false
//!
//! [oracle]          # optional Monte-Carlo cross-check at every stable point
//! dt = 1e-3
//! t_burn = 1e3
//! t_sample = 1e4
//! n_traj = 32
//! rng_seed = 1
//!
//! [discord]         # optional optimizer settings
//! lambda_points = 40
//! theta_points = 20
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::correlations::OptimizerSettings;
use crate::error::{Error, Result};
use crate::gaussian::{EffectiveParams, ParamName};
use crate::langevin::SimulationSettings;

/// Requested output quantities, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    PiS,
    MuA,
    MuB,
    MutualInfo,
    Discord,
    Covariance,
    SymplEigs,
    Diagnostics,
}

impl Output {
    pub const ALL: [Output; 8] = [
        Output::PiS,
        Output::MuA,
        Output::MuB,
        Output::MutualInfo,
        Output::Discord,
        Output::Covariance,
        Output::SymplEigs,
        Output::Diagnostics,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Output::PiS => "pi_s",
            Output::MuA => "mu_a",
            Output::MuB => "mu_b",
            Output::MutualInfo => "mutual_info",
            Output::Discord => "discord",
            Output::Covariance => "covariance",
            Output::SymplEigs => "sympl_eigs",
            Output::Diagnostics => "diagnostics",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.as_str() == s)
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: ParamName,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: ParamName, values: Vec<f64>) -> Self {
        Self { name, values }
    }

    /// `count` evenly spaced values from `min` to `max` inclusive.
    pub fn linspace(name: ParamName, min: f64, max: f64, count: usize) -> Self {
        let values = match count {
            0 => Vec::new(),
            1 => vec![min],
            _ => {
                let step = (max - min) / (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        if i == count - 1 {
                            max
                        } else {
                            min + step * i as f64
                        }
                    })
                    .collect()
            }
        };
        Self { name, values }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub name: String,
    pub base: EffectiveParams,
    pub axes: Vec<Axis>,
    /// Sorted and deduplicated.
    pub outputs: Vec<Output>,
    pub oracle: Option<SimulationSettings>,
    pub discord: OptimizerSettings,
    pub output_path: PathBuf,
    pub format: Format,
    pub plot: bool,
}

impl SweepConfig {
    pub fn new(
        name: impl Into<String>,
        base: EffectiveParams,
        axes: Vec<Axis>,
        outputs: &[Output],
    ) -> Self {
        let name = name.into();
        let mut outputs = outputs.to_vec();
        outputs.sort();
        outputs.dedup();
        Self {
            output_path: PathBuf::from(format!("{name}.csv")),
            name,
            base,
            axes,
            outputs,
            oracle: None,
            discord: OptimizerSettings::default(),
            format: Format::Csv,
            plot: false,
        }
    }

    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    pub fn validate(&self) -> Result<()> {
        self.base
            .validate()
            .map_err(|e| Error::config("base", e.to_string()))?;
        for (i, axis) in self.axes.iter().enumerate() {
            if axis.values.is_empty() {
                return Err(Error::config(format!("axes[{i}]"), "grid is empty"));
            }
            if let Some(v) = axis.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::config(
                    format!("axes[{i}].values"),
                    format!("non-finite value {v}"),
                ));
            }
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(Error::config(
                    format!("axes[{i}].name"),
                    format!("`{}` is swept twice", axis.name),
                ));
            }
            for &v in &axis.values {
                self.base
                    .with(axis.name, v)
                    .validate()
                    .map_err(|e| Error::config(format!("axes[{i}].values"), e.to_string()))?;
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::config("output.quantities", "no outputs requested"));
        }
        if let Some(o) = &self.oracle {
            if !(o.dt > 0.0 && o.t_burn > 0.0 && o.t_sample > 0.0 && o.n_traj >= 2) {
                return Err(Error::config(
                    "oracle",
                    "dt, t_burn, t_sample must be positive and n_traj >= 2",
                ));
            }
        }
        self.discord
            .validate()
            .map_err(|e| Error::config("discord", e.to_string()))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let cfg = if is_json {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        Ok(cfg.with_relative_output(path))
    }

    /// Resolves a relative output path against the directory of the config file.
    fn with_relative_output(mut self, config_path: &Path) -> Self {
        if self.output_path.is_relative() {
            if let Some(dir) = config_path.parent() {
                self.output_path = dir.join(&self.output_path);
            }
        }
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .map(|s| format!("line {}", line_of(text, s.start)))
                .unwrap_or_else(|| "document".into());
            Error::config(field, e.message().to_string())
        })?;
        raw.into_config()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("line {}", e.line()), e.to_string()))?;
        raw.into_config()
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// A number, or a string such as `"0.8pi"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Number {
    fn resolve(&self, field: &str) -> Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Int(x) => Ok(*x as f64),
            Number::Text(s) => parse_number(s)
                .ok_or_else(|| Error::config(field, format!("cannot parse `{s}` as a number"))),
        }
    }
}

/// Parses `1.5`, `pi`, `-pi`, `0.8pi`, `0.8*pi`.
pub fn parse_number(s: &str) -> Option<f64> {
    let t = s.trim();
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let factor = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        return Some(factor * std::f64::consts::PI);
    }
    t.parse().ok()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    #[serde(default)]
    base: BTreeMap<String, Number>,
    #[serde(default)]
    axes: Vec<RawAxis>,
    output: RawOutput,
    oracle: Option<SimulationSettings>,
    discord: Option<RawDiscord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    name: String,
    min: Option<Number>,
    max: Option<Number>,
    count: Option<usize>,
    values: Option<Vec<Number>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    quantities: Vec<String>,
    path: Option<PathBuf>,
    format: Option<Format>,
    #[serde(default)]
    plot: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiscord {
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_points: Option<usize>,
    theta_points: Option<usize>,
    refine_rtol: Option<f64>,
    max_iterations: Option<usize>,
}

fn param(name: &str, field: &str) -> Result<ParamName> {
    ParamName::parse(name).ok_or_else(|| {
        let known: Vec<_> = ParamName::ALL.iter().map(|p| p.as_str()).collect();
        Error::config(
            field,
            format!(
                "unknown parameter `{name}` (expected one of {})",
                known.join(", ")
            ),
        )
    })
}

impl RawConfig {
    fn into_config(self) -> Result<SweepConfig> {
        let mut base = EffectiveParams::default();
        for (key, value) in &self.base {
            let field = format!("base.{key}");
            base.set(param(key, &field)?, value.resolve(&field)?);
        }

        let mut axes = Vec::with_capacity(self.axes.len());
        for (i, raw) in self.axes.iter().enumerate() {
            let field = format!("axes[{i}]");
            let name = param(&raw.name, &format!("{field}.name"))?;
            let axis = match (&raw.values, &raw.min, &raw.max, raw.count) {
                (Some(values), None, None, None) => Axis::new(
                    name,
                    values
                        .iter()
                        .map(|v| v.resolve(&format!("{field}.values")))
                        .collect::<Result<_>>()?,
                ),
                (None, Some(min), Some(max), Some(count)) => {
                    if count == 0 {
                        return Err(Error::config(
                            format!("{field}.count"),
                            "must be at least 1",
                        ));
                    }
                    let (lo, hi) = (
                        min.resolve(&format!("{field}.min"))?,
                        max.resolve(&format!("{field}.max"))?,
                    );
                    if count > 1 && hi <= lo {
                        return Err(Error::config(format!("{field}.max"), "must exceed min"));
                    }
                    Axis::linspace(name, lo, hi, count)
                }
                _ => {
                    return Err(Error::config(
                        field,
                        "give either `values` or all of `min`, `max`, `count`",
                    ))
                }
            };
            axes.push(axis);
        }

        let mut outputs = Vec::new();
        for (i, q) in self.output.quantities.iter().enumerate() {
            let o = Output::parse(q).ok_or_else(|| {
                let known: Vec<_> = Output::ALL.iter().map(|o| o.as_str()).collect();
                Error::config(
                    format!("output.quantities[{i}]"),
                    format!(
                        "unknown output `{q}` (expected one of {})",
                        known.join(", ")
                    ),
                )
            })?;
            outputs.push(o);
        }

        let name = self.name.unwrap_or_else(|| "sweep".into());
        let mut cfg = SweepConfig::new(name, base, axes, &outputs);
        cfg.format = self.output.format.unwrap_or(Format::Csv);
        cfg.output_path = self.output.path.unwrap_or_else(|| {
            PathBuf::from(format!(
                "{}.{}",
                cfg.name,
                if cfg.format == Format::Csv {
                    "csv"
                } else {
                    "json"
                }
            ))
        });
        cfg.plot = self.output.plot;
        cfg.oracle = self.oracle;
        if let Some(d) = self.discord {
            let def = OptimizerSettings::default();
            cfg.discord = OptimizerSettings {
                lambda_min: d.lambda_min.unwrap_or(def.lambda_min),
                lambda_max: d.lambda_max.unwrap_or(def.lambda_max),
                lambda_points: d.lambda_points.unwrap_or(def.lambda_points),
                theta_points: d.theta_points.unwrap_or(def.theta_points),
                refine_rtol: d.refine_rtol.unwrap_or(def.refine_rtol),
                max_iterations: d.max_iterations.unwrap_or(def.max_iterations),
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
