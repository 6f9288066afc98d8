//! Built-in sweeps over the standard parameter regimes.
//!
//! | preset   | sweep                                                        | outputs                    |
//! |----------|--------------------------------------------------------------|----------------------------|
//! | `fig1`   | `delta_a` in [-3, 3] x `chi` {0, 0.3, 0.5} x `n_b` {10, 100} | `mu_a`, `mu_b`             |
//! | `fig2ab` | `delta_a` and `phi` sweeps x `chi` {0, 0.5, 1} x `n_b`        | `pi_s`                     |
//! | `fig2c`  | `chi` in [0, 1.2] x `kappa` {0.5, 1, 2} x `n_b` {10, 100}    | `pi_s`                     |
//! | `fig3`   | `delta_a` in [-3, 3] x `chi` {0, 0.3, 0.5}                   | `pi_s`, `mutual_info`, `discord` |
//!
//! Common values: `gamma = 0.01`, `coupling_g = 0.1`, `n_a = 0`, `omega_b = 1`.
//! `fig1` uses `phi = 0.8 pi` unless overridden.
//! `fig2ab` uses `kappa = 0.51`, `phi = 0.7 pi`; the phase sweep sits at
//! `delta_a = 1`. `fig2c` sits at `delta_a = 1`, `phi = 0.8 pi`.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use crate::gaussian::{EffectiveParams, ParamName};

use super::config::{Axis, Output, SweepConfig};
use super::run::SweepResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2ab,
    Fig2c,
    Fig3,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig1, Preset::Fig2ab, Preset::Fig2c, Preset::Fig3];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2ab => "fig2ab",
            Preset::Fig2c => "fig2c",
            Preset::Fig3 => "fig3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default)]
pub struct PresetOptions {
    pub out_dir: Option<PathBuf>,
    /// Replaces the fixed phase; ignored by sweeps over `phi`.
    pub phi: Option<f64>,
    pub plot: bool,
    /// Points on the long axis; `None` keeps the full resolution.
    pub resolution: Option<usize>,
}

fn base(kappa: f64, phi: f64) -> EffectiveParams {
    EffectiveParams {
        delta_a: 1.0,
        omega_b: 1.0,
        kappa,
        gamma: 0.01,
        coupling_g: 0.1,
        chi_mag: 0.0,
        phi,
        n_b: 10.0,
        n_a: 0.0,
    }
}

fn finish(name: &str, mut cfg: SweepConfig, opts: &PresetOptions) -> SweepConfig {
    let dir = opts.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    cfg.output_path = dir.join(format!("{name}.csv"));
    cfg.plot = opts.plot;
    cfg
}

fn n(opts: &PresetOptions, full: usize) -> usize {
    opts.resolution.unwrap_or(full)
}

/// Sweep configurations making up a preset.
pub fn configs(preset: Preset, opts: &PresetOptions) -> Vec<SweepConfig> {
    let nb = || Axis::new(ParamName::NB, vec![10.0, 100.0]);
    let delta = |count| Axis::linspace(ParamName::DeltaA, -3.0, 3.0, count);
    match preset {
        Preset::Fig1 => {
            let cfg = SweepConfig::new(
                "fig1",
                base(0.5, opts.phi.unwrap_or(0.8 * PI)),
                vec![
                    delta(n(opts, 601)),
                    Axis::new(ParamName::ChiMag, vec![0.0, 0.3, 0.5]),
                    nb(),
                ],
                &[Output::MuA, Output::MuB],
            );
            vec![finish("fig1", cfg, opts)]
        }
        Preset::Fig2ab => {
            let chi = || Axis::new(ParamName::ChiMag, vec![0.0, 0.5, 1.0]);
            let phi = opts.phi.unwrap_or(0.7 * PI);
            let a = SweepConfig::new(
                "fig2a",
                base(0.51, phi),
                vec![delta(n(opts, 601)), chi(), nb()],
                &[Output::PiS],
            );
            let b = SweepConfig::new(
                "fig2b",
                base(0.51, phi),
                vec![
                    Axis::linspace(ParamName::Phi, 0.0, 2.0 * PI, n(opts, 401)),
                    chi(),
                    nb(),
                ],
                &[Output::PiS],
            );
            vec![finish("fig2a", a, opts), finish("fig2b", b, opts)]
        }
        Preset::Fig2c => {
            let cfg = SweepConfig::new(
                "fig2c",
                base(0.5, opts.phi.unwrap_or(0.8 * PI)),
                vec![
                    Axis::linspace(ParamName::ChiMag, 0.0, 1.2, n(opts, 241)),
                    Axis::new(ParamName::Kappa, vec![0.5, 1.0, 2.0]),
                    nb(),
                ],
                &[Output::PiS],
            );
            vec![finish("fig2c", cfg, opts)]
        }
        Preset::Fig3 => {
            let cfg = SweepConfig::new(
                "fig3",
                base(0.5, opts.phi.unwrap_or(0.8 * PI)),
                vec![
                    delta(n(opts, 601)),
                    Axis::new(ParamName::ChiMag, vec![0.0, 0.3, 0.5]),
                ],
                &[Output::PiS, Output::MutualInfo, Output::Discord],
            );
            vec![finish("fig3", cfg, opts)]
        }
    }
}

/// A range of the first axis over which `pi_s` for some `chi > 0` lies
/// below the `chi = 0` curve at the same values of the other axes.
#[derive(Debug, Clone, Serialize)]
pub struct Dip {
    pub chi: f64,
    /// Values of the third and later axes.
    pub others: Vec<(String, f64)>,
    pub start: f64,
    pub end: f64,
    /// Location and value of the smallest `pi_s` inside the range.
    pub at: f64,
    pub pi_s: f64,
    pub reference: f64,
}

/// Finds dips in a result whose axes are `(x, chi, ...)` and which contains
/// `pi_s`. Only points where both curves are stable are compared.
pub fn find_dips(result: &SweepResult) -> Vec<Dip> {
    let cfg = &result.config;
    if cfg.axes.len() < 2 || cfg.axes[1].name != ParamName::ChiMag || !cfg.wants(Output::PiS) {
        return Vec::new();
    }
    let Some(j0) = cfg.axes[1].values.iter().position(|&c| c == 0.0) else {
        return Vec::new();
    };
    let n_x = cfg.axes[0].values.len();
    let n_chi = cfg.axes[1].values.len();
    let n_rest = result.records.len() / (n_x * n_chi);
    let pi = |k: usize| result.records[k].report.entropy.map(|e| e.pi_s);
    let mut dips = Vec::new();
    for r in 0..n_rest {
        let others: Vec<(String, f64)> = cfg
            .axes
            .iter()
            .zip(&result.records[r].coordinates)
            .skip(2)
            .map(|(a, &v)| (a.name.to_string(), v))
            .collect();
        for j in (0..n_chi).filter(|&j| j != j0) {
            let mut current: Option<Dip> = None;
            for i in 0..n_x {
                let k = |jj: usize| (i * n_chi + jj) * n_rest + r;
                let x = result.records[k(j)].coordinates[0];
                let below = match (pi(k(j)), pi(k(j0))) {
                    (Some(p), Some(p0)) if p < p0 => Some((p, p0)),
                    _ => None,
                };
                match (below, current.as_mut()) {
                    (Some((p, p0)), Some(d)) => {
                        d.end = x;
                        if p < d.pi_s {
                            (d.at, d.pi_s, d.reference) = (x, p, p0);
                        }
                    }
                    (Some((p, p0)), None) => {
                        current = Some(Dip {
                            chi: cfg.axes[1].values[j],
                            others: others.clone(),
                            start: x,
                            end: x,
                            at: x,
                            pi_s: p,
                            reference: p0,
                        })
                    }
                    (None, _) => dips.extend(current.take()),
                }
            }
            dips.extend(current.take());
        }
    }
    dips
}
