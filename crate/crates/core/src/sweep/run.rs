//! Grid evaluation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{self, EffectiveParams};
use crate::langevin::{self, SimulationSettings};
use crate::lyapunov;
use crate::point::{self, PointReport, Quantities};

use super::config::{Output, SweepConfig};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "OPOMECH_WORKERS";

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    /// Row-major position in the grid.
    pub index: usize,
    /// Values of the swept parameters, in axis order.
    pub coordinates: Vec<f64>,
    pub report: PointReport,
    /// Upper triangle `v11, v12, .., v44` of the steady covariance.
    pub covariance: Option<[f64; 10]>,
    /// Largest `|V_mc - V_lyap| / stderr` over all entries.
    pub oracle_max_z: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn stable_count(&self) -> usize {
        self.records.iter().filter(|r| r.report.stable).count()
    }
}

/// Worker count from [`WORKERS_ENV`], or the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::config(
                WORKERS_ENV,
                format!("expected a positive integer, got `{s}`"),
            )),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Parameters of grid point `index`, with the last axis varying fastest.
pub fn grid_point(cfg: &SweepConfig, mut index: usize) -> (EffectiveParams, Vec<f64>) {
    let mut coords = vec![0.0; cfg.axes.len()];
    for (k, axis) in cfg.axes.iter().enumerate().rev() {
        let n = axis.values.len();
        coords[k] = axis.values[index % n];
        index /= n;
    }
    let mut p = cfg.base;
    for (axis, &x) in cfg.axes.iter().zip(&coords) {
        p.set(axis.name, x);
    }
    (p, coords)
}

/// Per-point oracle seed; distinct points get unrelated streams.
pub fn point_seed(base: u64, index: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = base.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn upper_triangle(v: &gaussian::CovarianceMatrix) -> [f64; 10] {
    let mut out = [0.0; 10];
    let mut k = 0;
    for i in 1..=4 {
        for j in i..=4 {
            out[k] = v.v(i, j);
            k += 1;
        }
    }
    out
}

fn oracle_z(p: &EffectiveParams, s: &SimulationSettings, index: usize) -> Result<f64> {
    let a = gaussian::build_drift(p).to_dynamic();
    let d = gaussian::build_diffusion_for(p)?.to_dynamic();
    let v = lyapunov::solve_lyapunov(&a, &d)?;
    let settings = SimulationSettings {
        rng_seed: point_seed(s.rng_seed, index),
        ..*s
    };
    let est = langevin::estimate_steady_covariance(&a, &d, &settings)?;
    Ok(est.max_z_score(&v))
}

fn evaluate(cfg: &SweepConfig, index: usize) -> Result<SweepRecord> {
    let (p, coordinates) = grid_point(cfg, index);
    let what = Quantities {
        mutual_info: cfg.wants(Output::MutualInfo),
        discord: cfg.wants(Output::Discord),
        symplectic: cfg.wants(Output::SymplEigs),
    };
    let mut report = point::analyze(&p, what, &cfg.discord)?;
    let covariance = report.covariance.as_ref().map(upper_triangle);
    let mut oracle_max_z = None;
    if let (Some(s), true) = (&cfg.oracle, report.stable && report.failure.is_none()) {
        match oracle_z(&p, s, index) {
            Ok(z) => oracle_max_z = Some(z),
            Err(e) => report.failure = Some(format!("oracle: {e}")),
        }
    }
    Ok(SweepRecord {
        index,
        coordinates,
        report,
        covariance,
        oracle_max_z,
    })
}

/// Evaluates every grid point on a pool of [`worker_count`] threads.
///
/// Rows come back in grid order regardless of scheduling. Numerical failures
/// are recorded per row; only configuration problems abort.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let workers = worker_count()?;
    run_sweep_with_workers(cfg, workers)
}

pub fn run_sweep_with_workers(cfg: &SweepConfig, workers: usize) -> Result<SweepResult> {
    use rayon::prelude::*;
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidSettings(format!("thread pool: {e}")))?;
    let records = pool.install(|| {
        (0..cfg.point_count())
            .into_par_iter()
            .map(|i| evaluate(cfg, i))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepResult {
        config: cfg.clone(),
        records,
    })
}
