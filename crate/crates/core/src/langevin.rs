//! Stochastic estimate of the steady-state covariance by direct integration
//! of the linear Langevin equations `dR = A R dt + S dW`, `S S^T = D`.
//!
//! This is an independent check on the Lyapunov solver: it never forms the
//! Lyapunov operator. Trajectories are integrated in parallel, each with its
//! own ChaCha stream `(seed, trajectory index)`, so results do not depend on
//! the thread schedule.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lyapunov::{is_stable, spectral_abscissa};

/// Largest `dt * ||A||_F` accepted by the explicit scheme.
pub const EULER_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSettings {
    /// Time step, units of `1/omega_b`.
    pub dt: f64,
    /// Discarded relaxation time.
    pub t_burn: f64,
    /// Averaging time per trajectory.
    pub t_sample: f64,
    pub n_traj: usize,
    pub rng_seed: u64,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_burn: 1e3,
            t_sample: 1e4,
            n_traj: 32,
            rng_seed: 0x005e_ed0f_0b05,
        }
    }
}

impl SimulationSettings {
    fn validate_times(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidSettings(format!(
                "dt = {} must be positive",
                self.dt
            )));
        }
        if !(self.t_burn > 0.0 && self.t_sample > 0.0) {
            return Err(Error::InvalidSettings(
                "burn-in and sampling times must be positive".into(),
            ));
        }
        if self.t_sample < self.dt {
            return Err(Error::InvalidSettings(
                "sampling time shorter than one step".into(),
            ));
        }
        if self.n_traj < 2 {
            return Err(Error::InvalidSettings(
                "at least two trajectories are needed for an error estimate".into(),
            ));
        }
        Ok(())
    }

    /// Checks the settings against a drift matrix for the explicit scheme.
    pub fn validate_for(&self, a: &DMatrix<f64>) -> Result<()> {
        self.validate_times()?;
        let margin = self.dt * a.norm();
        if margin >= EULER_MARGIN {
            return Err(Error::InvalidSettings(format!(
                "dt * ||A|| = {margin:.3} exceeds the stability margin {EULER_MARGIN}"
            )));
        }
        Ok(())
    }

    fn steps(&self) -> (usize, usize) {
        (
            (self.t_burn / self.dt).round() as usize,
            (self.t_sample / self.dt).round() as usize,
        )
    }
}

/// Monte-Carlo covariance estimate with its elementwise standard error.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate {
    pub mean: DMatrix<f64>,
    pub stderr: DMatrix<f64>,
}

impl CovarianceEstimate {
    /// Largest `|mean - reference| / stderr` over all elements.
    pub fn max_z_score(&self, reference: &DMatrix<f64>) -> f64 {
        self.mean
            .iter()
            .zip(reference.iter())
            .zip(self.stderr.iter())
            .map(|((m, r), s)| (m - r).abs() / s.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// True when every element is within `k` standard errors of `reference`.
    pub fn agrees_with(&self, reference: &DMatrix<f64>, k: f64) -> bool {
        self.max_z_score(reference) <= k
    }
}

/// Lower-triangular `S` with `S S^T = d`. Diagonal input gives the elementwise root.
pub fn noise_factor(d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    d.clone()
        .cholesky()
        .map(|c| c.unpack())
        .ok_or(Error::NotPositiveDefinite)
}

/// One linear update `R <- M R + L xi`, where `M` and `L` are dense row-major.
struct LinearStep {
    n: usize,
    transition: Vec<f64>,
    noise: Vec<f64>,
}

impl LinearStep {
    fn new(transition: &DMatrix<f64>, noise: &DMatrix<f64>) -> Self {
        let n = transition.nrows();
        let row_major = |m: &DMatrix<f64>| -> Vec<f64> {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)])
                .collect()
        };
        Self {
            n,
            transition: row_major(transition),
            noise: row_major(noise),
        }
    }

    /// Time average of the outer product `R R^T` after `burn` discarded steps.
    fn average_outer(&self, burn: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let n = self.n;
        let mut r = vec![0.0; n];
        let mut next = vec![0.0; n];
        let mut xi = vec![0.0; n];
        let mut acc = vec![0.0; n * n];
        for step in 0..burn + samples {
            for x in xi.iter_mut() {
                *x = StandardNormal.sample(rng);
            }
            for i in 0..n {
                let row = i * n;
                let mut s = 0.0;
                for j in 0..n {
                    s += self.transition[row + j] * r[j] + self.noise[row + j] * xi[j];
                }
                next[i] = s;
            }
            std::mem::swap(&mut r, &mut next);
            if step >= burn {
                for i in 0..n {
                    for j in i..n {
                        acc[i * n + j] += r[i] * r[j];
                    }
                }
            }
        }
        let inv = 1.0 / samples as f64;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                out[i * n + j] = acc[i * n + j] * inv;
                out[j * n + i] = out[i * n + j];
            }
        }
        out
    }
}

fn trajectory_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn ensemble(step: &LinearStep, s: &SimulationSettings) -> CovarianceEstimate {
    let n = step.n;
    let (burn, samples) = s.steps();
    let runs: Vec<Vec<f64>> = (0..s.n_traj)
        .into_par_iter()
        .map(|k| step.average_outer(burn, samples, &mut trajectory_rng(s.rng_seed, k)))
        .collect();
    let count = runs.len() as f64;
    let mut mean = DMatrix::<f64>::zeros(n, n);
    for run in &runs {
        for i in 0..n {
            for j in 0..n {
                mean[(i, j)] += run[i * n + j] / count;
            }
        }
    }
    let mut var = DMatrix::<f64>::zeros(n, n);
    for run in &runs {
        for i in 0..n {
            for j in 0..n {
                var[(i, j)] += (run[i * n + j] - mean[(i, j)]).powi(2) / (count - 1.0);
            }
        }
    }
    CovarianceEstimate {
        mean,
        stderr: var.map(|v| (v / count).sqrt()),
    }
}

fn check_inputs(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    if !a.is_square() || d.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: d.nrows(),
            cols: d.ncols(),
        });
    }
    if !is_stable(a) {
        return Err(Error::UnstableSystem {
            abscissa: spectral_abscissa(a),
        });
    }
    Ok(())
}

/// Euler-Maruyama estimate: `R <- R + A R dt + sqrt(dt) S xi`.
pub fn estimate_steady_covariance(
    a: &DMatrix<f64>,
    d: &DMatrix<f64>,
    s: &SimulationSettings,
) -> Result<CovarianceEstimate> {
    check_inputs(a, d)?;
    s.validate_for(a)?;
    let n = a.nrows();
    let transition = DMatrix::<f64>::identity(n, n) + a * s.dt;
    let noise = noise_factor(d)? * s.dt.sqrt();
    Ok(ensemble(&LinearStep::new(&transition, &noise), s))
}

/// Transition matrix `e^{A dt}` and integrated noise covariance
/// `Q = int_0^dt e^{A u} D e^{A^T u} du`, both from one exponential of the
/// block matrix `[[-A, D], [0, A^T]] dt`.
pub fn exact_discretization(
    a: &DMatrix<f64>,
    d: &DMatrix<f64>,
    dt: f64,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut block = DMatrix::<f64>::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(&(-a * dt));
    block.view_mut((0, n), (n, n)).copy_from(&(d * dt));
    block
        .view_mut((n, n), (n, n))
        .copy_from(&(a.transpose() * dt));
    let e = block.exp();
    let phi = e.view((n, n), (n, n)).transpose();
    let q = &phi * e.view((0, n), (n, n));
    let q = (&q + q.transpose()) * 0.5;
    (phi, q)
}

/// Exact-in-distribution Ornstein-Uhlenbeck sampling with step `s.dt`; no
/// step-size margin applies.
pub fn estimate_steady_covariance_exact(
    a: &DMatrix<f64>,
    d: &DMatrix<f64>,
    s: &SimulationSettings,
) -> Result<CovarianceEstimate> {
    check_inputs(a, d)?;
    s.validate_times()?;
    let (phi, q) = exact_discretization(a, d, s.dt);
    let noise = noise_factor(&q)?;
    Ok(ensemble(&LinearStep::new(&phi, &noise), s))
}
