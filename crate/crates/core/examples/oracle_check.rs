//! Cross-checks the Lyapunov steady state against stochastic trajectories:
//! Euler-Maruyama and exact Ornstein-Uhlenbeck sampling.
//!
//! The default budget is reduced so the example finishes in seconds; pass
//! `--full` for `dt = 1e-3`, `t_sample = 1e4`, 32 trajectories.
//!
//! Run with `cargo run --release --example oracle_check [-- --full]`.

use std::f64::consts::PI;

use opomech::gaussian::{build_diffusion_for, build_drift};
use opomech::langevin::{
    estimate_steady_covariance, estimate_steady_covariance_exact, SimulationSettings,
};
use opomech::lyapunov::solve_lyapunov;
use opomech::EffectiveParams;

fn main() -> opomech::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let settings = if full {
        SimulationSettings::default()
    } else {
        SimulationSettings {
            dt: 5e-3,
            t_burn: 300.0,
            t_sample: 1e3,
            n_traj: 16,
            rng_seed: 7,
        }
    };
    let p = EffectiveParams {
        delta_a: 1.0,
        chi_mag: 0.5,
        phi: 0.8 * PI,
        ..EffectiveParams::default()
    };
    let a = build_drift(&p).to_dynamic();
    let d = build_diffusion_for(&p)?.to_dynamic();
    let v = solve_lyapunov(&a, &d)?;
    println!("Lyapunov:\n{v:.5}");

    let em = estimate_steady_covariance(&a, &d, &settings)?;
    println!("Euler-Maruyama mean:\n{:.5}", em.mean);
    println!("max |z| = {:.2}", em.max_z_score(&v));

    let exact = estimate_steady_covariance_exact(
        &a,
        &d,
        &SimulationSettings {
            dt: 0.05,
            ..settings
        },
    )?;
    println!(
        "exact sampling, dt = 0.05: max |z| = {:.2}",
        exact.max_z_score(&v)
    );
    Ok(())
}
