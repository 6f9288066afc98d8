//! Everything about one parameter point: steady state, entropy production
//! split by mode, symplectic spectrum, mutual information and discord.
//!
//! Run with `cargo run --example single_point`.

use std::f64::consts::PI;

use opomech::correlations::{gaussian_discord, mutual_information, OptimizerSettings};
use opomech::entropy::entropy_production;
use opomech::gaussian::{build_diffusion_for, build_drift, symplectic_eigenvalues};
use opomech::lyapunov::{lyapunov_residual, solve_steady_covariance};
use opomech::EffectiveParams;

fn main() -> opomech::Result<()> {
    let p = EffectiveParams {
        delta_a: 1.0,
        kappa: 0.5,
        gamma: 0.01,
        coupling_g: 0.1,
        chi_mag: 0.3,
        phi: 0.8 * PI,
        n_b: 10.0,
        ..EffectiveParams::default()
    };
    let a = build_drift(&p);
    let d = build_diffusion_for(&p)?;
    println!("spectral abscissa: {:.6e}", a.spectral_abscissa());

    let v = solve_steady_covariance(&a, &d)?;
    println!("steady covariance:\n{}", v.matrix());
    let res = lyapunov_residual(&a.to_dynamic(), &v.to_dynamic(), &d.to_dynamic());
    println!("||A V + V A^T + D||_F = {res:.3e}");

    let e = entropy_production(&v, &p);
    println!(
        "pi_s = {:.8}  (mu_a = {:.8}, mu_b = {:.8})",
        e.pi_s, e.mu_a, e.mu_b
    );

    let (nu1, nu2) = symplectic_eigenvalues(&v)?;
    println!("symplectic eigenvalues: {nu1:.6}, {nu2:.6}  (vacuum 0.5)");

    let i = mutual_information(&v)?;
    let disc = gaussian_discord(&v, &OptimizerSettings::default())?;
    println!("mutual information I = {i:.8}");
    println!(
        "discord D = {:.8}, classical J = {:.8}, best seed lambda = {:.4}, theta = {:.4} pi",
        disc.discord,
        disc.classical,
        disc.seed.lambda,
        disc.seed.theta / PI
    );
    Ok(())
}
