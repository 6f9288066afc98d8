//! From laboratory numbers to the dimensionless model.
//!
//! Uses a microwave optomechanical device: cavity at 2pi x 4.93 GHz,
//! kappa = 2pi x 215 kHz, mechanics at 2pi x 65 MHz with gamma = 2pi x 15 kHz
//! and single-photon coupling g = 2pi x 1.6 MHz. Mass and length are not
//! needed separately; the length is chosen to reproduce g.
//!
//! Run with `cargo run --example physical_units`.

use std::f64::consts::PI;

use opomech::correlations::OptimizerSettings;
use opomech::meanfield::{
    coupling_from_physical, effective_params, real_amplitude_phase, solve_mean_field,
    MeanFieldMode, PhysicalParams, HBAR,
};
use opomech::point::{analyze, Quantities};

fn main() -> opomech::Result<()> {
    let two_pi = 2.0 * PI;
    let omega_c = two_pi * 4.93e9;
    let omega_b = two_pi * 65e6;
    let g0 = two_pi * 1.6e6;
    let mass = 1e-15;
    let length = (HBAR / (mass * omega_b)).sqrt() * omega_c / g0;

    let mut p = PhysicalParams {
        omega_c,
        omega_l: omega_c - omega_b,
        omega_b,
        mass,
        length,
        laser_power: 2e-12,
        temperature: 0.02,
        kappa: two_pi * 215e3,
        gamma: two_pi * 15e3,
        xi: 0.0,
        theta: 0.0,
    };
    println!(
        "g / omega_b     = {:.4}",
        coupling_from_physical(&p) / omega_b
    );
    println!("kappa / omega_b = {:.3e}", p.kappa / omega_b);
    println!("gamma / omega_b = {:.3e}", p.gamma / omega_b);

    println!(
        "\n{:>10} {:>10} {:>10} {:>10} {:>8} {:>12}",
        "power [W]", "G", "chi", "phi/pi", "n_b", "pi_s"
    );
    for (power, xi) in [(2e-12, 0.0), (2e-12, two_pi * 1e3), (2e-11, two_pi * 1e3)] {
        p.laser_power = power;
        p.xi = xi;
        // Choose the drive phase so the cavity amplitude is real.
        let approx = solve_mean_field(&p, MeanFieldMode::Approximate)?;
        p.theta = real_amplitude_phase(p.kappa, approx.delta_tilde);
        let mf = solve_mean_field(&p, MeanFieldMode::SelfConsistent)?;
        let eff = effective_params(&mf, &p)?;
        let r = analyze(&eff, Quantities::default(), &OptimizerSettings::default())?;
        let pi_s = r.entropy.map_or(f64::NAN, |e| e.pi_s);
        println!(
            "{power:>10.1e} {:>10.4} {:>10.2e} {:>10.4} {:>8.2} {:>12.4e}{}",
            eff.coupling_g,
            eff.chi_mag,
            eff.phi / PI,
            eff.n_b,
            pi_s,
            if r.stable { "" } else { "  (unstable)" }
        );
    }
    Ok(())
}
