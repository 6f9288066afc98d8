//! Approach to the point where the parametric gain balances the cavity
//! loss. At zero detuning and phase the `x_a` quadrature decouples with
//! rate `kappa - chi`, and the entropy production grows without bound as
//! `kappa` falls towards `chi`.
//!
//! Run with `cargo run --example divergence_boundary`.

use opomech::correlations::OptimizerSettings;
use opomech::point::{analyze, Quantities};
use opomech::EffectiveParams;

fn main() -> opomech::Result<()> {
    let chi = 0.5;
    let base = EffectiveParams {
        delta_a: 0.0,
        chi_mag: chi,
        phi: 0.0,
        coupling_g: 0.1,
        n_b: 10.0,
        ..EffectiveParams::default()
    };
    let reference = analyze(
        &EffectiveParams {
            kappa: 2.0 * chi,
            ..base
        },
        Quantities::default(),
        &OptimizerSettings::default(),
    )?;
    let pi_ref = reference.entropy.map_or(f64::NAN, |e| e.pi_s);
    println!("pi_s at kappa = 2 chi: {pi_ref:.6}");
    println!(
        "{:>14} {:>8} {:>14} {:>12}",
        "kappa - chi", "stable", "pi_s", "ratio"
    );
    for gap in [0.3, 0.1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6] {
        for kappa in [chi + gap, chi - gap] {
            let r = analyze(
                &EffectiveParams { kappa, ..base },
                Quantities::default(),
                &OptimizerSettings::default(),
            )?;
            let pi_s = r.entropy.map(|e| e.pi_s);
            println!(
                "{:>14.3e} {:>8} {:>14} {:>12} {}",
                kappa - chi,
                r.stable,
                pi_s.map_or("-".into(), |x| format!("{x:.6e}")),
                pi_s.map_or("-".into(), |x| format!("{:.3e}", x / pi_ref)),
                if r.near_divergence {
                    "near divergence"
                } else {
                    ""
                }
            );
        }
    }
    Ok(())
}
