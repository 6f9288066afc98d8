//! Phase ranges where the parametric interaction lowers the entropy
//! production below its value without it.
//!
//! Run with `cargo run --example phase_dips`.

use std::f64::consts::PI;

use opomech::sweep::presets::configs;
use opomech::sweep::{find_dips, run_sweep, Preset, PresetOptions};

fn main() -> opomech::Result<()> {
    // The second config of the preset sweeps phi over [0, 2 pi].
    let cfg = configs(Preset::Fig2ab, &PresetOptions::default()).remove(1);
    let result = run_sweep(&cfg)?;
    let dips = find_dips(&result);
    if dips.is_empty() {
        println!("no dips found");
    }
    for d in dips {
        println!(
            "chi = {:.1}, {:?}: phi/pi in [{:.3}, {:.3}], minimum {:.5} at phi/pi = {:.3} (chi = 0 gives {:.5})",
            d.chi,
            d.others,
            d.start / PI,
            d.end / PI,
            d.pi_s,
            d.at / PI,
            d.reference
        );
    }
    Ok(())
}
