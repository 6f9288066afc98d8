//! Entropy production, mutual information and discord as functions of the
//! detuning, with the locations of their maxima.
//!
//! Run with `cargo run --example correlations_vs_detuning`.

use opomech::sweep::presets::configs;
use opomech::sweep::{run_sweep, Preset, PresetOptions};

fn argmax(xs: &[(f64, Option<f64>)], lo: f64, hi: f64) -> Option<(f64, f64)> {
    xs.iter()
        .filter(|(x, _)| (lo..=hi).contains(x))
        .filter_map(|&(x, y)| y.map(|y| (x, y)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

fn main() -> opomech::Result<()> {
    let cfg = configs(Preset::Fig3, &PresetOptions::default()).remove(0);
    let result = run_sweep(&cfg)?;
    let chis = &cfg.axes[1].values;
    for (j, chi) in chis.iter().enumerate() {
        let rows: Vec<_> = result.records.iter().skip(j).step_by(chis.len()).collect();
        let series =
            |f: &dyn Fn(&opomech::sweep::SweepRecord) -> Option<f64>| -> Vec<(f64, Option<f64>)> {
                rows.iter().map(|r| (r.coordinates[0], f(r))).collect()
            };
        let pi_s = series(&|r| r.report.entropy.map(|e| e.pi_s));
        let mi = series(&|r| r.report.mutual_info);
        let disc = series(&|r| r.report.discord.as_ref().map(|d| d.discord));
        println!("chi = {chi}");
        for (name, s) in [("pi_s", &pi_s), ("I", &mi), ("D", &disc)] {
            let neg = argmax(s, -3.0, 0.0);
            let pos = argmax(s, 0.0, 3.0);
            println!(
                "  {name:>4}: max on delta<0 at {:?}, on delta>0 at {:?}",
                neg.map(|(x, y)| (x, (y * 1e4).round() / 1e4)),
                pos.map(|(x, y)| (x, (y * 1e4).round() / 1e4))
            );
        }
    }
    Ok(())
}
