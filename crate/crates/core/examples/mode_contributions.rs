//! Cavity and mechanical contributions to the entropy production across the
//! detuning, for three parametric strengths and two bath occupations.
//!
//! Prints a coarse table; `--write DIR` also writes the full preset CSV,
//! metadata and SVG plots.
//!
//! Run with `cargo run --example mode_contributions [-- --write out]`.

use std::path::PathBuf;

use opomech::sweep::presets::configs;
use opomech::sweep::{emit, run_sweep, Preset, PresetOptions};

fn main() -> opomech::Result<()> {
    let out: Option<PathBuf> = std::env::args()
        .skip_while(|a| a != "--write")
        .nth(1)
        .map(PathBuf::from);
    let opts = PresetOptions {
        plot: out.is_some(),
        out_dir: out.clone(),
        resolution: if out.is_some() { None } else { Some(13) },
        ..Default::default()
    };
    let cfg = configs(Preset::Fig1, &opts).remove(0);
    let result = run_sweep(&cfg)?;

    println!(
        "{:>6} {:>5} {:>6} {:>12} {:>12}",
        "delta", "chi", "n_b", "mu_a", "mu_b"
    );
    for rec in &result.records {
        let [delta, chi, nb] = rec.coordinates[..] else {
            unreachable!()
        };
        match rec.report.entropy {
            Some(e) => println!(
                "{delta:>6.2} {chi:>5.1} {nb:>6} {:>12.5e} {:>12.5e}",
                e.mu_a, e.mu_b
            ),
            None => println!(
                "{delta:>6.2} {chi:>5.1} {nb:>6} {:>12} {:>12}",
                "unstable", ""
            ),
        }
    }
    if out.is_some() {
        for path in emit(&result)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
