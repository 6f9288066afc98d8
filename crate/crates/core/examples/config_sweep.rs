//! A sweep defined in TOML, run in-process, written as CSV with its
//! metadata sidecar. The same text saved to a file runs with
//! `opomech sweep <file>`.
//!
//! Run with `cargo run --example config_sweep [-- OUT_DIR]`.

use opomech::sweep::{emit, run_sweep, SweepConfig};

const CONFIG: &str = r#"
name = "kappa_scan"

[base]
delta_a = 1.0
chi = 0.3
phi = "0.8pi"
n_b = 10

[[axes]]
name = "kappa"
min = 0.2
max = 2.0
count = 10

[[axes]]
name = "g"
values = [0.05, 0.1]

[output]
quantities = ["pi_s", "mutual_info", "sympl_eigs", "diagnostics"]
"#;

fn main() -> opomech::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().display().to_string());
    let mut cfg = SweepConfig::from_toml(CONFIG)?;
    cfg.output_path = std::path::Path::new(&dir).join("kappa_scan.csv");
    let result = run_sweep(&cfg)?;
    for path in emit(&result)? {
        println!("wrote {}", path.display());
    }
    print!("{}", opomech::sweep::emit::to_csv_string(&result)?);
    Ok(())
}
