use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use opomech::correlations::OptimizerSettings;
use opomech::point::{self, PointReport, Quantities};
use opomech::sweep::{self, emit, parse_number, run_sweep, Preset, PresetOptions, SweepConfig};
use opomech::{EffectiveParams, Error};

/// Steady-state entropy production and correlations of an optomechanical
/// cavity with an intracavity parametric amplifier.
///
/// Frequencies are in units of the mechanical frequency. Phases accept a
/// `pi` suffix, e.g. `--phi 0.8pi`. The worker count for sweeps can be set
/// with OPOMECH_WORKERS.
#[derive(Parser)]
#[command(name = "opomech", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a TOML (or .json) config file.
    Sweep { config: PathBuf },
    /// Run a built-in sweep: fig1, fig2ab, fig2c or fig3.
    ///
    /// fig1 defaults to phi = 0.8pi; fig2ab
    /// defaults to 0.7pi and fig2c, fig3 to 0.8pi. --phi replaces the fixed
    /// phase (the phase sweep of fig2ab ignores it).
    Preset {
        #[arg(value_parser = parse_preset)]
        name: Preset,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
        phi: Option<f64>,
        /// Also write SVG plots.
        #[arg(long)]
        plot: bool,
    },
    /// Analyze a single parameter point.
    Point(PointArgs),
    /// Check a config file without running it.
    Validate { config: PathBuf },
}

#[derive(clap::Args)]
struct PointArgs {
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    delta_a: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    chi: Option<f64>,
    #[arg(long, value_parser = parse_value, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    kappa: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    gamma: Option<f64>,
    /// Effective optomechanical coupling G.
    #[arg(long, value_parser = parse_value)]
    g: Option<f64>,
    /// Mechanical thermal occupation.
    #[arg(long, value_parser = parse_value)]
    nb: Option<f64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn parse_value(s: &str) -> Result<f64, String> {
    parse_number(s).ok_or_else(|| format!("`{s}` is not a number"))
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    Preset::parse(s)
        .ok_or_else(|| format!("unknown preset `{s}` (expected fig1, fig2ab, fig2c or fig3)"))
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = if error.is_config_error() { 1 } else { 2 };
        Failure { code, error }
    }
}

fn load(path: &Path) -> Result<SweepConfig, Failure> {
    // An unreadable config is a config problem, not a runtime one.
    SweepConfig::load(path).map_err(|error| Failure { code: 1, error })
}

fn run_and_emit(cfg: &SweepConfig) -> Result<sweep::SweepResult, Failure> {
    let result = run_sweep(cfg)?;
    for path in emit(&result)? {
        println!("wrote {}", path.display());
    }
    let failures = result
        .records
        .iter()
        .filter(|r| r.report.failure.is_some())
        .count();
    println!(
        "{}: {} points, {} stable, {} with numerical failures",
        cfg.name,
        result.records.len(),
        result.stable_count(),
        failures
    );
    Ok(result)
}

fn print_report(r: &PointReport) {
    let p = &r.params;
    println!(
        "delta_a = {}  kappa = {}  gamma = {}  G = {}  chi = {}  phi = {} pi  n_b = {}",
        p.delta_a,
        p.kappa,
        p.gamma,
        p.coupling_g,
        p.chi_mag,
        p.phi / std::f64::consts::PI,
        p.n_b
    );
    println!(
        "stable: {} (spectral abscissa {:.6e})",
        r.stable, r.spectral_abscissa
    );
    if r.near_divergence {
        println!("warning: close to kappa^2 = chi^2 cos^2(phi)");
    }
    if let Some(v) = &r.covariance {
        println!("covariance:");
        for i in 1..=4 {
            let row: Vec<String> = (1..=4).map(|j| format!("{:>14.6e}", v.v(i, j))).collect();
            println!("  {}", row.join(" "));
        }
    }
    if let Some(e) = r.entropy {
        println!(
            "pi_s = {:.10e}\nmu_a = {:.10e}\nmu_b = {:.10e}",
            e.pi_s, e.mu_a, e.mu_b
        );
    }
    if let Some((n1, n2)) = r.symplectic {
        println!("symplectic eigenvalues = {n1:.10e}, {n2:.10e}");
    }
    if let Some(i) = r.mutual_info {
        println!("mutual_info = {i:.10e}");
    }
    if let Some(d) = &r.discord {
        println!(
            "discord = {:.10e} (seed lambda = {:.4e}, theta = {:.4} pi, converged: {})",
            d.discord,
            d.seed.lambda,
            d.seed.theta / std::f64::consts::PI,
            d.converged
        );
    }
    if let Some(f) = &r.failure {
        println!("failure: {f}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep { config } => {
            let cfg = load(&config)?;
            run_and_emit(&cfg)?;
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!(
                "{}: ok, {} points, columns: {}",
                config.display(),
                cfg.point_count(),
                sweep::emit::columns(&cfg).join(",")
            );
        }
        Command::Preset {
            name,
            out,
            phi,
            plot,
        } => {
            let opts = PresetOptions {
                out_dir: Some(out),
                phi,
                plot,
                resolution: None,
            };
            for cfg in sweep::presets::configs(name, &opts) {
                cfg.validate()?;
                let result = run_and_emit(&cfg)?;
                for d in sweep::find_dips(&result) {
                    let others: Vec<String> =
                        d.others.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    println!(
                        "  dip: chi = {}, {}: {} in [{:.4}, {:.4}], deepest at {:.4} ({:.6e} vs {:.6e})",
                        d.chi,
                        others.join(", "),
                        cfg.axes[0].name,
                        d.start,
                        d.end,
                        d.at,
                        d.pi_s,
                        d.reference
                    );
                }
            }
        }
        Command::Point(a) => {
            let mut p = EffectiveParams::default();
            let set = |x: Option<f64>, field: &mut f64| {
                if let Some(x) = x {
                    *field = x;
                }
            };
            set(a.delta_a, &mut p.delta_a);
            set(a.chi, &mut p.chi_mag);
            set(a.phi, &mut p.phi);
            set(a.kappa, &mut p.kappa);
            set(a.gamma, &mut p.gamma);
            set(a.g, &mut p.coupling_g);
            set(a.nb, &mut p.n_b);
            let report = point::analyze(&p, Quantities::all(), &OptimizerSettings::default())?;
            if a.json {
                let text = serde_json::to_string_pretty(&report).map_err(|e| Failure {
                    code: 2,
                    error: Error::InvalidSettings(e.to_string()),
                })?;
                println!("{text}");
            } else {
                print_report(&report);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.error);
            ExitCode::from(f.code)
        }
    }
}
