//! Parameter sweeps: configuration, evaluation, output and presets.

pub mod config;
pub mod emit;
pub mod presets;
pub mod run;
pub mod svg;

pub use config::{parse_number, Axis, Format, Output, SweepConfig};
pub use emit::emit;
pub use presets::{find_dips, Preset, PresetOptions};
pub use run::{run_sweep, run_sweep_with_workers, SweepRecord, SweepResult, WORKERS_ENV};
