//! Parameter sweeps over `(kappa, g1d)`, with CSV and gnuplot output.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{emit_config, parse_config, KGridSpec, Observable, SweepConfig};
pub use output::{emit_gnuplot_data, ResultRow};
pub use run::{run_sweep, Manifest, PointFailure};
