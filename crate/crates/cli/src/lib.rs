//! Configuration, sweeps, figure presets and tabular output for the
//! isoenergetic Rabi cycle.

pub mod config;
pub mod figures;
pub mod sweep;
pub mod table;

pub use config::{parse_config, ConfigError, Grid, MethodSet, OutputFormat, Spacing, SweepConfig};
pub use figures::{figure_dataset, spectrum_table, FigureData, FigureId};
pub use sweep::{evaluate_points, run_sweep, sweep_points, SweepPoint};
pub use table::{SpectrumRow, SpectrumTable, SweepRow, SweepTable, TableError, SPECTRUM_HEADER, SWEEP_HEADER};
