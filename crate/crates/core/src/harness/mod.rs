//! Run configuration, file formats and the command pipelines.

mod commands;
mod config;
mod output;

pub use commands::{
    cmd_analytic, cmd_calibrate, cmd_confidence, cmd_purity_sweep, cmd_run, AnalyticReport, CalibrationReport,
    ConfidenceReport, RunReport, Summary, SweepPoint, SweepReport, CONFIDENCE_TARGET, REFERENCE_PWIN,
    REFERENCE_VISIBILITY,
};
pub use config::RunConfig;
pub use output::{format_real, parse_real, read_scan, scan_table, snapshot, write_json, Cell, ParsedTable, Table};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "XORGAME_OUT_DIR";
