//! Seeded experiments: configuration, single interactions, run orchestration,
//! aggregation, CSV emission and figure recipes.

pub mod config;
pub mod csv_io;
pub mod experiments;
pub mod figures;
pub mod interaction;
pub mod runner;

pub use config::*;
pub use csv_io::{audit_coverage, read_csv, sim_rows, write_csv, BoundSweepRow, CsvRow, QueryCountRow, RmseRow, SimRow};
pub use experiments::{
    bound_sweep, log_sweep, miss_rate, queries_answered, rmse_experiment, QueryCount, RmseConfig, RmseMechanism,
    RmsePoint, SweepVar,
};
pub use figures::{run_figure, FigureId, Scale};
pub use interaction::{run_interaction, RunOutcome};
pub use runner::{map_runs, map_runs_sequential, mean_std, run_experiment, run_experiment_sequential};
