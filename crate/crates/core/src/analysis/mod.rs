//! Sweeps, numeric error propagation, the optimal-amplitude search and the
//! figure datasets.

pub mod figures;
mod numeric;
mod optimize;
mod sweep;
pub mod table;

pub use figures::{build_figure, FigureId, FigureOptions};
pub use numeric::{
    intensity_deviation, numeric_sensitivity, richardson_central, IntensityDeviation, Observable,
    FD_STEP, MIN_SLOPE,
};
pub use optimize::{
    default_beta_interval, find_optimal_beta, golden_section, hl_ratio, nonmonotonicity_report,
    NonMonotonicity, OptimalBeta,
};
pub use sweep::{
    sweep, sweep_table, Parameters, RowFlag, SweepBackend, SweepRow, SweepSpec, SweepVariable,
    BACKEND_TOLERANCE,
};
pub use table::Table;
