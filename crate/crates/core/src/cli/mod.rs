//! Command implementations behind the `ccm` binary: text matrices, the
//! `CCM1` container, efficiency experiments and parameter sweeps.

pub mod commands;
pub mod container;
pub mod experiment;
pub mod sweep;
pub mod text;

pub use commands::{
    cmd_compress, cmd_constant_comparison, cmd_decompress, cmd_experiment, cmd_info, cmd_sweep, CompressReport,
};
pub use container::{read_container, write_container};
pub use experiment::{ExperimentRecord, ExperimentRow, ExperimentSpec};
pub use sweep::{SweepMode, SweepResult, SweepSpec};
