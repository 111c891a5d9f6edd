//! Workload generation, timed runs against the static oracles, and CSV
//! reporting for the dynamic graph structures of this workspace.

pub mod report;
pub mod run;
pub mod workload;

pub use report::{merge, read_csv, read_summary, write_csv, write_summary, Merged};
pub use run::{run, Algo, Row, RunConfig, RunReport, Summary};
pub use workload::{gen, GenParams, Model, Workload, WorkloadMode};

use graph_core::GraphError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("malformed input: {0}")]
    Parse(#[from] GraphError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{algo} does not accept {mode} workloads")]
    IncompatibleMode { algo: &'static str, mode: &'static str },
    #[error("structure rejected the input: {0}")]
    Structure(String),
    #[error("verification failed at stage {stage}: {witness}")]
    VerificationFailure { stage: u64, witness: String },
}

impl BenchError {
    /// Process exit status: 2 for a failed check, 3 for anything the input
    /// or the environment caused.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::VerificationFailure { .. } => 2,
            _ => 3,
        }
    }
}
