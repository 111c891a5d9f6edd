use crate::{EdgeId, Mode, VertexId, Weight};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no alive edge ({tail}, {head})")]
    NoSuchEdge { tail: VertexId, head: VertexId },
    #[error("edge id {0} is not alive")]
    DeadEdge(EdgeId),
    #[error("{op} is not permitted in {mode:?} mode")]
    ModeViolation { op: &'static str, mode: Mode },
    #[error("weight {weight} outside [1, {max}]")]
    WeightOutOfRange { weight: Weight, max: Weight },
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("bad split: {0}")]
    BadSplit(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
