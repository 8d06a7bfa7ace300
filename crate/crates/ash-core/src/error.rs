use thiserror::Error;

use crate::model::{EdgeId, NodeId};

pub type Result<T> = std::result::Result<T, AshError>;

/// Errors raised by construction, queries and I/O.
#[derive(Debug, Error)]
pub enum AshError {
    #[error("invalid time axis: start {start} is after end {end}")]
    InvalidTimeAxis { start: i64, end: i64 },

    #[error("interval [{lo}, {hi}] falls outside the time axis [{start}, {end}]")]
    IntervalOutOfRange {
        lo: i64,
        hi: i64,
        start: i64,
        end: i64,
    },

    #[error("instant {t} falls outside the time axis [{start}, {end}]")]
    InstantOutOfRange { t: i64, start: i64, end: i64 },

    #[error("a hyperedge needs at least two distinct nodes, got {0}")]
    TooFewNodes(usize),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("unknown hyperedge {0}")]
    UnknownHyperedge(String),

    #[error("unknown attribute \"{0}\"")]
    UnknownAttribute(String),

    #[error("measure undefined: {0}")]
    UndefinedMeasure(String),

    #[error("hyperedge {edge} is not active at instant {t}")]
    InactiveAtTime { edge: EdgeId, t: i64 },

    #[error("slice [{lo}, {hi}] does not intersect the time axis [{start}, {end}]")]
    EmptySlice {
        lo: i64,
        hi: i64,
        start: i64,
        end: i64,
    },

    #[error("empty interaction stream")]
    EmptyStream,

    #[error("timestamp {ts} precedes the window origin {origin}")]
    TimestampBeforeOrigin { ts: i64, origin: i64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },

    #[error("unsupported schema version \"{0}\" (expected \"ash-1\")")]
    UnsupportedVersion(String),

    #[error("invalid document: {0}")]
    Validation(String),

    #[error("clique cap of {cap} exceeded while enumerating maximal cliques")]
    CliqueCapExceeded { cap: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}
