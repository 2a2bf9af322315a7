use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("node {0} has no neighbours and cannot seed a walk")]
    IsolatedSeed(usize),

    #[error("every entry of the constrained step clipped to zero")]
    AllZero,

    #[error("ranked node list is empty")]
    EmptyRanking,

    #[error("node set is empty")]
    EmptySet,

    #[error("conductance is undefined for a set whose complement has zero volume")]
    UndefinedConductance,

    #[error("node {node} is not covered by any community")]
    IncompleteCover { node: usize },

    #[error("cover has no communities")]
    EmptyCover,

    #[error("covers disagree on node count ({left} vs {right})")]
    CoverSizeMismatch { left: usize, right: usize },

    #[error("line {line}: unknown node label {label:?}")]
    UnknownLabel { line: usize, label: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("dense computation limited to {cap} nodes (graph has {node_count}); use the per-seed API")]
    DenseCapExceeded { node_count: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
