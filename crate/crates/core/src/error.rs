use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by trajectory construction, correlation kernels,
/// generators, analysis and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty trajectory: at least one snapshot is required")]
    EmptyTrajectory,

    #[error("dimension mismatch at index {index}: expected m={expected}, found m={found}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("symmetry flag mismatch at index {index}")]
    SymmetryMismatch { index: usize },

    #[error("self-loop ({node},{node}) is not allowed")]
    SelfLoop { node: usize },

    #[error("edge ({i},{j}) out of range for m={m}")]
    NodeOutOfRange { i: usize, j: usize, m: usize },

    #[error("edge ({i},{j}) present without its mirror ({j},{i}) in a symmetric snapshot")]
    Asymmetric { i: usize, j: usize },

    #[error("lag {tau} out of range for a trajectory of {n} snapshots")]
    LagOutOfRange { tau: usize, n: usize },

    #[error("empty lag range")]
    EmptyLagRange,

    #[error("matrix dimension mismatch: expected {expected}x{expected}, found {rows}x{cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "infeasible dictionary after {attempts} attempts: need L-1={needed} <= |E(G1)|={edges} and <= free slots={free}"
    )]
    InfeasibleDictionary {
        attempts: usize,
        needed: usize,
        edges: usize,
        free: usize,
    },

    #[error("logistic iterate left [0,1] at step {step}: x={x}")]
    IterateEscaped { step: usize, x: f64 },

    #[error("curve does not cover lag {tau}")]
    MissingLag { tau: usize },

    #[error("degenerate baseline: standard deviation of c~(1..{period}-1) is zero")]
    DegenerateBaseline { period: usize },

    #[error("degenerate diagonal: diagonal mass is zero")]
    DegenerateDiagonal,

    #[error("log-domain violation: nonpositive values at lags {lags:?}")]
    LogDomain { lags: Vec<usize> },

    #[error("non-monotone peak: c~(0) - c~(2^k) <= 0 for k in {ks:?}")]
    NonMonotonePeak { ks: Vec<u32> },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no events fall inside the binning window")]
    EmptyWindow,

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("writing {path}: {source}")]
    Persist {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Coarse category used by the CLI for machine-readable error reporting.
    pub fn category(&self) -> &'static str {
        match self {
            Error::EmptyTrajectory
            | Error::DimensionMismatch { .. }
            | Error::SymmetryMismatch { .. }
            | Error::SelfLoop { .. }
            | Error::NodeOutOfRange { .. }
            | Error::Asymmetric { .. }
            | Error::MatrixShape { .. } => "structure",
            Error::LagOutOfRange { .. } | Error::EmptyLagRange | Error::InvalidParameter { .. } => {
                "validation"
            }
            Error::InfeasibleDictionary { .. } | Error::IterateEscaped { .. } => "generator",
            Error::MissingLag { .. }
            | Error::DegenerateBaseline { .. }
            | Error::DegenerateDiagonal
            | Error::LogDomain { .. }
            | Error::NonMonotonePeak { .. }
            | Error::Insufficient(_) => "analysis",
            Error::Parse { .. } | Error::EmptyWindow | Error::Json(_) => "input",
            Error::Io { .. } | Error::Persist { .. } => "io",
        }
    }
}
