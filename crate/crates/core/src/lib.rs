//! Correlation functions of network trajectories.
//!
//! A temporal network is read as a trajectory `A(1), ..., A(N)` of a graph
//! dynamical system. This crate computes its lagged correlation matrices and
//! scalar correlation functions, synthesizes benchmark dynamics (white,
//! noisy periodic, discrete autoregressive, logistic-map driven) and runs
//! the downstream statistics: period z-scores, decay fits, correlation
//! lifetimes against a shuffled null, and peak scaling.
//!
//! The lag sweep and the shuffle replicas run on rayon when the `parallel`
//! feature is enabled (the default); results are bit-identical to the
//! serial path.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod formats;
pub mod generators;
pub mod ingest;
pub mod par;
pub mod seed;
pub mod trajectory;

pub use engine::{
    centered_corr_matrix, centered_corr_matrix_with, centered_corr_scalar, corr_curve,
    corr_curve_with, corr_matrix, corr_matrix_with, corr_scalar, CorrCurve, CorrMatrix, EdgeSeries,
    EngineConfig, Kernel, LagRange,
};
pub use error::{Error, Result};
pub use par::Execution;
pub use trajectory::{AnnealedMatrix, IndexSemantics, Snapshot, Trajectory};
