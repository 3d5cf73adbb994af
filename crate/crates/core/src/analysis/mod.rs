//! Statistics computed on correlation curves and matrices.

mod decay;
mod fit;
mod lifetimes;
mod scaling;
mod zscore;

pub use decay::{
    decay_fit, plateau_detect, plateau_detect_with, DecayFit, DEFAULT_PLATEAU_TOLERANCE,
};
pub use fit::{least_squares, power_law, LineFit};
pub use lifetimes::{lifetimes, shuffled_curves, LifetimeOptions, LifetimeReport, NullModel};
pub use scaling::{is_local_max, peak_scaling, ScalingFit};
pub use zscore::{period_zscore, ZScoreReport, DETECTABILITY_THRESHOLD};

use crate::engine::CorrMatrix;
use crate::error::{Error, Result};

/// `sum_{i != j} |C_ij| / sum_i |C_ii|`: cross-correlation mass relative to
/// autocorrelation mass.
pub fn offdiag_ratio(matrix: &CorrMatrix) -> Result<f64> {
    let m = matrix.m();
    if m < 2 {
        return Err(Error::invalid("matrix", "need m >= 2"));
    }
    let mut diag = 0.0;
    let mut off = 0.0;
    for ((i, j), v) in matrix.values.indexed_iter() {
        if i == j {
            diag += v.abs();
        } else {
            off += v.abs();
        }
    }
    if diag == 0.0 {
        return Err(Error::DegenerateDiagonal);
    }
    Ok(off / diag)
}
