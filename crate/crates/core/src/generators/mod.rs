//! Seeded synthetic graph dynamical systems.
//!
//! All per-edge dynamics run on unordered pairs `{i, j}` and are mirrored into
//! symmetric snapshots (white networks can optionally be directed). Each
//! generator owns an explicit RNG stream built from its `seed`; identical
//! parameters give bit-identical trajectories.

mod darn;
mod dictionary;
mod white;

pub use darn::{gen_darn, gen_darn_cross, DarnCrossParams, DarnParams};
pub use dictionary::{
    build_dictionary, cell_index, gen_logistic, logistic_orbit, Dictionary, LogisticParams,
    Rewiring, R_INFINITY,
};
pub use white::{gen_periodic, gen_white, PeriodicParams, WhiteParams};

use crate::error::{Error, Result};
use crate::trajectory::{Snapshot, Trajectory};

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(name, format!("{p} is not a probability")));
    }
    Ok(())
}

pub(crate) fn check_size(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid("m", "need at least two nodes"));
    }
    if n == 0 {
        return Err(Error::invalid("n", "need at least one snapshot"));
    }
    Ok(())
}

/// Unordered pairs `i < j` in row-major order.
pub(crate) fn unordered_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

/// Position of `{i, j}` (`i < j`) in [`unordered_pairs`].
pub(crate) fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// Builds a symmetric trajectory from per-step pair states, laid out as
/// `states[t * pairs.len() + k]`.
pub(crate) fn from_pair_states(
    m: usize,
    pairs: &[(usize, usize)],
    states: &[bool],
    n: usize,
) -> Result<Trajectory> {
    let width = pairs.len();
    let snaps = (0..n)
        .map(|t| {
            let row = &states[t * width..(t + 1) * width];
            Snapshot::undirected(
                m,
                pairs.iter().zip(row).filter(|(_, &on)| on).map(|(&p, _)| p),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::build(snaps)
}
