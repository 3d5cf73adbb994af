use serde::{Deserialize, Serialize};

use super::fit::least_squares;
use crate::engine::CorrCurve;
use crate::error::{Error, Result};

/// Power law `c~(0) - c~(T) ~ T^(-alpha)` over periods `T = 2^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub alpha: f64,
    /// `(T, c~(0) - c~(T))` per period.
    pub peaks: Vec<(usize, f64)>,
    pub k_range: (u32, u32),
    pub r_squared: f64,
}

pub fn peak_scaling(curve: &CorrCurve, k_min: u32, k_max: u32) -> Result<ScalingFit> {
    if k_max < k_min || k_max - k_min + 1 < 3 {
        return Err(Error::Insufficient(format!(
            "peak scaling needs at least three periods, got k in [{k_min}, {k_max}]"
        )));
    }
    if k_max >= usize::BITS {
        return Err(Error::invalid("k_max", "period 2^k overflows"));
    }
    let c0 = curve.centered_at(0)?;
    let mut peaks = Vec::new();
    let mut bad = Vec::new();
    for k in k_min..=k_max {
        let period = 1usize << k;
        let gap = c0 - curve.centered_at(period)?;
        if gap <= 0.0 {
            bad.push(k);
        }
        peaks.push((period, gap));
    }
    if !bad.is_empty() {
        return Err(Error::NonMonotonePeak { ks: bad });
    }
    let lx: Vec<f64> = peaks.iter().map(|(t, _)| (*t as f64).ln()).collect();
    let ly: Vec<f64> = peaks.iter().map(|(_, g)| g.ln()).collect();
    let fit = least_squares(&lx, &ly)?;
    Ok(ScalingFit {
        alpha: -fit.slope,
        peaks,
        k_range: (k_min, k_max),
        r_squared: fit.r_squared,
    })
}

/// `c~(tau)` strictly exceeds both neighbours.
pub fn is_local_max(curve: &CorrCurve, tau: usize) -> Result<bool> {
    if tau == 0 {
        return Ok(false);
    }
    let (before, v, after) = (
        curve.centered_at(tau - 1)?,
        curve.centered_at(tau)?,
        curve.centered_at(tau + 1)?,
    );
    Ok(v > before && v > after)
}
