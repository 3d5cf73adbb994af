use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::CorrCurve;
use crate::error::{Error, Result};

pub const DETECTABILITY_THRESHOLD: f64 = 4.0;

/// Period detectability of a candidate period `T`: how far `c~(T)` stands
/// above the inter-period baseline `c~(1..T-1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZScoreReport {
    pub period: usize,
    pub z: f64,
    pub mean_baseline: f64,
    /// Population standard deviation of the baseline.
    pub sd_baseline: f64,
    pub value_at_t: f64,
    pub threshold: f64,
    pub detected: bool,
}

impl fmt::Display for ZScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z={:.2} T={} verdict={} threshold={}",
            self.z,
            self.period,
            if self.detected {
                "DETECTED"
            } else {
                "NOT_DETECTED"
            },
            self.threshold
        )
    }
}

pub fn period_zscore(curve: &CorrCurve, period: usize) -> Result<ZScoreReport> {
    if period < 3 {
        return Err(Error::invalid(
            "period",
            "need T >= 3 for a baseline deviation",
        ));
    }
    let baseline = (1..period)
        .map(|tau| curve.centered_at(tau))
        .collect::<Result<Vec<f64>>>()?;
    let value_at_t = curve.centered_at(period)?;
    let k = baseline.len() as f64;
    let mean = baseline.iter().sum::<f64>() / k;
    let sd = (baseline
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / k)
        .sqrt();
    let scale = baseline.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if sd == 0.0 || sd <= 1e-14 * scale {
        return Err(Error::DegenerateBaseline { period });
    }
    let z = (value_at_t - mean) / sd;
    Ok(ZScoreReport {
        period,
        z,
        mean_baseline: mean,
        sd_baseline: sd,
        value_at_t,
        threshold: DETECTABILITY_THRESHOLD,
        detected: z > DETECTABILITY_THRESHOLD,
    })
}
