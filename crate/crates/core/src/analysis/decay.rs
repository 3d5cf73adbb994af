use serde::{Deserialize, Serialize};

use super::fit::least_squares;
use crate::engine::CorrCurve;
use crate::error::{Error, Result};

pub const DEFAULT_PLATEAU_TOLERANCE: f64 = 0.1;

/// Exponential decay `c~(tau) ~ exp(-beta tau)` fitted over a lag window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub beta: f64,
    pub fit_window: (usize, usize),
    pub r_squared: f64,
    /// Memory order used to place the default window (given or detected).
    pub plateau_end: usize,
    pub intercept: f64,
}

/// End of the flat stretch of `c~` that starts at lag 1; see
/// [`plateau_detect_with`].
pub fn plateau_detect(curve: &CorrCurve) -> Result<usize> {
    plateau_detect_with(curve, DEFAULT_PLATEAU_TOLERANCE)
}

/// Largest `tau*` such that `c~(1..=tau*)` all stay within `tol * |c~(1)|` of
/// `c~(1)`. Returns 0 when `c~(1)` has already fallen below `tol * c~(0)`,
/// i.e. there is no lag-1 correlation above the noise floor to be flat.
pub fn plateau_detect_with(curve: &CorrCurve, tol: f64) -> Result<usize> {
    if curve.len() < 3 {
        return Err(Error::Insufficient(
            "plateau detection needs at least three lags".into(),
        ));
    }
    let c0 = curve.centered_at(0)?;
    let c1 = curve.centered_at(1)?;
    if c1 <= tol * c0 {
        return Ok(0);
    }
    let band = tol * c1.abs();
    let mut end = 1;
    for tau in 2..=curve.max_lag() {
        match curve.centered_at(tau) {
            Ok(v) if (v - c1).abs() <= band => end = tau,
            _ => break,
        }
    }
    Ok(end)
}

/// Least-squares fit of `ln c~(tau)` against `tau`.
///
/// Without an explicit window the fit runs over `[p+1, 2p+1]` where `p` is
/// `order` if given, else the detected plateau end.
pub fn decay_fit(
    curve: &CorrCurve,
    window: Option<(usize, usize)>,
    order: Option<usize>,
) -> Result<DecayFit> {
    let plateau_end = match order {
        Some(p) => p,
        None => plateau_detect(curve)?,
    };
    let (lo, hi) = window.unwrap_or((plateau_end + 1, 2 * plateau_end + 1));
    if lo >= hi {
        return Err(Error::invalid(
            "window",
            format!("need lo < hi, got [{lo}, {hi}]"),
        ));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut bad = Vec::new();
    for tau in lo..=hi {
        let v = curve.centered_at(tau)?;
        if v > 0.0 {
            xs.push(tau as f64);
            ys.push(v.ln());
        } else {
            bad.push(tau);
        }
    }
    if !bad.is_empty() {
        return Err(Error::LogDomain { lags: bad });
    }
    let fit = least_squares(&xs, &ys)?;
    Ok(DecayFit {
        beta: -fit.slope,
        fit_window: (lo, hi),
        r_squared: fit.r_squared,
        plateau_end,
        intercept: fit.intercept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(values: Vec<f64>) -> CorrCurve {
        CorrCurve::from_centered((0..values.len()).collect(), values).unwrap()
    }

    #[test]
    fn exact_exponential() {
        let c = curve((0..12).map(|t| 3.0 * (-0.5 * t as f64).exp()).collect());
        let f = decay_fit(&c, Some((2, 10)), None).unwrap();
        assert!((f.beta - 0.5).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constant_curve_is_flat_fit() {
        let c = curve(vec![2.0; 10]);
        let f = decay_fit(&c, Some((2, 8)), None).unwrap();
        assert!(f.beta.abs() < 1e-12);
        assert_eq!(f.r_squared, 0.0);
    }

    #[test]
    fn log_domain() {
        let c = curve(vec![5.0, 1.0, 0.5, -0.1, 0.2, 0.0]);
        match decay_fit(&c, Some((1, 5)), None) {
            Err(Error::LogDomain { lags }) => assert_eq!(lags, vec![3, 5]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_plateau() {
        let mut v = vec![10.0, 4.0, 4.0, 4.1, 3.9, 4.0];
        v.extend([2.0, 1.0, 0.5]);
        assert_eq!(plateau_detect(&curve(v)).unwrap(), 5);
    }

    #[test]
    fn white_has_no_plateau() {
        assert_eq!(
            plateau_detect(&curve(vec![14.0, 0.1, -0.2, 0.05])).unwrap(),
            0
        );
    }

    #[test]
    fn default_window_from_order() {
        let c = curve((0..20).map(|t| (-0.3 * t as f64).exp()).collect());
        let f = decay_fit(&c, None, Some(3)).unwrap();
        assert_eq!(f.fit_window, (4, 7));
        assert!((f.beta - 0.3).abs() < 1e-10);
    }
}
