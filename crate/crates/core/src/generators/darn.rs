use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_probability, check_size, from_pair_states, pair_index, unordered_pairs};
use crate::error::{Error, Result};
use crate::seed;
use crate::trajectory::Trajectory;

/// Discrete autoregressive network of order `order`.
///
/// Every pair evolves on its own: with probability `q` it copies its state
/// from `Z` steps back, `Z` uniform on `1..=order`; otherwise it draws a
/// fresh Bernoulli(`y`) state. The first `order` steps are Bernoulli(`y`)
/// and the first `burn_in` steps (default `10 * order`) are discarded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarnParams {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    pub q: f64,
    pub y: f64,
    pub seed: u64,
    #[serde(default)]
    pub burn_in: Option<usize>,
}

impl DarnParams {
    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or(10 * self.order)
    }

    fn validate(&self) -> Result<()> {
        check_size(self.m, self.n)?;
        check_probability("q", self.q)?;
        check_probability("y", self.y)?;
        if self.order == 0 {
            return Err(Error::invalid("order", "memory order must be >= 1"));
        }
        Ok(())
    }
}

/// Order-1 DARN in which a copy event, with probability `w`, reads the
/// previous state of the donor pair `{i, (j + shift) mod m}` instead of the
/// pair's own. Donors that collapse onto the pair itself or onto a self-loop
/// fall back to the pair's own past.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarnCrossParams {
    pub base: DarnParams,
    pub w: f64,
    #[serde(default = "default_shift")]
    pub shift: usize,
}

fn default_shift() -> usize {
    2
}

pub fn gen_darn(params: &DarnParams) -> Result<Trajectory> {
    params.validate()?;
    simulate(params, None)
}

pub fn gen_darn_cross(params: &DarnCrossParams) -> Result<Trajectory> {
    let base = &params.base;
    base.validate()?;
    if base.order != 1 {
        return Err(Error::invalid(
            "order",
            "cross-sampled DARN is defined for order 1",
        ));
    }
    check_probability("w", params.w)?;
    if params.shift.is_multiple_of(base.m) {
        return Err(Error::invalid(
            "shift",
            "shift = 0 mod m makes every donor the pair itself",
        ));
    }
    let m = base.m;
    let donors: Vec<usize> = unordered_pairs(m)
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let jj = (j + params.shift) % m;
            if jj == i {
                k
            } else {
                pair_index(m, i.min(jj), i.max(jj))
            }
        })
        .collect();
    simulate(base, Some((params.w, &donors)))
}

fn simulate(params: &DarnParams, cross: Option<(f64, &[usize])>) -> Result<Trajectory> {
    let mut rng = seed::rng(params.seed);
    let pairs = unordered_pairs(params.m);
    let width = pairs.len();
    let burn = params.burn_in();
    let total = burn + params.n;
    let mut states = vec![false; total * width];
    for t in 0..total {
        for k in 0..width {
            let v = if t < params.order {
                rng.random_bool(params.y)
            } else if rng.random_bool(params.q) {
                let z = rng.random_range(1..=params.order);
                let source = match cross {
                    Some((w, donors)) if rng.random_bool(w) => donors[k],
                    _ => k,
                };
                states[(t - z) * width + source]
            } else {
                rng.random_bool(params.y)
            };
            states[t * width + k] = v;
        }
    }
    from_pair_states(params.m, &pairs, &states[burn * width..], params.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(order: usize, q: f64) -> DarnParams {
        DarnParams {
            m: 6,
            n: 300,
            order,
            q,
            y: 0.3,
            seed: 5,
            burn_in: None,
        }
    }

    #[test]
    fn copy_only_chain_freezes() {
        let p = DarnParams {
            m: 2,
            n: 50,
            order: 1,
            q: 1.0,
            y: 0.5,
            seed: 1,
            burn_in: Some(0),
        };
        let t = gen_darn(&p).unwrap();
        let first = t.snapshot(0).clone();
        assert!(t.snapshots().iter().all(|s| **s == first));
        assert_eq!(crate::centered_corr_scalar(&t, 3).unwrap(), 0.0);
    }

    #[test]
    fn stationary_mean_is_innovation_mean() {
        let p = DarnParams {
            m: 2,
            n: 200_000,
            order: 3,
            q: 0.6,
            y: 0.1,
            seed: 9,
            burn_in: None,
        };
        let t = gen_darn(&p).unwrap();
        let freq = t.snapshots().iter().filter(|s| s.nnz() > 0).count() as f64 / p.n as f64;
        // effective sample size shrinks by (1+rho)/(1-rho) ~ 3 for these params
        let se = (0.1 * 0.9 * 3.0 / p.n as f64).sqrt();
        assert!((freq - 0.1).abs() < 5.0 * se, "freq={freq}");
    }

    #[test]
    fn validation() {
        assert!(gen_darn(&base(0, 0.5)).is_err());
        assert!(gen_darn(&base(1, 1.2)).is_err());
        let c = DarnCrossParams {
            base: base(2, 0.6),
            w: 0.5,
            shift: 2,
        };
        assert!(gen_darn_cross(&c).is_err());
        let c = DarnCrossParams {
            base: base(1, 0.6),
            w: 0.5,
            shift: 6,
        };
        assert!(matches!(
            gen_darn_cross(&c),
            Err(Error::InvalidParameter { name: "shift", .. })
        ));
    }

    #[test]
    fn reproducible() {
        let c = DarnCrossParams {
            base: base(1, 0.6),
            w: 0.5,
            shift: 2,
        };
        assert_eq!(gen_darn_cross(&c).unwrap(), gen_darn_cross(&c).unwrap());
        assert_eq!(
            gen_darn(&base(3, 0.6)).unwrap(),
            gen_darn(&base(3, 0.6)).unwrap()
        );
    }
}
