use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_probability, check_size, from_pair_states, unordered_pairs};
use crate::error::{Error, Result};
use crate::seed;
use crate::trajectory::{Snapshot, Trajectory};

/// i.i.d. sequence of Erdos-Renyi graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhiteParams {
    pub m: usize,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    #[serde(default)]
    pub directed: bool,
}

pub fn gen_white(params: &WhiteParams) -> Result<Trajectory> {
    check_size(params.m, params.n)?;
    check_probability("p", params.p)?;
    let mut rng = seed::rng(params.seed);
    let m = params.m;
    if params.directed {
        let snaps = (0..params.n)
            .map(|_| {
                let mut edges = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        if i != j && rng.random_bool(params.p) {
                            edges.push((i, j));
                        }
                    }
                }
                Snapshot::directed(m, edges)
            })
            .collect::<Result<Vec<_>>>()?;
        return Trajectory::build(snaps);
    }
    let pairs = unordered_pairs(m);
    let states: Vec<bool> = (0..params.n * pairs.len())
        .map(|_| rng.random_bool(params.p))
        .collect();
    from_pair_states(m, &pairs, &states, params.n)
}

/// A block of `period` i.i.d. ER(p) graphs tiled to length `n`, then every
/// pair of every snapshot is, with probability `q`, overwritten by a fresh
/// Bernoulli(p) draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicParams {
    pub m: usize,
    pub n: usize,
    pub period: usize,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
}

pub fn gen_periodic(params: &PeriodicParams) -> Result<Trajectory> {
    check_size(params.m, params.n)?;
    check_probability("p", params.p)?;
    check_probability("q", params.q)?;
    if params.period == 0 || params.period > params.n {
        return Err(Error::invalid(
            "period",
            format!("need 1 <= T <= N, got T={} N={}", params.period, params.n),
        ));
    }
    let mut rng = seed::rng(params.seed);
    let pairs = unordered_pairs(params.m);
    let width = pairs.len();
    let base: Vec<bool> = (0..params.period * width)
        .map(|_| rng.random_bool(params.p))
        .collect();
    let mut states = Vec::with_capacity(params.n * width);
    for t in 0..params.n {
        let row = &base[(t % params.period) * width..(t % params.period + 1) * width];
        for &v in row {
            let noisy = rng.random_bool(params.q);
            states.push(if noisy { rng.random_bool(params.p) } else { v });
        }
    }
    from_pair_states(params.m, &pairs, &states, params.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn white(p: f64) -> WhiteParams {
        WhiteParams {
            m: 10,
            n: 40,
            p,
            seed: 3,
            directed: false,
        }
    }

    #[test]
    fn extremes() {
        let t = gen_white(&white(0.0)).unwrap();
        assert!(t.snapshots().iter().all(|s| s.nnz() == 0));
        let t = gen_white(&white(1.0)).unwrap();
        assert!(t.snapshots().iter().all(|s| s.nnz() == 90));
    }

    #[test]
    fn reproducible() {
        assert_eq!(
            gen_white(&white(0.3)).unwrap(),
            gen_white(&white(0.3)).unwrap()
        );
        let mut other = white(0.3);
        other.seed = 4;
        assert_ne!(gen_white(&white(0.3)).unwrap(), gen_white(&other).unwrap());
    }

    #[test]
    fn directed_flag() {
        let mut p = white(0.5);
        p.directed = true;
        let t = gen_white(&p).unwrap();
        assert!(!t.is_symmetric());
        assert!(t.snapshots().iter().any(|s| s
            .edges()
            .iter()
            .any(|&(i, j)| !s.contains(j as usize, i as usize))));
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(gen_white(&white(1.5)).is_err());
    }

    #[test]
    fn noiseless_is_periodic() {
        let params = PeriodicParams {
            m: 8,
            n: 50,
            period: 7,
            p: 0.3,
            q: 0.0,
            seed: 11,
        };
        let t = gen_periodic(&params).unwrap();
        for s in 0..t.len() - 7 {
            assert_eq!(t.snapshot(s), t.snapshot(s + 7));
        }
    }

    #[test]
    fn period_longer_than_trajectory() {
        let params = PeriodicParams {
            m: 8,
            n: 5,
            period: 7,
            p: 0.3,
            q: 0.0,
            seed: 11,
        };
        assert!(matches!(
            gen_periodic(&params),
            Err(Error::InvalidParameter { name: "period", .. })
        ));
    }
}
