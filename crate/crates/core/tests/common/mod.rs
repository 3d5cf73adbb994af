#![allow(dead_code)]

use ndarray::Array2;
use netcorr::{Snapshot, Trajectory};
use rand::Rng;

pub fn dense(traj: &Trajectory) -> Vec<Array2<f64>> {
    traj.snapshots().iter().map(|s| s.to_dense()).collect()
}

pub fn brute_mean(a: &[Array2<f64>]) -> Array2<f64> {
    let m = a[0].nrows();
    let mut mu = Array2::zeros((m, m));
    for s in a {
        for i in 0..m {
            for j in 0..m {
                mu[[i, j]] += s[[i, j]];
            }
        }
    }
    mu / a.len() as f64
}

/// `1/(N-tau) sum_t sum_k (A_ik(t) - mu_ik)(A_jk(t+tau) - mu_jk)`, one entry
/// at a time.
pub fn brute_corr(a: &[Array2<f64>], tau: usize, mu: Option<&Array2<f64>>) -> Array2<f64> {
    let n = a.len();
    let m = a[0].nrows();
    let at = |t: usize, i: usize, k: usize| a[t][[i, k]] - mu.map_or(0.0, |mu| mu[[i, k]]);
    let mut c = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            let mut s = 0.0;
            for t in 0..n - tau {
                for k in 0..m {
                    s += at(t, i, k) * at(t + tau, j, k);
                }
            }
            c[[i, j]] = s / (n - tau) as f64;
        }
    }
    c
}

pub fn trace(c: &Array2<f64>) -> f64 {
    c.diag().sum()
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn random_trajectory<R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    symmetric: bool,
    density: f64,
) -> Trajectory {
    let snaps = (0..n)
        .map(|_| {
            let mut edges = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    let wanted = if symmetric { i < j } else { i != j };
                    if wanted && rng.random_bool(density) {
                        edges.push((i, j));
                    }
                }
            }
            if symmetric {
                Snapshot::undirected(m, edges)
            } else {
                Snapshot::directed(m, edges)
            }
            .unwrap()
        })
        .collect();
    Trajectory::build(snaps).unwrap()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation.
pub fn sd(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}
