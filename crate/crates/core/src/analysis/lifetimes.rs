use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::engine::{CorrCurve, EdgeSeries};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::seed;
use crate::trajectory::{Snapshot, Trajectory};

/// How the null trajectories are shuffled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullModel {
    /// Permute the order of whole snapshots. Keeps every snapshot, hence the
    /// activity of each snapshot and the annealed mean, intact.
    #[default]
    SnapshotOrder,
    /// Permute the activity times of every pair independently. Keeps each
    /// pair's total activity but not per-snapshot activity.
    EdgeTime,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifetimeOptions {
    pub n_shuffles: usize,
    pub seed: u64,
    pub null: NullModel,
    /// A crossing only counts as a lifetime when the curve never climbs back
    /// above `revival_fraction * c~(0)` at a later lag.
    pub revival_fraction: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for LifetimeOptions {
    fn default() -> Self {
        LifetimeOptions {
            n_shuffles: 50,
            seed: 0,
            null: NullModel::SnapshotOrder,
            revival_fraction: 0.25,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifetimeReport {
    /// First lag with `c~ <= 0`; `None` when undefined.
    pub tau_clt: Option<usize>,
    /// First lag with `c~` at or below the shuffled-null mean.
    pub tau_aclt: Option<usize>,
    pub lags: Vec<usize>,
    pub null_mean: Vec<f64>,
    pub null_sd: Vec<f64>,
    pub n_shuffles: usize,
    pub null_model: NullModel,
    pub revival_fraction: f64,
    pub seed: u64,
}

/// Centered curves of `n_shuffles` shuffled copies of `traj`, evaluated at
/// `lags`. Replica `k` uses seed `derive(seed, k)`.
pub fn shuffled_curves(
    traj: &Trajectory,
    lags: &[usize],
    opts: &LifetimeOptions,
) -> Result<Vec<CorrCurve>> {
    if traj.len() < 3 {
        return Err(Error::Insufficient(format!(
            "need N >= 3 snapshots to shuffle, got {}",
            traj.len()
        )));
    }
    if opts.n_shuffles == 0 {
        return Err(Error::invalid("n_shuffles", "need at least one shuffle"));
    }
    if let Some(&tau) = lags.iter().find(|&&t| t >= traj.len()) {
        return Err(Error::LagOutOfRange { tau, n: traj.len() });
    }
    let replicas = map_indexed(opts.exec, opts.n_shuffles, |k| {
        let mut rng = seed::rng(seed::derive(opts.seed, k as u64));
        let shuffled = match opts.null {
            NullModel::SnapshotOrder => {
                let mut order: Vec<usize> = (0..traj.len()).collect();
                order.shuffle(&mut rng);
                traj.reordered(&order)
            }
            NullModel::EdgeTime => edge_time_shuffle(traj, &mut rng)?,
        };
        let series = EdgeSeries::new(&shuffled);
        let centered = lags
            .iter()
            .map(|&t| series.centered(t))
            .collect::<Result<Vec<_>>>()?;
        CorrCurve::from_centered(lags.to_vec(), centered)
    });
    replicas.into_iter().collect()
}

fn edge_time_shuffle(traj: &Trajectory, rng: &mut seed::Rng) -> Result<Trajectory> {
    let n = traj.len();
    let mut activity: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for s in traj.snapshots() {
        for e in s.canonical_edges() {
            *activity.entry(e).or_default() += 1;
        }
    }
    let mut lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut times: Vec<usize> = (0..n).collect();
    for (&e, &count) in &activity {
        let (picked, _) = times.partial_shuffle(rng, count);
        for &t in picked.iter() {
            lists[t].push(e);
        }
    }
    let snaps = lists
        .into_iter()
        .map(|l| {
            if traj.is_symmetric() {
                Snapshot::undirected(traj.m(), l)
            } else {
                Snapshot::directed(traj.m(), l)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::build(snaps)
}

/// Correlation lifetime and activity-preserved correlation lifetime.
pub fn lifetimes(
    traj: &Trajectory,
    curve: &CorrCurve,
    opts: &LifetimeOptions,
) -> Result<LifetimeReport> {
    let lags: Vec<usize> = curve.lags().iter().copied().filter(|&t| t >= 1).collect();
    if lags.is_empty() {
        return Err(Error::MissingLag { tau: 1 });
    }
    let values = lags
        .iter()
        .map(|&t| curve.centered_at(t))
        .collect::<Result<Vec<f64>>>()?;
    let scale = match curve.centered_at(0) {
        Ok(c0) => c0,
        Err(_) => values.iter().fold(0.0f64, |a, v| a.max(*v)),
    };
    let revival = opts.revival_fraction * scale;

    let null = shuffled_curves(traj, &lags, opts)?;
    let k = null.len() as f64;
    let mut null_mean = vec![0.0; lags.len()];
    for c in &null {
        for (acc, v) in null_mean.iter_mut().zip(c.centered()) {
            *acc += v;
        }
    }
    null_mean.iter_mut().for_each(|v| *v /= k);
    let null_sd: Vec<f64> = (0..lags.len())
        .map(|i| {
            let var = null
                .iter()
                .map(|c| (c.centered()[i] - null_mean[i]).powi(2))
                .sum::<f64>()
                / k;
            var.sqrt()
        })
        .collect();

    let zero = vec![0.0; lags.len()];
    let tau_clt = first_crossing(&lags, &values, &zero, revival);
    let tau_aclt = first_crossing(&lags, &values, &null_mean, revival);
    Ok(LifetimeReport {
        tau_clt,
        tau_aclt,
        lags,
        null_mean,
        null_sd,
        n_shuffles: opts.n_shuffles,
        null_model: opts.null,
        revival_fraction: opts.revival_fraction,
        seed: opts.seed,
    })
}

/// First lag where `values <= reference`, unless the excess over the
/// reference later climbs back to `revival` or more (periodic curves).
fn first_crossing(
    lags: &[usize],
    values: &[f64],
    reference: &[f64],
    revival: f64,
) -> Option<usize> {
    let idx = values.iter().zip(reference).position(|(v, r)| v <= r)?;
    let revived = values[idx + 1..]
        .iter()
        .zip(&reference[idx + 1..])
        .any(|(v, r)| v - r >= revival);
    if revived {
        None
    } else {
        Some(lags[idx])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_rules() {
        let lags = [1, 2, 3, 4, 5];
        let zero = [0.0; 5];
        assert_eq!(
            first_crossing(&lags, &[3.0, 1.0, -0.1, 0.2, 0.0], &zero, 2.5),
            Some(3)
        );
        assert_eq!(
            first_crossing(&lags, &[3.0, 1.0, -0.1, 2.8, 0.0], &zero, 2.5),
            None
        );
        assert_eq!(
            first_crossing(&lags, &[3.0, 2.0, 1.0, 0.5, 0.1], &zero, 2.5),
            None
        );
    }

    #[test]
    fn too_short_to_shuffle() {
        let t = Trajectory::from_edge_lists(3, true, vec![vec![(0, 1)], vec![]]).unwrap();
        let c = crate::corr_curve(&t, &crate::LagRange::up_to(1)).unwrap();
        assert!(matches!(
            lifetimes(&t, &c, &LifetimeOptions::default()),
            Err(Error::Insufficient(_))
        ));
    }

    #[test]
    fn edge_time_shuffle_keeps_activity() {
        let t = Trajectory::from_edge_lists(
            4,
            true,
            vec![
                vec![(0, 1), (2, 3)],
                vec![(0, 1)],
                vec![],
                vec![(1, 2)],
                vec![(0, 1)],
            ],
        )
        .unwrap();
        let mut rng = seed::rng(4);
        let s = edge_time_shuffle(&t, &mut rng).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.annealed_mean(), t.annealed_mean());
    }

    #[test]
    fn replicas_independent_of_execution() {
        let t = Trajectory::from_edge_lists(
            4,
            true,
            (0..30)
                .map(|k| {
                    if k % 4 == 0 {
                        vec![(0, 1)]
                    } else {
                        vec![(k % 3, 3)]
                    }
                })
                .collect(),
        )
        .unwrap();
        let mut opts = LifetimeOptions {
            n_shuffles: 8,
            seed: 2,
            ..Default::default()
        };
        let lags: Vec<usize> = (1..10).collect();
        let a = shuffled_curves(&t, &lags, &opts).unwrap();
        opts.exec = Execution::Serial;
        let b = shuffled_curves(&t, &lags, &opts).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.centered(), y.centered());
        }
    }
}
