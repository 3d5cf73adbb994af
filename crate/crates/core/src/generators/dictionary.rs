use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_probability, unordered_pairs};
use crate::error::{Error, Result};
use crate::seed;
use crate::trajectory::{Snapshot, Trajectory};

/// Accumulation point of the period-doubling cascade of the logistic map.
pub const R_INFINITY: f64 = 3.569_945_6;

const DICTIONARY_ATTEMPTS: usize = 32;

/// One rewiring: `(removed, inserted)` unordered pairs.
pub type Rewiring = ((usize, usize), (usize, usize));

/// Graphs `G_1..G_L` on `m` nodes with `dist(G_a, G_b) = |a - b|`.
///
/// `G_1 ~ ER(p)`; `G_{l+1}` removes one edge of `G_1` that no earlier step
/// removed and inserts one edge at a slot that no earlier graph occupied.
#[derive(Clone, Debug)]
pub struct Dictionary {
    m: usize,
    p: f64,
    seed: u64,
    steps: Vec<Rewiring>,
    graphs: Vec<Arc<Snapshot>>,
}

impl Dictionary {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `G_{l+1}` for 0-based `l`.
    pub fn graph(&self, l: usize) -> &Arc<Snapshot> {
        &self.graphs[l]
    }

    /// `(removed, inserted)` pair of each rewiring step.
    pub fn rewirings(&self) -> &[Rewiring] {
        &self.steps
    }

    /// Half the size of the symmetric difference of the undirected edge sets.
    pub fn distance(a: &Snapshot, b: &Snapshot) -> usize {
        let ea: HashSet<_> = a.canonical_edges().collect();
        let eb: HashSet<_> = b.canonical_edges().collect();
        ea.symmetric_difference(&eb).count() / 2
    }
}

pub fn build_dictionary(m: usize, l: usize, p: f64, seed: u64) -> Result<Dictionary> {
    if m < 2 {
        return Err(Error::invalid("m", "need at least two nodes"));
    }
    if l == 0 {
        return Err(Error::invalid("l", "dictionary needs at least one graph"));
    }
    check_probability("p", p)?;
    let mut rng = seed::rng(seed);
    let needed = l - 1;
    let mut last = (0, 0);
    for _ in 0..DICTIONARY_ATTEMPTS {
        let (mut present, mut absent): (Vec<_>, Vec<_>) = unordered_pairs(m)
            .into_iter()
            .partition(|_| rng.random_bool(p));
        last = (present.len(), absent.len());
        if present.len() < needed || absent.len() < needed {
            continue;
        }
        let base = present.clone();
        present.shuffle(&mut rng);
        absent.shuffle(&mut rng);
        let steps: Vec<_> = present.into_iter().zip(absent).take(needed).collect();

        let mut current: HashSet<(usize, usize)> = base.iter().copied().collect();
        let mut graphs = Vec::with_capacity(l);
        graphs.push(Arc::new(Snapshot::undirected(m, base.iter().copied())?));
        for &(out, inn) in &steps {
            current.remove(&out);
            current.insert(inn);
            graphs.push(Arc::new(Snapshot::undirected(m, current.iter().copied())?));
        }
        return Ok(Dictionary {
            m,
            p,
            seed,
            steps,
            graphs,
        });
    }
    Err(Error::InfeasibleDictionary {
        attempts: DICTIONARY_ATTEMPTS,
        needed,
        edges: last.0,
        free: last.1,
    })
}

/// Logistic map driving a walk through a graph dictionary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub r: f64,
    pub x0: f64,
    pub n: usize,
    #[serde(default = "default_transient")]
    pub transient: usize,
}

fn default_transient() -> usize {
    1000
}

/// `n` iterates of `x -> r x (1 - x)` after `transient` discarded steps.
pub fn logistic_orbit(params: &LogisticParams) -> Result<Vec<f64>> {
    if !(params.r > 0.0 && params.r <= 4.0) {
        return Err(Error::invalid(
            "r",
            format!("need 0 < r <= 4, got {}", params.r),
        ));
    }
    if !(params.x0 > 0.0 && params.x0 < 1.0) {
        return Err(Error::invalid(
            "x0",
            format!("need 0 < x0 < 1, got {}", params.x0),
        ));
    }
    if params.n == 0 {
        return Err(Error::invalid("n", "need at least one snapshot"));
    }
    let mut x = params.x0;
    let mut out = Vec::with_capacity(params.n);
    for step in 0..params.transient + params.n {
        x = params.r * x * (1.0 - x);
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::IterateEscaped { step, x });
        }
        if step >= params.transient {
            out.push(x);
        }
    }
    Ok(out)
}

/// 0-based dictionary cell of `x` under the partition
/// `(l/L, (l+1)/L] -> G_{l+1}`; `x = 0` goes to the first cell.
pub fn cell_index(x: f64, l: usize) -> usize {
    let c = (x * l as f64).ceil() as usize;
    c.clamp(1, l) - 1
}

pub fn gen_logistic(params: &LogisticParams, dictionary: &Dictionary) -> Result<Trajectory> {
    let orbit = logistic_orbit(params)?;
    let l = dictionary.len();
    let snaps = orbit
        .iter()
        .map(|&x| Arc::clone(dictionary.graph(cell_index(x, l))))
        .collect();
    Trajectory::from_shared(snaps)
}
