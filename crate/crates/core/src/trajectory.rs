//! Snapshots, trajectories and the annealed adjacency matrix.

use std::sync::Arc;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One binary adjacency matrix, stored as the sorted set of its nonzero
/// entries `(i, j)`. Symmetric snapshots hold both `(i, j)` and `(j, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Snapshot {
    m: usize,
    symmetric: bool,
    edges: Vec<(u32, u32)>,
}

impl Snapshot {
    /// Builds a snapshot from ordered pairs. Duplicates are merged. For a
    /// symmetric snapshot every pair must come with its mirror.
    pub fn new<I>(m: usize, symmetric: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if m == 0 {
            return Err(Error::invalid("m", "node count must be positive"));
        }
        if m > u32::MAX as usize {
            return Err(Error::invalid("m", "node count exceeds u32 range"));
        }
        let mut out = Vec::new();
        for (i, j) in edges {
            check_pair(m, i, j)?;
            out.push((i as u32, j as u32));
        }
        out.sort_unstable();
        out.dedup();
        let snap = Snapshot {
            m,
            symmetric,
            edges: out,
        };
        if symmetric {
            if let Some(&(i, j)) = snap
                .edges
                .iter()
                .find(|&&(i, j)| !snap.contains(j as usize, i as usize))
            {
                return Err(Error::Asymmetric {
                    i: i as usize,
                    j: j as usize,
                });
            }
        }
        Ok(snap)
    }

    /// Symmetric snapshot from unordered pairs; each pair is mirrored.
    pub fn undirected<I>(m: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut both = Vec::new();
        for (i, j) in pairs {
            both.push((i, j));
            both.push((j, i));
        }
        Snapshot::new(m, true, both)
    }

    pub fn directed<I>(m: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Snapshot::new(m, false, edges)
    }

    pub fn empty(m: usize, symmetric: bool) -> Result<Self> {
        Snapshot::new(m, symmetric, std::iter::empty())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Nonzero entries in row-major order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Number of nonzero entries, i.e. `<A, A>_F`.
    pub fn nnz(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        if i >= self.m || j >= self.m {
            return false;
        }
        self.edges.binary_search(&(i as u32, j as u32)).is_ok()
    }

    /// Pairs with `i < j` for symmetric snapshots; all entries otherwise.
    pub fn canonical_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let sym = self.symmetric;
        self.edges
            .iter()
            .filter(move |&&(i, j)| !sym || i < j)
            .map(|&(i, j)| (i as usize, j as usize))
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut a = Array2::zeros((self.m, self.m));
        for &(i, j) in &self.edges {
            a[[i as usize, j as usize]] = 1.0;
        }
        a
    }
}

fn check_pair(m: usize, i: usize, j: usize) -> Result<()> {
    if i >= m || j >= m {
        return Err(Error::NodeOutOfRange { i, j, m });
    }
    if i == j {
        return Err(Error::SelfLoop { node: i });
    }
    Ok(())
}

/// What the ordering index of a trajectory stands for.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IndexSemantics {
    /// Time ordering; `resolution` is the snapshot width in seconds when known.
    Time {
        resolution: Option<f64>,
    },
    Space,
    #[default]
    Other,
}

/// Ordered sequence of snapshots over a fixed labelled vertex set.
///
/// Snapshots are reference counted so that trajectories which revisit the
/// same graph (dictionary driven dynamics, shuffled null models) share
/// storage.
#[derive(Clone, Debug)]
pub struct Trajectory {
    m: usize,
    symmetric: bool,
    snapshots: Vec<Arc<Snapshot>>,
    index: IndexSemantics,
    labels: Option<Vec<String>>,
}

impl PartialEq for Trajectory {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.symmetric == other.symmetric
            && self.snapshots.len() == other.snapshots.len()
            && self
                .snapshots
                .iter()
                .zip(&other.snapshots)
                .all(|(a, b)| a == b)
    }
}

impl Trajectory {
    /// Assembles and validates a trajectory.
    pub fn build(snapshots: Vec<Snapshot>) -> Result<Self> {
        Trajectory::from_shared(snapshots.into_iter().map(Arc::new).collect())
    }

    pub fn from_shared(snapshots: Vec<Arc<Snapshot>>) -> Result<Self> {
        let first = snapshots.first().ok_or(Error::EmptyTrajectory)?;
        let (m, symmetric) = (first.m(), first.is_symmetric());
        for (index, s) in snapshots.iter().enumerate() {
            if s.m() != m {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: m,
                    found: s.m(),
                });
            }
            if s.is_symmetric() != symmetric {
                return Err(Error::SymmetryMismatch { index });
            }
        }
        Ok(Trajectory {
            m,
            symmetric,
            snapshots,
            index: IndexSemantics::Other,
            labels: None,
        })
    }

    /// Convenience constructor from raw edge lists, one per snapshot.
    pub fn from_edge_lists(
        m: usize,
        symmetric: bool,
        lists: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let snaps = lists
            .into_iter()
            .map(|l| {
                if symmetric {
                    Snapshot::undirected(m, l)
                } else {
                    Snapshot::directed(m, l)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Trajectory::build(snaps)
    }

    pub fn with_index(mut self, index: IndexSemantics) -> Self {
        self.index = index;
        self
    }

    /// Attaches original node identifiers; `labels[i]` names node `i`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::invalid(
                "labels",
                format!("expected {} labels, got {}", self.m, labels.len()),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Number of snapshots N.
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn index(&self) -> &IndexSemantics {
        &self.index
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn snapshot(&self, t: usize) -> &Snapshot {
        &self.snapshots[t]
    }

    pub fn snapshots(&self) -> &[Arc<Snapshot>] {
        &self.snapshots
    }

    /// Checks `0 <= tau <= N-1`.
    pub fn check_lag(&self, tau: usize) -> Result<()> {
        if tau >= self.len() {
            return Err(Error::LagOutOfRange { tau, n: self.len() });
        }
        Ok(())
    }

    /// Entrywise time average of the adjacency matrices.
    pub fn annealed_mean(&self) -> AnnealedMatrix {
        let mut mu = Array2::<f64>::zeros((self.m, self.m));
        for s in &self.snapshots {
            for &(i, j) in s.edges() {
                mu[[i as usize, j as usize]] += 1.0;
            }
        }
        mu /= self.len() as f64;
        AnnealedMatrix(mu)
    }

    /// Same snapshots in the order given by `order` (a permutation of 0..N).
    pub fn reordered(&self, order: &[usize]) -> Trajectory {
        assert_eq!(order.len(), self.len());
        Trajectory {
            snapshots: order
                .iter()
                .map(|&t| Arc::clone(&self.snapshots[t]))
                .collect(),
            ..self.clone()
        }
    }

    /// Relabels nodes: node `i` becomes `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Trajectory> {
        if perm.len() != self.m {
            return Err(Error::invalid("perm", "length must equal m"));
        }
        let snaps = self
            .snapshots
            .iter()
            .map(|s| {
                Snapshot::new(
                    self.m,
                    self.symmetric,
                    s.edges()
                        .iter()
                        .map(|&(i, j)| (perm[i as usize], perm[j as usize])),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = Trajectory::build(snaps)?;
        out.index = self.index.clone();
        Ok(out)
    }
}

/// `mu = (1/N) sum_t A(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnealedMatrix(Array2<f64>);

impl AnnealedMatrix {
    /// Wraps a caller supplied mean, e.g. for null-model experiments.
    pub fn from_array(values: Array2<f64>) -> Result<Self> {
        let (r, c) = values.dim();
        if r != c {
            return Err(Error::MatrixShape {
                expected: r,
                rows: r,
                cols: c,
            });
        }
        Ok(AnnealedMatrix(values))
    }

    pub fn m(&self) -> usize {
        self.0.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    /// `<mu, mu>_F`.
    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }
}
