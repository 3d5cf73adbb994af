//! Lagged correlation matrices and scalar correlation functions of a
//! trajectory.
//!
//! For a trajectory `A(1..N)` and lag `tau`:
//!
//! ```text
//! C(tau)  = 1/(N-tau) sum_t A(t) A(t+tau)^T
//! c(tau)  = tr C(tau)
//! C~(tau) = 1/(N-tau) sum_t (A(t) - mu)(A(t+tau) - mu)^T,   mu = 1/N sum_t A(t)
//! c~(tau) = tr C~(tau)
//! ```
//!
//! Scalars go through [`EdgeSeries`], one bitset per active entry, so a lag
//! costs `O(E * N / 64)` regardless of `m`. Full matrices use either a sparse
//! column-product kernel or a dense GEMM kernel (see [`Kernel`]).

use std::collections::HashMap;

use ndarray::linalg::general_mat_mul;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::trajectory::{AnnealedMatrix, Snapshot, Trajectory};

/// Dense kernel is only considered up to this many nodes by default.
pub const DEFAULT_DENSE_THRESHOLD: usize = 2048;

/// Inclusive lag range `tau_min..=tau_max` with stride `step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagRange {
    pub tau_min: usize,
    pub tau_max: usize,
    pub step: usize,
}

impl LagRange {
    pub fn new(tau_min: usize, tau_max: usize, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::invalid("step", "must be >= 1"));
        }
        if tau_min > tau_max {
            return Err(Error::EmptyLagRange);
        }
        Ok(LagRange {
            tau_min,
            tau_max,
            step,
        })
    }

    /// `0..=tau_max`, the default sweep.
    pub fn up_to(tau_max: usize) -> Self {
        LagRange {
            tau_min: 0,
            tau_max,
            step: 1,
        }
    }

    pub fn lags(&self) -> Vec<usize> {
        (self.tau_min..=self.tau_max).step_by(self.step).collect()
    }
}

/// An `m x m` correlation matrix at one lag.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrMatrix {
    pub values: Array2<f64>,
    pub lag: usize,
    pub centered: bool,
}

impl CorrMatrix {
    pub fn m(&self) -> usize {
        self.values.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.values.diag().sum()
    }
}

/// `(c(tau), c~(tau))` sampled over ascending lags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrCurve {
    lags: Vec<usize>,
    raw: Vec<f64>,
    centered: Vec<f64>,
}

impl CorrCurve {
    pub fn new(lags: Vec<usize>, raw: Vec<f64>, centered: Vec<f64>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::EmptyLagRange);
        }
        if lags.len() != raw.len() || lags.len() != centered.len() {
            return Err(Error::invalid("curve", "lags and values differ in length"));
        }
        if lags.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("curve", "lags must be strictly ascending"));
        }
        Ok(CorrCurve {
            lags,
            raw,
            centered,
        })
    }

    /// Curve with only centered values known; raw values are set to NaN.
    pub fn from_centered(lags: Vec<usize>, centered: Vec<f64>) -> Result<Self> {
        let raw = vec![f64::NAN; centered.len()];
        CorrCurve::new(lags, raw, centered)
    }

    pub fn lags(&self) -> &[usize] {
        &self.lags
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn centered(&self) -> &[f64] {
        &self.centered
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    pub fn max_lag(&self) -> usize {
        *self.lags.last().expect("curve is nonempty")
    }

    fn position(&self, tau: usize) -> Result<usize> {
        self.lags
            .binary_search(&tau)
            .map_err(|_| Error::MissingLag { tau })
    }

    pub fn raw_at(&self, tau: usize) -> Result<f64> {
        Ok(self.raw[self.position(tau)?])
    }

    pub fn centered_at(&self, tau: usize) -> Result<f64> {
        Ok(self.centered[self.position(tau)?])
    }

    /// Iterator over `(tau, c, c~)`.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.lags
            .iter()
            .zip(&self.raw)
            .zip(&self.centered)
            .map(|((&t, &r), &c)| (t, r, c))
    }

    /// Pointwise mean of curves sampled on identical lags.
    pub fn mean_of(curves: &[CorrCurve]) -> Result<CorrCurve> {
        let first = curves
            .first()
            .ok_or_else(|| Error::Insufficient("no curves to average".into()))?;
        let k = curves.len() as f64;
        let mut raw = vec![0.0; first.len()];
        let mut centered = vec![0.0; first.len()];
        for c in curves {
            if c.lags != first.lags {
                return Err(Error::invalid("curves", "lag grids differ"));
            }
            for (i, (_, r, v)) in c.points().enumerate() {
                raw[i] += r;
                centered[i] += v;
            }
        }
        raw.iter_mut().for_each(|v| *v /= k);
        centered.iter_mut().for_each(|v| *v /= k);
        CorrCurve::new(first.lags.clone(), raw, centered)
    }
}

/// Per-entry activity time series of a trajectory, packed as bitsets.
///
/// Symmetric trajectories keep one series per unordered pair with weight 2,
/// directed ones one series per ordered pair with weight 1.
#[derive(Clone, Debug)]
pub struct EdgeSeries {
    n: usize,
    words: usize,
    weight: u64,
    bits: Vec<u64>,
    /// Per entry, active counts before each word boundary (`words + 1` each).
    cumulative: Vec<u32>,
    totals: Vec<u64>,
}

impl EdgeSeries {
    pub fn new(traj: &Trajectory) -> Self {
        let n = traj.len();
        let words = n.div_ceil(64);
        let sym = traj.is_symmetric();
        let mut ids: HashMap<(u32, u32), usize> = HashMap::new();
        let mut resolved: HashMap<*const Snapshot, Vec<usize>> = HashMap::new();
        let mut bits: Vec<u64> = Vec::new();
        for (t, snap) in traj.snapshots().iter().enumerate() {
            let key = std::sync::Arc::as_ptr(snap);
            let entry = resolved.entry(key).or_insert_with(|| {
                snap.edges()
                    .iter()
                    .filter(|&&(i, j)| !sym || i < j)
                    .map(|&e| {
                        let next = ids.len();
                        *ids.entry(e).or_insert_with(|| {
                            bits.resize((next + 1) * words, 0);
                            next
                        })
                    })
                    .collect()
            });
            for &id in entry.iter() {
                bits[id * words + t / 64] |= 1u64 << (t % 64);
            }
        }
        let count = ids.len();
        let mut cumulative = Vec::with_capacity(count * (words + 1));
        let mut totals = Vec::with_capacity(count);
        for e in 0..count {
            let mut acc = 0u32;
            cumulative.push(0);
            for w in &bits[e * words..(e + 1) * words] {
                acc += w.count_ones();
                cumulative.push(acc);
            }
            totals.push(acc as u64);
        }
        EdgeSeries {
            n,
            words,
            weight: if sym { 2 } else { 1 },
            bits,
            cumulative,
            totals,
        }
    }

    /// Number of distinct entries (pairs) ever active.
    pub fn len(&self) -> usize {
        self.totals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.totals.is_empty()
    }

    pub fn snapshots(&self) -> usize {
        self.n
    }

    fn series(&self, e: usize) -> &[u64] {
        &self.bits[e * self.words..(e + 1) * self.words]
    }

    /// `sum_t x(t) x(t+tau)`.
    fn lagged_overlap(x: &[u64], tau: usize) -> u64 {
        let (q, r) = (tau / 64, tau % 64);
        if q >= x.len() {
            return 0;
        }
        let len = x.len() - q;
        let (head, tail) = (&x[..len], &x[q..]);
        if r == 0 {
            return head
                .iter()
                .zip(tail)
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
        }
        let body: u64 = head
            .iter()
            .zip(tail.windows(2))
            .map(|(a, b)| (a & ((b[0] >> r) | (b[1] << (64 - r)))).count_ones() as u64)
            .sum();
        body + (head[len - 1] & (tail[len - 1] >> r)).count_ones() as u64
    }

    /// Active count of entry `e` over `t in [0, end)`.
    fn prefix_count(&self, e: usize, end: usize) -> u64 {
        let (full, rem) = (end / 64, end % 64);
        let mut acc = self.cumulative[e * (self.words + 1) + full] as u64;
        if rem > 0 {
            acc += (self.series(e)[full] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        acc
    }

    fn check(&self, tau: usize) -> Result<()> {
        if tau >= self.n {
            return Err(Error::LagOutOfRange { tau, n: self.n });
        }
        Ok(())
    }

    /// `sum_t <A(t), A(t+tau)>_F` as an exact integer.
    pub fn overlap_sum(&self, tau: usize) -> Result<u64> {
        self.check(tau)?;
        Ok(self.weight
            * (0..self.len())
                .map(|e| Self::lagged_overlap(self.series(e), tau))
                .sum::<u64>())
    }

    /// `c(tau)`.
    pub fn raw(&self, tau: usize) -> Result<f64> {
        Ok(self.overlap_sum(tau)? as f64 / (self.n - tau) as f64)
    }

    /// `c~(tau)` from exact integer sums:
    ///
    /// `c~ = [N*P - sum_e (s1_e + s2_e) n_e] / (N (N-tau)) + sum_e n_e^2 / N^2`
    ///
    /// with `P` the lagged overlap, `s1_e`/`s2_e` the activity of entry `e`
    /// in the leading/trailing windows of length `N-tau`, `n_e` its total.
    pub fn centered(&self, tau: usize) -> Result<f64> {
        Ok(self.scalars(tau)?.1)
    }

    /// `(c(tau), c~(tau))` in one pass over the series.
    pub fn scalars(&self, tau: usize) -> Result<(f64, f64)> {
        self.check(tau)?;
        let n = self.n as i128;
        let w = self.n - tau;
        let mut overlap_sum: u64 = 0;
        let mut cross: i128 = 0;
        let mut sq: i128 = 0;
        for e in 0..self.len() {
            let x = self.series(e);
            let total = self.totals[e] as i128;
            let overlap = Self::lagged_overlap(x, tau);
            let head = self.prefix_count(e, w) as i128;
            let tail = total - self.prefix_count(e, tau) as i128;
            overlap_sum += overlap;
            cross += n * overlap as i128 - (head + tail) * total;
            sq += total * total;
        }
        let weight = self.weight as f64;
        let nf = self.n as f64;
        let raw = (self.weight * overlap_sum) as f64 / w as f64;
        let centered = weight * (cross as f64 / (nf * w as f64) + sq as f64 / (nf * nf));
        Ok((raw, centered))
    }

    /// `<mu, mu>_F`.
    pub fn mean_frobenius_sq(&self) -> f64 {
        let nf = self.n as f64;
        let sq: u128 = self.totals.iter().map(|&t| (t as u128) * (t as u128)).sum();
        self.weight as f64 * sq as f64 / (nf * nf)
    }

    /// Both scalars over a lag range.
    pub fn curve(&self, range: &LagRange, exec: Execution) -> Result<CorrCurve> {
        if range.tau_max >= self.n {
            return Err(Error::LagOutOfRange {
                tau: range.tau_max,
                n: self.n,
            });
        }
        let lags = range.lags();
        let values = map_indexed(exec, lags.len(), |k| self.scalars(lags[k]));
        let mut raw = Vec::with_capacity(lags.len());
        let mut centered = Vec::with_capacity(lags.len());
        for v in values {
            let (r, c) = v?;
            raw.push(r);
            centered.push(c);
        }
        CorrCurve::new(lags, raw, centered)
    }
}

/// Matrix kernel selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// Dense when `m <= dense_threshold` and mean density exceeds 1/4,
    /// sparse otherwise.
    #[default]
    Auto,
    Sparse,
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub kernel: Kernel,
    pub dense_threshold: usize,
    pub exec: Execution,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            kernel: Kernel::Auto,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            exec: Execution::Parallel,
        }
    }
}

impl EngineConfig {
    fn resolve(&self, traj: &Trajectory) -> Kernel {
        match self.kernel {
            Kernel::Auto => {
                let m = traj.m();
                if m > self.dense_threshold {
                    return Kernel::Sparse;
                }
                let nnz: usize = traj.snapshots().iter().map(|s| s.nnz()).sum();
                let density = nnz as f64 / (traj.len() as f64 * (m * m) as f64);
                if density > 0.25 {
                    Kernel::Dense
                } else {
                    Kernel::Sparse
                }
            }
            k => k,
        }
    }
}

/// Rows of each column: `out[k]` lists every `i` with `A_ik = 1`.
fn column_lists(s: &Snapshot) -> Vec<Vec<u32>> {
    let mut cols = vec![Vec::new(); s.m()];
    for &(i, k) in s.edges() {
        cols[k as usize].push(i);
    }
    cols
}

fn chunk_bounds(len: usize, exec: Execution) -> Vec<(usize, usize)> {
    let chunks = if exec.is_parallel() {
        len.clamp(1, 16)
    } else {
        1
    };
    (0..chunks)
        .map(|c| (c * len / chunks, (c + 1) * len / chunks))
        .filter(|(a, b)| a < b)
        .collect()
}

/// `sum_{t < N-tau} A(t) A(t+tau)^T`, entries are exact integer counts.
fn product_sum(traj: &Trajectory, tau: usize, cfg: &EngineConfig) -> Array2<f64> {
    let m = traj.m();
    let w = traj.len() - tau;
    let kernel = cfg.resolve(traj);
    let parts = chunk_bounds(w, cfg.exec);
    let partial = map_indexed(cfg.exec, parts.len(), |c| {
        let (a, b) = parts[c];
        let mut acc = Array2::<f64>::zeros((m, m));
        match kernel {
            Kernel::Dense => {
                for t in a..b {
                    let x = traj.snapshot(t).to_dense();
                    let y = traj.snapshot(t + tau).to_dense();
                    general_mat_mul(1.0, &x, &y.t(), 1.0, &mut acc);
                }
            }
            _ => {
                for t in a..b {
                    let left = column_lists(traj.snapshot(t));
                    let right = column_lists(traj.snapshot(t + tau));
                    for (li, ri) in left.iter().zip(&right) {
                        for &i in li {
                            let mut row = acc.row_mut(i as usize);
                            for &j in ri {
                                row[j as usize] += 1.0;
                            }
                        }
                    }
                }
            }
        }
        acc
    });
    let mut total = Array2::<f64>::zeros((m, m));
    for p in partial {
        total += &p;
    }
    total
}

/// `sum_{t in [from, to)} A(t)`.
fn window_sum(traj: &Trajectory, from: usize, to: usize) -> Array2<f64> {
    let m = traj.m();
    let mut s = Array2::<f64>::zeros((m, m));
    for t in from..to {
        for &(i, j) in traj.snapshot(t).edges() {
            s[[i as usize, j as usize]] += 1.0;
        }
    }
    s
}

/// `C(tau)`.
pub fn corr_matrix(traj: &Trajectory, tau: usize) -> Result<CorrMatrix> {
    corr_matrix_with(traj, tau, &EngineConfig::default())
}

pub fn corr_matrix_with(traj: &Trajectory, tau: usize, cfg: &EngineConfig) -> Result<CorrMatrix> {
    traj.check_lag(tau)?;
    let mut values = product_sum(traj, tau, cfg);
    values /= (traj.len() - tau) as f64;
    Ok(CorrMatrix {
        values,
        lag: tau,
        centered: false,
    })
}

/// `c(tau) = tr C(tau)`.
pub fn corr_scalar(traj: &Trajectory, tau: usize) -> Result<f64> {
    traj.check_lag(tau)?;
    EdgeSeries::new(traj).raw(tau)
}

/// `C~(tau)` against a given annealed matrix.
///
/// Expands the centered product so the kernel only touches binary data:
/// `C~ = (R - S1 mu^T - mu S2^T) / (N-tau) + mu mu^T` where `R` is the raw
/// product sum and `S1`, `S2` are the sums of the leading and trailing
/// windows.
pub fn centered_corr_matrix(
    traj: &Trajectory,
    tau: usize,
    mu: &AnnealedMatrix,
) -> Result<CorrMatrix> {
    centered_corr_matrix_with(traj, tau, mu, &EngineConfig::default())
}

pub fn centered_corr_matrix_with(
    traj: &Trajectory,
    tau: usize,
    mu: &AnnealedMatrix,
    cfg: &EngineConfig,
) -> Result<CorrMatrix> {
    traj.check_lag(tau)?;
    let m = traj.m();
    let (rows, cols) = mu.values().dim();
    if rows != m || cols != m {
        return Err(Error::MatrixShape {
            expected: m,
            rows,
            cols,
        });
    }
    let n = traj.len();
    let w = (n - tau) as f64;
    let mu = mu.values();
    let raw = product_sum(traj, tau, cfg);
    let head = window_sum(traj, 0, n - tau);
    let tail = window_sum(traj, tau, n);
    let mut values = raw - head.dot(&mu.t()) - mu.dot(&tail.t());
    values /= w;
    values += &mu.dot(&mu.t());
    Ok(CorrMatrix {
        values,
        lag: tau,
        centered: true,
    })
}

/// `c~(tau) = tr C~(tau)` with `mu` taken from the trajectory itself.
pub fn centered_corr_scalar(traj: &Trajectory, tau: usize) -> Result<f64> {
    traj.check_lag(tau)?;
    EdgeSeries::new(traj).centered(tau)
}

/// `(c, c~)` over a lag range.
pub fn corr_curve(traj: &Trajectory, range: &LagRange) -> Result<CorrCurve> {
    corr_curve_with(traj, range, Execution::Parallel)
}

pub fn corr_curve_with(traj: &Trajectory, range: &LagRange, exec: Execution) -> Result<CorrCurve> {
    traj.check_lag(range.tau_max)?;
    EdgeSeries::new(traj).curve(range, exec)
}

/// Gap between the canonical `c~(tau)` (trace of the centered matrix) and
/// the shortcut `c(tau) - <mu, mu>_F`, which ignores the difference between
/// window averages and the global mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortcutDiagnostic {
    pub tau: usize,
    pub canonical: f64,
    pub shortcut: f64,
    pub gap: f64,
}

pub fn shortcut_diagnostic(series: &EdgeSeries, tau: usize) -> Result<ShortcutDiagnostic> {
    let canonical = series.centered(tau)?;
    let shortcut = series.raw(tau)? - series.mean_frobenius_sq();
    Ok(ShortcutDiagnostic {
        tau,
        canonical,
        shortcut,
        gap: canonical - shortcut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_built() -> Trajectory {
        Trajectory::from_edge_lists(
            3,
            true,
            vec![vec![(0, 1)], vec![(0, 1), (1, 2)], vec![(1, 2)]],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_constant() {
        let s = Snapshot::undirected(3, [(0, 1)]).unwrap();
        let t = Trajectory::build(vec![s; 5]).unwrap();
        let c = corr_matrix(&t, 2).unwrap();
        let mut expect = Array2::<f64>::zeros((3, 3));
        expect[[0, 0]] = 1.0;
        expect[[1, 1]] = 1.0;
        assert_eq!(c.values, expect);
        assert!(!c.centered);
        let mu = t.annealed_mean();
        for tau in 0..5 {
            let ct = centered_corr_matrix(&t, tau, &mu).unwrap();
            assert!(ct.values.iter().all(|v| v.abs() < 1e-15));
            assert_eq!(centered_corr_scalar(&t, tau).unwrap(), 0.0);
            assert_eq!(corr_scalar(&t, tau).unwrap(), 2.0);
        }
    }

    #[test]
    fn lag_zero_diagonal_is_mean_degree() {
        let t = hand_built();
        let c = corr_matrix(&t, 0).unwrap();
        // node 1 has degree 1, 2, 1 over the three snapshots
        assert!((c.values[[1, 1]] - 4.0 / 3.0).abs() < 1e-15);
        assert!((c.values[[0, 0]] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hand_built_lag_one() {
        // (N-tau) C(1) = A1 A2^T + A2 A3^T, worked by hand
        let t = hand_built();
        let c = corr_matrix(&t, 1).unwrap();
        let expect = [[1.0, 0.0, 2.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]];
        for ((i, j), v) in c.values.indexed_iter() {
            assert_eq!(v * 2.0, expect[i][j], "entry {i},{j}");
        }
        assert_eq!(corr_scalar(&t, 1).unwrap(), 2.0);
    }

    #[test]
    fn lag_out_of_range() {
        let t = hand_built();
        assert!(matches!(
            corr_matrix(&t, 3),
            Err(Error::LagOutOfRange { tau: 3, n: 3 })
        ));
        assert!(corr_scalar(&t, 3).is_err());
        assert!(corr_curve(&t, &LagRange::up_to(3)).is_err());
    }

    #[test]
    fn mu_shape_checked() {
        let t = hand_built();
        let mu = AnnealedMatrix::from_array(Array2::zeros((4, 4))).unwrap();
        assert!(matches!(
            centered_corr_matrix(&t, 0, &mu),
            Err(Error::MatrixShape { .. })
        ));
    }

    #[test]
    fn kernels_agree() {
        let t = hand_built();
        let mu = t.annealed_mean();
        for tau in 0..3 {
            let mut cfg = EngineConfig {
                kernel: Kernel::Sparse,
                ..Default::default()
            };
            let a = centered_corr_matrix_with(&t, tau, &mu, &cfg).unwrap();
            cfg.kernel = Kernel::Dense;
            let b = centered_corr_matrix_with(&t, tau, &mu, &cfg).unwrap();
            assert_eq!(a.values, b.values);
        }
    }

    #[test]
    fn single_point_curve() {
        let s = Snapshot::undirected(4, [(0, 1), (1, 2)]).unwrap();
        let t = Trajectory::build(vec![s; 3]).unwrap();
        let c = corr_curve(&t, &LagRange::up_to(0)).unwrap();
        assert_eq!(c.lags(), &[0]);
        assert_eq!(c.raw(), &[4.0]);
        assert_eq!(c.centered(), &[0.0]);
    }

    #[test]
    fn shortcut_gap_vanishes_for_constant() {
        let s = Snapshot::undirected(4, [(0, 1)]).unwrap();
        let t = Trajectory::build(vec![s; 4]).unwrap();
        let d = shortcut_diagnostic(&EdgeSeries::new(&t), 1).unwrap();
        assert_eq!(d.gap, 0.0);
    }

    #[test]
    fn bitset_overlap_crosses_words() {
        // series active at every third step, N = 200
        let lists: Vec<Vec<(usize, usize)>> = (0..200)
            .map(|t| if t % 3 == 0 { vec![(0, 1)] } else { vec![] })
            .collect();
        let t = Trajectory::from_edge_lists(2, false, lists).unwrap();
        let s = EdgeSeries::new(&t);
        for tau in 0..200 {
            let brute = (0..200 - tau)
                .filter(|&u| u % 3 == 0 && (u + tau) % 3 == 0)
                .count() as u64;
            assert_eq!(s.overlap_sum(tau).unwrap(), brute, "tau={tau}");
        }
    }
}
