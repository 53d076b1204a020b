//! Spectral community assignment and sequential selection of a common
//! community count across several networks.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sample_sbm, AdjacencyMatrix, BlockProbabilityMatrix, CommunityPartition};
use crate::rng::RandomSeed;

const KMEANS_RESTARTS: usize = 10;
const KMEANS_MAX_ITER: usize = 100;

/// Result of one k-means run: labels and within-cluster sum of squares.
#[derive(Clone, Debug, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn kmeans_once(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> KMeansFit {
    let n = points.len();
    let dim = points[0].len();

    // k-means++ seeding.
    let mut centers: Vec<Vec<f64>> = vec![points[rng.random_range(0..n)].clone()];
    let mut nearest: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in nearest.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        centers.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(p, &centers[centers.len() - 1]));
        }
    }

    let mut labels = vec![usize::MAX; n];
    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let best = (0..k)
                .min_by(|&a, &b| sq_dist(p, &centers[a]).total_cmp(&sq_dist(p, &centers[b])))
                .unwrap_or(0);
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        repair_empty(points, &mut labels, &centers, k);

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
        }
        if !changed {
            break;
        }
    }
    let inertia = points.iter().zip(&labels).map(|(p, &l)| sq_dist(p, &centers[l])).sum();
    KMeansFit { labels, inertia }
}

/// Moves the point farthest from its center into each empty cluster.
fn repair_empty(points: &[Vec<f64>], labels: &mut [usize], centers: &[Vec<f64>], k: usize) {
    loop {
        let mut counts = vec![0usize; k];
        for &l in labels.iter() {
            counts[l] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let donor = (0..points.len())
            .filter(|&i| counts[labels[i]] > 1)
            .max_by(|&a, &b| {
                sq_dist(&points[a], &centers[labels[a]]).total_cmp(&sq_dist(&points[b], &centers[labels[b]]))
            })
            .expect("n >= k leaves a cluster with two or more points");
        labels[donor] = empty;
    }
}

/// Renumbers labels in order of first appearance.
fn canonicalize(labels: &[usize], k: usize) -> Vec<usize> {
    let mut map = vec![usize::MAX; k];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect()
}

/// Seeded k-means++ with restarts; the lowest-inertia run wins.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: &RandomSeed) -> Result<KMeansFit> {
    if k == 0 || points.len() < k {
        return Err(Error::InvalidParameter(format!(
            "k-means needs 1 <= k <= number of points (k = {k}, points = {})",
            points.len()
        )));
    }
    let mut best: Option<KMeansFit> = None;
    for r in 0..KMEANS_RESTARTS {
        let mut rng = seed.derive(r as u64).rng();
        let fit = kmeans_once(points, k, &mut rng);
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    let mut fit = best.expect("at least one restart");
    fit.labels = canonicalize(&fit.labels, k);
    Ok(fit)
}

fn to_dmatrix(a: &AdjacencyMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.n(), a.n(), &a.to_f64())
}

/// Clusters the rows of the `k` leading eigenvectors (by absolute
/// eigenvalue) of the adjacency matrix.
pub fn spectral_partition(a: &AdjacencyMatrix, k: usize, seed: &RandomSeed) -> Result<CommunityPartition> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= K <= n (K = {k}, n = {n})")));
    }
    if k == 1 {
        return CommunityPartition::from_labels(vec![0; n], 1);
    }
    let eig = SymmetricEigen::new(to_dmatrix(a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[y]
            .abs()
            .total_cmp(&eig.eigenvalues[x].abs())
            .then(x.cmp(&y))
    });
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| order[..k].iter().map(|&c| eig.eigenvectors[(i, c)]).collect())
        .collect();
    let fit = kmeans(&points, k, seed)?;
    CommunityPartition::from_labels(fit.labels, k)
}

/// Block probabilities tolerant of singleton communities (their
/// within-block estimate is 0).
fn fitted_blocks(a: &AdjacencyMatrix, part: &CommunityPartition) -> Result<BlockProbabilityMatrix> {
    let k = part.k();
    let sizes = part.block_sizes();
    let mut counts = vec![vec![0usize; k]; k];
    for i in 0..a.n() {
        for j in 0..a.n() {
            if a.has_edge(i, j) {
                counts[part.label(i)][part.label(j)] += 1;
            }
        }
    }
    let rows = (0..k)
        .map(|u| {
            (0..k)
                .map(|v| {
                    let pairs = if u == v {
                        sizes[u] * (sizes[u].saturating_sub(1))
                    } else {
                        sizes[u] * sizes[v]
                    };
                    if pairs == 0 {
                        0.0
                    } else {
                        counts[u][v] as f64 / pairs as f64
                    }
                })
                .collect()
        })
        .collect();
    BlockProbabilityMatrix::from_rows(rows)
}

/// Largest singular value of `A − E[A]` under the fitted block model.
fn residual_norm(a: &AdjacencyMatrix, part: &CommunityPartition, blocks: &BlockProbabilityMatrix) -> f64 {
    let n = a.n();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            f64::from(a.get(i, j)) - blocks.get(part.label(i), part.label(j))
        }
    });
    m.symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderTestResult {
    pub k: usize,
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
}

/// Tests `K = k` against `K > k` for a single network.
pub trait OrderTest: Sync {
    fn test(&self, a: &AdjacencyMatrix, k: usize, seed: &RandomSeed) -> Result<OrderTestResult>;
}

/// Parametric-bootstrap goodness-of-fit test on the residual spectral norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSpectralTest {
    pub bootstraps: usize,
    pub alpha: f64,
}

impl Default for ResidualSpectralTest {
    fn default() -> Self {
        Self {
            bootstraps: 50,
            alpha: 0.05,
        }
    }
}

impl OrderTest for ResidualSpectralTest {
    fn test(&self, a: &AdjacencyMatrix, k: usize, seed: &RandomSeed) -> Result<OrderTestResult> {
        if self.bootstraps == 0 || !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(
                "order test needs bootstraps >= 1 and alpha in (0, 1)".into(),
            ));
        }
        let part = spectral_partition(a, k, &seed.derive(0))?;
        let blocks = fitted_blocks(a, &part)?;
        let statistic = residual_norm(a, &part, &blocks);
        if part.block_sizes().iter().any(|&s| s < 2) {
            // A singleton community means k already overfits.
            return Ok(OrderTestResult {
                k,
                statistic,
                critical_value: f64::INFINITY,
                p_value: 1.0,
                reject: false,
            });
        }

        let draw = |b: usize| -> Result<f64> {
            let s = seed.derive(1).derive(b as u64);
            let sample = sample_sbm(&blocks, &part, &s.derive(0))?;
            let refit = spectral_partition(&sample, k, &s.derive(1))?;
            let refit_blocks = fitted_blocks(&sample, &refit)?;
            Ok(residual_norm(&sample, &refit, &refit_blocks))
        };
        #[cfg(feature = "parallel")]
        let mut null: Vec<f64> = {
            use rayon::prelude::*;
            (0..self.bootstraps).into_par_iter().map(draw).collect::<Result<_>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let mut null: Vec<f64> = (0..self.bootstraps).map(draw).collect::<Result<_>>()?;
        null.sort_by(f64::total_cmp);

        let b = null.len();
        let idx = (((1.0 - self.alpha) * b as f64).ceil() as usize).clamp(1, b) - 1;
        let critical_value = null[idx];
        let exceed = null.iter().filter(|&&x| x >= statistic).count();
        Ok(OrderTestResult {
            k,
            statistic,
            critical_value,
            p_value: (1 + exceed) as f64 / (b + 1) as f64,
            reject: statistic > critical_value,
        })
    }
}

/// Selects a fixed, user-supplied community count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedK(pub usize);

impl OrderTest for FixedK {
    fn test(&self, _a: &AdjacencyMatrix, k: usize, _seed: &RandomSeed) -> Result<OrderTestResult> {
        let reject = k < self.0;
        Ok(OrderTestResult {
            k,
            statistic: f64::NAN,
            critical_value: f64::NAN,
            p_value: if reject { 0.0 } else { 1.0 },
            reject,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSelection {
    pub k: usize,
    /// One entry per round; each holds the per-network results.
    pub rounds: Vec<Vec<OrderTestResult>>,
}

/// Starting at `k = 1`, advances while every network rejects `K = k`.
pub fn select_common_k(
    networks: &[AdjacencyMatrix],
    k_max: usize,
    test: &dyn OrderTest,
    seed: &RandomSeed,
) -> Result<KSelection> {
    if networks.is_empty() {
        return Err(Error::InvalidParameter("need at least one network".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter("K_max must be at least 1".into()));
    }
    let mut rounds = Vec::new();
    for k in 1..=k_max {
        let run = |(idx, a): (usize, &AdjacencyMatrix)| test.test(a, k, &seed.derive(k as u64).derive(idx as u64));
        #[cfg(feature = "parallel")]
        let results: Vec<OrderTestResult> = {
            use rayon::prelude::*;
            networks.par_iter().enumerate().map(run).collect::<Result<_>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let results: Vec<OrderTestResult> = networks.iter().enumerate().map(run).collect::<Result<_>>()?;
        let all_reject = results.iter().all(|r| r.reject);
        rounds.push(results);
        if !all_reject {
            return Ok(KSelection { k, rounds });
        }
    }
    Ok(KSelection { k: k_max, rounds })
}

/// [`select_common_k`] with the default residual test.
pub fn sequential_common_k(networks: &[AdjacencyMatrix], k_max: usize, seed: &RandomSeed) -> Result<usize> {
    select_common_k(networks, k_max, &ResidualSpectralTest::default(), seed).map(|s| s.k)
}

/// Fraction of nodes labelled consistently, maximized over relabelings.
pub fn label_agreement(a: &CommunityPartition, b: &CommunityPartition) -> Result<f64> {
    if a.n() != b.n() || a.k() != b.k() {
        return Err(Error::DimensionMismatch {
            what: "partition",
            expected: a.n(),
            found: b.n(),
        });
    }
    let k = a.k();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    loop {
        let hits = a
            .labels()
            .iter()
            .zip(b.labels())
            .filter(|(&x, &y)| perm[x] == y)
            .count();
        best = best.max(hits);
        if !crate::frobenius::next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best as f64 / a.n() as f64)
}
