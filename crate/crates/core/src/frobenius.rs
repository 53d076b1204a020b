//! The Frobenius two-sample statistic and its asymptotic null distribution.
//!
//! For community permutation `π` the statistic is the disagreement frequency
//!
//! ```text
//! T(π) = Σ_{w,l} Σ_{i≠j} (Ã^{G_l}_w − Ã^{H_l,π}_w)²_ij / (m d n (n − 1))
//! ```
//!
//! and `T = min_π T(π)`. H-side draws for different `π` threshold one shared
//! uniform field per `(l, w)`, so `T(π)` only depends on how many entries of
//! each block fall below each threshold. [`DisagreementTable`] collects those
//! counts once; every permutation is then scored from the table.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::bootstrap::{allocate_block_sizes, common_size, BlockSizeVector, BootstrapConfig, CoupledBootstraps};
use crate::error::{Error, Result};
use crate::estimation::estimate_block_probabilities;
use crate::graph::{AdjacencyMatrix, BlockProbabilityMatrix, CommunityPartition};

pub const DEFAULT_PERMUTATION_CAP: usize = 8;

/// Which form of the null distribution applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullCase {
    Balanced,
    Imbalanced,
    /// Standard normal reference of a self-normalized statistic.
    StandardNormal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullParams {
    pub mu: f64,
    pub sigma2: f64,
    pub case: NullCase,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    #[default]
    TwoSided,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Frobenius,
    AsympNormal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub sigma_dagger_sq: f64,
    /// `1 / σ†`, the order of the Berry–Esseen-type bound on the normal approximation.
    pub sigma_dagger_inv: f64,
    /// Left-hand side of the density condition for the block design in use;
    /// infinite when a bootstrap community has a single node.
    pub b_condition_value: f64,
    /// Per-sample `p̃^l_uu`.
    pub tilde_p: Vec<Vec<f64>>,
    /// Per-sample `K × K` matrix of `q̃^l_uv`; the diagonal is zero.
    pub tilde_q: Vec<Vec<Vec<f64>>>,
}

/// Everything that determined a test run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub bootstrap: BootstrapConfig,
    pub alpha: f64,
    pub sidedness: Sidedness,
    pub m: usize,
    pub k_g: usize,
    pub k_h: usize,
    pub n: Option<usize>,
    pub block_sizes: Option<BlockSizeVector>,
    pub p_hats: Vec<BlockProbabilityMatrix>,
    pub q_hats: Vec<BlockProbabilityMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub statistic: f64,
    pub null_params: NullParams,
    pub z: f64,
    pub p_value: f64,
    pub reject: bool,
    pub best_permutation: Vec<usize>,
    pub diagnostics: Option<DiagnosticsReport>,
    /// Set when the decision was made without computing a statistic.
    pub structural_rejection: Option<String>,
    pub config: Option<ResolvedConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub bootstrap: BootstrapConfig,
    pub alpha: f64,
    #[serde(default)]
    pub sidedness: Sidedness,
    #[serde(default = "default_cap")]
    pub permutation_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_PERMUTATION_CAP
}

impl TestConfig {
    pub fn new(bootstrap: BootstrapConfig) -> Self {
        Self {
            bootstrap,
            alpha: 0.05,
            sidedness: Sidedness::TwoSided,
            permutation_cap: DEFAULT_PERMUTATION_CAP,
        }
    }
}

/// Disagreement counts indexed by `(u, v, a, b)`: the number of ordered
/// entries `(i, j)` in block `(u, v)`, over all `(l, w)`, where the G draw
/// differs from `1{U_ij < Q̂^l[a][b]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisagreementTable {
    k: usize,
    counts: Vec<u64>,
}

impl DisagreementTable {
    pub fn build(boot: &CoupledBootstraps) -> Self {
        let jobs: Vec<(usize, usize)> = (0..boot.m()).flat_map(|l| (0..boot.d).map(move |w| (l, w))).collect();
        let k = boot.k();
        let empty = || Self {
            k,
            counts: vec![0; k.pow(4)],
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            jobs.par_iter()
                .map(|&(l, w)| Self::for_pair(boot, l, w))
                .reduce(empty, Self::merge)
        }
        #[cfg(not(feature = "parallel"))]
        {
            jobs.iter()
                .map(|&(l, w)| Self::for_pair(boot, l, w))
                .fold(empty(), Self::merge)
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    fn for_pair(boot: &CoupledBootstraps, l: usize, w: usize) -> Self {
        let k = boot.k();
        let k2 = k * k;
        let n = boot.n();
        let part = boot.partition();
        let g = boot.g_matrix(l, w);
        let field = boot.h_field(l, w);
        let q = &boot.q_hats[l];

        let mut thresholds: Vec<f64> = (0..k2).map(|ab| q.get(ab / k, ab % k)).collect();
        thresholds.sort_by(f64::total_cmp);
        thresholds.dedup();
        let bins = thresholds.len() + 1;

        // hist[block][g][bin]: bin = number of thresholds <= U, so
        // U < thresholds[t] exactly when bin <= t.
        let mut hist = vec![0u64; k2 * 2 * bins];
        for i in 0..n {
            let li = part.label(i);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let u = field.get(i, j);
                let bin = thresholds.partition_point(|&t| t <= u);
                let block = li * k + part.label(j);
                hist[(block * 2 + g.get(i, j) as usize) * bins + bin] += 1;
            }
        }

        let mut counts = vec![0u64; k2 * k2];
        for block in 0..k2 {
            let zeros = &hist[(block * 2) * bins..(block * 2 + 1) * bins];
            let ones = &hist[(block * 2 + 1) * bins..(block * 2 + 2) * bins];
            let total_ones: u64 = ones.iter().sum();
            for ab in 0..k2 {
                let t = thresholds.partition_point(|&x| x < q.get(ab / k, ab % k));
                // Entries with U < threshold are H = 1.
                let zeros_below: u64 = zeros[..=t].iter().sum();
                let ones_below: u64 = ones[..=t].iter().sum();
                counts[block * k2 + ab] = zeros_below + (total_ones - ones_below);
            }
        }
        Self { k, counts }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total disagreements under `perm`.
    pub fn disagreements(&self, perm: &[usize]) -> u64 {
        let k = self.k;
        let k2 = k * k;
        let mut total = 0;
        for u in 0..k {
            for v in 0..k {
                total += self.counts[(u * k + v) * k2 + perm[u] * k + perm[v]];
            }
        }
        total
    }
}

/// Advances `perm` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let len = perm.len();
    if len < 2 {
        return false;
    }
    let mut i = len - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = len - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Value of the statistic together with its minimizing permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct StatisticOutcome {
    pub statistic: f64,
    pub best_permutation: Vec<usize>,
    pub disagreements: u64,
    pub denominator: u64,
}

/// `T = min_π T(π)`. Ties go to the lexicographically smallest permutation.
pub fn frobenius_statistic(boot: &CoupledBootstraps, permutation_cap: usize) -> Result<StatisticOutcome> {
    let k = boot.k();
    if k > permutation_cap {
        return Err(Error::PermutationCap {
            k,
            cap: permutation_cap,
        });
    }
    let n = boot.n();
    let denominator = (boot.m() * boot.d * n * (n - 1)) as u64;
    let table = DisagreementTable::build(boot);

    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = (table.disagreements(&perm), perm.clone());
    while next_permutation(&mut perm) {
        let t = table.disagreements(&perm);
        if t < best.0 {
            best = (t, perm.clone());
        }
    }
    Ok(StatisticOutcome {
        statistic: best.0 as f64 / denominator as f64,
        best_permutation: best.1,
        disagreements: best.0,
        denominator,
    })
}

/// `p̂ + p̂* − 2 p̂ p̂*` entrywise: the probability that independent draws
/// from the two estimates disagree.
pub fn tilde_matrix(p_hat: &BlockProbabilityMatrix, q_hat: &BlockProbabilityMatrix) -> Result<Vec<Vec<f64>>> {
    if p_hat.k() != q_hat.k() {
        return Err(Error::DimensionMismatch {
            what: "P̂ vs Q̂",
            expected: p_hat.k(),
            found: q_hat.k(),
        });
    }
    let k = p_hat.k();
    Ok((0..k)
        .map(|u| {
            (0..k)
                .map(|v| {
                    let (a, b) = (p_hat.get(u, v), q_hat.get(u, v));
                    a + b - 2.0 * a * b
                })
                .collect()
        })
        .collect())
}

fn tildes(
    p_hats: &[BlockProbabilityMatrix],
    q_hats: &[BlockProbabilityMatrix],
    k: usize,
) -> Result<Vec<Vec<Vec<f64>>>> {
    if p_hats.len() != q_hats.len() {
        return Err(Error::SampleCountMismatch {
            g: p_hats.len(),
            h: q_hats.len(),
        });
    }
    if p_hats.is_empty() {
        return Err(Error::InvalidParameter("need at least one sample (m >= 1)".into()));
    }
    p_hats
        .iter()
        .zip(q_hats)
        .map(|(p, q)| {
            if p.k() != k {
                return Err(Error::DimensionMismatch {
                    what: "block matrix K",
                    expected: k,
                    found: p.k(),
                });
            }
            tilde_matrix(p, q)
        })
        .collect()
}

fn check_counts(n: usize, k: usize, m: usize, d: usize, expected_m: usize) -> Result<()> {
    if k == 0 || n <= 1 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2, K >= 1, d >= 1 (got n = {n}, K = {k}, d = {d})"
        )));
    }
    if m != expected_m {
        return Err(Error::DimensionMismatch {
            what: "sample count m",
            expected: expected_m,
            found: m,
        });
    }
    Ok(())
}

/// Null mean and variance for balanced bootstrap blocks (`n_u = n / K`).
///
/// `q_hats` must already be aligned with `p_hats` (permuted by the chosen `π`).
pub fn null_params_balanced(
    p_hats: &[BlockProbabilityMatrix],
    q_hats: &[BlockProbabilityMatrix],
    n: usize,
    k: usize,
    m: usize,
    d: usize,
) -> Result<NullParams> {
    check_counts(n, k, m, d, p_hats.len())?;
    if !n.is_multiple_of(k) {
        return Err(Error::NotMultiple { n, k });
    }
    let tl = tildes(p_hats, q_hats, k)?;
    let (nf, kf, mf, df) = (n as f64, k as f64, m as f64, d as f64);

    let (mut sp, mut sq, mut vp, mut vq) = (0.0, 0.0, 0.0, 0.0);
    for t in &tl {
        for u in 0..k {
            for v in 0..k {
                let x = t[u][v];
                if u == v {
                    sp += x;
                    vp += x * (1.0 - x);
                } else {
                    sq += x;
                    vq += x * (1.0 - x);
                }
            }
        }
    }
    let x1 = (nf - kf) / (mf * (nf - 1.0) * kf * kf) * sp;
    let x2 = nf / (mf * (nf - 1.0) * kf * kf) * sq;
    let x3 = (nf - kf) / (mf * mf * df * nf * (nf - 1.0).powi(2) * kf * kf) * vp;
    let x4 = nf / (mf * mf * df * nf * (nf - 1.0).powi(2) * kf * kf) * vq;
    Ok(NullParams {
        mu: x1 + x2,
        sigma2: x3 + x4,
        case: NullCase::Balanced,
    })
}

/// Null mean and variance for block sizes `n exp(w_u) / Σ exp(w)`.
pub fn null_params_imbalanced(
    p_hats: &[BlockProbabilityMatrix],
    q_hats: &[BlockProbabilityMatrix],
    n: usize,
    k: usize,
    m: usize,
    d: usize,
    weights: &[f64],
) -> Result<NullParams> {
    check_counts(n, k, m, d, p_hats.len())?;
    if weights.len() != k {
        return Err(Error::DimensionMismatch {
            what: "weights",
            expected: k,
            found: weights.len(),
        });
    }
    let tl = tildes(p_hats, q_hats, k)?;
    let (nf, mf, df) = (n as f64, m as f64, d as f64);
    let e: Vec<f64> = weights.iter().map(|w| w.exp()).collect();
    let s: f64 = e.iter().sum();

    let (mut y1, mut y2, mut y3, mut y4) = (0.0, 0.0, 0.0, 0.0);
    for t in &tl {
        for u in 0..k {
            let within = nf * e[u] * e[u] - e[u] * s;
            let x = t[u][u];
            y1 += x * within;
            y3 += x * (1.0 - x) * within;
            for v in (0..k).filter(|&v| v != u) {
                let x = t[u][v];
                y2 += x * e[u] * e[v];
                y4 += x * (1.0 - x) * e[u] * e[v];
            }
        }
    }
    let s2 = s * s;
    y1 /= mf * (nf - 1.0) * s2;
    y2 *= nf / (mf * (nf - 1.0) * s2);
    y3 /= mf * mf * df * nf * (nf - 1.0).powi(2) * s2;
    y4 /= mf * mf * df * (nf - 1.0).powi(2) * s2;
    Ok(NullParams {
        mu: y1 + y2,
        sigma2: y3 + y4,
        case: NullCase::Imbalanced,
    })
}

/// `σ†² = d Σ_l Σ_{i≠j} τ̃_ij (1 − τ̃_ij)`, where `τ̃_ij` is `p̃^l_uu` inside
/// community `u` and `q̃^l_uv` between `u` and `v`. Each ordered
/// off-diagonal pair contributes once.
pub fn sigma_dagger_sq(tilde_p: &[Vec<f64>], tilde_q: &[Vec<Vec<f64>>], block_sizes: &[usize], d: usize) -> f64 {
    let k = block_sizes.len();
    let mut total = 0.0;
    for (tp, tq) in tilde_p.iter().zip(tilde_q) {
        for u in 0..k {
            let nu = block_sizes[u] as f64;
            total += tp[u] * (1.0 - tp[u]) * nu * (nu - 1.0);
            for v in (0..k).filter(|&v| v != u) {
                total += tq[u][v] * (1.0 - tq[u][v]) * nu * block_sizes[v] as f64;
            }
        }
    }
    d as f64 * total
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlockDesign<'a> {
    Balanced,
    Imbalanced { weights: &'a [f64] },
}

/// Left-hand side of the density condition for the given block design.
pub fn density_condition_value(design: BlockDesign<'_>, n: usize, k: usize) -> Result<f64> {
    if k == 0 || n <= k {
        return Err(Error::InvalidParameter(format!("need n > K (got n = {n}, K = {k})")));
    }
    let (nf, kf) = (n as f64, k as f64);
    match design {
        BlockDesign::Balanced => Ok(kf.powi(3) / (nf * (nf - kf)) + (kf.powi(4) - kf.powi(3)) / (nf * nf)),
        BlockDesign::Imbalanced { weights } => {
            if weights.len() != k {
                return Err(Error::DimensionMismatch {
                    what: "weights",
                    expected: k,
                    found: weights.len(),
                });
            }
            let e: Vec<f64> = weights.iter().map(|w| w.exp()).collect();
            let s: f64 = e.iter().sum();
            let mut total = 0.0;
            for u in 0..k {
                let denom = nf * nf * e[u] * e[u] - nf * e[u] * s;
                if denom <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "community {u} has expected size <= 1 under these weights"
                    )));
                }
                total += s * s / denom;
                for v in (0..k).filter(|&v| v != u) {
                    total += s * s / (nf * nf * e[u] * e[v]);
                }
            }
            Ok(total)
        }
    }
}

pub(crate) fn standard_normal_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Upper critical value of the test at level `alpha`.
pub fn critical_value(alpha: f64, sidedness: Sidedness) -> f64 {
    let normal = Normal::standard();
    match sidedness {
        Sidedness::TwoSided => normal.inverse_cdf(1.0 - alpha / 2.0),
        Sidedness::Upper => normal.inverse_cdf(1.0 - alpha),
    }
}

/// `(z, p_value, reject)` for a statistic against its null.
///
/// A zero-variance null is an exact comparison: reject iff `T != μ`.
pub fn decide(statistic: f64, null: &NullParams, alpha: f64, sidedness: Sidedness) -> (f64, f64, bool) {
    if null.sigma2 <= 0.0 {
        let equal = (statistic - null.mu).abs() <= 1e-12 * null.mu.abs().max(1.0);
        return if equal {
            (0.0, 1.0, false)
        } else {
            let z = if statistic > null.mu {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
            let reject = sidedness == Sidedness::TwoSided || z > 0.0;
            (z, if reject { 0.0 } else { 1.0 }, reject)
        };
    }
    let z = (statistic - null.mu) / null.sigma2.sqrt();
    let (p, reject) = match sidedness {
        Sidedness::TwoSided => (
            (2.0 * standard_normal_tail(z.abs())).min(1.0),
            z.abs() > critical_value(alpha, sidedness),
        ),
        Sidedness::Upper => (standard_normal_tail(z), z > critical_value(alpha, sidedness)),
    };
    (z, p, reject)
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

fn common_k(partitions: &[CommunityPartition], side: &str) -> Result<usize> {
    let k = partitions[0].k();
    if partitions.iter().any(|p| p.k() != k) {
        return Err(Error::InvalidParameter(format!(
            "{side} partitions disagree on the number of communities"
        )));
    }
    Ok(k)
}

/// Full two-sample test: estimate `P̂^l`, `Q̂^l`, pick the common bootstrap
/// size and block sizes, draw the coupled bootstraps, minimize over
/// permutations and compare against the matching null.
pub fn run_test(
    g_samples: &[AdjacencyMatrix],
    h_samples: &[AdjacencyMatrix],
    g_partitions: &[CommunityPartition],
    h_partitions: &[CommunityPartition],
    config: &TestConfig,
) -> Result<TestResult> {
    config.bootstrap.validate()?;
    validate_alpha(config.alpha)?;
    let m = g_samples.len();
    if m != h_samples.len() {
        return Err(Error::SampleCountMismatch {
            g: m,
            h: h_samples.len(),
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one sample per sequence".into()));
    }
    if g_partitions.len() != m || h_partitions.len() != m {
        return Err(Error::InvalidParameter(
            "need exactly one partition per sample graph".into(),
        ));
    }
    let k_g = common_k(g_partitions, "G")?;
    let k_h = common_k(h_partitions, "H")?;

    let mut resolved = ResolvedConfig {
        bootstrap: config.bootstrap.clone(),
        alpha: config.alpha,
        sidedness: config.sidedness,
        m,
        k_g,
        k_h,
        n: None,
        block_sizes: None,
        p_hats: Vec::new(),
        q_hats: Vec::new(),
    };

    if k_g != k_h {
        return Ok(TestResult {
            method: Method::Frobenius,
            statistic: f64::NAN,
            null_params: NullParams {
                mu: f64::NAN,
                sigma2: f64::NAN,
                case: NullCase::Balanced,
            },
            z: f64::NAN,
            p_value: 0.0,
            reject: true,
            best_permutation: Vec::new(),
            diagnostics: None,
            structural_rejection: Some(format!("different numbers of communities: K_G = {k_g}, K_H = {k_h}")),
            config: Some(resolved),
        });
    }
    let k = k_g;

    let p_hats = g_samples
        .iter()
        .zip(g_partitions)
        .map(|(a, p)| estimate_block_probabilities(a, p))
        .collect::<Result<Vec<_>>>()?;
    let q_hats = h_samples
        .iter()
        .zip(h_partitions)
        .map(|(a, p)| estimate_block_probabilities(a, p))
        .collect::<Result<Vec<_>>>()?;

    let n_g = g_samples.iter().map(AdjacencyMatrix::n).min().unwrap_or(0);
    let n_h = h_samples.iter().map(AdjacencyMatrix::n).min().unwrap_or(0);
    let n = common_size(n_g, n_h, k)?;
    let seed = &config.bootstrap.seed;
    let sizes = allocate_block_sizes(n, k, config.bootstrap.tau, &seed.derive(0))?;
    let d = config.bootstrap.d;

    let boot = CoupledBootstraps::new(
        p_hats.clone(),
        q_hats.clone(),
        sizes.clone(),
        d,
        seed.derive(1),
        config.bootstrap.symmetric,
    )?;
    let outcome = frobenius_statistic(&boot, config.permutation_cap)?;

    let aligned_q = q_hats
        .iter()
        .map(|q| q.permuted(&outcome.best_permutation))
        .collect::<Result<Vec<_>>>()?;
    let weights = sizes.realized_weights();
    let (null_params, design) = if config.bootstrap.tau == 0.0 {
        (
            null_params_balanced(&p_hats, &aligned_q, n, k, m, d)?,
            BlockDesign::Balanced,
        )
    } else {
        (
            null_params_imbalanced(&p_hats, &aligned_q, n, k, m, d, &weights)?,
            BlockDesign::Imbalanced { weights: &weights },
        )
    };

    let tl = tildes(&p_hats, &aligned_q, k)?;
    let tilde_p: Vec<Vec<f64>> = tl.iter().map(|t| (0..k).map(|u| t[u][u]).collect()).collect();
    let tilde_q: Vec<Vec<Vec<f64>>> = tl
        .iter()
        .map(|t| {
            (0..k)
                .map(|u| (0..k).map(|v| if u == v { 0.0 } else { t[u][v] }).collect())
                .collect()
        })
        .collect();
    let sds = sigma_dagger_sq(&tilde_p, &tilde_q, &sizes.sizes, d);
    let b_condition_value = density_condition_value(design, n, k).unwrap_or(f64::INFINITY);

    let (z, p_value, reject) = decide(outcome.statistic, &null_params, config.alpha, config.sidedness);

    resolved.n = Some(n);
    resolved.block_sizes = Some(sizes);
    resolved.p_hats = p_hats;
    resolved.q_hats = q_hats;

    Ok(TestResult {
        method: Method::Frobenius,
        statistic: outcome.statistic,
        null_params,
        z,
        p_value,
        reject,
        best_permutation: outcome.best_permutation,
        diagnostics: Some(DiagnosticsReport {
            sigma_dagger_sq: sds,
            sigma_dagger_inv: if sds > 0.0 { sds.sqrt().recip() } else { f64::INFINITY },
            b_condition_value,
            tilde_p,
            tilde_q,
        }),
        structural_rejection: None,
        config: Some(resolved),
    })
}
