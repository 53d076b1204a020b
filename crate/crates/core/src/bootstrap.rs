//! Parametric bootstrap of adjacency matrices from estimated block
//! probabilities: common size selection, block-size allocation and
//! generation of `d` bootstrap draws per sample.
//!
//! Every bootstrap entry is a threshold of a uniform variate,
//! `Ã_ij = 1{U_ij < B[label(i)][label(j)]}`. Drawing the uniform field once
//! per `(sample, bootstrap)` index and thresholding it against different
//! block matrices is what couples the H-side draws across community
//! permutations in the Frobenius statistic.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BinaryMatrix, BlockProbabilityMatrix, CommunityPartition};
use crate::rng::RandomSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Bootstrap draws per sample.
    pub d: usize,
    /// Dispersion of the block-size weights `w_u ~ N(0, tau^2)`; 0 gives balanced blocks.
    pub tau: f64,
    pub seed: RandomSeed,
    /// Mirror each draw across the diagonal instead of drawing every ordered
    /// pair independently. The null variance assumes independent ordered
    /// pairs, so this is only useful for comparison runs.
    #[serde(default)]
    pub symmetric: bool,
}

impl BootstrapConfig {
    pub fn new(d: usize, tau: f64, seed: impl Into<RandomSeed>) -> Self {
        Self {
            d,
            tau,
            seed: seed.into(),
            symmetric: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be a finite nonnegative number, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

/// Bootstrap community sizes together with the weights they were drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSizeVector {
    pub sizes: Vec<usize>,
    pub weights: Vec<f64>,
}

impl BlockSizeVector {
    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// Weights `ln n_u`, whose softmax reproduces the integer sizes exactly.
    pub fn realized_weights(&self) -> Vec<f64> {
        self.sizes.iter().map(|&s| (s as f64).ln()).collect()
    }

    pub fn partition(&self) -> Result<CommunityPartition> {
        CommunityPartition::from_sizes(&self.sizes)
    }
}

/// Largest multiple of `k` not exceeding `min(n_g, n_h)`.
pub fn common_size(n_g: usize, n_h: usize, k: usize) -> Result<usize> {
    let smaller = n_g.min(n_h);
    if k == 0 || smaller < k {
        return Err(Error::NoValidSize { n_g, n_h, k });
    }
    Ok(smaller / k * k)
}

/// Draws `w_u ~ N(0, tau^2)` and sizes `n_u ≈ n exp(w_u) / Σ exp(w)`,
/// rounded by largest remainder to integers that sum to `n`, each at least 1.
pub fn allocate_block_sizes(n: usize, k: usize, tau: f64, seed: &RandomSeed) -> Result<BlockSizeVector> {
    if k == 0 || n < k || !n.is_multiple_of(k) {
        return Err(Error::NotMultiple { n, k });
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tau must be a finite nonnegative number, got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(BlockSizeVector {
            sizes: vec![n / k; k],
            weights: vec![0.0; k],
        });
    }
    let normal = Normal::new(0.0, tau).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = seed.rng();
    let weights: Vec<f64> = (0..k).map(|_| normal.sample(&mut rng)).collect();
    let sizes = integerize_softmax(n, &weights);
    Ok(BlockSizeVector { sizes, weights })
}

/// Largest-remainder rounding of `n · softmax(weights)` with a floor of 1
/// per block. Ties are broken by lower community index.
pub fn integerize_softmax(n: usize, weights: &[f64]) -> Vec<usize> {
    let k = weights.len();
    let max_w = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = weights.iter().map(|w| (w - max_w).exp()).collect();
    let total: f64 = exps.iter().sum();
    let raw: Vec<f64> = exps.iter().map(|e| n as f64 * e / total).collect();
    let mut sizes: Vec<usize> = raw.iter().map(|r| (r.floor() as usize).max(1)).collect();
    let remainder: Vec<f64> = raw.iter().map(|r| r - r.floor()).collect();

    // Largest remainder first; ties to the lower index.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| remainder[b].total_cmp(&remainder[a]).then(a.cmp(&b)));

    let mut assigned: usize = sizes.iter().sum();
    let mut cursor = 0;
    while assigned < n {
        sizes[order[cursor % k]] += 1;
        assigned += 1;
        cursor += 1;
    }
    // Surplus only arises from the floor of 1; take it back from the
    // smallest remainders among blocks that can spare a node.
    while assigned > n {
        let u = order
            .iter()
            .rev()
            .copied()
            .find(|&u| sizes[u] > 1)
            .expect("n >= k guarantees a block larger than 1");
        sizes[u] -= 1;
        assigned -= 1;
    }
    sizes
}

/// Uniform variates for every ordered off-diagonal pair of an `n × n` grid.
/// The diagonal holds 1.0, so thresholding never produces a self-loop.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformField {
    n: usize,
    values: Vec<f64>,
}

impl UniformField {
    /// Row-major draws over `i != j`; with `symmetric`, only `i < j` is drawn
    /// and mirrored.
    pub fn draw(n: usize, seed: &RandomSeed, symmetric: bool) -> Self {
        let mut rng = seed.rng();
        let mut values = vec![1.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j || (symmetric && j < i) {
                    continue;
                }
                let u: f64 = rng.random();
                values[i * n + j] = u;
                if symmetric {
                    values[j * n + i] = u;
                }
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// `1{U_ij < B[label(i)][label(j)]}`.
    pub fn threshold(&self, b: &BlockProbabilityMatrix, partition: &CommunityPartition) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.n);
        for i in 0..self.n {
            let li = partition.label(i);
            for j in 0..self.n {
                if self.get(i, j) < b.get(li, partition.label(j)) {
                    out.set(i, j, 1);
                }
            }
        }
        out
    }
}

/// `d` independent SBM draws on the partition induced by `sizes`.
/// Draw `w` thresholds the uniform field of stream `seed.derive(w)`.
pub fn generate_bootstrap_sequence(
    b: &BlockProbabilityMatrix,
    sizes: &BlockSizeVector,
    d: usize,
    seed: &RandomSeed,
    symmetric: bool,
) -> Result<Vec<BinaryMatrix>> {
    if b.k() != sizes.k() {
        return Err(Error::DimensionMismatch {
            what: "block matrix vs block sizes",
            expected: sizes.k(),
            found: b.k(),
        });
    }
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let partition = sizes.partition()?;
    let n = sizes.n();
    Ok((0..d as u64)
        .map(|w| UniformField::draw(n, &seed.derive(w), symmetric).threshold(b, &partition))
        .collect())
}

const G_STREAM: u64 = 0;
const H_STREAM: u64 = 1;

/// The coupled bootstrap design of one test: G-side draws from `P̂^l` and
/// H-side uniform fields, one pair per `(l, w)`, all on the partition given
/// by the shared block sizes.
#[derive(Clone, Debug)]
pub struct CoupledBootstraps {
    pub p_hats: Vec<BlockProbabilityMatrix>,
    pub q_hats: Vec<BlockProbabilityMatrix>,
    pub sizes: BlockSizeVector,
    pub d: usize,
    pub seed: RandomSeed,
    pub symmetric: bool,
    partition: CommunityPartition,
}

impl CoupledBootstraps {
    pub fn new(
        p_hats: Vec<BlockProbabilityMatrix>,
        q_hats: Vec<BlockProbabilityMatrix>,
        sizes: BlockSizeVector,
        d: usize,
        seed: RandomSeed,
        symmetric: bool,
    ) -> Result<Self> {
        if p_hats.len() != q_hats.len() {
            return Err(Error::SampleCountMismatch {
                g: p_hats.len(),
                h: q_hats.len(),
            });
        }
        if p_hats.is_empty() {
            return Err(Error::InvalidParameter("need at least one sample (m >= 1)".into()));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        let k = sizes.k();
        for b in p_hats.iter().chain(&q_hats) {
            if b.k() != k {
                return Err(Error::DimensionMismatch {
                    what: "block matrix vs block sizes",
                    expected: k,
                    found: b.k(),
                });
            }
        }
        let partition = sizes.partition()?;
        Ok(Self {
            p_hats,
            q_hats,
            sizes,
            d,
            seed,
            symmetric,
            partition,
        })
    }

    pub fn m(&self) -> usize {
        self.p_hats.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.n()
    }

    pub fn k(&self) -> usize {
        self.sizes.k()
    }

    pub fn partition(&self) -> &CommunityPartition {
        &self.partition
    }

    /// Root of the G-side streams for sample `l`; see [`generate_bootstrap_sequence`].
    pub fn g_seed(&self, l: usize) -> RandomSeed {
        self.seed.derive(G_STREAM).derive(l as u64)
    }

    pub fn h_seed(&self, l: usize) -> RandomSeed {
        self.seed.derive(H_STREAM).derive(l as u64)
    }

    /// `Ã^{G_l}_w`.
    pub fn g_matrix(&self, l: usize, w: usize) -> BinaryMatrix {
        self.g_field(l, w).threshold(&self.p_hats[l], &self.partition)
    }

    pub fn g_field(&self, l: usize, w: usize) -> UniformField {
        UniformField::draw(self.n(), &self.g_seed(l).derive(w as u64), self.symmetric)
    }

    /// The uniform field behind every permuted `Ã^{H_l}_w`.
    pub fn h_field(&self, l: usize, w: usize) -> UniformField {
        UniformField::draw(self.n(), &self.h_seed(l).derive(w as u64), self.symmetric)
    }

    /// `Ã^{H_l}_w` realized against `π(Q̂^l)`.
    pub fn h_matrix(&self, l: usize, w: usize, perm: &[usize]) -> Result<BinaryMatrix> {
        let q = self.q_hats[l].permuted(perm)?;
        Ok(self.h_field(l, w).threshold(&q, &self.partition))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn common_size_examples() {
        assert_eq!(common_size(200, 100, 2).unwrap(), 100);
        assert_eq!(common_size(200, 100, 3).unwrap(), 99);
        assert_eq!(common_size(200, 100, 5).unwrap(), 100);
        assert_eq!(common_size(200, 100, 6).unwrap(), 96);
        assert_eq!(common_size(10, 10, 5).unwrap(), 10);
        assert!(matches!(common_size(3, 10, 4), Err(Error::NoValidSize { .. })));
    }

    #[test]
    fn balanced_allocation() {
        let s = RandomSeed::new(0);
        assert_eq!(allocate_block_sizes(100, 2, 0.0, &s).unwrap().sizes, vec![50, 50]);
        assert_eq!(allocate_block_sizes(96, 6, 0.0, &s).unwrap().sizes, vec![16; 6]);
        assert!(matches!(
            allocate_block_sizes(100, 3, 0.0, &s),
            Err(Error::NotMultiple { .. })
        ));
    }

    #[test]
    fn integerize_hand_cases() {
        // raw = (60.0, 40.0)
        let w = [0.0, (40.0f64 / 60.0).ln()];
        assert_eq!(integerize_softmax(100, &w), vec![60, 40]);
        // raw ≈ (0.0…, 5.0…, 5.0…): the tiny block is lifted to 1 and the
        // surplus comes from the tied larger blocks, higher index first.
        let w = [-50.0, 0.0, 0.0];
        assert_eq!(integerize_softmax(10, &w), vec![1, 5, 4]);
        // Equal remainders go to the lower index.
        assert_eq!(integerize_softmax(10, &[0.0, 0.0, 0.0]), vec![4, 3, 3]);
    }

    #[test]
    fn imbalanced_allocation_matches_reference() {
        // Independent reference: draw the weights from the same stream and
        // round with a straightforward floor-and-distribute implementation.
        let root = RandomSeed::new(21);
        for r in 0..10_000 {
            let seed = root.derive(r);
            let got = allocate_block_sizes(100, 2, 0.5, &seed).unwrap();
            assert_eq!(got.sizes.iter().sum::<usize>(), 100);
            assert!(got.sizes.iter().all(|&s| s >= 1));

            let normal = Normal::new(0.0, 0.5).unwrap();
            let mut rng = seed.rng();
            let w: Vec<f64> = (0..2).map(|_| normal.sample(&mut rng)).collect();
            assert_eq!(w, got.weights);
            let share0 = w[0].exp() / (w[0].exp() + w[1].exp());
            let raw0 = 100.0 * share0;
            let mut n0 = raw0.floor() as usize;
            let frac0 = raw0 - raw0.floor();
            let frac1 = (100.0 - raw0) - (100.0 - raw0).floor();
            if n0 + (100.0 - raw0).floor() as usize == 99 && frac0 >= frac1 {
                n0 += 1;
            }
            assert_eq!(got.sizes[0], n0, "draw {r}: weights {w:?}");
        }
    }

    proptest! {
        #[test]
        fn sizes_always_valid(k in 1usize..8, mult in 1usize..20, tau in 0.0f64..3.0, seed in any::<u64>()) {
            let n = k * mult;
            let v = allocate_block_sizes(n, k, tau, &RandomSeed::new(seed)).unwrap();
            prop_assert_eq!(v.sizes.len(), k);
            prop_assert_eq!(v.sizes.iter().sum::<usize>(), n);
            prop_assert!(v.sizes.iter().all(|&s| s >= 1));
        }
    }

    #[test]
    fn bootstrap_extremes() {
        let sizes = allocate_block_sizes(12, 3, 0.0, &RandomSeed::new(0)).unwrap();
        let ones = BlockProbabilityMatrix::constant(3, 1.0).unwrap();
        let draws = generate_bootstrap_sequence(&ones, &sizes, 3, &RandomSeed::new(1), false).unwrap();
        assert_eq!(draws.len(), 3);
        for a in &draws {
            assert_eq!(a.ones(), 12 * 11);
            assert!((0..12).all(|i| a.get(i, i) == 0));
        }
        assert_eq!(
            generate_bootstrap_sequence(&ones, &sizes, 1, &RandomSeed::new(1), false)
                .unwrap()
                .len(),
            1
        );
        assert!(generate_bootstrap_sequence(&ones, &sizes, 0, &RandomSeed::new(1), false).is_err());
        let wrong = BlockProbabilityMatrix::constant(2, 1.0).unwrap();
        assert!(generate_bootstrap_sequence(&wrong, &sizes, 1, &RandomSeed::new(1), false).is_err());
    }

    #[test]
    fn bootstrap_within_block_frequency() {
        let sizes = allocate_block_sizes(100, 2, 0.0, &RandomSeed::new(0)).unwrap();
        let b = BlockProbabilityMatrix::planted(2, 0.5, 0.1).unwrap();
        let draws = generate_bootstrap_sequence(&b, &sizes, 10, &RandomSeed::new(8), false).unwrap();
        let mut ones = 0usize;
        for a in &draws {
            for i in 0..100 {
                for j in 0..100 {
                    if i != j && (i < 50) == (j < 50) {
                        ones += a.get(i, j) as usize;
                    }
                }
            }
        }
        let total = (10 * 2 * 50 * 49) as f64;
        let f = ones as f64 / total;
        assert!((f - 0.5).abs() < 3.0 * (0.25 / total).sqrt(), "{f}");
    }

    #[test]
    fn symmetric_mode_mirrors() {
        let sizes = allocate_block_sizes(20, 2, 0.0, &RandomSeed::new(0)).unwrap();
        let b = BlockProbabilityMatrix::planted(2, 0.5, 0.3).unwrap();
        let sym = generate_bootstrap_sequence(&b, &sizes, 2, &RandomSeed::new(3), true).unwrap();
        assert!(sym.iter().all(BinaryMatrix::is_symmetric));
        let dir = generate_bootstrap_sequence(&b, &sizes, 2, &RandomSeed::new(3), false).unwrap();
        assert!(!dir.iter().all(BinaryMatrix::is_symmetric));
    }

    #[test]
    fn pipeline_is_reproducible() {
        let run = || {
            let sizes = allocate_block_sizes(30, 3, 0.7, &RandomSeed::new(5)).unwrap();
            let b = BlockProbabilityMatrix::planted(3, 0.4, 0.2).unwrap();
            (
                sizes.clone(),
                generate_bootstrap_sequence(&b, &sizes, 4, &RandomSeed::new(6), false).unwrap(),
            )
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn coupled_h_matrix_matches_sequence() {
        let sizes = allocate_block_sizes(12, 2, 0.0, &RandomSeed::new(0)).unwrap();
        let p = BlockProbabilityMatrix::planted(2, 0.6, 0.2).unwrap();
        let q = BlockProbabilityMatrix::from_rows(vec![vec![0.3, 0.1], vec![0.1, 0.7]]).unwrap();
        let c = CoupledBootstraps::new(
            vec![p.clone()],
            vec![q.clone()],
            sizes.clone(),
            3,
            RandomSeed::new(4),
            false,
        )
        .unwrap();
        let g = generate_bootstrap_sequence(&p, &sizes, 3, &c.g_seed(0), false).unwrap();
        let h = generate_bootstrap_sequence(&q.permuted(&[1, 0]).unwrap(), &sizes, 3, &c.h_seed(0), false).unwrap();
        for w in 0..3 {
            assert_eq!(c.g_matrix(0, w), g[w]);
            assert_eq!(c.h_matrix(0, w, &[1, 0]).unwrap(), h[w]);
        }
    }
}
