//! Graph data types and random generation under the inhomogeneous
//! Erdős–Rényi (IER) and stochastic block (SBM) models.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::rng::RandomSeed;

/// Undirected, unweighted graph without self-loops, stored as a dense
/// `n × n` 0/1 matrix. Symmetric with a zero diagonal by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut a = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    a.entries[i * n + j] = 1;
                }
            }
        }
        a
    }

    /// Builds a graph from an undirected edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::MalformedMatrix(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::MalformedMatrix(format!("self-loop at node {i}")));
            }
            a.set_edge(i, j, true);
        }
        Ok(a)
    }

    /// Validates a dense row-major matrix.
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        let a = Self { n, entries };
        for i in 0..n {
            if a.entries[i * n + i] != 0 {
                return Err(Error::MalformedMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = a.entries[i * n + j];
                if v > 1 {
                    return Err(Error::MalformedMatrix(format!("entry ({i}, {j}) = {v} is not binary")));
                }
                if v != a.entries[j * n + i] {
                    return Err(Error::MalformedMatrix(format!("asymmetric entries at ({i}, {j})")));
                }
            }
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == 1
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        let v = u8::from(present);
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.entries.iter().map(|&v| v as usize).sum::<usize>() / 2
    }

    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks_exact(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows().map(<[u8]>::to_vec).collect()
    }

    /// Relabels nodes: node `i` of `self` becomes node `order[i]` of the result.
    pub fn relabeled(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.n)?;
        let mut out = Self::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[order[i] * self.n + order[j]] = self.get(i, j);
            }
        }
        Ok(out)
    }

    /// Entries as `f64`, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&v| v as f64).collect()
    }
}

impl TryFrom<Vec<Vec<u8>>> for AdjacencyMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<u8>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<AdjacencyMatrix> for Vec<Vec<u8>> {
    fn from(a: AdjacencyMatrix) -> Self {
        a.to_rows()
    }
}

/// Dense 0/1 matrix with a zero diagonal but no symmetry requirement.
///
/// Bootstrap draws use this type: each ordered pair `(i, j)`, `i != j`, is
/// its own Bernoulli draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: u8) {
        self.entries[i * self.n + j] = v;
    }

    pub fn ones(&self) -> usize {
        self.entries.iter().map(|&v| v as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// `n × n` matrix of edge probabilities, symmetric with entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeProbabilityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl EdgeProbabilityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in &row {
                check_probability(v)?;
            }
            entries.extend(row);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::MalformedMatrix(format!(
                        "asymmetric probabilities at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn constant(n: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            n,
            entries: vec![p; n * n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks_exact(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }
}

/// `K × K` community-wise edge probability matrix: diagonal entries are
/// within-community probabilities, off-diagonal entries between-community.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct BlockProbabilityMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl BlockProbabilityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::MalformedMatrix("empty block matrix".into()));
        }
        let mut entries = Vec::with_capacity(k * k);
        for (u, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::MalformedMatrix(format!(
                    "row {u} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for &v in &row {
                check_probability(v)?;
            }
            entries.extend(row);
        }
        for u in 0..k {
            for v in 0..u {
                if entries[u * k + v] != entries[v * k + u] {
                    return Err(Error::MalformedMatrix(format!(
                        "asymmetric block probabilities at ({u}, {v})"
                    )));
                }
            }
        }
        Ok(Self { k, entries })
    }

    /// `p` on the diagonal, `q` elsewhere.
    pub fn planted(k: usize, p: f64, q: f64) -> Result<Self> {
        check_probability(p)?;
        check_probability(q)?;
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        let entries = (0..k * k).map(|idx| if idx / k == idx % k { p } else { q }).collect();
        Ok(Self { k, entries })
    }

    pub fn constant(k: usize, p: f64) -> Result<Self> {
        Self::planted(k, p, p)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.entries[u * self.k + v]
    }

    /// `π(B)` with `π(B)[u][v] = B[π(u)][π(v)]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.k)?;
        let k = self.k;
        let entries = (0..k * k).map(|idx| self.get(perm[idx / k], perm[idx % k])).collect();
        Ok(Self { k, entries })
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks_exact(self.k).map(<[f64]>::to_vec).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for BlockProbabilityMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<BlockProbabilityMatrix> for Vec<Vec<f64>> {
    fn from(b: BlockProbabilityMatrix) -> Self {
        b.to_rows()
    }
}

/// Assignment of nodes to communities `0..K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityPartition {
    labels: Vec<usize>,
    block_sizes: Vec<usize>,
}

impl CommunityPartition {
    /// Every community in `0..k` must be nonempty.
    pub fn from_labels(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        let mut block_sizes = vec![0; k];
        for (i, &l) in labels.iter().enumerate() {
            if l >= k {
                return Err(Error::InvalidParameter(format!("node {i} has label {l}, but K = {k}")));
            }
            block_sizes[l] += 1;
        }
        if let Some(u) = block_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!("community {u} is empty")));
        }
        Ok(Self { labels, block_sizes })
    }

    /// Contiguous blocks: the first `sizes[0]` nodes form community 0, and so on.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        if let Some(u) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!("community {u} is empty")));
        }
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(u, &s)| std::iter::repeat_n(u, s))
            .collect();
        Ok(Self {
            labels,
            block_sizes: sizes.to_vec(),
        })
    }

    /// Contiguous, as-equal-as-possible blocks. When `K` does not divide `n`
    /// the remainder goes to the lowest-indexed communities.
    pub fn balanced(n: usize, k: usize) -> Result<Self> {
        if k == 0 || n < k {
            return Err(Error::InvalidParameter(format!(
                "cannot split {n} nodes into {k} nonempty communities"
            )));
        }
        let sizes: Vec<usize> = (0..k).map(|u| n / k + usize::from(u < n % k)).collect();
        Self::from_sizes(&sizes)
    }

    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn members(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |&(_, &l)| l == u)
            .map(|(i, _)| i)
    }

    /// Renames communities so that `result.label(i) == perm[self.label(i)]`.
    pub fn relabel_communities(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.k())?;
        let labels = self.labels.iter().map(|&l| perm[l]).collect();
        Self::from_labels(labels, self.k())
    }
}

pub(crate) fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(Error::DimensionMismatch {
            what: "permutation length",
            expected: len,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(Error::InvalidParameter(format!(
                "{perm:?} is not a permutation of 0..{len}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Draws `A_ij ~ Bernoulli(P_ij)` independently for each unordered pair and
/// mirrors it; the diagonal stays zero.
pub fn sample_ier(p: &EdgeProbabilityMatrix, seed: &RandomSeed) -> Result<AdjacencyMatrix> {
    for &v in &p.entries {
        check_probability(v)?;
    }
    let n = p.n();
    let mut rng = seed.rng();
    let mut a = AdjacencyMatrix::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p.get(i, j) {
                a.set_edge(i, j, true);
            }
        }
    }
    Ok(a)
}

/// Draws an SBM graph: edge `(i, j)` present with probability
/// `B[label(i)][label(j)]`.
pub fn sample_sbm(
    b: &BlockProbabilityMatrix,
    partition: &CommunityPartition,
    seed: &RandomSeed,
) -> Result<AdjacencyMatrix> {
    if b.k() != partition.k() {
        return Err(Error::DimensionMismatch {
            what: "block matrix vs partition K",
            expected: partition.k(),
            found: b.k(),
        });
    }
    let n = partition.n();
    let mut rng = seed.rng();
    let mut a = AdjacencyMatrix::empty(n);
    for i in 0..n {
        let li = partition.label(i);
        for j in i + 1..n {
            if rng.random::<f64>() < b.get(li, partition.label(j)) {
                a.set_edge(i, j, true);
            }
        }
    }
    Ok(a)
}

/// Node-level probability matrix with `p` within and `q` between communities.
pub fn planted_probability_matrix(
    k: usize,
    p: f64,
    q: f64,
    partition: &CommunityPartition,
) -> Result<EdgeProbabilityMatrix> {
    check_probability(p)?;
    check_probability(q)?;
    if k != partition.k() {
        return Err(Error::DimensionMismatch {
            what: "K vs partition",
            expected: partition.k(),
            found: k,
        });
    }
    let n = partition.n();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                entries[i * n + j] = if partition.label(i) == partition.label(j) { p } else { q };
            }
        }
    }
    Ok(EdgeProbabilityMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(a: &AdjacencyMatrix) {
        for i in 0..a.n() {
            assert_eq!(a.get(i, i), 0);
            for j in 0..a.n() {
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
    }

    #[test]
    fn ier_extremes() {
        let ones = EdgeProbabilityMatrix::constant(5, 1.0).unwrap();
        let a = sample_ier(&ones, &RandomSeed::new(1)).unwrap();
        assert_valid(&a);
        assert_eq!(a.edge_count(), 10);
        assert_eq!(a, AdjacencyMatrix::complete(5));

        let zeros = EdgeProbabilityMatrix::constant(5, 0.0).unwrap();
        let a = sample_ier(&zeros, &RandomSeed::new(1)).unwrap();
        assert_eq!(a.edge_count(), 0);
    }

    #[test]
    fn ier_rejects_bad_probability() {
        assert!(matches!(
            EdgeProbabilityMatrix::constant(3, 1.5),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(EdgeProbabilityMatrix::from_rows(vec![vec![0.0, -0.1], vec![-0.1, 0.0]]).is_err());
    }

    #[test]
    fn ier_mean_edge_count() {
        // Edge count is Binomial(C(200,2), 0.1): mean 1990, sd sqrt(1990 * 0.9).
        let p = EdgeProbabilityMatrix::constant(200, 0.1).unwrap();
        let root = RandomSeed::new(11);
        let reps = 1000;
        let total: usize = (0..reps)
            .map(|r| {
                let a = sample_ier(&p, &root.derive(r)).unwrap();
                if r < 5 {
                    assert_valid(&a);
                }
                a.edge_count()
            })
            .sum();
        let mean = total as f64 / reps as f64;
        let se = (1990.0f64 * 0.9).sqrt() / (reps as f64).sqrt();
        assert!((mean - 1990.0).abs() < 3.0 * se, "mean = {mean}");
    }

    #[test]
    fn sbm_two_cliques() {
        let b = BlockProbabilityMatrix::planted(2, 1.0, 0.0).unwrap();
        let part = CommunityPartition::from_sizes(&[3, 3]).unwrap();
        let a = sample_sbm(&b, &part, &RandomSeed::new(3)).unwrap();
        assert_valid(&a);
        for i in 0..6 {
            for j in 0..6 {
                let expect = i != j && (i < 3) == (j < 3);
                assert_eq!(a.has_edge(i, j), expect);
            }
        }
        let empty = sample_sbm(
            &BlockProbabilityMatrix::constant(2, 0.0).unwrap(),
            &part,
            &RandomSeed::new(3),
        )
        .unwrap();
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn sbm_dimension_mismatch() {
        let b = BlockProbabilityMatrix::planted(3, 0.5, 0.1).unwrap();
        let part = CommunityPartition::balanced(10, 2).unwrap();
        assert!(matches!(
            sample_sbm(&b, &part, &RandomSeed::new(0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sbm_within_block_frequency() {
        let b = BlockProbabilityMatrix::planted(2, 0.5, 0.1).unwrap();
        let part = CommunityPartition::from_sizes(&[50, 50]).unwrap();
        let root = RandomSeed::new(5);
        let reps = 1000u64;
        let pairs_per = 2 * (50 * 49 / 2);
        let mut within = 0usize;
        let mut between = 0usize;
        for r in 0..reps {
            let a = sample_sbm(&b, &part, &root.derive(r)).unwrap();
            for i in 0..100 {
                for j in i + 1..100 {
                    if a.has_edge(i, j) {
                        if (i < 50) == (j < 50) {
                            within += 1;
                        } else {
                            between += 1;
                        }
                    }
                }
            }
        }
        let n_within = (pairs_per as u64 * reps) as f64;
        let f = within as f64 / n_within;
        assert!((f - 0.5).abs() < 3.0 * (0.25 / n_within).sqrt(), "within {f}");
        let n_between = (2500 * reps) as f64;
        let g = between as f64 / n_between;
        assert!((g - 0.1).abs() < 3.0 * (0.09 / n_between).sqrt(), "between {g}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let b = BlockProbabilityMatrix::planted(3, 0.3, 0.05).unwrap();
        let part = CommunityPartition::balanced(40, 3).unwrap();
        let s = RandomSeed::new(99).derive(4);
        assert_eq!(sample_sbm(&b, &part, &s).unwrap(), sample_sbm(&b, &part, &s).unwrap());
    }

    #[test]
    fn planted_matrix_shapes() {
        let part = CommunityPartition::from_sizes(&[100, 100]).unwrap();
        let p = planted_probability_matrix(2, 0.1, 0.05, &part).unwrap();
        assert_eq!(p.get(0, 0), 0.0);
        assert_eq!(p.get(0, 99), 0.1);
        assert_eq!(p.get(100, 199), 0.1);
        assert_eq!(p.get(0, 100), 0.05);

        let part = CommunityPartition::balanced(7, 3).unwrap();
        let p = planted_probability_matrix(3, 0.3, 0.3, &part).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(p.get(i, j), if i == j { 0.0 } else { 0.3 });
            }
        }
        let one = CommunityPartition::balanced(4, 1).unwrap();
        let p = planted_probability_matrix(1, 0.2, 0.9, &one).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| p.get(i, j) == if i == j { 0.0 } else { 0.2 })));
    }

    #[test]
    fn from_rows_validation() {
        assert!(AdjacencyMatrix::from_rows(vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(AdjacencyMatrix::from_rows(vec![vec![1, 0], vec![0, 0]]).is_err());
        assert!(AdjacencyMatrix::from_rows(vec![vec![0, 2], vec![2, 0]]).is_err());
        assert!(AdjacencyMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn balanced_partition_remainder() {
        let p = CommunityPartition::balanced(200, 3).unwrap();
        assert_eq!(p.block_sizes(), &[67, 67, 66]);
        assert!(CommunityPartition::balanced(2, 3).is_err());
    }

    #[test]
    fn block_permutation() {
        let b = BlockProbabilityMatrix::from_rows(vec![vec![0.1, 0.2, 0.3], vec![0.2, 0.4, 0.5], vec![0.3, 0.5, 0.6]])
            .unwrap();
        let pb = b.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(pb.get(0, 0), 0.6);
        assert_eq!(pb.get(0, 1), 0.3);
        assert_eq!(pb.get(1, 2), 0.2);
        assert!(b.permuted(&[0, 0, 1]).is_err());
    }
}
