//! Community-wise edge probability estimates.

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, BlockProbabilityMatrix, CommunityPartition};

/// Per-block edge counts over ordered pairs: entry `(u, v)` is the number of
/// 1-entries in the block `A_uv`. A within-community edge is counted twice.
pub fn block_edge_counts(a: &AdjacencyMatrix, partition: &CommunityPartition) -> Result<Vec<u64>> {
    if partition.n() != a.n() {
        return Err(Error::DimensionMismatch {
            what: "partition vs adjacency size",
            expected: a.n(),
            found: partition.n(),
        });
    }
    let k = partition.k();
    let mut counts = vec![0u64; k * k];
    for (i, row) in a.rows().enumerate() {
        let li = partition.label(i);
        for (j, &v) in row.iter().enumerate() {
            if v == 1 {
                counts[li * k + partition.label(j)] += 1;
            }
        }
    }
    Ok(counts)
}

/// `p̂_uu = #1s(A_uu) / (n_u (n_u − 1))`, `q̂_uv = #1s(A_uv) / (n_u n_v)`.
pub fn estimate_block_probabilities(
    a: &AdjacencyMatrix,
    partition: &CommunityPartition,
) -> Result<BlockProbabilityMatrix> {
    let k = partition.k();
    let sizes = partition.block_sizes();
    if let Some(u) = sizes.iter().position(|&s| s < 2) {
        return Err(Error::DegenerateCommunity {
            community: u,
            size: sizes[u],
        });
    }
    let counts = block_edge_counts(a, partition)?;
    let rows = (0..k)
        .map(|u| {
            (0..k)
                .map(|v| {
                    let pairs = if u == v {
                        sizes[u] * (sizes[u] - 1)
                    } else {
                        sizes[u] * sizes[v]
                    };
                    counts[u * k + v] as f64 / pairs as f64
                })
                .collect()
        })
        .collect();
    BlockProbabilityMatrix::from_rows(rows)
}
