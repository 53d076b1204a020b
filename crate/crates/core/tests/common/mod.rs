#![allow(dead_code)]

use frobtest::bootstrap::UniformField;
use frobtest::graph::BlockProbabilityMatrix;

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Disagreements for one fixed permutation, materializing every G and H
/// draw and summing squared differences entry by entry.
pub fn naive_disagreements(
    p_hats: &[BlockProbabilityMatrix],
    q_hats: &[BlockProbabilityMatrix],
    labels: &[usize],
    g_fields: &[Vec<UniformField>],
    h_fields: &[Vec<UniformField>],
    perm: &[usize],
) -> u64 {
    let n = labels.len();
    let mut total = 0u64;
    for l in 0..p_hats.len() {
        for (gf, hf) in g_fields[l].iter().zip(&h_fields[l]) {
            let g: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (i != j && gf.get(i, j) < p_hats[l].get(labels[i], labels[j])) as i64)
                        .collect()
                })
                .collect();
            let h: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (i != j && hf.get(i, j) < q_hats[l].get(perm[labels[i]], perm[labels[j]])) as i64)
                        .collect()
                })
                .collect();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        total += ((g[i][j] - h[i][j]) * (g[i][j] - h[i][j])) as u64;
                    }
                }
            }
        }
    }
    total
}

/// Minimum over all permutations with the first minimizer in lexicographic order.
pub fn naive_statistic(
    p_hats: &[BlockProbabilityMatrix],
    q_hats: &[BlockProbabilityMatrix],
    labels: &[usize],
    g_fields: &[Vec<UniformField>],
    h_fields: &[Vec<UniformField>],
) -> (u64, Vec<usize>) {
    let mut best: Option<(u64, Vec<usize>)> = None;
    for perm in permutations(p_hats[0].k()) {
        let total = naive_disagreements(p_hats, q_hats, labels, g_fields, h_fields, &perm);
        if best.as_ref().map_or(true, |(b, _)| total < *b) {
            best = Some((total, perm));
        }
    }
    best.unwrap()
}

/// Kolmogorov–Smirnov distance between a sample and the standard normal.
pub fn ks_distance_normal(sample: &[f64]) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let normal = Normal::standard();
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at level 0.01.
pub fn ks_critical_001(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
