//! Asymptotic-normal baseline for equal-sized, vertex-aligned samples.
//!
//! The samples are split in two halves; with `D1`, `D2` the summed
//! differences `A^G − A^H` over each half,
//!
//! ```text
//! T = Σ_{i<j} D1_ij D2_ij / sqrt(Σ_{i<j} D1_ij² D2_ij²)
//! ```
//!
//! is compared with a standard normal.

use crate::error::{Error, Result};
use crate::frobenius::{decide, Method, NullCase, NullParams, Sidedness, TestResult};
use crate::graph::AdjacencyMatrix;

/// Value of the self-normalized statistic. A zero denominator gives 0.
pub fn asymp_normal_statistic(g_samples: &[AdjacencyMatrix], h_samples: &[AdjacencyMatrix]) -> Result<f64> {
    let m = g_samples.len();
    if m != h_samples.len() {
        return Err(Error::SampleCountMismatch {
            g: m,
            h: h_samples.len(),
        });
    }
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::OddSampleCount(m));
    }
    let n = g_samples[0].n();
    if g_samples.iter().chain(h_samples).any(|a| a.n() != n) {
        return Err(Error::UnequalGraphSizes);
    }

    let half = m / 2;
    let diff_sum = |range: std::ops::Range<usize>, i: usize, j: usize| -> f64 {
        range
            .map(|l| f64::from(g_samples[l].get(i, j)) - f64::from(h_samples[l].get(i, j)))
            .sum()
    };
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let d1 = diff_sum(0..half, i, j);
            let d2 = diff_sum(half..m, i, j);
            num += d1 * d2;
            den += d1 * d1 * d2 * d2;
        }
    }
    Ok(if den > 0.0 { num / den.sqrt() } else { 0.0 })
}

/// Two-sided test at level `alpha`.
pub fn asymp_normal_test(
    g_samples: &[AdjacencyMatrix],
    h_samples: &[AdjacencyMatrix],
    alpha: f64,
) -> Result<TestResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let statistic = asymp_normal_statistic(g_samples, h_samples)?;
    let null_params = NullParams {
        mu: 0.0,
        sigma2: 1.0,
        case: NullCase::StandardNormal,
    };
    let (z, p_value, reject) = decide(statistic, &null_params, alpha, Sidedness::TwoSided);
    Ok(TestResult {
        method: Method::AsympNormal,
        statistic,
        null_params,
        z,
        p_value,
        reject,
        best_permutation: Vec::new(),
        diagnostics: None,
        structural_rejection: None,
        config: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identical_samples_give_zero() {
        let a = AdjacencyMatrix::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let res = asymp_normal_test(&[a.clone(), a.clone()], &[a.clone(), a], 0.05).unwrap();
        assert_eq!(res.statistic, 0.0);
        assert!(!res.reject);
        assert_eq!(res.p_value, 1.0);
    }

    #[test]
    fn hand_computed_value() {
        // One edge differs in both halves with the same sign, another with
        // opposite signs.
        let g1 = AdjacencyMatrix::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let g2 = AdjacencyMatrix::from_edges(3, &[(0, 1)]).unwrap();
        let h1 = AdjacencyMatrix::from_edges(3, &[]).unwrap();
        let h2 = AdjacencyMatrix::from_edges(3, &[(1, 2)]).unwrap();
        // Pair (0,1): D1 = 1, D2 = 1. Pair (1,2): D1 = 1, D2 = -1.
        let t = asymp_normal_statistic(&[g1.clone(), g2.clone()], &[h1.clone(), h2.clone()]).unwrap();
        assert_relative_eq!(t, 0.0);
        let g2b = AdjacencyMatrix::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h2b = AdjacencyMatrix::from_edges(3, &[]).unwrap();
        let t = asymp_normal_statistic(&[g1, g2b], &[h1, h2b]).unwrap();
        assert_relative_eq!(t, 2.0 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = AdjacencyMatrix::empty(4);
        let b = AdjacencyMatrix::empty(5);
        assert!(matches!(
            asymp_normal_statistic(&[a.clone()], &[a.clone()]),
            Err(Error::OddSampleCount(1))
        ));
        assert!(matches!(
            asymp_normal_statistic(&[a.clone(), a.clone()], &[a.clone(), b]),
            Err(Error::UnequalGraphSizes)
        ));
        assert!(matches!(
            asymp_normal_statistic(&[a.clone(), a.clone()], &[a]),
            Err(Error::SampleCountMismatch { .. })
        ));
    }
}
