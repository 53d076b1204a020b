//! Monte Carlo rejection-rate experiments.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::baseline::asymp_normal_test;
use crate::bootstrap::BootstrapConfig;
use crate::community::spectral_partition;
use crate::error::{check_probability, Error, Result};
use crate::frobenius::{run_test, Method, Sidedness, TestConfig, TestResult};
use crate::graph::{sample_sbm, AdjacencyMatrix, BlockProbabilityMatrix, CommunityPartition};
use crate::rng::RandomSeed;

/// A scalar or a list in config files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x.clone()],
            Self::Many(xs) => xs.clone(),
        }
    }
}

fn default_replicates() -> usize {
    1000
}

fn default_alpha() -> f64 {
    0.05
}

fn default_method() -> Method {
    Method::Frobenius
}

fn default_epsilon() -> OneOrMany<f64> {
    OneOrMany::One(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_g: usize,
    pub n_h: usize,
    pub m: usize,
    pub k: OneOrMany<usize>,
    pub p: f64,
    pub q: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: OneOrMany<f64>,
    #[serde(default)]
    pub tau: f64,
    pub d_values: OneOrMany<usize>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub sidedness: Sidedness,
    /// Partition each sample spectrally instead of passing the planted labels.
    #[serde(default)]
    pub detect_communities: bool,
    /// Mirror bootstrap draws instead of drawing ordered entries independently.
    #[serde(default)]
    pub symmetric_bootstraps: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("experiment config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        check_probability(self.p)?;
        check_probability(self.q)?;
        for eps in self.epsilon.to_vec() {
            check_probability(self.p + eps)?;
            check_probability(self.q + eps)?;
        }
        if self.k.to_vec().is_empty() || self.d_values.to_vec().is_empty() || self.epsilon.to_vec().is_empty() {
            return Err(Error::InvalidParameter(
                "k, epsilon and d_values need at least one entry".into(),
            ));
        }
        if self.method == Method::AsympNormal && self.n_g != self.n_h {
            return Err(Error::UnequalGraphSizes);
        }
        Ok(())
    }
}

/// One `(d, K, ε)` design point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub d: usize,
    pub k: usize,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub method: Method,
    pub n_g: usize,
    pub n_h: usize,
    pub d: usize,
    pub k: usize,
    pub epsilon: f64,
    pub replicates: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub monte_carlo_se: f64,
}

/// Binomial standard error `sqrt(r (1 − r) / R)`.
pub fn binomial_se(rate: f64, replicates: usize) -> f64 {
    (rate * (1.0 - rate) / replicates as f64).sqrt()
}

/// Samples and tests one replicate. Graph draws depend on
/// `(seed, K, ε, replicate)` only, so every `d` sees the same graphs.
pub fn run_replicate(config: &ExperimentConfig, cell: Cell, replicate: usize) -> Result<TestResult> {
    let k_tag = cell.k as u64;
    let eps_tag = cell.epsilon.to_bits();
    let rep = RandomSeed::new(config.seed)
        .derive(k_tag)
        .derive(eps_tag)
        .derive(replicate as u64);
    let g_truth = BlockProbabilityMatrix::planted(cell.k, config.p, config.q)?;
    let h_truth = BlockProbabilityMatrix::planted(cell.k, config.p + cell.epsilon, config.q + cell.epsilon)?;
    let g_part = CommunityPartition::balanced(config.n_g, cell.k)?;
    let h_part = CommunityPartition::balanced(config.n_h, cell.k)?;

    let draw = |truth: &BlockProbabilityMatrix, part: &CommunityPartition, side: u64| -> Result<Vec<AdjacencyMatrix>> {
        (0..config.m)
            .map(|l| sample_sbm(truth, part, &rep.derive(side).derive(l as u64)))
            .collect()
    };
    let g = draw(&g_truth, &g_part, 0)?;
    let h = draw(&h_truth, &h_part, 1)?;

    match config.method {
        Method::AsympNormal => asymp_normal_test(&g, &h, config.alpha),
        Method::Frobenius => {
            let parts = |graphs: &[AdjacencyMatrix],
                         planted: &CommunityPartition,
                         side: u64|
             -> Result<Vec<CommunityPartition>> {
                if config.detect_communities {
                    graphs
                        .iter()
                        .enumerate()
                        .map(|(l, a)| spectral_partition(a, cell.k, &rep.derive(2).derive(side).derive(l as u64)))
                        .collect()
                } else {
                    Ok(vec![planted.clone(); graphs.len()])
                }
            };
            let gp = parts(&g, &g_part, 0)?;
            let hp = parts(&h, &h_part, 1)?;
            let mut bootstrap = BootstrapConfig::new(cell.d, config.tau, rep.derive(3).derive(cell.d as u64));
            bootstrap.symmetric = config.symmetric_bootstraps;
            let mut tc = TestConfig::new(bootstrap);
            tc.alpha = config.alpha;
            tc.sidedness = config.sidedness;
            run_test(&g, &h, &gp, &hp, &tc)
        }
    }
}

/// All replicate results for one cell, in replicate order.
pub fn run_cell(config: &ExperimentConfig, cell: Cell) -> Result<Vec<TestResult>> {
    let run = |r: usize| run_replicate(config, cell, r);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..config.replicates).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..config.replicates).map(run).collect()
    }
}

fn summarize(config: &ExperimentConfig, cell: Cell, results: &[TestResult]) -> ExperimentRow {
    let rejections = results.iter().filter(|r| r.reject).count();
    let rate = rejections as f64 / results.len() as f64;
    ExperimentRow {
        method: config.method,
        n_g: config.n_g,
        n_h: config.n_h,
        d: cell.d,
        k: cell.k,
        epsilon: cell.epsilon,
        replicates: results.len(),
        rejections,
        rejection_rate: rate,
        monte_carlo_se: binomial_se(rate, results.len()),
    }
}

/// Rejection rate for every `(d, K, ε)` combination. Rows are ordered by
/// `K`, then `ε`, then `d`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for k in config.k.to_vec() {
        for epsilon in config.epsilon.to_vec() {
            for d in config.d_values.to_vec() {
                let cell = Cell { d, k, epsilon };
                let results = run_cell(config, cell)?;
                rows.push(summarize(config, cell, &results));
            }
        }
    }
    Ok(rows)
}

fn default_offset() -> usize {
    100
}

fn default_sweep_epsilon() -> f64 {
    0.04
}

fn default_methods() -> Vec<Method> {
    vec![Method::Frobenius, Method::AsympNormal]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Values of `n^G`.
    pub sizes: Vec<usize>,
    /// `n^H = n^G + h_offset` for the Frobenius test.
    #[serde(default = "default_offset")]
    pub h_offset: usize,
    pub m: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    #[serde(default = "default_sweep_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub tau: f64,
    pub d: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("sweep config: {e}")))
    }
}

/// Null and alternative rejection rates per size and method. The
/// Asymp-Normal baseline needs equal sizes and runs at `n^H = n^G`.
pub fn run_power_sweep(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    if config.sizes.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one size".into()));
    }
    let mut rows = Vec::new();
    for &n_g in &config.sizes {
        for &method in &config.methods {
            let n_h = match method {
                Method::Frobenius => n_g + config.h_offset,
                Method::AsympNormal => n_g,
            };
            let exp = ExperimentConfig {
                n_g,
                n_h,
                m: config.m,
                k: OneOrMany::One(config.k),
                p: config.p,
                q: config.q,
                epsilon: OneOrMany::Many(vec![0.0, config.epsilon]),
                tau: config.tau,
                d_values: OneOrMany::One(config.d),
                replicates: config.replicates,
                alpha: config.alpha,
                seed: config.seed,
                method,
                sidedness: Sidedness::TwoSided,
                detect_communities: false,
                symmetric_bootstraps: false,
            };
            rows.extend(run_experiment(&exp)?);
        }
    }
    Ok(rows)
}

pub fn write_rows_csv<W: Write>(writer: W, rows: &[ExperimentRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig::from_toml(
            r#"
n_g = 40
n_h = 30
m = 2
k = 2
p = 0.1
q = 0.05
epsilon = [0.0, 0.02]
d_values = [1, 2]
replicates = 20
seed = 3
"#,
        )
        .unwrap()
    }

    #[test]
    fn config_defaults_and_lists() {
        let c = small();
        assert_eq!(c.k.to_vec(), vec![2]);
        assert_eq!(c.d_values.to_vec(), vec![1, 2]);
        assert_eq!(c.alpha, 0.05);
        assert_eq!(c.method, Method::Frobenius);
        assert!(ExperimentConfig::from_toml("n_g = 1").is_err());
    }

    #[test]
    fn validation() {
        let mut c = small();
        c.epsilon = OneOrMany::One(0.95);
        assert!(matches!(c.validate(), Err(Error::InvalidProbability { .. })));
        let mut c = small();
        c.replicates = 0;
        assert!(c.validate().is_err());
        let mut c = small();
        c.method = Method::AsympNormal;
        assert!(matches!(c.validate(), Err(Error::UnequalGraphSizes)));
    }

    #[test]
    fn experiment_is_reproducible() {
        let c = small();
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        for row in &a {
            assert_eq!(row.replicates, 20);
            assert!((row.monte_carlo_se - binomial_se(row.rejection_rate, 20)).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_output_has_header() {
        let rows = run_experiment(&ExperimentConfig {
            replicates: 2,
            ..small()
        })
        .unwrap();
        let mut buf = Vec::new();
        write_rows_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("method,n_g,n_h,d,k,epsilon,replicates,rejections,rejection_rate,monte_carlo_se\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
