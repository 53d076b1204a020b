//! Correlation matrices to fixed-density graphs, common community count,
//! and pairwise condition tests per subject.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bootstrap::BootstrapConfig;
use crate::community::{select_common_k, spectral_partition, ResidualSpectralTest};
use crate::error::{Error, Result};
use crate::frobenius::{run_test, TestConfig};
use crate::graph::AdjacencyMatrix;
use crate::io::{adjacency_from_grid, read_grid_file};
use crate::rng::RandomSeed;

const CORRELATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &r) in row.iter().enumerate() {
                if !r.is_finite() || r.abs() > 1.0 + CORRELATION_TOL {
                    return Err(Error::MalformedMatrix(format!(
                        "entry ({i}, {j}) = {r} is not a correlation"
                    )));
                }
                if (r - rows[j][i]).abs() > CORRELATION_TOL {
                    return Err(Error::MalformedMatrix(format!("asymmetric at ({i}, {j})")));
                }
            }
            if (row[i] - 1.0).abs() > CORRELATION_TOL {
                return Err(Error::MalformedMatrix(format!(
                    "diagonal entry {i} is {}, expected 1",
                    row[i]
                )));
            }
            entries.extend(row.iter().map(|r| r.clamp(-1.0, 1.0)));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

/// Pearson correlation between every pair of rows.
pub fn correlation_from_series(series: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    let n = series.len();
    let t = series.first().map_or(0, Vec::len);
    if t < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 time points, got {t}")));
    }
    let mut centred = Vec::with_capacity(n);
    for (row, values) in series.iter().enumerate() {
        if values.len() != t {
            return Err(Error::DimensionMismatch {
                what: "series length",
                expected: t,
                found: values.len(),
            });
        }
        let mean = values.iter().sum::<f64>() / t as f64;
        let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
        let norm = dev.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVariance { row });
        }
        centred.push(dev.into_iter().map(|x| x / norm).collect::<Vec<f64>>());
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let r: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = r.clamp(-1.0, 1.0);
            entries[i * n + j] = r;
            entries[j * n + i] = r;
        }
    }
    Ok(CorrelationMatrix { n, entries })
}

/// Keeps the `edge_count` pairs of largest `|r|`. Ties go to the smaller
/// `(i, j)` in lexicographic order.
pub fn threshold_to_adjacency(c: &CorrelationMatrix, edge_count: usize) -> Result<AdjacencyMatrix> {
    let n = c.n();
    let max = n * n.saturating_sub(1) / 2;
    if edge_count > max {
        return Err(Error::EdgeCountOutOfRange {
            requested: edge_count,
            max,
        });
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|&(a, b), &(x, y)| {
        c.get(x, y)
            .abs()
            .total_cmp(&c.get(a, b).abs())
            .then((a, b).cmp(&(x, y)))
    });
    AdjacencyMatrix::from_edges(n, &pairs[..edge_count])
}

/// Edge count giving density `density` on `n` nodes, rounded to nearest.
pub fn edge_count_for_density(n: usize, density: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    Ok((density * (n * n.saturating_sub(1) / 2) as f64).round() as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConditionInput {
    Correlation(CorrelationMatrix),
    Adjacency(AdjacencyMatrix),
}

impl ConditionInput {
    fn n(&self) -> usize {
        match self {
            Self::Correlation(c) => c.n(),
            Self::Adjacency(a) => a.n(),
        }
    }
}

/// One experimental condition: one matrix per subject.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionDataset {
    pub condition_name: String,
    pub matrices: Vec<ConditionInput>,
}

impl ConditionDataset {
    pub fn new(condition_name: impl Into<String>, matrices: Vec<ConditionInput>) -> Result<Self> {
        let condition_name = condition_name.into();
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidParameter(format!(
                "condition {condition_name} has no matrices"
            )));
        };
        let n = first.n();
        if let Some(bad) = matrices.iter().find(|m| m.n() != n) {
            return Err(Error::DimensionMismatch {
                what: "matrix size within a condition",
                expected: n,
                found: bad.n(),
            });
        }
        Ok(Self {
            condition_name,
            matrices,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Edge density applied to correlation inputs.
    pub density: f64,
    pub k_max: usize,
    pub d: usize,
    pub tau: f64,
    pub alpha: f64,
    pub seed: u64,
    /// Parametric bootstraps per order test.
    pub order_bootstraps: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            density: 0.3,
            k_max: 4,
            d: 10,
            tau: 0.0,
            alpha: 0.05,
            seed: 0,
            order_bootstraps: 50,
        }
    }
}

/// Significance annotation for a p-value.
pub fn stars(p_value: f64) -> &'static str {
    match p_value {
        p if p <= 0.0001 => "****",
        p if p <= 0.001 => "***",
        p if p <= 0.01 => "**",
        p if p <= 0.05 => "*",
        _ => "",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub subject: String,
    pub k_hat: Option<usize>,
    pub pair: String,
    #[serde(rename = "T")]
    pub statistic: Option<f64>,
    pub z: Option<f64>,
    pub p_value: Option<f64>,
    pub decision: String,
    pub stars: String,
    pub error: Option<String>,
}

fn subject_graphs(datasets: &[ConditionDataset], subject: usize, density: f64) -> Result<Vec<AdjacencyMatrix>> {
    let graphs = datasets
        .iter()
        .map(|ds| match &ds.matrices[subject] {
            ConditionInput::Correlation(c) => threshold_to_adjacency(c, edge_count_for_density(c.n(), density)?),
            ConditionInput::Adjacency(a) => Ok(a.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = graphs[0].edge_count();
    if graphs.iter().any(|g| g.edge_count() != edges) {
        return Err(Error::InvalidParameter(format!(
            "subject {} has unequal edge densities across conditions",
            subject + 1
        )));
    }
    Ok(graphs)
}

fn subject_rows(datasets: &[ConditionDataset], name: &str, subject: usize, config: &PipelineConfig) -> Vec<ReportRow> {
    let pairs: Vec<(usize, usize)> = (0..datasets.len())
        .flat_map(|i| ((i + 1)..datasets.len()).map(move |j| (i, j)))
        .collect();
    let pair_name =
        |(i, j): (usize, usize)| format!("{} vs {}", datasets[i].condition_name, datasets[j].condition_name);
    let error_row = |pair: (usize, usize), k_hat: Option<usize>, e: &Error| ReportRow {
        subject: name.to_string(),
        k_hat,
        pair: pair_name(pair),
        statistic: None,
        z: None,
        p_value: None,
        decision: "error".into(),
        stars: String::new(),
        error: Some(e.to_string()),
    };

    let seed = RandomSeed::new(config.seed).derive(subject as u64);
    let prepared = subject_graphs(datasets, subject, config.density).and_then(|graphs| {
        let order_test = ResidualSpectralTest {
            bootstraps: config.order_bootstraps,
            alpha: config.alpha,
        };
        let k = select_common_k(&graphs, config.k_max, &order_test, &seed.derive(0))?.k;
        let parts = graphs
            .iter()
            .enumerate()
            .map(|(c, g)| spectral_partition(g, k, &seed.derive(1).derive(c as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok((graphs, k, parts))
    });
    let (graphs, k, parts) = match prepared {
        Ok(v) => v,
        Err(e) => return pairs.iter().map(|&p| error_row(p, None, &e)).collect(),
    };

    pairs
        .iter()
        .enumerate()
        .map(|(idx, &(i, j))| {
            let mut tc = TestConfig::new(BootstrapConfig::new(
                config.d,
                config.tau,
                seed.derive(2).derive(idx as u64),
            ));
            tc.alpha = config.alpha;
            match run_test(
                std::slice::from_ref(&graphs[i]),
                std::slice::from_ref(&graphs[j]),
                std::slice::from_ref(&parts[i]),
                std::slice::from_ref(&parts[j]),
                &tc,
            ) {
                Ok(res) => ReportRow {
                    subject: name.to_string(),
                    k_hat: Some(k),
                    pair: pair_name((i, j)),
                    statistic: Some(res.statistic),
                    z: Some(res.z),
                    p_value: Some(res.p_value),
                    decision: if res.reject { "reject" } else { "fail to reject" }.into(),
                    stars: stars(res.p_value).into(),
                    error: None,
                },
                Err(e) => error_row((i, j), Some(k), &e),
            }
        })
        .collect()
}

/// Runs every unordered condition pair for every subject. Subject `s` uses
/// matrix `s` of each condition; per-subject failures become error rows.
pub fn pairwise_condition_tests(
    datasets: &[ConditionDataset],
    subject_names: Option<&[String]>,
    config: &PipelineConfig,
) -> Result<Vec<ReportRow>> {
    if datasets.len() < 2 {
        return Err(Error::InvalidParameter("need at least two conditions".into()));
    }
    let subjects = datasets[0].matrices.len();
    if datasets.iter().any(|d| d.matrices.len() != subjects) {
        return Err(Error::InvalidParameter(
            "every condition needs one matrix per subject".into(),
        ));
    }
    let n = datasets[0].matrices[0].n();
    if let Some(bad) = datasets.iter().find(|d| d.matrices[0].n() != n) {
        return Err(Error::DimensionMismatch {
            what: "matrix size across conditions",
            expected: n,
            found: bad.matrices[0].n(),
        });
    }
    let names: Vec<String> = match subject_names {
        Some(names) if names.len() == subjects => names.to_vec(),
        Some(names) => {
            return Err(Error::DimensionMismatch {
                what: "subject names",
                expected: subjects,
                found: names.len(),
            })
        }
        None => (1..=subjects).map(|s| format!("subject-{s}")).collect(),
    };

    let run = |s: usize| subject_rows(datasets, &names[s], s, config);
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<ReportRow>> = {
        use rayon::prelude::*;
        (0..subjects).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<ReportRow>> = (0..subjects).map(run).collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_report_csv<W: Write>(writer: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    /// ROI × time series; correlated and thresholded.
    #[default]
    Series,
    Correlation,
    Adjacency,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestSubject {
    pub name: String,
    /// Condition name → CSV path, relative to the manifest.
    pub files: std::collections::BTreeMap<String, PathBuf>,
}

/// TOML manifest:
///
/// ```toml
/// conditions = ["stimulus-1", "stimulus-2", "control"]
/// kind = "series"
///
/// [config]
/// density = 0.3
///
/// [[subject]]
/// name = "s1"
/// files = { stimulus-1 = "s1/stim1.csv", stimulus-2 = "s1/stim2.csv", control = "s1/ctrl.csv" }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub conditions: Vec<String>,
    #[serde(default)]
    pub kind: InputKind,
    #[serde(default)]
    pub config: PipelineConfig,
    #[serde(rename = "subject")]
    pub subjects: Vec<ManifestSubject>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    /// Reads every referenced file, resolving relative paths against `base`.
    pub fn load_datasets(&self, base: &Path) -> Result<Vec<ConditionDataset>> {
        self.conditions
            .iter()
            .map(|cond| {
                let matrices = self
                    .subjects
                    .iter()
                    .map(|s| {
                        let rel = s.files.get(cond).ok_or_else(|| {
                            Error::Manifest(format!("subject {} has no file for condition {cond}", s.name))
                        })?;
                        let grid = read_grid_file(base.join(rel))?;
                        Ok(match self.kind {
                            InputKind::Series => ConditionInput::Correlation(correlation_from_series(&grid)?),
                            InputKind::Correlation => ConditionInput::Correlation(CorrelationMatrix::from_rows(grid)?),
                            InputKind::Adjacency => ConditionInput::Adjacency(adjacency_from_grid(grid)?),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ConditionDataset::new(cond.clone(), matrices)
            })
            .collect()
    }

    pub fn subject_names(&self) -> Vec<String> {
        self.subjects.iter().map(|s| s.name.clone()).collect()
    }
}

/// Loads a manifest file and runs the full workflow.
pub fn run_manifest(path: &Path, density: Option<f64>) -> Result<Vec<ReportRow>> {
    let text = std::fs::read_to_string(path)?;
    let manifest = Manifest::parse(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let datasets = manifest.load_datasets(base)?;
    let mut config = manifest.config.clone();
    if let Some(d) = density {
        config.density = d;
    }
    pairwise_condition_tests(&datasets, Some(&manifest.subject_names()), &config)
}
