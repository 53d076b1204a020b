//! WebAssembly bindings for the demo page. Every function returns a JSON
//! string; errors are thrown as JS exceptions carrying the message.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use frobtest::bootstrap::BootstrapConfig;
use frobtest::frobenius::{run_test, Method, TestConfig};
use frobtest::graph::{sample_sbm, BlockProbabilityMatrix, CommunityPartition};
use frobtest::rng::RandomSeed;
use frobtest::sim::{run_experiment, ExperimentConfig, OneOrMany};

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(js_err)
}

#[derive(Serialize)]
struct Heatmap {
    n: usize,
    labels: Vec<usize>,
    rows: Vec<Vec<u8>>,
    density: f64,
}

/// One planted SBM draw with balanced communities.
#[wasm_bindgen]
pub fn sample_heatmap(n: usize, k: usize, p: f64, q: f64, seed: u64) -> Result<String, JsValue> {
    let part = CommunityPartition::balanced(n, k).map_err(js_err)?;
    let truth = BlockProbabilityMatrix::planted(k, p, q).map_err(js_err)?;
    let a = sample_sbm(&truth, &part, &RandomSeed::new(seed)).map_err(js_err)?;
    to_json(&Heatmap {
        n,
        labels: part.labels().to_vec(),
        rows: a.to_rows(),
        density: a.density(),
    })
}

#[derive(Serialize)]
struct SingleTest {
    statistic: f64,
    mu: f64,
    sigma: f64,
    z: f64,
    p_value: f64,
    reject: bool,
    best_permutation: Vec<usize>,
    bootstrap_size: Option<usize>,
    block_sizes: Option<Vec<usize>>,
}

/// Draws `m` graphs per side from planted models `(p, q)` and
/// `(p + epsilon, q + epsilon)` and runs one test with the true labels.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn single_test(
    n_g: usize,
    n_h: usize,
    m: usize,
    k: usize,
    p: f64,
    q: f64,
    epsilon: f64,
    d: usize,
    tau: f64,
    seed: u64,
) -> Result<String, JsValue> {
    let root = RandomSeed::new(seed);
    let gp = CommunityPartition::balanced(n_g, k).map_err(js_err)?;
    let hp = CommunityPartition::balanced(n_h, k).map_err(js_err)?;
    let gt = BlockProbabilityMatrix::planted(k, p, q).map_err(js_err)?;
    let ht = BlockProbabilityMatrix::planted(k, p + epsilon, q + epsilon).map_err(js_err)?;
    let g = (0..m as u64)
        .map(|l| sample_sbm(&gt, &gp, &root.derive(0).derive(l)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(js_err)?;
    let h = (0..m as u64)
        .map(|l| sample_sbm(&ht, &hp, &root.derive(1).derive(l)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(js_err)?;
    let cfg = TestConfig::new(BootstrapConfig::new(d, tau, root.derive(2)));
    let res = run_test(&g, &h, &vec![gp; m], &vec![hp; m], &cfg).map_err(js_err)?;
    let resolved = res.config.as_ref();
    to_json(&SingleTest {
        statistic: res.statistic,
        mu: res.null_params.mu,
        sigma: res.null_params.sigma2.sqrt(),
        z: res.z,
        p_value: res.p_value,
        reject: res.reject,
        best_permutation: res.best_permutation.clone(),
        bootstrap_size: resolved.and_then(|c| c.n),
        block_sizes: resolved.and_then(|c| c.block_sizes.as_ref().map(|b| b.sizes.clone())),
    })
}

/// Rejection rate at each shift in `epsilons` (a JSON array of numbers).
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn power_curve(
    n_g: usize,
    n_h: usize,
    m: usize,
    k: usize,
    p: f64,
    q: f64,
    epsilons: &str,
    d: usize,
    tau: f64,
    replicates: usize,
    seed: u64,
) -> Result<String, JsValue> {
    let eps: Vec<f64> = serde_json::from_str(epsilons).map_err(js_err)?;
    let cfg = ExperimentConfig {
        n_g,
        n_h,
        m,
        k: OneOrMany::One(k),
        p,
        q,
        epsilon: OneOrMany::Many(eps),
        tau,
        d_values: OneOrMany::One(d),
        replicates,
        alpha: 0.05,
        seed,
        method: Method::Frobenius,
        sidedness: Default::default(),
        detect_communities: false,
        symmetric_bootstraps: false,
    };
    to_json(&run_experiment(&cfg).map_err(js_err)?)
}
