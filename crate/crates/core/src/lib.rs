//! Two-sample hypothesis testing for populations of random graphs whose
//! vertex counts differ, built on stochastic block model bootstraps.

pub mod baseline;
pub mod bootstrap;
pub mod community;
pub mod error;
pub mod estimation;
pub mod frobenius;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod rng;
pub mod sim;

pub use baseline::asymp_normal_test;
pub use bootstrap::{allocate_block_sizes, common_size, BlockSizeVector, BootstrapConfig, CoupledBootstraps};
pub use community::{sequential_common_k, spectral_partition};
pub use error::{Error, Result};
pub use estimation::estimate_block_probabilities;
pub use frobenius::{run_test, Method, NullCase, NullParams, Sidedness, TestConfig, TestResult};
pub use graph::{
    sample_ier, sample_sbm, AdjacencyMatrix, BinaryMatrix, BlockProbabilityMatrix, CommunityPartition,
    EdgeProbabilityMatrix,
};
pub use rng::RandomSeed;
