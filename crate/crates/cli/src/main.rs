use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use frobtest::bootstrap::BootstrapConfig;
use frobtest::community::{select_common_k, spectral_partition, ResidualSpectralTest};
use frobtest::error::{Error, Result};
use frobtest::frobenius::{run_test, Sidedness, TestConfig};
use frobtest::io::read_adjacency_file;
use frobtest::pipeline::{run_manifest, write_report_csv};
use frobtest::rng::RandomSeed;
use frobtest::sim::{run_experiment, run_power_sweep, write_rows_csv, ExperimentConfig, SweepConfig};

/// Two-sample tests for random graphs of unequal size.
#[derive(Parser)]
#[command(name = "frobtest", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo rejection rates for every (d, K, epsilon) cell of a TOML config; CSV on stdout.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Rejection rate versus graph size for each method; CSV on stdout.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Test two sequences of adjacency CSV files; one JSON record on stdout.
    Test {
        /// Adjacency matrices of the first sequence.
        #[arg(long, num_args = 1.., required = true)]
        g: Vec<PathBuf>,
        /// Adjacency matrices of the second sequence (same count as --g).
        #[arg(long, num_args = 1.., required = true)]
        h: Vec<PathBuf>,
        /// Number of communities; detected from the inputs when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Largest community count considered during detection.
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Bootstrap draws per sample.
        #[arg(long, default_value_t = 10)]
        d: usize,
        /// Spread of the bootstrap community-size weights; 0 gives equal sizes.
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One-sided test rejecting only for large statistics.
        #[arg(long)]
        upper: bool,
    },
    /// Sequentially select a common community count; JSON on stdout.
    DetectK {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Parametric bootstraps per order test.
        #[arg(long, default_value_t = 50)]
        bootstraps: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every condition pair for every subject listed in a TOML manifest.
    Pipeline {
        #[arg(long)]
        manifest: PathBuf,
        /// Edge density for thresholding correlation inputs (default 0.3, or the manifest value).
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    writeln!(io::stdout(), "{text}")?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config } => {
            let cfg = ExperimentConfig::from_toml(&read_text(&config)?)?;
            write_rows_csv(io::stdout().lock(), &run_experiment(&cfg)?)
        }
        Command::Sweep { config } => {
            let cfg = SweepConfig::from_toml(&read_text(&config)?)?;
            write_rows_csv(io::stdout().lock(), &run_power_sweep(&cfg)?)
        }
        Command::Test {
            g,
            h,
            k,
            kmax,
            d,
            tau,
            alpha,
            seed,
            upper,
        } => {
            let g = g.iter().map(read_adjacency_file).collect::<Result<Vec<_>>>()?;
            let h = h.iter().map(read_adjacency_file).collect::<Result<Vec<_>>>()?;
            let root = RandomSeed::new(seed);
            let k = match k {
                Some(k) => k,
                None => {
                    let all: Vec<_> = g.iter().chain(&h).cloned().collect();
                    select_common_k(&all, kmax, &ResidualSpectralTest::default(), &root.derive(0))?.k
                }
            };
            let partition = |graphs: &[_], side: u64| -> Result<Vec<_>> {
                graphs
                    .iter()
                    .enumerate()
                    .map(|(l, a)| spectral_partition(a, k, &root.derive(1).derive(side).derive(l as u64)))
                    .collect()
            };
            let gp = partition(&g, 0)?;
            let hp = partition(&h, 1)?;
            let mut cfg = TestConfig::new(BootstrapConfig::new(d, tau, root.derive(2)));
            cfg.alpha = alpha;
            if upper {
                cfg.sidedness = Sidedness::Upper;
            }
            print_json(&run_test(&g, &h, &gp, &hp, &cfg)?)
        }
        Command::DetectK {
            inputs,
            kmax,
            bootstraps,
            alpha,
            seed,
        } => {
            let nets = inputs.iter().map(read_adjacency_file).collect::<Result<Vec<_>>>()?;
            let test = ResidualSpectralTest { bootstraps, alpha };
            print_json(&select_common_k(&nets, kmax, &test, &RandomSeed::new(seed))?)
        }
        Command::Pipeline {
            manifest,
            density,
            format,
        } => {
            let rows = run_manifest(&manifest, density)?;
            match format {
                Format::Csv => write_report_csv(io::stdout().lock(), &rows),
                Format::Json => print_json(&rows),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = ErrorRecord {
                error: e.kind(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&record).unwrap_or_else(|_| e.to_string()));
            ExitCode::FAILURE
        }
    }
}
