mod bench;
mod reduce;
mod report;

use std::fmt;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use threesum_core::instances::generate;
use threesum_core::oracle::solve_set_queries;
use threesum_core::setreduce::{format_answers, SetQueryInstance};

#[derive(Parser)]
#[command(name = "threesum", version, about = "Deterministic 3SUM reductions with oracle backends")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        universe: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        planted: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one pipeline on an instance file and print a key=value report.
    Reduce(reduce::ReduceArgs),
    /// Sweep n and compare greedy modulus selection with random primes.
    Bench(bench::BenchArgs),
    /// Answer a serialized set-query family from stdin with full
    /// intersections; the reference external backend.
    #[command(hide = true)]
    SolveQueries,
}

/// Bad flags or input; exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

/// The pipeline disagreed with the oracle; exit code 1.
#[derive(Debug)]
pub struct Mismatch(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification mismatch: {}", self.0)
    }
}

impl std::error::Error for Usage {}
impl std::error::Error for Mismatch {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use threesum_core::Error as E;
    if err.is::<Mismatch>() {
        return 1;
    }
    if err.is::<Usage>() || err.is::<std::io::Error>() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(E::Param(_) | E::Parse { .. } | E::Instance(_) | E::MalformedAnswer { .. }) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { n, universe, seed, planted, out } => {
            if n == 0 {
                return Err(Usage("--n must be positive".into()).into());
            }
            let text = generate(n, universe, seed, planted)?.to_string();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Reduce(args) => reduce::run(&args),
        Command::Bench(args) => bench::run(&args),
        Command::SolveQueries => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            let family = SetQueryInstance::parse(&text)?;
            let answers: Vec<Vec<u64>> = solve_set_queries(&family)?.into_iter().map(|a| a.intersection).collect();
            print!("{}", format_answers(&answers));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = std::env::var("THREESUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if t > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
