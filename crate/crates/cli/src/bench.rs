use clap::Args;
use rayon::prelude::*;
use threesum_core::hashing::{
    default_bound, select_modulus_few_false_positives_with, select_modulus_random_baseline, DetectionBound,
    HashParams, SelectOptions,
};
use threesum_core::instances::generate;

use crate::Usage;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 32)]
    n_min: usize,
    #[arg(long, default_value_t = 256)]
    n_max: usize,
    #[arg(long, default_value_t = 32)]
    n_step: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 1.5)]
    mu: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 1 << 40)]
    universe: u64,
}

fn median(mut v: Vec<u128>) -> u128 {
    v.sort_unstable();
    v.get(v.len() / 2).copied().unwrap_or(0)
}

fn row(args: &BenchArgs, n: usize) -> anyhow::Result<String> {
    let params = HashParams::new(args.mu, args.delta, n.max(2) as u64)?;
    let off = SelectOptions { bound: DetectionBound::Off, ..SelectOptions::default() };
    let mut det = Vec::with_capacity(args.trials);
    let mut random = Vec::with_capacity(args.trials);
    for t in 0..args.trials as u64 {
        let seed = args.seed.wrapping_mul(1_000_003).wrapping_add((n as u64) << 20).wrapping_add(t);
        let inst = generate(n, args.universe, seed, 0)?;
        let one = std::slice::from_ref(&inst);
        det.push(select_modulus_few_false_positives_with(one, &params, &off)?.final_score);
        random.push(select_modulus_random_baseline(one, &params, seed)?.final_score);
    }
    let bound = default_bound(&params, 1, args.universe);
    Ok(format!("{n},{},{},{bound:.6e}\n", median(det), median(random)))
}

pub fn run(args: &BenchArgs) -> anyhow::Result<()> {
    if args.n_step == 0 || args.trials == 0 {
        return Err(Usage("--n-step and --trials must be positive".into()).into());
    }
    let ns: Vec<usize> = if args.n_min > args.n_max { vec![] } else { (args.n_min..=args.n_max).step_by(args.n_step).collect() };
    let rows: Vec<String> = ns.par_iter().map(|&n| row(args, n)).collect::<anyhow::Result<_>>()?;
    print!("n,S_det,S_random_median,bound_B\n{}", rows.concat());
    Ok(())
}
