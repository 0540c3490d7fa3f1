//! Deterministic additive hashing `x ↦ x mod m`.
//!
//! The modulus is built greedily: starting from `m = 1`, each round scores
//! `m·p` for every candidate prime `p` and keeps the best one, until `m`
//! reaches `⌈½·n^(μ−δ)⌉`. A final padding factor moves `m` into
//! `[⌈n^μ⌉, 2⌈n^μ⌉)`. The minimizer is never worse than the candidate mean,
//! which is what each round records.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::instances::Weighted;
use crate::modcount::{count_collisions_weighted, count_solutions_weighted, primes_in_range, Kernel};
use crate::util::{ceil_pow, ceil_snap, checked_mul, lcm};
use crate::{Error, Result};

const SIEVE_TOP: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HashParams {
    pub mu: f64,
    pub delta: f64,
    /// Size scale at which `n^μ` and `n^δ` are evaluated.
    pub n: u64,
}

/// Integer thresholds derived from [`HashParams`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// `⌈n^μ⌉`; the modulus ends in `[target, 2·target)`.
    pub target: u64,
    /// `⌈½·n^(μ−δ)⌉`; rounds continue while `m` is below it.
    pub stop: u64,
    /// `⌈n^δ⌉`; candidates are first drawn from `[max(2, floor), 2·floor)`.
    pub prime_floor: u64,
}

impl HashParams {
    pub fn new(mu: f64, delta: f64, n: u64) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::Param(format!("mu = {mu} must be a finite non-negative number")));
        }
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::Param(format!("delta = {delta} must be positive")));
        }
        if n < 2 {
            return Err(Error::Param(format!("size scale n = {n} must be at least 2")));
        }
        Ok(Self { mu, delta, n })
    }

    pub fn thresholds(&self) -> Result<Thresholds> {
        let n = self.n as f64;
        Ok(Thresholds {
            target: ceil_pow(self.n, self.mu)?,
            stop: ceil_snap(0.5 * n.powf(self.mu - self.delta))?,
            prime_floor: ceil_pow(self.n, self.delta)?,
        })
    }
}

/// What to do when every candidate prime has been used before `m` reaches
/// the stopping threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolPolicy {
    /// Refill from the next dyadic range `[2H, 4H)`.
    Widen,
    /// Abort with [`Error::PoolExhausted`].
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DetectionBound {
    /// `g·n^(3−μ+δ)·(2·log₂U)^⌈μ/δ⌉`.
    Default,
    Fixed(f64),
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectOptions {
    pub pool: PoolPolicy,
    pub bound: DetectionBound,
    /// Scores refer to `lcm(base_modulus, m)`; used when a second modulus is
    /// chosen on top of a first one. Primes dividing it are not candidates.
    pub base_modulus: u64,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self { pool: PoolPolicy::Widen, bound: DetectionBound::Default, base_modulus: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    /// 1-based.
    pub index: usize,
    /// Dyadic range the candidates were drawn from.
    pub pool_low: u64,
    pub pool_high: u64,
    /// Number of candidates scored.
    pub pool_size: usize,
    pub chosen: u64,
    pub score_before: u128,
    pub score_after: u128,
    /// Sum of all candidate scores; the mean is `score_sum / pool_size`.
    pub score_sum: u128,
    pub modulus_after: u64,
    /// The pool was refilled from a fresh range before this round.
    pub widened: bool,
}

impl Round {
    pub fn mean_score(&self) -> f64 {
        self.score_sum as f64 / self.pool_size as f64
    }

    /// `score_after ≤ mean`, compared exactly.
    pub fn dominates_mean(&self) -> bool {
        self.score_after * self.pool_size as u128 <= self.score_sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// `m` reached `⌈½·n^(μ−δ)⌉`.
    Threshold,
    /// Every remaining candidate would push `m` past `2·⌈n^μ⌉`.
    NoEligiblePrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Modulus,
    YesInstanceDetected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModulusSelection {
    pub modulus: u64,
    pub thresholds: Thresholds,
    pub base_modulus: u64,
    pub rounds: Vec<Round>,
    /// Every dyadic range candidates were drawn from, in order.
    pub ranges: Vec<(u64, u64)>,
    pub stop: StopReason,
    /// `m` before the padding factor `⌈n^μ/m⌉`.
    pub unpadded: u64,
    pub initial_score: u128,
    pub final_score: u128,
    pub bound: Option<f64>,
    pub verdict: Verdict,
}

impl ModulusSelection {
    /// The modulus `final_score` refers to.
    pub fn scored_modulus(&self) -> u64 {
        lcm(self.base_modulus, self.modulus).unwrap_or(u64::MAX)
    }

    pub fn yes_detected(&self) -> bool {
        self.verdict == Verdict::YesInstanceDetected
    }

    /// One line per round: `round p_chosen S_before S_after mean_S |P|`.
    pub fn export_trace(&self) -> String {
        self.rounds
            .iter()
            .map(|r| {
                format!(
                    "{} {} {} {} {:.6} {}\n",
                    r.index,
                    r.chosen,
                    r.score_before,
                    r.score_after,
                    r.mean_score(),
                    r.pool_size
                )
            })
            .collect()
    }
}

fn candidate_primes(lo: u64, hi: u64, base: u64) -> Result<Vec<u64>> {
    if lo >= hi {
        return Ok(Vec::new());
    }
    Ok(primes_in_range(lo, hi)?
        .primes
        .into_iter()
        .filter(|p| base % p != 0)
        .collect())
}

/// The selection loop. `pick` chooses an index given the candidates and their
/// scores; `score` evaluates a (combined) modulus.
fn run<S, P>(params: &HashParams, options: &SelectOptions, score: S, mut pick: P) -> Result<ModulusSelection>
where
    S: Fn(u64) -> u128 + Sync,
    P: FnMut(&[u64], &[u128]) -> usize,
{
    let th = params.thresholds()?;
    let base = options.base_modulus.max(1);
    let limit = checked_mul(th.target, 2)?;

    let (mut lo, mut hi) = (th.prime_floor.max(2), checked_mul(th.prime_floor, 2)?);
    let mut pool = loop {
        if hi > SIEVE_TOP {
            return Err(Error::NoPrimes(format!("no usable primes below 2^32 from {}", th.prime_floor)));
        }
        let p = candidate_primes(lo, hi, base)?;
        if !p.is_empty() {
            break p;
        }
        (lo, hi) = (hi, 2 * hi);
    };
    let mut ranges = vec![(lo, hi)];

    let mut m = 1u64;
    let mut current = score(base);
    let initial_score = current;
    let mut rounds = Vec::new();
    let mut stop = StopReason::Threshold;
    let mut widened = false;
    while m < th.stop {
        if pool.is_empty() {
            if options.pool == PoolPolicy::Strict {
                return Err(Error::PoolExhausted { rounds: rounds.len(), modulus: m, stop: th.stop });
            }
            (lo, hi) = (hi, (2 * hi).min(SIEVE_TOP));
            if lo >= hi || lo as u128 * m as u128 >= limit as u128 {
                stop = StopReason::NoEligiblePrime;
                break;
            }
            pool = candidate_primes(lo, hi, base)?;
            ranges.push((lo, hi));
            widened = true;
            continue;
        }
        let eligible: Vec<u64> = pool
            .iter()
            .copied()
            .filter(|&p| (m as u128) * (p as u128) < limit as u128)
            .collect();
        if eligible.is_empty() {
            stop = StopReason::NoEligiblePrime;
            break;
        }
        let moduli = eligible
            .iter()
            .map(|&p| lcm(base, m * p))
            .collect::<Result<Vec<u64>>>()?;
        let scores: Vec<u128> = moduli.par_iter().map(|&q| score(q)).collect();
        let idx = pick(&eligible, &scores);
        let chosen = eligible[idx];
        m *= chosen;
        rounds.push(Round {
            index: rounds.len() + 1,
            pool_low: lo,
            pool_high: hi,
            pool_size: eligible.len(),
            chosen,
            score_before: current,
            score_after: scores[idx],
            score_sum: scores.iter().sum(),
            modulus_after: m,
            widened,
        });
        widened = false;
        current = scores[idx];
        pool.retain(|&q| q != chosen);
    }

    let unpadded = m;
    let modulus = checked_mul(m, th.target.div_ceil(m))?;
    let final_score = if modulus == m { current } else { score(lcm(base, modulus)?) };
    Ok(ModulusSelection {
        modulus,
        thresholds: th,
        base_modulus: base,
        rounds,
        ranges,
        stop,
        unpadded,
        initial_score,
        final_score,
        bound: None,
        verdict: Verdict::Modulus,
    })
}

/// First index of the minimum score; candidates are ascending, so ties go to
/// the smallest prime.
fn argmin(_: &[u64], scores: &[u128]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s < scores[best] {
            best = i;
        }
    }
    best
}

pub fn select_modulus_few_collisions<W: Weighted + ?Sized>(inst: &W, params: &HashParams) -> Result<ModulusSelection> {
    select_modulus_few_collisions_with(inst, params, &SelectOptions::default())
}

/// Requires `μ ≤ 2`. There is no yes-detection in this variant.
pub fn select_modulus_few_collisions_with<W: Weighted + ?Sized>(
    inst: &W,
    params: &HashParams,
    options: &SelectOptions,
) -> Result<ModulusSelection> {
    if params.mu > 2.0 {
        return Err(Error::Param(format!("collision hashing needs mu ≤ 2, got {}", params.mu)));
    }
    let list = inst.weighted();
    run(params, options, |q| count_collisions_weighted(&list, q), argmin)
}

pub fn select_modulus_few_false_positives<W: Weighted>(
    instances: &[W],
    params: &HashParams,
) -> Result<ModulusSelection> {
    select_modulus_few_false_positives_with(instances, params, &SelectOptions::default())
}

/// The default detection bound for `g` instances over universe `u`.
pub fn default_bound(params: &HashParams, g: usize, universe: u64) -> f64 {
    let n = params.n as f64;
    let log_u = (universe.max(2) as f64).log2();
    let rounds = (params.mu / params.delta).ceil();
    g as f64 * n.powf(3.0 - params.mu + params.delta) * (2.0 * log_u).powf(rounds)
}

/// Requires `μ < 3`. Scores are `Σ_i S_i(m)` over all instances.
pub fn select_modulus_few_false_positives_with<W: Weighted>(
    instances: &[W],
    params: &HashParams,
    options: &SelectOptions,
) -> Result<ModulusSelection> {
    if params.mu >= 3.0 {
        return Err(Error::Param(format!("false-positive hashing needs mu < 3, got {}", params.mu)));
    }
    let lists: Vec<Vec<(u64, u64)>> = instances.iter().map(|i| i.weighted()).collect();
    let score = |q: u64| -> u128 {
        lists.iter().map(|l| count_solutions_weighted(l, q, Kernel::Auto)).sum()
    };
    let mut sel = run(params, options, score, argmin)?;
    let universe = instances.iter().map(|i| i.universe_bound()).max().unwrap_or(1);
    sel.bound = match options.bound {
        DetectionBound::Default => Some(default_bound(params, instances.len(), universe)),
        DetectionBound::Fixed(b) => Some(b),
        DetectionBound::Off => None,
    };
    if sel.bound.is_some_and(|b| sel.final_score as f64 > b) {
        sel.verdict = Verdict::YesInstanceDetected;
    }
    Ok(sel)
}

/// Same loop with a uniformly random candidate each round (ChaCha8 keyed by
/// `seed`). A comparison baseline for benchmarks, not a production path.
pub fn select_modulus_random_baseline<W: Weighted>(
    instances: &[W],
    params: &HashParams,
    seed: u64,
) -> Result<ModulusSelection> {
    let lists: Vec<Vec<(u64, u64)>> = instances.iter().map(|i| i.weighted()).collect();
    let score = |q: u64| -> u128 {
        lists.iter().map(|l| count_solutions_weighted(l, q, Kernel::Auto)).sum()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let options = SelectOptions { bound: DetectionBound::Off, ..SelectOptions::default() };
    run(params, &options, score, |c, _| (rng.next_u64() % c.len() as u64) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ThreeSumInstance;
    use crate::oracle::count_pseudo_bruteforce;

    fn set(v: Vec<u64>, u: u64) -> ThreeSumInstance {
        ThreeSumInstance::new(v, u).unwrap()
    }

    fn collisions_by_pairs(x: &ThreeSumInstance, m: u64) -> u128 {
        let e = x.elements();
        e.iter().flat_map(|a| e.iter().map(move |b| (a, b))).filter(|(a, b)| *a % m == *b % m).count()
            as u128
    }

    fn lcg_instance(seed: u64, n: usize, u: u64) -> ThreeSumInstance {
        let mut s = seed;
        let mut v = std::collections::BTreeSet::new();
        while v.len() < n {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            v.insert(1 + (s >> 20) % u);
        }
        set(v.into_iter().collect(), u)
    }

    #[test]
    fn threshold_arithmetic() {
        let p = HashParams::new(1.0, 0.5, 32).unwrap();
        let t = p.thresholds().unwrap();
        assert_eq!(t, Thresholds { target: 32, stop: 3, prime_floor: 6 });
        assert!(HashParams::new(1.0, 0.0, 32).is_err());
        assert!(HashParams::new(-1.0, 0.5, 32).is_err());
        assert!(HashParams::new(1.0, 0.5, 1).is_err());
    }

    #[test]
    fn mu_zero_gives_one() {
        let x = set((1..=10).collect(), 10);
        let sel = select_modulus_few_collisions(&x, &HashParams::new(0.0, 0.5, 10).unwrap()).unwrap();
        assert_eq!(sel.modulus, 1);
        assert!(sel.rounds.is_empty());
        assert_eq!(sel.final_score, 100);
    }

    #[test]
    fn collisions_small_values() {
        let x = set((1..=32).collect(), 32);
        let p = HashParams::new(1.0, 0.5, 32).unwrap();
        let sel = select_modulus_few_collisions(&x, &p).unwrap();
        assert!((32..64).contains(&sel.modulus), "{}", sel.modulus);
        let mut m = 1;
        for r in &sel.rounds {
            let candidates: Vec<u64> = primes_in_range(r.pool_low, r.pool_high)
                .unwrap()
                .primes
                .into_iter()
                .filter(|q| m % q != 0)
                .collect();
            let scores: Vec<u128> = candidates.iter().map(|&q| collisions_by_pairs(&x, m * q)).collect();
            let best = *scores.iter().min().unwrap();
            assert_eq!(r.score_after, best);
            assert_eq!(r.chosen, candidates[scores.iter().position(|&s| s == best).unwrap()]);
            assert_eq!(r.score_sum, scores.iter().sum::<u128>());
            assert!(r.dominates_mean());
            m *= r.chosen;
        }
        assert_eq!(sel.final_score, collisions_by_pairs(&x, sel.modulus));
    }

    #[test]
    fn collisions_forced_everywhere() {
        // Common difference divisible by every prime below 64 that could be a
        // candidate: all elements collide under any selected modulus.
        let step: u64 = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().product();
        let x = set((1..=16).map(|i| i * step).collect(), 17 * step);
        let p = HashParams::new(1.0, 0.5, 16).unwrap();
        let sel = select_modulus_few_collisions(&x, &p).unwrap();
        assert!((16..32).contains(&sel.modulus), "{}", sel.modulus);
        if sel.modulus == sel.unpadded {
            assert_eq!(sel.final_score, 256);
        }
        assert!(sel.rounds.iter().all(|r| r.score_after == 256));
    }

    #[test]
    fn empty_instances_score_zero() {
        let e = vec![set(vec![], 10), set(vec![], 10)];
        let p = HashParams::new(1.5, 0.5, 64).unwrap();
        let sel = select_modulus_few_false_positives(&e, &p).unwrap();
        let t = sel.thresholds.target;
        assert!((t..2 * t).contains(&sel.modulus));
        assert!(sel.rounds.iter().all(|r| r.score_after == 0 && r.score_sum == 0));
        // Ties everywhere: smallest primes are taken in order.
        let first = primes_in_range(sel.ranges[0].0, sel.ranges[0].1).unwrap().primes;
        assert_eq!(sel.rounds[0].chosen, first[0]);
        assert_eq!(sel.verdict, Verdict::Modulus);
    }

    #[test]
    fn genuine_solutions_keep_score_positive() {
        let x = set(vec![1, 2, 3], 3);
        for m in 1..200 {
            assert!(count_pseudo_bruteforce(&x, m) >= 3);
        }
        let sel = select_modulus_few_false_positives(&[x], &HashParams::new(1.0, 0.5, 8).unwrap()).unwrap();
        assert!(sel.final_score >= 3);
    }

    #[test]
    fn dominance_on_random_no_instances() {
        let mut checked = 0;
        for seed in 0..40u64 {
            let x = lcg_instance(seed, 64, 1 << 30);
            if crate::oracle::solve_3sum(&x).is_some() {
                continue;
            }
            checked += 1;
            let p = HashParams::new(1.5, 0.5, 64).unwrap();
            let sel = select_modulus_few_false_positives(std::slice::from_ref(&x), &p).unwrap();
            let mut prev = sel.initial_score;
            for r in &sel.rounds {
                assert!(r.dominates_mean());
                assert_eq!(r.score_before, prev);
                assert!(r.score_after <= r.score_before);
                assert_eq!(r.score_after, count_pseudo_bruteforce(&x, r.modulus_after));
                prev = r.score_after;
            }
            assert!(sel.final_score <= prev);
            assert_eq!(sel.final_score, count_pseudo_bruteforce(&x, sel.modulus));
            assert_eq!(sel.verdict, Verdict::Modulus);
            let t = sel.thresholds.target;
            assert!((t..2 * t).contains(&sel.modulus));
            if checked == 10 {
                break;
            }
        }
        assert_eq!(checked, 10);
    }

    #[test]
    fn strict_pool_exhaustion() {
        let x = set((1..=32).map(|i| 3 * i).collect(), 200);
        let p = HashParams::new(1.5, 0.25, 32).unwrap();
        let strict = SelectOptions { pool: PoolPolicy::Strict, ..SelectOptions::default() };
        assert!(matches!(
            select_modulus_few_false_positives_with(std::slice::from_ref(&x), &p, &strict),
            Err(Error::PoolExhausted { rounds: 2, .. })
        ));
        let sel = select_modulus_few_false_positives(&[x], &p).unwrap();
        assert!(sel.ranges.len() > 1);
        assert!(sel.rounds.iter().any(|r| r.widened));
        assert!((182..364).contains(&sel.modulus), "{}", sel.modulus);
    }

    #[test]
    fn fixed_bound_detection() {
        let x = set((1..=20).collect(), 20);
        let p = HashParams::new(1.0, 0.5, 20).unwrap();
        let opts = SelectOptions { bound: DetectionBound::Fixed(10.0), ..SelectOptions::default() };
        let sel = select_modulus_few_false_positives_with(std::slice::from_ref(&x), &p, &opts).unwrap();
        assert!(sel.yes_detected());
        assert!(crate::oracle::solve_3sum(&x).is_some());
        let sel = select_modulus_few_false_positives(&[x], &p).unwrap();
        assert!(!sel.yes_detected());
    }

    #[test]
    fn base_modulus_combines() {
        let x = lcg_instance(3, 40, 1 << 20);
        let p = HashParams::new(0.6, 0.2, 40).unwrap();
        let opts = SelectOptions { base_modulus: 6, ..SelectOptions::default() };
        let sel = select_modulus_few_false_positives_with(std::slice::from_ref(&x), &p, &opts).unwrap();
        assert!(sel.rounds.iter().all(|r| r.chosen != 2 && r.chosen != 3));
        assert_eq!(sel.final_score, count_pseudo_bruteforce(&x, sel.scored_modulus()));
    }

    #[test]
    fn trace_export_and_threads() {
        let x = lcg_instance(9, 50, 1 << 25);
        let p = HashParams::new(1.5, 0.25, 50).unwrap();
        let run_with = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| select_modulus_few_false_positives(std::slice::from_ref(&x), &p).unwrap())
        };
        let a = run_with(1);
        let b = run_with(4);
        assert_eq!(a, b);
        let text = a.export_trace();
        assert_eq!(text.lines().count(), a.rounds.len());
        let first: Vec<&str> = text.lines().next().unwrap().split(' ').collect();
        assert_eq!(first.len(), 6);
        assert_eq!(first[1], a.rounds[0].chosen.to_string());
    }

    #[test]
    fn random_baseline_runs() {
        let x = lcg_instance(5, 64, 1 << 30);
        let p = HashParams::new(1.5, 0.5, 64).unwrap();
        let a = select_modulus_random_baseline(std::slice::from_ref(&x), &p, 1).unwrap();
        let b = select_modulus_random_baseline(std::slice::from_ref(&x), &p, 1).unwrap();
        assert_eq!(a, b);
        let t = a.thresholds.target;
        assert!((t..2 * t).contains(&a.modulus));
    }
}
