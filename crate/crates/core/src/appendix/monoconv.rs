//! 3SUM to Mono Convolution.
//!
//! The input first goes through the All-Numbers reduction to pieces over a
//! universe of about `n²`. Inside each piece the three parts are pooled,
//! self-reduced with `g = ⌈n'^{1/3}⌉`, and every surviving subinstance is
//! shifted by the load balancer. Light elements land in the grid of Mono
//! Convolution instances: cell `(x, y, z)` puts, at position `v`, the index
//! of the `x`-th (`y`-th, `z`-th) subinstance covering `v`. Heavy elements
//! are paired by brute force.

use super::loadbalance::{load_balance, load_balance_slow};
use super::{MonoConvInstance, SENTINEL_X, SENTINEL_Y, SENTINEL_Z};
use crate::hashing::ModulusSelection;
use crate::instances::{SolutionTriple, ThreeSumInstance, TriThreeSumInstance};
use crate::selfreduce::{dominance_partition, materialize, Shift};
use crate::unireduce::{reduce_an3sum_quadratic, AnParams};
use crate::unireduce::ReductionStats;
use crate::util::ceil_pow;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonoConvParams {
    pub an: AnParams,
    /// `δ` of the load balancer.
    pub lb_delta: f64,
    /// Use the bucketed balancer.
    pub bucketed: bool,
}

impl Default for MonoConvParams {
    fn default() -> Self {
        Self { an: AnParams::proof_defaults(), lb_delta: 1.0 / 32.0, bucketed: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonoConvStats {
    /// Pieces handed over by the All-Numbers reduction.
    pub pieces: usize,
    pub subinstances: usize,
    pub max_load: u64,
    pub max_load_bound: u64,
    pub cells: usize,
    pub solver_calls: usize,
    /// Positions reported by the Mono Convolution solver.
    pub reports: usize,
    pub heavy_elements: usize,
    pub heavy_pairs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonoConvOutcome {
    pub decision: bool,
    pub witness: Option<SolutionTriple>,
    pub selection: ModulusSelection,
    pub reduction: ReductionStats,
    pub stats: MonoConvStats,
}

struct Sub {
    shift: Shift,
    p: Vec<u64>,
    q: Vec<u64>,
    r: Vec<u64>,
}

impl Sub {
    fn has_pair_for(&self, c: u64) -> bool {
        self.p.iter().take_while(|&&a| a < c).any(|&a| self.q.binary_search(&(c - a)).is_ok())
    }
}

fn solve_piece<F>(tri: &TriThreeSumInstance, params: &MonoConvParams, solver: &mut F, stats: &mut MonoConvStats) -> Result<Vec<bool>>
where
    F: FnMut(&MonoConvInstance) -> Result<Vec<bool>>,
{
    stats.pieces += 1;
    let mut flags = vec![false; tri.c().len()];
    if tri.has_empty_part() {
        return Ok(flags);
    }
    let mut pooled: Vec<u64> = tri.a().iter().chain(tri.b()).chain(tri.c()).copied().collect();
    pooled.sort_unstable();
    pooled.dedup();
    let g = ceil_pow(pooled.len() as u64, 1.0 / 3.0)?.clamp(1, pooled.len() as u64) as usize;
    let (plan, triples) = dominance_partition(&pooled, tri.universe(), g)?;

    let mut subs = Vec::new();
    let mut universe = 1;
    for s in materialize(&pooled, &plan, &triples)? {
        let p: Vec<u64> = s.tri.a().iter().copied().filter(|&v| tri.a().binary_search(&s.shift.lift_a(v)).is_ok()).collect();
        let q: Vec<u64> = s.tri.b().iter().copied().filter(|&v| tri.b().binary_search(&s.shift.lift_b(v)).is_ok()).collect();
        let r: Vec<u64> = s.tri.c().iter().copied().filter(|&v| tri.c().binary_search(&s.shift.lift_c(v)).is_ok()).collect();
        if !(p.is_empty() || q.is_empty() || r.is_empty()) {
            universe = universe.max(s.tri.universe());
            subs.push(Sub { shift: s.shift, p, q, r });
        }
    }
    stats.subinstances += subs.len();
    if subs.is_empty() {
        return Ok(flags);
    }
    let sets: Vec<Vec<u64>> = subs
        .iter()
        .map(|s| {
            let mut t: Vec<u64> = s.p.iter().chain(&s.q).chain(&s.r).copied().collect();
            t.sort_unstable();
            t.dedup();
            t
        })
        .collect();
    let lb = if params.bucketed {
        load_balance(&sets, universe, params.lb_delta)?
    } else {
        load_balance_slow(&sets, universe, params.lb_delta)?
    };

    let mark = |sub: &Sub, c: u64, flags: &mut [bool]| -> Result<()> {
        let v = sub.shift.lift_c(c);
        let pos = tri.c().binary_search(&v).map_err(|_| Error::Invariant(format!("lifted value {v} not in the piece")))?;
        flags[pos] = true;
        Ok(())
    };

    // Light elements.
    let len = 3 * universe as usize;
    let mut one: Vec<Vec<i64>> = vec![Vec::new(); len + 1];
    let mut two: Vec<Vec<i64>> = vec![Vec::new(); len + 1];
    for (r, (set, &s)) in lb.light.iter().zip(&lb.shifts).enumerate() {
        for &b in set {
            one[(b + s) as usize].push(r as i64);
            two[(b + 2 * s) as usize].push(r as i64);
        }
    }
    let l1 = one.iter().map(Vec::len).max().unwrap_or(0);
    let l2 = two.iter().map(Vec::len).max().unwrap_or(0);
    stats.max_load = stats.max_load.max(l1.max(l2) as u64);
    stats.max_load_bound = stats.max_load_bound.max(lb.load_bound);
    let layer = |lists: &[Vec<i64>], d: usize, sentinel: i64| -> Vec<i64> {
        lists[1..].iter().map(|l| l.get(d).copied().unwrap_or(sentinel)).collect()
    };
    for x in 0..l1 {
        let xs = layer(&one, x, SENTINEL_X);
        for y in 0..l1 {
            let ys = layer(&one, y, SENTINEL_Y);
            for z in 0..l2 {
                let zs = layer(&two, z, SENTINEL_Z);
                let m = MonoConvInstance::new(xs.clone(), ys.clone(), zs)?;
                stats.cells += 1;
                stats.solver_calls += 1;
                let reported = solver(&m)?;
                if reported.len() != len {
                    return Err(Error::Solver(format!("{} flags for a vector of length {len}", reported.len())));
                }
                for (k, _) in reported.iter().enumerate().filter(|(_, &f)| f) {
                    stats.reports += 1;
                    let r = m.z()[k];
                    if r < 0 {
                        return Err(Error::Solver(format!("position {} reported but Z holds a sentinel", k + 1)));
                    }
                    let sub = &subs[r as usize];
                    let c = (k as u64 + 1).checked_sub(2 * lb.shifts[r as usize]).filter(|&c| c > 0);
                    if let Some(c) = c {
                        if sub.r.binary_search(&c).is_ok() && sub.has_pair_for(c) {
                            mark(sub, c, &mut flags)?;
                        }
                    }
                }
            }
        }
    }

    // Heavy elements against everything in their subinstance.
    for ((sub, heavy), set) in subs.iter().zip(&lb.heavy).zip(&sets) {
        stats.heavy_elements += heavy.len();
        stats.heavy_pairs += heavy.len() * set.len();
        let (inp, inq, inr) = (
            |v: u64| sub.p.binary_search(&v).is_ok(),
            |v: u64| sub.q.binary_search(&v).is_ok(),
            |v: u64| sub.r.binary_search(&v).is_ok(),
        );
        for &u in heavy {
            for &v in set {
                let sum = u + v;
                if inr(sum) && ((inp(u) && inq(v)) || (inq(u) && inp(v))) {
                    mark(sub, sum, &mut flags)?;
                }
                if u > v && inr(u) && inp(v) && inq(u - v) {
                    mark(sub, u, &mut flags)?;
                }
            }
        }
    }
    Ok(flags)
}

/// Decides 3SUM with a Mono Convolution solver that returns, for each
/// 1-based `k`, whether some `i + j = k` has `X[i] = Y[j] = Z[k]`. Every
/// reported position is checked against its subinstance before it counts.
pub fn reduce_3sum_to_monoconv<F>(inst: &ThreeSumInstance, mut solver: F, params: &MonoConvParams) -> Result<MonoConvOutcome>
where
    F: FnMut(&MonoConvInstance) -> Result<Vec<bool>>,
{
    if !(params.lb_delta > 0.0 && params.lb_delta.is_finite()) {
        return Err(Error::Param(format!("load balancing delta = {} must be positive", params.lb_delta)));
    }
    let mut stats = MonoConvStats::default();
    let an = reduce_an3sum_quadratic(inst, |tri| solve_piece(tri, params, &mut solver, &mut stats), &params.an)?;
    let witness = an.flags.iter().zip(inst.elements()).filter(|(&f, _)| f).find_map(|(_, &c)| {
        inst.elements().iter().take_while(|&&a| a < c).find(|&&a| inst.contains(c - a)).and_then(|&a| SolutionTriple::genuine(a, c - a, c))
    });
    Ok(MonoConvOutcome {
        decision: an.flags.iter().any(|&f| f),
        witness,
        selection: an.selection,
        reduction: an.stats,
        stats,
    })
}
