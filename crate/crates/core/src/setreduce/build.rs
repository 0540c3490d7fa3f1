//! Family construction and recovery.

use std::collections::BTreeSet;

use super::{SetQuery, SetQueryInstance};
use crate::hashing::{
    select_modulus_few_false_positives_with, DetectionBound, HashParams, ModulusSelection, PoolPolicy, SelectOptions,
};
use crate::instances::{SolutionTriple, ThreeSumInstance};
use crate::selfreduce::{dominance_partition, PartitionPlan, TripleSet};
use crate::util::ceil_pow;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SetReduceParams {
    /// Group exponent: `g = ⌈n^α⌉`.
    pub alpha: f64,
    /// Modulus exponent shift of the intersection variant.
    pub beta: f64,
    /// `None` picks the default for the variant.
    pub delta: Option<f64>,
    /// Split threshold exponent of the disjointness driver: `t = ⌈n^ρ⌉`.
    pub rho: f64,
    pub pool: PoolPolicy,
    pub bound: DetectionBound,
}

impl Default for SetReduceParams {
    fn default() -> Self {
        Self { alpha: 0.5, beta: 0.0, delta: None, rho: 0.25, pool: PoolPolicy::Widen, bound: DetectionBound::Default }
    }
}

impl SetReduceParams {
    /// `min((1−α)/2, ρ/4)`.
    pub fn disjointness_delta(&self) -> f64 {
        self.delta.unwrap_or(((1.0 - self.alpha) / 2.0).min(self.rho / 4.0))
    }

    /// `min((1−α)/2, ε/7)` at `ε = ½`.
    pub fn intersection_delta(&self) -> f64 {
        self.delta.unwrap_or(((1.0 - self.alpha) / 2.0).min(0.5 / 7.0))
    }

    fn check_alpha(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return Err(Error::Param(format!("alpha = {} outside [0, 1)", self.alpha)));
        }
        Ok(())
    }
}

/// Construction parameters as built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Declared {
    /// `N = 2·g·(r+1)`.
    pub sets: usize,
    /// `U = m`.
    pub universe: u64,
    /// `s`: the largest group.
    pub size_bound: usize,
    /// `q = Σ_{(i,j,k) ∈ R} |A_i|`.
    pub queries: usize,
    pub groups: usize,
    pub radix: u64,
    pub modulus: u64,
    /// Size scale of the hashing call, the largest `|A_i ∪ A_j ∪ A_k|`.
    pub n_sub: u64,
    pub mu: f64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryOrigin {
    pub triple: (usize, usize, usize),
    pub a: u64,
    pub x: u64,
    pub y: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryContext {
    pub modulus: u64,
    pub radix: u64,
    pub plan: PartitionPlan,
    pub triples: TripleSet,
    pub elements: Vec<u64>,
    /// One entry per query, in query order.
    pub origins: Vec<QueryOrigin>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SetBuild {
    YesDetected { selection: ModulusSelection },
    Family { instance: SetQueryInstance, ctx: RecoveryContext, selection: ModulusSelection, declared: Declared },
}

/// `(x, y)` with `a ≡ x·r − y (mod m)`, `0 ≤ y < r` and `x ≤ ⌈m/r⌉`.
pub fn decompose(a: u64, m: u64, r: u64) -> (u64, u64) {
    let rho = a % m;
    let x = rho.div_ceil(r);
    (x, x * r - rho)
}

fn radix(m: u64) -> u64 {
    let r = m.isqrt();
    if r * r < m {
        r + 1
    } else {
        r
    }
}

fn build_family(inst: &ThreeSumInstance, alpha: f64, mu: f64, delta: f64, params: &SetReduceParams) -> Result<SetBuild> {
    let e = inst.elements();
    let n = e.len();
    let g = if n == 0 { 1 } else { (ceil_pow(n as u64, alpha)? as usize).clamp(1, n) };
    let (plan, triples) = dominance_partition(e, inst.universe(), g)?;
    let groups = &plan.groups;
    let part = |i: usize| &e[groups[i].lo..groups[i].hi];

    let unions = triples
        .triples
        .iter()
        .map(|&(i, j, k)| {
            let v: BTreeSet<u64> = part(i).iter().chain(part(j)).chain(part(k)).copied().collect();
            ThreeSumInstance::new(v.into_iter().collect(), inst.universe())
        })
        .collect::<Result<Vec<_>>>()?;
    let n_sub = unions.iter().map(|u| u.len() as u64).max().unwrap_or(0).max(2);
    let options = SelectOptions { pool: params.pool, bound: params.bound, base_modulus: 1 };
    let selection = select_modulus_few_false_positives_with(&unions, &HashParams::new(mu, delta, n_sub)?, &options)?;
    if selection.yes_detected() {
        return Ok(SetBuild::YesDetected { selection });
    }

    let m = selection.modulus;
    let r = radix(m);
    let stride = r as usize + 1;
    let ga = groups.len();
    let shifted = |xs: &[u64], add: u64| -> Vec<u64> {
        let set: BTreeSet<u64> = xs.iter().map(|&v| ((v as u128 + add as u128) % m as u128) as u64 + 1).collect();
        set.into_iter().collect()
    };
    let mut sets = Vec::with_capacity(2 * ga * stride);
    for i in 0..ga {
        for x in 0..=r {
            sets.push(shifted(part(i), x * r));
        }
    }
    for i in 0..ga {
        for y in 0..=r {
            sets.push(shifted(part(i), y));
        }
    }
    let mut queries = Vec::new();
    let mut origins = Vec::new();
    for &(i, j, k) in &triples.triples {
        for &a in part(i) {
            let (x, y) = decompose(a, m, r);
            queries.push(SetQuery {
                left: j * stride + x as usize,
                right: ga * stride + k * stride + y as usize,
                triple: (i, j, k),
                a,
            });
            origins.push(QueryOrigin { triple: (i, j, k), a, x, y });
        }
    }
    let size_bound = groups.iter().map(|g| g.size()).max().unwrap_or(0);
    let declared = Declared {
        sets: sets.len(),
        universe: m,
        size_bound,
        queries: queries.len(),
        groups: ga,
        radix: r,
        modulus: m,
        n_sub,
        mu,
        delta,
    };
    let instance = SetQueryInstance { universe: m, sets, queries, size_bound };
    instance.validate()?;
    let ctx = RecoveryContext { modulus: m, radix: r, plan, triples, elements: e.to_vec(), origins };
    Ok(SetBuild::Family { instance, ctx, selection, declared })
}

/// Modulus exponent `2 − 2δ` relative to the subinstance size.
pub fn build_setdisjointness(inst: &ThreeSumInstance, params: &SetReduceParams) -> Result<SetBuild> {
    params.check_alpha()?;
    let delta = params.disjointness_delta();
    build_family(inst, params.alpha, 2.0 - 2.0 * delta, delta, params)
}

/// Modulus exponent `(1−α+β)/(1−α) − 2δ` relative to the subinstance size.
pub fn build_setintersection(inst: &ThreeSumInstance, params: &SetReduceParams) -> Result<SetBuild> {
    params.check_alpha()?;
    if !(params.beta >= 0.0 && params.beta <= 1.0 - params.alpha + 1e-12) {
        return Err(Error::Param(format!("beta = {} outside [0, 1 − alpha]", params.beta)));
    }
    let delta = params.intersection_delta();
    let mu = (1.0 - params.alpha + params.beta) / (1.0 - params.alpha) - 2.0 * delta;
    build_family(inst, params.alpha, mu.max(0.0), delta, params)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryOutcome {
    pub decision: bool,
    pub witness: Option<SolutionTriple>,
    /// Reported elements over all queries.
    pub listed: usize,
    /// Distinct `(a, b, c)` recovered, sorted.
    pub pseudo_solutions: Vec<(u64, u64, u64)>,
}

/// Expands every reported element into all `(b, c)` behind it and tests
/// `a + b = c`.
pub fn recover_and_decide(ctx: &RecoveryContext, answers: &[Vec<u64>]) -> Result<RecoveryOutcome> {
    if answers.len() != ctx.origins.len() {
        return Err(Error::MalformedAnswer {
            query: answers.len().min(ctx.origins.len()),
            message: format!("{} answers for {} queries", answers.len(), ctx.origins.len()),
        });
    }
    let m = ctx.modulus as u128;
    let groups = &ctx.plan.groups;
    let part = |i: usize| &ctx.elements[groups[i].lo..groups[i].hi];
    let mut pseudo = BTreeSet::new();
    let mut listed = 0;
    for (q, (o, ans)) in ctx.origins.iter().zip(answers).enumerate() {
        let (_, j, k) = o.triple;
        for &e in ans {
            listed += 1;
            if e == 0 || e as u128 > m {
                return Err(Error::MalformedAnswer { query: q, message: format!("element {e} outside [1, {m}]") });
            }
            let res = (e - 1) as u128;
            let shift = (o.x * ctx.radix) as u128;
            let bs: Vec<u64> = part(j).iter().copied().filter(|&b| (b as u128 + shift) % m == res).collect();
            let cs: Vec<u64> = part(k).iter().copied().filter(|&c| (c as u128 + o.y as u128) % m == res).collect();
            if bs.is_empty() || cs.is_empty() {
                return Err(Error::MalformedAnswer { query: q, message: format!("element {e} has no preimage") });
            }
            for &b in &bs {
                for &c in &cs {
                    pseudo.insert((o.a, b, c));
                }
            }
        }
    }
    let witness = pseudo
        .iter()
        .find(|&&(a, b, c)| a + b == c)
        .and_then(|&(a, b, c)| SolutionTriple::genuine(a, b, c));
    Ok(RecoveryOutcome { decision: witness.is_some(), witness, listed, pseudo_solutions: pseudo.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate;
    use crate::oracle::{solve_3sum, solve_set_queries};

    fn family(b: SetBuild) -> (SetQueryInstance, RecoveryContext, ModulusSelection, Declared) {
        match b {
            SetBuild::Family { instance, ctx, selection, declared } => (instance, ctx, selection, declared),
            SetBuild::YesDetected { .. } => panic!("unexpected early yes"),
        }
    }

    fn answers(f: &SetQueryInstance) -> Vec<Vec<u64>> {
        solve_set_queries(f).unwrap().into_iter().map(|a| a.intersection).collect()
    }

    #[test]
    fn decomposition_identity() {
        for m in [1u64, 2, 7, 16, 17, 1000, 1021] {
            let r = radix(m);
            assert!(r * r >= m && (r - 1) * (r - 1) < m.max(1));
            for a in 0..3 * m {
                let (x, y) = decompose(a, m, r);
                assert!(y < r);
                assert!(x <= m.div_ceil(r));
                assert_eq!((x * r + m * 4 - y) % m, a % m);
            }
        }
    }

    #[test]
    fn declared_parameters() {
        let inst = generate(27, 5000, 11, 2).unwrap();
        let p = SetReduceParams { alpha: 1.0 / 3.0, bound: DetectionBound::Off, ..Default::default() };
        let (f, ctx, _, d) = family(build_setdisjointness(&inst, &p).unwrap());
        assert_eq!(d.groups, ctx.plan.groups.len());
        assert_eq!(f.sets.len(), 2 * d.groups * (d.radix as usize + 1));
        let q: usize = ctx.triples.triples.iter().map(|&(i, _, _)| ctx.plan.groups[i].size()).sum();
        assert_eq!(f.queries.len(), q);
        assert_eq!(f.universe, d.modulus);
        assert_eq!(f.size_bound, ctx.plan.groups.iter().map(|g| g.size()).max().unwrap());
        for (i, g) in ctx.plan.groups.iter().enumerate() {
            for x in 0..=d.radix as usize {
                assert!(f.sets[i * (d.radix as usize + 1) + x].len() <= g.size());
            }
        }
        let text = f.serialize();
        assert_eq!(SetQueryInstance::parse(&text).unwrap(), f);
    }

    #[test]
    fn correspondence_exhaustive() {
        for seed in 0..10 {
            let inst = generate(48, 3000, seed, (seed % 3) as usize).unwrap();
            let p = SetReduceParams { bound: DetectionBound::Off, ..Default::default() };
            let (f, ctx, _, _) = family(build_setdisjointness(&inst, &p).unwrap());
            let out = recover_and_decide(&ctx, &answers(&f)).unwrap();
            assert_eq!(out.decision, solve_3sum(&inst).is_some());
            let m = ctx.modulus;
            let part = |i: usize| &ctx.elements[ctx.plan.groups[i].lo..ctx.plan.groups[i].hi];
            let mut expected = BTreeSet::new();
            for &(i, j, k) in &ctx.triples.triples {
                for &a in part(i) {
                    for &b in part(j) {
                        for &c in part(k) {
                            if (a + b) % m == c % m {
                                expected.insert((a, b, c));
                            }
                        }
                    }
                }
            }
            let got: BTreeSet<(u64, u64, u64)> = out.pseudo_solutions.iter().copied().collect();
            assert_eq!(got, expected);
            let genuine = expected.iter().filter(|t| t.0 + t.1 == t.2).count();
            assert_eq!(genuine > 0, out.decision);
        }
    }

    #[test]
    fn malformed_answers() {
        let inst = generate(30, 4000, 5, 1).unwrap();
        let p = SetReduceParams { bound: DetectionBound::Off, ..Default::default() };
        let (f, ctx, _, _) = family(build_setdisjointness(&inst, &p).unwrap());
        let mut a = answers(&f);
        assert!(recover_and_decide(&ctx, &a[1..]).is_err());
        let empty = vec![Vec::new(); a.len()];
        let out = recover_and_decide(&ctx, &empty).unwrap();
        assert!(!out.decision);
        // An element absent from the right-hand set cannot be explained.
        let right = &f.sets[f.queries[0].right];
        let bogus = (1..=f.universe).find(|e| right.binary_search(e).is_err()).unwrap();
        a[0].push(bogus);
        assert!(matches!(recover_and_decide(&ctx, &a), Err(Error::MalformedAnswer { query: 0, .. })));
    }

    #[test]
    fn alpha_zero_and_empty() {
        let inst = generate(20, 600, 8, 0).unwrap();
        let p = SetReduceParams { alpha: 0.0, bound: DetectionBound::Off, ..Default::default() };
        let (f, ctx, _, d) = family(build_setdisjointness(&inst, &p).unwrap());
        assert_eq!(d.groups, 1);
        let out = recover_and_decide(&ctx, &answers(&f)).unwrap();
        assert_eq!(out.decision, solve_3sum(&inst).is_some());

        let empty = ThreeSumInstance::new(vec![], 10).unwrap();
        let (f, ctx, _, _) = family(build_setdisjointness(&empty, &p).unwrap());
        assert!(f.sets.is_empty() && f.queries.is_empty());
        assert!(!recover_and_decide(&ctx, &[]).unwrap().decision);

        assert!(build_setdisjointness(&inst, &SetReduceParams { alpha: 1.0, ..p }).is_err());
        assert!(build_setintersection(&inst, &SetReduceParams { beta: 1.5, ..p }).is_err());
    }
}
