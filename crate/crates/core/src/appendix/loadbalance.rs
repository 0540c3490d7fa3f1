//! Shifts `s_1, …, s_N ∈ [0, U)` that spread sets `A_i ⊆ [1, U]` so that
//! few shifted copies overlap.
//!
//! Stage `i` picks `s_i` minimizing
//! `M_i(s) = Σ_{j<i} |(A_j + s_j) ∩ (A_i + s)| + |(A_j + 2s_j) ∩ (A_i + 2s)|`,
//! evaluated for every `s` at once by convolving the running coverage with
//! the reversed indicator of `A_i`. An element `b ∈ A_i` is light when both
//! the cover of `b + s_i` by the `A_j + s_j` and the cover of `b + 2s_i` by
//! the `A_j + 2s_j` are at most the threshold.

use crate::modcount::convolve_exact;
use crate::util::ceil_pow;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stage {
    pub chosen: u64,
    pub objective: u64,
    /// `Σ_s M_i(s)` over all `U` shifts.
    pub objective_sum: u128,
    pub shifts: u64,
}

impl Stage {
    /// `M_i(chosen) ≤ mean`, compared exactly.
    pub fn dominates_mean(&self) -> bool {
        self.objective as u128 * self.shifts as u128 <= self.objective_sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadBalanceResult {
    pub universe: u64,
    pub shifts: Vec<u64>,
    /// `A_i'`.
    pub light: Vec<Vec<u64>>,
    /// `A_i''`.
    pub heavy: Vec<Vec<u64>>,
    /// Stages of the greedy pass; over buckets for the bucketed variant.
    pub stages: Vec<Stage>,
    /// Lightness threshold of the greedy pass.
    pub threshold: u64,
    /// Guaranteed bound on both loads.
    pub load_bound: u64,
    /// Sets per bucket; 1 for the slow variant.
    pub bucket_size: usize,
}

impl LoadBalanceResult {
    /// `(|{i : v ∈ A_i' + s_i}|, |{i : v ∈ A_i' + 2s_i}|)` for `v ∈ [0, 3U]`,
    /// by direct scan.
    pub fn loads(&self) -> (Vec<u64>, Vec<u64>) {
        let len = 3 * self.universe as usize + 1;
        let (mut one, mut two) = (vec![0u64; len], vec![0u64; len]);
        for (set, &s) in self.light.iter().zip(&self.shifts) {
            for &b in set {
                one[(b + s) as usize] += 1;
                two[(b + 2 * s) as usize] += 1;
            }
        }
        (one, two)
    }

    pub fn max_loads(&self) -> (u64, u64) {
        let (one, two) = self.loads();
        (one.into_iter().max().unwrap_or(0), two.into_iter().max().unwrap_or(0))
    }

    pub fn heavy_total(&self) -> usize {
        self.heavy.iter().map(Vec::len).sum()
    }
}

/// `N^(2−δ)·S²/U`, the scale `Σ|A_i''|` is compared against.
pub fn soft_heavy_bound(n: usize, s: usize, universe: u64, delta: f64) -> f64 {
    (n as f64).powf(2.0 - delta) * (s as f64).powi(2) / universe as f64
}

fn check_sets(sets: &[Vec<u64>], universe: u64) -> Result<()> {
    if universe == 0 || universe > 1 << 24 {
        return Err(Error::Param(format!("load balancing universe {universe} outside [1, 2^24]")));
    }
    for (i, s) in sets.iter().enumerate() {
        if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&v| v == 0 || v > universe) {
            return Err(Error::Instance(format!("set {i} is not a sorted subset of [1, {universe}]")));
        }
    }
    Ok(())
}

/// Sets up to this size are correlated term by term instead of by
/// transform.
const SPARSE_SET: usize = 48;

struct Greedy {
    shifts: Vec<u64>,
    stages: Vec<Stage>,
    one: Vec<u64>,
    two: Vec<u64>,
}

fn greedy(sets: &[Vec<u64>], universe: u64) -> Greedy {
    let u = universe as usize;
    let mut one = vec![0u64; 2 * u + 1];
    let mut two = vec![0u64; 3 * u + 1];
    let mut shifts = Vec::with_capacity(sets.len());
    let mut stages = Vec::with_capacity(sets.len());
    for set in sets {
        let objective: Vec<u64> = if set.len() <= SPARSE_SET {
            let mut m = vec![0u64; u];
            for &a in set {
                let a = a as usize;
                for (s, v) in m.iter_mut().enumerate() {
                    *v += one[a + s] + two[a + 2 * s];
                }
            }
            m
        } else {
            let mut rev = vec![0u64; u + 1];
            for &a in set {
                rev[u - a as usize] = 1;
            }
            let c1 = convolve_exact(&one, &rev);
            let c2 = convolve_exact(&two, &rev);
            (0..u).map(|s| (c1[s + u] + c2[2 * s + u]) as u64).collect()
        };
        let mut best = (u64::MAX, 0u64);
        let mut sum = 0u128;
        for (s, &m) in objective.iter().enumerate() {
            sum += m as u128;
            if m < best.0 {
                best = (m, s as u64);
            }
        }
        let (objective, chosen) = best;
        for &a in set {
            one[(a + chosen) as usize] += 1;
            two[(a + 2 * chosen) as usize] += 1;
        }
        shifts.push(chosen);
        stages.push(Stage { chosen, objective, objective_sum: sum, shifts: universe });
    }
    Greedy { shifts, stages, one, two }
}

fn split_light(sets: &[Vec<u64>], g: &Greedy, tau: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let mut light = Vec::with_capacity(sets.len());
    let mut heavy = Vec::with_capacity(sets.len());
    for (set, &s) in sets.iter().zip(&g.shifts) {
        let (l, h): (Vec<u64>, Vec<u64>) = set
            .iter()
            .partition(|&&b| g.one[(b + s) as usize] <= tau && g.two[(b + 2 * s) as usize] <= tau);
        light.push(l);
        heavy.push(h);
    }
    (light, heavy)
}

/// One stage per set; threshold and load bound `⌈N^δ⌉`.
pub fn load_balance_slow(sets: &[Vec<u64>], universe: u64, delta: f64) -> Result<LoadBalanceResult> {
    check_sets(sets, universe)?;
    let tau = ceil_pow(sets.len().max(1) as u64, delta)?;
    let g = greedy(sets, universe);
    let (light, heavy) = split_light(sets, &g, tau);
    Ok(LoadBalanceResult {
        universe,
        shifts: g.shifts,
        light,
        heavy,
        stages: g.stages,
        threshold: tau,
        load_bound: tau,
        bucket_size: 1,
    })
}

/// Buckets of `k = ⌈N^δ⌉` consecutive sets are unioned and balanced as
/// single sets; every member inherits its bucket's shift. The bucket
/// threshold is `min(⌈N̄^{4δ}⌉, ⌊L/k⌋)` with `L = ⌈N^{5δ}⌉`, so each load is
/// at most `k` times the bucket load, hence at most `L`.
pub fn load_balance(sets: &[Vec<u64>], universe: u64, delta: f64) -> Result<LoadBalanceResult> {
    check_sets(sets, universe)?;
    let n = sets.len().max(1) as u64;
    let k = ceil_pow(n, delta)?.max(1) as usize;
    let bound = ceil_pow(n, 5.0 * delta)?;
    let buckets: Vec<Vec<u64>> = sets
        .chunks(k)
        .map(|c| {
            let mut u: Vec<u64> = c.iter().flatten().copied().collect();
            u.sort_unstable();
            u.dedup();
            u
        })
        .collect();
    let nb = buckets.len().max(1) as u64;
    let tau = ceil_pow(nb, 4.0 * delta)?.min(bound / k as u64).max(1);
    let g = greedy(&buckets, universe);
    let (blight, _) = split_light(&buckets, &g, tau);
    let mut shifts = Vec::with_capacity(sets.len());
    let mut light = Vec::with_capacity(sets.len());
    let mut heavy = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let b = i / k;
        shifts.push(g.shifts[b]);
        let (l, h): (Vec<u64>, Vec<u64>) = set.iter().partition(|v| blight[b].binary_search(v).is_ok());
        light.push(l);
        heavy.push(h);
    }
    Ok(LoadBalanceResult {
        universe,
        shifts,
        light,
        heavy,
        stages: g.stages,
        threshold: tau,
        load_bound: (k as u64 * tau).min(bound),
        bucket_size: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The stage objective by the definition, for one shift.
    fn objective(placed: &[(Vec<u64>, u64)], set: &[u64], s: u64) -> u64 {
        let mut total = 0;
        for (p, sj) in placed {
            for &a in set {
                total += (a + s >= *sj && p.binary_search(&(a + s - sj)).is_ok()) as u64;
                total += (a + 2 * s >= 2 * sj && p.binary_search(&(a + 2 * s - 2 * sj)).is_ok()) as u64;
            }
        }
        total
    }

    fn lcg_sets(seed: u64, n: usize, size: usize, u: u64) -> Vec<Vec<u64>> {
        let mut x = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        (0..n)
            .map(|_| {
                let mut s = std::collections::BTreeSet::new();
                while s.len() < size {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    s.insert(1 + (x >> 33) % u);
                }
                s.into_iter().collect()
            })
            .collect()
    }

    #[test]
    fn single_set() {
        let r = load_balance_slow(&[vec![1, 5, 9]], 10, 0.5).unwrap();
        assert_eq!(r.shifts, vec![0]);
        assert!(r.heavy[0].is_empty());
        assert_eq!(r.stages[0].objective, 0);
    }

    #[test]
    fn identical_sets_are_separated() {
        let sets = vec![vec![1, 2], vec![1, 2]];
        let r = load_balance_slow(&sets, 8, 0.5).unwrap();
        let best = (0..8).map(|s| objective(&[(sets[0].clone(), 0)], &sets[1], s)).min().unwrap();
        assert_eq!(best, 0);
        assert_eq!(r.stages[1].objective, 0);
        assert_eq!(r.shifts[1], (0..8).find(|&s| objective(&[(sets[0].clone(), 0)], &sets[1], s) == 0).unwrap());
    }

    #[test]
    fn stage_tables_and_dominance() {
        for seed in 0..6 {
            let u = [64u64, 200, 512][seed as usize % 3];
            // Sizes on both sides of the sparse/transform switch.
            let size = if seed < 3 { 6 } else { 60 };
            let sets = lcg_sets(seed, 16, size, u.max(4 * size as u64));
            let u = u.max(4 * size as u64);
            let r = load_balance_slow(&sets, u, 0.5).unwrap();
            let mut placed = Vec::new();
            for (i, set) in sets.iter().enumerate() {
                let table: Vec<u64> = (0..u).map(|s| objective(&placed, set, s)).collect();
                let min = *table.iter().min().unwrap();
                let st = r.stages[i];
                assert_eq!(st.objective, min);
                assert_eq!(st.chosen, table.iter().position(|&v| v == min).unwrap() as u64);
                assert_eq!(st.objective_sum, table.iter().map(|&v| v as u128).sum::<u128>());
                assert!(st.dominates_mean());
                placed.push((set.clone(), st.chosen));
            }
            let (l1, l2) = r.max_loads();
            assert!(l1 <= r.load_bound && l2 <= r.load_bound);
            for (i, set) in sets.iter().enumerate() {
                let mut all: Vec<u64> = r.light[i].iter().chain(&r.heavy[i]).copied().collect();
                all.sort_unstable();
                assert_eq!(&all, set);
            }
        }
    }

    #[test]
    fn bucketed_bounds() {
        for seed in 0..6 {
            let sets = lcg_sets(100 + seed, 16, 8, 300);
            let r = load_balance(&sets, 300, 0.25).unwrap();
            assert_eq!(r.bucket_size, 2);
            assert_eq!(r.stages.len(), 8);
            assert!(r.load_bound <= ceil_pow(16, 1.25).unwrap());
            let (l1, l2) = r.max_loads();
            assert!(l1 <= r.load_bound && l2 <= r.load_bound);
            for i in 0..16 {
                assert_eq!(r.shifts[i], r.shifts[i - i % 2]);
                assert_eq!(r.light[i].len() + r.heavy[i].len(), sets[i].len());
            }
        }
    }

    #[test]
    fn one_bucket_is_the_slow_variant() {
        let sets = lcg_sets(7, 4, 5, 50);
        let r = load_balance(&sets, 50, 1.0).unwrap();
        assert_eq!(r.bucket_size, 4);
        assert_eq!(r.stages.len(), 1);
        assert!(r.shifts.iter().all(|&s| s == r.shifts[0]));
    }

    #[test]
    fn bad_input() {
        assert!(load_balance_slow(&[vec![0, 1]], 4, 0.5).is_err());
        assert!(load_balance_slow(&[vec![3, 2]], 4, 0.5).is_err());
        assert!(load_balance_slow(&[vec![5]], 4, 0.5).is_err());
    }
}
