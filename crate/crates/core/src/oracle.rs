//! Brute-force reference solvers. They are meant to be obviously correct;
//! every pipeline is tested against them.

use std::collections::BTreeMap;

use crate::appendix::{MonoConvInstance, WitnessStructure};
use crate::instances::{
    ConvThreeSumInstance, MultisetInstance, SolutionTriple, ThreeSumInstance, TriThreeSumInstance,
    Weighted,
};
use crate::setreduce::SetQueryInstance;
use crate::{Error, Result};

/// Smallest `(a, b)` over `a ∈ A, b ∈ B, a + b ∈ C`, by a two-pointer scan
/// per target. All three slices must be sorted.
fn first_solution(a: &[u64], b: &[u64], c: &[u64]) -> Option<(u64, u64, u64)> {
    let mut best: Option<(u64, u64, u64)> = None;
    for &target in c {
        if a.is_empty() || b.is_empty() {
            break;
        }
        let (mut i, mut j) = (0usize, b.len() - 1);
        loop {
            let s = a[i] + b[j];
            if s == target {
                let hit = (a[i], b[j], target);
                if best.map_or(true, |x| (hit.0, hit.1) < (x.0, x.1)) {
                    best = Some(hit);
                }
                break;
            }
            if s < target {
                i += 1;
                if i == a.len() {
                    break;
                }
            } else {
                if j == 0 {
                    break;
                }
                j -= 1;
            }
        }
    }
    best
}

fn has_pair(a: &[u64], b: &[u64], target: u64) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let (mut i, mut j) = (0usize, b.len() - 1);
    loop {
        let s = a[i] + b[j];
        if s == target {
            return true;
        }
        if s < target {
            i += 1;
            if i == a.len() {
                return false;
            }
        } else {
            if j == 0 {
                return false;
            }
            j -= 1;
        }
    }
}

fn as_genuine(t: Option<(u64, u64, u64)>) -> Option<SolutionTriple> {
    t.and_then(|(a, b, c)| SolutionTriple::genuine(a, b, c))
}

pub fn solve_3sum(inst: &ThreeSumInstance) -> Option<SolutionTriple> {
    let e = inst.elements();
    as_genuine(first_solution(e, e, e))
}

pub fn solve_3sum_tri(t: &TriThreeSumInstance) -> Option<SolutionTriple> {
    as_genuine(first_solution(t.a(), t.b(), t.c()))
}

/// Existence does not depend on multiplicities, so this scans the distinct
/// values.
pub fn solve_3sum_multiset(m: &MultisetInstance) -> Option<SolutionTriple> {
    let v = m.distinct_values();
    as_genuine(first_solution(&v, &v, &v))
}

/// `flag[i]` answers whether `A[i]` is a sum of two elements of `A`.
pub fn solve_an3sum(inst: &ThreeSumInstance) -> Vec<bool> {
    let e = inst.elements();
    e.iter().map(|&c| has_pair(e, e, c)).collect()
}

/// Flags aligned with `C`.
pub fn solve_an3sum_tri(t: &TriThreeSumInstance) -> Vec<bool> {
    t.c().iter().map(|&c| has_pair(t.a(), t.b(), c)).collect()
}

/// `flag[k - 1]` answers whether some `i + j = k` has `X[i] + X[j] = X[k]`,
/// with 1-based `i, j, k`.
pub fn solve_conv3sum(inst: &ConvThreeSumInstance) -> Vec<bool> {
    let x = inst.values();
    let n = x.len();
    (1..=n)
        .map(|k| (1..k).any(|i| x[i - 1] + x[k - i - 1] == x[k - 1]))
        .collect()
}

/// All ordered value triples `(a, b, a + b)` of the distinct values, in
/// lexicographic order.
pub fn list_3sum(m: &MultisetInstance) -> Vec<(u64, u64, u64)> {
    let v = m.distinct_values();
    let mut out = Vec::new();
    for &a in &v {
        for &b in &v {
            if v.binary_search(&(a + b)).is_ok() {
                out.push((a, b, a + b));
            }
        }
    }
    out
}

/// `|{(a, b, c) ∈ A³ : a + b ≡ c (mod m)}|` by a triple loop over the
/// elements, each repeated by its multiplicity.
pub fn count_pseudo_bruteforce<W: Weighted + ?Sized>(inst: &W, m: u64) -> u128 {
    assert!(m >= 1, "modulus must be positive");
    let mut residues = Vec::new();
    for (v, k) in inst.weighted() {
        for _ in 0..k {
            residues.push(v % m);
        }
    }
    let mut count = 0u128;
    for &x in &residues {
        for &y in &residues {
            let t = ((x as u128 + y as u128) % m as u128) as u64;
            count += residues.iter().filter(|&&z| z == t).count() as u128;
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryAnswer {
    pub disjoint: bool,
    pub intersection: Vec<u64>,
}

fn intersect_sorted(x: &[u64], y: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn solve_set_queries(family: &SetQueryInstance) -> Result<Vec<QueryAnswer>> {
    let n = family.sets.len();
    family
        .queries
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            if q.left >= n || q.right >= n {
                return Err(Error::Param(format!(
                    "query {qi} refers to set ({}, {}) but only {n} sets exist",
                    q.left, q.right
                )));
            }
            let intersection = intersect_sorted(&family.sets[q.left], &family.sets[q.right]);
            Ok(QueryAnswer { disjoint: intersection.is_empty(), intersection })
        })
        .collect()
}

/// `flag[k - 1]` answers whether some `i + j = k` has `X[i] = Y[j] = Z[k]`.
/// Pairs are grouped by value; the result equals the plain double loop over
/// index pairs.
pub fn solve_monoconv(inst: &MonoConvInstance) -> Vec<bool> {
    let n = inst.len();
    let mut xs: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut ys: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 1..=n {
        xs.entry(inst.x()[i - 1]).or_default().push(i);
        ys.entry(inst.y()[i - 1]).or_default().push(i);
    }
    let mut flags = vec![false; n];
    for (value, is) in &xs {
        let Some(js) = ys.get(value) else { continue };
        for &i in is {
            for &j in js {
                let k = i + j;
                if k <= n && inst.z()[k - 1] == *value {
                    flags[k - 1] = true;
                }
            }
        }
    }
    flags
}

/// Witness lists by a direct scan of the stored vectors.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveWitness;

pub struct NaiveHandle {
    x: Vec<bool>,
    y: Vec<bool>,
}

impl WitnessStructure for NaiveWitness {
    type Handle = NaiveHandle;

    fn preprocess(&self, x: &[bool], y: &[bool]) -> Result<NaiveHandle> {
        if x.len() != y.len() {
            return Err(Error::Param(format!(
                "witness vectors of lengths {} and {}",
                x.len(),
                y.len()
            )));
        }
        Ok(NaiveHandle { x: x.to_vec(), y: y.to_vec() })
    }

    fn query(&self, h: &NaiveHandle, k: usize) -> Result<Vec<(usize, usize)>> {
        let n = h.x.len();
        if k < 2 || k > 2 * n {
            return Err(Error::Param(format!("witness query {k} outside [2, {}]", 2 * n)));
        }
        let lo = k.saturating_sub(n).max(1);
        let hi = (k - 1).min(n);
        Ok((lo..=hi)
            .filter(|&i| h.x[i - 1] && h.y[k - i - 1])
            .map(|i| (i, k - i))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64], u: u64) -> ThreeSumInstance {
        ThreeSumInstance::new(v.to_vec(), u).unwrap()
    }

    fn triple(t: Option<SolutionTriple>) -> Option<(u64, u64, u64)> {
        t.map(|s| (s.a, s.b, s.c))
    }

    #[test]
    fn three_sum_examples() {
        assert_eq!(triple(solve_3sum(&set(&[1, 2, 3], 10))), Some((1, 1, 2)));
        assert_eq!(triple(solve_3sum(&set(&[1, 5, 9], 10))), None);
        assert_eq!(triple(solve_3sum(&set(&[1, 2, 4], 10))), Some((1, 1, 2)));
        assert_eq!(triple(solve_3sum(&set(&[], 10))), None);
    }

    #[test]
    fn lexicographic_tie_break() {
        // 3 + 7 = 10, 2 + 8 = 10 and 2 + 7 = 9 all hold; (2, 7) is smallest.
        let x = set(&[2, 3, 7, 8, 9, 10, 11], 20);
        assert_eq!(triple(solve_3sum(&x)), Some((2, 7, 9)));
    }

    #[test]
    fn two_pointer_matches_double_loop() {
        let mut state = 12345u64;
        for _ in 0..300 {
            let mut v = Vec::new();
            for _ in 0..12 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.push(1 + (state >> 33) % 60);
            }
            v.sort();
            v.dedup();
            let x = set(&v, 60);
            let mut expect = None;
            for &a in &v {
                for &b in &v {
                    if x.contains(a + b) && expect.is_none() {
                        expect = Some((a, b, a + b));
                    }
                }
            }
            assert_eq!(triple(solve_3sum(&x)), expect);
            let an: Vec<bool> =
                v.iter().map(|&c| v.iter().any(|&a| v.iter().any(|&b| a + b == c))).collect();
            assert_eq!(solve_an3sum(&x), an);
        }
    }

    #[test]
    fn tri_and_multiset() {
        let t = TriThreeSumInstance::new(vec![1, 4], vec![2, 6], vec![3, 10], 10).unwrap();
        assert_eq!(triple(solve_3sum_tri(&t)), Some((1, 2, 3)));
        assert_eq!(solve_an3sum_tri(&t), vec![true, true]);
        let m = MultisetInstance::new(vec![(0, 3)], 5).unwrap();
        assert_eq!(triple(solve_3sum_multiset(&m)), Some((0, 0, 0)));
        assert_eq!(list_3sum(&m), vec![(0, 0, 0)]);
    }

    #[test]
    fn an_examples() {
        assert_eq!(solve_an3sum(&set(&[1, 2, 3], 10)), vec![false, true, true]);
        assert_eq!(solve_an3sum(&set(&[1, 5, 9], 10)), vec![false; 3]);
        assert_eq!(solve_an3sum(&set(&[2, 4, 6, 8], 10)), vec![false, true, true, true]);
    }

    #[test]
    fn conv_examples() {
        let c = |v: &[u64]| solve_conv3sum(&ConvThreeSumInstance::new(v.to_vec(), 10).unwrap());
        assert_eq!(c(&[1, 1, 2]), vec![false, false, true]);
        assert_eq!(c(&[5]), vec![false]);
        assert_eq!(c(&[1, 2, 3])[2], true);
    }

    #[test]
    fn pseudo_counts() {
        let x = set(&[1, 2, 3], 10);
        assert_eq!(count_pseudo_bruteforce(&x, 5), 4);
        assert_eq!(count_pseudo_bruteforce(&x, 2), 13);
        assert_eq!(count_pseudo_bruteforce(&set(&[], 10), 7), 0);
        let m = MultisetInstance::new(vec![(1, 2)], 5).unwrap();
        // Eight ordered triples of the two copies, all with 1 + 1 ≡ 1 mod 1.
        assert_eq!(count_pseudo_bruteforce(&m, 1), 8);
        assert_eq!(count_pseudo_bruteforce(&m, 2), 0);
    }

    #[test]
    fn monoconv_examples() {
        let m = MonoConvInstance::new(vec![7], vec![7], vec![7]).unwrap();
        assert_eq!(solve_monoconv(&m), vec![false]);
        let m = MonoConvInstance::new(vec![7, 1, 5], vec![7, 1, 6], vec![1, 7, 1]).unwrap();
        assert_eq!(solve_monoconv(&m), vec![false, true, false]);
        let m = MonoConvInstance::new(vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]).unwrap();
        assert_eq!(solve_monoconv(&m), vec![false; 3]);
    }

    #[test]
    fn witness_examples() {
        let w = NaiveWitness;
        let h = w.preprocess(&[true, false], &[false, true]).unwrap();
        assert_eq!(w.query(&h, 3).unwrap(), vec![(1, 2)]);
        let h = w.preprocess(&[true, true], &[true, true]).unwrap();
        assert_eq!(w.query(&h, 2).unwrap(), vec![(1, 1)]);
        assert_eq!(w.query(&h, 3).unwrap(), vec![(1, 2), (2, 1)]);
        assert!(w.query(&h, 1).is_err());
        assert!(w.query(&h, 5).is_err());
        assert!(w.preprocess(&[true], &[true, false]).is_err());
    }
}
