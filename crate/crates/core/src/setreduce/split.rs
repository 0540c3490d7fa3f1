//! Set Intersection with at most `t` reported elements from Set
//! Disjointness: every set is cut into `t²` chunks and every query into the
//! `t⁴` chunk pairs.

use super::{intersect, SetQuery, SetQueryInstance};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitInstance {
    pub instance: SetQueryInstance,
    pub t: usize,
    /// Chunks per original set, `t²`.
    pub chunks: usize,
    pub original_queries: usize,
}

/// Up to `t` elements of one original query's intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Listed {
    pub elements: Vec<u64>,
    /// The elements are the whole intersection.
    pub complete: bool,
}

impl SplitInstance {
    pub fn chunk_set(&self, set: usize, u: usize) -> usize {
        set * self.chunks + u
    }

    /// Index of the query for chunk pair `(u, v)` of original query `q`.
    pub fn chunk_query(&self, q: usize, u: usize, v: usize) -> usize {
        (q * self.chunks + u) * self.chunks + v
    }

    /// Scans the nonempty chunk pairs of each original query in
    /// lexicographic order and keeps the first `t` elements found.
    pub fn list_up_to_t(&self, disjoint: &[bool]) -> Result<Vec<Listed>> {
        if disjoint.len() != self.instance.queries.len() {
            return Err(Error::MalformedAnswer {
                query: disjoint.len().min(self.instance.queries.len()),
                message: format!("{} answers for {} queries", disjoint.len(), self.instance.queries.len()),
            });
        }
        let c = self.chunks;
        let mut out = Vec::with_capacity(self.original_queries);
        for q in 0..self.original_queries {
            let mut elements = Vec::new();
            let mut complete = true;
            'pairs: for u in 0..c {
                for v in 0..c {
                    let idx = self.chunk_query(q, u, v);
                    if disjoint[idx] {
                        continue;
                    }
                    if elements.len() >= self.t {
                        complete = false;
                        break 'pairs;
                    }
                    let sq = &self.instance.queries[idx];
                    let common = intersect(&self.instance.sets[sq.left], &self.instance.sets[sq.right]);
                    if common.is_empty() {
                        return Err(Error::MalformedAnswer { query: idx, message: "reported non-disjoint, but disjoint".into() });
                    }
                    elements.extend(common);
                    if elements.len() > self.t {
                        elements.truncate(self.t);
                        complete = false;
                        break 'pairs;
                    }
                }
            }
            out.push(Listed { elements, complete });
        }
        Ok(out)
    }
}

/// `N' = N·t²`, `s' = ⌈s/t²⌉`, `q' = q·t⁴`. Chunk `u` of a set of length
/// `len` is `[⌊u·len/t²⌋, ⌊(u+1)·len/t²⌋)`.
pub fn split_intersection_to_disjointness(inst: &SetQueryInstance, t: usize) -> Result<SplitInstance> {
    if t == 0 {
        return Err(Error::Param("split threshold must be at least 1".into()));
    }
    let c = t * t;
    let total = inst.queries.len() as u128 * (c as u128) * (c as u128);
    if total > 1 << 26 {
        return Err(Error::CapExceeded(format!("{total} chunk queries")));
    }
    let mut sets = Vec::with_capacity(inst.sets.len() * c);
    for s in &inst.sets {
        let len = s.len();
        for u in 0..c {
            sets.push(s[u * len / c..(u + 1) * len / c].to_vec());
        }
    }
    let mut queries = Vec::with_capacity(total as usize);
    for q in &inst.queries {
        for u in 0..c {
            for v in 0..c {
                queries.push(SetQuery { left: q.left * c + u, right: q.right * c + v, triple: q.triple, a: q.a });
            }
        }
    }
    Ok(SplitInstance {
        instance: SetQueryInstance { universe: inst.universe, sets, queries, size_bound: inst.size_bound.div_ceil(c) },
        t,
        chunks: c,
        original_queries: inst.queries.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_set_queries;

    fn sample() -> SetQueryInstance {
        SetQueryInstance {
            universe: 20,
            sets: vec![(1..=8).collect(), vec![2, 4, 6, 8, 10, 12, 14, 16], vec![], vec![3, 5, 7]],
            queries: vec![
                SetQuery { left: 0, right: 1, triple: (0, 0, 0), a: 1 },
                SetQuery { left: 0, right: 3, triple: (0, 0, 1), a: 2 },
                SetQuery { left: 2, right: 0, triple: (1, 0, 0), a: 3 },
            ],
            size_bound: 8,
        }
    }

    #[test]
    fn identity_split() {
        let s = split_intersection_to_disjointness(&sample(), 1).unwrap();
        assert_eq!(s.instance.sets, sample().sets);
        assert_eq!(s.instance.queries, sample().queries);
    }

    #[test]
    fn t_two() {
        let base = sample();
        let s = split_intersection_to_disjointness(&base, 2).unwrap();
        assert_eq!(s.instance.sets.len(), base.sets.len() * 4);
        assert_eq!(s.instance.queries.len(), base.queries.len() * 16);
        assert_eq!(s.instance.size_bound, 2);
        s.instance.validate().unwrap();
        for u in 0..4 {
            assert_eq!(s.instance.sets[s.chunk_set(0, u)].len(), 2);
        }
        let disjoint: Vec<bool> = solve_set_queries(&s.instance).unwrap().iter().map(|a| a.disjoint).collect();
        let listed = s.list_up_to_t(&disjoint).unwrap();
        let truth = solve_set_queries(&base).unwrap();
        for (l, t) in listed.iter().zip(&truth) {
            assert!(l.elements.len() <= 2);
            assert!(l.elements.iter().all(|e| t.intersection.contains(e)));
            assert_eq!(l.complete, t.intersection.len() <= 2);
            if l.complete {
                assert_eq!(l.elements, t.intersection);
            }
        }
        // {2, 4, 6, 8}: the first two come from the first nonempty pairs.
        assert_eq!(listed[0].elements, vec![2, 4]);
        assert!(!listed[0].complete);
        assert_eq!(listed[2].elements, Vec::<u64>::new());
        assert!(listed[2].complete);
    }

    #[test]
    fn lying_disjointness_is_caught() {
        let s = split_intersection_to_disjointness(&sample(), 1).unwrap();
        assert!(s.list_up_to_t(&[false, false, false]).is_err());
        assert!(s.list_up_to_t(&[true]).is_err());
    }
}
