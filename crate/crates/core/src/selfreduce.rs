//! Self-reduction by dominance: a greedy partition of the sorted values into
//! short, narrow groups, and the list of group triples that can still hold a
//! solution. Also the trivial chop of a universe into aligned intervals.
//!
//! Group and triple indices are 0-based throughout.

use std::fmt::Write as _;

use crate::instances::{ThreeSumInstance, TriThreeSumInstance};
use crate::{Error, Result};

/// Elements `values[lo..hi]`, all within `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Group {
    pub lo: usize,
    pub hi: usize,
    pub min: u64,
    pub max: u64,
}

impl Group {
    pub fn size(&self) -> usize {
        self.hi - self.lo
    }

    pub fn span(&self) -> u64 {
        self.max - self.min
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPlan {
    pub g_requested: usize,
    pub size_cap: usize,
    pub span_cap: u64,
    pub groups: Vec<Group>,
}

/// Nontrivial group triples in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleSet {
    pub triples: Vec<(usize, usize, usize)>,
}

impl TripleSet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: (usize, usize, usize)) -> bool {
        self.triples.binary_search(&t).is_ok()
    }
}

impl PartitionPlan {
    /// Index of the group holding `values[pos]`.
    pub fn group_of_position(&self, pos: usize) -> Option<usize> {
        let i = self.groups.partition_point(|g| g.hi <= pos);
        (i < self.groups.len() && self.groups[i].lo <= pos).then_some(i)
    }

    /// Index of the group whose interval holds `value`, if any.
    pub fn group_of_value(&self, value: u64) -> Option<usize> {
        let i = self.groups.partition_point(|g| g.max < value);
        (i < self.groups.len() && self.groups[i].min <= value).then_some(i)
    }

    /// `PLAN g`, one `lo hi` line per group, `R`, one `i j k` line per triple.
    pub fn serialize(&self, r: &TripleSet) -> String {
        let mut s = format!("PLAN {}\n", self.g_requested);
        for g in &self.groups {
            let _ = writeln!(s, "{} {}", g.lo, g.hi);
        }
        s.push_str("R\n");
        for (i, j, k) in &r.triples {
            let _ = writeln!(s, "{i} {j} {k}");
        }
        s
    }
}

/// A triple is trivial when every sum of its first two groups misses the
/// third group's interval.
pub fn is_nontrivial(gi: &Group, gj: &Group, gk: &Group) -> bool {
    gi.min + gj.min <= gk.max && gi.max + gj.max >= gk.min
}

/// Greedy partition of sorted distinct `values ⊆ [0, universe]` with size cap
/// `⌈2n/g⌉` and span cap `⌈2U/g⌉`, followed by the nontrivial triples.
pub fn dominance_partition(values: &[u64], universe: u64, g: usize) -> Result<(PartitionPlan, TripleSet)> {
    let n = values.len();
    if g == 0 || (n > 0 && g > n) {
        return Err(Error::Param(format!("group count {g} outside [1, {n}]")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Instance("partition input must be sorted and distinct".into()));
    }
    let size_cap = (2 * n).div_ceil(g).max(1);
    let span_cap = (2 * universe as u128).div_ceil(g as u128) as u64;
    let mut groups: Vec<Group> = Vec::new();
    for (pos, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(cur) if cur.size() < size_cap && v - cur.min <= span_cap => {
                cur.hi = pos + 1;
                cur.max = v;
            }
            _ => groups.push(Group { lo: pos, hi: pos + 1, min: v, max: v }),
        }
    }
    let plan = PartitionPlan { g_requested: g, size_cap, span_cap, groups };
    let triples = nontrivial_triples(&plan.groups);
    Ok((plan, triples))
}

fn nontrivial_triples(groups: &[Group]) -> TripleSet {
    let mut triples = Vec::new();
    for (i, gi) in groups.iter().enumerate() {
        for (j, gj) in groups.iter().enumerate() {
            let lo = gi.min + gj.min;
            let hi = gi.max + gj.max;
            let first = groups.partition_point(|g| g.max < lo);
            let end = groups.partition_point(|g| g.min <= hi);
            triples.extend((first..end).map(|k| (i, j, k)));
        }
    }
    TripleSet { triples }
}

/// Additive shifts with `a = a' + a_shift` and so on. `c_shift` is always
/// `a_shift + b_shift`, so `a' + b' = c'` iff `a + b = c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Shift {
    pub a: i64,
    pub b: i64,
}

impl Shift {
    pub fn c(&self) -> i64 {
        self.a + self.b
    }

    pub fn lift_a(&self, v: u64) -> u64 {
        (v as i64 + self.a) as u64
    }

    pub fn lift_b(&self, v: u64) -> u64 {
        (v as i64 + self.b) as u64
    }

    pub fn lift_c(&self, v: u64) -> u64 {
        (v as i64 + self.c()) as u64
    }

    /// Applies `inner` first, then `self`.
    pub fn compose(&self, inner: &Shift) -> Shift {
        Shift { a: self.a + inner.a, b: self.b + inner.b }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubInstance {
    /// Group triple for self-reduction pieces, interval cell for chop pieces.
    pub triple: (usize, usize, usize),
    pub tri: TriThreeSumInstance,
    pub shift: Shift,
}

/// One trichromatic instance per triple of `r`. Group `i` is rebased to
/// start at 1, group `j` likewise, and the `k` group is cut to
/// `[min_i + min_j, max_i + max_j]` and shifted by the sum of both offsets.
/// The declared universe is `span_i + span_j + 2 ≤ 2⌈2U/g⌉ + 2`.
pub fn materialize(values: &[u64], plan: &PartitionPlan, r: &TripleSet) -> Result<Vec<SubInstance>> {
    r.triples
        .iter()
        .map(|&(i, j, k)| {
            let (gi, gj, gk) = (&plan.groups[i], &plan.groups[j], &plan.groups[k]);
            let shift = Shift { a: gi.min as i64 - 1, b: gj.min as i64 - 1 };
            let a: Vec<u64> = values[gi.lo..gi.hi].iter().map(|&v| v - gi.min + 1).collect();
            let b: Vec<u64> = values[gj.lo..gj.hi].iter().map(|&v| v - gj.min + 1).collect();
            let (lo, hi) = (gi.min + gj.min, gi.max + gj.max);
            let c: Vec<u64> = values[gk.lo..gk.hi]
                .iter()
                .filter(|&&v| lo <= v && v <= hi)
                .map(|&v| v + 2 - lo)
                .collect();
            let universe = gi.span() + gj.span() + 2;
            Ok(SubInstance { triple: (i, j, k), tri: TriThreeSumInstance::new(a, b, c, universe)?, shift })
        })
        .collect()
}

pub fn materialize_3sum(inst: &ThreeSumInstance, plan: &PartitionPlan, r: &TripleSet) -> Result<Vec<SubInstance>> {
    materialize(inst.elements(), plan, r)
}

/// Same pieces as [`materialize_3sum`]; the `k` slot of each piece is the
/// group whose elements it answers for.
pub fn materialize_an3sum(inst: &ThreeSumInstance, plan: &PartitionPlan, r: &TripleSet) -> Result<Vec<SubInstance>> {
    materialize(inst.elements(), plan, r)
}

/// ORs per-piece answers (aligned with each piece's `C`) back onto
/// `values`.
pub fn recombine_an(values: &[u64], subs: &[SubInstance], answers: &[Vec<bool>]) -> Result<Vec<bool>> {
    if subs.len() != answers.len() {
        return Err(Error::Solver(format!("{} answers for {} pieces", answers.len(), subs.len())));
    }
    let mut out = vec![false; values.len()];
    for (sub, ans) in subs.iter().zip(answers) {
        if ans.len() != sub.tri.c().len() {
            return Err(Error::Solver(format!(
                "answer of length {} for a piece with |C| = {}",
                ans.len(),
                sub.tri.c().len()
            )));
        }
        for (&c, &flag) in sub.tri.c().iter().zip(ans) {
            if flag {
                let v = sub.shift.lift_c(c);
                let pos = values
                    .binary_search(&v)
                    .map_err(|_| Error::Invariant(format!("lifted value {v} not in the instance")))?;
                out[pos] = true;
            }
        }
    }
    Ok(out)
}

/// Cuts `[1, U]` into `T = ⌈U/ℓ⌉` aligned intervals `[tℓ+1, (t+1)ℓ]` and emits
/// all `T³` cells `(ta, tb, tc)`. In each cell `a' = a − ta·ℓ`,
/// `b' = b − tb·ℓ`, `c' = c − (ta+tb)·ℓ`; only `c' ∈ [2, 2ℓ]` is kept, which
/// leaves `C` empty unless `tc ∈ {ta+tb, ta+tb+1}`. With `T = 1` the piece is
/// the input itself.
pub fn trivial_chop(tri: &TriThreeSumInstance, ell: u64) -> Result<Vec<SubInstance>> {
    if ell == 0 {
        return Err(Error::Param("chop length must be at least 1".into()));
    }
    let u = tri.universe();
    let t = u.div_ceil(ell) as usize;
    if t <= 1 {
        return Ok(vec![SubInstance { triple: (0, 0, 0), tri: tri.clone(), shift: Shift::default() }]);
    }
    if (t as u128).pow(3) > 1 << 24 {
        return Err(Error::CapExceeded(format!("{t}^3 chop cells")));
    }
    let split = |xs: &[u64]| -> Vec<Vec<u64>> {
        let mut parts = vec![Vec::new(); t];
        for &x in xs {
            parts[((x - 1) / ell) as usize].push(x);
        }
        parts
    };
    let (pa, pb, pc) = (split(tri.a()), split(tri.b()), split(tri.c()));
    let mut out = Vec::with_capacity(t * t * t);
    for ta in 0..t {
        for tb in 0..t {
            let base = (ta + tb) as u64 * ell;
            let a: Vec<u64> = pa[ta].iter().map(|&x| x - ta as u64 * ell).collect();
            let b: Vec<u64> = pb[tb].iter().map(|&x| x - tb as u64 * ell).collect();
            for (tc, part) in pc.iter().enumerate() {
                let c: Vec<u64> = part
                    .iter()
                    .filter(|&&x| x >= base + 2 && x <= base + 2 * ell)
                    .map(|&x| x - base)
                    .collect();
                let universe = if tc == ta + tb + 1 { 2 * ell } else { ell };
                out.push(SubInstance {
                    triple: (ta, tb, tc),
                    tri: TriThreeSumInstance::new(a.clone(), b.clone(), c, universe)?,
                    shift: Shift { a: (ta as u64 * ell) as i64, b: (tb as u64 * ell) as i64 },
                });
            }
        }
    }
    Ok(out)
}

/// [`trivial_chop`] without the cells that have an empty part.
pub fn trivial_chop_nonempty(tri: &TriThreeSumInstance, ell: u64) -> Result<Vec<SubInstance>> {
    let mut v = trivial_chop(tri, ell)?;
    v.retain(|s| !s.tri.has_empty_part());
    Ok(v)
}
