//! Universe reductions. Each pipeline hashes the input down with a greedily
//! chosen modulus, hands small-universe instances to a caller-supplied solver
//! and checks the pseudo-solutions it points at for genuineness.

mod an;
mod conv;
mod cubic;
mod listing;

pub use an::{reduce_an3sum_quadratic, AnOutcome, AnParams};
pub use conv::{
    reduce_conv3sum_quadratic, tri_conv_to_mono, ConvOutcome, ConvParams, ConvStats, TriConv,
};
pub use cubic::{reduce_3sum_cubic, CubicOutcome, CubicParams};
pub use listing::{reduce_listing_small_universe, ListingOutcome, ListingParams};

use std::collections::BTreeSet;

use crate::instances::{MultisetInstance, TriThreeSumInstance};
use crate::selfreduce::{dominance_partition, materialize, trivial_chop_nonempty, Shift, SubInstance};
use crate::util::ceil_pow;
use crate::{Error, Result};

/// `A' = {a mod m} ∪ {(a mod m) + m}` as sorted distinct values, each with
/// the original elements it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub modulus: u64,
    pub values: Vec<u64>,
    origins: Vec<Vec<u64>>,
}

impl Fold {
    pub fn new(elements: &[u64], m: u64) -> Self {
        let mut residues: Vec<(u64, u64)> = elements.iter().map(|&a| (a % m, a)).collect();
        residues.sort_unstable();
        let mut low: Vec<(u64, Vec<u64>)> = Vec::new();
        for (r, a) in residues {
            match low.last_mut() {
                Some((s, list)) if *s == r => list.push(a),
                _ => low.push((r, vec![a])),
            }
        }
        let mut values = Vec::with_capacity(2 * low.len());
        let mut origins = Vec::with_capacity(2 * low.len());
        for (r, list) in low.iter() {
            values.push(*r);
            origins.push(list.clone());
        }
        for (r, list) in low {
            values.push(r + m);
            origins.push(list);
        }
        Self { modulus: m, values, origins }
    }

    /// Elements of `A` whose folded value is `v`.
    pub fn origins(&self, v: u64) -> &[u64] {
        match self.values.binary_search(&v) {
            Ok(p) => &self.origins[p],
            Err(_) => &[],
        }
    }

    /// Largest value a fold modulo `m` can hold.
    pub fn universe(&self) -> u64 {
        (2 * self.modulus - 1).max(1)
    }

    /// The multiset `A'` with multiplicities.
    pub fn multiset(&self) -> Result<MultisetInstance> {
        let entries = self
            .values
            .iter()
            .zip(&self.origins)
            .map(|(&v, o)| (v, o.len() as u64))
            .collect();
        MultisetInstance::new(entries, self.universe())
    }

    /// All `(a, b, c)` of `A³` behind a value solution `va + vb = vc`.
    fn expand(&self, va: u64, vb: u64, vc: u64, out: &mut BTreeSet<(u64, u64, u64)>) {
        for &a in self.origins(va) {
            for &b in self.origins(vb) {
                for &c in self.origins(vc) {
                    out.insert((a, b, c));
                }
            }
        }
    }
}

/// Counters shared by the dominance-based pipelines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub modulus: u64,
    /// Final pseudo-solution count `S(m)` of the hashing trace.
    pub pseudo_bound: u128,
    pub early_yes: bool,
    pub folded_values: usize,
    pub groups: usize,
    pub triples: usize,
    /// `ℓ`; every chopped piece has universe at most `2ℓ`.
    pub chop_length: u64,
    pub max_piece_universe: u64,
    pub solver_calls: usize,
    pub positive_pieces: usize,
    /// Distinct `(a, b, c)` pseudo-solutions examined in the last step.
    pub pseudo_enumerated: usize,
    pub genuine_found: usize,
}

/// A chopped piece together with the shift back to fold values.
pub(crate) struct Piece {
    pub tri: TriThreeSumInstance,
    pub shift: Shift,
}

impl Piece {
    /// Value solutions of the piece, lifted to fold values.
    pub fn solutions(&self) -> Vec<(u64, u64, u64)> {
        let t = &self.tri;
        let mut out = Vec::new();
        for &a in t.a() {
            for &b in t.b() {
                if t.c().binary_search(&(a + b)).is_ok() {
                    out.push(self.lift(a, b, a + b));
                }
            }
        }
        out
    }

    /// Lifted value solutions with `c' = c` only.
    pub fn solutions_for(&self, c: u64) -> Vec<(u64, u64, u64)> {
        let t = &self.tri;
        t.a()
            .iter()
            .filter(|&&a| a < c && t.b().binary_search(&(c - a)).is_ok())
            .map(|&a| self.lift(a, c - a, c))
            .collect()
    }

    pub fn lift(&self, a: u64, b: u64, c: u64) -> (u64, u64, u64) {
        (self.shift.lift_a(a), self.shift.lift_b(b), self.shift.lift_c(c))
    }
}

/// Steps 2 and 3 shared by the cubic and quadratic pipelines: dominance
/// self-reduction of the fold with `g = ⌈n'^α⌉`, then the chop to `ℓ`.
pub(crate) fn fold_pieces(fold: &Fold, alpha: f64, ell: u64, stats: &mut ReductionStats) -> Result<Vec<Piece>> {
    let n = fold.values.len();
    stats.folded_values = n;
    stats.chop_length = ell;
    if n == 0 {
        return Ok(Vec::new());
    }
    let g = (ceil_pow(n as u64, alpha)? as usize).clamp(1, n);
    let (plan, r) = dominance_partition(&fold.values, fold.universe(), g)?;
    stats.groups = plan.groups.len();
    stats.triples = r.len();
    let subs: Vec<SubInstance> = materialize(&fold.values, &plan, &r)?;
    let mut pieces = Vec::new();
    for sub in subs.iter().filter(|s| !s.tri.has_empty_part()) {
        for p in trivial_chop_nonempty(&sub.tri, ell)? {
            if p.tri.universe() > 2 * ell {
                return Err(Error::Invariant(format!(
                    "chopped universe {} above 2·{ell}",
                    p.tri.universe()
                )));
            }
            stats.max_piece_universe = stats.max_piece_universe.max(p.tri.universe());
            pieces.push(Piece { tri: p.tri, shift: sub.shift.compose(&p.shift) });
        }
    }
    Ok(pieces)
}

pub(crate) fn check_unit(name: &str, x: f64, open_low: bool) -> Result<()> {
    let ok = x.is_finite() && x < 1.0 && if open_low { x > 0.0 } else { x >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::Param(format!("{name} = {x} out of range")))
    }
}
