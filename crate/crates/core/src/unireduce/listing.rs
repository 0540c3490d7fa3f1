//! 3SUM from 3SUM listing over a small universe.
//!
//! The fold is padded with a block of dummies so that the listing instance
//! has the size the lister expects; the dummies `10m + 4m·i` never take part
//! in a solution. The value `0` is kept out of the listing instance because
//! `0 + d = d` would pair it with every dummy; elements in the zero residue
//! class are checked directly instead.

use std::collections::{BTreeSet, HashSet};

use super::Fold;
use crate::hashing::{
    select_modulus_few_false_positives_with, DetectionBound, HashParams, ModulusSelection, SelectOptions,
};
use crate::instances::{MultisetInstance, SolutionTriple, ThreeSumInstance};
use crate::util::{ceil_pow, checked_mul};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ListingParams {
    pub mu: f64,
    pub delta: f64,
    /// Largest number of listed triples accepted; `None` means `3·S(m)`.
    pub cap: Option<u128>,
}

impl ListingParams {
    /// `μ = 1.5`, `δ = min(ε/3, μ − 1)` at `ε = ½`.
    pub fn proof_defaults() -> Self {
        let mu = 1.5;
        Self { mu, delta: (0.5f64 / 3.0).min(mu - 1.0), cap: None }
    }
}

impl Default for ListingParams {
    fn default() -> Self {
        Self::proof_defaults()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListingOutcome {
    pub decision: bool,
    pub witness: Option<SolutionTriple>,
    pub selection: ModulusSelection,
    pub dummies: usize,
    pub listed: usize,
    pub pseudo_enumerated: usize,
    /// Pairs scanned for the zero residue class.
    pub zero_class_pairs: u64,
}

/// The lister must return every value triple `(a, b, a + b)` of the distinct
/// values of its input.
pub fn reduce_listing_small_universe<F>(inst: &ThreeSumInstance, mut lister: F, params: &ListingParams) -> Result<ListingOutcome>
where
    F: FnMut(&MultisetInstance) -> Result<Vec<(u64, u64, u64)>>,
{
    if !(params.mu > 1.0 && params.mu < 2.0) {
        return Err(Error::Param(format!("listing needs 1 < mu < 2, got {}", params.mu)));
    }
    let n = inst.len().max(2) as u64;
    let hp = HashParams::new(params.mu, params.delta, n)?;
    let options = SelectOptions { bound: DetectionBound::Off, ..SelectOptions::default() };
    let selection = select_modulus_few_false_positives_with(std::slice::from_ref(inst), &hp, &options)?;
    let m = selection.modulus;
    let fold = Fold::new(inst.elements(), m);

    let dummies = ceil_pow(n, 1.0 + params.delta)? as usize;
    let top = checked_mul(m, 10 + 4 * dummies as u64)?;
    let mut entries: Vec<(u64, u64)> = fold
        .multiset()?
        .entries()
        .iter()
        .copied()
        .filter(|&(v, _)| v != 0)
        .collect();
    entries.extend((0..dummies as u64).map(|i| (10 * m + 4 * m * i, 1)));
    let listing = MultisetInstance::new(entries, top)?;

    let listed = lister(&listing)?;
    let cap = params.cap.unwrap_or(3 * selection.final_score);
    if listed.len() as u128 > cap {
        return Err(Error::CapExceeded(format!("lister returned {} triples, cap {cap}", listed.len())));
    }
    let mut pseudo = BTreeSet::new();
    for &(va, vb, vc) in &listed {
        if va >= 2 * m || vb >= 2 * m || vc >= 2 * m {
            return Err(Error::Invariant(format!("listed triple ({va}, {vb}, {vc}) touches a dummy")));
        }
        if va + vb != vc || fold.origins(va).is_empty() || fold.origins(vb).is_empty() || fold.origins(vc).is_empty() {
            return Err(Error::Solver(format!("listed triple ({va}, {vb}, {vc}) is not a solution")));
        }
        fold.expand(va, vb, vc, &mut pseudo);
    }

    let mut genuine: Vec<(u64, u64, u64)> = pseudo.iter().copied().filter(|&(a, b, c)| a + b == c).collect();
    let set: HashSet<u64> = inst.elements().iter().copied().collect();
    let mut zero_class_pairs = 0;
    for &a in fold.origins(0) {
        for &b in inst.elements() {
            zero_class_pairs += 1;
            if set.contains(&(a + b)) {
                genuine.push((a, b, a + b));
                genuine.push((b, a, a + b));
            }
        }
    }
    let witness = genuine.into_iter().min().and_then(|(a, b, c)| SolutionTriple::genuine(a, b, c));
    Ok(ListingOutcome {
        decision: witness.is_some(),
        witness,
        selection,
        dummies,
        listed: listed.len(),
        pseudo_enumerated: pseudo.len(),
        zero_class_pairs,
    })
}
