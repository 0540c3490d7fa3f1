//! 3SUM to 3SUM over a universe of size about `n³`.

use std::collections::BTreeSet;

use super::{check_unit, fold_pieces, Fold, ReductionStats};
use crate::hashing::{select_modulus_few_false_positives_with, HashParams, ModulusSelection, SelectOptions};
use crate::instances::{SolutionTriple, ThreeSumInstance, TriThreeSumInstance};
use crate::util::ceil_snap;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicParams {
    pub mu: f64,
    pub delta: f64,
    /// Group count exponent: `g = ⌈n'^α⌉`.
    pub alpha: f64,
    /// Chop length factor: `ℓ = ⌈c·n^(3−3α)⌉`.
    pub c: f64,
    pub hash: SelectOptions,
}

impl CubicParams {
    /// `δ = 1/64`, `μ = 2 − 2δ`, `α = ½ + 2δ`, `c = 1`.
    pub fn proof_defaults() -> Self {
        let delta = 1.0 / 64.0;
        Self { mu: 2.0 - 2.0 * delta, delta, alpha: 0.5 + 2.0 * delta, c: 1.0, hash: SelectOptions::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..3.0).contains(&self.mu) {
            return Err(Error::Param(format!("mu = {} outside [0, 3)", self.mu)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Param(format!("delta = {} must be positive", self.delta)));
        }
        check_unit("alpha", self.alpha, true)?;
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Param(format!("c = {} must be positive", self.c)));
        }
        Ok(())
    }
}

impl Default for CubicParams {
    fn default() -> Self {
        Self::proof_defaults()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicOutcome {
    pub decision: bool,
    /// Lexicographically smallest genuine triple found; `None` on an early
    /// yes from the hashing step.
    pub witness: Option<SolutionTriple>,
    pub selection: ModulusSelection,
    pub stats: ReductionStats,
}

/// The solver receives chopped trichromatic pieces over universes of at most
/// `2ℓ` and answers whether each has a solution.
pub fn reduce_3sum_cubic<F>(inst: &ThreeSumInstance, mut solver: F, params: &CubicParams) -> Result<CubicOutcome>
where
    F: FnMut(&TriThreeSumInstance) -> Result<bool>,
{
    params.validate()?;
    let n = inst.len().max(2) as u64;
    let hp = HashParams::new(params.mu, params.delta, n)?;
    let selection = select_modulus_few_false_positives_with(std::slice::from_ref(inst), &hp, &params.hash)?;
    let m = selection.modulus;
    let mut stats = ReductionStats { modulus: m, pseudo_bound: selection.final_score, ..Default::default() };
    if selection.yes_detected() {
        stats.early_yes = true;
        return Ok(CubicOutcome { decision: true, witness: None, selection, stats });
    }

    let fold = Fold::new(inst.elements(), m);
    let ell = ceil_snap(params.c * (n as f64).powf(3.0 - 3.0 * params.alpha))?.max(1);
    let pieces = fold_pieces(&fold, params.alpha, ell, &mut stats)?;

    let mut pseudo = BTreeSet::new();
    for piece in &pieces {
        stats.solver_calls += 1;
        if !solver(&piece.tri)? {
            continue;
        }
        stats.positive_pieces += 1;
        for (va, vb, vc) in piece.solutions() {
            fold.expand(va, vb, vc, &mut pseudo);
        }
    }
    stats.pseudo_enumerated = pseudo.len();
    let genuine: Vec<(u64, u64, u64)> = pseudo.into_iter().filter(|&(a, b, c)| a + b == c).collect();
    stats.genuine_found = genuine.len();
    let witness = genuine.first().and_then(|&(a, b, c)| SolutionTriple::genuine(a, b, c));
    Ok(CubicOutcome { decision: witness.is_some(), witness, selection, stats })
}
