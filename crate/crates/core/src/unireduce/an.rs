//! All-Numbers 3SUM to All-Numbers 3SUM over a universe of size about `n²`.

use std::collections::BTreeSet;

use super::{check_unit, fold_pieces, Fold, ReductionStats};
use crate::hashing::{
    select_modulus_few_false_positives_with, DetectionBound, HashParams, ModulusSelection, SelectOptions,
};
use crate::instances::{ThreeSumInstance, TriThreeSumInstance};
use crate::util::ceil_snap;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnParams {
    pub mu: f64,
    pub delta: f64,
    pub alpha: f64,
    /// Chop length factor: `ℓ = ⌈c·n^(2−2α)⌉`.
    pub c: f64,
    pub pool: crate::hashing::PoolPolicy,
}

impl AnParams {
    /// `δ = 1/32`, `μ = 2 − 2δ`, `α = 4δ`, `c = 1`.
    pub fn proof_defaults() -> Self {
        let delta = 1.0 / 32.0;
        Self { mu: 2.0 - 2.0 * delta, delta, alpha: 4.0 * delta, c: 1.0, pool: crate::hashing::PoolPolicy::Widen }
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

impl Default for AnParams {
    fn default() -> Self {
        Self::proof_defaults()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnOutcome {
    /// Aligned with the sorted elements of the input.
    pub flags: Vec<bool>,
    pub selection: ModulusSelection,
    pub stats: ReductionStats,
}

/// The solver returns, for a chopped piece, one flag per element of its `C`.
/// Every flagged element has its value solutions listed and lifted; an input
/// element is flagged when one of its lifted triples is genuine.
pub fn reduce_an3sum_quadratic<F>(inst: &ThreeSumInstance, mut solver: F, params: &AnParams) -> Result<AnOutcome>
where
    F: FnMut(&TriThreeSumInstance) -> Result<Vec<bool>>,
{
    params.validate()?;
    let n = inst.len().max(2) as u64;
    let hp = HashParams::new(params.mu, params.delta, n)?;
    let options = SelectOptions { pool: params.pool, bound: DetectionBound::Off, base_modulus: 1 };
    let selection = select_modulus_few_false_positives_with(std::slice::from_ref(inst), &hp, &options)?;
    let m = selection.modulus;
    let mut stats = ReductionStats { modulus: m, pseudo_bound: selection.final_score, ..Default::default() };

    let fold = Fold::new(inst.elements(), m);
    let ell = ceil_snap(params.c * (n as f64).powf(2.0 - 2.0 * params.alpha))?.max(1);
    let pieces = fold_pieces(&fold, params.alpha, ell, &mut stats)?;

    let mut pseudo = BTreeSet::new();
    for piece in &pieces {
        stats.solver_calls += 1;
        let flags = solver(&piece.tri)?;
        if flags.len() != piece.tri.c().len() {
            return Err(Error::Solver(format!(
                "{} flags for a piece with |C| = {}",
                flags.len(),
                piece.tri.c().len()
            )));
        }
        let mut positive = false;
        for (&c, _) in piece.tri.c().iter().zip(&flags).filter(|(_, &f)| f) {
            positive = true;
            for (va, vb, vc) in piece.solutions_for(c) {
                fold.expand(va, vb, vc, &mut pseudo);
            }
        }
        stats.positive_pieces += positive as usize;
    }
    stats.pseudo_enumerated = pseudo.len();
    let mut flags = vec![false; inst.len()];
    for (a, b, c) in pseudo {
        if a + b == c {
            stats.genuine_found += 1;
            if let Some(p) = inst.position(c) {
                flags[p] = true;
            }
        }
    }
    Ok(AnOutcome { flags, selection, stats })
}
