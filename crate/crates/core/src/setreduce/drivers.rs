//! End-to-end 3SUM drivers over pluggable set-query backends.

use super::build::{build_setdisjointness, build_setintersection, Declared, RecoveryOutcome, SetBuild, SetReduceParams};
use super::split::split_intersection_to_disjointness;
use super::{intersect, SetQueryInstance};
use crate::hashing::ModulusSelection;
use crate::instances::{SolutionTriple, ThreeSumInstance};
use crate::util::ceil_pow;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DriverOutcome {
    pub decision: bool,
    pub witness: Option<SolutionTriple>,
    pub early_yes: bool,
    pub selection: ModulusSelection,
    pub declared: Option<Declared>,
    /// Split threshold `t`; 0 for the intersection driver.
    pub threshold: usize,
    pub backend_queries: usize,
    /// Queries with more than `t` elements, finished by a direct scan.
    pub exhausted: usize,
    /// Elements handed to recovery.
    pub listed: usize,
    pub recovery: Option<RecoveryOutcome>,
}

impl DriverOutcome {
    fn early(selection: ModulusSelection) -> Self {
        Self {
            decision: true,
            witness: None,
            early_yes: true,
            selection,
            declared: None,
            threshold: 0,
            backend_queries: 0,
            exhausted: 0,
            listed: 0,
            recovery: None,
        }
    }
}

/// The backend answers, per query of its input, whether the two sets are
/// disjoint. Queries are split with `t = ⌈n^ρ⌉`; intersections with more
/// than `t` elements are rescanned from the unsplit family.
pub fn solve_3sum_via_setdisjointness<F>(inst: &ThreeSumInstance, params: &SetReduceParams, mut backend: F) -> Result<DriverOutcome>
where
    F: FnMut(&SetQueryInstance) -> Result<Vec<bool>>,
{
    if !(params.rho > 0.0 && params.rho.is_finite()) {
        return Err(Error::Param(format!("rho = {} must be positive", params.rho)));
    }
    let (family, ctx, selection, declared) = match build_setdisjointness(inst, params)? {
        SetBuild::YesDetected { selection } => return Ok(DriverOutcome::early(selection)),
        SetBuild::Family { instance, ctx, selection, declared } => (instance, ctx, selection, declared),
    };
    let t = ceil_pow(inst.len().max(2) as u64, params.rho)?.max(1) as usize;
    let split = split_intersection_to_disjointness(&family, t)?;
    let disjoint = backend(&split.instance)?;
    let listed = split.list_up_to_t(&disjoint)?;
    let mut exhausted = 0;
    let answers: Vec<Vec<u64>> = listed
        .into_iter()
        .zip(&family.queries)
        .map(|(l, q)| {
            if l.complete {
                l.elements
            } else {
                exhausted += 1;
                intersect(&family.sets[q.left], &family.sets[q.right])
            }
        })
        .collect();
    let recovery = super::recover_and_decide(&ctx, &answers)?;
    Ok(DriverOutcome {
        decision: recovery.decision,
        witness: recovery.witness,
        early_yes: false,
        selection,
        declared: Some(declared),
        threshold: t,
        backend_queries: split.instance.queries.len(),
        exhausted,
        listed: recovery.listed,
        recovery: Some(recovery),
    })
}

/// The backend returns the full intersection of every query.
pub fn solve_3sum_via_setintersection<F>(inst: &ThreeSumInstance, params: &SetReduceParams, mut backend: F) -> Result<DriverOutcome>
where
    F: FnMut(&SetQueryInstance) -> Result<Vec<Vec<u64>>>,
{
    let (family, ctx, selection, declared) = match build_setintersection(inst, params)? {
        SetBuild::YesDetected { selection } => return Ok(DriverOutcome::early(selection)),
        SetBuild::Family { instance, ctx, selection, declared } => (instance, ctx, selection, declared),
    };
    let answers = backend(&family)?;
    let recovery = super::recover_and_decide(&ctx, &answers)?;
    Ok(DriverOutcome {
        decision: recovery.decision,
        witness: recovery.witness,
        early_yes: false,
        selection,
        declared: Some(declared),
        threshold: 0,
        backend_queries: family.queries.len(),
        exhausted: 0,
        listed: recovery.listed,
        recovery: Some(recovery),
    })
}
