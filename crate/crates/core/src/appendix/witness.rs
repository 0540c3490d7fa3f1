//! 3SUM through a convolution witness structure.
//!
//! `m1` is chosen with `μ = 1` and `m2` on top of it, scored on
//! `lcm(m1, m2)`. For every residue pair `(x, y)` mod `m2` the structure
//! preprocesses the indicators of the residues mod `m1` present among
//! `{a : a ≡ x}` and `{b : b ≡ y}`; each `c ≡ x + y` asks for the witnesses
//! of `c mod m1` and `c mod m1 + m1`, which are expanded back to elements.

use std::collections::HashMap;

use super::WitnessStructure;
use crate::hashing::{select_modulus_few_false_positives_with, DetectionBound, HashParams, ModulusSelection, SelectOptions};
use crate::instances::{SolutionTriple, ThreeSumInstance};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessParams {
    pub alpha: f64,
    pub delta: f64,
}

impl WitnessParams {
    /// `α = 1`, `δ = min(ε/2, α/4)` with `ε = 1/2`.
    pub fn proof_defaults() -> Self {
        let alpha = 1.0;
        Self { alpha, delta: f64::min(0.25, alpha / 4.0) }
    }

    /// `μ` of the second modulus, `α/2 − δ` floored at 0.
    pub fn second_mu(&self) -> f64 {
        (self.alpha / 2.0 - self.delta).max(0.0)
    }
}

impl Default for WitnessParams {
    fn default() -> Self {
        Self::proof_defaults()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOutcome {
    pub decision: bool,
    pub witness: Option<SolutionTriple>,
    pub first: ModulusSelection,
    pub second: ModulusSelection,
    /// `lcm(m1, m2)`.
    pub combined_modulus: u64,
    pub preprocessings: usize,
    pub queries: usize,
    pub witnesses: usize,
    /// Element pairs `(a, b)` tried against some `c`.
    pub expanded: usize,
}

pub fn solve_3sum_via_witness_ds<W: WitnessStructure>(inst: &ThreeSumInstance, ds: &W, params: &WitnessParams) -> Result<WitnessOutcome> {
    if !(params.alpha > 0.0 && params.delta > 0.0 && params.alpha.is_finite() && params.delta.is_finite()) {
        return Err(Error::Param(format!("alpha = {}, delta = {} must be positive", params.alpha, params.delta)));
    }
    let n = inst.len().max(2) as u64;
    let off = SelectOptions { bound: DetectionBound::Off, ..SelectOptions::default() };
    let first = select_modulus_few_false_positives_with(std::slice::from_ref(inst), &HashParams::new(1.0, params.delta, n)?, &off)?;
    let m1 = first.modulus;
    let second = select_modulus_few_false_positives_with(
        std::slice::from_ref(inst),
        &HashParams::new(params.second_mu(), params.delta, n)?,
        &SelectOptions { base_modulus: m1, ..off },
    )?;
    let m2 = second.modulus;
    let combined_modulus = second.scored_modulus();

    let mut buckets: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
    for &a in inst.elements() {
        buckets.entry((a % m1, a % m2)).or_default().push(a);
    }
    let mut out = WitnessOutcome {
        decision: false,
        witness: None,
        first,
        second,
        combined_modulus,
        preprocessings: 0,
        queries: 0,
        witnesses: 0,
        expanded: 0,
    };
    let len = 2 * m1 as usize;
    let indicator = |r2: u64| -> Vec<bool> {
        let mut v = vec![false; len];
        for &(r1, s) in buckets.keys() {
            if s == r2 {
                v[r1 as usize] = true;
            }
        }
        v
    };
    for x in 0..m2 {
        let xs = indicator(x);
        for y in 0..m2 {
            let cs: Vec<u64> = inst.elements().iter().copied().filter(|c| c % m2 == (x + y) % m2).collect();
            if cs.is_empty() {
                continue;
            }
            let ys = indicator(y);
            let handle = ds.preprocess(&xs, &ys)?;
            out.preprocessings += 1;
            for c in cs {
                let k0 = (c % m1) as usize;
                for k in [k0 + 2, k0 + len / 2 + 2] {
                    out.queries += 1;
                    for (p1, p2) in ds.query(&handle, k)? {
                        out.witnesses += 1;
                        let bad = || Error::Solver(format!("witness ({p1}, {p2}) for query {k}"));
                        if p1 == 0 || p2 == 0 || p1 + p2 != k || p1 > len / 2 || p2 > len / 2 {
                            return Err(bad());
                        }
                        let ba = buckets.get(&((p1 - 1) as u64, x)).ok_or_else(bad)?;
                        let bb = buckets.get(&((p2 - 1) as u64, y)).ok_or_else(bad)?;
                        for &a in ba {
                            for &b in bb {
                                out.expanded += 1;
                                if a + b == c && out.witness.is_none() {
                                    out.witness = SolutionTriple::genuine(a, b, c);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.decision = out.witness.is_some();
    Ok(out)
}
