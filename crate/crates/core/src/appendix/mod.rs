//! Load balancing by greedy shifts, 3SUM through Mono Convolution, and 3SUM
//! through a convolution witness structure.

mod loadbalance;
mod monoconv;
mod witness;

pub use loadbalance::{load_balance, load_balance_slow, soft_heavy_bound, LoadBalanceResult, Stage};
pub use monoconv::{reduce_3sum_to_monoconv, MonoConvOutcome, MonoConvParams};
pub use witness::{solve_3sum_via_witness_ds, WitnessOutcome, WitnessParams};

use crate::{Error, Result};

pub const SENTINEL_X: i64 = -1;
pub const SENTINEL_Y: i64 = -2;
pub const SENTINEL_Z: i64 = -3;

/// Three equal-length vectors; a solution is `i + j = k` (1-based) with
/// `X[i] = Y[j] = Z[k]`. Unassigned slots hold the negative sentinels, which
/// differ per vector and never equal a set index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoConvInstance {
    x: Vec<i64>,
    y: Vec<i64>,
    z: Vec<i64>,
}

impl MonoConvInstance {
    pub fn new(x: Vec<i64>, y: Vec<i64>, z: Vec<i64>) -> Result<Self> {
        if x.len() != y.len() || y.len() != z.len() {
            return Err(Error::Instance(format!(
                "mono convolution vectors of lengths {}, {}, {}",
                x.len(),
                y.len(),
                z.len()
            )));
        }
        Ok(Self { x, y, z })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn y(&self) -> &[i64] {
        &self.y
    }

    pub fn z(&self) -> &[i64] {
        &self.z
    }
}

/// Preprocesses two 0/1 vectors of length `n`; a query `k ∈ [2, 2n]` lists
/// all 1-based `(i, j)` with `i + j = k` and `x[i] = y[j] = 1`.
pub trait WitnessStructure {
    type Handle;

    fn preprocess(&self, x: &[bool], y: &[bool]) -> Result<Self::Handle>;

    fn query(&self, handle: &Self::Handle, k: usize) -> Result<Vec<(usize, usize)>>;
}
