//! Deterministic 3SUM reductions.
//!
//! The crate provides additive hashing by greedy prime selection, the
//! dominance self-reduction, universe reductions, reductions to offline set
//! disjointness / intersection, mono convolution and convolution witness, and
//! a brute-force oracle for every problem involved.

pub mod appendix;
pub mod error;
pub mod hashing;
pub mod instances;
pub mod modcount;
pub mod oracle;
pub mod selfreduce;
pub mod setreduce;
pub mod unireduce;

mod util;

pub use error::{Error, Result};
