//! Small numeric helpers shared by the threshold computations.

use crate::{Error, Result};

/// `x.ceil()` as an integer, snapping values within 1e-9 (relative) of an
/// integer onto it so that exact powers such as `64^1.5` do not round up
/// because of libm noise.
pub(crate) fn ceil_snap(x: f64) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Param(format!("threshold {x} is not a finite non-negative number")));
    }
    let r = x.round();
    let v = if (x - r).abs() <= 1e-9 * r.max(1.0) { r } else { x.ceil() };
    if v >= 9.0e18 {
        return Err(Error::Overflow(format!("threshold {x} does not fit in 64 bits")));
    }
    Ok(v as u64)
}

/// `⌈n^e⌉` with the snapping of [`ceil_snap`].
pub(crate) fn ceil_pow(n: u64, e: f64) -> Result<u64> {
    ceil_snap((n as f64).powf(e))
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("lcm({a}, {b})")))
}

pub(crate) fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("{a} * {b}")))
}
