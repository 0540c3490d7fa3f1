//! Segmented sieve of Eratosthenes.

use crate::{Error, Result};

/// Primes in `[low, high)`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRange {
    pub low: u64,
    pub high: u64,
    pub primes: Vec<u64>,
}

impl PrimeRange {
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 16;

/// Requires `2 ≤ low < high ≤ 2^32`.
pub fn primes_in_range(low: u64, high: u64) -> Result<PrimeRange> {
    if low < 2 || low >= high || high > 1 << 32 {
        return Err(Error::Param(format!(
            "prime range [{low}, {high}) must satisfy 2 ≤ low < high ≤ 2^32"
        )));
    }
    let base = small_primes((high - 1).isqrt());
    let mut primes = Vec::new();
    let mut seg_lo = low;
    while seg_lo < high {
        let seg_hi = (seg_lo + SEGMENT).min(high);
        let mut composite = vec![false; (seg_hi - seg_lo) as usize];
        for &p in &base {
            if p * p >= seg_hi {
                break;
            }
            let mut start = seg_lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut m = start;
            while m < seg_hi {
                composite[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        primes.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| seg_lo + i as u64),
        );
        seg_lo = seg_hi;
    }
    Ok(PrimeRange { low, high, primes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(x: u64) -> bool {
        x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
    }

    #[test]
    fn examples() {
        assert_eq!(primes_in_range(10, 20).unwrap().primes, vec![11, 13, 17, 19]);
        assert_eq!(primes_in_range(2, 3).unwrap().primes, vec![2]);
        assert!(primes_in_range(24, 29).unwrap().is_empty());
        assert_eq!(primes_in_range(24, 30).unwrap().primes, vec![29]);
    }

    #[test]
    fn preconditions() {
        assert!(primes_in_range(1, 10).is_err());
        assert!(primes_in_range(10, 10).is_err());
        assert!(primes_in_range(2, (1 << 32) + 1).is_err());
    }

    #[test]
    fn agrees_with_trial_division_across_segments() {
        let (lo, hi) = (SEGMENT - 500, 2 * SEGMENT + 700);
        let expect: Vec<u64> = (lo..hi).filter(|&x| trial_division(x)).collect();
        assert_eq!(primes_in_range(lo, hi).unwrap().primes, expect);
        let expect: Vec<u64> = (2..2000).filter(|&x| trial_division(x)).collect();
        assert_eq!(primes_in_range(2, 2000).unwrap().primes, expect);
    }

    #[test]
    fn near_the_top() {
        let r = primes_in_range((1 << 32) - 100, 1 << 32).unwrap();
        assert_eq!(r.primes.last(), Some(&4294967291));
        assert!(r.primes.iter().all(|&p| trial_division(p)));
    }
}
