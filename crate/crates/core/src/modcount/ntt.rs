//! Exact integer convolution: three NTT-friendly primes and Garner
//! recombination, exact whenever every output coefficient is below their
//! product (about 2^86).

const PRIMES: [u64; 3] = [998_244_353, 167_772_161, 469_762_049];
const ROOT: u64 = 3;
/// Largest power-of-two transform supported by all three primes.
const MAX_LEN: usize = 1 << 23;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn transform(a: &mut [u64], invert: bool, p: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(ROOT, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        for start in (0..n).step_by(len) {
            let mut wn = 1u64;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = a[start + k + len / 2] * wn % p;
                a[start + k] = if u + v >= p { u + v - p } else { u + v };
                a[start + k + len / 2] = if u >= v { u - v } else { u + p - v };
                wn = wn * w % p;
            }
        }
        len <<= 1;
    }
    if invert {
        let inv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv % p;
        }
    }
}

fn convolve_mod(a: &[u64], b: &[u64], size: usize, p: u64) -> Vec<u64> {
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (d, s) in fa.iter_mut().zip(a) {
        *d = s % p;
    }
    for (d, s) in fb.iter_mut().zip(b) {
        *d = s % p;
    }
    transform(&mut fa, false, p);
    transform(&mut fb, false, p);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % p;
    }
    transform(&mut fa, true, p);
    fa
}

fn schoolbook(a: &[u64], b: &[u64]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u128 * y as u128;
        }
    }
    out
}

/// Linear convolution `out[k] = Σ a[i]·b[k−i]`, exact for outputs below
/// `2^86`. Short or over-long inputs fall back to the schoolbook product.
pub fn convolve_exact(a: &[u64], b: &[u64]) -> Vec<u128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if a.len().min(b.len()) <= 32 || size > MAX_LEN {
        return schoolbook(a, b);
    }
    // Every coefficient is at most `Σa · max b`; below the first prime one
    // transform is already exact.
    let sum_a = a.iter().try_fold(0u64, |s, &x| s.checked_add(x));
    let max_b = b.iter().copied().max().unwrap_or(0);
    if sum_a.and_then(|s| s.checked_mul(max_b)).is_some_and(|t| t < PRIMES[0]) {
        let r = convolve_mod(a, b, size, PRIMES[0]);
        return r[..out_len].iter().map(|&v| v as u128).collect();
    }
    let r: Vec<Vec<u64>> = PRIMES.iter().map(|&p| convolve_mod(a, b, size, p)).collect();
    let (p1, p2, p3) = (PRIMES[0] as u128, PRIMES[1] as u128, PRIMES[2] as u128);
    let inv_p1_mod_p2 = pow_mod(PRIMES[0], PRIMES[1] - 2, PRIMES[1]) as u128;
    let p1p2_mod_p3 = (p1 * p2) % p3;
    let inv_p1p2_mod_p3 = pow_mod(p1p2_mod_p3 as u64, PRIMES[2] - 2, PRIMES[2]) as u128;
    (0..out_len)
        .map(|k| {
            let (r1, r2, r3) = (r[0][k] as u128, r[1][k] as u128, r[2][k] as u128);
            let t1 = (r2 + p2 - r1 % p2) % p2 * inv_p1_mod_p2 % p2;
            let x12 = r1 + p1 * t1;
            let t2 = (r3 + p3 - x12 % p3) % p3 * inv_p1p2_mod_p3 % p3;
            x12 + p1 * p2 * t2
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_schoolbook() {
        let mut s = 99u64;
        for len in [1usize, 5, 33, 100, 257] {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for _ in 0..len {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                a.push(s >> 34);
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                b.push(s >> 34);
            }
            assert_eq!(convolve_exact(&a, &b), schoolbook(&a, &b), "len {len}");
        }
    }

    #[test]
    fn large_coefficients_are_exact() {
        // 2^40 · 2^40 · 64 terms = 2^86 would overflow; stay just under it.
        let a = vec![(1u64 << 40) - 1; 64];
        let b = vec![(1u64 << 39) - 3; 64];
        assert_eq!(convolve_exact(&a, &b), schoolbook(&a, &b));
    }

    #[test]
    fn small_values_take_one_prime() {
        let a: Vec<u64> = (0..300).map(|i| (i * 7 % 5) as u64).collect();
        let b: Vec<u64> = (0..200).map(|i| (i * 3 % 4) as u64).collect();
        assert!(a.iter().sum::<u64>() * 3 < PRIMES[0]);
        assert_eq!(convolve_exact(&a, &b), schoolbook(&a, &b));
        // Just past the single-prime range.
        let a = vec![1u64 << 20; 64];
        let b = vec![1u64 << 20; 64];
        assert_eq!(convolve_exact(&a, &b), schoolbook(&a, &b));
    }

    #[test]
    fn empty() {
        assert!(convolve_exact(&[], &[1]).is_empty());
    }
}
