//! Exact modular counting: pseudo-solutions and collisions of an instance
//! reduced mod `m`, plus prime enumeration.

mod ntt;
mod sieve;

pub use ntt::convolve_exact;
pub use sieve::{primes_in_range, PrimeRange};

use crate::instances::Weighted;

/// Multiplicities of the elements mod `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueHistogram {
    pub modulus: u64,
    pub counts: Vec<u64>,
}

pub fn residue_histogram<W: Weighted + ?Sized>(inst: &W, m: u64) -> ResidueHistogram {
    assert!(m >= 1, "modulus must be positive");
    let mut counts = vec![0u64; m as usize];
    for (v, k) in inst.weighted() {
        counts[(v % m) as usize] += k;
    }
    ResidueHistogram { modulus: m, counts }
}

/// Nonzero residues with their multiplicities, sorted by residue.
pub fn sparse_residues(weighted: &[(u64, u64)], m: u64) -> Vec<(u64, u64)> {
    let mut r: Vec<(u64, u64)> = weighted.iter().map(|&(v, k)| (v % m, k)).collect();
    r.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(r.len());
    for (x, k) in r {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += k,
            _ => out.push((x, k)),
        }
    }
    out
}

/// How [`count_solutions_mod_with`] evaluates the cyclic self-convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// Pick by the number of distinct residues relative to `m`.
    Auto,
    /// Loop over pairs of occupied residues; cost independent of `m`.
    Sparse,
    /// Dense histogram and an exact NTT convolution; cost `O(m log m)`.
    Dense,
}

/// Dense histograms beyond this length are not worth allocating.
const DENSE_LIMIT: u64 = 1 << 22;

fn add_mod(x: u64, y: u64, m: u64) -> u64 {
    if x >= m - y {
        x - (m - y)
    } else {
        x + y
    }
}

fn solutions_sparse(res: &[(u64, u64)], m: u64) -> u128 {
    let mut total = 0u128;
    for &(x, hx) in res {
        for &(y, hy) in res {
            let t = add_mod(x, y, m);
            if let Ok(p) = res.binary_search_by_key(&t, |e| e.0) {
                total += hx as u128 * hy as u128 * res[p].1 as u128;
            }
        }
    }
    total
}

fn solutions_dense(res: &[(u64, u64)], m: u64) -> u128 {
    let mut h = vec![0u64; m as usize];
    for &(x, k) in res {
        h[x as usize] = k;
    }
    let lin = convolve_exact(&h, &h);
    let mut cyc = vec![0u128; m as usize];
    for (i, v) in lin.into_iter().enumerate() {
        cyc[i % m as usize] += v;
    }
    h.iter().zip(&cyc).map(|(&c, &s)| c as u128 * s).sum()
}

/// `S = Σ_c h[c]·(h ⊛ h)[c]`: the number of ordered triples of `A³` with
/// `a + b ≡ c (mod m)`, counted with multiplicity.
pub fn count_solutions_mod<W: Weighted + ?Sized>(inst: &W, m: u64) -> u128 {
    count_solutions_mod_with(inst, m, Kernel::Auto)
}

pub fn count_solutions_mod_with<W: Weighted + ?Sized>(inst: &W, m: u64, kernel: Kernel) -> u128 {
    count_solutions_weighted(&inst.weighted(), m, kernel)
}

/// [`count_solutions_mod_with`] on pre-extracted `(value, multiplicity)`
/// pairs, for callers that score many moduli against one instance.
pub fn count_solutions_weighted(weighted: &[(u64, u64)], m: u64, kernel: Kernel) -> u128 {
    assert!(m >= 1, "modulus must be positive");
    let res = sparse_residues(weighted, m);
    if res.is_empty() {
        return 0;
    }
    let k = res.len() as u128;
    let dense = match kernel {
        Kernel::Sparse => false,
        Kernel::Dense => m <= DENSE_LIMIT,
        Kernel::Auto => m <= DENSE_LIMIT && k * k > 16 * m as u128,
    };
    if dense {
        solutions_dense(&res, m)
    } else {
        solutions_sparse(&res, m)
    }
}

/// `Σ_x h[x]²`: ordered pairs with `a ≡ b (mod m)`, diagonal included.
pub fn count_collisions_mod<W: Weighted + ?Sized>(inst: &W, m: u64) -> u128 {
    count_collisions_weighted(&inst.weighted(), m)
}

pub fn count_collisions_weighted(weighted: &[(u64, u64)], m: u64) -> u128 {
    assert!(m >= 1, "modulus must be positive");
    sparse_residues(weighted, m)
        .iter()
        .map(|&(_, k)| k as u128 * k as u128)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{MultisetInstance, ThreeSumInstance};
    use crate::oracle::count_pseudo_bruteforce;
    use proptest::prelude::*;

    fn set(v: &[u64], u: u64) -> ThreeSumInstance {
        ThreeSumInstance::new(v.to_vec(), u).unwrap()
    }

    #[test]
    fn histogram_examples() {
        let h = residue_histogram(&set(&[1, 6, 11], 20), 5);
        assert_eq!(h.counts, vec![0, 3, 0, 0, 0]);
        let h = residue_histogram(&set(&[1, 2, 3], 20), 2);
        assert_eq!(h.counts, vec![1, 2]);
        let h = residue_histogram(&set(&[4, 9, 17], 20), 1);
        assert_eq!(h.counts, vec![3]);
    }

    #[test]
    fn solution_examples() {
        let x = set(&[1, 2, 3], 10);
        for kernel in [Kernel::Auto, Kernel::Sparse, Kernel::Dense] {
            assert_eq!(count_solutions_mod_with(&x, 5, kernel), 4);
            assert_eq!(count_solutions_mod_with(&x, 2, kernel), 13);
            assert_eq!(count_solutions_mod_with(&set(&[], 10), 7, kernel), 0);
        }
    }

    #[test]
    fn collision_examples() {
        assert_eq!(count_collisions_mod(&set(&[1, 6, 11], 20), 5), 9);
        assert_eq!(count_collisions_mod(&set(&[1, 2, 3], 20), 5), 3);
        assert_eq!(count_collisions_mod(&set(&[1, 2, 3], 20), 1), 9);
    }

    #[test]
    fn multiset_multiplicities() {
        let m = MultisetInstance::new(vec![(0, 2), (3, 1), (5, 4)], 5).unwrap();
        for modulus in 1..12 {
            let expect = count_pseudo_bruteforce(&m, modulus);
            assert_eq!(count_solutions_mod_with(&m, modulus, Kernel::Sparse), expect);
            assert_eq!(count_solutions_mod_with(&m, modulus, Kernel::Dense), expect);
        }
        assert_eq!(count_collisions_mod(&m, 1), 49);
    }

    fn instance() -> impl Strategy<Value = ThreeSumInstance> {
        prop::collection::btree_set(1u64..5000, 0..60)
            .prop_map(|s| ThreeSumInstance::new(s.into_iter().collect(), 5000).unwrap())
    }

    proptest! {
        #[test]
        fn kernels_agree_with_triple_loop(x in instance(), m in 1u64..400) {
            let expect = count_pseudo_bruteforce(&x, m);
            prop_assert_eq!(count_solutions_mod_with(&x, m, Kernel::Sparse), expect);
            prop_assert_eq!(count_solutions_mod_with(&x, m, Kernel::Dense), expect);
        }

        #[test]
        fn genuine_solutions_survive(x in instance(), m in 1u64..400) {
            let e = x.elements();
            let genuine = e.iter().flat_map(|&a| e.iter().map(move |&b| a + b))
                .filter(|&c| x.contains(c)).count() as u128;
            prop_assert!(count_solutions_mod(&x, m) >= genuine);
        }

        #[test]
        fn collisions_at_least_diagonal(x in instance(), m in 1u64..400) {
            let c = count_collisions_mod(&x, m);
            prop_assert!(c >= x.len() as u128);
            let distinct = sparse_residues(&x.weighted(), m).len() == x.len();
            prop_assert_eq!(c == x.len() as u128, distinct);
        }
    }
}
