//! 3SUM to Convolution 3SUM over a universe of size about `U/n`.
//!
//! Residue classes modulo `m ≈ n` with more than `t` elements are heavy and
//! handled directly. Light classes are spread over `t³` convolution
//! instances: the `x`-th element `a` of class `i` becomes `X_x[i] = (a−i)/m`.

use std::collections::HashSet;

use super::check_unit;
use crate::hashing::{select_modulus_few_collisions, HashParams, ModulusSelection};
use crate::instances::{ConvThreeSumInstance, SolutionTriple, ThreeSumInstance, UNIVERSE_LIMIT};
use crate::util::ceil_pow;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvParams {
    /// Collision hashing exponents; `μ = 1` gives `m = Θ(n)`.
    pub mu: f64,
    pub delta: f64,
    /// Heavy threshold `t = ⌈n^heavy_delta⌉`.
    pub heavy_delta: f64,
}

impl ConvParams {
    pub fn proof_defaults() -> Self {
        Self { mu: 1.0, delta: 0.5, heavy_delta: 0.125 }
    }
}

impl Default for ConvParams {
    fn default() -> Self {
        Self::proof_defaults()
    }
}

/// Three vectors with `X[i] + Y[j] = Z[i + j]` as the solution condition,
/// 0-based. `X` and `Y` have length `m`, `Z` has length `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriConv {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub z: Vec<u64>,
    /// Filler of `X` and `Y`.
    pub sentinel_xy: u64,
    /// Filler of `Z`; `2·sentinel_xy + 1`, above every sum `X[i] + Y[j]`.
    pub sentinel_z: u64,
}

/// Single-vector form. With `L = 2m` the vector has length `5L`; `X[i]` sits
/// at 1-based position `L+1+i` tagged `+D`, `Y[j]` at `3L+j` tagged `+10D`,
/// `Z[k]` at `4L+1+k` tagged `+11D`, and every other slot holds `100D`.
/// Tags only combine as `X + Y = Z`, and then positions force `i + j = k`.
pub fn tri_conv_to_mono(t: &TriConv) -> Result<ConvThreeSumInstance> {
    let m = t.x.len();
    if t.y.len() != m || t.z.len() != 2 * m {
        return Err(Error::Instance("convolution vectors must have lengths m, m, 2m".into()));
    }
    let top = t.x.iter().chain(&t.y).chain(&t.z).copied().max().unwrap_or(0) as u128;
    let d = 2 * top + 4;
    if 100 * d >= UNIVERSE_LIMIT as u128 {
        return Err(Error::Overflow(format!("tagged convolution universe {}", 100 * d)));
    }
    let d = d as u64;
    let l = 2 * m;
    let mut v = vec![100 * d; 5 * l];
    for (i, &x) in t.x.iter().enumerate() {
        v[l + i] = x + 1 + d;
    }
    for (j, &y) in t.y.iter().enumerate() {
        v[3 * l + j - 1] = y + 1 + 10 * d;
    }
    for (k, &z) in t.z.iter().enumerate() {
        v[4 * l + k] = z + 2 + 11 * d;
    }
    ConvThreeSumInstance::new(v, 100 * d)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConvStats {
    pub modulus: u64,
    pub collisions: u128,
    pub heavy_threshold: usize,
    pub heavy_classes: usize,
    pub heavy_elements: usize,
    /// Ordered pairs examined for heavy elements.
    pub heavy_pairs: u64,
    pub cells: usize,
    pub solver_calls: usize,
    pub max_entry: u64,
    /// `⌈U/m⌉ + 1`; no non-filler entry exceeds it.
    pub entry_bound: u64,
    pub sentinel: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvOutcome {
    pub decision: bool,
    pub witness: Option<SolutionTriple>,
    pub selection: Option<ModulusSelection>,
    pub stats: ConvStats,
}

fn heavy_solutions(elements: &[u64], heavy: &[u64], stats: &mut ConvStats) -> Option<(u64, u64, u64)> {
    let set: HashSet<u64> = elements.iter().copied().collect();
    let mut best: Option<(u64, u64, u64)> = None;
    let mut keep = |t: (u64, u64, u64)| {
        if best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    };
    for &h in heavy {
        for &e in elements {
            stats.heavy_pairs += 2;
            if set.contains(&(h + e)) {
                keep((h, e, h + e));
                keep((e, h, h + e));
            }
            if e < h && set.contains(&(h - e)) {
                keep((e, h - e, h));
            }
        }
    }
    best
}

/// The convolution solver answers whether a single-vector instance has any
/// `i + j = k` with `V[i] + V[j] = V[k]`. No bound on the universe is enforced;
/// entries scale with `U/m`.
pub fn reduce_conv3sum_quadratic<F>(inst: &ThreeSumInstance, mut solver: F, params: &ConvParams) -> Result<ConvOutcome>
where
    F: FnMut(&ConvThreeSumInstance) -> Result<bool>,
{
    check_unit("heavy_delta", params.heavy_delta, true)?;
    let elements = inst.elements();
    let mut stats = ConvStats::default();
    if elements.is_empty() {
        return Ok(ConvOutcome { decision: false, witness: None, selection: None, stats });
    }
    let n = inst.len().max(2) as u64;
    let selection = select_modulus_few_collisions(inst, &HashParams::new(params.mu, params.delta, n)?)?;
    let m = selection.modulus;
    let t = ceil_pow(n, params.heavy_delta)?.max(1) as usize;
    let q = inst.universe().div_ceil(m);
    let sentinel = 4 * q;
    stats.modulus = m;
    stats.collisions = selection.final_score;
    stats.heavy_threshold = t;
    stats.entry_bound = q + 1;
    stats.sentinel = sentinel;

    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for &a in elements {
        classes[(a % m) as usize].push(a);
    }
    let mut heavy = Vec::new();
    for class in classes.iter_mut().filter(|c| c.len() > t) {
        stats.heavy_classes += 1;
        heavy.append(class);
    }
    heavy.sort_unstable();
    stats.heavy_elements = heavy.len();
    if let Some((a, b, c)) = heavy_solutions(elements, &heavy, &mut stats) {
        return Ok(ConvOutcome {
            decision: true,
            witness: SolutionTriple::genuine(a, b, c),
            selection: Some(selection),
            stats,
        });
    }

    let mu = m as usize;
    let depth = classes.iter().map(Vec::len).max().unwrap_or(0).min(t);
    let value = |slot: usize, k: usize, lift: usize| -> Option<u64> {
        let r = k % mu;
        let &a = classes[r].get(slot)?;
        let k = (k + lift) as u64;
        (a >= k).then(|| (a - k) / m)
    };
    for x in 0..depth {
        let xs: Vec<u64> = (0..mu).map(|i| value(x, i, 0).unwrap_or(sentinel)).collect();
        for y in 0..depth {
            let ys: Vec<u64> = (0..mu).map(|j| value(y, j, 0).unwrap_or(sentinel)).collect();
            for z in 0..depth {
                stats.cells += 1;
                let zs: Vec<u64> = (0..2 * mu)
                    .map(|k| value(z, k % mu, k - k % mu).unwrap_or(2 * sentinel + 1))
                    .collect();
                let max_entry = [(&xs, sentinel), (&ys, sentinel), (&zs, 2 * sentinel + 1)]
                    .into_iter()
                    .flat_map(|(v, s)| v.iter().copied().filter(move |&e| e != s))
                    .max();
                let Some(max_entry) = max_entry else { continue };
                stats.max_entry = stats.max_entry.max(max_entry);
                if max_entry > q + 1 {
                    return Err(Error::Invariant(format!("convolution entry {max_entry} above {}", q + 1)));
                }
                let tri = TriConv {
                    x: xs.clone(),
                    y: ys.clone(),
                    z: zs,
                    sentinel_xy: sentinel,
                    sentinel_z: 2 * sentinel + 1,
                };
                stats.solver_calls += 1;
                if solver(&tri_conv_to_mono(&tri)?)? {
                    let w = locate(&tri, m).ok_or_else(|| {
                        Error::Solver(format!("cell ({x}, {y}, {z}) reported a solution that does not exist"))
                    })?;
                    return Ok(ConvOutcome { decision: true, witness: Some(w), selection: Some(selection), stats });
                }
            }
        }
    }
    Ok(ConvOutcome { decision: false, witness: None, selection: Some(selection), stats })
}

/// First `(i, j)` with `X[i] + Y[j] = Z[i+j]`, mapped back to elements.
fn locate(t: &TriConv, m: u64) -> Option<SolutionTriple> {
    for (i, &x) in t.x.iter().enumerate() {
        if x == t.sentinel_xy {
            continue;
        }
        for (j, &y) in t.y.iter().enumerate() {
            if y != t.sentinel_xy && t.z[i + j] == x + y {
                let (a, b) = (x * m + i as u64, y * m + j as u64);
                return SolutionTriple::genuine(a, b, a + b);
            }
        }
    }
    None
}
