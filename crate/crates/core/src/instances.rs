//! Instance types, the seeded generator, trichromatic tagging and the text
//! formats.
//!
//! The universe `[U]` is `{1, …, U}`. Only [`MultisetInstance`] admits the
//! value `0`, because residues `a mod m` of a reduced instance can vanish.

use std::collections::BTreeSet;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Error, Result};

/// Universe bounds must stay below `2^62` so that `a + b` never overflows.
pub const UNIVERSE_LIMIT: u64 = 1 << 62;

fn check_universe(universe: u64) -> Result<()> {
    if universe == 0 || universe >= UNIVERSE_LIMIT {
        return Err(Error::Instance(format!(
            "universe bound {universe} outside [1, 2^62)"
        )));
    }
    Ok(())
}

/// Sorts `values` and checks them against `[1, universe]` and for duplicates.
fn normalize_set(mut values: Vec<u64>, universe: u64, what: &str) -> Result<Vec<u64>> {
    values.sort_unstable();
    for w in values.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Instance(format!("duplicate element {} in {what}", w[0])));
        }
    }
    if let Some(&v) = values.iter().find(|&&v| v == 0 || v > universe) {
        return Err(Error::Instance(format!(
            "element {v} of {what} outside [1, {universe}]"
        )));
    }
    Ok(values)
}

/// A set `A ⊆ [U]`, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreeSumInstance {
    elements: Vec<u64>,
    universe: u64,
}

impl ThreeSumInstance {
    pub fn new(elements: Vec<u64>, universe: u64) -> Result<Self> {
        check_universe(universe)?;
        let elements = normalize_set(elements, universe, "set")?;
        Ok(Self { elements, universe })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: u64) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }
}

/// Three sets `A, B, C ⊆ [U]`; a solution is `a + b = c` with one element
/// from each.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriThreeSumInstance {
    a: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    universe: u64,
}

impl TriThreeSumInstance {
    pub fn new(a: Vec<u64>, b: Vec<u64>, c: Vec<u64>, universe: u64) -> Result<Self> {
        check_universe(universe)?;
        Ok(Self {
            a: normalize_set(a, universe, "A")?,
            b: normalize_set(b, universe, "B")?,
            c: normalize_set(c, universe, "C")?,
            universe,
        })
    }

    /// The monochromatic instance viewed as `(A, A, A)`.
    pub fn from_mono(inst: &ThreeSumInstance) -> Self {
        Self {
            a: inst.elements.clone(),
            b: inst.elements.clone(),
            c: inst.elements.clone(),
            universe: inst.universe,
        }
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn has_empty_part(&self) -> bool {
        self.a.is_empty() || self.b.is_empty() || self.c.is_empty()
    }
}

/// A vector `X ∈ [U]^n`, indexed from 1 in the problem statement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvThreeSumInstance {
    values: Vec<u64>,
    universe: u64,
}

impl ConvThreeSumInstance {
    pub fn new(values: Vec<u64>, universe: u64) -> Result<Self> {
        check_universe(universe)?;
        if values.is_empty() {
            return Err(Error::Instance("convolution instance must be nonempty".into()));
        }
        if let Some(&v) = values.iter().find(|&&v| v == 0 || v > universe) {
            return Err(Error::Instance(format!("entry {v} outside [1, {universe}]")));
        }
        Ok(Self { values, universe })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Sorted `(value, multiplicity)` pairs with values in `[0, U]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultisetInstance {
    entries: Vec<(u64, u64)>,
    universe: u64,
}

impl MultisetInstance {
    pub fn new(entries: Vec<(u64, u64)>, universe: u64) -> Result<Self> {
        check_universe(universe)?;
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Instance("multiset values must be strictly increasing".into()));
            }
        }
        for &(v, k) in &entries {
            if k == 0 {
                return Err(Error::Instance(format!("value {v} has multiplicity 0")));
            }
            if v > universe {
                return Err(Error::Instance(format!("value {v} outside [0, {universe}]")));
            }
        }
        Ok(Self { entries, universe })
    }

    /// Builds the multiset from an unsorted list of values with repetition.
    pub fn from_values(mut values: Vec<u64>, universe: u64) -> Result<Self> {
        values.sort_unstable();
        let mut entries: Vec<(u64, u64)> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some((w, k)) if *w == v => *k += 1,
                _ => entries.push((v, 1)),
            }
        }
        Self::new(entries, universe)
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn distinct_values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    /// Total size counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Anything that can be read as weighted values: the counting kernels and the
/// hashing loop accept sets and multisets alike through this.
pub trait Weighted {
    fn weighted(&self) -> Vec<(u64, u64)>;
    fn universe_bound(&self) -> u64;
}

impl Weighted for ThreeSumInstance {
    fn weighted(&self) -> Vec<(u64, u64)> {
        self.elements.iter().map(|&v| (v, 1)).collect()
    }

    fn universe_bound(&self) -> u64 {
        self.universe
    }
}

impl Weighted for MultisetInstance {
    fn weighted(&self) -> Vec<(u64, u64)> {
        self.entries.clone()
    }

    fn universe_bound(&self) -> u64 {
        self.universe
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolutionKind {
    Genuine,
    Pseudo { modulus: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub kind: SolutionKind,
}

impl SolutionTriple {
    pub fn genuine(a: u64, b: u64, c: u64) -> Option<Self> {
        (a + b == c).then_some(Self { a, b, c, kind: SolutionKind::Genuine })
    }

    /// Genuine if `a + b = c`, pseudo if only `a + b ≡ c (mod m)`.
    pub fn classify(a: u64, b: u64, c: u64, modulus: u64) -> Option<Self> {
        if a + b == c {
            return Self::genuine(a, b, c);
        }
        let m = modulus as u128;
        ((a as u128 + b as u128) % m == c as u128 % m).then_some(Self {
            a,
            b,
            c,
            kind: SolutionKind::Pseudo { modulus },
        })
    }

    pub fn is_genuine(&self) -> bool {
        self.kind == SolutionKind::Genuine
    }
}

/// Uniform draw from `[0, bound)` by rejection on raw 64-bit outputs, so the
/// stream depends only on the ChaCha8 keystream and not on a library's range
/// sampling algorithm.
fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    let reject_under = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        if x >= reject_under {
            return x % bound;
        }
    }
}

/// Seeded instance with `planted` triples `{a, b, a + b}` inserted first and
/// uniform filler after. The PRNG is ChaCha8 keyed by `seed_from_u64(seed)`.
pub fn generate(n: usize, universe: u64, seed: u64, planted: usize) -> Result<ThreeSumInstance> {
    if n == 0 {
        return Err(Error::Param("n must be at least 1".into()));
    }
    check_universe(universe)?;
    if (universe as u128) < 3 * n as u128 {
        return Err(Error::Param(format!("universe {universe} below 3n = {}", 3 * n)));
    }
    if planted * 3 > n {
        return Err(Error::Param(format!("planted {planted} exceeds n/3 for n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    for _ in 0..planted {
        let a = 1 + below(&mut rng, universe - 1);
        let b = 1 + below(&mut rng, universe - a);
        set.extend([a, b, a + b]);
    }
    while set.len() < n {
        set.insert(1 + below(&mut rng, universe));
    }
    ThreeSumInstance::new(set.into_iter().collect(), universe)
}

/// Which part of a trichromatic instance a tagged value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    B,
    C,
}

/// Tags `A + D`, `B + 10D`, `C + 11D` with `D = 4U`.
pub fn tri_to_mono(t: &TriThreeSumInstance) -> Result<ThreeSumInstance> {
    let u = t.universe();
    let d = 4 * u as u128;
    let top = 11 * d + u as u128;
    if top >= UNIVERSE_LIMIT as u128 {
        return Err(Error::Overflow(format!("tagged universe {top} exceeds 2^62")));
    }
    let d = d as u64;
    let mut values = Vec::with_capacity(t.a.len() + t.b.len() + t.c.len());
    values.extend(t.a.iter().map(|&v| v + d));
    values.extend(t.b.iter().map(|&v| v + 10 * d));
    values.extend(t.c.iter().map(|&v| v + 11 * d));
    ThreeSumInstance::new(values, top as u64)
}

/// Inverse of the [`tri_to_mono`] tagging for a universe `u`.
pub fn untag(value: u64, universe: u64) -> Option<(Part, u64)> {
    let d = 4 * universe;
    let (part, base) = match value / d {
        1 => (Part::A, d),
        10 => (Part::B, 10 * d),
        11 => (Part::C, 11 * d),
        _ => return None,
    };
    let v = value - base;
    (1..=universe).contains(&v).then_some((part, v))
}

fn join(values: &[u64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&v.to_string());
    }
    s
}

impl fmt::Display for ThreeSumInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "3SUM {} {}", self.elements.len(), self.universe)?;
        writeln!(f, "{}", join(&self.elements))
    }
}

impl fmt::Display for TriThreeSumInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "TRI3SUM {} {} {} {}",
            self.a.len(),
            self.b.len(),
            self.c.len(),
            self.universe
        )?;
        writeln!(f, "{}", join(&self.a))?;
        writeln!(f, "{}", join(&self.b))?;
        writeln!(f, "{}", join(&self.c))
    }
}

impl fmt::Display for ConvThreeSumInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CONV3SUM {} {}", self.values.len(), self.universe)?;
        writeln!(f, "{}", join(&self.values))
    }
}

/// Any instance that the text format can carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Mono(ThreeSumInstance),
    Tri(TriThreeSumInstance),
    Conv(ConvThreeSumInstance),
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Mono(x) => x.fmt(f),
            Instance::Tri(x) => x.fmt(f),
            Instance::Conv(x) => x.fmt(f),
        }
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(line_text: &str, line: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line_text.char_indices().chain(std::iter::once((line_text.len(), ' '))) {
        if ch == ' ' || ch == '\t' || ch == '\r' {
            if let Some(s) = start.take() {
                out.push(Token { text: &line_text[s..i], line, column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn number(tok: &Token<'_>) -> Result<u64> {
    tok.text
        .parse::<u64>()
        .map_err(|_| parse_error(tok.line, tok.column, format!("expected an integer, found '{}'", tok.text)))
}

/// Reads one data line of `count` values checked against `[lo, universe]`,
/// rejecting repeats when `distinct` is set.
fn data_line(
    lines: &[&str],
    index: usize,
    count: usize,
    lo: u64,
    universe: u64,
    distinct: bool,
) -> Result<Vec<u64>> {
    let line_no = index + 1;
    let text = lines.get(index).copied().unwrap_or("");
    let toks = tokens(text, line_no);
    if toks.len() != count {
        let column = toks.get(count).map_or(text.len() + 1, |t| t.column);
        return Err(parse_error(
            line_no,
            column,
            format!("expected {count} values, found {}", toks.len()),
        ));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for tok in &toks {
        let v = number(tok)?;
        if v < lo || v > universe {
            return Err(parse_error(
                tok.line,
                tok.column,
                format!("value {v} outside [{lo}, {universe}]"),
            ));
        }
        if distinct && !seen.insert(v) {
            return Err(parse_error(tok.line, tok.column, format!("duplicate element {v}")));
        }
        out.push(v);
    }
    Ok(out)
}

fn header_numbers(toks: &[Token<'_>], expected: usize) -> Result<Vec<u64>> {
    if toks.len() != expected + 1 {
        let column = toks.last().map_or(1, |t| t.column);
        return Err(parse_error(
            1,
            column,
            format!("header '{}' takes {expected} numbers", toks[0].text),
        ));
    }
    toks[1..].iter().map(number).collect()
}

fn count_of(v: u64, tok: &Token<'_>) -> Result<usize> {
    usize::try_from(v).map_err(|_| parse_error(tok.line, tok.column, "count too large"))
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance> {
        let lines: Vec<&str> = text.split('\n').collect();
        let head = tokens(lines[0], 1);
        let Some(kind) = head.first() else {
            return Err(parse_error(1, 1, "missing header"));
        };
        let (instance, used) = match kind.text {
            "3SUM" => {
                let h = header_numbers(&head, 2)?;
                let n = count_of(h[0], &head[1])?;
                check_header_universe(h[1], &head[2])?;
                let values = data_line(&lines, 1, n, 1, h[1], true)?;
                (Instance::Mono(ThreeSumInstance::new(values, h[1])?), 2)
            }
            "TRI3SUM" => {
                let h = header_numbers(&head, 4)?;
                check_header_universe(h[3], &head[4])?;
                let mut parts = Vec::new();
                for (i, tok) in head[1..4].iter().enumerate() {
                    let n = count_of(h[i], tok)?;
                    parts.push(data_line(&lines, 1 + i, n, 1, h[3], true)?);
                }
                let c = parts.pop().unwrap_or_default();
                let b = parts.pop().unwrap_or_default();
                let a = parts.pop().unwrap_or_default();
                (Instance::Tri(TriThreeSumInstance::new(a, b, c, h[3])?), 4)
            }
            "CONV3SUM" => {
                let h = header_numbers(&head, 2)?;
                let n = count_of(h[0], &head[1])?;
                check_header_universe(h[1], &head[2])?;
                if n == 0 {
                    return Err(parse_error(1, head[1].column, "convolution length must be positive"));
                }
                let values = data_line(&lines, 1, n, 1, h[1], false)?;
                (Instance::Conv(ConvThreeSumInstance::new(values, h[1])?), 2)
            }
            other => {
                return Err(parse_error(1, kind.column, format!("unknown header '{other}'")));
            }
        };
        for (i, line) in lines.iter().enumerate().skip(used) {
            if let Some(tok) = tokens(line, i + 1).first() {
                return Err(parse_error(tok.line, tok.column, "unexpected trailing content"));
            }
        }
        Ok(instance)
    }
}

fn check_header_universe(u: u64, tok: &Token<'_>) -> Result<()> {
    if u == 0 || u >= UNIVERSE_LIMIT {
        return Err(parse_error(tok.line, tok.column, format!("universe bound {u} outside [1, 2^62)")));
    }
    Ok(())
}

impl ThreeSumInstance {
    pub fn parse(text: &str) -> Result<Self> {
        match Instance::parse(text)? {
            Instance::Mono(x) => Ok(x),
            _ => Err(parse_error(1, 1, "expected a 3SUM header")),
        }
    }
}
