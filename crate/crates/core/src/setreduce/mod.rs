//! 3SUM through offline Set Disjointness and Set Intersection.
//!
//! After a dominance partition `A_1, …, A_g` and a modulus `m` with few
//! pseudo-solutions, every element `a ≡ x·r − y (mod m)` with `r = ⌈√m⌉`
//! becomes a query `B_{j,x} ∩ C_{k,y}` where `B_{j,x} = {(b + x·r) mod m}`
//! and `C_{k,y} = {(c + y) mod m}`. A common element `e` means
//! `a + b ≡ c (mod m)` for the `b` and `c` behind it.

mod build;
mod drivers;
mod split;

pub use build::{
    build_setdisjointness, build_setintersection, decompose, recover_and_decide, Declared, RecoveryContext,
    RecoveryOutcome, SetBuild, SetReduceParams,
};
pub use drivers::{solve_3sum_via_setdisjointness, solve_3sum_via_setintersection, DriverOutcome};
pub use split::{split_intersection_to_disjointness, SplitInstance};

use std::fmt::Write as _;

use crate::{Error, Result};

/// A query between two sets of the family, tagged with the group triple and
/// the element `a ∈ A_i` it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetQuery {
    pub left: usize,
    pub right: usize,
    pub triple: (usize, usize, usize),
    pub a: u64,
}

/// A family of sorted sets over `[1, universe]` and the queries on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetQueryInstance {
    pub universe: u64,
    pub sets: Vec<Vec<u64>>,
    pub queries: Vec<SetQuery>,
    /// Upper bound on every set size.
    pub size_bound: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column: 1, message: message.into() }
}

fn numbers<T: std::str::FromStr>(text: &str, line: usize) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|t| t.parse::<T>().map_err(|_| parse_err(line, format!("bad number `{t}`"))))
        .collect()
}

impl SetQueryInstance {
    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.sets.iter().enumerate() {
            if s.len() > self.size_bound {
                return Err(Error::Invariant(format!("set {i} has {} > {} elements", s.len(), self.size_bound)));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&e| e == 0 || e > self.universe) {
                return Err(Error::Invariant(format!("set {i} is not a sorted subset of [1, {}]", self.universe)));
            }
        }
        for (qi, q) in self.queries.iter().enumerate() {
            if q.left >= self.sets.len() || q.right >= self.sets.len() {
                return Err(Error::Invariant(format!("query {qi} refers to a missing set")));
            }
        }
        Ok(())
    }

    /// `SETFAM N U s`, one line per set, `QUERIES q`, then one
    /// `left right i j k a` line per query.
    pub fn serialize(&self) -> String {
        let mut out = format!("SETFAM {} {} {}\n", self.sets.len(), self.universe, self.size_bound);
        for s in &self.sets {
            let line: Vec<String> = s.iter().map(u64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        let _ = writeln!(out, "QUERIES {}", self.queries.len());
        for q in &self.queries {
            let (i, j, k) = q.triple;
            let _ = writeln!(out, "{} {} {i} {j} {k} {}", q.left, q.right, q.a);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let header = lines.first().ok_or_else(|| parse_err(1, "empty input"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 4 || head[0] != "SETFAM" {
            return Err(parse_err(1, "expected `SETFAM <N> <U> <s>`"));
        }
        let nums: Vec<u64> = numbers(&head[1..].join(" "), 1)?;
        let (n, universe, size_bound) = (nums[0] as usize, nums[1], nums[2] as usize);
        if lines.len() < n + 2 {
            return Err(parse_err(lines.len() + 1, format!("expected {n} set lines")));
        }
        let mut sets = Vec::with_capacity(n);
        for (i, line) in lines[1..=n].iter().enumerate() {
            sets.push(numbers::<u64>(line, i + 2)?);
        }
        let qline = n + 1;
        let qhead: Vec<&str> = lines[qline].split_whitespace().collect();
        if qhead.len() != 2 || qhead[0] != "QUERIES" {
            return Err(parse_err(qline + 1, "expected `QUERIES <q>`"));
        }
        let q: usize = qhead[1].parse().map_err(|_| parse_err(qline + 1, "bad query count"))?;
        let body = &lines[qline + 1..];
        if body.len() != q {
            return Err(parse_err(qline + 2, format!("expected {q} query lines, found {}", body.len())));
        }
        let mut queries = Vec::with_capacity(q);
        for (i, line) in body.iter().enumerate() {
            let v: Vec<u64> = numbers(line, qline + 2 + i)?;
            if v.len() != 6 {
                return Err(parse_err(qline + 2 + i, "a query has six fields"));
            }
            queries.push(SetQuery {
                left: v[0] as usize,
                right: v[1] as usize,
                triple: (v[2] as usize, v[3] as usize, v[4] as usize),
                a: v[5],
            });
        }
        let inst = Self { universe, sets, queries, size_bound };
        inst.validate().map_err(|e| parse_err(1, e.to_string()))?;
        Ok(inst)
    }
}

/// One `<query-index>: e1 e2 …` line per query.
pub fn format_answers(answers: &[Vec<u64>]) -> String {
    let mut out = String::new();
    for (i, a) in answers.iter().enumerate() {
        let _ = write!(out, "{i}:");
        for e in a {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

/// Reads answers for exactly `queries` queries, each listed once.
pub fn parse_answers(text: &str, queries: usize) -> Result<Vec<Vec<u64>>> {
    let mut out: Vec<Option<Vec<u64>>> = vec![None; queries];
    for (ln, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (idx, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::MalformedAnswer { query: ln, message: format!("line {} lacks `:`", ln + 1) })?;
        let q: usize = idx.trim().parse().map_err(|_| Error::MalformedAnswer {
            query: ln,
            message: format!("bad query index `{}`", idx.trim()),
        })?;
        if q >= queries {
            return Err(Error::MalformedAnswer { query: q, message: format!("only {queries} queries exist") });
        }
        if out[q].is_some() {
            return Err(Error::MalformedAnswer { query: q, message: "answered twice".into() });
        }
        let elems = rest
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<Vec<u64>, _>>()
            .map_err(|_| Error::MalformedAnswer { query: q, message: "bad element".into() })?;
        out[q] = Some(elems);
    }
    out.into_iter()
        .enumerate()
        .map(|(q, a)| a.ok_or_else(|| Error::MalformedAnswer { query: q, message: "no answer".into() }))
        .collect()
}

/// Intersection of two sorted lists.
pub(crate) fn intersect(x: &[u64], y: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
