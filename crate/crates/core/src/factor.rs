//! Fractional `[a,b]`-factors.
//!
//! An indicator function `h: E(G) -> [0,1]` is a fractional `[a,b]`-factor
//! when every vertex's incident sum lies in `[a,b]`. Existence is decided
//! two independent ways:
//!
//! * [`has_fractional_factor_bruteforce`] scans every `S ⊆ V` and evaluates
//!   `δ(S,T) = b|S| + d_{G-S}(T) - a|T|` with `T = {x ∉ S : d_{G-S}(x) <= a}`;
//!   a factor exists iff no `S` drives this below zero.
//! * [`find_fractional_factor`] builds the bipartite double cover of `G`
//!   (vertices `v+`, `v-`; arcs `u+ -> v-` and `v+ -> u-` per edge), bounds
//!   every `source -> v+` and `v- -> sink` arc by `[a,b]` and looks for a
//!   feasible integral flow. Averaging the two copies of each edge gives a
//!   half-integral `h`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSet};

/// Exact rational used for indicator values and vertex sums.
pub type Rational = Ratio<i64>;

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

/// Hard ceiling for the subset scan: masks are `u64` and 2^40 subsets is
/// already far beyond any sensible run.
const BRUTE_FORCE_CEILING: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorParams {
    a: u32,
    b: u32,
}

impl FactorParams {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a < 1 || a > b {
            return Err(Error::InvalidInput(format!(
                "factor parameters must satisfy 1 <= a <= b, got a = {a}, b = {b}"
            )));
        }
        Ok(FactorParams { a, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub(crate) fn ai(&self) -> i64 {
        i64::from(self.a)
    }

    pub(crate) fn bi(&self) -> i64 {
        i64::from(self.b)
    }
}

impl fmt::Display for FactorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// A set `S` together with its induced `T` and the value `δ(S,T) <= -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub s: VertexSet,
    pub t: VertexSet,
    pub delta: i64,
}

impl ViolationCertificate {
    /// Re-evaluates `δ` for the stored `S` and checks it reproduces the
    /// stored `T` and value.
    pub fn verify(&self, g: &Graph, params: FactorParams) -> Result<bool> {
        let (t, delta) = delta_st(g, params, &self.s)?;
        Ok(t == self.t && delta == self.delta && delta <= -1)
    }

    pub fn relabel(&self, new_to_old: &[usize]) -> ViolationCertificate {
        ViolationCertificate {
            s: self.s.relabel(new_to_old),
            t: self.t.relabel(new_to_old),
            delta: self.delta,
        }
    }
}

impl fmt::Display for ViolationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S = {}, T = {}, delta = {}", self.s, self.t, self.delta)
    }
}

/// `T` and `δ(S,T)` for a given `S`. `T` is always derived from `S`.
pub fn delta_st(g: &Graph, params: FactorParams, s: &VertexSet) -> Result<(VertexSet, i64)> {
    g.check_set(s)?;
    let a = params.ai();
    let mut t = VertexSet::new();
    let mut degree_sum = 0i64;
    for x in (0..g.order()).filter(|x| !s.contains(*x)) {
        let d = g.neighbors(x).iter().filter(|w| !s.contains(**w)).count() as i64;
        if d <= a {
            t.insert(x);
            degree_sum += d;
        }
    }
    let delta = params.bi() * s.len() as i64 + degree_sum - a * t.len() as i64;
    Ok((t, delta))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BruteForceVerdict {
    Feasible,
    Infeasible(ViolationCertificate),
}

impl BruteForceVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BruteForceVerdict::Feasible)
    }
}

/// Sort key realizing the certificate order: most negative δ, then fewest
/// vertices, then lexicographically smallest sorted member list.
fn certificate_key(delta: i64, mask: u64) -> (i64, u32, Vec<usize>) {
    let members = (0..64).filter(|v| mask >> v & 1 == 1).collect();
    (delta, mask.count_ones(), members)
}

/// Evaluates `δ(S,T)` for all `2^n` subsets `S`. Returns `Feasible` if no
/// subset has `δ < 0`; otherwise the certificate with the most negative `δ`,
/// ties going to the smallest `|S|` and then the lexicographically smallest
/// `S`.
pub fn has_fractional_factor_bruteforce(
    g: &Graph,
    params: FactorParams,
    limit: usize,
) -> Result<BruteForceVerdict> {
    let n = g.order();
    if n > limit.min(BRUTE_FORCE_CEILING) {
        return Err(Error::ResourceLimit {
            what: "brute-force subset scan",
            actual: n,
            limit: limit.min(BRUTE_FORCE_CEILING),
            hint: "; use the flow solver instead",
        });
    }
    let adj = g.adjacency_masks().expect("order checked above");
    let (a, b) = (params.ai(), params.bi());
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };

    let mut best: Option<(i64, u64)> = None;
    for s in 0..=full {
        let rest = full & !s;
        let mut delta = b * i64::from(s.count_ones());
        let mut r = rest;
        while r != 0 {
            let x = r.trailing_zeros() as usize;
            r &= r - 1;
            let d = i64::from((adj[x] & rest).count_ones());
            if d <= a {
                delta += d - a;
            }
        }
        if delta < 0 {
            let better = match best {
                None => true,
                Some((bd, bs)) => certificate_key(delta, s) < certificate_key(bd, bs),
            };
            if better {
                best = Some((delta, s));
            }
        }
    }

    match best {
        None => Ok(BruteForceVerdict::Feasible),
        Some((_, mask)) => {
            let s = VertexSet::from_mask(mask);
            let (t, delta) = delta_st(g, params, &s)?;
            Ok(BruteForceVerdict::Infeasible(ViolationCertificate { s, t, delta }))
        }
    }
}

/// An indicator function: one exact value per edge `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalAssignment {
    values: BTreeMap<(usize, usize), Rational>,
}

impl FractionalAssignment {
    /// Values outside `[0,1]` and edges given twice are rejected; whether the
    /// keys match a particular graph is checked by [`validate_assignment`].
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Rational)>,
    {
        let mut values = BTreeMap::new();
        for ((u, v), h) in entries {
            let key = (u.min(v), u.max(v));
            if h < Rational::from_integer(0) || h > Rational::from_integer(1) {
                return Err(Error::InvalidInput(format!(
                    "h({}, {}) = {h} lies outside [0,1]",
                    key.0, key.1
                )));
            }
            if values.insert(key, h).is_some() {
                return Err(Error::InvalidInput(format!(
                    "edge {} {} assigned twice",
                    key.0, key.1
                )));
            }
        }
        Ok(FractionalAssignment { values })
    }

    /// Same value on every edge of `g`.
    pub fn constant(g: &Graph, h: Rational) -> Result<Self> {
        FractionalAssignment::new(g.edges().map(|e| (e, h)))
    }

    pub fn get(&self, u: usize, v: usize) -> Option<Rational> {
        self.values.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Rational)> + '_ {
        self.values.iter().map(|(&k, &h)| (k, h))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Edges with `h(e) > 0`.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.iter()
            .filter(|(_, h)| *h > Rational::from_integer(0))
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_half_integral(&self) -> bool {
        self.values.values().all(|h| *h.denom() == 1 || *h.denom() == 2)
    }

    /// One line per edge, `u v p/q`, always with an explicit denominator.
    pub fn to_text(&self) -> String {
        self.iter()
            .map(|((u, v), h)| format!("{u} {v} {}/{}\n", h.numer(), h.denom()))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                [u, v, h] => u
                    .parse::<usize>()
                    .ok()
                    .zip(v.parse::<usize>().ok())
                    .zip(parse_rational(h)),
                _ => None,
            };
            match parsed {
                Some((e, h)) => entries.push((e, h)),
                None => return Err(Error::parse_at(i + 1, format!("expected `u v p/q`, found `{line}`"))),
            }
        }
        FractionalAssignment::new(entries)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.parse().ok()?, q.parse().ok()?);
            (q != 0).then(|| Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Per-vertex outcome of [`validate_assignment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentCheck {
    pub valid: bool,
    /// `Σ_{e ∋ x} h(e)` for every vertex `x`.
    pub sums: Vec<Rational>,
}

impl AssignmentCheck {
    /// Vertices whose sum falls outside `[a,b]`.
    pub fn violations(&self, params: FactorParams) -> Vec<usize> {
        let (a, b) = (Rational::from(params.ai()), Rational::from(params.bi()));
        self.sums
            .iter()
            .enumerate()
            .filter(|(_, s)| **s < a || **s > b)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Exact check that `h` is keyed by exactly `E(g)` and every vertex sum
/// lies in `[a,b]`.
pub fn validate_assignment(
    g: &Graph,
    params: FactorParams,
    h: &FractionalAssignment,
) -> Result<AssignmentCheck> {
    if let Some(((u, v), _)) = h.iter().find(|((u, v), _)| !g.has_edge(*u, *v)) {
        return Err(Error::InvalidInput(format!("h assigns a value to non-edge {u} {v}")));
    }
    if let Some((u, v)) = g.edges().find(|(u, v)| h.get(*u, *v).is_none()) {
        return Err(Error::InvalidInput(format!("h has no value for edge {u} {v}")));
    }
    let mut sums = vec![Rational::from_integer(0); g.order()];
    for ((u, v), x) in h.iter() {
        sums[u] += x;
        sums[v] += x;
    }
    let check = AssignmentCheck { valid: true, sums };
    let valid = check.violations(params).is_empty();
    Ok(AssignmentCheck { valid, ..check })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorOutcome {
    Feasible(FractionalAssignment),
    /// No factor exists. The certificate is present when the graph was
    /// small enough for the brute-force oracle to produce one.
    Infeasible(Option<ViolationCertificate>),
}

impl FactorOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FactorOutcome::Feasible(_))
    }
}

/// Builds the double-cover network. Node layout: `v+ = v`, `v- = n + v`,
/// source `2n`, sink `2n + 1`. Returns the network and, per edge of `g`
/// in [`Graph::edges`] order, the arc ids of `u+ -> v-` and `v+ -> u-`.
/// Cover arcs flagged in `forced` get lower bound 1.
fn double_cover_network(
    g: &Graph,
    params: FactorParams,
    forced: &[[bool; 2]],
) -> (FlowNetwork, Vec<[usize; 2]>) {
    let n = g.order();
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    let (a, b) = (params.ai(), params.bi());
    for v in 0..n {
        net.add_arc(source, v, a, b);
        net.add_arc(n + v, sink, a, b);
    }
    let edge_arcs = g
        .edges()
        .enumerate()
        .map(|(i, (u, v))| {
            let lower = |k: usize| i64::from(forced.get(i).is_some_and(|f| f[k]));
            [net.add_arc(u, n + v, lower(0), 1), net.add_arc(v, n + u, lower(1), 1)]
        })
        .collect();
    (net, edge_arcs)
}

fn solve_cover(g: &Graph, params: FactorParams, forced: &[[bool; 2]]) -> Option<Vec<[i64; 2]>> {
    let n = g.order();
    let (net, edge_arcs) = double_cover_network(g, params, forced);
    let flow = net.feasible_flow(2 * n, 2 * n + 1)?;
    Some(edge_arcs.iter().map(|&[f, r]| [flow[f], flow[r]]).collect())
}

/// Flags one carrying cover arc per edge that currently has positive weight.
fn carrying_arcs(cover: &[[i64; 2]]) -> Vec<[bool; 2]> {
    cover
        .iter()
        .map(|&[f, r]| [f > 0, f == 0 && r > 0])
        .collect()
}

/// Grows the support of a feasible cover flow edge by edge: a zero edge is
/// made positive whenever that is possible while every edge that is already
/// positive stays positive. The result has inclusion-maximal support among
/// half-integral witnesses reachable this way.
fn spread_support(g: &Graph, params: FactorParams, mut cover: Vec<[i64; 2]>) -> Vec<[i64; 2]> {
    for i in 0..cover.len() {
        if cover[i] != [0, 0] {
            continue;
        }
        for k in 0..2 {
            let mut forced = carrying_arcs(&cover);
            forced[i][k] = true;
            if let Some(next) = solve_cover(g, params, &forced) {
                cover = next;
                break;
            }
        }
    }
    cover
}

/// Polynomial-time decision plus half-integral witness. When infeasible
/// and `g` has at most `brute_force_limit` vertices, a certificate from the
/// subset oracle is attached.
///
/// The witness has maximal support in the sense of `spread_support`, so
/// e.g. an even cycle gets `h ≡ 1/2` rather than a perfect matching.
pub fn find_fractional_factor(
    g: &Graph,
    params: FactorParams,
    brute_force_limit: usize,
) -> Result<FactorOutcome> {
    let n = g.order();
    match solve_cover(g, params, &[]) {
        Some(cover) => {
            let cover = spread_support(g, params, cover);
            let h = g
                .edges()
                .zip(&cover)
                .map(|(e, &[f, r])| (e, Rational::new(f + r, 2)));
            Ok(FactorOutcome::Feasible(FractionalAssignment::new(h)?))
        }
        None if n <= brute_force_limit.min(BRUTE_FORCE_CEILING) => {
            match has_fractional_factor_bruteforce(g, params, brute_force_limit)? {
                BruteForceVerdict::Infeasible(cert) => Ok(FactorOutcome::Infeasible(Some(cert))),
                BruteForceVerdict::Feasible => Err(Error::Inconsistency(
                    "flow solver found no factor but every subset has delta >= 0".into(),
                )),
            }
        }
        None => Ok(FactorOutcome::Infeasible(None)),
    }
}

/// Feasibility only, without witness or certificate.
pub fn has_fractional_factor(g: &Graph, params: FactorParams) -> bool {
    solve_cover(g, params, &[]).is_some()
}
