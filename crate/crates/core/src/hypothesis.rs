//! Exact checks of the three sufficient conditions for fractional
//! ID-`[a,b]`-factor-criticality:
//!
//! * order: `n >= ((a+2b)(2a+2b-3)+1) / b`
//! * minimum degree: `δ(G) >= bn/(a+2b) + a`
//! * neighborhood union: `|N(x) ∪ N(y)| >= (a+b)n/(a+2b)` for all
//!   nonadjacent `x != y`
//!
//! Every comparison is done on integers after multiplying through by the
//! positive denominator, so off-by-one behavior at the thresholds is exact.
//! A complete graph has no nonadjacent pair and satisfies the neighborhood
//! condition vacuously.
//!
//! Also here: the `a = b = k` specialization and the two consequences of
//! the conditions that hold for every independent `X` (`|X| <= bn/(a+2b)`
//! and `δ(G - X) >= a`), which are checked on real inputs as instrumentation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::FactorParams;
use crate::graph::{pairs, Graph, VertexSet};

/// Integer slack of each condition; a condition holds iff its margin is
/// nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisMargins {
    /// `bn - ((a+2b)(2a+2b-3)+1)`
    pub order: i64,
    /// `(a+2b)δ(G) - (bn + a(a+2b))`
    pub min_degree: i64,
    /// `(a+2b)·min|N(x) ∪ N(y)| - (a+b)n`; `None` without nonadjacent pairs.
    pub neighborhood: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub params: FactorParams,
    pub n: usize,
    pub min_degree: usize,
    pub order_ok: bool,
    pub min_degree_ok: bool,
    pub neighborhood_ok: bool,
    /// Lexicographically first nonadjacent pair with the smallest
    /// neighborhood union.
    pub worst_pair: Option<(usize, usize)>,
    pub worst_union: Option<usize>,
    pub margins: HypothesisMargins,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.order_ok && self.min_degree_ok && self.neighborhood_ok
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAILS" };
        writeln!(f, "parameters {} on n = {}", self.params, self.n)?;
        writeln!(f, "  order          {:5}  margin {}", mark(self.order_ok), self.margins.order)?;
        writeln!(
            f,
            "  min degree     {:5}  margin {} (delta(G) = {})",
            mark(self.min_degree_ok),
            self.margins.min_degree,
            self.min_degree
        )?;
        match (self.worst_pair, self.worst_union, self.margins.neighborhood) {
            (Some((x, y)), Some(u), Some(m)) => writeln!(
                f,
                "  neighborhood   {:5}  margin {} (worst pair {x},{y} with |N(x) u N(y)| = {u})",
                mark(self.neighborhood_ok),
                m
            ),
            _ => writeln!(f, "  neighborhood   ok     no nonadjacent pair"),
        }
    }
}

fn weight(params: FactorParams) -> i64 {
    params.ai() + 2 * params.bi()
}

/// Right-hand side of the order condition after multiplying by `b`.
pub fn order_threshold(params: FactorParams) -> i64 {
    let (a, b) = (params.ai(), params.bi());
    weight(params) * (2 * a + 2 * b - 3) + 1
}

pub fn order_ok(params: FactorParams, n: usize) -> bool {
    params.bi() * n as i64 >= order_threshold(params)
}

/// Smallest order satisfying the order condition.
pub fn min_order(params: FactorParams) -> usize {
    let b = params.bi();
    ((order_threshold(params) + b - 1) / b) as usize
}

/// `(a+2b)δ - (bn + a(a+2b))`
pub fn min_degree_margin(params: FactorParams, n: usize, delta: usize) -> i64 {
    let w = weight(params);
    w * delta as i64 - (params.bi() * n as i64 + params.ai() * w)
}

/// `(a+2b)u - (a+b)n`
pub fn neighborhood_margin(params: FactorParams, n: usize, union: usize) -> i64 {
    weight(params) * union as i64 - (params.ai() + params.bi()) * n as i64
}

/// Nonadjacent pair with the smallest `|N(x) ∪ N(y)|`, lexicographic tie
/// break.
pub fn worst_nonadjacent_pair(g: &Graph) -> Option<((usize, usize), usize)> {
    pairs(g.order())
        .filter(|&(x, y)| !g.has_edge(x, y))
        .map(|(x, y)| ((x, y), g.neighborhood_union_len(x, y)))
        .min_by_key(|&(pair, len)| (len, pair))
}

pub fn check_theorem1_hypotheses(g: &Graph, params: FactorParams) -> Result<HypothesisReport> {
    let n = g.order();
    let delta = g.min_degree()?;
    let worst = worst_nonadjacent_pair(g);
    let margins = HypothesisMargins {
        order: params.bi() * n as i64 - order_threshold(params),
        min_degree: min_degree_margin(params, n, delta),
        neighborhood: worst.map(|(_, len)| neighborhood_margin(params, n, len)),
    };
    Ok(HypothesisReport {
        params,
        n,
        min_degree: delta,
        order_ok: margins.order >= 0,
        min_degree_ok: margins.min_degree >= 0,
        neighborhood_ok: margins.neighborhood.is_none_or(|m| m >= 0),
        worst_pair: worst.map(|(p, _)| p),
        worst_union: worst.map(|(_, len)| len),
        margins,
    })
}

/// The conditions specialized to `a = b = k`:
/// `n >= 12k - 8`, `3δ >= n + 3k`, `3|N(x) ∪ N(y)| >= 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryThresholds {
    pub k: u32,
    pub min_order: usize,
}

impl CorollaryThresholds {
    pub fn degree_ok(&self, n: usize, min_degree: usize) -> bool {
        3 * min_degree >= n + 3 * self.k as usize
    }

    pub fn neighborhood_ok(&self, n: usize, union: usize) -> bool {
        3 * union >= 2 * n
    }

    pub fn order_ok(&self, n: usize) -> bool {
        n >= self.min_order
    }

    /// All three conditions on a concrete graph.
    pub fn check(&self, g: &Graph) -> Result<(bool, bool, bool)> {
        let n = g.order();
        let delta = g.min_degree()?;
        let nbhd = worst_nonadjacent_pair(g).is_none_or(|(_, len)| self.neighborhood_ok(n, len));
        Ok((self.order_ok(n), self.degree_ok(n, delta), nbhd))
    }
}

impl fmt::Display for CorollaryThresholds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k = {}: n >= {}, 3*delta(G) >= n + {}, 3*|N(x) u N(y)| >= 2n",
            self.k,
            self.min_order,
            3 * self.k
        )
    }
}

pub fn corollary_thresholds(k: u32) -> Result<CorollaryThresholds> {
    let params = FactorParams::new(k, k)
        .map_err(|_| Error::InvalidInput(format!("k must be at least 1, got {k}")))?;
    Ok(CorollaryThresholds {
        k,
        min_order: min_order(params),
    })
}

/// Instrumentation for the two consequences of the conditions on a given
/// independent set `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub x: VertexSet,
    /// `bn - (a+2b)|X|`, nonnegative when `|X| <= bn/(a+2b)`.
    pub independent_set_margin: i64,
    /// `δ(G - X)`.
    pub residual_min_degree: usize,
}

/// Checks `(a+2b)|X| <= bn` and `δ(G - X) >= a` for an independent `X` of a
/// graph meeting all three conditions. Both are proved consequences, so a
/// failure is reported as [`Error::Inconsistency`].
pub fn check_proof_claims(g: &Graph, params: FactorParams, x: &VertexSet) -> Result<ClaimReport> {
    if !g.is_independent(x)? {
        return Err(Error::InvalidInput(format!("{x} is not an independent set")));
    }
    let hyp = check_theorem1_hypotheses(g, params)?;
    if !hyp.all_hold() {
        return Err(Error::Precondition(
            "graph does not satisfy all three hypotheses".into(),
        ));
    }
    let n = g.order() as i64;
    let independent_set_margin = params.bi() * n - weight(params) * x.len() as i64;
    if independent_set_margin < 0 {
        return Err(Error::Inconsistency(format!(
            "independent set {x} has {} vertices, above bn/(a+2b) = {}/{}",
            x.len(),
            params.bi() * n,
            weight(params)
        )));
    }
    let residual = g.delete_vertices(x)?.graph;
    let residual_min_degree = residual
        .min_degree()
        .map_err(|_| Error::Inconsistency(format!("deleting {x} leaves no vertices")))?;
    if (residual_min_degree as i64) < params.ai() {
        return Err(Error::Inconsistency(format!(
            "delta(G - {x}) = {residual_min_degree} is below a = {}",
            params.a()
        )));
    }
    Ok(ClaimReport {
        x: x.clone(),
        independent_set_margin,
        residual_min_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: u32, b: u32) -> FactorParams {
        FactorParams::new(a, b).unwrap()
    }

    #[test]
    fn complete_graphs_pass_for_unit_parameters() {
        for n in 4..=10 {
            let r = check_theorem1_hypotheses(&Graph::complete(n), p(1, 1)).unwrap();
            assert!(r.all_hold(), "K{n}");
            assert_eq!(r.worst_pair, None);
            assert_eq!(r.margins.order, n as i64 - 4);
            assert_eq!(r.margins.min_degree, 3 * (n as i64 - 1) - (n as i64 + 3));
        }
        let r = check_theorem1_hypotheses(&Graph::complete(3), p(1, 1)).unwrap();
        assert!(!r.order_ok);
    }

    #[test]
    fn thresholds_by_hand() {
        // (1,2): 5*3+1 = 16, so n >= 8
        assert_eq!(order_threshold(p(1, 2)), 16);
        assert_eq!(min_order(p(1, 2)), 8);
        assert!(order_ok(p(1, 2), 8));
        assert!(!order_ok(p(1, 2), 7));
        // (2,3): 8*7+1 = 57, 3n >= 57 -> n >= 19
        assert_eq!(min_order(p(2, 3)), 19);
    }

    #[test]
    fn neighborhood_condition_on_cycle() {
        // C6, a=b=1: vertices at distance two share a neighbor, |N u N| = 3,
        // and 3*3 = 9 < 2*6 = 12
        let c6 = Graph::cycle(6).unwrap();
        let r = check_theorem1_hypotheses(&c6, p(1, 1)).unwrap();
        assert!(!r.neighborhood_ok);
        assert_eq!(r.worst_pair, Some((0, 2)));
        assert_eq!(r.worst_union, Some(3));
        assert_eq!(r.margins.neighborhood, Some(9 - 12));
    }

    #[test]
    fn rejects_empty_graph() {
        assert!(check_theorem1_hypotheses(&Graph::empty(0), p(1, 1)).is_err());
    }

    #[test]
    fn corollary_values() {
        assert_eq!(corollary_thresholds(1).unwrap().min_order, 4);
        assert_eq!(corollary_thresholds(2).unwrap().min_order, 16);
        assert_eq!(corollary_thresholds(3).unwrap().min_order, 28);
        assert!(corollary_thresholds(0).is_err());
    }

    #[test]
    fn corollary_agrees_with_general_check() {
        for n in 4..=6 {
            for mask in 0u64..1 << (n * (n - 1) / 2) {
                let g = Graph::from_pair_mask(n, mask);
                if g.min_degree().unwrap() == 0 {
                    continue;
                }
                for k in 1..=2 {
                    let r = check_theorem1_hypotheses(&g, p(k, k)).unwrap();
                    let c = corollary_thresholds(k).unwrap().check(&g).unwrap();
                    assert_eq!((r.order_ok, r.min_degree_ok, r.neighborhood_ok), c);
                }
            }
        }
    }

    #[test]
    fn claims_on_k4() {
        let k4 = Graph::complete(4);
        let r = check_proof_claims(&k4, p(1, 1), &VertexSet::from([0])).unwrap();
        assert_eq!(r.independent_set_margin, 4 - 3);
        assert_eq!(r.residual_min_degree, 2);
        let r = check_proof_claims(&k4, p(1, 1), &VertexSet::new()).unwrap();
        assert_eq!(r.residual_min_degree, 3);
    }

    #[test]
    fn claims_reject_bad_input() {
        let k4 = Graph::complete(4);
        assert!(matches!(
            check_proof_claims(&k4, p(1, 1), &VertexSet::from([0, 1])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            check_proof_claims(&Graph::path(4), p(1, 1), &VertexSet::from([0])),
            Err(Error::Precondition(_))
        ));
    }
}
