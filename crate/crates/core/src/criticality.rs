//! Fractional ID-`[a,b]`-factor-criticality: `G - I` must have a fractional
//! `[a,b]`-factor for *every* independent set `I`, the empty set included.
//!
//! Restricting the check to maximal independent sets is not sound: deleting
//! more vertices can restore feasibility as well as destroy it, so a graph
//! may pass on every maximal set and still fail on a smaller one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{
    find_fractional_factor, has_fractional_factor, FactorOutcome, FactorParams, ViolationCertificate,
};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_CRITICALITY_LIMIT: usize = 20;

/// Independent sets of `g` in order of increasing size, lexicographic within
/// a size. Each size class is generated by backtracking only when the
/// iterator reaches it; enumeration stops at the first empty size class.
pub fn enumerate_independent_sets(
    g: &Graph,
    max_size: Option<usize>,
) -> impl Iterator<Item = VertexSet> + '_ {
    let cap = max_size.unwrap_or(g.order()).min(g.order());
    let mut exhausted = false;
    (0..=cap)
        .map_while(move |k| {
            if exhausted {
                return None;
            }
            let level = independent_sets_of_size(g, k);
            exhausted = level.is_empty();
            Some(level)
        })
        .flatten()
}

fn independent_sets_of_size(g: &Graph, k: usize) -> Vec<VertexSet> {
    fn extend(g: &Graph, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<VertexSet>) {
        if current.len() == k {
            out.push(current.iter().copied().collect());
            return;
        }
        let remaining = k - current.len();
        for v in start..g.order() {
            if g.order() - v < remaining {
                break;
            }
            if current.iter().any(|&u| g.has_edge(u, v)) {
                continue;
            }
            current.push(v);
            extend(g, k, v + 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(g, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Independent sets that cannot be enlarged.
pub fn maximal_independent_sets(g: &Graph) -> impl Iterator<Item = VertexSet> + '_ {
    enumerate_independent_sets(g, None).filter(move |s| {
        (0..g.order()).all(|v| s.contains(v) || s.iter().any(|u| g.has_edge(u, v)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub verdict: bool,
    pub independent_sets_checked: usize,
    /// First independent set (in enumeration order) whose deletion leaves no
    /// factor, in the labels of `G`.
    pub failing_set: Option<VertexSet>,
    /// Certificate for `G - I`, in the labels of `G - I`.
    pub failing_certificate: Option<ViolationCertificate>,
    /// `relabel[w]` is the `G` label of vertex `w` of `G - I`.
    pub relabel: Option<Vec<usize>>,
}

impl CriticalityReport {
    /// The failing certificate translated to the labels of `G`.
    pub fn certificate_in_original_labels(&self) -> Option<ViolationCertificate> {
        Some(self.failing_certificate.as_ref()?.relabel(self.relabel.as_ref()?))
    }
}

/// Outcome of deleting one specific independent set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionCheck {
    pub feasible: bool,
    pub certificate: Option<ViolationCertificate>,
    pub new_to_old: Vec<usize>,
}

/// Decides whether `G - I` has a fractional `[a,b]`-factor for one given
/// independent set `I`.
pub fn check_deletion(
    g: &Graph,
    params: FactorParams,
    independent: &VertexSet,
    brute_force_limit: usize,
) -> Result<DeletionCheck> {
    if !g.is_independent(independent)? {
        return Err(Error::InvalidInput(format!("{independent} is not an independent set")));
    }
    let deletion = g.delete_vertices(independent)?;
    let (feasible, certificate) = if has_fractional_factor(&deletion.graph, params) {
        (true, None)
    } else {
        match find_fractional_factor(&deletion.graph, params, brute_force_limit)? {
            FactorOutcome::Feasible(_) => {
                return Err(Error::Inconsistency("flow solver gave two different verdicts".into()))
            }
            FactorOutcome::Infeasible(cert) => (false, cert),
        }
    };
    Ok(DeletionCheck {
        feasible,
        certificate,
        new_to_old: deletion.new_to_old,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub brute_force: usize,
    pub criticality: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_force: crate::factor::DEFAULT_BRUTE_FORCE_LIMIT,
            criticality: DEFAULT_CRITICALITY_LIMIT,
        }
    }
}

/// Checks every independent set in enumeration order and stops at the
/// first one whose deletion leaves no fractional `[a,b]`-factor.
pub fn is_fractional_id_factor_critical(
    g: &Graph,
    params: FactorParams,
    limits: Limits,
) -> Result<CriticalityReport> {
    if g.order() > limits.criticality {
        return Err(Error::ResourceLimit {
            what: "criticality check",
            actual: g.order(),
            limit: limits.criticality,
            hint: "",
        });
    }
    let mut checked = 0;
    for set in enumerate_independent_sets(g, None) {
        checked += 1;
        let check = check_deletion(g, params, &set, limits.brute_force)?;
        if !check.feasible {
            return Ok(CriticalityReport {
                verdict: false,
                independent_sets_checked: checked,
                failing_set: Some(set),
                failing_certificate: check.certificate,
                relabel: Some(check.new_to_old),
            });
        }
    }
    Ok(CriticalityReport {
        verdict: true,
        independent_sets_checked: checked,
        failing_set: None,
        failing_certificate: None,
        relabel: None,
    })
}
