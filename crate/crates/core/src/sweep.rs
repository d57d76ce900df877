//! Verification sweeps: for every graph of an ensemble and every parameter
//! pair, check the three conditions and, when all hold, confirm that the
//! graph is fractional ID-`[a,b]`-factor-critical and that the two
//! consequences on independent sets hold for every maximal independent set.
//!
//! Configuration is TOML:
//!
//! ```toml
//! params = [[1, 1], [1, 2]]
//! output = "sweep.json"          # optional
//!
//! [limits]                       # optional
//! brute_force = 20
//! criticality = 20
//!
//! [[ensemble]]
//! kind = "exhaustive"            # every labeled graph
//! max_order = 6
//! min_order = 1                  # optional
//! params = [[1, 1]]              # optional, overrides the top-level list
//!
//! [[ensemble]]
//! kind = "random"
//! orders = [9, 12]
//! count = 500                    # per order
//! p = ["1/2", "3/4"]             # sample i uses p[i % len]
//! seed = 7
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::random_graph;
use crate::criticality::{is_fractional_id_factor_critical, maximal_independent_sets, CriticalityReport, Limits};
use crate::error::{Error, Result};
use crate::factor::{FactorParams, Rational};
use crate::graph::Graph;
use crate::hypothesis::{check_proof_claims, check_theorem1_hypotheses, HypothesisReport};

/// Largest order for exhaustive enumeration (2^21 labeled graphs).
pub const MAX_EXHAUSTIVE_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    Exhaustive {
        #[serde(default = "one")]
        min_order: usize,
        max_order: usize,
        #[serde(default)]
        params: Option<Vec<(u32, u32)>>,
    },
    Random {
        orders: Vec<usize>,
        count: usize,
        p: Vec<String>,
        seed: u64,
        #[serde(default)]
        params: Option<Vec<(u32, u32)>>,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    #[serde(default = "default_brute")]
    pub brute_force: usize,
    #[serde(default = "default_crit")]
    pub criticality: usize,
}

fn default_brute() -> usize {
    crate::factor::DEFAULT_BRUTE_FORCE_LIMIT
}

fn default_crit() -> usize {
    crate::criticality::DEFAULT_CRITICALITY_LIMIT
}

impl Default for LimitsSpec {
    fn default() -> Self {
        LimitsSpec {
            brute_force: default_brute(),
            criticality: default_crit(),
        }
    }
}

impl From<LimitsSpec> for Limits {
    fn from(l: LimitsSpec) -> Self {
        Limits {
            brute_force: l.brute_force,
            criticality: l.criticality,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub params: Vec<(u32, u32)>,
    #[serde(default)]
    pub limits: LimitsSpec,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default, rename = "ensemble")]
    pub ensembles: Vec<EnsembleSpec>,
}

fn to_params(pairs: &[(u32, u32)]) -> Result<Vec<FactorParams>> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("parameter list is empty".into()));
    }
    pairs.iter().map(|&(a, b)| FactorParams::new(a, b)).collect()
}

pub fn parse_probability(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("edge probability `{s}` is not a rational p/q in [0,1]"));
    let r = match s.trim().split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
            if q <= 0 {
                return Err(bad());
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if r < Rational::from_integer(0) || r > Rational::from_integer(1) {
        return Err(bad());
    }
    Ok(r)
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map_or(0, |s| text[..s.start.min(text.len())].lines().count().max(1));
            Error::parse_at(line, e.message().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn limits(&self) -> Limits {
        self.limits.into()
    }

    fn ensemble_params(&self, e: &EnsembleSpec) -> Result<Vec<FactorParams>> {
        let own = match e {
            EnsembleSpec::Exhaustive { params, .. } | EnsembleSpec::Random { params, .. } => params,
        };
        to_params(own.as_deref().unwrap_or(&self.params))
    }

    /// Parameter pairs valid, caps covering every order, ensembles nonempty.
    pub fn validate(&self) -> Result<()> {
        if self.ensembles.is_empty() {
            return Err(Error::InvalidInput("no [[ensemble]] sections".into()));
        }
        for e in &self.ensembles {
            self.ensemble_params(e)?;
            let max_order = match e {
                EnsembleSpec::Exhaustive { min_order, max_order, .. } => {
                    if *max_order > MAX_EXHAUSTIVE_ORDER {
                        return Err(Error::InvalidInput(format!(
                            "exhaustive sweeps go up to order {MAX_EXHAUSTIVE_ORDER}, got {max_order}"
                        )));
                    }
                    if min_order > max_order {
                        return Err(Error::InvalidInput("min_order exceeds max_order".into()));
                    }
                    *max_order
                }
                EnsembleSpec::Random { orders, count, p, .. } => {
                    if orders.is_empty() || p.is_empty() || *count == 0 {
                        return Err(Error::InvalidInput(
                            "random ensembles need orders, a p grid and a positive count".into(),
                        ));
                    }
                    p.iter().try_for_each(|s| parse_probability(s).map(|_| ()))?;
                    orders.iter().copied().max().unwrap_or(0)
                }
            };
            if max_order > self.limits.criticality {
                return Err(Error::InvalidInput(format!(
                    "order {max_order} exceeds the criticality cap {}",
                    self.limits.criticality
                )));
            }
        }
        Ok(())
    }
}

/// One graph of an ensemble with enough provenance to regenerate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleId {
    pub ensemble: usize,
    pub n: usize,
    /// Pair mask for exhaustive ensembles, sample index for random ones.
    pub index: u64,
    pub seed: Option<u64>,
    pub p: Option<String>,
}

struct WorkItem {
    id: SampleId,
    graph: Graph,
    params: Vec<FactorParams>,
}

/// SplitMix64 finalizer; spreads (seed, order, index) into per-sample seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn sample_seed(seed: u64, n: usize, index: u64) -> u64 {
    mix(mix(seed ^ mix(n as u64)) ^ index)
}

fn work_items(config: &SweepConfig) -> Result<Vec<WorkItem>> {
    let mut items = Vec::new();
    for (ei, e) in config.ensembles.iter().enumerate() {
        let params = config.ensemble_params(e)?;
        match e {
            EnsembleSpec::Exhaustive { min_order, max_order, .. } => {
                for n in *min_order..=*max_order {
                    for mask in 0u64..1 << (n * n.saturating_sub(1) / 2) {
                        items.push(WorkItem {
                            id: SampleId { ensemble: ei, n, index: mask, seed: None, p: None },
                            graph: Graph::from_pair_mask(n, mask),
                            params: params.clone(),
                        });
                    }
                }
            }
            EnsembleSpec::Random { orders, count, p, seed, .. } => {
                let grid = p.iter().map(|s| parse_probability(s)).collect::<Result<Vec<_>>>()?;
                for &n in orders {
                    for i in 0..*count as u64 {
                        let k = i as usize % grid.len();
                        let s = sample_seed(*seed, n, i);
                        items.push(WorkItem {
                            id: SampleId { ensemble: ei, n, index: i, seed: Some(s), p: Some(p[k].clone()) },
                            graph: random_graph(n, grid[k], s)?,
                            params: params.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(items)
}

/// A graph meeting all three conditions that is not critical, or on which a
/// proved consequence failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sample: SampleId,
    pub params: FactorParams,
    pub edge_list: String,
    pub hypotheses: HypothesisReport,
    pub criticality: Option<CriticalityReport>,
    pub claim_failure: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ensemble: usize,
    pub a: u32,
    pub b: u32,
    pub n: usize,
    pub graphs: usize,
    pub hypothesis_passing: usize,
    pub critical_confirmed: usize,
    pub claim_checks: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub counterexamples: Vec<Counterexample>,
}

impl SweepSummary {
    pub fn graphs(&self) -> usize {
        self.rows.iter().map(|r| r.graphs).sum()
    }

    pub fn hypothesis_passing(&self) -> usize {
        self.rows.iter().map(|r| r.hypothesis_passing).sum()
    }

    pub fn critical_confirmed(&self) -> usize {
        self.rows.iter().map(|r| r.critical_confirmed).sum()
    }

    pub fn claim_checks(&self) -> usize {
        self.rows.iter().map(|r| r.claim_checks).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>8} {:>5} {:>3} {:>9} {:>10} {:>9} {:>12}",
            "ensemble", "[a,b]", "n", "graphs", "hyp-pass", "critical", "claim-checks"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>8} {:>5} {:>3} {:>9} {:>10} {:>9} {:>12}",
                r.ensemble,
                format!("{},{}", r.a, r.b),
                r.n,
                r.graphs,
                r.hypothesis_passing,
                r.critical_confirmed,
                r.claim_checks
            )?;
        }
        writeln!(
            f,
            "total: {} graph/parameter instances, {} meet all conditions, {} confirmed critical, {} claim checks, {} counterexamples",
            self.graphs(),
            self.hypothesis_passing(),
            self.critical_confirmed(),
            self.claim_checks(),
            self.counterexamples.len()
        )?;
        for c in &self.counterexamples {
            writeln!(f, "COUNTEREXAMPLE {:?} with {}:", c.sample, c.params)?;
            write!(f, "{}", c.edge_list)?;
            if let Some(msg) = &c.claim_failure {
                writeln!(f, "  claim failure: {msg}")?;
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Outcome {
    hypothesis_passing: bool,
    critical: bool,
    claim_checks: usize,
    counterexample: Option<Counterexample>,
}

fn examine(item: &WorkItem, params: FactorParams, limits: Limits) -> Result<Outcome> {
    let g = &item.graph;
    if g.order() == 0 {
        return Ok(Outcome::default());
    }
    let hyp = check_theorem1_hypotheses(g, params)?;
    if !hyp.all_hold() {
        return Ok(Outcome::default());
    }
    let report = is_fractional_id_factor_critical(g, params, limits)?;
    let mut claim_checks = 0;
    let mut claim_failure = None;
    for x in maximal_independent_sets(g) {
        claim_checks += 1;
        match check_proof_claims(g, params, &x) {
            Ok(_) => {}
            Err(e @ Error::Inconsistency(_)) => {
                claim_failure = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let critical = report.verdict;
    let counterexample = (!critical || claim_failure.is_some()).then(|| Counterexample {
        sample: item.id.clone(),
        params,
        edge_list: g.to_edge_list(),
        hypotheses: hyp,
        criticality: Some(report),
        claim_failure,
    });
    Ok(Outcome {
        hypothesis_passing: true,
        critical,
        claim_checks,
        counterexample,
    })
}

/// Runs every ensemble of `config`. Work items are processed in parallel;
/// rows and counterexamples come out in ensemble, parameter, order and
/// sample order regardless of scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    config.validate()?;
    let limits = config.limits();
    let items = work_items(config)?;
    let outcomes: Vec<Vec<Outcome>> = items
        .par_iter()
        .map(|item| {
            item.params
                .iter()
                .map(|&p| examine(item, p, limits))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows: BTreeMap<(usize, (u32, u32), usize), SweepRow> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for (item, per_params) in items.iter().zip(outcomes) {
        for (params, outcome) in item.params.iter().zip(per_params) {
            let key = (item.id.ensemble, (params.a(), params.b()), item.id.n);
            let row = rows.entry(key).or_insert_with(|| SweepRow {
                ensemble: item.id.ensemble,
                a: params.a(),
                b: params.b(),
                n: item.id.n,
                ..SweepRow::default()
            });
            row.graphs += 1;
            row.hypothesis_passing += usize::from(outcome.hypothesis_passing);
            row.critical_confirmed += usize::from(outcome.hypothesis_passing && outcome.critical);
            row.claim_checks += outcome.claim_checks;
            counterexamples.extend(outcome.counterexample);
        }
    }
    counterexamples.sort_by(|x, y| {
        (x.sample.ensemble, x.params.a(), x.params.b(), x.sample.n, x.sample.index).cmp(&(
            y.sample.ensemble,
            y.params.a(),
            y.params.b(),
            y.sample.n,
            y.sample.index,
        ))
    });
    Ok(SweepSummary {
        rows: rows.into_values().collect(),
        counterexamples,
    })
}
