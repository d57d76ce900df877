//! Fractional `[a,b]`-factors and fractional ID-`[a,b]`-factor-critical graphs.
//!
//! * [`graph`]: simple graphs, neighborhoods, joins, unions, edge-list I/O.
//! * [`factor`]: the `δ(S,T)` functional, a subset-scan oracle and a
//!   flow-based solver producing half-integral witnesses.
//! * [`criticality`]: independent-set enumeration and the criticality test.
//! * [`hypothesis`]: exact checks of the order, minimum-degree and
//!   neighborhood-union conditions.
//! * [`constructions`]: the two extremal families and random ensembles.
//! * [`sweep`]: configurable verification sweeps tying all of the above
//!   together.

pub mod constructions;
pub mod criticality;
pub mod error;
pub mod factor;
pub mod flow;
pub mod graph;
pub mod hypothesis;
pub mod sweep;

pub use criticality::{is_fractional_id_factor_critical, CriticalityReport, Limits};
pub use error::{Error, Result};
pub use factor::{
    delta_st, find_fractional_factor, has_fractional_factor_bruteforce, validate_assignment,
    FactorOutcome, FactorParams, FractionalAssignment, Rational, ViolationCertificate,
};
pub use graph::{Graph, VertexSet};
pub use hypothesis::{check_proof_claims, check_theorem1_hypotheses, corollary_thresholds, HypothesisReport};
