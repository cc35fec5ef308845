//! Shared result type for the pessimistic solvers.

use std::time::Duration;

use crate::formulations::OutcomeConfiguration;
use crate::game::LeaderStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The supremum was computed exactly.
    Optimal,
    /// A budget ran out; only the reported bounds are certified.
    Incomplete,
    /// No commitment induces any pure equilibrium.
    NoPureNe,
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Configurations or tree nodes examined.
    pub nodes: usize,
    /// Emptiness-check programs solved.
    pub emptiness_checks: usize,
    /// Two-stage supremum programs solved.
    pub lex_solves: usize,
    /// Approximation programs solved.
    pub approx_solves: usize,
    pub wall: Duration,
    /// (parent bound, child bound) pairs recorded when bound tracing is on.
    pub bound_edges: Vec<(f64, f64)>,
}

/// Outcome of a pessimistic solve: the supremum of the leader's utility,
/// whether some strategy attains it, and when not, a strategy whose value is
/// within the requested additive loss.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// The supremum; `None` when no pure equilibrium exists for any
    /// commitment (callers must branch rather than read a sentinel float).
    pub supremum: Option<f64>,
    /// Whether the supremum is attained (the realization margin at the
    /// witness is strictly positive).
    pub attained: bool,
    /// Strategy where the supremum is attained, in the closure sense when
    /// `attained` is false.
    pub witness: Option<LeaderStrategy>,
    /// Additive loss used for the approximation step.
    pub alpha: f64,
    /// Certified strategy with value at least `supremum - alpha`; present
    /// exactly when the supremum was computed but not attained.
    pub approx_strategy: Option<LeaderStrategy>,
    pub best_configuration: Option<OutcomeConfiguration>,
    /// Certified lower bound on the supremum (equal to it when Optimal).
    pub lower_bound: Option<f64>,
    /// Valid upper bound on the supremum (equal to it when Optimal).
    pub upper_bound: Option<f64>,
    pub stats: SolveStats,
}

impl SolveReport {
    pub fn no_pure_ne(alpha: f64, stats: SolveStats) -> Self {
        SolveReport {
            status: SolveStatus::NoPureNe,
            supremum: None,
            attained: false,
            witness: None,
            alpha,
            approx_strategy: None,
            best_configuration: None,
            lower_bound: None,
            upper_bound: None,
            stats,
        }
    }
}
