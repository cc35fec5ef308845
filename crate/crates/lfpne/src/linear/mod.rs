//! Self-contained dense LP/MILP kernel: two-phase simplex with bounded
//! variables, binary branch-and-bound, and two-stage lexicographic solves.
//! Every optimization model in this crate runs through here.

mod milp;
mod model;
mod simplex;

pub use milp::{MilpOptions, MilpOutcome, INTEGER_TOL};
pub use model::{
    LexLinearModel, LinearModel, LpSolution, LpStatus, ModelError, Relation, Row, Sense, VarId,
    Variable, FEASIBILITY_TOL,
};

use simplex::SimplexOptions;

/// Default slack allowed on the stage-1 objective when re-solving for the
/// stage-2 objective in [`solve_lex`].
pub const LEX_PRIMARY_TOL: f64 = 1e-6;

/// Solves a pure LP. Models containing binary variables are rejected; use
/// [`solve_milp`] for those.
pub fn solve_lp(model: &LinearModel) -> Result<LpSolution, ModelError> {
    model.validate()?;
    if model.num_binaries() > 0 {
        return Err(ModelError::UnexpectedBinaries);
    }
    simplex::solve_relaxation(model, None, &SimplexOptions::default())
}

/// Solves a mixed-binary model to proven global optimality.
pub fn solve_milp(model: &LinearModel) -> Result<LpSolution, ModelError> {
    let outcome = milp::solve_milp_impl(model, &MilpOptions::default())?;
    if !outcome.proven_optimal {
        return Err(ModelError::NodeLimit(outcome.nodes));
    }
    Ok(outcome.solution)
}

/// Budgeted variant of [`solve_milp`] that surfaces the incumbent and the
/// remaining bound when the node budget runs out.
pub fn solve_milp_with(model: &LinearModel, options: &MilpOptions) -> Result<MilpOutcome, ModelError> {
    milp::solve_milp_impl(model, options)
}

/// Result of a two-stage lexicographic solve.
#[derive(Debug, Clone)]
pub struct LexSolution {
    pub status: LpStatus,
    /// Optimal value of the stage-1 objective.
    pub primary: f64,
    /// Optimal value of the stage-2 objective subject to stage 1.
    pub secondary: f64,
    /// The stage-2 point.
    pub point: Vec<f64>,
}

impl LexSolution {
    pub fn var_value(&self, id: VarId) -> f64 {
        self.point[id.0]
    }
}

/// Maximises the primary objective, then re-solves maximising the secondary
/// objective with the primary pinned to within `primary_tolerance` of its
/// optimum. Stage-1 infeasibility propagates.
pub fn solve_lex(model: &LexLinearModel, primary_tolerance: f64) -> Result<LexSolution, ModelError> {
    solve_lex_with(model, primary_tolerance, &MilpOptions::default())
}

/// [`solve_lex`] with explicit options for the stage-2 solve. An early stop
/// or cutoff there trades the exact secondary optimum for speed; the
/// primary value is always exact.
pub fn solve_lex_with(
    model: &LexLinearModel,
    primary_tolerance: f64,
    stage2_options: &MilpOptions,
) -> Result<LexSolution, ModelError> {
    let stage1 = solve_milp(&model.base)?;
    match stage1.status {
        LpStatus::Optimal => {}
        status => {
            return Ok(LexSolution {
                status,
                primary: f64::NAN,
                secondary: f64::NAN,
                point: Vec::new(),
            })
        }
    }
    let eta = stage1.value;

    let mut stage2 = model.base.clone();
    let pin = stage2.objective.clone();
    match model.base.sense {
        Sense::Max => {
            stage2
                .add_row(pin, Relation::Ge, eta - primary_tolerance)
                .expect("objective row length matches");
        }
        Sense::Min => {
            stage2
                .add_row(pin, Relation::Le, eta + primary_tolerance)
                .expect("objective row length matches");
        }
    }
    stage2.objective = model.secondary.clone();
    stage2.sense = Sense::Max;
    let sol2 = solve_milp_with(&stage2, stage2_options)?.solution;
    match sol2.status {
        LpStatus::Optimal => Ok(LexSolution {
            status: LpStatus::Optimal,
            primary: eta,
            secondary: sol2.value,
            point: sol2.point,
        }),
        // Either numerically degenerate or nothing above the stage-2
        // cutoff; fall back to the stage-1 point with a zero secondary.
        _ => Ok(LexSolution {
            status: LpStatus::Optimal,
            primary: eta,
            secondary: 0.0,
            point: stage1.point,
        }),
    }
}
