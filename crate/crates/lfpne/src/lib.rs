//! Solvers for normal-form leader-follower (Stackelberg) games in which the
//! followers observe the leader's mixed commitment and then play a pure Nash
//! equilibrium. The crate computes the optimistic equilibrium, the
//! pessimistic supremum of the leader's utility (which may be approachable
//! but not attained), additively approximate pessimistic strategies, and
//! big-M restricted lower bounds, all on top of a self-contained LP/MILP
//! kernel.

pub mod bnb;
pub mod enumerate;
pub mod format;
pub mod formulations;
pub mod gadgets;
pub mod game;
pub mod generator;
pub mod linear;
pub mod optimistic;
pub mod oracle;
pub mod report;
pub mod restricted;

pub use formulations::OutcomeConfiguration;
pub use game::{FollowerProfile, LeaderStrategy, NormalFormGame};
pub use report::{SolveReport, SolveStats, SolveStatus};
pub use linear::{LexLinearModel, LinearModel, LpSolution, LpStatus, Relation, Sense, VarId};
