use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

/// Tolerance used when checking that an optimal point satisfies the model's
/// constraints and bounds.
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("coefficient row has {got} entries, model has {expected} variables")]
    RowLength { expected: usize, got: usize },
    #[error("variable {name}: inconsistent bounds [{lo}, {hi}]")]
    BadBounds { name: String, lo: f64, hi: f64 },
    #[error("binary variable {name} must have bounds within [0, 1], got [{lo}, {hi}]")]
    BadBinaryBounds { name: String, lo: f64, hi: f64 },
    #[error("variable {name} has no finite lower bound; the solver requires one")]
    NoLowerBound { name: String },
    #[error("variable index {0} out of range")]
    VarIndex(usize),
    #[error("solve_lp called on a model with binary variables")]
    UnexpectedBinaries,
    #[error("pivot limit exceeded ({0} pivots); the model is numerically hostile")]
    PivotLimit(usize),
    #[error("branch-and-bound node limit exceeded ({0} nodes)")]
    NodeLimit(usize),
    #[error("numerical failure in the simplex: {0}")]
    Numerical(&'static str),
}

/// Handle for a variable added to a [`LinearModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Le => write!(f, "<="),
            Relation::Eq => write!(f, "="),
            Relation::Ge => write!(f, ">="),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub binary: bool,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Dense linear model: continuous and binary variables, dense constraint
/// rows, single linear objective.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub(crate) vars: Vec<Variable>,
    pub(crate) rows: Vec<Row>,
    pub(crate) objective: Vec<f64>,
    pub(crate) sense: Sense,
}

impl LinearModel {
    pub fn new(sense: Sense) -> Self {
        LinearModel {
            vars: Vec::new(),
            rows: Vec::new(),
            objective: Vec::new(),
            sense,
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lo: f64, hi: f64) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            lo,
            hi,
            binary: false,
        });
        self.objective.push(0.0);
        // Keep previously added rows consistent with the wider model.
        for row in &mut self.rows {
            row.coeffs.push(0.0);
        }
        VarId(self.vars.len() - 1)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            lo: 0.0,
            hi: 1.0,
            binary: true,
        });
        self.objective.push(0.0);
        for row in &mut self.rows {
            row.coeffs.push(0.0);
        }
        VarId(self.vars.len() - 1)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_binaries(&self) -> usize {
        self.vars.iter().filter(|v| v.binary).count()
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn set_objective_coeff(&mut self, id: VarId, coeff: f64) {
        self.objective[id.0] = coeff;
    }

    pub fn objective_terms(&mut self, terms: &[(VarId, f64)]) {
        for c in self.objective.iter_mut() {
            *c = 0.0;
        }
        for &(id, c) in terms {
            self.objective[id.0] += c;
        }
    }

    pub fn objective_row(&self) -> &[f64] {
        &self.objective
    }

    /// Adds a dense constraint row. The row length must match the current
    /// variable count.
    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<usize, ModelError> {
        if coeffs.len() != self.vars.len() {
            return Err(ModelError::RowLength {
                expected: self.vars.len(),
                got: coeffs.len(),
            });
        }
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
        Ok(self.rows.len() - 1)
    }

    /// Adds a row given as sparse (variable, coefficient) terms. Repeated
    /// variables accumulate.
    pub fn add_row_terms(&mut self, terms: &[(VarId, f64)], relation: Relation, rhs: f64) -> usize {
        let mut coeffs = vec![0.0; self.vars.len()];
        for &(id, c) in terms {
            coeffs[id.0] += c;
        }
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn row(&self, idx: usize) -> &Row {
        &self.rows[idx]
    }

    /// Drops rows from the end, keeping the first `len`. Supports
    /// backtracking builders.
    pub(crate) fn truncate_rows(&mut self, len: usize) {
        self.rows.truncate(len);
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for v in &self.vars {
            if !(v.lo <= v.hi) {
                return Err(ModelError::BadBounds {
                    name: v.name.clone(),
                    lo: v.lo,
                    hi: v.hi,
                });
            }
            if v.binary && (v.lo < -0.0 || v.hi > 1.0) {
                return Err(ModelError::BadBinaryBounds {
                    name: v.name.clone(),
                    lo: v.lo,
                    hi: v.hi,
                });
            }
            if !v.lo.is_finite() {
                return Err(ModelError::NoLowerBound {
                    name: v.name.clone(),
                });
            }
        }
        for row in &self.rows {
            if row.coeffs.len() != self.vars.len() {
                return Err(ModelError::RowLength {
                    expected: self.vars.len(),
                    got: row.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    /// Dumps the model in CPLEX LP text format for cross-checking against
    /// external solvers.
    pub fn write_lp_format(&self, w: &mut impl Write) -> io::Result<()> {
        match self.sense {
            Sense::Max => writeln!(w, "Maximize")?,
            Sense::Min => writeln!(w, "Minimize")?,
        }
        write!(w, " obj:")?;
        write_terms(w, &self.objective, &self.vars)?;
        writeln!(w)?;
        writeln!(w, "Subject To")?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(w, " c{}:", i)?;
            write_terms(w, &row.coeffs, &self.vars)?;
            writeln!(w, " {} {}", row.relation, fmt_num(row.rhs))?;
        }
        writeln!(w, "Bounds")?;
        for v in &self.vars {
            if v.hi.is_finite() {
                writeln!(w, " {} <= {} <= {}", fmt_num(v.lo), v.name, fmt_num(v.hi))?;
            } else {
                writeln!(w, " {} >= {}", v.name, fmt_num(v.lo))?;
            }
        }
        if self.num_binaries() > 0 {
            writeln!(w, "Binaries")?;
            for v in self.vars.iter().filter(|v| v.binary) {
                writeln!(w, " {}", v.name)?;
            }
        }
        writeln!(w, "End")?;
        Ok(())
    }
}

fn fmt_num(x: f64) -> String {
    format!("{}", x)
}

fn write_terms(w: &mut impl Write, coeffs: &[f64], vars: &[Variable]) -> io::Result<()> {
    let mut any = false;
    for (c, v) in coeffs.iter().zip(vars) {
        if *c == 0.0 {
            continue;
        }
        any = true;
        if *c < 0.0 {
            write!(w, " - {} {}", fmt_num(-c), v.name)?;
        } else {
            write!(w, " + {} {}", fmt_num(*c), v.name)?;
        }
    }
    if !any {
        write!(w, " 0")?;
    }
    Ok(())
}

/// Linear model with a second objective optimised after the first: the
/// primary objective is maximised, then the secondary is maximised subject
/// to the primary staying at its optimum (up to a tolerance).
#[derive(Debug, Clone)]
pub struct LexLinearModel {
    pub base: LinearModel,
    pub secondary: Vec<f64>,
}

impl LexLinearModel {
    pub fn new(base: LinearModel, secondary_terms: &[(VarId, f64)]) -> Self {
        let mut secondary = vec![0.0; base.num_vars()];
        for &(id, c) in secondary_terms {
            secondary[id.0] += c;
        }
        LexLinearModel { base, secondary }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of an LP or MILP solve.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value in the model's own sense. Meaningful only for
    /// `Optimal`.
    pub value: f64,
    pub point: Vec<f64>,
    /// One multiplier per constraint row (LP solves only; empty after a
    /// branch-and-bound solve).
    pub duals: Vec<f64>,
    /// One reduced cost per variable (LP solves only).
    pub reduced_costs: Vec<f64>,
}

impl LpSolution {
    pub fn infeasible() -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            value: f64::NAN,
            point: Vec::new(),
            duals: Vec::new(),
            reduced_costs: Vec::new(),
        }
    }

    pub fn unbounded() -> Self {
        LpSolution {
            status: LpStatus::Unbounded,
            value: f64::NAN,
            point: Vec::new(),
            duals: Vec::new(),
            reduced_costs: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn var_value(&self, id: VarId) -> f64 {
        self.point[id.0]
    }
}
