//! Two-phase primal simplex over a dense tableau with implicit variable
//! bounds. Nonbasic variables may sit at either bound; upper bounds are
//! handled in the ratio test (bound flips) rather than as explicit rows.
//!
//! Accumulated floating-point error in long degenerate runs is repaired by
//! refactorizing the tableau from the original data for the current basis;
//! Bland's entering rule takes over after a bounded number of degenerate
//! pivots to break genuine cycles.

use super::model::{LinearModel, LpSolution, LpStatus, ModelError, Relation, Sense};

const PIVOT_TOL: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-7;
const DEGENERATE_STEP: f64 = 1e-10;
/// Degenerate pivots before switching to Bland's entering rule.
const BLAND_AFTER: usize = 100;
/// Degenerate pivots before rebuilding the tableau from scratch.
const REFRESH_AFTER: usize = 150;
/// Minimum pivots between consecutive rebuilds.
const REFRESH_GAP: usize = 150;
/// Ratio-test window within which the larger pivot element is preferred.
const RATIO_TIE: f64 = 1e-9;
/// Smallest pivot magnitude accepted while stable alternatives may exist.
const MIN_PIVOT: f64 = 1e-7;


pub(crate) struct SimplexOptions {
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_pivots: 200_000 }
    }
}

/// Per-variable (lo, hi) overrides used by branch-and-bound to fix binaries.
pub(crate) type BoundOverrides = [(f64, f64)];

struct Tableau {
    m: usize,
    ncols: usize,
    /// Row-major coefficient matrix, `m` rows by `ncols` columns.
    t: Vec<f64>,
    /// Current value of the basic variable in each row.
    value: Vec<f64>,
    /// Basic column per row.
    basis: Vec<usize>,
    /// Upper bound of each column in shifted coordinates (lo = 0).
    upper: Vec<f64>,
    /// True for nonbasic columns currently at their upper bound.
    at_upper: Vec<bool>,
    basic_flag: Vec<bool>,
    /// Reduced-cost row for the active objective.
    zrow: Vec<f64>,
    artificial_start: usize,
    /// Pristine copy of the constraint matrix and right-hand side, used for
    /// refactorization.
    a0: Vec<f64>,
    b0: Vec<f64>,
    pivots: usize,
    degenerate_run: usize,
    refreshed_at: usize,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Continue,
}

impl Tableau {
    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.t[i * self.ncols..(i + 1) * self.ncols]
    }

    fn eliminate(&mut self, r: usize, e: usize) {
        let ncols = self.ncols;
        let piv = self.t[r * ncols + e];
        let inv = 1.0 / piv;
        {
            let row = &mut self.t[r * ncols..(r + 1) * ncols];
            for v in row.iter_mut() {
                *v *= inv;
            }
            row[e] = 1.0;
        }
        let pivot_row: Vec<f64> = self.row(r).to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.t[i * ncols + e];
            if factor.abs() <= ZERO_TOL {
                self.t[i * ncols + e] = 0.0;
                continue;
            }
            let row = &mut self.t[i * ncols..(i + 1) * ncols];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * *p;
            }
            row[e] = 0.0;
        }
        let zfac = self.zrow[e];
        if zfac.abs() > ZERO_TOL {
            for (z, p) in self.zrow.iter_mut().zip(&pivot_row) {
                *z -= zfac * *p;
            }
        }
        self.zrow[e] = 0.0;
        self.pivots += 1;
    }

    /// Rebuilds the tableau, basic values and reduced costs for the current
    /// basis directly from the pristine data, via Gauss-Jordan elimination
    /// with partial pivoting. Clears accumulated round-off.
    fn refactorize(&mut self, costs: &[f64]) -> Result<(), ModelError> {
        let m = self.m;
        let ncols = self.ncols;
        // Augmented system [B | A0 | b'], where b' folds in the nonbasic
        // columns at their upper bounds.
        let width = m + ncols + 1;
        let mut aug = vec![0.0; m * width];
        for i in 0..m {
            for (k, &bj) in self.basis.iter().enumerate() {
                aug[i * width + k] = self.a0[i * ncols + bj];
            }
            for j in 0..ncols {
                aug[i * width + m + j] = self.a0[i * ncols + j];
            }
            let mut b = self.b0[i];
            for j in 0..ncols {
                if !self.basic_flag[j] && self.at_upper[j] && self.upper[j].is_finite() {
                    b -= self.a0[i * ncols + j] * self.upper[j];
                }
            }
            aug[i * width + m + ncols] = b;
        }
        for col in 0..m {
            let pivot = (col..m)
                .max_by(|&a, &b| {
                    aug[a * width + col]
                        .abs()
                        .partial_cmp(&aug[b * width + col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if aug[pivot * width + col].abs() < 1e-11 {
                return Err(ModelError::Numerical("singular basis during refactorization"));
            }
            if pivot != col {
                for j in 0..width {
                    aug.swap(pivot * width + j, col * width + j);
                }
            }
            let inv = 1.0 / aug[col * width + col];
            for j in 0..width {
                aug[col * width + j] *= inv;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = aug[r * width + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..width {
                    aug[r * width + j] -= f * aug[col * width + j];
                }
            }
        }
        for i in 0..m {
            for j in 0..ncols {
                self.t[i * ncols + j] = aug[i * width + m + j];
            }
            let v = aug[i * width + m + ncols];
            // Small infeasibilities are round-off being repaired; large ones
            // mean the basis was corrupted beyond recovery.
            let ub = self.upper[self.basis[i]];
            if v < -1e-5 || (ub.is_finite() && v > ub + 1e-5) {
                return Err(ModelError::Numerical("basis infeasible after refactorization"));
            }
            self.value[i] = v.max(0.0).min(if ub.is_finite() { ub } else { v.max(0.0) });
        }
        for j in 0..ncols {
            self.zrow[j] = costs[j];
        }
        for (i, &bj) in self.basis.iter().enumerate() {
            let c = costs[bj];
            if c != 0.0 {
                let row: Vec<f64> = self.row(i).to_vec();
                for (z, a) in self.zrow.iter_mut().zip(&row) {
                    *z -= c * a;
                }
            }
        }
        for &bj in &self.basis {
            self.zrow[bj] = 0.0;
        }
        self.refreshed_at = self.pivots;
        self.degenerate_run = 0;
        Ok(())
    }

    /// Chooses the entering column: Dantzig pricing normally, lowest-index
    /// (Bland) once a run of degenerate pivots suggests cycling. Columns in
    /// `banned` were rejected this iteration for offering only unstable
    /// pivots.
    fn entering(&self, bland: bool, allow_artificials: bool, banned: &[bool]) -> Option<(usize, bool)> {
        let limit = if allow_artificials { self.ncols } else { self.artificial_start };
        let mut best: Option<(usize, bool, f64)> = None;
        for j in 0..limit {
            if self.basic_flag[j] || self.upper[j] == 0.0 || banned[j] {
                continue;
            }
            let d = self.zrow[j];
            let (eligible, gain, from_upper) = if self.at_upper[j] {
                (d < -PIVOT_TOL, -d, true)
            } else {
                (d > PIVOT_TOL, d, false)
            };
            if !eligible {
                continue;
            }
            if bland {
                return Some((j, from_upper));
            }
            match best {
                Some((_, _, g)) if g >= gain => {}
                _ => best = Some((j, from_upper, gain)),
            }
        }
        best.map(|(j, fu, _)| (j, fu))
    }

    /// One simplex iteration: price, two-pass ratio test, then pivot or
    /// bound flip. The first ratio pass relaxes each basic bound by the
    /// feasibility tolerance; the second picks the largest pivot element
    /// among rows blocking within the relaxed step, so a tiny pivot is only
    /// ever taken when no stable alternative exists — and entering columns
    /// offering nothing better are banned for the iteration instead.
    fn step(&mut self, bland: bool, allow_artificials: bool) -> StepOutcome {
        let mut banned = vec![false; self.ncols];
        loop {
            let Some((e, from_upper)) = self.entering(bland, allow_artificials, &banned) else {
                return StepOutcome::Optimal;
            };
            // Direction of movement in shifted coordinates: +1 when leaving
            // the lower bound, -1 when leaving the upper bound.
            let dir: f64 = if from_upper { -1.0 } else { 1.0 };

            // Pass 1: tightest step, both strict and with basic bounds
            // relaxed by the feasibility tolerance.
            let mut t_relax = self.upper[e];
            let mut t_strict = self.upper[e];
            for i in 0..self.m {
                let a = dir * self.t[i * self.ncols + e];
                let (strict, relaxed) = if a > PIVOT_TOL {
                    (self.value[i] / a, (self.value[i] + FEAS_TOL) / a)
                } else if a < -PIVOT_TOL {
                    let ub = self.upper[self.basis[i]];
                    if !ub.is_finite() {
                        continue;
                    }
                    (
                        (ub - self.value[i]) / (-a),
                        (ub - self.value[i] + FEAS_TOL) / (-a),
                    )
                } else {
                    continue;
                };
                t_relax = t_relax.min(relaxed.max(0.0));
                t_strict = t_strict.min(strict.max(0.0));
            }

            if !t_relax.is_finite() {
                return StepOutcome::Unbounded;
            }

            // Flip when the entering variable's own bound is the binding one.
            if self.upper[e].is_finite() && self.upper[e] <= t_relax {
                let u = self.upper[e];
                for i in 0..self.m {
                    self.value[i] -= dir * u * self.t[i * self.ncols + e];
                }
                self.at_upper[e] = !from_upper;
                self.degenerate_run = 0;
                self.pivots += 1;
                return StepOutcome::Continue;
            }

            // Pass 2: among rows whose strict limit fits under the window,
            // prefer the largest pivot magnitude. Under Bland's rule the
            // window stays strict and the lowest basic index wins, keeping
            // the anti-cycling guarantee intact.
            let window = if bland {
                t_strict + RATIO_TIE
            } else {
                t_relax + RATIO_TIE * (1.0 + t_relax.abs())
            };
            let mut leaving: Option<(usize, f64, f64)> = None;
            for i in 0..self.m {
                let a = dir * self.t[i * self.ncols + e];
                let limit = if a > PIVOT_TOL {
                    self.value[i] / a
                } else if a < -PIVOT_TOL {
                    let ub = self.upper[self.basis[i]];
                    if !ub.is_finite() {
                        continue;
                    }
                    (ub - self.value[i]) / (-a)
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                if limit > window {
                    continue;
                }
                let better = match &leaving {
                    None => true,
                    Some((r, mag, _)) => {
                        if bland {
                            self.basis[i] < self.basis[*r]
                        } else {
                            a.abs() > mag + 1e-12
                                || ((a.abs() - mag).abs() <= 1e-12
                                    && self.basis[i] < self.basis[*r])
                        }
                    }
                };
                if better {
                    leaving = Some((i, a.abs(), limit));
                }
            }

            let Some((r, magnitude, step)) = leaving else {
                // Rows only blocked under relaxation; treat as a flip if the
                // own bound is finite, otherwise the direction is unbounded.
                if self.upper[e].is_finite() {
                    let u = self.upper[e];
                    for i in 0..self.m {
                        self.value[i] -= dir * u * self.t[i * self.ncols + e];
                    }
                    self.at_upper[e] = !from_upper;
                    self.degenerate_run = 0;
                    self.pivots += 1;
                    return StepOutcome::Continue;
                }
                return StepOutcome::Unbounded;
            };

            if magnitude < MIN_PIVOT && !bland {
                // Entering here would poison the tableau; look for another
                // improving column this iteration.
                banned[e] = true;
                continue;
            }

            if step <= DEGENERATE_STEP {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
            for i in 0..self.m {
                self.value[i] -= dir * step * self.t[i * self.ncols + e];
            }
            let old_basic = self.basis[r];
            let a_re = dir * self.t[r * self.ncols + e];
            // Leaving variable exits at lower (value hit 0) or upper.
            let leaves_at_upper = a_re < 0.0;
            self.at_upper[old_basic] = leaves_at_upper;
            self.basic_flag[old_basic] = false;
            self.value[r] = if from_upper { self.upper[e] - step } else { step };
            self.basis[r] = e;
            self.basic_flag[e] = true;
            self.at_upper[e] = false;
            self.eliminate(r, e);
            if self.value[r].abs() < ZERO_TOL {
                self.value[r] = 0.0;
            }
            return StepOutcome::Continue;
        }
    }

    fn run(
        &mut self,
        max_pivots: usize,
        allow_artificials: bool,
        costs: &[f64],
    ) -> Result<StepOutcome, ModelError> {
        loop {
            if self.pivots >= max_pivots {
                return Err(ModelError::PivotLimit(self.pivots));
            }
            if self.degenerate_run >= REFRESH_AFTER
                && self.pivots.saturating_sub(self.refreshed_at) >= REFRESH_GAP
            {
                // A failed rebuild is not fatal mid-run; Bland's rule keeps
                // grinding and the next rebuild attempt comes later.
                if self.refactorize(costs).is_err() {
                    self.refreshed_at = self.pivots;
                }
            }
            let bland = self.degenerate_run >= BLAND_AFTER;
            match self.step(bland, allow_artificials) {
                StepOutcome::Continue => continue,
                other => return Ok(other),
            }
        }
    }
}

/// Solves the LP relaxation of `model` (binary flags ignored). Returns
/// optimal point, duals and reduced costs in the model's original sense,
/// satisfying `c_j = reduced_j + sum_i duals_i * A_ij`.
pub(crate) fn solve_relaxation(
    model: &LinearModel,
    overrides: Option<&BoundOverrides>,
    options: &SimplexOptions,
) -> Result<LpSolution, ModelError> {
    let nv = model.num_vars();
    let m = model.num_rows();
    let sigma = match model.sense {
        Sense::Max => 1.0,
        Sense::Min => -1.0,
    };

    let mut lo = Vec::with_capacity(nv);
    let mut hi = Vec::with_capacity(nv);
    for (j, v) in model.vars.iter().enumerate() {
        let (l, h) = match overrides {
            Some(o) => o[j],
            None => (v.lo, v.hi),
        };
        if !l.is_finite() {
            return Err(ModelError::NoLowerBound { name: v.name.clone() });
        }
        if l > h + 1e-12 {
            return Ok(LpSolution::infeasible());
        }
        lo.push(l);
        hi.push(h);
    }

    // Shift structural variables to [0, u] and orient rows so rhs >= 0.
    let mut rhs = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    let mut relations = Vec::with_capacity(m);
    for row in &model.rows {
        let mut b = row.rhs;
        for (a, l) in row.coeffs.iter().zip(&lo) {
            b -= a * l;
        }
        if b < 0.0 {
            flipped.push(true);
            rhs.push(-b);
            relations.push(match row.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            });
        } else {
            flipped.push(false);
            rhs.push(b);
            relations.push(row.relation);
        }
    }

    let n_le = relations.iter().filter(|r| **r == Relation::Le).count();
    let n_ge = relations.iter().filter(|r| **r == Relation::Ge).count();
    let n_art = m - n_le;
    let slack_start = nv;
    let artificial_start = nv + n_le + n_ge;
    let ncols = artificial_start + n_art;

    let mut t = vec![0.0; m * ncols];
    let mut upper = vec![f64::INFINITY; ncols];
    for j in 0..nv {
        upper[j] = hi[j] - lo[j];
    }
    let mut basis = vec![0usize; m];
    let mut value = vec![0.0; m];
    // Records which unit column carries each row's dual: (column, sign).
    let mut dual_col = vec![(0usize, 1.0); m];

    let mut next_slack = slack_start;
    let mut next_art = artificial_start;
    for i in 0..m {
        let sign = if flipped[i] { -1.0 } else { 1.0 };
        let row = &model.rows[i];
        for j in 0..nv {
            t[i * ncols + j] = sign * row.coeffs[j];
        }
        value[i] = rhs[i];
        match relations[i] {
            Relation::Le => {
                t[i * ncols + next_slack] = 1.0;
                basis[i] = next_slack;
                dual_col[i] = (next_slack, -1.0);
                next_slack += 1;
            }
            Relation::Ge => {
                t[i * ncols + next_slack] = -1.0;
                dual_col[i] = (next_slack, 1.0);
                next_slack += 1;
                t[i * ncols + next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                t[i * ncols + next_art] = 1.0;
                basis[i] = next_art;
                dual_col[i] = (next_art, -1.0);
                next_art += 1;
            }
        }
    }

    let mut basic_flag = vec![false; ncols];
    for &b in &basis {
        basic_flag[b] = true;
    }

    let a0 = t.clone();
    let b0 = rhs.clone();

    let mut tab = Tableau {
        m,
        ncols,
        t,
        value,
        basis,
        upper,
        at_upper: vec![false; ncols],
        basic_flag,
        zrow: vec![0.0; ncols],
        artificial_start,
        a0,
        b0,
        pivots: 0,
        degenerate_run: 0,
        refreshed_at: 0,
    };

    // Phase 1: drive the artificials to zero.
    if n_art > 0 {
        let mut costs = vec![0.0; ncols];
        for j in artificial_start..ncols {
            costs[j] = -1.0;
            tab.zrow[j] = -1.0;
        }
        for i in 0..m {
            if tab.basis[i] >= artificial_start {
                let row: Vec<f64> = tab.row(i).to_vec();
                for (z, a) in tab.zrow.iter_mut().zip(&row) {
                    *z += a;
                }
            }
        }
        if matches!(tab.run(options.max_pivots, true, &costs)?, StepOutcome::Unbounded) {
            return Err(ModelError::Numerical("phase 1 reported unbounded"));
        }
        let infeas: f64 = (0..m)
            .filter(|&i| tab.basis[i] >= artificial_start)
            .map(|i| tab.value[i])
            .sum();
        if infeas > FEAS_TOL {
            return Ok(LpSolution::infeasible());
        }
        // Pivot lingering artificials out where possible; cap the rest at 0
        // so they can never re-enter the solution.
        for r in 0..m {
            if tab.basis[r] < artificial_start {
                continue;
            }
            let mut col = None;
            for j in 0..artificial_start {
                if !tab.basic_flag[j] && tab.t[r * tab.ncols + j].abs() > 1e-7 {
                    col = Some(j);
                    break;
                }
            }
            if let Some(e) = col {
                let old = tab.basis[r];
                tab.basic_flag[old] = false;
                tab.basis[r] = e;
                tab.basic_flag[e] = true;
                // The point is unchanged: the entering column keeps the
                // value it had at its bound.
                tab.value[r] = if tab.at_upper[e] { tab.upper[e] } else { 0.0 };
                tab.at_upper[e] = false;
                tab.eliminate(r, e);
            }
        }
        for j in artificial_start..ncols {
            if !tab.basic_flag[j] {
                tab.upper[j] = 0.0;
                tab.at_upper[j] = false;
            }
        }
    }

    // Phase 2: the real objective over shifted coordinates.
    let mut costs = vec![0.0; ncols];
    for j in 0..nv {
        costs[j] = sigma * model.objective[j];
    }
    for z in tab.zrow.iter_mut() {
        *z = 0.0;
    }
    for j in 0..nv {
        tab.zrow[j] = costs[j];
    }
    for i in 0..m {
        let bj = tab.basis[i];
        if bj < nv {
            let c = costs[bj];
            if c != 0.0 {
                let row: Vec<f64> = tab.row(i).to_vec();
                for (z, a) in tab.zrow.iter_mut().zip(&row) {
                    *z -= c * a;
                }
            }
        }
    }
    tab.degenerate_run = 0;

    let outcome = tab.run(options.max_pivots, false, &costs)?;
    if matches!(outcome, StepOutcome::Unbounded) {
        return Ok(LpSolution::unbounded());
    }
    // Final hygiene pass: rebuild the optimal basis from pristine data so
    // reported values carry no accumulated round-off. Kept values are still
    // usable when the basis is too ill-conditioned to rebuild.
    if m > 0 {
        let _ = tab.refactorize(&costs);
    }

    // Recover the point in original coordinates.
    let mut shifted = vec![0.0; ncols];
    for j in 0..ncols {
        if !tab.basic_flag[j] && tab.at_upper[j] && tab.upper[j].is_finite() {
            shifted[j] = tab.upper[j];
        }
    }
    for i in 0..m {
        shifted[tab.basis[i]] = tab.value[i];
    }
    let mut point = Vec::with_capacity(nv);
    for j in 0..nv {
        let mut x = lo[j] + shifted[j];
        if x < lo[j] {
            x = lo[j];
        }
        if x > hi[j] {
            x = hi[j];
        }
        point.push(x);
    }

    let mut value = 0.0;
    for j in 0..nv {
        value += model.objective[j] * point[j];
    }

    // Duals and reduced costs, mapped back to the original sense so that
    // c = reduced + duals * A holds for the model as given.
    let mut duals = Vec::with_capacity(m);
    for i in 0..m {
        let (col, sign) = dual_col[i];
        let mut y = sign * tab.zrow[col];
        if flipped[i] {
            y = -y;
        }
        duals.push(sigma * y);
    }
    let mut reduced = Vec::with_capacity(nv);
    for j in 0..nv {
        reduced.push(sigma * tab.zrow[j]);
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        point,
        duals,
        reduced_costs: reduced,
    })
}
