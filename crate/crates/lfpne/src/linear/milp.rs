//! LP-relaxation branch-and-bound for mixed-binary models: most-fractional
//! branching, best-bound node selection, with an initial rounding dive to
//! seed the incumbent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::model::{LinearModel, LpSolution, LpStatus, ModelError, Sense};
use super::simplex::{solve_relaxation, SimplexOptions};

pub const INTEGER_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MilpOptions {
    pub max_nodes: usize,
    pub max_pivots: usize,
    /// Return the incumbent as soon as its value reaches this (in the
    /// model's sense); the result is then not proven optimal.
    pub stop_at: Option<f64>,
    /// Discard nodes (and incumbents) whose value cannot exceed this.
    /// Exhausting the tree then proves no solution better than the cutoff
    /// exists, without chasing the optimum below it.
    pub cutoff: Option<f64>,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions {
            max_nodes: 200_000,
            max_pivots: 200_000,
            stop_at: None,
            cutoff: None,
        }
    }
}

/// Outcome of a branch-and-bound run, including whether optimality was
/// proven within the node budget.
#[derive(Debug, Clone)]
pub struct MilpOutcome {
    pub solution: LpSolution,
    pub proven_optimal: bool,
    /// Best remaining bound when the budget ran out (in the model's sense).
    pub best_bound: f64,
    pub nodes: usize,
}

struct Node {
    /// Relaxation value in maximisation orientation (higher is better).
    bound: f64,
    seq: usize,
    /// Binary fixings accumulated along the path from the root.
    fixes: Vec<(u32, bool)>,
    frac_var: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Best bound first; FIFO on ties.
        self.bound
            .partial_cmp(&other.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn most_fractional(model: &LinearModel, point: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in model.vars.iter().enumerate() {
        if !v.binary {
            continue;
        }
        let x = point[j];
        let frac = (x - x.round()).abs();
        if frac <= INTEGER_TOL {
            continue;
        }
        let score = frac.min(1.0 - frac);
        match best {
            Some((_, s)) if s >= score => {}
            _ => best = Some((j, score)),
        }
    }
    best.map(|(j, _)| (j, point[j]))
}

fn apply_fixes(base: &[(f64, f64)], fixes: &[(u32, bool)]) -> Vec<(f64, f64)> {
    let mut bounds = base.to_vec();
    for &(j, v) in fixes {
        let x = if v { 1.0 } else { 0.0 };
        bounds[j as usize] = (x, x);
    }
    bounds
}

pub(crate) fn solve_milp_impl(model: &LinearModel, options: &MilpOptions) -> Result<MilpOutcome, ModelError> {
    model.validate()?;
    let sigma = match model.sense {
        Sense::Max => 1.0,
        Sense::Min => -1.0,
    };
    let simplex = SimplexOptions {
        max_pivots: options.max_pivots,
    };

    let base_bounds: Vec<(f64, f64)> = model.vars.iter().map(|v| (v.lo, v.hi)).collect();
    let root = solve_relaxation(model, Some(&base_bounds), &simplex)?;
    match root.status {
        LpStatus::Infeasible => {
            return Ok(MilpOutcome {
                solution: LpSolution::infeasible(),
                proven_optimal: true,
                best_bound: f64::NAN,
                nodes: 1,
            })
        }
        LpStatus::Unbounded => {
            return Ok(MilpOutcome {
                solution: LpSolution::unbounded(),
                proven_optimal: true,
                best_bound: f64::NAN,
                nodes: 1,
            })
        }
        LpStatus::Optimal => {}
    }

    let stop_at = options.stop_at.map(|s| sigma * s);
    let cutoff = options.cutoff.map(|c| sigma * c);
    // Nodes whose bound cannot beat this floor are discarded outright.
    let floor = cutoff.unwrap_or(f64::NEG_INFINITY);

    if sigma * root.value <= floor {
        return Ok(MilpOutcome {
            solution: LpSolution::infeasible(),
            proven_optimal: true,
            best_bound: root.value,
            nodes: 1,
        });
    }

    let mut nodes = 1usize;
    let mut seq = 0usize;
    let mut incumbent: Option<LpSolution> = None;
    let mut stopped_early = false;

    let accepts = |val: f64, inc: &Option<f64>| -> bool {
        val > floor + 1e-12 && inc.map_or(true, |iv| val > iv + 1e-9)
    };

    // Rounding dive from the root point for an early incumbent.
    {
        let mut bounds = base_bounds.clone();
        let mut current = root.clone();
        loop {
            match most_fractional(model, &current.point) {
                None => {
                    if sigma * current.value > floor + 1e-12 {
                        if stop_at.is_some_and(|s| sigma * current.value >= s) {
                            stopped_early = true;
                        }
                        incumbent = Some(current);
                    }
                    break;
                }
                Some((j, x)) => {
                    let v = x.round().clamp(0.0, 1.0);
                    bounds[j] = (v, v);
                    nodes += 1;
                    if nodes >= options.max_nodes {
                        break;
                    }
                    match solve_relaxation(model, Some(&bounds), &simplex)? {
                        sol if sol.status == LpStatus::Optimal => current = sol,
                        _ => break,
                    }
                }
            }
        }
    }

    let mut heap = BinaryHeap::new();
    match most_fractional(model, &root.point) {
        None => {
            // Root already integral.
            return Ok(match incumbent {
                Some(sol) => MilpOutcome {
                    best_bound: sol.value,
                    solution: sol,
                    proven_optimal: true,
                    nodes,
                },
                None => MilpOutcome {
                    solution: LpSolution::infeasible(),
                    proven_optimal: true,
                    best_bound: root.value,
                    nodes,
                },
            });
        }
        Some((j, _)) => {
            heap.push(Node {
                bound: sigma * root.value,
                seq,
                fixes: Vec::new(),
                frac_var: j,
            });
        }
    }

    let mut inc_value = incumbent.as_ref().map(|s| sigma * s.value);
    let mut exhausted = false;

    while !stopped_early {
        let Some(node) = heap.pop() else { break };
        let prune_at = inc_value.map_or(floor, |iv| iv.max(floor));
        if node.bound <= prune_at + 1e-9 {
            // Best-bound order: every remaining node is dominated too.
            heap.clear();
            break;
        }
        if nodes >= options.max_nodes {
            exhausted = true;
            // Put the node back so the best remaining bound is reported.
            heap.push(node);
            break;
        }
        let j = node.frac_var as u32;
        for &fix in &[false, true] {
            nodes += 1;
            let mut fixes = node.fixes.clone();
            fixes.push((j, fix));
            let bounds = apply_fixes(&base_bounds, &fixes);
            let sol = solve_relaxation(model, Some(&bounds), &simplex)?;
            if sol.status != LpStatus::Optimal {
                continue;
            }
            let val = sigma * sol.value;
            if !accepts(val, &inc_value) {
                continue;
            }
            match most_fractional(model, &sol.point) {
                None => {
                    inc_value = Some(val);
                    incumbent = Some(sol);
                    if stop_at.is_some_and(|s| val >= s) {
                        stopped_early = true;
                        break;
                    }
                }
                Some((fj, _)) => {
                    seq += 1;
                    heap.push(Node {
                        bound: val,
                        seq,
                        fixes,
                        frac_var: fj,
                    });
                }
            }
        }
    }

    let best_bound_max = heap
        .peek()
        .map(|n| n.bound)
        .into_iter()
        .chain(inc_value)
        .fold(f64::NEG_INFINITY, f64::max);

    match incumbent {
        Some(mut sol) => {
            // Duals are meaningless after branching.
            sol.duals.clear();
            sol.reduced_costs.clear();
            Ok(MilpOutcome {
                solution: sol,
                proven_optimal: !exhausted && !stopped_early,
                best_bound: sigma * best_bound_max,
                nodes,
            })
        }
        None => {
            if exhausted {
                Err(ModelError::NodeLimit(nodes))
            } else {
                // Either truly infeasible or nothing above the cutoff; both
                // read as "no solution" to the caller.
                Ok(MilpOutcome {
                    solution: LpSolution::infeasible(),
                    proven_optimal: true,
                    best_bound: f64::NAN,
                    nodes,
                })
            }
        }
    }
}
