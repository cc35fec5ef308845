//! Single-level restriction for three-player games: a big-M MILP whose any
//! feasible solution hands the leader a certified lower bound on the
//! pessimistic value, plus an export-only builder for the exact (but
//! unbounded) quadratically constrained reformulation, meant for external
//! global solvers.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::game::{FollowerProfile, LeaderStrategy, NormalFormGame};
use crate::linear::{
    solve_milp_with, LinearModel, LpStatus, MilpOptions, ModelError, Relation, Sense, VarId,
};

#[derive(Debug, Error)]
pub enum RestrictedError {
    #[error("the restricted program is defined for 3-player games, got {0} players")]
    PlayerCount(usize),
    #[error("the dual bound must be positive, got {0}")]
    BadBound(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Game(#[from] crate::game::GameError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Sign pattern of a regret coefficient vector, deciding how its
/// deactivation machinery is built.
enum RegretKind {
    /// Identically zero: a tautology, dropped.
    Zero,
    /// Deviating never helps: deactivating could only hurt, fixed off.
    NeverHelps,
    /// Deviating always (weakly) helps: deactivating is free, folded into
    /// the row with the indicator fixed on.
    AlwaysHelps,
    /// Genuinely x-dependent: gets an indicator and envelope products.
    Mixed,
}

fn classify(coeffs: &[f64]) -> RegretKind {
    let any_pos = coeffs.iter().any(|c| *c > 0.0);
    let any_neg = coeffs.iter().any(|c| *c < 0.0);
    match (any_pos, any_neg) {
        (false, false) => RegretKind::Zero,
        (true, false) => RegretKind::NeverHelps,
        (false, true) => RegretKind::AlwaysHelps,
        (true, true) => RegretKind::Mixed,
    }
}

/// One indicator-gated deactivation: `p` switches the dual weight between 0
/// and the bound, `q` carries the products of `p` with the leader strategy.
#[derive(Debug, Clone)]
pub struct Deactivator {
    pub pair: (usize, usize),
    pub follower: usize,
    pub deviation: usize,
    pub p: VarId,
    pub q: Vec<VarId>,
}

/// The built restriction with handles into its variables.
#[derive(Debug)]
pub struct BigMModel {
    pub model: LinearModel,
    pub m_bound: f64,
    pub x: Vec<VarId>,
    /// One equilibrium-selector binary per follower action pair, in
    /// lexicographic pair order.
    pub y: Vec<VarId>,
    /// Selector-strategy products, one block per pair.
    pub z: Vec<Vec<VarId>>,
    pub deactivators: Vec<Deactivator>,
}

fn follower_pairs(game: &NormalFormGame) -> Vec<FollowerProfile> {
    game.follower_profiles()
}

/// Builds the big-M restricted program for a three-player game.
pub fn build_restricted_milp(game: &NormalFormGame, m_bound: f64) -> Result<BigMModel, RestrictedError> {
    if game.num_players() != 3 {
        return Err(RestrictedError::PlayerCount(game.num_players()));
    }
    if !(m_bound > 0.0) {
        return Err(RestrictedError::BadBound(m_bound));
    }
    let m3 = game.leader_actions();
    let pairs = follower_pairs(game);
    let mut model = LinearModel::new(Sense::Max);

    let y: Vec<VarId> = pairs
        .iter()
        .map(|p| model.add_binary(format!("y_{}_{}", p.action(0), p.action(1))))
        .collect();
    let x: Vec<VarId> = (0..m3).map(|k| model.add_var(format!("x{k}"), 0.0, 1.0)).collect();
    let z: Vec<Vec<VarId>> = pairs
        .iter()
        .map(|p| {
            (0..m3)
                .map(|k| model.add_var(format!("z_{}_{}_{}", p.action(0), p.action(1), k), 0.0, 1.0))
                .collect()
        })
        .collect();

    // Selector and strategy stochasticity.
    let sel: Vec<(VarId, f64)> = y.iter().map(|id| (*id, 1.0)).collect();
    model.add_row_terms(&sel, Relation::Eq, 1.0);
    let mix: Vec<(VarId, f64)> = x.iter().map(|id| (*id, 1.0)).collect();
    model.add_row_terms(&mix, Relation::Eq, 1.0);

    // Envelope rows tying z to y * x.
    for (pi, _) in pairs.iter().enumerate() {
        for k in 0..m3 {
            model.add_row_terms(&[(z[pi][k], 1.0), (x[k], -1.0)], Relation::Le, 0.0);
            model.add_row_terms(&[(z[pi][k], 1.0), (y[pi], -1.0)], Relation::Le, 0.0);
            model.add_row_terms(
                &[(z[pi][k], 1.0), (x[k], -1.0), (y[pi], -1.0)],
                Relation::Ge,
                -1.0,
            );
        }
    }

    // Equilibrium rows on the products: the selected pair must be an
    // equilibrium; unselected pairs contribute tautologies.
    for (pi, pair) in pairs.iter().enumerate() {
        for follower in 0..2 {
            for deviation in 0..game.num_actions(follower) {
                if deviation == pair.action(follower) {
                    continue;
                }
                let coeffs = crate::formulations::regret_coeffs(game, pair, follower, deviation);
                match classify(&coeffs) {
                    RegretKind::Zero | RegretKind::NeverHelps => continue,
                    _ => {}
                }
                let terms: Vec<(VarId, f64)> =
                    z[pi].iter().zip(&coeffs).map(|(id, c)| (*id, *c)).collect();
                model.add_row_terms(&terms, Relation::Ge, 0.0);
            }
        }
    }

    // Objective: the leader's utility at the selected pair.
    let mut objective: Vec<(VarId, f64)> = Vec::new();
    for (pi, pair) in pairs.iter().enumerate() {
        let slice = game.leader_slice(game.leader(), pair);
        for k in 0..m3 {
            if slice[k] != 0.0 {
                objective.push((z[pi][k], slice[k]));
            }
        }
    }
    model.objective_terms(&objective);

    // Maximin rows: the objective may not exceed the leader's utility at
    // any pair whose deactivation machinery is off.
    let mut deactivators = Vec::new();
    for pair in &pairs {
        let mut terms = objective.clone();
        let slice = game.leader_slice(game.leader(), pair);
        for k in 0..m3 {
            terms.push((x[k], -slice[k]));
        }
        for follower in 0..2 {
            for deviation in 0..game.num_actions(follower) {
                if deviation == pair.action(follower) {
                    continue;
                }
                let coeffs = crate::formulations::regret_coeffs(game, pair, follower, deviation);
                match classify(&coeffs) {
                    RegretKind::Zero | RegretKind::NeverHelps => {}
                    RegretKind::AlwaysHelps => {
                        // Indicator fixed on: the product collapses to the
                        // strategy itself.
                        for k in 0..m3 {
                            if coeffs[k] != 0.0 {
                                terms.push((x[k], m_bound * coeffs[k]));
                            }
                        }
                    }
                    RegretKind::Mixed => {
                        let p = model.add_binary(format!(
                            "p{}_{}_{}_{}",
                            follower + 1,
                            pair.action(0),
                            pair.action(1),
                            deviation
                        ));
                        let q: Vec<VarId> = (0..m3)
                            .map(|k| {
                                model.add_var(
                                    format!(
                                        "q{}_{}_{}_{}_{}",
                                        follower + 1,
                                        pair.action(0),
                                        pair.action(1),
                                        deviation,
                                        k
                                    ),
                                    0.0,
                                    1.0,
                                )
                            })
                            .collect();
                        for k in 0..m3 {
                            model.add_row_terms(&[(q[k], 1.0), (x[k], -1.0)], Relation::Le, 0.0);
                            model.add_row_terms(&[(q[k], 1.0), (p, -1.0)], Relation::Le, 0.0);
                            model.add_row_terms(
                                &[(q[k], 1.0), (x[k], -1.0), (p, -1.0)],
                                Relation::Ge,
                                -1.0,
                            );
                        }
                        for k in 0..m3 {
                            if coeffs[k] != 0.0 {
                                terms.push((q[k], m_bound * coeffs[k]));
                            }
                        }
                        deactivators.push(Deactivator {
                            pair: (pair.action(0), pair.action(1)),
                            follower,
                            deviation,
                            p,
                            q,
                        });
                    }
                }
            }
        }
        model.add_row_terms(&terms, Relation::Le, 0.0);
    }

    Ok(BigMModel {
        model,
        m_bound,
        x,
        y,
        z,
        deactivators,
    })
}

#[derive(Debug, Clone)]
pub enum RestrictedResult {
    Infeasible,
    Feasible {
        value: f64,
        strategy: LeaderStrategy,
        /// Whether the node budget sufficed to prove optimality. The value
        /// is a certified lower bound either way.
        proven_optimal: bool,
        /// Full variable assignment, for envelope inspection.
        point: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct RestrictedOptions {
    pub milp: MilpOptions,
}

impl Default for RestrictedOptions {
    fn default() -> Self {
        RestrictedOptions {
            milp: MilpOptions::default(),
        }
    }
}

/// Solves the restriction for a given dual bound. Any feasible answer's
/// strategy is playable in the true game and its value never exceeds the
/// pessimistic utility there.
pub fn solve_restricted_milp(
    game: &NormalFormGame,
    m_bound: f64,
) -> Result<RestrictedResult, RestrictedError> {
    solve_restricted_milp_with(game, m_bound, &RestrictedOptions::default())
}

pub fn solve_restricted_milp_with(
    game: &NormalFormGame,
    m_bound: f64,
    options: &RestrictedOptions,
) -> Result<RestrictedResult, RestrictedError> {
    let built = build_restricted_milp(game, m_bound)?;
    let outcome = solve_milp_with(&built.model, &options.milp)?;
    match outcome.solution.status {
        LpStatus::Optimal => {
            let raw: Vec<f64> = built.x.iter().map(|id| outcome.solution.point[id.0]).collect();
            Ok(RestrictedResult::Feasible {
                value: outcome.solution.value,
                strategy: LeaderStrategy::normalized(&raw)?,
                proven_optimal: outcome.proven_optimal,
                point: outcome.solution.point,
            })
        }
        _ => Ok(RestrictedResult::Infeasible),
    }
}

// ---------------------------------------------------------------------------
// Quadratically constrained export.

/// A quadratic term `coeff * a * b`.
pub type QuadTerm = (String, String, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct QcqpRow {
    pub name: String,
    pub linear: Vec<(String, f64)>,
    pub quad: Vec<QuadTerm>,
    pub relation: Relation,
    pub rhs: f64,
}

/// The exact single-level reformulation for three players: bilinear
/// selector-strategy products in the objective and equilibrium rows, dual
/// weights multiplying regret forms in the maximin rows. Unbounded in the
/// duals by construction; export-only.
#[derive(Debug, Clone, PartialEq)]
pub struct QcqpModel {
    /// Declared variables in deterministic order.
    pub variables: Vec<String>,
    pub objective: Vec<QuadTerm>,
    pub rows: Vec<QcqpRow>,
}

pub fn build_qcqp(game: &NormalFormGame) -> Result<QcqpModel, RestrictedError> {
    if game.num_players() != 3 {
        return Err(RestrictedError::PlayerCount(game.num_players()));
    }
    let m3 = game.leader_actions();
    let pairs = follower_pairs(game);
    let y_name = |p: &FollowerProfile| format!("y_{}_{}", p.action(0), p.action(1));
    let x_name = |k: usize| format!("x_{k}");
    let b_name = |f: usize, p: &FollowerProfile, d: usize| {
        format!("b{}_{}_{}_{}", f + 1, p.action(0), p.action(1), d)
    };

    let mut variables = Vec::new();
    for p in &pairs {
        variables.push(y_name(p));
    }
    for k in 0..m3 {
        variables.push(x_name(k));
    }
    for p in &pairs {
        for d in 0..game.num_actions(0) {
            variables.push(b_name(0, p, d));
        }
    }
    for p in &pairs {
        for d in 0..game.num_actions(1) {
            variables.push(b_name(1, p, d));
        }
    }

    let mut objective = Vec::new();
    for p in &pairs {
        let slice = game.leader_slice(game.leader(), p);
        for k in 0..m3 {
            if slice[k] != 0.0 {
                objective.push((y_name(p), x_name(k), slice[k]));
            }
        }
    }

    let mut rows = Vec::new();
    rows.push(QcqpRow {
        name: "sel".into(),
        linear: pairs.iter().map(|p| (y_name(p), 1.0)).collect(),
        quad: Vec::new(),
        relation: Relation::Eq,
        rhs: 1.0,
    });
    rows.push(QcqpRow {
        name: "mix".into(),
        linear: (0..m3).map(|k| (x_name(k), 1.0)).collect(),
        quad: Vec::new(),
        relation: Relation::Eq,
        rhs: 1.0,
    });

    // Equilibrium rows on the selector products (nonzero regrets only).
    for p in &pairs {
        for follower in 0..2 {
            for deviation in 0..game.num_actions(follower) {
                if deviation == p.action(follower) {
                    continue;
                }
                let coeffs = crate::formulations::regret_coeffs(game, p, follower, deviation);
                if coeffs.iter().all(|c| *c == 0.0) {
                    continue;
                }
                let quad: Vec<QuadTerm> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(k, c)| (y_name(p), x_name(k), *c))
                    .collect();
                rows.push(QcqpRow {
                    name: format!(
                        "ne{}_{}_{}_{}",
                        follower + 1,
                        p.action(0),
                        p.action(1),
                        deviation
                    ),
                    linear: Vec::new(),
                    quad,
                    relation: Relation::Ge,
                    rhs: 0.0,
                });
            }
        }
    }

    // Maximin rows, one per pair.
    for p in &pairs {
        let mut quad = objective.clone();
        let slice = game.leader_slice(game.leader(), p);
        let linear: Vec<(String, f64)> = (0..m3)
            .filter(|k| slice[*k] != 0.0)
            .map(|k| (x_name(k), -slice[k]))
            .collect();
        for follower in 0..2 {
            for deviation in 0..game.num_actions(follower) {
                let coeffs = crate::formulations::regret_coeffs(game, p, follower, deviation);
                for (k, c) in coeffs.iter().enumerate() {
                    if *c != 0.0 {
                        quad.push((b_name(follower, p, deviation), x_name(k), *c));
                    }
                }
            }
        }
        rows.push(QcqpRow {
            name: format!("lead_{}_{}", p.action(0), p.action(1)),
            linear,
            quad,
            relation: Relation::Le,
            rhs: 0.0,
        });
    }

    Ok(QcqpModel {
        variables,
        objective,
        rows,
    })
}

fn write_terms(
    w: &mut impl Write,
    linear: &[(String, f64)],
    quad: &[QuadTerm],
    double_quad: bool,
) -> io::Result<()> {
    for (name, c) in linear {
        if *c < 0.0 {
            write!(w, " - {} {}", fmt(-c), name)?;
        } else {
            write!(w, " + {} {}", fmt(*c), name)?;
        }
    }
    if !quad.is_empty() {
        write!(w, " + [")?;
        for (a, b, c) in quad {
            let c = if double_quad { 2.0 * c } else { *c };
            if c < 0.0 {
                write!(w, " - {} {} * {}", fmt(-c), a, b)?;
            } else {
                write!(w, " + {} {} * {}", fmt(c), a, b)?;
            }
        }
        write!(w, " ]")?;
        if double_quad {
            write!(w, " / 2")?;
        }
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{}", x)
}

/// Serialises the model in LP text format with bracketed quadratic forms
/// (the objective uses the doubled-coefficient halving convention).
pub fn write_qcqp(model: &QcqpModel, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "Maximize")?;
    write!(w, " obj:")?;
    write_terms(w, &[], &model.objective, true)?;
    writeln!(w)?;
    writeln!(w, "Subject To")?;
    for row in &model.rows {
        write!(w, " {}:", row.name)?;
        write_terms(w, &row.linear, &row.quad, false)?;
        writeln!(w, " {} {}", row.relation, fmt(row.rhs))?;
    }
    writeln!(w, "Bounds")?;
    for v in &model.variables {
        writeln!(w, " {} >= 0", v)?;
    }
    writeln!(w, "End")?;
    Ok(())
}

/// Writes the exact reformulation of a three-player game to `path`.
pub fn export_qcqp(game: &NormalFormGame, path: impl AsRef<Path>) -> Result<(), RestrictedError> {
    let model = build_qcqp(game)?;
    let mut buf = Vec::new();
    write_qcqp(&model, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

/// Parses text produced by [`write_qcqp`] back into a model. Only the
/// subset this module emits is supported; used to verify that serialisation
/// is lossless.
pub fn parse_qcqp_text(text: &str) -> Result<QcqpModel, String> {
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Objective,
        Rows,
        Bounds,
        Done,
    }
    let mut section = Section::Preamble;
    let mut variables = Vec::new();
    let mut objective = Vec::new();
    let mut rows = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "Maximize" => {
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::Rows;
                continue;
            }
            "Bounds" => {
                section = Section::Bounds;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Objective => {
                let body = line.strip_prefix("obj:").ok_or("missing obj label")?;
                let (linear, quad, _) = parse_expr(body)?;
                if !linear.is_empty() {
                    return Err("objective must be purely quadratic".into());
                }
                objective = quad;
            }
            Section::Rows => {
                let (name, rest) = line.split_once(':').ok_or("row without a name")?;
                let (body, relation, rhs) = split_relation(rest)?;
                let (linear, quad, halved) = parse_expr(body)?;
                if halved {
                    return Err("halving convention inside a constraint".into());
                }
                rows.push(QcqpRow {
                    name: name.trim().to_string(),
                    linear,
                    quad,
                    relation,
                    rhs,
                });
            }
            Section::Bounds => {
                let name = line
                    .strip_suffix(">= 0")
                    .ok_or("unsupported bound line")?
                    .trim();
                variables.push(name.to_string());
            }
            Section::Preamble | Section::Done => return Err(format!("unexpected line {line:?}")),
        }
    }
    Ok(QcqpModel {
        variables,
        objective,
        rows,
    })
}

fn split_relation(body: &str) -> Result<(&str, Relation, f64), String> {
    for (tok, rel) in [("<=", Relation::Le), (">=", Relation::Ge), ("=", Relation::Eq)] {
        if let Some(pos) = body.rfind(tok) {
            let (lhs, rhs) = body.split_at(pos);
            let rhs = rhs[tok.len()..].trim();
            let rhs: f64 = rhs.parse().map_err(|_| format!("bad rhs {rhs:?}"))?;
            return Ok((lhs, rel, rhs));
        }
    }
    Err(format!("no relation in {body:?}"))
}

/// Parses `+ c a` linear and `+ c a * b` quadratic terms, with an optional
/// trailing `/ 2` after the bracket (objective convention).
fn parse_expr(body: &str) -> Result<(Vec<(String, f64)>, Vec<QuadTerm>, bool), String> {
    let body = body.trim();
    let (linear_part, quad_part, halved) = match body.find('[') {
        Some(open) => {
            let close = body.rfind(']').ok_or("unclosed bracket")?;
            let tail = body[close + 1..].trim();
            let halved = tail == "/ 2";
            if !halved && !tail.is_empty() {
                return Err(format!("unexpected trailer {tail:?}"));
            }
            let linear = body[..open].trim().trim_end_matches('+').trim();
            (linear, body[open + 1..close].trim(), halved)
        }
        None => (body, "", false),
    };

    let parse_signed = |part: &str| -> Result<Vec<Vec<String>>, String> {
        // Split into sign-prefixed term token groups.
        let toks: Vec<&str> = part.split_whitespace().collect();
        let mut out = Vec::new();
        let mut cur: Vec<String> = Vec::new();
        for t in toks {
            if t == "+" || t == "-" {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                cur.push(t.to_string());
            } else {
                cur.push(t.to_string());
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        Ok(out)
    };

    let mut linear = Vec::new();
    for group in parse_signed(linear_part)? {
        if group.len() == 1 && group[0] == "0" {
            continue;
        }
        if group.len() != 3 {
            return Err(format!("bad linear term {group:?}"));
        }
        let sign = if group[0] == "-" { -1.0 } else { 1.0 };
        let c: f64 = group[1].parse().map_err(|_| "bad coefficient")?;
        linear.push((group[2].clone(), sign * c));
    }

    let mut quad = Vec::new();
    for group in parse_signed(quad_part)? {
        if group.len() != 5 || group[3] != "*" {
            return Err(format!("bad quadratic term {group:?}"));
        }
        let sign = if group[0] == "-" { -1.0 } else { 1.0 };
        let mut c: f64 = group[1].parse().map_err(|_| "bad coefficient")?;
        if halved {
            c /= 2.0;
        }
        quad.push((group[2].clone(), group[4].clone(), sign * c));
    }
    Ok((linear, quad, halved))
}
