//! Builders translating equilibrium-region language into kernel models: the
//! region where a set of follower profiles are all equilibria, the
//! disjunctive region where profiles are equilibria for no follower within a
//! margin, the emptiness check over a configuration, the two-stage
//! supremum program, and the additive-approximation program.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::game::{FollowerProfile, GameError, LeaderStrategy, NormalFormGame};
use crate::linear::{
    solve_lex_with, solve_lp, solve_milp, solve_milp_with, LexLinearModel, LinearModel, LpStatus,
    MilpOptions, ModelError, Relation, Sense, VarId, LEX_PRIMARY_TOL,
};

/// A strategy is considered strictly inside the complement region when the
/// maximised margin exceeds this; below it the configuration is treated as
/// realized only in the closure sense.
pub const EPS_POSITIVE_TOL: f64 = 1e-6;

/// Default cap on the margin variable. Keeps models bounded when no margin
/// row is active; never binds otherwise because margins cannot exceed the
/// payoff spread.
pub const DEFAULT_EPS_CAP: f64 = 100.0;

#[derive(Debug, Error)]
pub enum FormulationError {
    #[error("profile {0} appears in both sides of the configuration")]
    Overlap(FollowerProfile),
    #[error("the configuration must declare at least one equilibrium profile")]
    EmptySPlus,
    #[error("alpha must be positive, got {0}")]
    BadAlpha(f64),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A pair of disjoint profile sets: `s_plus` hypothesised to be equilibria,
/// `s_minus` hypothesised not to be. Full when the two sets cover every
/// follower profile, relaxed otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutcomeConfiguration {
    s_plus: BTreeSet<FollowerProfile>,
    s_minus: BTreeSet<FollowerProfile>,
}

impl OutcomeConfiguration {
    pub fn new(
        s_plus: BTreeSet<FollowerProfile>,
        s_minus: BTreeSet<FollowerProfile>,
    ) -> Result<Self, FormulationError> {
        if let Some(p) = s_plus.intersection(&s_minus).next() {
            return Err(FormulationError::Overlap(p.clone()));
        }
        Ok(OutcomeConfiguration { s_plus, s_minus })
    }

    /// Full configuration: `s_minus` is the complement of `s_plus`.
    pub fn full(game: &NormalFormGame, s_plus: BTreeSet<FollowerProfile>) -> Self {
        let s_minus = game
            .follower_profiles()
            .into_iter()
            .filter(|p| !s_plus.contains(p))
            .collect();
        OutcomeConfiguration { s_plus, s_minus }
    }

    pub fn s_plus(&self) -> &BTreeSet<FollowerProfile> {
        &self.s_plus
    }

    pub fn s_minus(&self) -> &BTreeSet<FollowerProfile> {
        &self.s_minus
    }

    pub fn is_full(&self, game: &NormalFormGame) -> bool {
        self.s_plus.len() + self.s_minus.len() == game.num_follower_profiles()
    }

    pub fn with_added_plus(&self, profile: FollowerProfile) -> Self {
        let mut s_plus = self.s_plus.clone();
        s_plus.insert(profile);
        OutcomeConfiguration {
            s_plus,
            s_minus: self.s_minus.clone(),
        }
    }

    pub fn with_added_minus(&self, profile: FollowerProfile) -> Self {
        let mut s_minus = self.s_minus.clone();
        s_minus.insert(profile);
        OutcomeConfiguration {
            s_plus: self.s_plus.clone(),
            s_minus,
        }
    }
}

/// One deactivatable deviation row inside a disjunction block.
#[derive(Debug, Clone)]
pub struct Indicator {
    pub follower: usize,
    pub deviation: usize,
    pub z: VarId,
    /// The documented deactivation constant: the largest regret the profile
    /// can suffer against this deviation over pure leader play. The actual
    /// row constant adds the margin cap on top so a set indicator fully
    /// releases the row.
    pub big_m: f64,
    pub row: usize,
}

/// Per-profile block encoding "some deviation improves by at least eps".
#[derive(Debug, Clone)]
pub struct DisjunctionBlock {
    pub profile: FollowerProfile,
    pub indicators: Vec<Indicator>,
    /// Row forcing exactly one indicator inactive.
    pub sum_row: usize,
}

/// Row/variable bookkeeping for a built region model.
#[derive(Debug, Clone, Default)]
pub struct RegionModelPieces {
    pub ne_rows: Vec<usize>,
    pub blocks: Vec<DisjunctionBlock>,
}

/// A kernel model over the leader simplex plus handles to its variables.
#[derive(Debug, Clone)]
pub struct RegionModel {
    pub model: LinearModel,
    pub x: Vec<VarId>,
    pub eps: VarId,
    pub eta: Option<VarId>,
    pub pieces: RegionModelPieces,
}

impl RegionModel {
    pub fn strategy_from(&self, point: &[f64]) -> Result<LeaderStrategy, GameError> {
        let raw: Vec<f64> = self.x.iter().map(|id| point[id.0]).collect();
        LeaderStrategy::normalized(&raw)
    }
}

fn eps_cap(game: &NormalFormGame) -> f64 {
    DEFAULT_EPS_CAP.max(game.payoff_spread())
}

/// Coefficients over the leader's actions of the regret a follower suffers
/// by not deviating: own slice minus deviation slice.
pub(crate) fn regret_coeffs(
    game: &NormalFormGame,
    profile: &FollowerProfile,
    follower: usize,
    deviation: usize,
) -> Vec<f64> {
    let own = game.leader_slice(follower, profile);
    let dev_profile = profile.with_deviation(follower, deviation);
    let dev = game.leader_slice(follower, &dev_profile);
    own.iter().zip(dev).map(|(a, b)| a - b).collect()
}

fn is_zero_row(coeffs: &[f64]) -> bool {
    coeffs.iter().all(|c| *c == 0.0)
}

pub(crate) struct RegionBuilder<'g> {
    game: &'g NormalFormGame,
    pub(crate) model: LinearModel,
    pub(crate) x: Vec<VarId>,
    pub(crate) eps: VarId,
    pieces: RegionModelPieces,
    eps_cap: f64,
}

impl<'g> RegionBuilder<'g> {
    pub(crate) fn new(game: &'g NormalFormGame) -> Self {
        Self::with_cap(game, eps_cap(game))
    }

    /// Builder whose margin cap is tightened to the best margin any of the
    /// excluded profiles can achieve; the optimal margin never exceeds it,
    /// so the cap is exact while keeping deactivation constants small.
    pub(crate) fn for_configuration(game: &'g NormalFormGame, cfg: &OutcomeConfiguration) -> Self {
        let mut cap = eps_cap(game);
        for profile in cfg.s_minus() {
            let mut profile_cap = 0.0f64;
            for follower in 0..game.num_followers() {
                for deviation in 0..game.num_actions(follower) {
                    if deviation == profile.action(follower) {
                        continue;
                    }
                    let coeffs = regret_coeffs(game, profile, follower, deviation);
                    for c in coeffs {
                        profile_cap = profile_cap.max(-c);
                    }
                }
            }
            cap = cap.min(profile_cap.max(0.0));
        }
        Self::with_cap(game, cap)
    }

    fn with_cap(game: &'g NormalFormGame, cap: f64) -> Self {
        let mut model = LinearModel::new(Sense::Max);
        let x: Vec<VarId> = (0..game.leader_actions())
            .map(|k| model.add_var(format!("x{k}"), 0.0, 1.0))
            .collect();
        let eps = model.add_var("eps", 0.0, cap);
        let simplex: Vec<(VarId, f64)> = x.iter().map(|id| (*id, 1.0)).collect();
        model.add_row_terms(&simplex, Relation::Eq, 1.0);
        RegionBuilder {
            game,
            model,
            x,
            eps,
            pieces: RegionModelPieces::default(),
            eps_cap: cap,
        }
    }

    fn x_terms(&self, coeffs: &[f64]) -> Vec<(VarId, f64)> {
        self.x
            .iter()
            .zip(coeffs)
            .map(|(id, c)| (*id, *c))
            .collect()
    }

    /// Equilibrium-membership rows for one profile: every nonzero regret is
    /// nonnegative. Zero-regret rows are tautologies and are dropped.
    pub(crate) fn add_ne_rows(&mut self, profile: &FollowerProfile) {
        for follower in 0..self.game.num_followers() {
            for deviation in 0..self.game.num_actions(follower) {
                if deviation == profile.action(follower) {
                    continue;
                }
                let coeffs = regret_coeffs(self.game, profile, follower, deviation);
                if is_zero_row(&coeffs) {
                    continue;
                }
                let terms = self.x_terms(&coeffs);
                let row = self.model.add_row_terms(&terms, Relation::Ge, 0.0);
                self.pieces.ne_rows.push(row);
            }
        }
    }

    /// Disjunction block for one profile: regret_d(x) + eps <= M_d z_d with
    /// exactly one indicator forced to zero. Deviations whose regret is
    /// identically zero cannot realise a positive margin and are dropped; a
    /// profile left with no usable deviation is an equilibrium everywhere,
    /// which the empty sum row correctly turns into infeasibility.
    pub(crate) fn add_disjunction_block(&mut self, profile: &FollowerProfile) {
        let mut indicators = Vec::new();
        for follower in 0..self.game.num_followers() {
            for deviation in 0..self.game.num_actions(follower) {
                if deviation == profile.action(follower) {
                    continue;
                }
                let coeffs = regret_coeffs(self.game, profile, follower, deviation);
                if is_zero_row(&coeffs) {
                    continue;
                }
                let big_m = coeffs.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
                let z = self.model.add_binary(format!(
                    "z_{}_{}_{}",
                    profile, follower, deviation
                ));
                let mut terms = self.x_terms(&coeffs);
                terms.push((self.eps, 1.0));
                terms.push((z, -(big_m.max(0.0) + self.eps_cap)));
                let row = self.model.add_row_terms(&terms, Relation::Le, 0.0);
                indicators.push(Indicator {
                    follower,
                    deviation,
                    z,
                    big_m,
                    row,
                });
            }
        }
        let z_terms: Vec<(VarId, f64)> = indicators.iter().map(|i| (i.z, 1.0)).collect();
        let rhs = indicators.len() as f64 - 1.0;
        let sum_row = self.model.add_row_terms(&z_terms, Relation::Eq, rhs);
        self.pieces.blocks.push(DisjunctionBlock {
            profile: profile.clone(),
            indicators,
            sum_row,
        });
    }

    fn add_region(&mut self, cfg: &OutcomeConfiguration) {
        for profile in cfg.s_plus() {
            self.add_ne_rows(profile);
        }
        for profile in cfg.s_minus() {
            self.add_disjunction_block(profile);
        }
    }

    /// Closure form of a disjunction block: some deviation weakly improves.
    /// The margin variable plays no part, so the deactivation constant stays
    /// at the largest regret alone, which keeps the relaxation tight.
    fn add_closure_block(&mut self, profile: &FollowerProfile) {
        let mut indicators = Vec::new();
        for follower in 0..self.game.num_followers() {
            for deviation in 0..self.game.num_actions(follower) {
                if deviation == profile.action(follower) {
                    continue;
                }
                let coeffs = regret_coeffs(self.game, profile, follower, deviation);
                if is_zero_row(&coeffs) {
                    continue;
                }
                let big_m = coeffs.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
                let z = self
                    .model
                    .add_binary(format!("zc_{}_{}_{}", profile, follower, deviation));
                let mut terms = self.x_terms(&coeffs);
                terms.push((z, -big_m.max(0.0)));
                let row = self.model.add_row_terms(&terms, Relation::Le, 0.0);
                indicators.push(Indicator {
                    follower,
                    deviation,
                    z,
                    big_m,
                    row,
                });
            }
        }
        let z_terms: Vec<(VarId, f64)> = indicators.iter().map(|i| (i.z, 1.0)).collect();
        let rhs = indicators.len() as f64 - 1.0;
        let sum_row = self.model.add_row_terms(&z_terms, Relation::Eq, rhs);
        self.pieces.blocks.push(DisjunctionBlock {
            profile: profile.clone(),
            indicators,
            sum_row,
        });
    }

    /// Closure-region rows with disjunction blocks restricted to live
    /// excluded profiles; the other excluded profiles hold everywhere at
    /// the closure.
    fn add_closure_region_filtered(
        &mut self,
        cfg: &OutcomeConfiguration,
        live: &BTreeSet<FollowerProfile>,
    ) {
        for profile in cfg.s_plus() {
            self.add_ne_rows(profile);
        }
        for profile in cfg.s_minus() {
            if live.contains(profile) {
                self.add_closure_block(profile);
            }
        }
    }

    fn leader_utility_terms(&self, profile: &FollowerProfile) -> Vec<(VarId, f64)> {
        let slice = self.game.leader_slice(self.game.leader(), profile);
        self.x_terms(slice)
    }

    fn finish(self, eta: Option<VarId>) -> RegionModel {
        RegionModel {
            model: self.model,
            x: self.x,
            eps: self.eps,
            eta,
            pieces: self.pieces,
        }
    }
}

fn validate_cfg(game: &NormalFormGame, cfg: &OutcomeConfiguration) -> Result<(), FormulationError> {
    for profile in cfg.s_plus().iter().chain(cfg.s_minus()) {
        game.check_follower_profile(profile)?;
    }
    Ok(())
}

/// Margin-maximisation model: maximise eps over strategies realizing the
/// configuration with margin at least eps on every declared non-equilibrium.
pub fn build_check_emptiness(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
) -> Result<RegionModel, FormulationError> {
    validate_cfg(game, cfg)?;
    let mut b = RegionBuilder::for_configuration(game, cfg);
    b.add_region(cfg);
    b.model.objective_terms(&[(b.eps, 1.0)]);
    Ok(b.finish(None))
}

#[derive(Debug, Clone)]
pub enum Emptiness {
    Empty,
    NonEmpty { epsilon: f64, witness: LeaderStrategy },
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }
}

/// Decides whether the configuration's region contains any strategy
/// strictly: empty when the best achievable margin is zero (within
/// tolerance) or the model is infeasible.
pub fn check_emptiness(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
) -> Result<Emptiness, FormulationError> {
    let region = build_check_emptiness(game, cfg)?;
    let sol = solve_milp(&region.model)?;
    match sol.status {
        LpStatus::Optimal if sol.value > EPS_POSITIVE_TOL => Ok(Emptiness::NonEmpty {
            epsilon: sol.value,
            witness: region.strategy_from(&sol.point)?,
        }),
        LpStatus::Optimal | LpStatus::Infeasible => Ok(Emptiness::Empty),
        LpStatus::Unbounded => unreachable!("eps is capped, the model is bounded"),
    }
}

/// Profiles that are equilibria under at least one commitment. A profile
/// outside this set imposes a vacuous closure constraint (some deviation
/// strictly improves everywhere), which the fast solve paths exploit.
pub(crate) fn live_profile_set(
    game: &NormalFormGame,
) -> Result<BTreeSet<FollowerProfile>, FormulationError> {
    let mut live = BTreeSet::new();
    for profile in game.follower_profiles() {
        let region = profile_region_lp(game, &profile);
        if solve_lp(&region.model)?.status == LpStatus::Optimal {
            live.insert(profile);
        }
    }
    Ok(live)
}

/// The membership-region utility maximiser: LP bound plus its argmax, used
/// both as a prune bound and as a witness candidate.
fn psi_bound_lp_with_point(
    game: &NormalFormGame,
    s_plus: &BTreeSet<FollowerProfile>,
) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
    let mut b = RegionBuilder::new(game);
    let tensor = game.payoff_tensor(game.leader());
    let (lo, hi) = tensor
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let eta = b.model.add_var("eta", lo - 1.0, hi + 1.0);
    for profile in s_plus {
        b.add_ne_rows(profile);
        let mut terms = b.leader_utility_terms(profile);
        terms.push((eta, -1.0));
        b.model.add_row_terms(&terms, Relation::Ge, 0.0);
    }
    b.model.objective_terms(&[(eta, 1.0)]);
    let sol = solve_lp(&b.model)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    let raw: Vec<f64> = b.x.iter().map(|id| sol.point[id.0]).collect();
    Ok(Some((sol.value, LeaderStrategy::normalized(&raw)?)))
}

/// Depth-first search over per-profile deviation choices: at each level one
/// excluded profile commits to one deviation whose improvement must reach
/// the margin variable, and a small LP maximising the margin over the rows
/// so far both prunes (the bound is monotone along a branch) and, at the
/// leaves, certifies. Exact over the choice space, deterministic, and far
/// better behaved than big-M branch-and-bound on these highly degenerate
/// disjunctions.
struct DisjunctSearch<'g> {
    game: &'g NormalFormGame,
    model: LinearModel,
    x: Vec<VarId>,
    eps: VarId,
    /// Per level: the usable deviations of one excluded profile, as margin
    /// rows over the strategy variables. Levels are ordered most
    /// constrained first; within a level, largest root margin first.
    levels: Vec<Vec<Vec<(VarId, f64)>>>,
    /// Smallest of the root margin bounds over this level and all deeper
    /// ones; no branch can achieve more.
    suffix_bound: Vec<f64>,
    threshold: f64,
    lp_calls: usize,
}

impl<'g> DisjunctSearch<'g> {
    const LP_BUDGET: usize = 2_000_000;

    /// Prepares the level structure: for every live excluded profile, each
    /// deviation's best achievable margin over the base region (one LP per
    /// deviation). Deviations that cannot reach the threshold are dropped;
    /// a profile left with none makes the whole search trivially empty.
    fn prepare(&mut self, profiles: &[FollowerProfile]) -> Result<bool, FormulationError> {
        let mut levels: Vec<(Vec<(f64, Vec<(VarId, f64)>)>, f64)> = Vec::new();
        for profile in profiles {
            let mut devs: Vec<(f64, Vec<(VarId, f64)>)> = Vec::new();
            for follower in 0..self.game.num_followers() {
                for deviation in 0..self.game.num_actions(follower) {
                    if deviation == profile.action(follower) {
                        continue;
                    }
                    let coeffs = regret_coeffs(self.game, profile, follower, deviation);
                    if is_zero_row(&coeffs) {
                        continue;
                    }
                    let mut terms: Vec<(VarId, f64)> = self
                        .x
                        .iter()
                        .zip(&coeffs)
                        .map(|(id, c)| (*id, *c))
                        .collect();
                    terms.push((self.eps, 1.0));
                    let mark = self.model.num_rows();
                    self.model.add_row_terms(&terms, Relation::Le, 0.0);
                    self.lp_calls += 1;
                    let sol = solve_lp(&self.model)?;
                    self.model.truncate_rows(mark);
                    if sol.status == LpStatus::Optimal && sol.value > self.threshold {
                        devs.push((sol.value, terms));
                    }
                }
            }
            if devs.is_empty() {
                return Ok(false);
            }
            // Largest root margin first within the level.
            devs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
            let level_bound = devs[0].0;
            levels.push((devs, level_bound));
        }
        // Most constrained profile first.
        levels.sort_by(|a, b| {
            a.0.len()
                .cmp(&b.0.len())
                .then_with(|| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        });
        let mut suffix = vec![f64::INFINITY; levels.len() + 1];
        for i in (0..levels.len()).rev() {
            suffix[i] = suffix[i + 1].min(levels[i].1);
        }
        self.suffix_bound = suffix;
        self.levels = levels
            .into_iter()
            .map(|(devs, _)| devs.into_iter().map(|(_, rows)| rows).collect())
            .collect();
        Ok(true)
    }

    /// Finds a choice of one deviation per level whose joint margin exceeds
    /// the threshold, depth first with monotone bound pruning. `None` means
    /// no choice reaches the threshold.
    fn run(&mut self, profiles: &[FollowerProfile]) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
        if !self.prepare(profiles)? {
            return Ok(None);
        }
        self.dfs(0)
    }

    fn dfs(&mut self, depth: usize) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
        if self.suffix_bound[depth] <= self.threshold {
            return Ok(None);
        }
        self.lp_calls += 1;
        if self.lp_calls > Self::LP_BUDGET {
            return Err(FormulationError::Model(ModelError::NodeLimit(self.lp_calls)));
        }
        let sol = solve_lp(&self.model)?;
        if sol.status != LpStatus::Optimal || sol.value <= self.threshold {
            return Ok(None);
        }
        if depth == self.levels.len() {
            let raw: Vec<f64> = self.x.iter().map(|id| sol.point[id.0]).collect();
            let value = sol.value.min(self.suffix_bound[0]);
            return Ok(Some((value, LeaderStrategy::normalized(&raw)?)));
        }
        for choice in 0..self.levels[depth].len() {
            let rows = self.levels[depth][choice].clone();
            let mark = self.model.num_rows();
            self.model.add_row_terms(&rows, Relation::Le, 0.0);
            let found = self.dfs(depth + 1)?;
            self.model.truncate_rows(mark);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Builds the search for "some strategy on the membership region of the
/// declared equilibria (meeting an optional per-equilibrium leader-utility
/// floor) misses every live excluded profile by more than `threshold`".
fn disjunct_search<'g>(
    game: &'g NormalFormGame,
    cfg: &OutcomeConfiguration,
    live: &BTreeSet<FollowerProfile>,
    threshold: f64,
    utility_floor: Option<f64>,
) -> (DisjunctSearch<'g>, Vec<FollowerProfile>) {
    let mut b = RegionBuilder::for_configuration(game, cfg);
    for profile in cfg.s_plus() {
        b.add_ne_rows(profile);
        if let Some(floor) = utility_floor {
            let terms = b.leader_utility_terms(profile);
            b.model.add_row_terms(&terms, Relation::Ge, floor);
        }
    }
    b.model.objective_terms(&[(b.eps, 1.0)]);
    let profiles: Vec<FollowerProfile> = cfg
        .s_minus()
        .iter()
        .filter(|p| live.contains(*p))
        .cloned()
        .collect();
    (
        DisjunctSearch {
            game,
            model: b.model,
            x: b.x,
            eps: b.eps,
            levels: Vec::new(),
            suffix_bound: Vec::new(),
            threshold,
            lp_calls: 0,
        },
        profiles,
    )
}

/// Emptiness dichotomy without the exact optimal margin: cheap witness
/// candidates are tried through the game layer first, then the disjunct
/// search runs on the live excluded profiles. An exhausted search is a
/// sound emptiness proof (dropping dead profiles only enlarges the region);
/// a found witness is certified against the full configuration, falling
/// back to the exact program in the rare boundary case. Agrees with
/// [`check_emptiness`] on the empty/nonempty answer.
pub(crate) fn check_emptiness_quick(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    live: &BTreeSet<FollowerProfile>,
) -> Result<Emptiness, FormulationError> {
    // Heuristic witnesses: the membership-region utility maximiser and the
    // uniform commitment, certified through the game layer.
    let mut candidates: Vec<LeaderStrategy> = vec![LeaderStrategy::uniform(game.leader_actions())];
    if !cfg.s_plus().is_empty() {
        if let Some((_, x)) = psi_bound_lp_with_point(game, cfg.s_plus())? {
            candidates.push(x);
        }
    }
    for x in candidates {
        let margin = crate::oracle::realization_margin(game, &x, cfg);
        if margin > EPS_POSITIVE_TOL {
            return Ok(Emptiness::NonEmpty {
                epsilon: margin,
                witness: x,
            });
        }
    }

    let (mut search, minus) = disjunct_search(game, cfg, live, EPS_POSITIVE_TOL, None);
    match search.run(&minus)? {
        None => Ok(Emptiness::Empty),
        Some((eps, witness)) => {
            let margin = crate::oracle::realization_margin(game, &witness, cfg);
            if margin > EPS_POSITIVE_TOL {
                return Ok(Emptiness::NonEmpty {
                    epsilon: margin.min(eps),
                    witness,
                });
            }
            // The witness sat on a dropped profile's boundary: re-run the
            // search constraining every excluded profile, which decides the
            // dichotomy exactly (a leaf then bounds all margins itself).
            let all: Vec<FollowerProfile> = cfg.s_minus().iter().cloned().collect();
            let (mut search, _) = disjunct_search(game, cfg, live, EPS_POSITIVE_TOL, None);
            match search.run(&all)? {
                Some((eps, witness)) => Ok(Emptiness::NonEmpty {
                    epsilon: eps,
                    witness,
                }),
                None => Ok(Emptiness::Empty),
            }
        }
    }
}

/// A region model with a two-stage objective and its variable handles.
#[derive(Debug, Clone)]
pub struct LexRegionModel {
    pub lex: LexLinearModel,
    pub x: Vec<VarId>,
    pub eps: VarId,
    pub eta: VarId,
    pub pieces: RegionModelPieces,
}

/// Supremum program for a configuration with declared equilibria: maximise
/// the worst declared-equilibrium leader utility first, the realization
/// margin second. The margin constraints enter at the closure (eps is free
/// in stage one), so the stage-1 optimum is the supremum over the region's
/// closure.
pub fn build_lex_sup(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
) -> Result<LexRegionModel, FormulationError> {
    validate_cfg(game, cfg)?;
    if cfg.s_plus().is_empty() {
        return Err(FormulationError::EmptySPlus);
    }
    let mut b = RegionBuilder::for_configuration(game, cfg);
    let tensor = game.payoff_tensor(game.leader());
    let (lo, hi) = tensor.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
        (l.min(v), h.max(v))
    });
    let eta = b.model.add_var("eta", lo - 1.0, hi + 1.0);
    b.add_region(cfg);
    for profile in cfg.s_plus() {
        let mut terms = b.leader_utility_terms(profile);
        terms.push((eta, -1.0));
        b.model.add_row_terms(&terms, Relation::Ge, 0.0);
    }
    b.model.objective_terms(&[(eta, 1.0)]);
    let eps = b.eps;
    let region = b.finish(Some(eta));
    Ok(LexRegionModel {
        lex: LexLinearModel::new(region.model, &[(eps, 1.0)]),
        x: region.x,
        eps,
        eta,
        pieces: region.pieces,
    })
}

#[derive(Debug, Clone)]
pub struct LexSupOutcome {
    /// Stage-1 value: supremum of the worst declared-equilibrium utility
    /// over the closure of the region.
    pub eta: f64,
    /// Stage-2 value: best margin compatible with the stage-1 optimum.
    pub eps_star: f64,
    pub witness: LeaderStrategy,
}

/// Solves the supremum program; `None` when the closure region is empty.
pub fn solve_lex_sup(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
) -> Result<Option<LexSupOutcome>, FormulationError> {
    let live = live_profile_set(game)?;
    solve_lex_sup_cached(game, cfg, &live)
}

/// Threshold above which a realization margin counts as a comfortable
/// interior certificate for the fast solve paths.
const COMFORT_MARGIN: f64 = 1e-3;

/// Exact maximum of the worst declared-equilibrium utility over the closure
/// region, by depth-first search over per-profile weak-deviation choices
/// with LP bound pruning. Each node LP maximises the utility floor over the
/// membership region plus the chosen weak-deviation rows; deeper rows only
/// lower it, so a node whose bound cannot beat the incumbent (or the
/// caller's cutoff) closes its whole subtree. `None` when the closure
/// region is empty or nothing beats the cutoff.
fn closure_supremum(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    live: &BTreeSet<FollowerProfile>,
    cutoff: Option<f64>,
) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
    let mut b = RegionBuilder::new(game);
    let tensor = game.payoff_tensor(game.leader());
    let (lo, hi) = tensor
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let eta = b.model.add_var("eta", lo - 1.0, hi + 1.0);
    for profile in cfg.s_plus() {
        b.add_ne_rows(profile);
        let mut terms = b.leader_utility_terms(profile);
        terms.push((eta, -1.0));
        b.model.add_row_terms(&terms, Relation::Ge, 0.0);
    }
    b.model.objective_terms(&[(eta, 1.0)]);
    let mut model = b.model;
    let x = b.x;

    // Levels: one per live excluded profile, choices are its weak-deviation
    // rows (regret <= 0), pre-filtered and ordered by their root bound.
    let mut levels: Vec<Vec<(f64, Vec<(VarId, f64)>)>> = Vec::new();
    for profile in cfg.s_minus() {
        if !live.contains(profile) {
            continue;
        }
        let mut choices = Vec::new();
        for follower in 0..game.num_followers() {
            for deviation in 0..game.num_actions(follower) {
                if deviation == profile.action(follower) {
                    continue;
                }
                let coeffs = regret_coeffs(game, profile, follower, deviation);
                if is_zero_row(&coeffs) {
                    continue;
                }
                let terms: Vec<(VarId, f64)> =
                    x.iter().zip(&coeffs).map(|(id, c)| (*id, *c)).collect();
                let mark = model.num_rows();
                model.add_row_terms(&terms, Relation::Le, 0.0);
                let sol = solve_lp(&model)?;
                model.truncate_rows(mark);
                if sol.status == LpStatus::Optimal {
                    choices.push((sol.value, terms));
                }
            }
        }
        if choices.is_empty() {
            return Ok(None);
        }
        choices.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
        levels.push(choices);
    }
    levels.sort_by_key(|l| l.len());

    struct Dfs<'m> {
        model: &'m mut LinearModel,
        x: &'m [VarId],
        levels: &'m [Vec<(f64, Vec<(VarId, f64)>)>],
        best: f64,
        best_point: Option<LeaderStrategy>,
        lp_calls: usize,
    }
    impl Dfs<'_> {
        fn go(&mut self, depth: usize) -> Result<(), FormulationError> {
            self.lp_calls += 1;
            if self.lp_calls > 2_000_000 {
                return Err(FormulationError::Model(ModelError::NodeLimit(self.lp_calls)));
            }
            let sol = solve_lp(self.model)?;
            if sol.status != LpStatus::Optimal || sol.value <= self.best + 1e-9 {
                return Ok(());
            }
            if depth == self.levels.len() {
                self.best = sol.value;
                let raw: Vec<f64> = self.x.iter().map(|id| sol.point[id.0]).collect();
                self.best_point = Some(LeaderStrategy::normalized(&raw)?);
                return Ok(());
            }
            for (root_bound, rows) in &self.levels[depth] {
                if *root_bound <= self.best + 1e-9 {
                    break; // choices are sorted by root bound
                }
                let mark = self.model.num_rows();
                self.model.add_row_terms(rows, Relation::Le, 0.0);
                self.go(depth + 1)?;
                self.model.truncate_rows(mark);
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        model: &mut model,
        x: &x,
        levels: &levels,
        best: cutoff.unwrap_or(f64::NEG_INFINITY),
        best_point: None,
        lp_calls: 0,
    };
    dfs.go(0)?;
    let best = dfs.best;
    Ok(dfs.best_point.map(|p| (best, p)))
}

/// [`solve_lex_sup`] with the live-profile set precomputed by the caller.
///
/// Exact reductions applied:
/// - when the membership-region maximiser already realizes the
///   configuration with a comfortable margin, it is the stage-1 optimum and
///   an attainment witness at once, and no integer program runs;
/// - stage one only carries disjunction blocks for live excluded profiles
///   (the rest hold everywhere at the closure);
/// - stage two runs with an early stop and a positivity cutoff, since only
///   the attainment dichotomy and a witness are consumed.
pub(crate) fn solve_lex_sup_cached(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    live: &BTreeSet<FollowerProfile>,
) -> Result<Option<LexSupOutcome>, FormulationError> {
    solve_lex_sup_pruned(game, cfg, live, None)
}

/// [`solve_lex_sup_cached`] with an incumbent cutoff: configurations whose
/// stage-1 value cannot strictly beat the cutoff report `None` without
/// being solved to optimality.
pub(crate) fn solve_lex_sup_pruned(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    live: &BTreeSet<FollowerProfile>,
    cutoff: Option<f64>,
) -> Result<Option<LexSupOutcome>, FormulationError> {
    validate_cfg(game, cfg)?;
    if cfg.s_plus().is_empty() {
        return Err(FormulationError::EmptySPlus);
    }
    let Some((bound, bound_point)) = psi_bound_lp_with_point(game, cfg.s_plus())? else {
        return Ok(None);
    };
    if cutoff.is_some_and(|c| bound <= c) {
        return Ok(None);
    }
    if crate::oracle::realization_margin(game, &bound_point, cfg) > COMFORT_MARGIN {
        return Ok(Some(LexSupOutcome {
            eta: bound,
            eps_star: crate::oracle::realization_margin(game, &bound_point, cfg),
            witness: bound_point,
        }));
    }

    // Stage 1: supremum over the closure, live profiles only.
    let Some((eta_star, stage1_witness)) = closure_supremum(game, cfg, live, cutoff)? else {
        return Ok(None);
    };

    // Stage 2: attainment dichotomy at the stage-1 value.
    let floor = Some(eta_star - LEX_PRIMARY_TOL);
    let (mut search, minus) = disjunct_search(game, cfg, live, EPS_POSITIVE_TOL, floor);
    match search.run(&minus)? {
        None => Ok(Some(LexSupOutcome {
            eta: eta_star,
            eps_star: 0.0,
            witness: stage1_witness,
        })),
        Some((eps, witness)) => {
            let margin = crate::oracle::realization_margin(game, &witness, cfg);
            if margin > EPS_POSITIVE_TOL {
                return Ok(Some(LexSupOutcome {
                    eta: eta_star,
                    eps_star: margin.min(eps),
                    witness,
                }));
            }
            // Boundary interference from a dropped profile: decide with
            // every excluded profile constrained.
            let all: Vec<FollowerProfile> = cfg.s_minus().iter().cloned().collect();
            let (mut search, _) = disjunct_search(game, cfg, live, EPS_POSITIVE_TOL, floor);
            match search.run(&all)? {
                Some((eps, witness)) => Ok(Some(LexSupOutcome {
                    eta: eta_star,
                    eps_star: eps,
                    witness,
                })),
                None => Ok(Some(LexSupOutcome {
                    eta: eta_star,
                    eps_star: 0.0,
                    witness: stage1_witness,
                })),
            }
        }
    }
}

/// Approximation dichotomy: a strictly realized strategy whose declared
/// equilibria all pay at least `s - alpha`. The margin is any comfortably
/// positive one, not the maximum.
pub(crate) fn solve_alpha_approx_quick(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    s: f64,
    alpha: f64,
    live: &BTreeSet<FollowerProfile>,
) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
    if !(alpha > 0.0) {
        return Err(FormulationError::BadAlpha(alpha));
    }
    if cfg.s_plus().is_empty() {
        return Err(FormulationError::EmptySPlus);
    }
    let (mut search, minus) = disjunct_search(game, cfg, live, EPS_POSITIVE_TOL, Some(s - alpha));
    if let Some((eps, witness)) = search.run(&minus)? {
        let margin = crate::oracle::realization_margin(game, &witness, cfg);
        if margin > EPS_POSITIVE_TOL {
            return Ok(Some((margin.min(eps), witness)));
        }
    }
    // Decide with every excluded profile constrained; a leaf then bounds
    // all margins itself.
    let all: Vec<FollowerProfile> = cfg.s_minus().iter().cloned().collect();
    let (mut search, _) = disjunct_search(game, cfg, live, EPS_POSITIVE_TOL, Some(s - alpha));
    Ok(search.run(&all)?)
}

/// Approximation program: maximise the margin subject to every declared
/// equilibrium granting the leader at least `s - alpha`.
pub fn build_alpha_approx(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    s: f64,
    alpha: f64,
) -> Result<RegionModel, FormulationError> {
    validate_cfg(game, cfg)?;
    if !(alpha > 0.0) {
        return Err(FormulationError::BadAlpha(alpha));
    }
    if cfg.s_plus().is_empty() {
        return Err(FormulationError::EmptySPlus);
    }
    let mut b = RegionBuilder::for_configuration(game, cfg);
    b.add_region(cfg);
    for profile in cfg.s_plus() {
        let terms = b.leader_utility_terms(profile);
        b.model.add_row_terms(&terms, Relation::Ge, s - alpha);
    }
    b.model.objective_terms(&[(b.eps, 1.0)]);
    Ok(b.finish(None))
}

/// Solves the approximation program; `None` when it is infeasible, which at
/// full configurations can only be numerical (the margin maximiser exists).
pub fn solve_alpha_approx(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    s: f64,
    alpha: f64,
) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
    solve_alpha_approx_with(game, cfg, s, alpha, &MilpOptions::default())
}

/// [`solve_alpha_approx`] with solver options; an early stop still returns
/// a strictly realized strategy meeting the utility floor, just not the one
/// with the largest margin.
pub(crate) fn solve_alpha_approx_with(
    game: &NormalFormGame,
    cfg: &OutcomeConfiguration,
    s: f64,
    alpha: f64,
    options: &MilpOptions,
) -> Result<Option<(f64, LeaderStrategy)>, FormulationError> {
    let region = build_alpha_approx(game, cfg, s, alpha)?;
    let out = solve_milp_with(&region.model, options)?;
    match out.solution.status {
        LpStatus::Optimal => Ok(Some((
            out.solution.value,
            region.strategy_from(&out.solution.point)?,
        ))),
        _ => Ok(None),
    }
}

/// LP upper bound on the stage-1 supremum value of a configuration: the
/// worst declared-equilibrium utility maximised over the membership region
/// alone, ignoring the margin rows. `None` when even that region is empty.
pub(crate) fn psi_bound_lp(
    game: &NormalFormGame,
    s_plus: &BTreeSet<FollowerProfile>,
) -> Result<Option<f64>, FormulationError> {
    debug_assert!(!s_plus.is_empty());
    let mut b = RegionBuilder::new(game);
    let tensor = game.payoff_tensor(game.leader());
    let (lo, hi) = tensor.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
        (l.min(v), h.max(v))
    });
    let eta = b.model.add_var("eta", lo - 1.0, hi + 1.0);
    for profile in s_plus {
        b.add_ne_rows(profile);
        let mut terms = b.leader_utility_terms(profile);
        terms.push((eta, -1.0));
        b.model.add_row_terms(&terms, Relation::Ge, 0.0);
    }
    b.model.objective_terms(&[(eta, 1.0)]);
    let sol = solve_lp(&b.model)?;
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.value)),
        _ => Ok(None),
    }
}

/// LP over the membership region of a single profile, maximising the
/// leader's utility there. Returns the region model for witness recovery.
pub(crate) fn profile_region_lp(game: &NormalFormGame, profile: &FollowerProfile) -> RegionModel {
    let mut b = RegionBuilder::new(game);
    b.add_ne_rows(profile);
    let terms = b.leader_utility_terms(profile);
    b.model.objective_terms(&terms);
    b.finish(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{make_paper_example, PaperExample};
    use crate::game::{is_pure_ne, leader_pessimistic_utility};

    fn profile(actions: &[usize]) -> FollowerProfile {
        FollowerProfile::new(actions.to_vec())
    }

    fn cfg(plus: &[&[usize]], minus: &[&[usize]]) -> OutcomeConfiguration {
        OutcomeConfiguration::new(
            plus.iter().map(|a| profile(a)).collect(),
            minus.iter().map(|a| profile(a)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn emptiness_margin_on_nonexistence_game() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1]], &[&[1, 0]]);
        match check_emptiness(&game, &c).unwrap() {
            Emptiness::NonEmpty { epsilon, witness } => {
                assert!((epsilon - 0.5).abs() < 1e-6, "eps {epsilon}");
                assert!(witness.prob(1) < 1e-6, "witness should sit at rho = 0");
            }
            Emptiness::Empty => panic!("region is not empty"),
        }
    }

    #[test]
    fn emptiness_detects_impossible_profiles() {
        let game = make_paper_example(PaperExample::Nonexistence);
        // (0,0) is an equilibrium for no commitment.
        let c = cfg(&[&[0, 0]], &[]);
        assert!(check_emptiness(&game, &c).unwrap().is_empty());
    }

    #[test]
    fn emptiness_with_both_equilibria_needs_high_rho() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1], &[1, 0]], &[]);
        match check_emptiness(&game, &c).unwrap() {
            Emptiness::NonEmpty { witness, .. } => {
                assert!(witness.prob(1) >= 0.5 - 1e-6);
            }
            Emptiness::Empty => panic!("nonempty for rho >= 1/2"),
        }
    }

    #[test]
    fn empty_configuration_is_trivially_nonempty() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[], &[]);
        match check_emptiness(&game, &c).unwrap() {
            Emptiness::NonEmpty { epsilon, .. } => {
                // No margin row active: eps runs to its cap.
                assert!(epsilon >= DEFAULT_EPS_CAP - 1e-6);
            }
            Emptiness::Empty => panic!("unconstrained region cannot be empty"),
        }
    }

    #[test]
    fn overlapping_configuration_rejected() {
        let p: BTreeSet<_> = [profile(&[0, 1])].into_iter().collect();
        assert!(matches!(
            OutcomeConfiguration::new(p.clone(), p),
            Err(FormulationError::Overlap(_))
        ));
    }

    #[test]
    fn lex_sup_finds_the_supremum_with_zero_margin() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1]], &[&[1, 0]]);
        let out = solve_lex_sup(&game, &c).unwrap().unwrap();
        assert!((out.eta - 7.5).abs() < 1e-6, "eta {}", out.eta);
        assert!(out.eps_star.abs() < 1e-6, "eps {}", out.eps_star);
    }

    #[test]
    fn lex_sup_with_both_equilibria_is_capped_by_the_worst() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1], &[1, 0]], &[]);
        let out = solve_lex_sup(&game, &c).unwrap().unwrap();
        assert!((out.eta - 1.0).abs() < 1e-6, "eta {}", out.eta);
        assert!(out.eps_star > EPS_POSITIVE_TOL);
    }

    #[test]
    fn lex_sup_on_arbitrarily_worse_game_attains() {
        let game = make_paper_example(PaperExample::ArbitrarilyWorse(10.0));
        let c = cfg(&[&[1, 0]], &[&[0, 1]]);
        let out = solve_lex_sup(&game, &c).unwrap().unwrap();
        assert!((out.eta - 10.0).abs() < 1e-6);
        assert!(out.eps_star > EPS_POSITIVE_TOL);
        assert!((out.witness.prob(1) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lex_sup_requires_declared_equilibria() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[], &[&[0, 1]]);
        assert!(matches!(
            build_lex_sup(&game, &c),
            Err(FormulationError::EmptySPlus)
        ));
    }

    #[test]
    fn stage_one_value_equals_worst_declared_utility_at_witness() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1], &[1, 0]], &[]);
        let out = solve_lex_sup(&game, &c).unwrap().unwrap();
        let worst = c
            .s_plus()
            .iter()
            .map(|p| crate::game::leader_expected_utility(&game, p, &out.witness))
            .fold(f64::INFINITY, f64::min);
        assert!((out.eta - worst).abs() < 1e-6);
    }

    #[test]
    fn alpha_approx_examples() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1]], &[&[1, 0]]);
        // alpha = 0.5: margin 0.5 - rho maximised subject to 5 + 5 rho >= 7.
        let (eps, x) = solve_alpha_approx(&game, &c, 7.5, 0.5).unwrap().unwrap();
        assert!((eps - 0.1).abs() < 1e-6, "eps {eps}");
        assert!((x.prob(1) - 0.4).abs() < 1e-6);
        let f = leader_pessimistic_utility(&game, &x).unwrap();
        assert!(f >= 7.5 - 0.5 - 1e-6);
        // alpha = 2.5: the utility rows stop binding, so the margin runs to
        // its unconstrained best at rho = 0.
        let (eps, x) = solve_alpha_approx(&game, &c, 7.5, 2.5).unwrap().unwrap();
        assert!((eps - 0.5).abs() < 1e-6, "eps {eps}");
        assert!(x.prob(1) < 1e-6);
        let f = leader_pessimistic_utility(&game, &x).unwrap();
        assert!(f >= 7.5 - 2.5 - 1e-6);
    }

    #[test]
    fn alpha_must_be_positive() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[&[0, 1]], &[&[1, 0]]);
        assert!(matches!(
            build_alpha_approx(&game, &c, 7.5, 0.0),
            Err(FormulationError::BadAlpha(_))
        ));
    }

    #[test]
    fn witnesses_are_sound() {
        // Any nonempty answer must certify: declared equilibria hold, the
        // declared non-equilibria fail, checked through the game layer.
        let game = make_paper_example(PaperExample::Nonexistence);
        for c in [
            cfg(&[&[0, 1]], &[&[1, 0]]),
            cfg(&[&[0, 1], &[1, 0]], &[&[0, 0], &[1, 1]]),
        ] {
            if let Emptiness::NonEmpty { witness, .. } = check_emptiness(&game, &c).unwrap() {
                for p in c.s_plus() {
                    assert!(is_pure_ne(&game, p, &witness, 1e-6).unwrap());
                }
                for p in c.s_minus() {
                    assert!(!is_pure_ne(&game, p, &witness, 1e-9).unwrap());
                }
            } else {
                panic!("expected nonempty configuration");
            }
        }
    }

    #[test]
    fn shrinking_s_minus_never_decreases_the_margin() {
        let game = crate::generator::generate_random_game(3, 2, 2);
        let profiles = game.follower_profiles();
        let plus: BTreeSet<_> = [profiles[0].clone()].into_iter().collect();
        let eps_of = |minus: &[FollowerProfile]| -> Option<f64> {
            let c =
                OutcomeConfiguration::new(plus.clone(), minus.iter().cloned().collect()).unwrap();
            match check_emptiness(&game, &c).unwrap() {
                Emptiness::NonEmpty { epsilon, .. } => Some(epsilon),
                Emptiness::Empty => None,
            }
        };
        let wide = eps_of(&profiles[1..]);
        let narrow = eps_of(&profiles[2..]);
        if let (Some(w), Some(n)) = (wide, narrow) {
            assert!(n >= w - 1e-7, "narrow {n} wide {w}");
        }
    }

    #[test]
    fn big_m_constants_match_the_largest_regret() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let c = cfg(&[], &[&[1, 0]]);
        let built = build_check_emptiness(&game, &c).unwrap();
        let block = &built.pieces.blocks[0];
        assert_eq!(block.indicators.len(), 2);
        for ind in &block.indicators {
            let coeffs = regret_coeffs(&game, &block.profile, ind.follower, ind.deviation);
            let expect = coeffs.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
            assert_eq!(ind.big_m, expect);
        }
    }

    #[test]
    fn realized_configurations_check_nonempty() {
        // Whatever full configuration the game layer reports at a sampled
        // commitment must pass the emptiness check.
        let game = crate::generator::generate_random_game(3, 2, 9);
        for rho in [0.0, 0.21, 0.5, 0.83, 1.0] {
            let x = LeaderStrategy::two_point(rho);
            let nes: BTreeSet<_> = crate::game::enumerate_pure_nes(&game, &x).into_iter().collect();
            let c = OutcomeConfiguration::full(&game, nes);
            // Sampled points can sit on region boundaries; accept those.
            let margin = crate::oracle::realization_margin(&game, &x, &c);
            if margin > EPS_POSITIVE_TOL {
                assert!(!check_emptiness(&game, &c).unwrap().is_empty());
            }
        }
    }
}
