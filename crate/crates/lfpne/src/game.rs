//! Normal-form game representation and pure-equilibrium inspection. The last
//! player is the leader; every other player is a follower. Payoffs are
//! stored per player as a flat dense tensor over full action profiles, with
//! the leader's action index varying fastest so the slice needed to evaluate
//! an expected utility against the leader's mixed strategy is contiguous.

use std::collections::BTreeSet;

use thiserror::Error;

/// Default tolerance on equilibrium deviation inequalities. Payoffs are
/// modest-magnitude and the dense arithmetic is exact to machine precision
/// at this scale.
pub const NE_TOL: f64 = 1e-9;

/// Tolerance on simplex membership for leader strategies.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("a game needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("player {player} has no actions")]
    EmptyActionSet { player: usize },
    #[error("payoff tensor for player {player} has {got} entries, expected {expected}")]
    TensorSize {
        player: usize,
        expected: usize,
        got: usize,
    },
    #[error("payoff tensor for player {player} contains a non-finite entry")]
    NonFinitePayoff { player: usize },
    #[error("expected {expected} payoff tensors, got {got}")]
    TensorCount { expected: usize, got: usize },
    #[error("player index {0} out of range")]
    PlayerIndex(usize),
    #[error("player {0} is the leader, not a follower")]
    NotAFollower(usize),
    #[error("action {action} out of range for player {player} ({count} actions)")]
    ActionIndex {
        player: usize,
        action: usize,
        count: usize,
    },
    #[error("profile has {got} follower actions, game has {expected} followers")]
    ProfileLength { expected: usize, got: usize },
    #[error("leader strategy has {got} entries, leader has {expected} actions")]
    StrategyLength { expected: usize, got: usize },
    #[error("leader strategy is not a simplex point (component {component} = {value})")]
    NotADistribution { component: usize, value: f64 },
    #[error("leader strategy sums to {0}, expected 1")]
    BadSum(f64),
}

/// A normal-form game with `n >= 2` players. Player `n - 1` (0-based) is the
/// leader; players `0..n-1` are the followers.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    actions: Vec<usize>,
    /// `payoffs[p][flat_index(profile)]`, leader index fastest-varying.
    payoffs: Vec<Vec<f64>>,
}

impl NormalFormGame {
    pub fn new(actions: Vec<usize>, payoffs: Vec<Vec<f64>>) -> Result<Self, GameError> {
        if actions.len() < 2 {
            return Err(GameError::TooFewPlayers(actions.len()));
        }
        for (p, &m) in actions.iter().enumerate() {
            if m == 0 {
                return Err(GameError::EmptyActionSet { player: p });
            }
        }
        if payoffs.len() != actions.len() {
            return Err(GameError::TensorCount {
                expected: actions.len(),
                got: payoffs.len(),
            });
        }
        let total: usize = actions.iter().product();
        for (p, tensor) in payoffs.iter().enumerate() {
            if tensor.len() != total {
                return Err(GameError::TensorSize {
                    player: p,
                    expected: total,
                    got: tensor.len(),
                });
            }
            if tensor.iter().any(|v| !v.is_finite()) {
                return Err(GameError::NonFinitePayoff { player: p });
            }
        }
        Ok(NormalFormGame { actions, payoffs })
    }

    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn num_followers(&self) -> usize {
        self.actions.len() - 1
    }

    pub fn leader(&self) -> usize {
        self.actions.len() - 1
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player]
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn leader_actions(&self) -> usize {
        self.actions[self.leader()]
    }

    pub fn payoff_tensor(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    /// Largest absolute payoff across all players.
    pub fn payoff_scale(&self) -> f64 {
        self.payoffs
            .iter()
            .flat_map(|t| t.iter())
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest payoff spread within any single tensor.
    pub fn payoff_spread(&self) -> f64 {
        self.payoffs
            .iter()
            .map(|t| {
                let mx = t.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
                let mn = t.iter().fold(f64::INFINITY, |a, &v| a.min(v));
                mx - mn
            })
            .fold(0.0f64, f64::max)
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> f64 {
        self.payoffs[player][self.flat_index(profile)]
    }

    fn flat_index(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.actions.len());
        let mut idx = 0;
        for (a, m) in profile.iter().zip(&self.actions) {
            debug_assert!(a < m);
            idx = idx * m + a;
        }
        idx
    }

    /// Base offset of the contiguous leader slice for a follower profile.
    fn slice_base(&self, profile: &FollowerProfile) -> usize {
        let mut idx = 0;
        for (a, m) in profile.actions.iter().zip(&self.actions) {
            idx = idx * m + a;
        }
        idx * self.leader_actions()
    }

    /// The payoff vector of `player` over the leader's actions, with all
    /// followers pinned to `profile`. Contiguous by construction.
    pub fn leader_slice(&self, player: usize, profile: &FollowerProfile) -> &[f64] {
        let base = self.slice_base(profile);
        &self.payoffs[player][base..base + self.leader_actions()]
    }

    pub fn check_follower_profile(&self, profile: &FollowerProfile) -> Result<(), GameError> {
        if profile.actions.len() != self.num_followers() {
            return Err(GameError::ProfileLength {
                expected: self.num_followers(),
                got: profile.actions.len(),
            });
        }
        for (p, &a) in profile.actions.iter().enumerate() {
            if a >= self.actions[p] {
                return Err(GameError::ActionIndex {
                    player: p,
                    action: a,
                    count: self.actions[p],
                });
            }
        }
        Ok(())
    }

    pub fn check_leader_strategy(&self, x: &LeaderStrategy) -> Result<(), GameError> {
        if x.probabilities.len() != self.leader_actions() {
            return Err(GameError::StrategyLength {
                expected: self.leader_actions(),
                got: x.probabilities.len(),
            });
        }
        Ok(())
    }

    /// All follower profiles in lexicographic order.
    pub fn follower_profiles(&self) -> Vec<FollowerProfile> {
        let followers = self.num_followers();
        let mut out = Vec::new();
        let mut current = vec![0usize; followers];
        loop {
            out.push(FollowerProfile::new(current.clone()));
            let mut p = followers;
            loop {
                if p == 0 {
                    return out;
                }
                p -= 1;
                current[p] += 1;
                if current[p] < self.actions[p] {
                    break;
                }
                current[p] = 0;
            }
        }
    }

    pub fn num_follower_profiles(&self) -> usize {
        self.actions[..self.num_followers()].iter().product()
    }
}

/// A mixed strategy of the leader: a point of the leader's simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderStrategy {
    probabilities: Vec<f64>,
}

impl LeaderStrategy {
    /// Validates nonnegativity and unit sum to within `1e-9`.
    pub fn new(probabilities: Vec<f64>) -> Result<Self, GameError> {
        for (i, &p) in probabilities.iter().enumerate() {
            if !(p >= -SIMPLEX_TOL) || !p.is_finite() {
                return Err(GameError::NotADistribution {
                    component: i,
                    value: p,
                });
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(GameError::BadSum(sum));
        }
        Ok(LeaderStrategy { probabilities })
    }

    /// Builds a strategy from solver output: clamps small negative
    /// components and renormalises. Rejects points that are not close to
    /// the simplex to begin with.
    pub fn normalized(raw: &[f64]) -> Result<Self, GameError> {
        let mut probabilities: Vec<f64> = Vec::with_capacity(raw.len());
        for (i, &p) in raw.iter().enumerate() {
            if !p.is_finite() || p < -1e-5 {
                return Err(GameError::NotADistribution {
                    component: i,
                    value: p,
                });
            }
            probabilities.push(p.max(0.0));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-5 {
            return Err(GameError::BadSum(sum));
        }
        for p in probabilities.iter_mut() {
            *p /= sum;
        }
        Ok(LeaderStrategy { probabilities })
    }

    /// The pure strategy playing `action` with probability one.
    pub fn pure(num_actions: usize, action: usize) -> Self {
        let mut probabilities = vec![0.0; num_actions];
        probabilities[action] = 1.0;
        LeaderStrategy { probabilities }
    }

    pub fn uniform(num_actions: usize) -> Self {
        LeaderStrategy {
            probabilities: vec![1.0 / num_actions as f64; num_actions],
        }
    }

    /// Two-action strategy `(1 - rho, rho)`.
    pub fn two_point(rho: f64) -> Self {
        LeaderStrategy {
            probabilities: vec![1.0 - rho, rho],
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn prob(&self, action: usize) -> f64 {
        self.probabilities[action]
    }
}

/// One action per follower.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FollowerProfile {
    actions: Vec<usize>,
}

impl FollowerProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        FollowerProfile { actions }
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn action(&self, follower: usize) -> usize {
        self.actions[follower]
    }

    /// The profile with `follower` deviating to `action`.
    pub fn with_deviation(&self, follower: usize, action: usize) -> FollowerProfile {
        let mut actions = self.actions.clone();
        actions[follower] = action;
        FollowerProfile { actions }
    }
}

impl std::fmt::Display for FollowerProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.actions.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, ")")
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Expected utility of follower `p` when the followers play `profile` and
/// the leader mixes according to `x`.
pub fn expected_follower_payoff(
    game: &NormalFormGame,
    profile: &FollowerProfile,
    p: usize,
    x: &LeaderStrategy,
) -> Result<f64, GameError> {
    game.check_follower_profile(profile)?;
    game.check_leader_strategy(x)?;
    if p >= game.num_players() {
        return Err(GameError::PlayerIndex(p));
    }
    if p == game.leader() {
        return Err(GameError::NotAFollower(p));
    }
    Ok(dot(game.leader_slice(p, profile), x.probabilities()))
}

/// Leader's expected utility when the followers play `profile`.
pub fn leader_expected_utility(
    game: &NormalFormGame,
    profile: &FollowerProfile,
    x: &LeaderStrategy,
) -> f64 {
    dot(game.leader_slice(game.leader(), profile), x.probabilities())
}

/// Whether `profile` is a pure equilibrium of the followers' game induced by
/// `x`: no follower has a unilateral deviation improving her expected payoff
/// by more than `slack`. `slack = 0` is exact membership.
pub fn is_pure_ne(
    game: &NormalFormGame,
    profile: &FollowerProfile,
    x: &LeaderStrategy,
    slack: f64,
) -> Result<bool, GameError> {
    game.check_follower_profile(profile)?;
    game.check_leader_strategy(x)?;
    Ok(is_pure_ne_unchecked(game, profile, x, slack))
}

fn is_pure_ne_unchecked(
    game: &NormalFormGame,
    profile: &FollowerProfile,
    x: &LeaderStrategy,
    slack: f64,
) -> bool {
    let probs = x.probabilities();
    for p in 0..game.num_followers() {
        let own = dot(game.leader_slice(p, profile), probs);
        for a in 0..game.num_actions(p) {
            if a == profile.action(p) {
                continue;
            }
            let dev = profile.with_deviation(p, a);
            let other = dot(game.leader_slice(p, &dev), probs);
            if other - own > slack {
                return false;
            }
        }
    }
    true
}

/// All pure equilibria of the followers' game induced by `x`, in
/// lexicographic profile order, using the default tolerance.
pub fn enumerate_pure_nes(game: &NormalFormGame, x: &LeaderStrategy) -> Vec<FollowerProfile> {
    enumerate_pure_nes_with_slack(game, x, NE_TOL)
}

pub fn enumerate_pure_nes_with_slack(
    game: &NormalFormGame,
    x: &LeaderStrategy,
    slack: f64,
) -> Vec<FollowerProfile> {
    game.follower_profiles()
        .into_iter()
        .filter(|profile| is_pure_ne_unchecked(game, profile, x, slack))
        .collect()
}

/// The leader's pessimistic utility at `x`: minimum expected leader payoff
/// over the pure equilibria induced by `x`, or `None` when there is none
/// (the "minus infinity" case; callers must branch on it explicitly).
pub fn leader_pessimistic_utility(game: &NormalFormGame, x: &LeaderStrategy) -> Option<f64> {
    leader_pessimistic_utility_with_slack(game, x, NE_TOL)
}

pub fn leader_pessimistic_utility_with_slack(
    game: &NormalFormGame,
    x: &LeaderStrategy,
    slack: f64,
) -> Option<f64> {
    game.follower_profiles()
        .into_iter()
        .filter(|profile| is_pure_ne_unchecked(game, profile, x, slack))
        .map(|profile| leader_expected_utility(game, &profile, x))
        .fold(None, |acc, v| {
            Some(match acc {
                None => v,
                Some(a) if v < a => v,
                Some(a) => a,
            })
        })
}

/// Among the equilibria induced by `x` that are not in `excluded`, returns
/// one minimising the leader's utility; ties broken by lexicographic profile
/// order. `None` when no such equilibrium exists.
pub fn worst_case_ne_excluding(
    game: &NormalFormGame,
    x: &LeaderStrategy,
    excluded: &BTreeSet<FollowerProfile>,
) -> Option<FollowerProfile> {
    worst_case_ne_excluding_with_slack(game, x, excluded, NE_TOL)
}

pub fn worst_case_ne_excluding_with_slack(
    game: &NormalFormGame,
    x: &LeaderStrategy,
    excluded: &BTreeSet<FollowerProfile>,
    slack: f64,
) -> Option<FollowerProfile> {
    let mut best: Option<(f64, FollowerProfile)> = None;
    for profile in game.follower_profiles() {
        if excluded.contains(&profile) {
            continue;
        }
        if !is_pure_ne_unchecked(game, &profile, x, slack) {
            continue;
        }
        let u = leader_expected_utility(game, &profile, x);
        // Lexicographic iteration order plus strict improvement keeps the
        // first (lexicographically smallest) minimiser.
        match &best {
            Some((bu, _)) if u >= *bu => {}
            _ => best = Some((u, profile)),
        }
    }
    best.map(|(_, p)| p)
}

/// Test fixture: followers play matching pennies between themselves with
/// payoffs independent of the leader, so no commitment induces a pure
/// equilibrium.
#[cfg(test)]
pub(crate) fn matching_pennies_followers() -> NormalFormGame {
    let mut u1 = vec![0.0; 8];
    let mut u2 = vec![0.0; 8];
    let u3 = vec![1.0; 8];
    for a1 in 0..2 {
        for a2 in 0..2 {
            for a3 in 0..2 {
                let idx = (a1 * 2 + a2) * 2 + a3;
                u1[idx] = if a1 == a2 { 1.0 } else { 0.0 };
                u2[idx] = if a1 != a2 { 1.0 } else { 0.0 };
            }
        }
    }
    NormalFormGame::new(vec![2, 2, 2], vec![u1, u2, u3]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets;

    fn nonexistence() -> NormalFormGame {
        gadgets::make_paper_example(gadgets::PaperExample::Nonexistence)
    }

    #[test]
    fn expected_payoff_is_constant_on_the_always_ne_profile() {
        let game = nonexistence();
        let profile = FollowerProfile::new(vec![0, 1]);
        for rho in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let x = LeaderStrategy::two_point(rho);
            let u = expected_follower_payoff(&game, &profile, 0, &x).unwrap();
            assert!((u - 2.0).abs() < 1e-12, "rho={rho}: {u}");
        }
    }

    #[test]
    fn pure_leader_strategy_reads_single_entry() {
        let game = nonexistence();
        for profile in game.follower_profiles() {
            for k in 0..game.leader_actions() {
                let x = LeaderStrategy::pure(game.leader_actions(), k);
                for p in 0..game.num_followers() {
                    let u = expected_follower_payoff(&game, &profile, p, &x).unwrap();
                    let full: Vec<usize> =
                        profile.actions().iter().copied().chain([k]).collect();
                    assert_eq!(u, game.payoff(p, &full));
                }
            }
        }
    }

    #[test]
    fn expected_payoff_matches_naive_summation_on_random_game() {
        let game = crate::generator::generate_random_game(3, 2, 0);
        let x = LeaderStrategy::two_point(0.5);
        for profile in game.follower_profiles() {
            for p in 0..2 {
                let fast = expected_follower_payoff(&game, &profile, p, &x).unwrap();
                // Independent naive summation over full profiles.
                let mut slow = 0.0;
                for a_n in 0..game.leader_actions() {
                    let full: Vec<usize> =
                        profile.actions().iter().copied().chain([a_n]).collect();
                    slow += game.payoff(p, &full) * x.prob(a_n);
                }
                assert!((fast - slow).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expected_payoff_rejects_leader_index() {
        let game = nonexistence();
        let profile = FollowerProfile::new(vec![0, 0]);
        let x = LeaderStrategy::two_point(0.5);
        assert!(matches!(
            expected_follower_payoff(&game, &profile, 2, &x),
            Err(GameError::NotAFollower(2))
        ));
        assert!(matches!(
            expected_follower_payoff(&game, &profile, 7, &x),
            Err(GameError::PlayerIndex(7))
        ));
    }

    #[test]
    fn one_action_followers_are_trivially_in_equilibrium() {
        let game = NormalFormGame::new(vec![1, 1, 3], vec![vec![1.0, 2.0, 3.0]; 3]).unwrap();
        let profile = FollowerProfile::new(vec![0, 0]);
        let x = LeaderStrategy::uniform(3);
        assert!(is_pure_ne(&game, &profile, &x, 0.0).unwrap());
    }

    #[test]
    fn nonexistence_equilibria_by_regime() {
        let game = nonexistence();
        // rho < 1/2: only (0,1); rho >= 1/2: (0,1) and (1,0).
        let low = LeaderStrategy::two_point(0.25);
        let nes = enumerate_pure_nes(&game, &low);
        assert_eq!(nes, vec![FollowerProfile::new(vec![0, 1])]);

        let high = LeaderStrategy::two_point(0.75);
        let nes = enumerate_pure_nes(&game, &high);
        assert_eq!(
            nes,
            vec![
                FollowerProfile::new(vec![0, 1]),
                FollowerProfile::new(vec![1, 0])
            ]
        );
    }

    #[test]
    fn enumeration_matches_deviation_double_loop() {
        let game = crate::generator::generate_random_game(3, 3, 7);
        for point in [[0.2, 0.3, 0.5], [1.0, 0.0, 0.0], [0.4, 0.4, 0.2]] {
            let x = LeaderStrategy::new(point.to_vec()).unwrap();
            let fast = enumerate_pure_nes(&game, &x);
            // Naive oracle: double loop over profiles and deviations.
            let mut slow = Vec::new();
            for a1 in 0..3 {
                for a2 in 0..3 {
                    let profile = FollowerProfile::new(vec![a1, a2]);
                    let mut ne = true;
                    for p in 0..2 {
                        let own = expected_follower_payoff(&game, &profile, p, &x).unwrap();
                        for dev in 0..3 {
                            if dev == profile.action(p) {
                                continue;
                            }
                            let d = profile.with_deviation(p, dev);
                            let du = expected_follower_payoff(&game, &d, p, &x).unwrap();
                            if du > own + NE_TOL {
                                ne = false;
                            }
                        }
                    }
                    if ne {
                        slow.push(profile);
                    }
                }
            }
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn pessimistic_utility_follows_the_described_curve() {
        let game = nonexistence();
        let f = |rho: f64| leader_pessimistic_utility(&game, &LeaderStrategy::two_point(rho));
        assert!((f(0.25).unwrap() - 6.25).abs() < 1e-9);
        assert!((f(0.75).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pessimistic_utility_on_arbitrarily_worse_game() {
        let game = gadgets::make_paper_example(gadgets::PaperExample::ArbitrarilyWorse(10.0));
        let x = LeaderStrategy::two_point(1.0);
        assert!((leader_pessimistic_utility(&game, &x).unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn pessimistic_utility_none_when_no_equilibrium() {
        // Matching-pennies followers, payoffs independent of the leader.
        let game = super::matching_pennies_followers();
        for rho in [0.0, 0.3, 1.0] {
            let x = LeaderStrategy::two_point(rho);
            assert!(leader_pessimistic_utility(&game, &x).is_none());
        }
    }

    #[test]
    fn worst_case_selection_and_exclusion() {
        let game = nonexistence();
        let x = LeaderStrategy::two_point(0.75);
        let worst = worst_case_ne_excluding(&game, &x, &BTreeSet::new()).unwrap();
        assert_eq!(worst, FollowerProfile::new(vec![1, 0]));

        let mut excluded = BTreeSet::new();
        excluded.insert(FollowerProfile::new(vec![1, 0]));
        let next = worst_case_ne_excluding(&game, &x, &excluded).unwrap();
        assert_eq!(next, FollowerProfile::new(vec![0, 1]));

        excluded.insert(FollowerProfile::new(vec![0, 1]));
        assert!(worst_case_ne_excluding(&game, &x, &excluded).is_none());
    }

    #[test]
    fn worst_case_matches_argmin_oracle() {
        let game = crate::generator::generate_random_game(3, 3, 3);
        let x = LeaderStrategy::new(vec![0.5, 0.2, 0.3]).unwrap();
        let got = worst_case_ne_excluding(&game, &x, &BTreeSet::new());
        let nes = enumerate_pure_nes(&game, &x);
        let expect = nes
            .iter()
            .min_by(|a, b| {
                leader_expected_utility(&game, a, &x)
                    .partial_cmp(&leader_expected_utility(&game, b, &x))
                    .unwrap()
            })
            .cloned();
        assert_eq!(got, expect);
    }

    #[test]
    fn exclusion_never_lowers_the_worst_value() {
        let game = crate::generator::generate_random_game(3, 3, 11);
        let x = LeaderStrategy::new(vec![0.1, 0.6, 0.3]).unwrap();
        let base = worst_case_ne_excluding(&game, &x, &BTreeSet::new());
        let Some(base) = base else { return };
        let base_u = leader_expected_utility(&game, &base, &x);
        let mut excluded = BTreeSet::new();
        excluded.insert(base.clone());
        if let Some(next) = worst_case_ne_excluding(&game, &x, &excluded) {
            assert!(leader_expected_utility(&game, &next, &x) >= base_u - 1e-12);
        }
    }

    #[test]
    fn membership_consistency_between_enumerate_and_is_pure_ne() {
        let game = crate::generator::generate_random_game(3, 3, 5);
        for point in [[0.2, 0.5, 0.3], [0.0, 0.0, 1.0], [0.9, 0.05, 0.05]] {
            let x = LeaderStrategy::new(point.to_vec()).unwrap();
            let nes: BTreeSet<_> = enumerate_pure_nes_with_slack(&game, &x, 0.0)
                .into_iter()
                .collect();
            for profile in game.follower_profiles() {
                assert_eq!(
                    nes.contains(&profile),
                    is_pure_ne(&game, &profile, &x, 0.0).unwrap()
                );
            }
        }
    }

    #[test]
    fn leader_strategy_validation() {
        assert!(LeaderStrategy::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            LeaderStrategy::new(vec![0.7, 0.7]),
            Err(GameError::BadSum(_))
        ));
        assert!(matches!(
            LeaderStrategy::new(vec![-0.1, 1.1]),
            Err(GameError::NotADistribution { .. })
        ));
        let n = LeaderStrategy::normalized(&[0.5000001, 0.5000001]).unwrap();
        assert!((n.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
