//! Optimistic solver: followers break equilibrium ties in the leader's
//! favour. One LP per follower profile maximises the leader's utility over
//! the region where that profile is an equilibrium; the best feasible
//! profile wins.

use crate::formulations::{profile_region_lp, FormulationError};
use crate::game::{FollowerProfile, LeaderStrategy, NormalFormGame};
use crate::linear::{solve_lp, LpStatus};

/// Optimistic value with a witness commitment and the supporting profile.
#[derive(Debug, Clone)]
pub struct OptimisticResult {
    pub value: f64,
    pub strategy: LeaderStrategy,
    pub profile: FollowerProfile,
}

/// Solves the optimistic problem by the per-profile multi-LP. Returns
/// `None` when no profile is an equilibrium under any commitment. Ties
/// across profiles keep the lexicographically first profile.
pub fn solve_optimistic(game: &NormalFormGame) -> Result<Option<OptimisticResult>, FormulationError> {
    let mut best: Option<OptimisticResult> = None;
    for profile in game.follower_profiles() {
        let region = profile_region_lp(game, &profile);
        let sol = solve_lp(&region.model)?;
        if sol.status != LpStatus::Optimal {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => sol.value > b.value + 1e-12,
        };
        if better {
            best = Some(OptimisticResult {
                value: sol.value,
                strategy: region.strategy_from(&sol.point)?,
                profile: profile.clone(),
            });
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{make_paper_example, PaperExample};
    use crate::game::{is_pure_ne, FollowerProfile};

    #[test]
    fn nonexistence_game_optimistic_value() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let out = solve_optimistic(&game).unwrap().unwrap();
        assert!((out.value - 10.0).abs() < 1e-6);
        assert!((out.strategy.prob(1) - 1.0).abs() < 1e-6);
        assert_eq!(out.profile, FollowerProfile::new(vec![0, 1]));
    }

    #[test]
    fn arbitrarily_worse_game_optimistic_value() {
        let game = make_paper_example(PaperExample::ArbitrarilyWorse(10.0));
        let out = solve_optimistic(&game).unwrap().unwrap();
        assert!((out.value - 20.0).abs() < 1e-6);
        assert!((out.strategy.prob(1) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn witness_supports_its_profile() {
        for seed in 0..5 {
            let game = crate::generator::generate_random_game(3, 3, seed);
            if let Some(out) = solve_optimistic(&game).unwrap() {
                assert!(is_pure_ne(&game, &out.profile, &out.strategy, 1e-6).unwrap());
                let u =
                    crate::game::leader_expected_utility(&game, &out.profile, &out.strategy);
                assert!((u - out.value).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn none_when_no_profile_is_ever_an_equilibrium() {
        let game = crate::game::matching_pennies_followers();
        assert!(solve_optimistic(&game).unwrap().is_none());
    }

    #[test]
    fn profile_feasibility_matches_grid_sampling() {
        // A profile's region LP is feasible exactly when some sampled point
        // makes it an equilibrium (up to the boundary cases, which the LP
        // includes and the grid may miss; so sampling implies feasibility).
        let game = crate::generator::generate_random_game(3, 2, 17);
        let spec = crate::oracle::GridSpec::new(0.05, 2).unwrap();
        for profile in game.follower_profiles() {
            let region = profile_region_lp(&game, &profile);
            let feasible = solve_lp(&region.model).unwrap().status == LpStatus::Optimal;
            let sampled = spec
                .points()
                .iter()
                .any(|x| is_pure_ne(&game, &profile, x, 1e-9).unwrap());
            if sampled {
                assert!(feasible, "grid found {profile} but the LP is infeasible");
            }
        }
    }
}
