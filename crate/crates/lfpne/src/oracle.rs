//! Brute-force verification tools: exact lattice sampling of the leader
//! simplex, grid estimation of the pessimistic supremum, and exhaustive
//! realized-configuration collection. These never replace the solvers; they
//! certify them on small instances.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::formulations::OutcomeConfiguration;
use crate::game::{
    enumerate_pure_nes, leader_pessimistic_utility, FollowerProfile, LeaderStrategy,
    NormalFormGame,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("grid step must lie in (0, 1], got {0}")]
    BadStep(f64),
    #[error("grid would contain {points} points, more than the cap {cap}")]
    GridTooLarge { points: usize, cap: usize },
}

/// Lattice over the leader simplex: all compositions of `round(1/step)`
/// lattice steps across `dim` coordinates. Points are exact simplex members
/// by construction (no renormalisation drift).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub step: f64,
    pub dim: usize,
}

impl GridSpec {
    pub fn new(step: f64, dim: usize) -> Result<Self, OracleError> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(OracleError::BadStep(step));
        }
        Ok(GridSpec { step, dim })
    }

    pub fn denominator(&self) -> usize {
        (1.0 / self.step).round().max(1.0) as usize
    }

    pub fn num_points(&self) -> usize {
        // C(k + dim - 1, dim - 1), computed carefully.
        let k = self.denominator();
        let d = self.dim - 1;
        let mut out: f64 = 1.0;
        for i in 0..d {
            out *= (k + d - i) as f64 / (d - i) as f64;
        }
        out.round() as usize
    }

    /// All lattice points, in lexicographic composition order.
    pub fn points(&self) -> Vec<LeaderStrategy> {
        let k = self.denominator();
        let dim = self.dim;
        let mut out = Vec::with_capacity(self.num_points());
        let mut counts = vec![0usize; dim];
        fn rec(counts: &mut Vec<usize>, pos: usize, left: usize, k: usize, out: &mut Vec<LeaderStrategy>) {
            if pos + 1 == counts.len() {
                counts[pos] = left;
                let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / k as f64).collect();
                out.push(LeaderStrategy::new(probs).expect("lattice point is on the simplex"));
                return;
            }
            for c in 0..=left {
                counts[pos] = c;
                rec(counts, pos + 1, left - c, k, out);
            }
        }
        rec(&mut counts, 0, k, k, &mut out);
        out
    }
}

pub const DEFAULT_GRID_CAP: usize = 2_000_000;

/// Maximum of the pessimistic leader utility over the grid, with the argmax
/// point. `None` when no grid point induces any pure equilibrium. The
/// reduction is deterministic across thread counts: ties keep the earliest
/// lattice point.
pub fn grid_sup_estimate(
    game: &NormalFormGame,
    spec: &GridSpec,
) -> Result<Option<(f64, LeaderStrategy)>, OracleError> {
    grid_sup_estimate_with_cap(game, spec, DEFAULT_GRID_CAP)
}

pub fn grid_sup_estimate_with_cap(
    game: &NormalFormGame,
    spec: &GridSpec,
    cap: usize,
) -> Result<Option<(f64, LeaderStrategy)>, OracleError> {
    let n_points = spec.num_points();
    if n_points > cap {
        return Err(OracleError::GridTooLarge {
            points: n_points,
            cap,
        });
    }
    let points = spec.points();
    let best = points
        .par_iter()
        .enumerate()
        .filter_map(|(idx, x)| leader_pessimistic_utility(game, x).map(|f| (f, idx)))
        .reduce_with(|a, b| {
            // Larger value wins; earliest index on ties.
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        });
    Ok(best.map(|(f, idx)| (f, points[idx].clone())))
}

/// The full outcome configurations realized across the grid sample: for
/// each point, the induced equilibrium set paired with its complement.
pub fn exhaustive_config_check(
    game: &NormalFormGame,
    spec: &GridSpec,
) -> Result<BTreeSet<OutcomeConfiguration>, OracleError> {
    let n_points = spec.num_points();
    if n_points > DEFAULT_GRID_CAP {
        return Err(OracleError::GridTooLarge {
            points: n_points,
            cap: DEFAULT_GRID_CAP,
        });
    }
    let mut out = BTreeSet::new();
    for x in spec.points() {
        let nes: BTreeSet<FollowerProfile> = enumerate_pure_nes(game, &x).into_iter().collect();
        out.insert(OutcomeConfiguration::full(game, nes));
    }
    Ok(out)
}

/// How strictly `x` realizes the configuration: the smallest improvement
/// margin certifying each declared non-equilibrium, negative when some
/// declared equilibrium fails. Mirrors the quantity the emptiness check
/// maximises.
pub fn realization_margin(
    game: &NormalFormGame,
    x: &LeaderStrategy,
    cfg: &OutcomeConfiguration,
) -> f64 {
    let mut margin = f64::INFINITY;
    for profile in cfg.s_plus() {
        let own: Vec<f64> = (0..game.num_followers())
            .map(|p| crate::game::expected_follower_payoff(game, profile, p, x).unwrap())
            .collect();
        for p in 0..game.num_followers() {
            for a in 0..game.num_actions(p) {
                if a == profile.action(p) {
                    continue;
                }
                let dev = profile.with_deviation(p, a);
                let du = crate::game::expected_follower_payoff(game, &dev, p, x).unwrap();
                if du > own[p] {
                    return own[p] - du;
                }
            }
        }
    }
    for profile in cfg.s_minus() {
        let mut best = f64::NEG_INFINITY;
        for p in 0..game.num_followers() {
            let own = crate::game::expected_follower_payoff(game, profile, p, x).unwrap();
            for a in 0..game.num_actions(p) {
                if a == profile.action(p) {
                    continue;
                }
                let dev = profile.with_deviation(p, a);
                let du = crate::game::expected_follower_payoff(game, &dev, p, x).unwrap();
                best = best.max(du - own);
            }
        }
        margin = margin.min(best);
    }
    margin
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{make_paper_example, PaperExample};

    #[test]
    fn grid_estimate_on_the_nonexistence_game() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let spec = GridSpec::new(0.01, 2).unwrap();
        let (best, arg) = grid_sup_estimate(&game, &spec).unwrap().unwrap();
        // f = 5 + 5 rho below 1/2, then 1; the best lattice point below the
        // discontinuity is rho = 0.49.
        assert!((best - 7.45).abs() < 1e-9, "best {best}");
        assert!((arg.prob(1) - 0.49).abs() < 1e-12);
    }

    #[test]
    fn grid_estimate_on_the_arbitrarily_worse_game() {
        let game = make_paper_example(PaperExample::ArbitrarilyWorse(10.0));
        let spec = GridSpec::new(0.01, 2).unwrap();
        let (best, arg) = grid_sup_estimate(&game, &spec).unwrap().unwrap();
        assert!((best - 10.0).abs() < 1e-9);
        assert!((arg.prob(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_action_leader_grid_is_a_single_point() {
        let game = NormalFormGame::new(
            vec![2, 2, 1],
            vec![
                vec![1.0, 0.0, 0.0, 1.0],
                vec![1.0, 0.0, 0.0, 1.0],
                vec![3.0, 1.0, 1.0, 2.0],
            ],
        )
        .unwrap();
        let spec = GridSpec::new(0.5, 1).unwrap();
        assert_eq!(spec.num_points(), 1);
        let (best, _) = grid_sup_estimate(&game, &spec).unwrap().unwrap();
        // Equilibria at the single point: (0,0) and (1,1); worst gives 2.
        assert!((best - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_none_when_no_equilibrium_anywhere() {
        let game = crate::game::matching_pennies_followers();
        let spec = GridSpec::new(0.05, 2).unwrap();
        assert!(grid_sup_estimate(&game, &spec).unwrap().is_none());
    }

    #[test]
    fn grid_cap_enforced() {
        let game = crate::generator::generate_random_game(3, 8, 0);
        let spec = GridSpec::new(0.001, 8).unwrap();
        assert!(matches!(
            grid_sup_estimate(&game, &spec),
            Err(OracleError::GridTooLarge { .. })
        ));
    }

    #[test]
    fn realized_configurations_on_nonexistence_game() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let spec = GridSpec::new(0.05, 2).unwrap();
        let configs = exhaustive_config_check(&game, &spec).unwrap();
        // Two regimes: {(0,1)} below one half, {(0,1),(1,0)} at and above.
        assert_eq!(configs.len(), 2);
        let sizes: Vec<usize> = configs.iter().map(|c| c.s_plus().len()).collect();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn gamma_game_configs_stay_on_the_diagonal() {
        let (b, c) = crate::gadgets::indset_defaults(3);
        let g = crate::gadgets::UndirectedGraph::new(3, vec![(1, 2)]).unwrap();
        let game = crate::gadgets::make_indset_game(&g, b, c).unwrap();
        let spec = GridSpec::new(0.2, 3).unwrap();
        for cfg in exhaustive_config_check(&game, &spec).unwrap() {
            for p in cfg.s_plus() {
                assert_eq!(p.action(0), p.action(1));
                assert_ne!(p.action(0), 3, "chi-chi can never be an equilibrium");
            }
        }
    }

    #[test]
    fn empty_equilibrium_game_realizes_only_the_empty_configuration() {
        let game = crate::game::matching_pennies_followers();
        let spec = GridSpec::new(0.1, 2).unwrap();
        let configs = exhaustive_config_check(&game, &spec).unwrap();
        assert_eq!(configs.len(), 1);
        assert!(configs.iter().next().unwrap().s_plus().is_empty());
    }

    #[test]
    fn determinism_across_thread_counts() {
        let game = crate::generator::generate_random_game(3, 3, 13);
        let spec = GridSpec::new(0.05, 3).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| grid_sup_estimate(&game, &spec).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| grid_sup_estimate(&game, &spec).unwrap());
        match (single, multi) {
            (Some((a, xa)), Some((b, xb))) => {
                assert_eq!(a, b);
                assert_eq!(xa.probabilities(), xb.probabilities());
            }
            (a, b) => panic!("mismatch: {a:?} vs {b:?}"),
        }
    }
}
