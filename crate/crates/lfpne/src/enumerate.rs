//! Pessimistic solve by explicit enumeration: every subset of follower
//! profiles is hypothesised as the exact equilibrium set, its region is
//! checked for emptiness, and the two-stage supremum program runs on the
//! survivors. Exponential in the profile count, so guarded by a size cap.
//!
//! Subsets are visited in increasing bitmask order, which lets two cheap
//! prunes run before any disjunctive program is built: a subset whose
//! membership region is empty poisons all of its supersets, and a subset
//! whose membership-region utility bound cannot beat the incumbent is
//! skipped outright.

use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::formulations::{
    check_emptiness_quick, live_profile_set, psi_bound_lp, solve_alpha_approx_quick,
    solve_lex_sup_pruned, FormulationError, OutcomeConfiguration, EPS_POSITIVE_TOL,
};
use crate::game::{FollowerProfile, NormalFormGame};
use crate::report::{SolveReport, SolveStats, SolveStatus};

/// Above this many follower profiles the subset count is intractable.
pub const DEFAULT_MAX_PROFILES: usize = 16;

#[derive(Debug, Error)]
pub enum EnumError {
    #[error(
        "{profiles} follower profiles means 2^{profiles} configurations; \
         the enumeration cap is {cap}. Use the branch-and-bound solver for \
         games of this size."
    )]
    TooLarge { profiles: usize, cap: usize },
    #[error("alpha must be positive, got {0}")]
    BadAlpha(f64),
    #[error(transparent)]
    Formulation(#[from] FormulationError),
}

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub alpha: f64,
    pub max_profiles: usize,
}

impl EnumOptions {
    pub fn new(alpha: f64) -> Self {
        EnumOptions {
            alpha,
            max_profiles: DEFAULT_MAX_PROFILES,
        }
    }
}

pub fn solve_enum(game: &NormalFormGame, alpha: f64) -> Result<SolveReport, EnumError> {
    solve_enum_with(game, &EnumOptions::new(alpha))
}

struct BestConfig {
    cfg: OutcomeConfiguration,
    eta: f64,
    eps_star: f64,
    witness: crate::game::LeaderStrategy,
}

pub fn solve_enum_with(game: &NormalFormGame, options: &EnumOptions) -> Result<SolveReport, EnumError> {
    if !(options.alpha > 0.0) {
        return Err(EnumError::BadAlpha(options.alpha));
    }
    let start = Instant::now();
    let profiles = game.follower_profiles();
    let k = profiles.len();
    if k > options.max_profiles {
        return Err(EnumError::TooLarge {
            profiles: k,
            cap: options.max_profiles,
        });
    }

    let mut stats = SolveStats::default();
    let live = live_profile_set(game)?;
    let mut best: Option<BestConfig> = None;

    // Best-first walk of the subset tree (children extend a mask past its
    // highest set bit, so every subset is visited once). A node carries the
    // LP bound of its membership region, which is monotone under adding
    // profiles: once the best node in the frontier cannot beat the
    // incumbent, nothing can, and a child whose own bound already fails is
    // never queued, killing its whole subtree unexplored.
    #[derive(PartialEq)]
    struct EnumNode {
        bound: f64,
        mask: usize,
    }
    impl Eq for EnumNode {}
    impl PartialOrd for EnumNode {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for EnumNode {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.bound
                .partial_cmp(&other.bound)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| other.mask.cmp(&self.mask))
        }
    }

    let s_plus_of = |mask: usize| -> BTreeSet<FollowerProfile> {
        (0..k)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| profiles[b].clone())
            .collect()
    };

    let mut heap: std::collections::BinaryHeap<EnumNode> = std::collections::BinaryHeap::new();
    for b in 0..k {
        let mask = 1usize << b;
        if let Some(bound) = psi_bound_lp(game, &s_plus_of(mask))? {
            heap.push(EnumNode { bound, mask });
        }
    }

    while let Some(EnumNode { bound, mask }) = heap.pop() {
        if let Some(b) = &best {
            if bound <= b.eta + 1e-9 {
                // Best-first order: the rest of the frontier is dominated.
                break;
            }
        }
        stats.nodes += 1;
        let s_plus = s_plus_of(mask);
        let cfg = OutcomeConfiguration::full(game, s_plus);
        stats.emptiness_checks += 1;
        if !check_emptiness_quick(game, &cfg, &live)?.is_empty() {
            stats.lex_solves += 1;
            let cutoff = best.as_ref().map(|b| b.eta);
            if let Some(out) = solve_lex_sup_pruned(game, &cfg, &live, cutoff)? {
                let improves = match &best {
                    None => true,
                    Some(b) => out.eta > b.eta,
                };
                if improves {
                    best = Some(BestConfig {
                        cfg,
                        eta: out.eta,
                        eps_star: out.eps_star,
                        witness: out.witness,
                    });
                }
            }
        }
        // Children extend past the highest set bit; a child bound is the
        // minimum of the parent's and its own region LP.
        let msb = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        for j in msb + 1..k {
            let child = mask | (1 << j);
            if let Some(child_bound) = psi_bound_lp(game, &s_plus_of(child))? {
                let child_bound = child_bound.min(bound);
                let dominated = best
                    .as_ref()
                    .is_some_and(|b| child_bound <= b.eta + 1e-9);
                if !dominated {
                    heap.push(EnumNode {
                        bound: child_bound,
                        mask: child,
                    });
                }
            }
        }
    }

    let Some(best) = best else {
        stats.wall = start.elapsed();
        return Ok(SolveReport::no_pure_ne(options.alpha, stats));
    };

    let attained = best.eps_star > EPS_POSITIVE_TOL;
    let approx_strategy = if attained {
        None
    } else {
        stats.approx_solves += 1;
        solve_alpha_approx_quick(game, &best.cfg, best.eta, options.alpha, &live)?.map(|(_, x)| x)
    };
    stats.wall = start.elapsed();
    Ok(SolveReport {
        status: SolveStatus::Optimal,
        supremum: Some(best.eta),
        attained,
        witness: Some(best.witness),
        alpha: options.alpha,
        approx_strategy,
        best_configuration: Some(best.cfg),
        lower_bound: Some(best.eta),
        upper_bound: Some(best.eta),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{make_paper_example, PaperExample};
    use crate::game::leader_pessimistic_utility;
    use crate::oracle::{grid_sup_estimate, GridSpec};

    #[test]
    fn nonexistence_game_supremum_not_attained() {
        let game = make_paper_example(PaperExample::Nonexistence);
        let report = solve_enum(&game, 0.1).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!((report.supremum.unwrap() - 7.5).abs() < 1e-6);
        assert!(!report.attained);
        let x = report.approx_strategy.as_ref().expect("approximation required");
        let f = leader_pessimistic_utility(&game, x).unwrap();
        assert!(f >= 7.4 - 1e-6, "f {f}");
    }

    #[test]
    fn arbitrarily_worse_game_supremum_attained() {
        let game = make_paper_example(PaperExample::ArbitrarilyWorse(10.0));
        let report = solve_enum(&game, 0.1).unwrap();
        assert!((report.supremum.unwrap() - 10.0).abs() < 1e-6);
        assert!(report.attained);
        let w = report.witness.unwrap();
        assert!((w.prob(1) - 1.0).abs() < 1e-6);
        assert!(report.approx_strategy.is_none());
    }

    #[test]
    fn no_pure_equilibrium_reported_explicitly() {
        let game = crate::game::matching_pennies_followers();
        let report = solve_enum(&game, 0.1).unwrap();
        assert_eq!(report.status, SolveStatus::NoPureNe);
        assert!(report.supremum.is_none());
    }

    #[test]
    fn size_cap_directs_to_branch_and_bound() {
        let game = crate::generator::generate_random_game(3, 5, 0);
        match solve_enum(&game, 0.1) {
            Err(EnumError::TooLarge { profiles, .. }) => assert_eq!(profiles, 25),
            other => panic!("expected size error, got {other:?}"),
        }
    }

    #[test]
    fn alpha_validated() {
        let game = make_paper_example(PaperExample::Nonexistence);
        assert!(matches!(solve_enum(&game, -1.0), Err(EnumError::BadAlpha(_))));
    }

    #[test]
    fn grid_oracle_sandwich() {
        for seed in [0, 1, 2] {
            let game = crate::generator::generate_random_game(3, 2, seed);
            let report = solve_enum(&game, 0.5).unwrap();
            let spec = GridSpec::new(0.02, 2).unwrap();
            let grid = grid_sup_estimate(&game, &spec).unwrap();
            match (report.supremum, grid) {
                (Some(sup), Some((est, _))) => {
                    assert!(est <= sup + 1e-6, "grid {est} above supremum {sup}");
                    // Coarse per-piece Lipschitz bound.
                    let slack = game.payoff_scale() * 2.0 * 0.02;
                    assert!(sup <= est + slack, "sup {sup} est {est}");
                }
                (None, None) => {}
                (sup, grid) => panic!("disagreement: {sup:?} vs {grid:?}"),
            }
        }
    }

    #[test]
    fn alpha_certification_when_not_attained() {
        for seed in 0..6 {
            let game = crate::generator::generate_random_game(3, 2, seed);
            let alpha = 0.25;
            let report = solve_enum(&game, alpha).unwrap();
            if report.status != SolveStatus::Optimal || report.attained {
                continue;
            }
            let sup = report.supremum.unwrap();
            let x = report.approx_strategy.as_ref().expect("not attained");
            let f = leader_pessimistic_utility(&game, x).unwrap();
            assert!(f >= sup - alpha - 1e-6, "seed {seed}: f {f} sup {sup}");
        }
    }
}
