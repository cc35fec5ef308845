//! Seeded random game generation. Payoffs are independently drawn from the
//! uniform distribution on [1, 100]; a fixed seed fully determines the game.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::NormalFormGame;

pub const PAYOFF_MIN: f64 = 1.0;
pub const PAYOFF_MAX: f64 = 100.0;

/// Generates an `n`-player game with `m` actions per player. Draw order is
/// player-major, then flat profile index, so the output is reproducible for
/// a fixed seed.
pub fn generate_random_game(n: usize, m: usize, seed: u64) -> NormalFormGame {
    assert!(n >= 2, "need at least two players");
    assert!(m >= 1, "need at least one action per player");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = m.pow(n as u32);
    let tensors = (0..n)
        .map(|_| {
            (0..total)
                .map(|_| rng.gen_range(PAYOFF_MIN..=PAYOFF_MAX))
                .collect()
        })
        .collect();
    NormalFormGame::new(vec![m; n], tensors).expect("generated tensors are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_game() {
        let a = generate_random_game(3, 4, 0);
        let b = generate_random_game(3, 4, 0);
        assert_eq!(a, b);
        let c = generate_random_game(3, 4, 1);
        assert_ne!(a, c);
    }

    #[test]
    fn tensor_sizes() {
        let g = generate_random_game(4, 3, 1);
        assert_eq!(g.actions(), &[3, 3, 3, 3]);
        assert_eq!(g.payoff_tensor(0).len(), 81);
    }

    #[test]
    fn payoffs_in_range_with_expected_mean() {
        // Uniform(1, 100) has mean 50.5; check over ~10^4 draws.
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..53 {
            let g = generate_random_game(3, 4, seed);
            for p in 0..3 {
                for &v in g.payoff_tensor(p) {
                    assert!((PAYOFF_MIN..=PAYOFF_MAX).contains(&v));
                    sum += v;
                    count += 1;
                }
            }
        }
        assert!(count >= 10_000);
        let mean = sum / count as f64;
        assert!((49.0..=52.0).contains(&mean), "mean {mean}");
    }
}
