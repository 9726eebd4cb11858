//! Compares sigmoid-loss SGD with the exact Kemeny ranking on random profiles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use condorcet_rank::metrics::{condorcet_match, kemeny_optimal, kendall_tau};
use condorcet_rank::sco::{fit_sgd, BatchMode, LearningRate, SgdConfig};
use condorcet_rank::PreferenceProfile;

fn main() -> condorcet_rank::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let config = SgdConfig {
        learning_rate: LearningRate::Constant(0.01),
        batch: BatchMode::Sampled(32),
        iterations: 10_000,
        ..SgdConfig::default()
    };
    println!("m   n  KT(sco, kemeny)  condorcet");
    for _ in 0..10 {
        let m = rng.random_range(3..=7);
        let n = rng.random_range(10..=100);
        // Noisy copies of a hidden reference order.
        let base: Vec<usize> = (0..m).collect();
        let votes: Vec<(Vec<usize>, u64)> = (0..n)
            .map(|_| {
                let mut v = base.clone();
                for _ in 0..rng.random_range(0..m) {
                    let i = rng.random_range(0..m - 1);
                    v.swap(i, i + 1);
                }
                if rng.random_bool(0.1) {
                    v.shuffle(&mut rng);
                }
                (v, 1)
            })
            .collect();
        let profile = PreferenceProfile::new(m, votes)?;
        let exact = kemeny_optimal(&profile, 8)?;
        let (ratings, _) = fit_sgd(&profile, &config)?;
        let sco = ratings.ranking();
        let kt = kendall_tau(sco.order(), exact.ranking.order())?;
        let cw = match condorcet_match(&sco, &profile) {
            Some(true) => "match",
            Some(false) => "miss",
            None => "none",
        };
        println!("{m} {n:3}  {kt:15}  {cw}");
    }
    Ok(())
}
