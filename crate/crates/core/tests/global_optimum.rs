use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use condorcet_rank::sco::{fit_sgd, sigmoid_loss, BatchMode, Bounds, LearningRate, SgdConfig};
use condorcet_rank::sigmoidal::{build_program, recover_ratings, solve_branch_and_bound, BnbConfig};
use condorcet_rank::PreferenceProfile;

fn random_profile(rng: &mut ChaCha8Rng) -> PreferenceProfile {
    let m = rng.random_range(3..=4);
    let n = rng.random_range(2..10);
    let votes: Vec<(Vec<usize>, u64)> = (0..n)
        .map(|_| {
            let mut ids: Vec<usize> = (0..m).collect();
            ids.shuffle(rng);
            ids.truncate(rng.random_range(2..=m));
            (ids, rng.random_range(1..4))
        })
        .collect();
    PreferenceProfile::new(m, votes).unwrap()
}

/// The certified optimum is never worse than what full-batch descent finds,
/// and the recovered ratings evaluate to the same objective.
#[test]
fn branch_and_bound_dominates_gradient_descent() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let bounds = Bounds::new(0.0, 20.0).unwrap();
    let tau = 1.0;
    for case in 0..15 {
        let p = random_profile(&mut rng);
        let program = build_program(&p, bounds, tau).unwrap();
        let sol = solve_branch_and_bound(&program, &BnbConfig::default()).unwrap();
        assert!(sol.certified, "case {case}");
        assert!(sol.gap <= 1e-4);

        let ratings = recover_ratings(&program, &sol.x, bounds, 1e-4).unwrap();
        let at_ratings = sigmoid_loss(p.votes(), ratings.theta(), tau);
        assert!(
            (at_ratings - sol.objective).abs() < 1e-6,
            "case {case}: {at_ratings} vs {}",
            sol.objective
        );

        let config = SgdConfig {
            learning_rate: LearningRate::Constant(0.5),
            temperature: tau,
            batch: BatchMode::Full,
            iterations: 3000,
            bounds,
            record_loss: false,
            ..SgdConfig::default()
        };
        let (fitted, _) = fit_sgd(&p, &config).unwrap();
        let descent = sigmoid_loss(p.votes(), fitted.theta(), tau);
        assert!(
            sol.objective <= descent + 1e-4,
            "case {case}: {} > {descent}",
            sol.objective
        );
    }
}
