//! Learns ratings through the perturbed-ranking Fenchel-Young loss and
//! compares them with sigmoid-loss SGD.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use condorcet_rank::fenchel_young::{fit_fy, perturbed_ranks, FyConfig};
use condorcet_rank::fixtures::equal_win_rate_profile;
use condorcet_rank::sco::{fit_sgd, BatchMode, LearningRate, SgdConfig};

fn main() -> condorcet_rank::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let values = [2.0, 0.0, 1.0];
    println!("expected ranks of {values:?} under Gumbel noise:");
    for eps in [0.1, 1.0, 10.0] {
        println!("  eps {eps:5}: {:.3?}", perturbed_ranks(&values, eps, 20_000, &mut rng));
    }

    let profile = equal_win_rate_profile();
    let fy = FyConfig {
        learning_rate: LearningRate::Constant(0.1),
        mc_samples: 10,
        iterations: 5000,
        batch: BatchMode::Full,
        ..FyConfig::default()
    };
    let (fy_ratings, _) = fit_fy(&profile, &fy)?;
    let sgd = SgdConfig {
        learning_rate: LearningRate::Constant(0.1),
        batch: BatchMode::Full,
        iterations: 5000,
        ..SgdConfig::default()
    };
    let (sco_ratings, _) = fit_sgd(&profile, &sgd)?;
    println!(
        "FY  {} {:.2?}",
        fy_ratings.ranking().display_with(&profile),
        fy_ratings.theta()
    );
    println!(
        "SCO {} {:.2?}",
        sco_ratings.ranking().display_with(&profile),
        sco_ratings.theta()
    );
    Ok(())
}
