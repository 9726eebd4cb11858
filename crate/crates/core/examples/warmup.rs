//! Fits the three-alternative warmup profile with several methods and shows
//! that only the Condorcet-consistent ones put `C` first.

use condorcet_rank::baselines::{elo_fit_mm, MmConfig};
use condorcet_rank::fixtures::equal_win_rate_profile;
use condorcet_rank::metrics::kemeny_optimal;
use condorcet_rank::sco::{fit_sgd, LearningRate, SgdConfig};

fn main() -> condorcet_rank::Result<()> {
    let profile = equal_win_rate_profile();
    let kemeny = kemeny_optimal(&profile, 8)?;
    println!(
        "Kemeny:   {} (distance {})",
        kemeny.ranking.display_with(&profile),
        kemeny.distance
    );

    let config = SgdConfig {
        learning_rate: LearningRate::Constant(0.1),
        batch: condorcet_rank::sco::BatchMode::Full,
        iterations: 2000,
        ..SgdConfig::default()
    };
    let (ratings, trace) = fit_sgd(&profile, &config)?;
    println!(
        "SCO:      {} ratings {:.2?}",
        ratings.ranking().display_with(&profile),
        ratings.theta()
    );
    if let Some(t) = trace.converged_at(&kemeny.ranking) {
        println!("          reached the Kemeny ranking for good at iteration {t}");
    }

    let elo = elo_fit_mm(&profile, &MmConfig::default())?;
    println!(
        "Elo (MM): {} ratings {:.1?}",
        elo.ranking().display_with(&profile),
        elo.ratings
    );
    Ok(())
}
