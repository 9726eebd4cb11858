//! Simulates a sparse four-player tournament and scores several rating
//! methods against the hidden skills.

use condorcet_rank::baselines::{approval, borda, elo_fit_mm, elo_online, EloConfig, MmConfig};
use condorcet_rank::data::{generate_tournament, ktd, missing_pair_proportion, Matching, TournamentConfig};
use condorcet_rank::sco::{fit_sgd, BatchMode, LearningRate, SgdConfig};
use condorcet_rank::Ranking;

fn main() -> condorcet_rank::Result<()> {
    let config = TournamentConfig {
        num_contests: 50,
        matching: Matching::SkillMatched,
        seed: 3,
        ..TournamentConfig::default()
    };
    let (profile, truth) = generate_tournament(&config)?;
    println!(
        "{} agents, {} contests, {:.0}% of pairs never met",
        profile.num_alternatives(),
        profile.total_weight(),
        100.0 * missing_pair_proportion(&profile)
    );

    let sgd = SgdConfig {
        learning_rate: LearningRate::Constant(1.0),
        batch: BatchMode::Sampled(16),
        iterations: 10_000,
        seed: 3,
        ..SgdConfig::default()
    };
    let results: Vec<(&str, Ranking)> = vec![
        ("sigmoid-sco", fit_sgd(&profile, &sgd)?.0.ranking()),
        ("elo-mm", elo_fit_mm(&profile, &MmConfig::default())?.ranking()),
        (
            "elo-online",
            Ranking::from_scores(&elo_online(
                profile.num_alternatives(),
                profile.votes(),
                EloConfig::default(),
            )?),
        ),
        ("borda", borda(&profile)),
        ("approval", approval(&profile, 0.5)?),
    ];
    for (name, ranking) in results {
        println!("{name:12} KTD to true ranking: {}", ktd(&ranking, &truth));
    }
    Ok(())
}
