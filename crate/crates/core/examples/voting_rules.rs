//! Classic voting rules and Elo on a profile where the Condorcet winner is
//! not the candidate with the best win rate.

use condorcet_rank::baselines::{
    approval, borda, copeland, elo_fit_mm, plurality, ranked_pairs, MmConfig, DEFAULT_APPROVAL_THRESHOLD,
};
use condorcet_rank::fixtures::higher_win_rate_profile;
use condorcet_rank::metrics::{kemeny_optimal, profile_distance};
use condorcet_rank::profile::strong_condorcet_winner;
use condorcet_rank::Ranking;

fn main() -> condorcet_rank::Result<()> {
    let p = higher_win_rate_profile();
    let winner = strong_condorcet_winner(&p).map(|w| p.label(w));
    println!("Condorcet winner: {}", winner.as_deref().unwrap_or("none"));
    let rules: Vec<(&str, Ranking)> = vec![
        ("kemeny", kemeny_optimal(&p, 8)?.ranking),
        ("copeland", copeland(&p)),
        ("ranked pairs", ranked_pairs(&p)),
        ("borda", borda(&p)),
        ("plurality", plurality(&p)),
        ("approval", approval(&p, DEFAULT_APPROVAL_THRESHOLD)?),
        ("elo (mm)", elo_fit_mm(&p, &MmConfig::default())?.ranking()),
    ];
    for (name, r) in rules {
        println!(
            "{name:13} {}  distance {}",
            r.display_with(&p),
            profile_distance(&p, &r)
        );
    }
    Ok(())
}
