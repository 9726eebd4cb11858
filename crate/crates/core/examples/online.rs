//! Processes a stream of games once, updating SCO and Elo ratings after each
//! game, and reports how both track the hidden skill order.

use condorcet_rank::baselines::{EloConfig, OnlineElo};
use condorcet_rank::data::{generate_large_sparse, ktd, LargeSparseConfig};
use condorcet_rank::sco::{update_online, Bounds, Ratings};

fn main() -> condorcet_rank::Result<()> {
    let config = LargeSparseConfig {
        num_agents: 200,
        num_contests: 4000,
        ..LargeSparseConfig::diplomacy_like(1)
    };
    let (profile, truth) = generate_large_sparse(&config)?;
    let m = profile.num_alternatives();
    let mut sco = Ratings::uniform(m, Bounds::default());
    let mut elo = OnlineElo::new(m, EloConfig::default())?;
    let pairs = (m * (m - 1) / 2) as f64;
    println!("games  sco-ktd  elo-ktd  (fraction of pairs misordered)");
    for (t, vote) in profile.votes().iter().enumerate() {
        update_online(&mut sco, vote, 1.0, 1.0);
        elo.observe(vote);
        if (t + 1) % 500 == 0 {
            let a = ktd(&sco.ranking(), &truth) as f64 / pairs;
            let b = ktd(&elo.ranking(), &truth) as f64 / pairs;
            println!("{:5}  {a:7.3}  {b:7.3}", t + 1);
        }
    }
    Ok(())
}
