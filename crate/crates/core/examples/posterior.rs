//! Runs constant-step SGD past convergence and reads the visited rankings
//! as a distribution expressing uncertainty about close agents.

use condorcet_rank::harness::{posterior_sample, PosteriorRunConfig};

fn main() -> anyhow::Result<()> {
    let config = PosteriorRunConfig::default();
    let (profile, truth, sample) = posterior_sample(&config)?;
    println!(
        "step size {:.4}, {} samples",
        sample.step_size,
        sample.distribution.total()
    );
    println!("top rankings:");
    for (ranking, count, p) in sample.distribution.entries().into_iter().take(5) {
        println!("  {p:.3} ({count:4})  {}", ranking.display_with(&profile));
    }
    if let Some(truth) = truth {
        println!("true ranking     {}", truth.true_ranking.display_with(&profile));
        let order = truth.true_ranking.order();
        for w in order.windows(2) {
            let u = sample.distribution.pairwise_uncertainty(w[0], w[1]);
            println!(
                "  {} above {}: skill gap {:6.2}, sampled probability {u:.2}",
                profile.label(w[0]),
                profile.label(w[1]),
                truth.true_ratings[w[0]] - truth.true_ratings[w[1]]
            );
        }
    }
    Ok(())
}
