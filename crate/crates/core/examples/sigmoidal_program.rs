//! Solves the sigmoid-loss objective to certified global optimality with
//! branch and bound and maps the solution back to ratings.

use condorcet_rank::fixtures::equal_win_rate_profile;
use condorcet_rank::sco::Bounds;
use condorcet_rank::sigmoidal::{build_program, recover_ratings, solve_branch_and_bound, BnbConfig};

fn main() -> condorcet_rank::Result<()> {
    let profile = equal_win_rate_profile();
    let bounds = Bounds::default();
    let program = build_program(&profile, bounds, 1.0)?;
    println!("{}", program.to_listing());

    let solution = solve_branch_and_bound(&program, &BnbConfig::default())?;
    println!(
        "objective {:.6}, lower bound {:.6}, certified {} after {} nodes",
        solution.objective, solution.lower_bound, solution.certified, solution.nodes_expanded
    );
    let ratings = recover_ratings(&program, &solution.x, bounds, 1e-4)?;
    println!("ratings {:.3?}", ratings.theta());
    println!("ranking {}", ratings.ranking().display_with(&profile));
    Ok(())
}
