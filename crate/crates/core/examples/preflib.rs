//! Reads a PrefLib file (or a bundled sample), prints a summary, and writes
//! it back out in canonical form.
//!
//! ```text
//! cargo run --example preflib -- path/to/file.soi
//! ```

use condorcet_rank::data::{missing_pair_proportion, parse_preflib, read_preflib, serialize_preflib};
use condorcet_rank::profile::strong_condorcet_winner;

const SAMPLE: &str = "\
# DATA TYPE: soi
# NUMBER ALTERNATIVES: 4
# ALTERNATIVE NAME 1: north
# ALTERNATIVE NAME 2: south
# ALTERNATIVE NAME 3: east
# ALTERNATIVE NAME 4: west
3: 1,2,3
2: 3,1
1: 4,3,2,1
";

fn main() -> anyhow::Result<()> {
    let doc = match std::env::args().nth(1) {
        Some(path) => read_preflib(path)?,
        None => parse_preflib(SAMPLE)?,
    };
    let p = &doc.profile;
    println!("data type: {}", doc.header("DATA TYPE").unwrap_or("?"));
    println!(
        "{} alternatives, {} ballots, {} distinct",
        p.num_alternatives(),
        p.total_weight(),
        p.num_distinct_votes()
    );
    println!("pairs never compared: {:.1}%", 100.0 * missing_pair_proportion(p));
    match strong_condorcet_winner(p) {
        Some(w) => println!("Condorcet winner: {}", p.label(w)),
        None => println!("no Condorcet winner"),
    }
    print!("{}", serialize_preflib(p));
    Ok(())
}
