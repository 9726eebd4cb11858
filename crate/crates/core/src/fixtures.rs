//! Small named profiles used throughout the docs, tests and examples.

use crate::profile::PreferenceProfile;

/// Five votes over `A, B, C` where `C` is the strong Condorcet winner while
/// `A` and `C` have the same overall pairwise win rate.
pub fn equal_win_rate_profile() -> PreferenceProfile {
    PreferenceProfile::from_named_votes(
        &["A", "B", "C"],
        &[
            (&["A", "B", "C"], 1),
            (&["A", "C", "B"], 1),
            (&["C", "A", "B"], 2),
            (&["B", "C", "A"], 1),
        ],
    )
    .expect("static fixture")
}

/// `2: A>B>C, 3: C>A>B`. `C` is the strong Condorcet winner but `A` has the
/// higher pairwise win rate, so win-rate based ratings put `A` first.
pub fn higher_win_rate_profile() -> PreferenceProfile {
    PreferenceProfile::from_named_votes(&["A", "B", "C"], &[(&["A", "B", "C"], 2), (&["C", "A", "B"], 3)])
        .expect("static fixture")
}

/// True skills of the ten-agent posterior demonstration instance.
pub const POSTERIOR_DEMO_SKILLS: [f64; 10] = [
    126.46, 106.00, 114.68, 133.61, 128.01, 85.34, 114.25, 97.73, 98.45, 106.16,
];
