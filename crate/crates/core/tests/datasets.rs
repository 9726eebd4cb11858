use std::collections::HashSet;

use proptest::prelude::*;

use condorcet_rank::data::{
    generate_large_sparse, generate_tournament, ground_truth_from_document, ktd, missing_pair_proportion, mtrd,
    parse_preflib, serialize_preflib, serialize_synthetic, train_test_split, LargeSparseConfig, Matching,
    TournamentConfig,
};
use condorcet_rank::{Error, PreferenceProfile, Ranking};

#[test]
fn split_of_a_large_sparse_profile_has_the_requested_sizes() {
    let config = LargeSparseConfig {
        num_contests: 31_049,
        ..LargeSparseConfig::diplomacy_like(4)
    };
    let (profile, _) = generate_large_sparse(&config).unwrap();
    assert_eq!(profile.total_weight(), 31_049);
    let (train, test) = train_test_split(&profile, 3000, 9).unwrap();
    assert_eq!(train.total_weight(), 28_049);
    assert_eq!(test.total_weight(), 3000);
    let seen: HashSet<usize> = train.votes().iter().flat_map(|v| v.order().to_vec()).collect();
    assert!(test.votes().iter().all(|v| v.order().iter().all(|a| seen.contains(a))));
    assert_eq!(train.num_alternatives(), profile.num_alternatives());

    let (train2, test2) = train_test_split(&profile, 3000, 9).unwrap();
    assert_eq!(train, train2);
    assert_eq!(test, test2);
}

#[test]
fn split_expands_multiplicities_and_rejects_oversized_tests() {
    let p = PreferenceProfile::new(3, [(vec![0, 1, 2], 4), (vec![2, 1, 0], 2)]).unwrap();
    let (train, test) = train_test_split(&p, 2, 0).unwrap();
    assert_eq!(train.total_weight() + test.total_weight(), 6);
    assert!(test.votes().iter().all(|v| v.multiplicity() == 1));
    assert!(matches!(train_test_split(&p, 6, 0), Err(Error::InvalidConfig(_))));
}

#[test]
fn split_fails_when_an_agent_appears_once() {
    let p = PreferenceProfile::new(3, [(vec![0, 1], 1), (vec![1, 2], 1)]).unwrap();
    // Whichever vote is held out, it carries an agent that training never sees.
    assert!(matches!(train_test_split(&p, 1, 3), Err(Error::InfeasibleSplit { .. })));
}

#[test]
fn tournaments_are_reproducible_and_sparse() {
    for matching in [Matching::Uniform, Matching::SkillMatched] {
        let config = TournamentConfig {
            matching,
            seed: 21,
            ..TournamentConfig::default()
        };
        let (a, ta) = generate_tournament(&config).unwrap();
        let (b, tb) = generate_tournament(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        assert_eq!(a.total_weight(), 20);
        assert!(a.votes().iter().all(|v| v.len() == 4));
        let missing = missing_pair_proportion(&a);
        assert!(missing > 0.0 && missing < 1.0);
        assert_eq!(ktd(&ta.true_ranking, &ta), 0);
        assert_eq!(mtrd(&ta.true_ranking, &ta), 0.0);
    }
}

#[test]
fn ktd_of_the_reversed_truth_counts_every_pair() {
    let config = TournamentConfig {
        num_agents: 10,
        seed: 2,
        ..TournamentConfig::default()
    };
    let (_, truth) = generate_tournament(&config).unwrap();
    let reversed = Ranking::new(truth.true_ranking.order().iter().rev().copied().collect()).unwrap();
    assert_eq!(ktd(&reversed, &truth), 45);
    assert!(mtrd(&reversed, &truth) > 0.0);
}

#[test]
fn synthetic_documents_carry_their_ground_truth() {
    let config = TournamentConfig {
        num_agents: 8,
        num_contests: 12,
        seed: 5,
        ..TournamentConfig::default()
    };
    let (profile, truth) = generate_tournament(&config).unwrap();
    let text = serialize_synthetic(&profile, &truth, &[("seed", "5".to_string())]);
    let doc = parse_preflib(&text).unwrap();
    assert_eq!(doc.profile, profile);
    assert_eq!(doc.header("SEED"), Some("5"));
    let parsed = ground_truth_from_document(&doc).unwrap().unwrap();
    assert_eq!(parsed.true_ratings, truth.true_ratings);
    assert_eq!(doc.to_text(), text);
}

fn arbitrary_profile() -> impl Strategy<Value = PreferenceProfile> {
    (2usize..9).prop_flat_map(|m| {
        let vote = Just((0..m).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_flat_map(move |ids| (1..=m).prop_map(move |len| ids[..len].to_vec()));
        prop::collection::vec((vote, 1u64..50), 1..20).prop_map(move |votes| PreferenceProfile::new(m, votes).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn preflib_round_trips(p in arbitrary_profile()) {
        let text = serialize_preflib(&p);
        let doc = parse_preflib(&text).unwrap();
        prop_assert_eq!(&doc.profile, &p);
        prop_assert_eq!(doc.to_text(), text);
    }
}
