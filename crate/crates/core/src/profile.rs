//! Votes, preference profiles and the pairwise summaries built from them.
//!
//! Alternatives are dense indices `0..m`. A [`PreferenceProfile`] owns an
//! optional name table so external data (PrefLib files, named fixtures) can
//! be mapped onto indices once, at construction time.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A strict ranking over a subset of alternatives, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    order: Vec<usize>,
    multiplicity: u64,
}

impl Vote {
    pub fn new(order: Vec<usize>, multiplicity: u64) -> Result<Self> {
        validate_vote(0, &order, multiplicity)?;
        Ok(Vote { order, multiplicity })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of ordered pairs `(order[i], order[j])`, `i < j`.
    pub fn pair_count(&self) -> u64 {
        let l = self.order.len() as u64;
        l * l.saturating_sub(1) / 2
    }

    /// Ordered pairs `(winner, loser)` in `(i < j)` lexicographic position order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order
            .iter()
            .enumerate()
            .flat_map(move |(i, &a)| self.order[i + 1..].iter().map(move |&b| (a, b)))
    }
}

fn validate_vote(index: usize, order: &[usize], multiplicity: u64) -> Result<()> {
    if order.is_empty() {
        return Err(Error::EmptyVote { vote: index });
    }
    if multiplicity == 0 {
        return Err(Error::NonPositiveMultiplicity { vote: index });
    }
    let mut seen = HashSet::with_capacity(order.len());
    for &a in order {
        if !seen.insert(a) {
            return Err(Error::DuplicateAlternative {
                vote: index,
                alternative: a,
            });
        }
    }
    Ok(())
}

/// A weighted multiset of votes over a registry of `m` alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    names: Vec<Option<String>>,
    votes: Vec<Vote>,
}

impl PreferenceProfile {
    /// Builds a profile over `num_alternatives` unnamed alternatives.
    pub fn new(num_alternatives: usize, votes: impl IntoIterator<Item = (Vec<usize>, u64)>) -> Result<Self> {
        if num_alternatives == 0 {
            return Err(Error::NoAlternatives);
        }
        let mut out = Vec::new();
        for (i, (order, mult)) in votes.into_iter().enumerate() {
            validate_vote(i, &order, mult)?;
            if let Some(&bad) = order.iter().find(|&&a| a >= num_alternatives) {
                return Err(Error::UnknownAlternative {
                    alternative: bad,
                    count: num_alternatives,
                });
            }
            out.push(Vote {
                order,
                multiplicity: mult,
            });
        }
        Ok(PreferenceProfile {
            names: vec![None; num_alternatives],
            votes: out,
        })
    }

    /// Builds a profile whose registry is exactly the ids mentioned by the
    /// votes, `0..=max_id`. An empty vote list yields a single-alternative
    /// registry with no votes.
    pub fn from_votes(votes: impl IntoIterator<Item = (Vec<usize>, u64)>) -> Result<Self> {
        let votes: Vec<_> = votes.into_iter().collect();
        let m = votes
            .iter()
            .flat_map(|(o, _)| o.iter().copied())
            .max()
            .map_or(1, |x| x + 1);
        Self::new(m, votes)
    }

    /// Builds a profile over named alternatives; index `i` is `names[i]`.
    pub fn with_names<S: AsRef<str>>(names: &[S], votes: impl IntoIterator<Item = (Vec<usize>, u64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in names {
            if !seen.insert(n.as_ref()) {
                return Err(Error::DuplicateName(n.as_ref().to_string()));
            }
        }
        let mut p = Self::new(names.len(), votes)?;
        p.names = names.iter().map(|n| Some(n.as_ref().to_string())).collect();
        Ok(p)
    }

    /// Convenience constructor for fixtures written with alternative names.
    pub fn from_named_votes(names: &[&str], votes: &[(&[&str], u64)]) -> Result<Self> {
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut converted = Vec::with_capacity(votes.len());
        for (order, mult) in votes {
            let ids = order
                .iter()
                .map(|n| index.get(n).copied().ok_or_else(|| Error::UnknownName(n.to_string())))
                .collect::<Result<Vec<_>>>()?;
            converted.push((ids, *mult));
        }
        Self::with_names(names, converted)
    }

    pub fn num_alternatives(&self) -> usize {
        self.names.len()
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn num_distinct_votes(&self) -> usize {
        self.votes.len()
    }

    /// Total vote weight `n`, the sum of multiplicities.
    pub fn total_weight(&self) -> u64 {
        self.votes.iter().map(|v| v.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.votes.is_empty()
    }

    pub fn name(&self, alternative: usize) -> Option<&str> {
        self.names.get(alternative).and_then(|n| n.as_deref())
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }

    /// Label used in reports: the registered name, or the 1-based index.
    pub fn label(&self, alternative: usize) -> String {
        self.name(alternative)
            .map(str::to_string)
            .unwrap_or_else(|| (alternative + 1).to_string())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n.as_deref() == Some(name))
    }

    /// Alternatives that appear in at least one vote.
    pub fn appearing(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_alternatives()];
        for v in &self.votes {
            for &a in &v.order {
                seen[a] = true;
            }
        }
        seen
    }

    /// A profile with the same registry and the given votes.
    pub fn with_votes(&self, votes: Vec<Vote>) -> Self {
        PreferenceProfile {
            names: self.names.clone(),
            votes,
        }
    }

    /// Each vote repeated `multiplicity` times with multiplicity one, in order.
    pub fn expanded_ballots(&self) -> Vec<Vote> {
        self.votes
            .iter()
            .flat_map(|v| {
                std::iter::repeat_n(
                    Vote {
                        order: v.order.clone(),
                        multiplicity: 1,
                    },
                    v.multiplicity as usize,
                )
            })
            .collect()
    }
}

/// A full strict ranking of `m` alternatives, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &a in &order {
            if a >= m || seen[a] {
                return Err(Error::InvalidRanking { expected: m });
            }
            seen[a] = true;
        }
        Ok(Ranking(order))
    }

    pub fn identity(m: usize) -> Self {
        Ranking((0..m).collect())
    }

    /// Sorts alternatives by descending score; ties go to the smaller index.
    pub fn from_scores(scores: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        Ranking(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// `positions()[a]` is the 0-based position of `a` in the ranking.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &a) in self.0.iter().enumerate() {
            pos[a] = i;
        }
        pos
    }

    /// Renders the ranking with profile labels, e.g. `C>A>B`.
    pub fn display_with(&self, profile: &PreferenceProfile) -> String {
        self.0.iter().map(|&a| profile.label(a)).collect::<Vec<_>>().join(">")
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(">"))
    }
}

/// `N(a, b)`: total weight of votes ranking `a` strictly above `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairwiseCounts {
    Dense {
        m: usize,
        counts: Vec<u64>,
    },
    /// Only nonzero entries are stored; used when `m` is large and votes short.
    Sparse {
        m: usize,
        counts: BTreeMap<(usize, usize), u64>,
    },
}

impl PairwiseCounts {
    pub fn num_alternatives(&self) -> usize {
        match self {
            PairwiseCounts::Dense { m, .. } | PairwiseCounts::Sparse { m, .. } => *m,
        }
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        match self {
            PairwiseCounts::Dense { m, counts } => counts[a * m + b],
            PairwiseCounts::Sparse { counts, .. } => counts.get(&(a, b)).copied().unwrap_or(0),
        }
    }

    /// Nonzero entries `(a, b, N(a,b))` in row-major order.
    pub fn nonzero(&self) -> Vec<(usize, usize, u64)> {
        match self {
            PairwiseCounts::Dense { m, counts } => counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(k, &c)| (k / m, k % m, c))
                .collect(),
            PairwiseCounts::Sparse { counts, .. } => counts.iter().map(|(&(a, b), &c)| (a, b, c)).collect(),
        }
    }

    pub fn to_dense(&self) -> PairwiseCounts {
        let m = self.num_alternatives();
        let mut counts = vec![0; m * m];
        for (a, b, c) in self.nonzero() {
            counts[a * m + b] = c;
        }
        PairwiseCounts::Dense { m, counts }
    }
}

/// Builds the dense preference matrix of a profile.
pub fn preference_matrix(profile: &PreferenceProfile) -> PairwiseCounts {
    let m = profile.num_alternatives();
    let mut counts = vec![0u64; m * m];
    for v in profile.votes() {
        for (a, b) in v.pairs() {
            counts[a * m + b] += v.multiplicity();
        }
    }
    PairwiseCounts::Dense { m, counts }
}

/// Builds the preference matrix keyed by ordered pair, storing only nonzeros.
pub fn preference_matrix_sparse(profile: &PreferenceProfile) -> PairwiseCounts {
    let mut counts = BTreeMap::new();
    for v in profile.votes() {
        for (a, b) in v.pairs() {
            *counts.entry((a, b)).or_insert(0) += v.multiplicity();
        }
    }
    PairwiseCounts::Sparse {
        m: profile.num_alternatives(),
        counts,
    }
}

/// `M = N - Nᵀ`, antisymmetric with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginMatrix {
    m: usize,
    margins: Vec<i64>,
}

impl MarginMatrix {
    pub fn num_alternatives(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: usize, b: usize) -> i64 {
        self.margins[a * self.m + b]
    }
}

pub fn margin_matrix(counts: &PairwiseCounts) -> MarginMatrix {
    let m = counts.num_alternatives();
    let mut margins = vec![0i64; m * m];
    for (a, b, c) in counts.nonzero() {
        margins[a * m + b] += c as i64;
        margins[b * m + a] -= c as i64;
    }
    MarginMatrix { m, margins }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondorcetWinners {
    /// Beats every other alternative head to head.
    pub strong: Option<usize>,
    /// Beats or ties every other alternative, ascending index.
    pub weak: Vec<usize>,
}

pub fn condorcet_winner(margins: &MarginMatrix) -> CondorcetWinners {
    let m = margins.num_alternatives();
    let beats_all = |a: usize, strict: bool| {
        (0..m).filter(|&b| b != a).all(|b| {
            let d = margins.get(a, b);
            if strict {
                d > 0
            } else {
                d >= 0
            }
        })
    };
    CondorcetWinners {
        strong: (0..m).find(|&a| beats_all(a, true)),
        weak: (0..m).filter(|&a| beats_all(a, false)).collect(),
    }
}

/// Strong Condorcet winner of a profile, if any.
pub fn strong_condorcet_winner(profile: &PreferenceProfile) -> Option<usize> {
    condorcet_winner(&margin_matrix(&preference_matrix(profile))).strong
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{equal_win_rate_profile, higher_win_rate_profile};

    #[test]
    fn equal_win_rate_profile_shape() {
        let p = equal_win_rate_profile();
        assert_eq!(p.num_alternatives(), 3);
        assert_eq!(p.total_weight(), 5);
    }

    #[test]
    fn empty_vote_list_is_allowed() {
        let p = PreferenceProfile::from_votes(Vec::new()).unwrap();
        assert_eq!(p.total_weight(), 0);
        assert!(preference_matrix(&p).nonzero().is_empty());
    }

    #[test]
    fn vote_validation_errors() {
        assert_eq!(
            PreferenceProfile::from_votes(vec![(vec![0, 0, 1], 1)]),
            Err(Error::DuplicateAlternative {
                vote: 0,
                alternative: 0
            })
        );
        assert_eq!(
            PreferenceProfile::from_votes(vec![(vec![0, 1], 1), (vec![], 1)]),
            Err(Error::EmptyVote { vote: 1 })
        );
        assert_eq!(
            PreferenceProfile::from_votes(vec![(vec![0, 1], 0)]),
            Err(Error::NonPositiveMultiplicity { vote: 0 })
        );
        assert!(matches!(
            PreferenceProfile::new(2, vec![(vec![0, 2], 1)]),
            Err(Error::UnknownAlternative {
                alternative: 2,
                count: 2
            })
        ));
        assert!(PreferenceProfile::with_names(&["A", "A"], Vec::new()).is_err());
    }

    #[test]
    fn equal_win_rate_matrices() {
        let n = preference_matrix(&equal_win_rate_profile());
        let (a, b, c) = (0, 1, 2);
        assert_eq!(
            [
                n.get(a, b),
                n.get(a, c),
                n.get(b, a),
                n.get(b, c),
                n.get(c, a),
                n.get(c, b)
            ],
            [4, 2, 1, 2, 3, 3]
        );
        let mm = margin_matrix(&n);
        assert_eq!(
            [
                mm.get(a, b),
                mm.get(a, c),
                mm.get(c, a),
                mm.get(c, b),
                mm.get(b, a),
                mm.get(b, c)
            ],
            [3, -1, 1, 1, -3, -1]
        );
    }

    #[test]
    fn higher_win_rate_matrices() {
        let n = preference_matrix(&higher_win_rate_profile());
        assert_eq!(
            [
                n.get(0, 1),
                n.get(0, 2),
                n.get(1, 0),
                n.get(1, 2),
                n.get(2, 0),
                n.get(2, 1)
            ],
            [5, 2, 0, 2, 3, 3]
        );
        let mm = margin_matrix(&n);
        assert_eq!((mm.get(2, 0), mm.get(2, 1)), (1, 1));
    }

    #[test]
    fn condorcet_examples() {
        let w = |p: &PreferenceProfile| condorcet_winner(&margin_matrix(&preference_matrix(p)));
        assert_eq!(w(&equal_win_rate_profile()).strong, Some(2));
        assert_eq!(w(&higher_win_rate_profile()).strong, Some(2));
        let cyclic =
            PreferenceProfile::from_votes(vec![(vec![0, 1, 2], 1), (vec![1, 2, 0], 1), (vec![2, 0, 1], 1)]).unwrap();
        let cw = w(&cyclic);
        assert_eq!(cw.strong, None);
        assert!(cw.weak.is_empty());
    }

    #[test]
    fn ranking_validation() {
        assert!(Ranking::new(vec![2, 0, 1]).is_ok());
        assert!(Ranking::new(vec![0, 0, 1]).is_err());
        assert!(Ranking::new(vec![0, 3, 1]).is_err());
        assert_eq!(Ranking::from_scores(&[1.0, 1.0, 2.0]).order(), &[2, 0, 1]);
    }
}
