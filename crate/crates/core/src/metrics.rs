//! Kendall-tau distances, Kemeny scores and the exact Kemeny-Young search.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::profile::{preference_matrix, strong_condorcet_winner, PairwiseCounts, PreferenceProfile, Ranking};

/// Raw and normalized Kendall-tau distance between a vote and a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceReport {
    pub raw: u64,
    pub normalized: f64,
}

/// Number of pairs of `v`'s elements ordered differently in `r`.
///
/// `v` may cover a subset of `r`'s elements; only pairs inside `v` count.
pub fn kendall_tau(v: &[usize], r: &[usize]) -> Result<u64> {
    let pos: HashMap<usize, usize> = r.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mapped = v
        .iter()
        .map(|a| pos.get(a).copied().ok_or(Error::MissingFromReference(*a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(discordant(&mapped))
}

/// Kendall-tau distance using a precomputed position table (`positions[a]`
/// is `a`'s place in the reference ranking). Panics if an id is out of range.
pub fn kendall_tau_positions(v: &[usize], positions: &[usize]) -> u64 {
    let mut d = 0;
    for i in 0..v.len() {
        let pi = positions[v[i]];
        for &b in &v[i + 1..] {
            if positions[b] < pi {
                d += 1;
            }
        }
    }
    d
}

fn discordant(mapped: &[usize]) -> u64 {
    let mut d = 0;
    for i in 0..mapped.len() {
        for j in i + 1..mapped.len() {
            if mapped[j] < mapped[i] {
                d += 1;
            }
        }
    }
    d
}

pub fn normalized_kendall_tau(v: &[usize], r: &[usize]) -> Result<f64> {
    Ok(distance_report(v, r)?.normalized)
}

pub fn distance_report(v: &[usize], r: &[usize]) -> Result<DistanceReport> {
    let raw = kendall_tau(v, r)?;
    let s = v.len() as f64;
    let normalized = if v.len() < 2 {
        0.0
    } else {
        2.0 * raw as f64 / (s * (s - 1.0))
    };
    Ok(DistanceReport { raw, normalized })
}

/// Multiplicity-weighted sum of Kendall-tau distances from every vote to `ranking`.
pub fn profile_distance(profile: &PreferenceProfile, ranking: &Ranking) -> u64 {
    let pos = ranking.positions();
    profile
        .votes()
        .iter()
        .map(|v| v.multiplicity() * kendall_tau_positions(v.order(), &pos))
        .sum()
}

/// `Σ_{i<j} N(π[i], π[j])`: the weight of vote pairs that agree with `ranking`.
pub fn kemeny_score(profile: &PreferenceProfile, ranking: &Ranking) -> u64 {
    let n = preference_matrix(profile);
    score_with_counts(&n, ranking.order())
}

fn score_with_counts(n: &PairwiseCounts, order: &[usize]) -> u64 {
    let mut s = 0;
    for i in 0..order.len() {
        for &b in &order[i + 1..] {
            s += n.get(order[i], b);
        }
    }
    s
}

/// Total number of weighted vote pairs, `Σ_v mult(v)·C(|v|, 2)`.
pub fn total_pair_weight(profile: &PreferenceProfile) -> u64 {
    profile.votes().iter().map(|v| v.multiplicity() * v.pair_count()).sum()
}

pub const DEFAULT_KEMENY_MAX_M: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct KemenyResult {
    /// Lexicographically smallest optimal ranking.
    pub ranking: Ranking,
    /// Its summed Kendall-tau distance to the profile.
    pub distance: u64,
}

/// Exact Kemeny-Young ranking by depth-first branch-and-bound over prefixes.
pub fn kemeny_optimal(profile: &PreferenceProfile, max_m: usize) -> Result<KemenyResult> {
    let (best, _) = kemeny_search(profile, max_m, false)?;
    Ok(best)
}

/// The optimum together with every co-optimal ranking, in lexicographic order.
pub fn kemeny_optimal_all(profile: &PreferenceProfile, max_m: usize) -> Result<(KemenyResult, Vec<Ranking>)> {
    kemeny_search(profile, max_m, true)
}

struct Search<'a> {
    m: usize,
    /// `disagree[a*m + b]`: cost of placing `a` above `b`, i.e. `N(b, a)`.
    disagree: &'a [u64],
    best: u64,
    best_order: Vec<usize>,
    collect_all: bool,
    all: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn lower_bound(&self, remaining: &[usize]) -> u64 {
        let mut lb = 0;
        for i in 0..remaining.len() {
            for &b in &remaining[i + 1..] {
                let a = remaining[i];
                lb += self.disagree[a * self.m + b].min(self.disagree[b * self.m + a]);
            }
        }
        lb
    }

    fn dfs(&mut self, prefix: &mut Vec<usize>, remaining: &mut Vec<usize>, cost: u64) {
        if remaining.is_empty() {
            if cost < self.best {
                self.best = cost;
                self.best_order = prefix.clone();
                self.all.clear();
            }
            if self.collect_all && cost == self.best {
                self.all.push(prefix.clone());
            }
            return;
        }
        let bound = cost + self.lower_bound(remaining);
        if bound > self.best || (!self.collect_all && bound == self.best) {
            return;
        }
        for k in 0..remaining.len() {
            let a = remaining.remove(k);
            let extra: u64 = remaining.iter().map(|&b| self.disagree[a * self.m + b]).sum();
            prefix.push(a);
            self.dfs(prefix, remaining, cost + extra);
            prefix.pop();
            remaining.insert(k, a);
        }
    }
}

fn kemeny_search(profile: &PreferenceProfile, max_m: usize, collect_all: bool) -> Result<(KemenyResult, Vec<Ranking>)> {
    let m = profile.num_alternatives();
    if m > max_m {
        return Err(Error::TooManyAlternatives { m, max_m });
    }
    let n = preference_matrix(profile);
    let mut disagree = vec![0u64; m * m];
    for a in 0..m {
        for b in 0..m {
            disagree[a * m + b] = n.get(b, a);
        }
    }
    let identity: Vec<usize> = (0..m).collect();
    let identity_cost = {
        let mut c = 0;
        for a in 0..m {
            for b in a + 1..m {
                c += disagree[a * m + b];
            }
        }
        c
    };
    let mut search = Search {
        m,
        disagree: &disagree,
        // The identity is a valid incumbent; `+ 1` lets the search rediscover
        // it so ties are resolved in lexicographic order.
        best: identity_cost + 1,
        best_order: identity,
        collect_all,
        all: Vec::new(),
    };
    search.dfs(&mut Vec::with_capacity(m), &mut (0..m).collect(), 0);
    let result = KemenyResult {
        ranking: Ranking::new(search.best_order).expect("search yields permutations"),
        distance: search.best,
    };
    let all = search
        .all
        .into_iter()
        .map(|o| Ranking::new(o).expect("search yields permutations"))
        .collect();
    Ok((result, all))
}

/// `None` when the profile has no strong Condorcet winner, otherwise whether
/// `ranking` puts that winner first.
pub fn condorcet_match(ranking: &Ranking, profile: &PreferenceProfile) -> Option<bool> {
    strong_condorcet_winner(profile).map(|w| ranking.top() == Some(w))
}
