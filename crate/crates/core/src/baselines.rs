//! Elo ratings and classical voting rules over the same preference profiles.
//!
//! Elo treats each vote of length `L` as `C(L, 2)` independent pairwise
//! results. The voting rules return a [`Ranking`] with ties broken by index.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::profile::{preference_matrix_sparse, PairwiseCounts, PreferenceProfile, Ranking, Vote};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EloConfig {
    pub k_factor: f64,
    pub initial_rating: f64,
    /// Rating difference for 10:1 odds.
    pub scale: f64,
}

impl Default for EloConfig {
    fn default() -> Self {
        EloConfig {
            k_factor: 32.0,
            initial_rating: 1500.0,
            scale: 400.0,
        }
    }
}

impl EloConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_factor > 0.0) || !(self.scale > 0.0) || !self.initial_rating.is_finite() {
            return Err(Error::InvalidConfig("k_factor and scale must be positive".into()));
        }
        Ok(())
    }
}

/// Probability that `i` beats `j` on the standard 400-point scale.
pub fn elo_predict(r_i: f64, r_j: f64) -> f64 {
    elo_predict_scaled(r_i, r_j, 400.0)
}

pub fn elo_predict_scaled(r_i: f64, r_j: f64, scale: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf((r_j - r_i) / scale))
}

/// One Elo exchange; `i_won` is the observed outcome for `i`.
pub fn elo_update_online(r_i: f64, r_j: f64, i_won: bool, k_factor: f64) -> (f64, f64) {
    let y = if i_won { 1.0 } else { 0.0 };
    let delta = k_factor * (y - elo_predict(r_i, r_j));
    (r_i + delta, r_j - delta)
}

/// Negative log-likelihood of one pairwise result under the Elo model.
pub fn elo_log_loss(r_i: f64, r_j: f64, i_won: bool, scale: f64) -> f64 {
    let p = elo_predict_scaled(r_i, r_j, scale);
    if i_won {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

/// Sequential Elo over a stream of votes.
#[derive(Debug, Clone, PartialEq)]
pub struct OnlineElo {
    config: EloConfig,
    ratings: Vec<f64>,
}

impl OnlineElo {
    pub fn new(num_alternatives: usize, config: EloConfig) -> Result<Self> {
        config.validate()?;
        Ok(OnlineElo {
            config,
            ratings: vec![config.initial_rating; num_alternatives],
        })
    }

    /// Applies every `(winner, loser)` pair of the vote in position order,
    /// once per unit of multiplicity.
    pub fn observe(&mut self, vote: &Vote) {
        let (k, scale) = (self.config.k_factor, self.config.scale);
        for _ in 0..vote.multiplicity() {
            for (a, b) in vote.pairs() {
                let delta = k * (1.0 - elo_predict_scaled(self.ratings[a], self.ratings[b], scale));
                self.ratings[a] += delta;
                self.ratings[b] -= delta;
            }
        }
    }

    pub fn ratings(&self) -> &[f64] {
        &self.ratings
    }

    pub fn ranking(&self) -> Ranking {
        Ranking::from_scores(&self.ratings)
    }
}

pub fn elo_online<'a>(
    num_alternatives: usize,
    votes: impl IntoIterator<Item = &'a Vote>,
    config: EloConfig,
) -> Result<Vec<f64>> {
    let mut elo = OnlineElo::new(num_alternatives, config)?;
    for v in votes {
        elo.observe(v);
    }
    Ok(elo.ratings)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmConfig {
    pub max_iterations: usize,
    /// Virtual wins and losses of every alternative against a reference of strength 1.
    pub prior_pseudocount: f64,
    /// Stop once the largest relative strength change falls below this.
    pub tolerance: f64,
    pub elo: EloConfig,
}

impl Default for MmConfig {
    fn default() -> Self {
        MmConfig {
            max_iterations: 10_000,
            prior_pseudocount: 0.1,
            tolerance: 1e-10,
            elo: EloConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmFit {
    /// Elo-scale ratings whose mean is `initial_rating`.
    pub ratings: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each iteration, starting with the initial point.
    pub log_likelihood: Vec<f64>,
}

impl MmFit {
    pub fn ranking(&self) -> Ranking {
        Ranking::from_scores(&self.ratings)
    }
}

/// Unordered compared pair `(i, j, w_ij, w_ji)` with `i < j`.
fn compared_pairs(counts: &PairwiseCounts) -> Vec<(usize, usize, f64, f64)> {
    let mut pairs: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for (a, b, c) in counts.nonzero() {
        if a < b {
            pairs.entry((a, b)).or_default().0 += c as f64;
        } else {
            pairs.entry((b, a)).or_default().1 += c as f64;
        }
    }
    pairs.into_iter().map(|((i, j), (wij, wji))| (i, j, wij, wji)).collect()
}

fn bt_objective(pairs: &[(usize, usize, f64, f64)], gamma: &[f64], prior: f64) -> f64 {
    let mut ll = 0.0;
    for &(i, j, wij, wji) in pairs {
        let denom = (gamma[i] + gamma[j]).ln();
        ll += wij * (gamma[i].ln() - denom) + wji * (gamma[j].ln() - denom);
    }
    if prior > 0.0 {
        for &g in gamma {
            // One virtual win and one virtual loss against strength 1.
            ll += prior * (g.ln() - 2.0 * (g + 1.0).ln());
        }
    }
    ll
}

/// Bradley-Terry log-likelihood of the profile's pairwise results at Elo-scale ratings.
pub fn bt_log_likelihood(profile: &PreferenceProfile, ratings: &[f64], scale: f64) -> f64 {
    let pairs = compared_pairs(&preference_matrix_sparse(profile));
    let gamma: Vec<f64> = ratings.iter().map(|r| 10f64.powf(r / scale)).collect();
    bt_objective(&pairs, &gamma, 0.0)
}

/// Bradley-Terry maximum likelihood by minorization-maximization.
pub fn elo_fit_mm(profile: &PreferenceProfile, config: &MmConfig) -> Result<MmFit> {
    config.elo.validate()?;
    if config.max_iterations == 0 || !(config.prior_pseudocount >= 0.0) {
        return Err(Error::InvalidConfig(
            "MM needs at least one iteration and a non-negative prior".into(),
        ));
    }
    let m = profile.num_alternatives();
    let pairs = compared_pairs(&preference_matrix_sparse(profile));
    let prior = config.prior_pseudocount;
    let mut wins = vec![prior; m];
    for &(i, j, wij, wji) in &pairs {
        wins[i] += wij;
        wins[j] += wji;
    }
    let mut gamma = vec![1.0; m];
    let mut trace = vec![bt_objective(&pairs, &gamma, prior)];
    let mut converged = false;
    let mut iterations = 0;
    let mut denom = vec![0.0; m];
    while iterations < config.max_iterations {
        iterations += 1;
        denom.iter_mut().for_each(|d| *d = 0.0);
        for &(i, j, wij, wji) in &pairs {
            let t = (wij + wji) / (gamma[i] + gamma[j]);
            denom[i] += t;
            denom[j] += t;
        }
        let mut change = 0.0f64;
        let next: Vec<f64> = (0..m)
            .map(|i| {
                let d = denom[i] + 2.0 * prior / (gamma[i] + 1.0);
                let g = if d > 0.0 {
                    (wins[i] / d).max(f64::MIN_POSITIVE)
                } else {
                    gamma[i]
                };
                change = change.max(((g - gamma[i]) / gamma[i]).abs());
                g
            })
            .collect();
        gamma = next;
        if prior == 0.0 {
            // Unidentified scale: pin the geometric mean at 1.
            let log_mean = gamma.iter().map(|g| g.ln()).sum::<f64>() / m as f64;
            let s = (-log_mean).exp();
            gamma.iter_mut().for_each(|g| *g *= s);
        }
        trace.push(bt_objective(&pairs, &gamma, prior));
        if change < config.tolerance {
            converged = true;
            break;
        }
    }
    let scale = config.elo.scale;
    let raw: Vec<f64> = gamma.iter().map(|g| scale * g.log10()).collect();
    let mean = raw.iter().sum::<f64>() / m as f64;
    let ratings = raw.iter().map(|r| r - mean + config.elo.initial_rating).collect();
    Ok(MmFit {
        ratings,
        iterations,
        converged,
        log_likelihood: trace,
    })
}

/// Pairwise wins plus half a point for every tie (uncompared pairs tie).
pub fn copeland_scores(profile: &PreferenceProfile) -> Vec<f64> {
    let m = profile.num_alternatives();
    let pairs = compared_pairs(&preference_matrix_sparse(profile));
    let mut wins = vec![0.0; m];
    let mut losses = vec![0.0; m];
    for (i, j, wij, wji) in pairs {
        if wij > wji {
            wins[i] += 1.0;
            losses[j] += 1.0;
        } else if wji > wij {
            wins[j] += 1.0;
            losses[i] += 1.0;
        }
    }
    (0..m)
        .map(|a| wins[a] + 0.5 * ((m - 1) as f64 - wins[a] - losses[a]))
        .collect()
}

pub fn copeland(profile: &PreferenceProfile) -> Ranking {
    Ranking::from_scores(&copeland_scores(profile))
}

/// Position `k` of a vote of length `L` earns `L − 1 − k`; unlisted alternatives earn nothing.
pub fn borda_scores(profile: &PreferenceProfile) -> Vec<f64> {
    let mut s = vec![0.0; profile.num_alternatives()];
    for v in profile.votes() {
        let len = v.len();
        for (k, &a) in v.order().iter().enumerate() {
            s[a] += (v.multiplicity() * (len - 1 - k) as u64) as f64;
        }
    }
    s
}

pub fn borda(profile: &PreferenceProfile) -> Ranking {
    Ranking::from_scores(&borda_scores(profile))
}

pub fn plurality_scores(profile: &PreferenceProfile) -> Vec<f64> {
    let mut s = vec![0.0; profile.num_alternatives()];
    for v in profile.votes() {
        s[v.order()[0]] += v.multiplicity() as f64;
    }
    s
}

pub fn plurality(profile: &PreferenceProfile) -> Ranking {
    Ranking::from_scores(&plurality_scores(profile))
}

pub const DEFAULT_APPROVAL_THRESHOLD: f64 = 0.5;

/// Each vote approves its top `⌈threshold·|v|⌉` entries.
pub fn approval_scores(profile: &PreferenceProfile, threshold_fraction: f64) -> Result<Vec<f64>> {
    if !(threshold_fraction > 0.0 && threshold_fraction <= 1.0) {
        return Err(Error::InvalidConfig("approval threshold must lie in (0, 1]".into()));
    }
    let mut s = vec![0.0; profile.num_alternatives()];
    for v in profile.votes() {
        let approved = ((threshold_fraction * v.len() as f64).ceil() as usize).clamp(1, v.len());
        for &a in &v.order()[..approved] {
            s[a] += v.multiplicity() as f64;
        }
    }
    Ok(s)
}

pub fn approval(profile: &PreferenceProfile, threshold_fraction: f64) -> Result<Ranking> {
    Ok(Ranking::from_scores(&approval_scores(profile, threshold_fraction)?))
}

/// Tideman's ranked pairs. Pairs with positive margin are locked in order of
/// decreasing margin, then decreasing support, then index, skipping any that
/// would close a cycle. The result is the topological order of the locked
/// graph with the smallest available index taken first.
pub fn ranked_pairs(profile: &PreferenceProfile) -> Ranking {
    let m = profile.num_alternatives();
    let mut majorities: Vec<(i64, u64, usize, usize)> = compared_pairs(&preference_matrix_sparse(profile))
        .into_iter()
        .filter_map(|(i, j, wij, wji)| {
            let (wij, wji) = (wij as u64, wji as u64);
            match wij.cmp(&wji) {
                std::cmp::Ordering::Greater => Some(((wij - wji) as i64, wij, i, j)),
                std::cmp::Ordering::Less => Some(((wji - wij) as i64, wji, j, i)),
                std::cmp::Ordering::Equal => None,
            }
        })
        .collect();
    majorities.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.cmp(&x.1)).then((x.2, x.3).cmp(&(y.2, y.3))));

    let mut out: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut stack = Vec::new();
    let mut seen = vec![false; m];
    for &(_, _, a, b) in &majorities {
        // Locking a→b closes a cycle iff a is already reachable from b.
        seen.iter_mut().for_each(|s| *s = false);
        stack.clear();
        stack.push(b);
        seen[b] = true;
        let mut cycle = false;
        while let Some(x) = stack.pop() {
            if x == a {
                cycle = true;
                break;
            }
            for &y in &out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if !cycle {
            out[a].push(b);
        }
    }

    let mut indegree = vec![0usize; m];
    for targets in &out {
        for &b in targets {
            indegree[b] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..m).filter(|&a| indegree[a] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(Reverse(a)) = ready.pop() {
        order.push(a);
        for &b in &out[a] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    Ranking::new(order).expect("locked graph is acyclic")
}
