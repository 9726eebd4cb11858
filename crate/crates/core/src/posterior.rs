//! Approximate posterior over rankings from constant-step SGD iterates.
//!
//! After a burn-in fit, SGD keeps running at a fixed step size and the
//! induced ranking is recorded every `thinning` steps. The empirical
//! frequencies of those rankings form the distribution.
//!
//! With `StepSize::Auto` the step is `2·(B/n)·d / tr(C)`, where `C` is the
//! covariance of per-ballot gradients at the burn-in point, `B` the batch
//! size, `n` the number of ballots and `d` the number of alternatives.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::profile::{PreferenceProfile, Ranking, Vote};
use crate::sco::{fit_sgd, sigmoid_loss_gradient, BallotSampler, BatchMode, SgdConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorConfig {
    pub burn_in_iterations: usize,
    pub sampling_iterations: usize,
    pub sampling_step_size: StepSize,
    pub thinning: usize,
    pub seed: u64,
    /// Ballots used to estimate the gradient covariance for `StepSize::Auto`.
    pub covariance_samples: usize,
}

impl Default for PosteriorConfig {
    fn default() -> Self {
        PosteriorConfig {
            burn_in_iterations: 10_000,
            sampling_iterations: 10_000,
            sampling_step_size: StepSize::Auto,
            thinning: 10,
            seed: 0,
            covariance_samples: 2000,
        }
    }
}

impl PosteriorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.burn_in_iterations == 0 || self.sampling_iterations == 0 || self.thinning == 0 {
            return Err(Error::InvalidConfig(
                "burn-in, sampling iterations and thinning must be positive".into(),
            ));
        }
        if self.sampling_iterations < self.thinning {
            return Err(Error::InvalidConfig("thinning leaves no samples".into()));
        }
        if let StepSize::Fixed(e) = self.sampling_step_size {
            if !(e > 0.0) {
                return Err(Error::InvalidConfig("step size must be positive".into()));
            }
        }
        if self.sampling_step_size == StepSize::Auto && self.covariance_samples < 2 {
            return Err(Error::InvalidConfig(
                "covariance estimation needs at least two ballots".into(),
            ));
        }
        Ok(())
    }
}

/// Empirical distribution over rankings.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingDistribution {
    counts: BTreeMap<Ranking, u64>,
    total: u64,
}

impl RankingDistribution {
    pub fn from_samples(samples: impl IntoIterator<Item = Ranking>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for r in samples {
            *counts.entry(r).or_insert(0) += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::InvalidConfig(
                "a ranking distribution needs at least one sample".into(),
            ));
        }
        Ok(RankingDistribution { counts, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, ranking: &Ranking) -> u64 {
        self.counts.get(ranking).copied().unwrap_or(0)
    }

    pub fn probability(&self, ranking: &Ranking) -> f64 {
        self.count(ranking) as f64 / self.total as f64
    }

    /// `(ranking, count, probability)` by descending count, then ranking.
    pub fn entries(&self) -> Vec<(&Ranking, u64, f64)> {
        let mut e: Vec<_> = self
            .counts
            .iter()
            .map(|(r, &c)| (r, c, c as f64 / self.total as f64))
            .collect();
        e.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(y.0)));
        e
    }

    /// Most frequent ranking; ties go to the lexicographically smallest.
    pub fn mode(&self) -> &Ranking {
        self.entries()[0].0
    }

    /// Probability that `a` is ranked above `b`.
    pub fn pairwise_uncertainty(&self, a: usize, b: usize) -> f64 {
        assert_ne!(a, b, "pairwise uncertainty needs two distinct alternatives");
        let above: u64 = self
            .counts
            .iter()
            .filter(|(r, _)| {
                let pos = r.positions();
                pos[a] < pos[b]
            })
            .map(|(_, &c)| c)
            .sum();
        above as f64 / self.total as f64
    }

    /// CSV with header `ranking,count,probability`; rankings use profile labels.
    pub fn to_csv(&self, profile: &PreferenceProfile) -> String {
        let mut out = String::from("ranking,count,probability\n");
        for (r, c, p) in self.entries() {
            let _ = writeln!(out, "{},{c},{p}", r.display_with(profile));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSample {
    pub distribution: RankingDistribution,
    /// Step size actually used while sampling.
    pub step_size: f64,
    /// The burn-in point touched the box boundary, so sampling stayed projected.
    pub boundary_contact: bool,
    pub burn_in_theta: Vec<f64>,
}

fn batch_size(profile: &PreferenceProfile, batch: BatchMode) -> usize {
    match batch {
        BatchMode::Full => profile.total_weight() as usize,
        BatchMode::Sampled(k) => k,
    }
}

/// `2·(B/n)·d / tr(Cov[g_i])` with `g_i` the gradient of one ballot at `theta`.
pub fn auto_step_size(
    profile: &PreferenceProfile,
    theta: &[f64],
    temperature: f64,
    batch: usize,
    samples: usize,
    seed: u64,
) -> f64 {
    let d = theta.len();
    let n = profile.total_weight() as f64;
    let votes = profile.votes();
    let mut sampler = BallotSampler::new(profile, seed);
    let mut mean = vec![0.0; d];
    let mut sq = vec![0.0; d];
    for _ in 0..samples {
        let v = &votes[sampler.next_vote()];
        let one = Vote::new(v.order().to_vec(), 1).expect("valid vote");
        let g = sigmoid_loss_gradient([&one], theta, temperature);
        for a in 0..d {
            mean[a] += g[a];
            sq[a] += g[a] * g[a];
        }
    }
    let k = samples as f64;
    let trace: f64 = (0..d)
        .map(|a| (sq[a] - mean[a] * mean[a] / k) / (k - 1.0))
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    2.0 * (batch as f64 / n) * d as f64 / trace
}

/// Burn-in with `sgd`, then constant-step sampling per `config`.
pub fn sample_posterior(
    profile: &PreferenceProfile,
    sgd: &SgdConfig,
    config: &PosteriorConfig,
) -> Result<PosteriorSample> {
    config.validate()?;
    let burn = SgdConfig {
        iterations: config.burn_in_iterations,
        seed: config.seed,
        record_loss: false,
        ..sgd.clone()
    };
    let (ratings, _) = fit_sgd(profile, &burn)?;
    let bounds = sgd.bounds;
    let mut theta = ratings.into_vec();
    let burn_in_theta = theta.clone();
    let boundary_contact = theta.iter().any(|&x| x <= bounds.min || x >= bounds.max);

    let b = batch_size(profile, sgd.batch);
    let step_size = match config.sampling_step_size {
        StepSize::Fixed(e) => e,
        StepSize::Auto => auto_step_size(
            profile,
            &theta,
            sgd.temperature,
            b,
            config.covariance_samples,
            config.seed ^ 0xc0fa_c0fa,
        ),
    };

    let votes = profile.votes();
    let total = profile.total_weight() as f64;
    let mut sampler = BallotSampler::new(profile, config.seed.wrapping_add(0x9e37_79b9));
    let tau = sgd.temperature;
    let mut samples = Vec::with_capacity(config.sampling_iterations / config.thinning);
    for t in 1..=config.sampling_iterations {
        let grad = match sgd.batch {
            BatchMode::Full => {
                let mut g = sigmoid_loss_gradient(votes, &theta, tau);
                g.iter_mut().for_each(|x| *x /= total);
                g
            }
            BatchMode::Sampled(k) => {
                let picked: Vec<Vote> = (0..k)
                    .map(|_| Vote::new(votes[sampler.next_vote()].order().to_vec(), 1).expect("valid"))
                    .collect();
                let mut g = sigmoid_loss_gradient(&picked, &theta, tau);
                g.iter_mut().for_each(|x| *x /= k as f64);
                g
            }
        };
        for (x, g) in theta.iter_mut().zip(&grad) {
            *x -= step_size * g;
            if boundary_contact {
                *x = bounds.clamp(*x);
            }
        }
        if t % config.thinning == 0 {
            samples.push(Ranking::from_scores(&theta));
        }
    }
    Ok(PosteriorSample {
        distribution: RankingDistribution::from_samples(samples)?,
        step_size,
        boundary_contact,
        burn_in_theta,
    })
}
