//! Ratings learned through a Fenchel-Young loss on perturbed ranks.
//!
//! Rank convention: a higher rating yields a higher rank value, so among `s`
//! candidates the best-rated one has rank `s - 1`. A vote's most preferred
//! candidate therefore carries target rank `s - 1`, and descending the loss
//! raises the ratings of preferred candidates.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gumbel};

use crate::error::{Error, Result};
use crate::profile::{PreferenceProfile, Vote};
use crate::sco::{
    checkpoint_spacing, BatchMode, Bounds, Checkpoint, DescentLoop, LearningRate, Ratings, TrainingTrace,
};

#[derive(Debug, Clone, PartialEq)]
pub struct FyConfig {
    /// Scale of the Gumbel perturbation.
    pub epsilon: f64,
    /// Perturbation samples per vote and step.
    pub mc_samples: usize,
    pub learning_rate: LearningRate,
    pub iterations: usize,
    pub batch: BatchMode,
    pub seed: u64,
    pub bounds: Bounds,
    pub checkpoint_every: Option<usize>,
    /// Monte-Carlo samples used for the loss recorded at checkpoints; 0 disables it.
    pub loss_samples: usize,
}

impl Default for FyConfig {
    fn default() -> Self {
        FyConfig {
            epsilon: 1.0,
            mc_samples: 1,
            learning_rate: LearningRate::Constant(0.01),
            iterations: 10_000,
            batch: BatchMode::Sampled(32),
            seed: 0,
            bounds: Bounds::default(),
            checkpoint_every: None,
            loss_samples: 0,
        }
    }
}

impl FyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if self.mc_samples == 0 {
            return bad("mc_samples must be positive");
        }
        if !(self.learning_rate.at(1) > 0.0) {
            return bad("learning rate must be positive");
        }
        if self.iterations == 0 || self.batch == BatchMode::Sampled(0) || self.checkpoint_every == Some(0) {
            return bad("iterations, batch size and checkpoint spacing must be positive");
        }
        Bounds::new(self.bounds.min, self.bounds.max).map(|_| ())
    }
}

/// `ranks[k]` = number of coordinates below `values[k]`; a tie counts the
/// lower index as smaller. Always a permutation of `0..len`.
pub fn hard_ranks(values: &[f64]) -> Vec<f64> {
    let mut ranks = vec![0.0; values.len()];
    for (r, k) in argsort(values).into_iter().enumerate() {
        ranks[k] = r as f64;
    }
    ranks
}

fn argsort(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

fn gumbel() -> Gumbel<f64> {
    Gumbel::new(0.0, 1.0).expect("standard Gumbel")
}

/// Monte-Carlo estimate of the expected ranks of `values + epsilon·Z`,
/// `Z` i.i.d. standard Gumbel.
pub fn perturbed_ranks<R: Rng + ?Sized>(values: &[f64], epsilon: f64, mc_samples: usize, rng: &mut R) -> Vec<f64> {
    let s = values.len();
    // Integer totals keep every sample's rank sum exact.
    let mut totals = vec![0u64; s];
    let mut noisy = vec![0.0; s];
    let g = gumbel();
    for _ in 0..mc_samples {
        for (k, v) in values.iter().enumerate() {
            noisy[k] = v + epsilon * g.sample(rng);
        }
        for (r, k) in argsort(&noisy).into_iter().enumerate() {
            totals[k] += r as u64;
        }
    }
    totals.iter().map(|&t| t as f64 / mc_samples as f64).collect()
}

/// Target ranks of a vote over its own candidates: first gets `len - 1`.
pub fn target_ranks(vote_len: usize) -> Vec<f64> {
    (0..vote_len).map(|k| (vote_len - 1 - k) as f64).collect()
}

fn accumulate_vote<R: Rng + ?Sized>(
    order: &[usize],
    weight: f64,
    theta: &[f64],
    epsilon: f64,
    mc_samples: usize,
    rng: &mut R,
    grad: &mut [f64],
) {
    let sub: Vec<f64> = order.iter().map(|&a| theta[a]).collect();
    let expected = perturbed_ranks(&sub, epsilon, mc_samples, rng);
    let len = order.len();
    for (k, &a) in order.iter().enumerate() {
        grad[a] += weight * (expected[k] - (len - 1 - k) as f64);
    }
}

/// Multiplicity-weighted batch mean of `y*_ε(θ_S) − y`, scattered into
/// global coordinates. Alternatives absent from the batch get exactly 0.
pub fn fy_gradient<'a, R: Rng + ?Sized>(
    batch: impl IntoIterator<Item = &'a Vote>,
    theta: &[f64],
    epsilon: f64,
    mc_samples: usize,
    rng: &mut R,
) -> Vec<f64> {
    let batch: Vec<&Vote> = batch.into_iter().collect();
    let total: f64 = batch.iter().map(|v| v.multiplicity() as f64).sum();
    let mut grad = vec![0.0; theta.len()];
    for v in batch {
        accumulate_vote(
            v.order(),
            v.multiplicity() as f64 / total,
            theta,
            epsilon,
            mc_samples,
            rng,
            &mut grad,
        );
    }
    grad
}

/// Monte-Carlo estimate of the batch-mean loss `F_ε(θ_S) − yᵀθ_S`, where
/// `F_ε(θ) = E[y*(θ + εZ)ᵀ(θ + εZ)]`.
pub fn fy_loss<'a, R: Rng + ?Sized>(
    batch: impl IntoIterator<Item = &'a Vote>,
    theta: &[f64],
    epsilon: f64,
    mc_samples: usize,
    rng: &mut R,
) -> f64 {
    let g = gumbel();
    let mut total_weight = 0.0;
    let mut total = 0.0;
    for v in batch {
        let order = v.order();
        let s = order.len();
        let mut f = 0.0;
        let mut noisy = vec![0.0; s];
        for _ in 0..mc_samples {
            for (k, &a) in order.iter().enumerate() {
                noisy[k] = theta[a] + epsilon * g.sample(rng);
            }
            for (r, k) in argsort(&noisy).into_iter().enumerate() {
                f += r as f64 * noisy[k];
            }
        }
        f /= mc_samples as f64;
        let target: f64 = order
            .iter()
            .enumerate()
            .map(|(k, &a)| (s - 1 - k) as f64 * theta[a])
            .sum();
        let w = v.multiplicity() as f64;
        total += w * (f - target);
        total_weight += w;
    }
    if total_weight == 0.0 {
        0.0
    } else {
        total / total_weight
    }
}

/// Projected stochastic gradient descent on the Fenchel-Young loss.
pub fn fit_fy(profile: &PreferenceProfile, config: &FyConfig) -> Result<(Ratings, TrainingTrace)> {
    fit_fy_observed(profile, config, |_, _| {})
}

pub fn fit_fy_observed<F>(
    profile: &PreferenceProfile,
    config: &FyConfig,
    mut observer: F,
) -> Result<(Ratings, TrainingTrace)>
where
    F: FnMut(usize, &Ratings),
{
    config.validate()?;
    if profile.total_weight() == 0 {
        return Err(Error::InvalidConfig("cannot fit ratings to an empty profile".into()));
    }
    let votes = profile.votes();
    let (eps, samples) = (config.epsilon, config.mc_samples);
    let mut trace = TrainingTrace::default();
    let looper = DescentLoop {
        profile,
        learning_rate: config.learning_rate,
        batch: config.batch,
        iterations: config.iterations,
        seed: config.seed,
        checkpoint_every: checkpoint_spacing(config.iterations, config.checkpoint_every),
    };
    let init = Ratings::uniform(profile.num_alternatives(), config.bounds);
    let ratings = looper.run(
        init,
        |weighted, theta, rng, grad| {
            for &(vi, w) in weighted {
                accumulate_vote(votes[vi].order(), w, theta, eps, samples, rng, grad);
            }
        },
        |t, r| {
            let loss = (config.loss_samples > 0).then(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_f00d ^ t as u64);
                fy_loss(votes, r.theta(), eps, config.loss_samples, &mut rng)
            });
            trace.checkpoints.push(Checkpoint {
                iteration: t,
                loss,
                ranking: r.ranking(),
            });
            observer(t, r);
        },
    );
    Ok((ratings, trace))
}
