//! Bounded ratings fitted by projected (stochastic) gradient descent on the
//! sigmoid loss, a smooth surrogate for the summed Kendall-tau distance
//! between the rating-induced ranking and every vote.
//!
//! For a vote `v` and positions `i < j`, the pair `(a, b) = (v[i], v[j])`
//! costs `σ((θ_b − θ_a)/τ)`: close to 1 when the ratings contradict the vote,
//! close to 0 when they agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{PreferenceProfile, Ranking, Vote};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { min: 0.0, max: 100.0 }
    }
}

impl Bounds {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "rating bounds [{min}, {max}] are not an interval"
            )));
        }
        Ok(Bounds { min, max })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.min, self.max)
    }
}

/// One rating per alternative, always inside `bounds`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ratings {
    theta: Vec<f64>,
    bounds: Bounds,
}

impl Ratings {
    /// Ratings must already lie in the box; use [`project`] for raw vectors.
    pub fn new(theta: Vec<f64>, bounds: Bounds) -> Result<Self> {
        if let Some(x) = theta.iter().find(|x| !(bounds.min..=bounds.max).contains(*x)) {
            return Err(Error::InvalidConfig(format!(
                "rating {x} outside [{}, {}]",
                bounds.min, bounds.max
            )));
        }
        Ok(Ratings { theta, bounds })
    }

    /// Every alternative at the centre of the box.
    pub fn uniform(m: usize, bounds: Bounds) -> Self {
        Ratings {
            theta: vec![bounds.midpoint(); m],
            bounds,
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn ranking(&self) -> Ranking {
        induced_ranking(&self.theta)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.theta
    }

    /// Moves coordinate `a` by `-step` and clips it back into the box.
    fn descend(&mut self, a: usize, step: f64) {
        self.theta[a] = self.bounds.clamp(self.theta[a] - step);
    }
}

/// Clamps each coordinate into `bounds`.
pub fn project(theta: &[f64], bounds: Bounds) -> Ratings {
    Ratings {
        theta: theta.iter().map(|&x| bounds.clamp(x)).collect(),
        bounds,
    }
}

/// Descending sort of the ratings, ties broken by ascending index.
pub fn induced_ranking(theta: &[f64]) -> Ranking {
    Ranking::from_scores(theta)
}

/// Numerically stable logistic function.
pub(crate) fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `1 / (1 + exp((θ_a − θ_b)/τ))`: the soft indicator that `b` is rated above `a`.
pub fn soft_discrepancy(theta_a: f64, theta_b: f64, tau: f64) -> f64 {
    logistic((theta_b - theta_a) / tau)
}

/// Multiplicity-weighted sigmoid loss over `batch`.
pub fn sigmoid_loss<'a>(batch: impl IntoIterator<Item = &'a Vote>, theta: &[f64], tau: f64) -> f64 {
    let mut total = 0.0;
    for v in batch {
        let mut s = 0.0;
        for (a, b) in v.pairs() {
            s += soft_discrepancy(theta[a], theta[b], tau);
        }
        total += v.multiplicity() as f64 * s;
    }
    total
}

/// Discrete counterpart of the sigmoid loss: pairs rated strictly against
/// the vote count 1, ties count 0.
pub fn discrete_loss<'a>(batch: impl IntoIterator<Item = &'a Vote>, theta: &[f64]) -> u64 {
    batch
        .into_iter()
        .map(|v| v.multiplicity() * v.pairs().filter(|&(a, b)| theta[b] > theta[a]).count() as u64)
        .sum()
}

/// Adds `weight · ∇` of one vote's sigmoid loss into `grad`.
fn accumulate_vote_gradient(order: &[usize], weight: f64, theta: &[f64], tau: f64, grad: &mut [f64]) {
    for i in 0..order.len() {
        let a = order[i];
        for &b in &order[i + 1..] {
            let s = soft_discrepancy(theta[a], theta[b], tau);
            let d = weight * s * (1.0 - s) / tau;
            grad[a] -= d;
            grad[b] += d;
        }
    }
}

/// Analytic gradient of [`sigmoid_loss`]; alternatives outside the batch get 0.
pub fn sigmoid_loss_gradient<'a>(batch: impl IntoIterator<Item = &'a Vote>, theta: &[f64], tau: f64) -> Vec<f64> {
    let mut grad = vec![0.0; theta.len()];
    for v in batch {
        accumulate_vote_gradient(v.order(), v.multiplicity() as f64, theta, tau, &mut grad);
    }
    grad
}

/// One projected gradient step on a single ballot. Only the ratings of the
/// alternatives in `vote` change.
pub fn update_online(ratings: &mut Ratings, vote: &Vote, alpha: f64, tau: f64) {
    let order = vote.order();
    let mut grad = vec![0.0; order.len()];
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let s = soft_discrepancy(ratings.theta[order[i]], ratings.theta[order[j]], tau);
            let d = s * (1.0 - s) / tau;
            grad[i] -= d;
            grad[j] += d;
        }
    }
    for (k, &a) in order.iter().enumerate() {
        ratings.descend(a, alpha * grad[k]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum LearningRate {
    Constant(f64),
    /// `α / sqrt(t)` at step `t` (1-based).
    InverseSqrt(f64),
}

impl LearningRate {
    pub fn at(&self, t: usize) -> f64 {
        match *self {
            LearningRate::Constant(a) => a,
            LearningRate::InverseSqrt(a) => a / (t.max(1) as f64).sqrt(),
        }
    }

    fn base(&self) -> f64 {
        match *self {
            LearningRate::Constant(a) | LearningRate::InverseSqrt(a) => a,
        }
    }
}

/// How each step's gradient is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatchMode {
    /// Mean over the whole profile, weighted by multiplicity.
    Full,
    /// Mean over this many ballots drawn uniformly with replacement.
    Sampled(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgdConfig {
    pub learning_rate: LearningRate,
    pub temperature: f64,
    pub batch: BatchMode,
    pub iterations: usize,
    pub seed: u64,
    pub bounds: Bounds,
    /// Checkpoint spacing; `None` means `max(1, iterations / 1000)`.
    pub checkpoint_every: Option<usize>,
    /// Evaluate the full-profile loss at each checkpoint.
    pub record_loss: bool,
}

impl Default for SgdConfig {
    fn default() -> Self {
        SgdConfig {
            learning_rate: LearningRate::Constant(0.01),
            temperature: 1.0,
            batch: BatchMode::Sampled(32),
            iterations: 10_000,
            seed: 0,
            bounds: Bounds::default(),
            checkpoint_every: None,
            record_loss: true,
        }
    }
}

impl SgdConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.learning_rate.base() > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(self.temperature > 0.0) {
            return bad("temperature must be positive");
        }
        if self.batch == BatchMode::Sampled(0) {
            return bad("batch size must be positive");
        }
        if self.iterations == 0 {
            return bad("iterations must be positive");
        }
        if self.checkpoint_every == Some(0) {
            return bad("checkpoint spacing must be positive");
        }
        Bounds::new(self.bounds.min, self.bounds.max).map(|_| ())
    }

    pub fn checkpoint_spacing(&self) -> usize {
        checkpoint_spacing(self.iterations, self.checkpoint_every)
    }
}

pub(crate) fn checkpoint_spacing(iterations: usize, every: Option<usize>) -> usize {
    every.unwrap_or_else(|| (iterations / 1000).max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub iteration: usize,
    /// Full-profile loss, when recorded.
    pub loss: Option<f64>,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingTrace {
    pub checkpoints: Vec<Checkpoint>,
}

impl TrainingTrace {
    /// First checkpoint iteration from which every later checkpoint shows `target`.
    pub fn converged_at(&self, target: &Ranking) -> Option<usize> {
        let mut since = None;
        for c in &self.checkpoints {
            if &c.ranking == target {
                since.get_or_insert(c.iteration);
            } else {
                since = None;
            }
        }
        since
    }

    pub fn final_ranking(&self) -> Option<&Ranking> {
        self.checkpoints.last().map(|c| &c.ranking)
    }
}

/// Draws ballots uniformly, so a vote with multiplicity `k` is `k` times as
/// likely as a vote with multiplicity one.
#[derive(Debug, Clone)]
pub struct BallotSampler {
    cumulative: Vec<u64>,
    rng: ChaCha8Rng,
}

impl BallotSampler {
    pub fn new(profile: &PreferenceProfile, seed: u64) -> Self {
        let mut acc = 0;
        let cumulative = profile
            .votes()
            .iter()
            .map(|v| {
                acc += v.multiplicity();
                acc
            })
            .collect();
        BallotSampler {
            cumulative,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Index into `profile.votes()` of the next sampled ballot.
    pub fn next_vote(&mut self) -> usize {
        let total = *self.cumulative.last().expect("sampling from an empty profile");
        let u = self.rng.random_range(0..total);
        self.cumulative.partition_point(|&c| c <= u)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Shared projected-descent loop. `grad_fn` receives `(weighted votes,
/// θ, rng, grad)` and adds the batch gradient into `grad`; the weights sum
/// to one so `grad` is a batch mean.
pub(crate) struct DescentLoop<'a> {
    pub profile: &'a PreferenceProfile,
    pub learning_rate: LearningRate,
    pub batch: BatchMode,
    pub iterations: usize,
    pub seed: u64,
    pub checkpoint_every: usize,
}

impl DescentLoop<'_> {
    pub fn run<G, C>(&self, init: Ratings, mut grad_fn: G, mut on_checkpoint: C) -> Ratings
    where
        G: FnMut(&[(usize, f64)], &[f64], &mut ChaCha8Rng, &mut [f64]),
        C: FnMut(usize, &Ratings),
    {
        let votes = self.profile.votes();
        let total = self.profile.total_weight() as f64;
        let mut ratings = init;
        let m = ratings.len();
        let mut grad = vec![0.0; m];
        let mut touched = vec![false; m];
        let mut touched_list: Vec<usize> = Vec::new();
        let mut sampler = BallotSampler::new(self.profile, self.seed);
        let full: Vec<(usize, f64)> = votes
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.multiplicity() as f64 / total))
            .collect();
        let mut batch: Vec<(usize, f64)> = Vec::new();

        on_checkpoint(0, &ratings);
        for t in 1..=self.iterations {
            let weighted: &[(usize, f64)] = match self.batch {
                BatchMode::Full => &full,
                BatchMode::Sampled(k) => {
                    batch.clear();
                    for _ in 0..k {
                        batch.push((sampler.next_vote(), 1.0 / k as f64));
                    }
                    &batch
                }
            };
            for &(vi, _) in weighted {
                for &a in votes[vi].order() {
                    if !touched[a] {
                        touched[a] = true;
                        touched_list.push(a);
                    }
                }
            }
            grad_fn(weighted, &ratings.theta, sampler.rng(), &mut grad);
            let alpha = self.learning_rate.at(t);
            // Touched coordinates in ascending order keep the update order fixed.
            touched_list.sort_unstable();
            for &a in &touched_list {
                ratings.descend(a, alpha * grad[a]);
                grad[a] = 0.0;
                touched[a] = false;
            }
            touched_list.clear();
            if t % self.checkpoint_every == 0 || t == self.iterations {
                on_checkpoint(t, &ratings);
            }
        }
        ratings
    }
}

fn check_nonempty(profile: &PreferenceProfile) -> Result<()> {
    if profile.total_weight() == 0 {
        return Err(Error::InvalidConfig("cannot fit ratings to an empty profile".into()));
    }
    Ok(())
}

/// Learns ratings with projected (stochastic) gradient descent from the box midpoint.
pub fn fit_sgd(profile: &PreferenceProfile, config: &SgdConfig) -> Result<(Ratings, TrainingTrace)> {
    fit_sgd_observed(profile, config, |_, _| {})
}

/// [`fit_sgd`] with a callback invoked at each checkpoint (including
/// iteration 0) with the current ratings.
pub fn fit_sgd_observed<F>(
    profile: &PreferenceProfile,
    config: &SgdConfig,
    observer: F,
) -> Result<(Ratings, TrainingTrace)>
where
    F: FnMut(usize, &Ratings),
{
    let init = Ratings::uniform(profile.num_alternatives(), config.bounds);
    fit_sgd_from(profile, config, init, observer)
}

/// [`fit_sgd_observed`] starting from given ratings.
pub fn fit_sgd_from<F>(
    profile: &PreferenceProfile,
    config: &SgdConfig,
    init: Ratings,
    mut observer: F,
) -> Result<(Ratings, TrainingTrace)>
where
    F: FnMut(usize, &Ratings),
{
    config.validate()?;
    check_nonempty(profile)?;
    if init.len() != profile.num_alternatives() {
        return Err(Error::InvalidConfig("initial ratings do not match the registry".into()));
    }
    let tau = config.temperature;
    let votes = profile.votes();
    let mut trace = TrainingTrace::default();
    let looper = DescentLoop {
        profile,
        learning_rate: config.learning_rate,
        batch: config.batch,
        iterations: config.iterations,
        seed: config.seed,
        checkpoint_every: config.checkpoint_spacing(),
    };
    let ratings = looper.run(
        init,
        |weighted, theta, _, grad| {
            for &(vi, w) in weighted {
                accumulate_vote_gradient(votes[vi].order(), w, theta, tau, grad);
            }
        },
        |t, r| {
            let loss = config.record_loss.then(|| sigmoid_loss(votes, r.theta(), tau));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{equal_win_rate_profile, higher_win_rate_profile};

    #[test]
    fn soft_discrepancy_values() {
        assert_eq!(soft_discrepancy(3.0, 3.0, 0.7), 0.5);
        let v = soft_discrepancy(20.0, 10.0, 1.0);
        assert!((v - 1.0 / (1.0 + 10f64.exp())).abs() < 1e-18);
        assert!((v - 4.54e-5).abs() < 1e-7);
        let s = soft_discrepancy(1.3, -0.4, 0.5) + soft_discrepancy(-0.4, 1.3, 0.5);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn loss_examples() {
        let p = equal_win_rate_profile();
        let theta = [20.0, 10.0, 30.0];
        assert!((sigmoid_loss(p.votes(), &theta, 0.01) - 5.0).abs() < 1e-3);
        assert_eq!(discrete_loss(p.votes(), &theta), 5);
        let single = Vote::new(vec![0, 1, 2], 1).unwrap();
        assert_eq!(sigmoid_loss([&single], &[4.0; 3], 1.0), 1.5);
        assert_eq!(sigmoid_loss(std::iter::empty(), &[4.0; 3], 1.0), 0.0);
    }

    #[test]
    fn gradient_examples() {
        let v = Vote::new(vec![0, 1], 1).unwrap();
        let g = sigmoid_loss_gradient([&v], &[5.0, 5.0, 9.0], 1.0);
        assert_eq!(g, vec![-0.25, 0.25, 0.0]);
        let p = higher_win_rate_profile();
        let g = sigmoid_loss_gradient(p.votes(), &[10.0, 55.0, 32.0], 3.0);
        assert!(g.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn projection() {
        let b = Bounds::default();
        assert_eq!(project(&[120.0, 50.0, -3.0], b).theta(), &[100.0, 50.0, 0.0]);
        assert!(Ratings::new(vec![101.0], b).is_err());
    }

    #[test]
    fn induced_ranking_examples() {
        assert_eq!(induced_ranking(&[20.0, 10.0, 30.0]).order(), &[2, 0, 1]);
        assert_eq!(induced_ranking(&[1.0; 4]).order(), &[0, 1, 2, 3]);
        assert_eq!(induced_ranking(&[1.0, 2.0, 3.0]).order(), &[2, 1, 0]);
    }

    #[test]
    fn online_update_example() {
        let mut r = Ratings::uniform(3, Bounds::default());
        let v = Vote::new(vec![0, 1], 1).unwrap();
        update_online(&mut r, &v, 0.1, 1.0);
        assert!((r.theta()[0] - 50.025).abs() < 1e-12);
        assert!((r.theta()[1] - 49.975).abs() < 1e-12);
        assert_eq!(r.theta()[2], 50.0);
    }

    #[test]
    fn config_validation() {
        let c = SgdConfig {
            temperature: 0.0,
            ..SgdConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SgdConfig {
            batch: BatchMode::Sampled(0),
            ..SgdConfig::default()
        };
        assert!(c.validate().is_err());
        let empty = PreferenceProfile::new(2, Vec::new()).unwrap();
        assert!(fit_sgd(&empty, &SgdConfig::default()).is_err());
    }

    #[test]
    fn convergence_detection() {
        let r = |o: &[usize]| Ranking::new(o.to_vec()).unwrap();
        let cp = |i, o: &[usize]| Checkpoint {
            iteration: i,
            loss: None,
            ranking: r(o),
        };
        let trace = TrainingTrace {
            checkpoints: vec![
                cp(0, &[0, 1]),
                cp(1, &[1, 0]),
                cp(2, &[0, 1]),
                cp(3, &[1, 0]),
                cp(4, &[1, 0]),
            ],
        };
        assert_eq!(trace.converged_at(&r(&[1, 0])), Some(3));
        assert_eq!(trace.converged_at(&r(&[0, 1])), None);
    }
}
