//! Experiment runners and their tabular reports.
//!
//! Each runner takes a plain configuration struct (loadable from TOML) and
//! returns an [`ExperimentReport`]: a fixed column list plus rows sorted by
//! their cell values, so identical configurations emit identical bytes.
//! Independent cells run on the rayon pool.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gumbel, Normal};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    approval, borda, copeland, elo_fit_mm, plurality, ranked_pairs, EloConfig, MmConfig, OnlineElo,
};
use crate::data::{
    generate_large_sparse, generate_tournament, generate_tournament_with_skills, ground_truth_from_document, ktd,
    missing_pair_proportion, mtrd, read_preflib, train_test_split, GroundTruth, LargeSparseConfig, Matching,
    TournamentConfig,
};
use crate::error::{Error, Result};
use crate::fenchel_young::{fit_fy, fit_fy_observed, FyConfig};
use crate::fixtures::{higher_win_rate_profile, POSTERIOR_DEMO_SKILLS};
use crate::metrics::{
    condorcet_match, kemeny_optimal, kemeny_optimal_all, kendall_tau_positions, normalized_kendall_tau,
};
use crate::posterior::{sample_posterior, PosteriorConfig, PosteriorSample, StepSize};
use crate::profile::{strong_condorcet_winner, PreferenceProfile, Ranking};
use crate::sco::{fit_sgd, fit_sgd_observed, update_online, BatchMode, Bounds, LearningRate, Ratings, SgdConfig};
use crate::sigmoidal::{build_program, recover_ratings, solve_branch_and_bound, BnbConfig};

/// One table cell. Serialized untagged: JSON numbers, strings and `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Float(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => f.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Cell::Empty => 0,
            Cell::Int(_) | Cell::Float(_) => 1,
            Cell::Text(_) => 2,
        }
    }

    fn total_cmp(&self, other: &Cell) -> Ordering {
        match (self, other) {
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            (a, b) if a.rank() == 1 && b.rank() == 1 => a.as_f64().unwrap().total_cmp(&b.as_f64().unwrap()),
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<f64> for Cell {
    fn from(f: f64) -> Self {
        Cell::Float(f)
    }
}
impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}
impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(o: Option<T>) -> Self {
        o.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Echo of the configuration that produced the rows.
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Assumptions and side results worth reading next to the rows.
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: &impl Serialize, seeds: Vec<u64>, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            seeds,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Sorts rows lexicographically by cell value.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        });
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rows whose named columns equal the given cells.
    pub fn select(&self, filters: &[(&str, Cell)]) -> Vec<&Vec<Cell>> {
        let idx: Vec<(usize, &Cell)> = filters
            .iter()
            .map(|(n, c)| (self.column(n).unwrap_or_else(|| panic!("no column {n}")), c))
            .collect();
        self.rows
            .iter()
            .filter(|r| idx.iter().all(|&(i, c)| &r[i] == c))
            .collect()
    }

    /// Numeric values of `column` across the selected rows.
    pub fn values(&self, filters: &[(&str, Cell)], column: &str) -> Vec<f64> {
        let i = self.column(column).unwrap_or_else(|| panic!("no column {column}"));
        self.select(filters).iter().filter_map(|r| r[i].as_f64()).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv_field)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown report format {other:?}"))),
        }
    }
}

pub fn render_report(report: &ExperimentReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => report.to_json(),
    }
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_report(report, format)?)?;
    Ok(())
}

/// Reads a TOML configuration; missing keys keep their defaults.
pub fn load_config<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

/// Mean and 95% normal-approximation half-width `1.96·s/√n`.
pub fn mean_ci(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * (var / n).sqrt())
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Mixes a base seed with cell coordinates into an independent stream seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut x = base ^ 0x6a09_e667_f3bc_c908;
    for &p in parts {
        x = (x ^ p).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        x ^= x >> 31;
        x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x ^= x >> 29;
    }
    x
}

/// Groups rows by `keys` and reports count, mean and 95% half-width of each metric.
pub fn summarize(report: &ExperimentReport, keys: &[&str], metrics: &[&str]) -> ExperimentReport {
    let key_idx: Vec<usize> = keys.iter().map(|k| report.column(k).expect("key column")).collect();
    let metric_idx: Vec<usize> = metrics
        .iter()
        .map(|m| report.column(m).expect("metric column"))
        .collect();
    let mut groups: Vec<(Vec<Cell>, Vec<Vec<f64>>)> = Vec::new();
    for r in &report.rows {
        let key: Vec<Cell> = key_idx.iter().map(|&i| r[i].clone()).collect();
        let slot = match groups.iter().position(|(k, _)| k == &key) {
            Some(p) => p,
            None => {
                groups.push((key, vec![Vec::new(); metrics.len()]));
                groups.len() - 1
            }
        };
        for (j, &i) in metric_idx.iter().enumerate() {
            if let Some(v) = r[i].as_f64() {
                groups[slot].1[j].push(v);
            }
        }
    }
    let mut columns: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    columns.push("count".into());
    for m in metrics {
        columns.push(format!("mean_{m}"));
        columns.push(format!("ci95_{m}"));
        columns.push(format!("median_{m}"));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut out = ExperimentReport::new(
        &format!("{}-summary", report.experiment),
        &report.config,
        report.seeds.clone(),
        &cols,
    );
    out.notes = report.notes.clone();
    for (key, vals) in groups {
        let mut row = key;
        row.push(vals.first().map_or(0, Vec::len).into());
        for v in &vals {
            if v.is_empty() {
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
            } else {
                let (mean, half) = mean_ci(v);
                row.extend([mean.into(), half.into(), median(v).into()]);
            }
        }
        out.push(row);
    }
    out.sort();
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

// ---------------------------------------------------------------- warmup

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WarmupConfig {
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub taus: Vec<f64>,
    pub sgd_seeds: usize,
    pub sgd_batch: usize,
    pub max_iterations: usize,
    pub fy_epsilon: f64,
    pub fy_learning_rate: f64,
    pub fy_iterations: usize,
    pub fy_mc_samples: usize,
    pub mm_prior: f64,
}

impl Default for WarmupConfig {
    fn default() -> Self {
        WarmupConfig {
            seed: 0,
            alphas: vec![0.01, 0.1],
            taus: vec![0.5, 1.0, 2.0],
            sgd_seeds: 3,
            sgd_batch: 2,
            max_iterations: 10_000,
            fy_epsilon: 1.0,
            fy_learning_rate: 0.1,
            fy_iterations: 5_000,
            fy_mc_samples: 10,
            mm_prior: 0.1,
        }
    }
}

/// Convergence counts on the five-vote profile with a Condorcet winner that
/// loses on pairwise win rate, plus the Elo and Fenchel-Young contrasts.
///
/// Columns: `method, alpha, tau, seed, converged_at, final_ranking, detail`.
pub fn run_warmup(config: &WarmupConfig) -> Result<ExperimentReport> {
    if config.sgd_batch == 0 || config.max_iterations == 0 {
        return Err(bad("batch size and iteration budget must be positive"));
    }
    let profile = higher_win_rate_profile();
    let target = kemeny_optimal(&profile, 10)?.ranking;
    let seeds: Vec<u64> = (0..config.sgd_seeds as u64).map(|s| config.seed + s).collect();
    let mut report = ExperimentReport::new(
        "warmup",
        config,
        seeds.clone(),
        &[
            "method",
            "alpha",
            "tau",
            "seed",
            "converged_at",
            "final_ranking",
            "detail",
        ],
    );
    for &alpha in &config.alphas {
        for &tau in &config.taus {
            let base = SgdConfig {
                learning_rate: LearningRate::Constant(alpha),
                temperature: tau,
                batch: BatchMode::Full,
                iterations: config.max_iterations,
                seed: config.seed,
                bounds: Bounds::default(),
                checkpoint_every: Some(1),
                record_loss: false,
            };
            let (_, trace) = fit_sgd(&profile, &base)?;
            let final_ranking = trace.final_ranking().map(|r| r.display_with(&profile));
            report.push(vec![
                "gd".into(),
                alpha.into(),
                tau.into(),
                Cell::Empty,
                trace.converged_at(&target).into(),
                final_ranking.into(),
                Cell::Empty,
            ]);
            let mut conv = Vec::new();
            for &seed in &seeds {
                let cfg = SgdConfig {
                    batch: BatchMode::Sampled(config.sgd_batch),
                    seed,
                    ..base.clone()
                };
                let (_, trace) = fit_sgd(&profile, &cfg)?;
                let c = trace.converged_at(&target);
                conv.push(c);
                report.push(vec![
                    "sgd".into(),
                    alpha.into(),
                    tau.into(),
                    seed.into(),
                    c.into(),
                    trace.final_ranking().map(|r| r.display_with(&profile)).into(),
                    Cell::Empty,
                ]);
            }
            let mean = conv
                .iter()
                .copied()
                .collect::<Option<Vec<usize>>>()
                .filter(|v| !v.is_empty())
                .map(|v| v.iter().sum::<usize>() as f64 / v.len() as f64);
            report.push(vec![
                "sgd-mean".into(),
                alpha.into(),
                tau.into(),
                Cell::Empty,
                mean.into(),
                Cell::Empty,
                Cell::Empty,
            ]);
        }
    }

    let mm = elo_fit_mm(
        &profile,
        &MmConfig {
            prior_pseudocount: config.mm_prior,
            ..MmConfig::default()
        },
    )?;
    report.push(vec![
        "elo-mm".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        mm.ranking().display_with(&profile).into(),
        labelled(&profile, &mm.ratings).into(),
    ]);

    let fy = FyConfig {
        epsilon: config.fy_epsilon,
        mc_samples: config.fy_mc_samples,
        learning_rate: LearningRate::Constant(config.fy_learning_rate),
        iterations: config.fy_iterations,
        batch: BatchMode::Full,
        seed: config.seed,
        ..FyConfig::default()
    };
    let (ratings, _) = fit_fy(&profile, &fy)?;
    report.push(vec![
        "fy".into(),
        Cell::Empty,
        Cell::Empty,
        config.seed.into(),
        Cell::Empty,
        ratings.ranking().display_with(&profile).into(),
        labelled(&profile, ratings.theta()).into(),
    ]);

    let sp = build_program(&profile, Bounds::default(), 1.0)?;
    let sol = solve_branch_and_bound(&sp, &BnbConfig::default())?;
    let r = recover_ratings(&sp, &sol.x, Bounds::default(), BnbConfig::default().tolerance)?;
    report.push(vec![
        "sigmoidal".into(),
        Cell::Empty,
        1.0.into(),
        Cell::Empty,
        Cell::Empty,
        r.ranking().display_with(&profile).into(),
        format!("objective={};gap={}", sol.objective, sol.gap).into(),
    ]);
    report.sort();
    Ok(report)
}

fn labelled(profile: &PreferenceProfile, values: &[f64]) -> String {
    values
        .iter()
        .enumerate()
        .map(|(a, v)| format!("{}={v:.6}", profile.label(a)))
        .collect::<Vec<_>>()
        .join(";")
}

// ----------------------------------------------------------- kemeny-eval

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KemenyEvalConfig {
    pub seed: u64,
    /// PrefLib files to evaluate; when empty, random profiles are generated.
    pub files: Vec<String>,
    pub instances: usize,
    pub min_m: usize,
    pub max_m: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub sco_seeds: usize,
    pub alphas: Vec<f64>,
    pub taus: Vec<f64>,
    pub iterations: Vec<usize>,
    pub batch: usize,
    pub kemeny_max_m: usize,
}

impl Default for KemenyEvalConfig {
    fn default() -> Self {
        KemenyEvalConfig {
            seed: 0,
            files: Vec::new(),
            instances: 200,
            min_m: 3,
            max_m: 7,
            min_n: 10,
            max_n: 200,
            sco_seeds: 3,
            alphas: vec![0.01],
            taus: vec![1.0],
            iterations: vec![10_000],
            batch: 32,
            kemeny_max_m: 10,
        }
    }
}

/// Complete votes from noisy utilities: each voter ranks by
/// `u_a + β·G`, `G` standard Gumbel, with `u ~ N(0, 1)` per instance and `β`
/// uniform in `[0.5, 2]`.
pub fn random_profile(rng: &mut ChaCha8Rng, m: usize, n: usize) -> PreferenceProfile {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let gumbel = Gumbel::new(0.0, 1.0).expect("standard Gumbel");
    let utility: Vec<f64> = (0..m).map(|_| normal.sample(rng)).collect();
    let beta = rng.random_range(0.5..2.0);
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for _ in 0..n {
        let noisy: Vec<f64> = utility.iter().map(|u| u + beta * gumbel.sample(rng)).collect();
        *counts.entry(Ranking::from_scores(&noisy).order().to_vec()).or_insert(0) += 1;
    }
    PreferenceProfile::new(m, counts).expect("generated votes are valid")
}

/// The profiles a Kemeny evaluation runs on, with their ids.
pub fn kemeny_instances(config: &KemenyEvalConfig) -> Result<Vec<(String, PreferenceProfile)>> {
    if !config.files.is_empty() {
        return config
            .files
            .iter()
            .map(|f| Ok((f.clone(), read_preflib(f)?.profile)))
            .collect();
    }
    if config.min_m < 2 || config.min_m > config.max_m || config.min_n == 0 || config.min_n > config.max_n {
        return Err(bad("random profile ranges are empty"));
    }
    Ok((0..config.instances)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &[i as u64]));
            let m = rng.random_range(config.min_m..=config.max_m);
            let n = rng.random_range(config.min_n..=config.max_n);
            (format!("random-{i:04}"), random_profile(&mut rng, m, n))
        })
        .collect())
}

/// Instance count, instances with a Condorcet winner, match indicators and normalized distances.
type Tally = (usize, usize, Vec<f64>, Vec<f64>);

/// Kemeny approximation quality of SCO per instance, per `m` group and per
/// hyperparameter cell.
///
/// Columns: `kind, cell, m, instance, n, with_winner, condorcet_match, kt_norm`.
/// `kind` is `instance`, `group` (per cell and `m`), `best` (the cell with the
/// lowest mean distance per `m`) or `overall` (per cell).
pub fn run_kemeny_eval(config: &KemenyEvalConfig) -> Result<ExperimentReport> {
    if config.sco_seeds == 0 || config.batch == 0 {
        return Err(bad("sco_seeds and batch must be positive"));
    }
    let instances = kemeny_instances(config)?;
    let mut cells = Vec::new();
    for &a in &config.alphas {
        for &t in &config.taus {
            for &it in &config.iterations {
                cells.push((format!("alpha={a};tau={t};T={it}"), a, t, it));
            }
        }
    }
    let seeds: Vec<u64> = (0..config.sco_seeds as u64).map(|s| config.seed + s).collect();
    let mut report = ExperimentReport::new(
        "kemeny-eval",
        config,
        seeds.clone(),
        &[
            "kind",
            "cell",
            "m",
            "instance",
            "n",
            "with_winner",
            "condorcet_match",
            "kt_norm",
        ],
    );

    // (cell, m, winner?, match, kt)
    type Outcome = (String, usize, bool, Option<f64>, Option<f64>);
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..cells.len()).map(move |c| (i, c)))
        .collect();
    let optima: Vec<Option<Vec<Ranking>>> = instances
        .par_iter()
        .map(|(_, p)| {
            (p.num_alternatives() <= config.kemeny_max_m)
                .then(|| kemeny_optimal_all(p, config.kemeny_max_m).map(|(_, all)| all))
                .transpose()
        })
        .collect::<Result<_>>()?;
    let results: Vec<(Vec<Cell>, Outcome)> = jobs
        .par_iter()
        .map(|&(i, c)| -> Result<(Vec<Cell>, Outcome)> {
            let (id, profile) = &instances[i];
            let (name, alpha, tau, iterations) = &cells[c];
            let winner = strong_condorcet_winner(profile).is_some();
            let mut matches = Vec::new();
            let mut kts = Vec::new();
            for &seed in &seeds {
                let cfg = SgdConfig {
                    learning_rate: LearningRate::Constant(*alpha),
                    temperature: *tau,
                    batch: BatchMode::Sampled(config.batch),
                    iterations: *iterations,
                    seed: derive_seed(seed, &[i as u64]),
                    checkpoint_every: Some(*iterations),
                    record_loss: false,
                    ..SgdConfig::default()
                };
                let (ratings, _) = fit_sgd(profile, &cfg)?;
                let ranking = ratings.ranking();
                if let Some(hit) = condorcet_match(&ranking, profile) {
                    matches.push(if hit { 1.0 } else { 0.0 });
                }
                if let Some(all) = &optima[i] {
                    let best = all
                        .iter()
                        .map(|k| normalized_kendall_tau(ranking.order(), k.order()))
                        .collect::<Result<Vec<f64>>>()?
                        .into_iter()
                        .fold(f64::INFINITY, f64::min);
                    kts.push(best);
                }
            }
            let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
            let (hit, kt) = (mean(&matches), mean(&kts));
            let m = profile.num_alternatives();
            let row = vec![
                "instance".into(),
                name.as_str().into(),
                m.into(),
                id.as_str().into(),
                profile.total_weight().into(),
                (winner as usize).into(),
                hit.into(),
                kt.into(),
            ];
            Ok((row, (name.clone(), m, winner, hit, kt)))
        })
        .collect::<Result<_>>()?;

    let mut groups: BTreeMap<(String, usize), Tally> = BTreeMap::new();
    let mut overall: BTreeMap<String, Tally> = BTreeMap::new();
    for (row, (cell, m, winner, hit, kt)) in results {
        report.push(row);
        for slot in [
            groups.entry((cell.clone(), m)).or_default(),
            overall.entry(cell).or_default(),
        ] {
            slot.0 += 1;
            slot.1 += winner as usize;
            if let Some(h) = hit {
                slot.2.push(h);
            }
            if let Some(k) = kt {
                slot.3.push(k);
            }
        }
    }
    let avg = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    let mut best: BTreeMap<usize, (f64, String)> = BTreeMap::new();
    for ((cell, m), (count, winners, hits, kts)) in &groups {
        let kt = avg(kts);
        report.push(vec![
            "group".into(),
            cell.as_str().into(),
            (*m).into(),
            Cell::Empty,
            (*count).into(),
            (*winners).into(),
            avg(hits).into(),
            kt.into(),
        ]);
        if let Some(k) = kt {
            let e = best.entry(*m).or_insert((f64::INFINITY, String::new()));
            if k < e.0 {
                *e = (k, cell.clone());
            }
        }
    }
    for (m, (kt, cell)) in best {
        report.push(vec![
            "best".into(),
            cell.into(),
            m.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            kt.into(),
        ]);
    }
    for (cell, (count, winners, hits, kts)) in overall {
        report.push(vec![
            "overall".into(),
            cell.into(),
            Cell::Empty,
            Cell::Empty,
            count.into(),
            winners.into(),
            avg(&hits).into(),
            avg(&kts).into(),
        ]);
    }
    report.notes.push(
        "kt_norm is the normalized Kendall-tau distance to the nearest co-optimal Kemeny ranking, averaged over SCO seeds"
            .into(),
    );
    report.sort();
    Ok(report)
}

// ------------------------------------------------------------ tournament

pub const TOURNAMENT_METHODS: [&str; 10] = [
    "true",
    "sigmoid-sco",
    "fy-sco",
    "elo-mm",
    "elo-online",
    "copeland",
    "borda",
    "plurality",
    "approval",
    "ranked-pairs",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TournamentGridConfig {
    pub seed: u64,
    pub seeds: usize,
    pub ns: Vec<usize>,
    pub matchings: Vec<Matching>,
    pub num_agents: usize,
    pub contest_size: usize,
    pub skill_mean: f64,
    pub skill_stddev: f64,
    pub performance_noise_stddev: f64,
    pub methods: Vec<String>,
    pub alpha: f64,
    pub tau: f64,
    pub batch: usize,
    pub iterations: usize,
    pub fy_epsilon: f64,
    pub fy_learning_rate: f64,
    pub fy_mc_samples: usize,
    pub approval_threshold: f64,
    pub mm_prior: f64,
    pub k_factor: f64,
}

impl Default for TournamentGridConfig {
    fn default() -> Self {
        TournamentGridConfig {
            seed: 0,
            seeds: 50,
            ns: vec![5, 10, 20, 30, 50, 75, 100, 200],
            matchings: vec![Matching::Uniform, Matching::SkillMatched],
            num_agents: 20,
            contest_size: 4,
            skill_mean: 100.0,
            skill_stddev: 30.0,
            performance_noise_stddev: 5.0,
            methods: TOURNAMENT_METHODS.iter().map(|s| s.to_string()).collect(),
            alpha: 1.0,
            tau: 1.0,
            batch: 16,
            iterations: 10_000,
            fy_epsilon: 1.0,
            fy_learning_rate: 0.1,
            fy_mc_samples: 1,
            approval_threshold: 0.5,
            mm_prior: 0.1,
            k_factor: 32.0,
        }
    }
}

/// Ranking produced by a named method on a tournament profile.
fn tournament_ranking(
    method: &str,
    profile: &PreferenceProfile,
    truth: &GroundTruth,
    config: &TournamentGridConfig,
    seed: u64,
) -> Result<Ranking> {
    Ok(match method {
        "true" => truth.true_ranking.clone(),
        "sigmoid-sco" => {
            let cfg = SgdConfig {
                learning_rate: LearningRate::Constant(config.alpha),
                temperature: config.tau,
                batch: BatchMode::Sampled(config.batch),
                iterations: config.iterations,
                seed,
                checkpoint_every: Some(config.iterations),
                record_loss: false,
                ..SgdConfig::default()
            };
            fit_sgd(profile, &cfg)?.0.ranking()
        }
        "fy-sco" => {
            let cfg = FyConfig {
                epsilon: config.fy_epsilon,
                mc_samples: config.fy_mc_samples,
                learning_rate: LearningRate::Constant(config.fy_learning_rate),
                iterations: config.iterations,
                batch: BatchMode::Sampled(config.batch),
                seed,
                checkpoint_every: Some(config.iterations),
                ..FyConfig::default()
            };
            fit_fy(profile, &cfg)?.0.ranking()
        }
        "elo-mm" => elo_fit_mm(
            profile,
            &MmConfig {
                prior_pseudocount: config.mm_prior,
                ..MmConfig::default()
            },
        )?
        .ranking(),
        "elo-online" => {
            let mut ballots = profile.expanded_ballots();
            ballots.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let cfg = EloConfig {
                k_factor: config.k_factor,
                ..EloConfig::default()
            };
            let mut elo = OnlineElo::new(profile.num_alternatives(), cfg)?;
            ballots.iter().for_each(|b| elo.observe(b));
            elo.ranking()
        }
        "copeland" => copeland(profile),
        "borda" => borda(profile),
        "plurality" => plurality(profile),
        "approval" => approval(profile, config.approval_threshold)?,
        "ranked-pairs" => ranked_pairs(profile),
        other => return Err(bad(format!("unknown method {other:?}"))),
    })
}

/// KTD and MTRD to the true ranking for every method on freshly generated
/// tournaments.
///
/// Columns: `matching, n, method, seed, ktd, mtrd, missing`.
pub fn run_sparse_tournament(config: &TournamentGridConfig) -> Result<ExperimentReport> {
    for m in &config.methods {
        if !TOURNAMENT_METHODS.contains(&m.as_str()) {
            return Err(bad(format!("unknown method {m:?}")));
        }
    }
    let seeds: Vec<u64> = (0..config.seeds as u64).map(|s| config.seed + s).collect();
    let mut report = ExperimentReport::new(
        "tournament",
        config,
        seeds.clone(),
        &["matching", "n", "method", "seed", "ktd", "mtrd", "missing"],
    );
    let jobs: Vec<(Matching, usize, u64)> = config
        .matchings
        .iter()
        .flat_map(|&mt| {
            let seeds = &seeds;
            config
                .ns
                .iter()
                .flat_map(move |&n| seeds.iter().map(move |&s| (mt, n, s)))
        })
        .collect();
    let rows: Vec<Vec<Vec<Cell>>> = jobs
        .par_iter()
        .map(|&(matching, n, seed)| -> Result<Vec<Vec<Cell>>> {
            let instance_seed = derive_seed(seed, &[n as u64, matching as u64]);
            let tc = TournamentConfig {
                num_agents: config.num_agents,
                contest_size: config.contest_size,
                num_contests: n,
                skill_mean: config.skill_mean,
                skill_stddev: config.skill_stddev,
                performance_noise_stddev: config.performance_noise_stddev,
                matching,
                seed: instance_seed,
            };
            let (profile, truth) = generate_tournament(&tc)?;
            let missing = missing_pair_proportion(&profile);
            config
                .methods
                .iter()
                .map(|method| {
                    let r = tournament_ranking(method, &profile, &truth, config, derive_seed(instance_seed, &[1]))?;
                    Ok(vec![
                        matching.as_str().into(),
                        n.into(),
                        method.as_str().into(),
                        seed.into(),
                        ktd(&r, &truth).into(),
                        mtrd(&r, &truth).into(),
                        missing.into(),
                    ])
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    for r in rows.into_iter().flatten() {
        report.push(r);
    }
    report.notes.push(format!(
        "borda scores only listed alternatives; approval approves the top ceil({}·|v|) of each vote",
        config.approval_threshold
    ));
    report.sort();
    Ok(report)
}

// ---------------------------------------------------------- large / online

/// Where a large evaluation gets its votes: a PrefLib file, or the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSource {
    pub dataset: Option<String>,
    pub generator: LargeSparseConfig,
}

impl Default for DatasetSource {
    fn default() -> Self {
        DatasetSource {
            dataset: None,
            generator: LargeSparseConfig::diplomacy_like(0),
        }
    }
}

impl DatasetSource {
    pub fn load(&self) -> Result<(PreferenceProfile, Option<GroundTruth>)> {
        match &self.dataset {
            Some(path) => {
                let doc = read_preflib(path)?;
                let truth = ground_truth_from_document(&doc)?;
                Ok((doc.profile, truth))
            }
            None => {
                let (p, t) = generate_large_sparse(&self.generator)?;
                Ok((p, Some(t)))
            }
        }
    }
}

/// Mean subset Kendall-tau distance between each test vote and the ranking
/// induced by `scores`.
pub fn ktd_test(scores: &[f64], test: &PreferenceProfile) -> f64 {
    let pos = Ranking::from_scores(scores).positions();
    let total = test.total_weight() as f64;
    test.votes()
        .iter()
        .map(|v| v.multiplicity() as f64 * kendall_tau_positions(v.order(), &pos) as f64)
        .sum::<f64>()
        / total
}

fn split_counts(n: u64, test_fraction: f64) -> Result<usize> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(bad("test_fraction must lie in (0, 1)"));
    }
    Ok(((n as f64) * test_fraction).round().max(1.0) as usize)
}

pub const LARGE_EVAL_METHODS: [&str; 4] = ["sigmoid-sco", "fy-sco", "elo-online", "elo-mm"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LargeEvalConfig {
    pub seed: u64,
    pub source: DatasetSource,
    pub splits: usize,
    pub test_fraction: f64,
    pub methods: Vec<String>,
    pub alpha: f64,
    pub tau: f64,
    pub batch: usize,
    pub iterations: usize,
    pub checkpoints: usize,
    pub fy_epsilon: f64,
    pub fy_learning_rate: f64,
    pub fy_mc_samples: usize,
    pub k_factor: f64,
    pub mm_prior: f64,
}

impl Default for LargeEvalConfig {
    fn default() -> Self {
        LargeEvalConfig {
            seed: 0,
            source: DatasetSource::default(),
            splits: 10,
            test_fraction: 0.1,
            methods: LARGE_EVAL_METHODS.iter().map(|s| s.to_string()).collect(),
            alpha: 0.2,
            tau: 1.0,
            batch: 32,
            iterations: 20_000,
            checkpoints: 10,
            fy_epsilon: 1.0,
            fy_learning_rate: 0.02,
            fy_mc_samples: 1,
            k_factor: 32.0,
            mm_prior: 0.1,
        }
    }
}

/// Held-out KTD curves over training for each method and split.
///
/// Columns: `split, method, iteration, ktd_test`. Online Elo reports the
/// number of training ballots consumed as its iteration; the MM fit is a
/// single final row.
pub fn run_large_sparse_eval(config: &LargeEvalConfig) -> Result<ExperimentReport> {
    for m in &config.methods {
        if !LARGE_EVAL_METHODS.contains(&m.as_str()) {
            return Err(bad(format!("unknown method {m:?}")));
        }
    }
    if config.splits == 0 || config.checkpoints == 0 || config.iterations == 0 || config.batch == 0 {
        return Err(bad("splits, checkpoints, iterations and batch must be positive"));
    }
    let (profile, _) = config.source.load()?;
    let test_count = split_counts(profile.total_weight(), config.test_fraction)?;
    let seeds: Vec<u64> = (0..config.splits as u64).map(|s| config.seed + s).collect();
    let mut report = ExperimentReport::new(
        "large-eval",
        config,
        seeds.clone(),
        &["split", "method", "iteration", "ktd_test"],
    );
    let every = (config.iterations / config.checkpoints).max(1);
    let jobs: Vec<(u64, &str)> = seeds
        .iter()
        .flat_map(|&s| config.methods.iter().map(move |m| (s, m.as_str())))
        .collect();
    let rows: Vec<Vec<Vec<Cell>>> = jobs
        .par_iter()
        .map(|&(split, method)| -> Result<Vec<Vec<Cell>>> {
            let (train, test) = train_test_split(&profile, test_count, derive_seed(split, &[0x5117]))?;
            let run_seed = derive_seed(split, &[7]);
            let mut curve: Vec<(Cell, f64)> = Vec::new();
            match method {
                "sigmoid-sco" => {
                    let cfg = SgdConfig {
                        learning_rate: LearningRate::Constant(config.alpha),
                        temperature: config.tau,
                        batch: BatchMode::Sampled(config.batch),
                        iterations: config.iterations,
                        seed: run_seed,
                        checkpoint_every: Some(every),
                        record_loss: false,
                        ..SgdConfig::default()
                    };
                    fit_sgd_observed(&train, &cfg, |t, r| curve.push((t.into(), ktd_test(r.theta(), &test))))?;
                }
                "fy-sco" => {
                    let cfg = FyConfig {
                        epsilon: config.fy_epsilon,
                        mc_samples: config.fy_mc_samples,
                        learning_rate: LearningRate::Constant(config.fy_learning_rate),
                        iterations: config.iterations,
                        batch: BatchMode::Sampled(config.batch),
                        seed: run_seed,
                        checkpoint_every: Some(every),
                        ..FyConfig::default()
                    };
                    fit_fy_observed(&train, &cfg, |t, r| curve.push((t.into(), ktd_test(r.theta(), &test))))?;
                }
                "elo-online" => {
                    let mut ballots = train.expanded_ballots();
                    ballots.shuffle(&mut ChaCha8Rng::seed_from_u64(run_seed));
                    let mut elo = OnlineElo::new(
                        train.num_alternatives(),
                        EloConfig {
                            k_factor: config.k_factor,
                            ..EloConfig::default()
                        },
                    )?;
                    let stride = (ballots.len() / config.checkpoints).max(1);
                    curve.push((0usize.into(), ktd_test(elo.ratings(), &test)));
                    for (i, b) in ballots.iter().enumerate() {
                        elo.observe(b);
                        if (i + 1).is_multiple_of(stride) || i + 1 == ballots.len() {
                            curve.push(((i + 1).into(), ktd_test(elo.ratings(), &test)));
                        }
                    }
                }
                "elo-mm" => {
                    let fit = elo_fit_mm(
                        &train,
                        &MmConfig {
                            prior_pseudocount: config.mm_prior,
                            ..MmConfig::default()
                        },
                    )?;
                    curve.push((Cell::Empty, ktd_test(&fit.ratings, &test)));
                }
                _ => unreachable!("validated above"),
            }
            curve.dedup_by(|a, b| a.0 == b.0);
            Ok(curve
                .into_iter()
                .map(|(it, k)| vec![split.into(), method.into(), it, k.into()])
                .collect())
        })
        .collect::<Result<_>>()?;
    for r in rows.into_iter().flatten() {
        report.push(r);
    }
    report.notes.push(format!(
        "{} votes over {} alternatives; {} held out per split",
        profile.total_weight(),
        profile.num_alternatives(),
        test_count
    ));
    report.sort();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OnlineEvalConfig {
    pub seed: u64,
    pub source: DatasetSource,
    pub shuffles: usize,
    pub test_fraction: f64,
    pub alphas: Vec<f64>,
    pub taus: Vec<f64>,
    pub checkpoints: usize,
    pub k_factor: f64,
}

impl Default for OnlineEvalConfig {
    fn default() -> Self {
        OnlineEvalConfig {
            seed: 0,
            source: DatasetSource::default(),
            shuffles: 50,
            test_fraction: 0.1,
            alphas: vec![0.5, 0.2, 0.1, 0.02, 0.01],
            taus: vec![0.5, 1.0, 2.0],
            checkpoints: 20,
            k_factor: 32.0,
        }
    }
}

/// Single-pass online SCO (one ballot per step) against online Elo.
///
/// Columns: `shuffle, method, alpha, tau, iteration, ktd_test`. For each
/// shuffle the split and the ballot order are drawn from the shuffle seed.
pub fn run_online_eval(config: &OnlineEvalConfig) -> Result<ExperimentReport> {
    if config.shuffles == 0 || config.checkpoints == 0 {
        return Err(bad("shuffles and checkpoints must be positive"));
    }
    let (profile, _) = config.source.load()?;
    let test_count = split_counts(profile.total_weight(), config.test_fraction)?;
    let seeds: Vec<u64> = (0..config.shuffles as u64).map(|s| config.seed + s).collect();
    let mut report = ExperimentReport::new(
        "online-eval",
        config,
        seeds.clone(),
        &["shuffle", "method", "alpha", "tau", "iteration", "ktd_test"],
    );
    let rows: Vec<Vec<Vec<Cell>>> = seeds
        .par_iter()
        .map(|&shuffle| -> Result<Vec<Vec<Cell>>> {
            let (train, test) = train_test_split(&profile, test_count, derive_seed(shuffle, &[0x5117]))?;
            let mut ballots = train.expanded_ballots();
            ballots.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(shuffle, &[0x0d3e])));
            let stride = (ballots.len() / config.checkpoints).max(1);
            let marks = |i: usize| (i + 1).is_multiple_of(stride) || i + 1 == ballots.len();
            let mut rows = Vec::new();
            let m = train.num_alternatives();
            for &alpha in &config.alphas {
                for &tau in &config.taus {
                    let mut ratings = Ratings::uniform(m, Bounds::default());
                    rows.push(online_row(
                        shuffle,
                        "sco",
                        alpha.into(),
                        tau.into(),
                        0,
                        ktd_test(ratings.theta(), &test),
                    ));
                    for (i, b) in ballots.iter().enumerate() {
                        update_online(&mut ratings, b, alpha, tau);
                        if marks(i) {
                            rows.push(online_row(
                                shuffle,
                                "sco",
                                alpha.into(),
                                tau.into(),
                                i + 1,
                                ktd_test(ratings.theta(), &test),
                            ));
                        }
                    }
                }
            }
            let mut elo = OnlineElo::new(
                m,
                EloConfig {
                    k_factor: config.k_factor,
                    ..EloConfig::default()
                },
            )?;
            rows.push(online_row(
                shuffle,
                "elo-online",
                Cell::Empty,
                Cell::Empty,
                0,
                ktd_test(elo.ratings(), &test),
            ));
            for (i, b) in ballots.iter().enumerate() {
                elo.observe(b);
                if marks(i) {
                    rows.push(online_row(
                        shuffle,
                        "elo-online",
                        Cell::Empty,
                        Cell::Empty,
                        i + 1,
                        ktd_test(elo.ratings(), &test),
                    ));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    for r in rows.into_iter().flatten() {
        report.push(r);
    }
    report.sort();
    Ok(report)
}

fn online_row(shuffle: u64, method: &str, alpha: Cell, tau: Cell, iteration: usize, ktd: f64) -> Vec<Cell> {
    vec![shuffle.into(), method.into(), alpha, tau, iteration.into(), ktd.into()]
}

// ------------------------------------------------------------- posterior

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PosteriorRunConfig {
    pub seed: u64,
    /// PrefLib file; when absent, the ten-agent skill-matched demo instance is generated.
    pub dataset: Option<String>,
    pub num_contests: usize,
    pub contest_size: usize,
    pub performance_noise_stddev: f64,
    pub alpha: f64,
    pub tau: f64,
    pub batch: usize,
    pub burn_in_iterations: usize,
    pub sampling_iterations: usize,
    pub thinning: usize,
    /// Fixed sampling step; absent means the covariance-based automatic step.
    pub step_size: Option<f64>,
    pub covariance_samples: usize,
}

impl Default for PosteriorRunConfig {
    fn default() -> Self {
        PosteriorRunConfig {
            seed: 0,
            dataset: None,
            num_contests: 8000,
            contest_size: 4,
            performance_noise_stddev: 5.0,
            alpha: 1.0,
            tau: 1.0,
            batch: 32,
            burn_in_iterations: 10_000,
            sampling_iterations: 10_000,
            thinning: 10,
            step_size: None,
            covariance_samples: 2000,
        }
    }
}

/// The ten-agent skill-matched instance with fixed true skills.
pub fn posterior_demo_instance(config: &PosteriorRunConfig) -> Result<(PreferenceProfile, GroundTruth)> {
    let tc = TournamentConfig {
        num_contests: config.num_contests,
        contest_size: config.contest_size,
        performance_noise_stddev: config.performance_noise_stddev,
        matching: Matching::SkillMatched,
        seed: config.seed,
        ..TournamentConfig::default()
    };
    generate_tournament_with_skills(&tc, &POSTERIOR_DEMO_SKILLS)
}

/// Sampled ranking distribution plus adjacent-pair probabilities of its mode.
///
/// Columns: `kind, item, count, probability`. `kind` is `ranking` (item is
/// the ranking) or `pair` (item `a>b`, the probability that `a` precedes `b`).
pub fn run_posterior(config: &PosteriorRunConfig) -> Result<ExperimentReport> {
    let (profile, truth, sample) = posterior_sample(config)?;
    let d = &sample.distribution;
    let mut report = ExperimentReport::new(
        "posterior",
        config,
        vec![config.seed],
        &["kind", "item", "count", "probability"],
    );
    for (r, c, p) in d.entries() {
        report.push(vec![
            "ranking".into(),
            r.display_with(&profile).into(),
            c.into(),
            p.into(),
        ]);
    }
    for w in d.mode().order().windows(2) {
        report.push(vec![
            "pair".into(),
            format!("{}>{}", profile.label(w[0]), profile.label(w[1])).into(),
            Cell::Empty,
            d.pairwise_uncertainty(w[0], w[1]).into(),
        ]);
    }
    report.notes.push(format!("sampling step size {}", sample.step_size));
    report
        .notes
        .push(format!("boundary contact {}", sample.boundary_contact));
    if let Some(t) = truth {
        report
            .notes
            .push(format!("true ranking {}", t.true_ranking.display_with(&profile)));
    }
    report.sort();
    Ok(report)
}

/// The profile, its ground truth when known, and the raw posterior sample
/// behind [`run_posterior`].
pub fn posterior_sample(
    config: &PosteriorRunConfig,
) -> Result<(PreferenceProfile, Option<GroundTruth>, PosteriorSample)> {
    let (profile, truth) = match &config.dataset {
        Some(path) => {
            let doc = read_preflib(path)?;
            let truth = ground_truth_from_document(&doc)?;
            (doc.profile, truth)
        }
        None => {
            let (p, t) = posterior_demo_instance(config)?;
            (p, Some(t))
        }
    };
    let sgd = SgdConfig {
        learning_rate: LearningRate::Constant(config.alpha),
        temperature: config.tau,
        batch: BatchMode::Sampled(config.batch),
        record_loss: false,
        ..SgdConfig::default()
    };
    let pc = PosteriorConfig {
        burn_in_iterations: config.burn_in_iterations,
        sampling_iterations: config.sampling_iterations,
        sampling_step_size: config.step_size.map_or(StepSize::Auto, StepSize::Fixed),
        thinning: config.thinning,
        seed: config.seed,
        covariance_samples: config.covariance_samples,
    };
    let sample = sample_posterior(&profile, &sgd, &pc)?;
    Ok((profile, truth, sample))
}

// ------------------------------------------------------------------ rate

pub const RATE_METHODS: [&str; 11] = [
    "sigmoid-sco",
    "fy-sco",
    "elo-mm",
    "elo-online",
    "kemeny",
    "sigmoidal",
    "copeland",
    "borda",
    "plurality",
    "approval",
    "ranked-pairs",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateConfig {
    pub seed: u64,
    pub dataset: Option<String>,
    pub method: String,
    pub alpha: f64,
    pub tau: f64,
    pub batch: usize,
    pub iterations: usize,
    pub fy_epsilon: f64,
    pub fy_learning_rate: f64,
    pub fy_mc_samples: usize,
    pub k_factor: f64,
    pub mm_prior: f64,
    pub approval_threshold: f64,
    pub kemeny_max_m: usize,
    pub bnb_tolerance: f64,
    pub bnb_max_iterations: usize,
}

impl Default for RateConfig {
    fn default() -> Self {
        RateConfig {
            seed: 0,
            dataset: None,
            method: "sigmoid-sco".into(),
            alpha: 0.01,
            tau: 1.0,
            batch: 32,
            iterations: 10_000,
            fy_epsilon: 1.0,
            fy_learning_rate: 0.1,
            fy_mc_samples: 1,
            k_factor: 32.0,
            mm_prior: 0.1,
            approval_threshold: 0.5,
            kemeny_max_m: 10,
            bnb_tolerance: 1e-4,
            bnb_max_iterations: 200_000,
        }
    }
}

/// Scores (or `None` for pure ranking methods) and the ranking for one method.
pub fn rate_profile(profile: &PreferenceProfile, config: &RateConfig) -> Result<(Option<Vec<f64>>, Ranking)> {
    let sgd = || SgdConfig {
        learning_rate: LearningRate::Constant(config.alpha),
        temperature: config.tau,
        batch: BatchMode::Sampled(config.batch),
        iterations: config.iterations,
        seed: config.seed,
        record_loss: false,
        ..SgdConfig::default()
    };
    let scored = |v: Vec<f64>| {
        let r = Ranking::from_scores(&v);
        (Some(v), r)
    };
    Ok(match config.method.as_str() {
        "sigmoid-sco" => scored(fit_sgd(profile, &sgd())?.0.into_vec()),
        "fy-sco" => {
            let cfg = FyConfig {
                epsilon: config.fy_epsilon,
                mc_samples: config.fy_mc_samples,
                learning_rate: LearningRate::Constant(config.fy_learning_rate),
                iterations: config.iterations,
                batch: BatchMode::Sampled(config.batch),
                seed: config.seed,
                ..FyConfig::default()
            };
            scored(fit_fy(profile, &cfg)?.0.into_vec())
        }
        "elo-mm" => scored(
            elo_fit_mm(
                profile,
                &MmConfig {
                    prior_pseudocount: config.mm_prior,
                    ..MmConfig::default()
                },
            )?
            .ratings,
        ),
        "elo-online" => {
            let cfg = EloConfig {
                k_factor: config.k_factor,
                ..EloConfig::default()
            };
            scored(crate::baselines::elo_online(
                profile.num_alternatives(),
                profile.expanded_ballots().iter(),
                cfg,
            )?)
        }
        "kemeny" => (None, kemeny_optimal(profile, config.kemeny_max_m)?.ranking),
        "sigmoidal" => {
            let program = build_program(profile, Bounds::default(), config.tau)?;
            let bnb = BnbConfig {
                tolerance: config.bnb_tolerance,
                max_iterations: config.bnb_max_iterations,
                ..BnbConfig::default()
            };
            let sol = solve_branch_and_bound(&program, &bnb)?;
            scored(recover_ratings(&program, &sol.x, Bounds::default(), config.bnb_tolerance)?.into_vec())
        }
        "copeland" => scored(crate::baselines::copeland_scores(profile)),
        "borda" => scored(crate::baselines::borda_scores(profile)),
        "plurality" => scored(crate::baselines::plurality_scores(profile)),
        "approval" => scored(crate::baselines::approval_scores(profile, config.approval_threshold)?),
        "ranked-pairs" => (None, ranked_pairs(profile)),
        other => {
            return Err(bad(format!(
                "unknown method {other:?}; expected one of {}",
                RATE_METHODS.join(", ")
            )))
        }
    })
}

/// One-shot rating of a dataset.
///
/// Columns: `rank, id, alternative, score` with 1-based ranks and ids.
pub fn run_rate(config: &RateConfig) -> Result<ExperimentReport> {
    let path = config.dataset.as_ref().ok_or_else(|| bad("rate needs a dataset"))?;
    let profile = read_preflib(path)?.profile;
    let (scores, ranking) = rate_profile(&profile, config)?;
    let mut report = ExperimentReport::new(
        "rate",
        config,
        vec![config.seed],
        &["rank", "id", "alternative", "score"],
    );
    for (pos, &a) in ranking.order().iter().enumerate() {
        report.push(vec![
            (pos + 1).into(),
            (a + 1).into(),
            profile.label(a).into(),
            scores.as_ref().map(|s| s[a]).into(),
        ]);
    }
    report.sort();
    Ok(report)
}
