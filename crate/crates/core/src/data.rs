//! PrefLib text I/O, synthetic tournaments with known skills, train/test
//! splitting and dataset statistics.
//!
//! Synthetic datasets are written in the PrefLib layout too. Their header
//! carries the generator settings and one `# TRUE RATING <id>: <value>` line
//! per agent, so any PrefLib reader can load the votes.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::kendall_tau_positions;
use crate::profile::{preference_matrix_sparse, PreferenceProfile, Ranking, Vote};

/// A parsed PrefLib file: header lines kept verbatim plus the profile.
#[derive(Debug, Clone, PartialEq)]
pub struct PreflibDocument {
    /// Every `#` line, in file order, without the trailing newline.
    pub metadata: Vec<String>,
    pub profile: PreferenceProfile,
}

impl PreflibDocument {
    /// The header lines followed by one `multiplicity: ids` line per vote.
    /// Reproduces a canonical input byte for byte.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            out.push_str(line);
            out.push('\n');
        }
        write_votes(&mut out, &self.profile);
        out
    }

    /// Value of a `# KEY: value` header line, if present.
    pub fn header(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find_map(|l| header_value(l, key))
    }
}

fn header_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix('#')?.trim_start();
    let rest = rest.strip_prefix(key)?;
    Some(rest.strip_prefix(':')?.trim())
}

fn write_votes(out: &mut String, profile: &PreferenceProfile) {
    for v in profile.votes() {
        let ids: Vec<String> = v.order().iter().map(|a| (a + 1).to_string()).collect();
        let _ = writeln!(out, "{}: {}", v.multiplicity(), ids.join(","));
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses PrefLib SOC/SOI text with 1-based alternative ids.
pub fn parse_preflib(text: &str) -> Result<PreflibDocument> {
    let mut metadata = Vec::new();
    let mut declared: Option<(usize, usize)> = None;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut votes: Vec<(usize, Vec<usize>, u64)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.starts_with('#') {
            if let Some(v) = header_value(line, "NUMBER ALTERNATIVES") {
                let m = v
                    .parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("bad alternative count {v:?}")))?;
                declared = Some((m, line_no));
            } else if let Some(rest) = line.strip_prefix('#').map(str::trim_start) {
                if let Some(rest) = rest.strip_prefix("ALTERNATIVE NAME") {
                    if let Some((id, name)) = rest.split_once(':') {
                        let id = id
                            .trim()
                            .parse::<usize>()
                            .map_err(|_| parse_err(line_no, format!("bad alternative id {:?}", id.trim())))?;
                        names.push((id, name.trim().to_string()));
                    }
                }
            }
            metadata.push(line.to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (mult, ids) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, "expected `multiplicity: id,id,...`"))?;
        let mult = mult
            .trim()
            .parse::<u64>()
            .map_err(|_| parse_err(line_no, format!("bad multiplicity {:?}", mult.trim())))?;
        if mult == 0 {
            return Err(parse_err(line_no, "multiplicity must be positive"));
        }
        let mut order = Vec::new();
        let mut seen = HashSet::new();
        for tok in ids.split(',') {
            let tok = tok.trim();
            if tok.starts_with('{') || tok.ends_with('}') {
                return Err(parse_err(line_no, "tied (weak-order) votes are not supported"));
            }
            let id = tok
                .parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("bad alternative id {tok:?}")))?;
            if id == 0 {
                return Err(parse_err(line_no, "alternative ids are 1-based"));
            }
            if !seen.insert(id) {
                return Err(parse_err(line_no, format!("alternative {id} listed twice")));
            }
            order.push(id - 1);
        }
        votes.push((line_no, order, mult));
    }

    let m = match declared {
        Some((m, _)) => m,
        None => votes
            .iter()
            .flat_map(|(_, o, _)| o.iter().map(|a| a + 1))
            .max()
            .unwrap_or(0),
    };
    if m == 0 {
        return Err(parse_err(declared.map_or(1, |d| d.1), "no alternatives declared"));
    }
    for (line_no, order, _) in &votes {
        if let Some(&bad) = order.iter().find(|&&a| a >= m) {
            return Err(parse_err(*line_no, format!("alternative {} outside 1..={m}", bad + 1)));
        }
    }
    let votes: Vec<(Vec<usize>, u64)> = votes.into_iter().map(|(_, o, w)| (o, w)).collect();
    let mut table: Vec<Option<String>> = vec![None; m];
    for (id, name) in names {
        if (1..=m).contains(&id) {
            table[id - 1] = Some(name);
        }
    }
    let profile = match table.iter().cloned().collect::<Option<Vec<String>>>() {
        Some(all) if all.iter().collect::<HashSet<_>>().len() == m => PreferenceProfile::with_names(&all, votes)?,
        _ => PreferenceProfile::new(m, votes)?,
    };
    Ok(PreflibDocument { metadata, profile })
}

pub fn read_preflib(path: impl AsRef<Path>) -> Result<PreflibDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_preflib(&text)
}

/// Serializes a profile with a freshly generated header.
pub fn serialize_preflib(profile: &PreferenceProfile) -> String {
    let m = profile.num_alternatives();
    let complete = profile.votes().iter().all(|v| v.len() == m);
    let mut out = String::new();
    let _ = writeln!(out, "# DATA TYPE: {}", if complete { "soc" } else { "soi" });
    let _ = writeln!(out, "# NUMBER ALTERNATIVES: {m}");
    let _ = writeln!(out, "# NUMBER VOTERS: {}", profile.total_weight());
    let _ = writeln!(out, "# NUMBER UNIQUE ORDERS: {}", profile.num_distinct_votes());
    for a in 0..m {
        if let Some(name) = profile.name(a) {
            let _ = writeln!(out, "# ALTERNATIVE NAME {}: {name}", a + 1);
        }
    }
    write_votes(&mut out, profile);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Matching {
    Uniform,
    SkillMatched,
}

impl Matching {
    pub fn as_str(&self) -> &'static str {
        match self {
            Matching::Uniform => "uniform",
            Matching::SkillMatched => "skill-matched",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Matching::Uniform),
            "skill-matched" | "skill_matched" => Ok(Matching::SkillMatched),
            other => Err(Error::InvalidConfig(format!("unknown matching {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TournamentConfig {
    pub num_agents: usize,
    pub contest_size: usize,
    pub num_contests: usize,
    pub skill_mean: f64,
    pub skill_stddev: f64,
    pub performance_noise_stddev: f64,
    pub matching: Matching,
    pub seed: u64,
}

impl Default for TournamentConfig {
    fn default() -> Self {
        TournamentConfig {
            num_agents: 20,
            contest_size: 4,
            num_contests: 20,
            skill_mean: 100.0,
            skill_stddev: 30.0,
            performance_noise_stddev: 5.0,
            matching: Matching::Uniform,
            seed: 0,
        }
    }
}

impl TournamentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.contest_size < 2 || self.contest_size > self.num_agents {
            return Err(Error::InvalidConfig("contest size must lie in 2..=num_agents".into()));
        }
        if !(self.skill_stddev > 0.0) || !(self.performance_noise_stddev > 0.0) {
            return Err(Error::InvalidConfig("standard deviations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub true_ratings: Vec<f64>,
    pub true_ranking: Ranking,
}

impl GroundTruth {
    pub fn new(true_ratings: Vec<f64>) -> Self {
        let true_ranking = Ranking::from_scores(&true_ratings);
        GroundTruth {
            true_ratings,
            true_ranking,
        }
    }
}

fn draw_skills(rng: &mut ChaCha8Rng, m: usize, mean: f64, sd: f64) -> Vec<f64> {
    let normal = Normal::new(mean, sd).expect("validated stddev");
    (0..m).map(|_| normal.sample(rng)).collect()
}

/// Orders `participants` by descending `θ + noise`; ties keep draw order.
fn play(rng: &mut ChaCha8Rng, participants: &[usize], skills: &[f64], noise: &Normal<f64>) -> Vec<usize> {
    let mut perf: Vec<(usize, f64)> = participants
        .iter()
        .map(|&a| (a, skills[a] + noise.sample(rng)))
        .collect();
    perf.sort_by(|x, y| y.1.total_cmp(&x.1));
    perf.into_iter().map(|(a, _)| a).collect()
}

/// Contests among sampled agents; each vote is one contest's finishing order.
pub fn generate_tournament(config: &TournamentConfig) -> Result<(PreferenceProfile, GroundTruth)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.num_agents;
    let skills = draw_skills(&mut rng, m, config.skill_mean, config.skill_stddev);
    let profile = play_tournament(&mut rng, config, &skills)?;
    Ok((profile, GroundTruth::new(skills)))
}

/// Like [`generate_tournament`] with the skills given instead of drawn;
/// `num_agents`, `skill_mean` and `skill_stddev` are ignored.
pub fn generate_tournament_with_skills(
    config: &TournamentConfig,
    skills: &[f64],
) -> Result<(PreferenceProfile, GroundTruth)> {
    let config = TournamentConfig {
        num_agents: skills.len(),
        ..*config
    };
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let profile = play_tournament(&mut rng, &config, skills)?;
    Ok((profile, GroundTruth::new(skills.to_vec())))
}

fn play_tournament(rng: &mut ChaCha8Rng, config: &TournamentConfig, skills: &[f64]) -> Result<PreferenceProfile> {
    let m = skills.len();
    let noise = Normal::new(0.0, config.performance_noise_stddev).expect("validated stddev");
    let mut votes = Vec::with_capacity(config.num_contests);
    for _ in 0..config.num_contests {
        let participants = match config.matching {
            Matching::Uniform => index::sample(rng, m, config.contest_size).into_vec(),
            Matching::SkillMatched => skill_matched(rng, skills, config.contest_size),
        };
        votes.push((play(rng, &participants, skills, &noise), 1));
    }
    PreferenceProfile::new(m, votes)
}

fn skill_matched(rng: &mut ChaCha8Rng, skills: &[f64], k: usize) -> Vec<usize> {
    let m = skills.len();
    let mut chosen = vec![rng.random_range(0..m)];
    let mut in_contest = vec![false; m];
    in_contest[chosen[0]] = true;
    let mut total = skills[chosen[0]];
    while chosen.len() < k {
        let pool: Vec<usize> = (0..m).filter(|&a| !in_contest[a]).collect();
        let draws = index::sample(rng, pool.len(), 3.min(pool.len()));
        let mean = total / chosen.len() as f64;
        let pick = draws
            .iter()
            .map(|i| pool[i])
            .min_by(|&a, &b| {
                (skills[a] - mean)
                    .abs()
                    .total_cmp(&(skills[b] - mean).abs())
                    .then(a.cmp(&b))
            })
            .expect("pool is nonempty");
        in_contest[pick] = true;
        total += skills[pick];
        chosen.push(pick);
    }
    chosen
}

/// Settings for a large, sparse stand-in for online multiplayer game logs:
/// many agents, fixed-size games, and heavy-tailed participation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LargeSparseConfig {
    pub num_agents: usize,
    pub contest_size: usize,
    pub num_contests: usize,
    pub skill_mean: f64,
    pub skill_stddev: f64,
    pub performance_noise_stddev: f64,
    /// Pareto shape of per-agent participation weights; smaller is heavier-tailed.
    pub participation_shape: f64,
    pub seed: u64,
}

impl Default for LargeSparseConfig {
    fn default() -> Self {
        LargeSparseConfig::diplomacy_like(0)
    }
}

impl LargeSparseConfig {
    /// The `diplomacy-like` preset: 2000 agents, 7-player games.
    pub fn diplomacy_like(seed: u64) -> Self {
        LargeSparseConfig {
            num_agents: 2000,
            contest_size: 7,
            num_contests: 6000,
            skill_mean: 100.0,
            skill_stddev: 30.0,
            performance_noise_stddev: 30.0,
            participation_shape: 2.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let as_tournament = TournamentConfig {
            num_agents: self.num_agents,
            contest_size: self.contest_size,
            num_contests: self.num_contests,
            skill_mean: self.skill_mean,
            skill_stddev: self.skill_stddev,
            performance_noise_stddev: self.performance_noise_stddev,
            matching: Matching::Uniform,
            seed: self.seed,
        };
        as_tournament.validate()?;
        if !(self.participation_shape > 0.0) {
            return Err(Error::InvalidConfig("participation shape must be positive".into()));
        }
        Ok(())
    }
}

/// Games whose players are drawn without replacement with probability
/// proportional to a Pareto participation weight.
pub fn generate_large_sparse(config: &LargeSparseConfig) -> Result<(PreferenceProfile, GroundTruth)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.num_agents;
    let skills = draw_skills(&mut rng, m, config.skill_mean, config.skill_stddev);
    let pareto = Pareto::new(1.0, config.participation_shape).expect("validated shape");
    let weights: Vec<f64> = (0..m).map(|_| pareto.sample(&mut rng)).collect();
    let pick = WeightedIndex::new(&weights).expect("positive weights");
    let noise = Normal::new(0.0, config.performance_noise_stddev).expect("validated stddev");
    let mut votes = Vec::with_capacity(config.num_contests);
    let mut in_game = vec![false; m];
    for _ in 0..config.num_contests {
        let mut players = Vec::with_capacity(config.contest_size);
        while players.len() < config.contest_size {
            let a = pick.sample(&mut rng);
            if !in_game[a] {
                in_game[a] = true;
                players.push(a);
            }
        }
        for &a in &players {
            in_game[a] = false;
        }
        votes.push((play(&mut rng, &players, &skills, &noise), 1));
    }
    Ok((PreferenceProfile::new(m, votes)?, GroundTruth::new(skills)))
}

/// A synthetic dataset in PrefLib layout with the generator settings and
/// true ratings in the header.
pub fn serialize_synthetic(profile: &PreferenceProfile, truth: &GroundTruth, settings: &[(&str, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# DATA TYPE: soi");
    let _ = writeln!(out, "# NUMBER ALTERNATIVES: {}", profile.num_alternatives());
    let _ = writeln!(out, "# NUMBER VOTERS: {}", profile.total_weight());
    for (key, value) in settings {
        let _ = writeln!(out, "# {}: {value}", key.to_uppercase());
    }
    for (a, r) in truth.true_ratings.iter().enumerate() {
        let _ = writeln!(out, "# TRUE RATING {}: {r}", a + 1);
    }
    write_votes(&mut out, profile);
    out
}

/// True ratings from `# TRUE RATING <id>:` header lines, when every agent has one.
pub fn ground_truth_from_document(doc: &PreflibDocument) -> Result<Option<GroundTruth>> {
    let m = doc.profile.num_alternatives();
    let mut ratings = vec![None; m];
    let mut any = false;
    for (i, line) in doc.metadata.iter().enumerate() {
        let Some(rest) = line.strip_prefix('#').map(str::trim_start) else {
            continue;
        };
        let Some(rest) = rest.strip_prefix("TRUE RATING") else {
            continue;
        };
        let (id, value) = rest
            .split_once(':')
            .ok_or_else(|| parse_err(i + 1, "expected `# TRUE RATING <id>: <value>`"))?;
        let id: usize = id.trim().parse().map_err(|_| parse_err(i + 1, "bad agent id"))?;
        let value: f64 = value.trim().parse().map_err(|_| parse_err(i + 1, "bad rating"))?;
        if id == 0 || id > m {
            return Err(parse_err(i + 1, format!("agent {id} outside 1..={m}")));
        }
        ratings[id - 1] = Some(value);
        any = true;
    }
    if !any {
        return Ok(None);
    }
    let all = ratings
        .into_iter()
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| Error::InvalidConfig("true ratings missing for some agents".into()))?;
    Ok(Some(GroundTruth::new(all)))
}

/// Fraction of unordered pairs never compared in any vote.
pub fn missing_pair_proportion(profile: &PreferenceProfile) -> f64 {
    let m = profile.num_alternatives() as f64;
    let total = m * (m - 1.0) / 2.0;
    if total == 0.0 {
        return 0.0;
    }
    let mut covered = HashSet::new();
    for (a, b, _) in preference_matrix_sparse(profile).nonzero() {
        covered.insert((a.min(b), a.max(b)));
    }
    1.0 - covered.len() as f64 / total
}

pub const SPLIT_RETRIES: usize = 1000;

/// Random ballot-level split in which every agent appearing in the test set
/// also appears in training. Votes with multiplicity are expanded first.
pub fn train_test_split(
    profile: &PreferenceProfile,
    test_count: usize,
    seed: u64,
) -> Result<(PreferenceProfile, PreferenceProfile)> {
    let ballots = profile.expanded_ballots();
    if test_count >= ballots.len() {
        return Err(Error::InvalidConfig(format!(
            "test count {test_count} must be below the {} available votes",
            ballots.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..ballots.len()).collect();
    let m = profile.num_alternatives();
    for _ in 0..SPLIT_RETRIES {
        idx.shuffle(&mut rng);
        let (test_idx, train_idx) = idx.split_at(test_count);
        let mut seen = vec![false; m];
        for &i in train_idx {
            for &a in ballots[i].order() {
                seen[a] = true;
            }
        }
        if test_idx.iter().all(|&i| ballots[i].order().iter().all(|&a| seen[a])) {
            let pick = |ids: &[usize]| -> Vec<Vote> {
                let mut ids = ids.to_vec();
                ids.sort_unstable();
                ids.into_iter().map(|i| ballots[i].clone()).collect()
            };
            return Ok((profile.with_votes(pick(train_idx)), profile.with_votes(pick(test_idx))));
        }
    }
    Err(Error::InfeasibleSplit { retries: SPLIT_RETRIES })
}

/// Mean absolute true-rating gap over pairs that `ranking` orders
/// differently from the true ranking.
pub fn mtrd(ranking: &Ranking, truth: &GroundTruth) -> f64 {
    let pos = truth.true_ranking.positions();
    let order = ranking.order();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..order.len() {
        for &b in &order[i + 1..] {
            let a = order[i];
            if pos[b] < pos[a] {
                sum += (truth.true_ratings[a] - truth.true_ratings[b]).abs();
                count += 1;
            }
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Kendall-tau distance between a full ranking and the true ranking.
pub fn ktd(ranking: &Ranking, truth: &GroundTruth) -> u64 {
    kendall_tau_positions(ranking.order(), &truth.true_ranking.positions())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "# DATA TYPE: soc\n# NUMBER ALTERNATIVES: 3\n# ALTERNATIVE NAME 1: x\n# ALTERNATIVE NAME 2: y\n# ALTERNATIVE NAME 3: z\n2: 3,1,2\n3: 1,2,3\n";

    #[test]
    fn parse_small() {
        let doc = parse_preflib(SMALL).unwrap();
        assert_eq!(doc.profile.total_weight(), 5);
        assert_eq!(doc.profile.num_distinct_votes(), 2);
        assert_eq!(doc.profile.votes()[0].order(), &[2, 0, 1]);
        assert_eq!(doc.profile.name(2), Some("z"));
        assert_eq!(doc.to_text(), SMALL);
        assert_eq!(doc.header("DATA TYPE"), Some("soc"));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "# NUMBER ALTERNATIVES: 3\n1: 1,2\n2: 1,1,3\n";
        assert!(matches!(parse_preflib(bad), Err(Error::Parse { line: 3, .. })));
        let out_of_range = "# NUMBER ALTERNATIVES: 3\n1: 1,4\n";
        assert!(matches!(parse_preflib(out_of_range), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_preflib("1 1,2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_preflib("0: 1,2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn serialize_reparses() {
        let p = PreferenceProfile::new(4, vec![(vec![3, 1], 2), (vec![0, 1, 2, 3], 1)]).unwrap();
        let text = serialize_preflib(&p);
        assert!(text.starts_with("# DATA TYPE: soi\n"));
        assert_eq!(parse_preflib(&text).unwrap().profile, p);
    }

    #[test]
    fn tournaments_are_well_formed_and_seeded() {
        for matching in [Matching::Uniform, Matching::SkillMatched] {
            let cfg = TournamentConfig {
                num_contests: 50,
                matching,
                seed: 9,
                ..TournamentConfig::default()
            };
            let (p, truth) = generate_tournament(&cfg).unwrap();
            assert_eq!(p.total_weight(), 50);
            assert!(p.votes().iter().all(|v| v.len() == 4));
            assert_eq!(truth.true_ranking, Ranking::from_scores(&truth.true_ratings));
            assert_eq!(generate_tournament(&cfg).unwrap().0, p);
        }
    }

    #[test]
    fn missing_pairs_examples() {
        let full = PreferenceProfile::new(5, vec![(vec![4, 3, 2, 1, 0], 1)]).unwrap();
        assert_eq!(missing_pair_proportion(&full), 0.0);
        assert_eq!(
            missing_pair_proportion(&PreferenceProfile::new(5, Vec::new()).unwrap()),
            1.0
        );
        let one = PreferenceProfile::new(20, vec![(vec![0, 5, 9, 13], 1)]).unwrap();
        assert!((missing_pair_proportion(&one) - (1.0 - 6.0 / 190.0)).abs() < 1e-12);
    }

    #[test]
    fn mtrd_examples() {
        let truth = GroundTruth::new(vec![110.0, 90.0]);
        assert_eq!(mtrd(&Ranking::new(vec![0, 1]).unwrap(), &truth), 0.0);
        assert_eq!(mtrd(&Ranking::new(vec![1, 0]).unwrap(), &truth), 20.0);
        assert_eq!(ktd(&Ranking::new(vec![1, 0]).unwrap(), &truth), 1);
    }

    #[test]
    fn split_partitions_votes() {
        let cfg = TournamentConfig {
            num_contests: 100,
            seed: 1,
            ..TournamentConfig::default()
        };
        let (p, _) = generate_tournament(&cfg).unwrap();
        let (train, test) = train_test_split(&p, 10, 4).unwrap();
        assert_eq!((train.total_weight(), test.total_weight()), (90, 10));
        let seen = train.appearing();
        assert!(test.votes().iter().flat_map(|v| v.order()).all(|&a| seen[a]));
        assert!(train_test_split(&p, 100, 4).is_err());
        let lonely = PreferenceProfile::new(4, vec![(vec![0, 1], 1), (vec![2, 3], 1)]).unwrap();
        assert_eq!(
            train_test_split(&lonely, 1, 0),
            Err(Error::InfeasibleSplit { retries: SPLIT_RETRIES })
        );
    }

    #[test]
    fn synthetic_header_round_trip() {
        let (p, truth) = generate_tournament(&TournamentConfig::default()).unwrap();
        let text = serialize_synthetic(&p, &truth, &[("matching", "uniform".into())]);
        let doc = parse_preflib(&text).unwrap();
        assert_eq!(doc.profile, p);
        assert_eq!(ground_truth_from_document(&doc).unwrap(), Some(truth));
        assert_eq!(doc.to_text(), text);
    }
}
