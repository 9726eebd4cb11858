use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use condorcet_rank::data::LargeSparseConfig;
use condorcet_rank::harness::{
    load_config, render_report, run_kemeny_eval, run_large_sparse_eval, run_online_eval, run_posterior, run_rate,
    run_sparse_tournament, run_warmup, summarize, DatasetSource, ExperimentReport, KemenyEvalConfig, LargeEvalConfig,
    OnlineEvalConfig, PosteriorRunConfig, RateConfig, ReportFormat, TournamentGridConfig, WarmupConfig,
};

#[derive(Parser)]
#[command(name = "condorcet-rank", version, about = "Rank aggregation experiments and ratings")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; keys left out keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configuration seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct Source {
    /// PrefLib file to load instead of generating data.
    #[arg(long, conflicts_with = "preset")]
    dataset: Option<PathBuf>,
    /// Named synthetic generator.
    #[arg(long, value_parser = ["diplomacy-like"])]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Verb {
    /// Convergence counts on the three-alternative warmup profile.
    Warmup(Common),
    /// SCO against exact Kemeny on random or PrefLib profiles.
    KemenyEval {
        #[command(flatten)]
        common: Common,
        /// PrefLib files; replaces random generation.
        #[arg(long)]
        dataset: Vec<PathBuf>,
    },
    /// Methods on simulated sparse tournaments.
    Tournament {
        #[command(flatten)]
        common: Common,
        /// Emit per-cell means and intervals instead of per-seed rows.
        #[arg(long)]
        summary: bool,
    },
    /// Held-out KTD curves on a large sparse dataset.
    LargeEval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        summary: bool,
    },
    /// Single-pass online SCO against online Elo.
    OnlineEval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        summary: bool,
    },
    /// Ranking distribution from constant-step SGD.
    Posterior {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Rate the alternatives of a PrefLib file.
    Rate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Rating method, e.g. sigmoid-sco, elo-mm, kemeny, borda.
        #[arg(long)]
        method: Option<String>,
    },
}

fn config<T: DeserializeOwned + Default>(common: &Common) -> Result<T> {
    match &common.config {
        Some(path) => Ok(load_config(path)?),
        None => Ok(T::default()),
    }
}

fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn apply_source(target: &mut DatasetSource, source: &Source, seed: u64) {
    if let Some(d) = &source.dataset {
        target.dataset = Some(path_string(d));
    }
    if source.preset.is_some() {
        target.dataset = None;
        target.generator = LargeSparseConfig::diplomacy_like(seed);
    }
}

fn run(verb: &Verb) -> Result<(ExperimentReport, &Common)> {
    Ok(match verb {
        Verb::Warmup(common) => {
            let mut c: WarmupConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            (run_warmup(&c)?, common)
        }
        Verb::KemenyEval { common, dataset } => {
            let mut c: KemenyEvalConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            c.files.extend(dataset.iter().map(|p| path_string(p)));
            (run_kemeny_eval(&c)?, common)
        }
        Verb::Tournament { common, summary } => {
            let mut c: TournamentGridConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            let r = run_sparse_tournament(&c)?;
            let r = if *summary {
                summarize(&r, &["matching", "n", "method"], &["ktd", "mtrd", "missing"])
            } else {
                r
            };
            (r, common)
        }
        Verb::LargeEval {
            common,
            source,
            summary,
        } => {
            let mut c: LargeEvalConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            apply_source(&mut c.source, source, c.seed);
            let r = run_large_sparse_eval(&c)?;
            let r = if *summary {
                summarize(&r, &["method", "iteration"], &["ktd_test"])
            } else {
                r
            };
            (r, common)
        }
        Verb::OnlineEval {
            common,
            source,
            summary,
        } => {
            let mut c: OnlineEvalConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            apply_source(&mut c.source, source, c.seed);
            let r = run_online_eval(&c)?;
            let r = if *summary {
                summarize(&r, &["method", "alpha", "tau", "iteration"], &["ktd_test"])
            } else {
                r
            };
            (r, common)
        }
        Verb::Posterior { common, dataset } => {
            let mut c: PosteriorRunConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            if let Some(d) = dataset {
                c.dataset = Some(path_string(d));
            }
            (run_posterior(&c)?, common)
        }
        Verb::Rate {
            common,
            dataset,
            method,
        } => {
            let mut c: RateConfig = config(common)?;
            c.seed = common.seed.unwrap_or(c.seed);
            if let Some(d) = dataset {
                c.dataset = Some(path_string(d));
            }
            if let Some(m) = method {
                c.method = m.clone();
            }
            if c.dataset.is_none() {
                bail!("rate needs --dataset or a dataset key in the configuration");
            }
            (run_rate(&c)?, common)
        }
    })
}

fn execute(cli: &Cli) -> Result<()> {
    let start = Instant::now();
    let (report, common) = run(&cli.verb)?;
    let format = match common.format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    };
    let text = render_report(&report, format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    eprintln!(
        "{}: {} rows in {:.2}s",
        report.experiment,
        report.rows.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = serde_json::json!({ "error": format!("{e:#}") });
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
