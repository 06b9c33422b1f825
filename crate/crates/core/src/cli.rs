//! Command-line orchestration: multi-repeat training with best-model
//! selection, candidate optimization, rank evaluation, motif reporting, and
//! epoch dataset growth.
//!
//! Repeats run as independent jobs over a worker pool; every repeat's RNG
//! seed derives from the master seed, so reruns (and any worker count)
//! produce byte-identical artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use crate::domain::{Dataset, EvolutionConfig, Model};
use crate::error::{Error, Result};
use crate::evolution::{run_evolution, EvalMode};
use crate::io::{
    self, load_dataset_with_comments, load_model, parse_dataset_str, save_dataset, save_model,
    serialize_rank_report, sha256_hex, write_motif_report, write_trace, ModelFile, Provenance,
};
use crate::metrics::{motif_frequency, rank_evaluation, RankEvaluation};
use crate::optimizer::{optimize, OptimizerConfig};
use crate::seeds;

pub const SUMMARY_HEADER: &str =
    "repeat,seed,training_rmse,test_rmse,total_rules,expressed_rules,model_file";

#[derive(Debug, Parser)]
#[command(
    name = "motifgp",
    version,
    about = "Evolve weighted-motif rule tables that predict peptide CEST contrast, \
             and hill-climb new candidate peptides with them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Run repeated seeded evolution runs and select the overall best model
    Train(TrainArgs),
    /// Hill-climb candidate sequences under a trained model
    Optimize(OptimizeArgs),
    /// Rank a labeled hold-out set with a model and report the agreement
    Evaluate(EvaluateArgs),
    /// Aggregate expressed-motif frequencies across saved models
    ReportMotifs(ReportMotifsArgs),
    /// Append newly measured sequences to a dataset as the next epoch
    EpochAppend(EpochAppendArgs),
}

/// Engine parameters that can come from a config file or flags.
/// Flags override file values; `mutation_rate` sets all five operators and
/// the per-operator flags override it.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigOverrides {
    #[arg(long)]
    pub population_size: Option<usize>,
    #[arg(long)]
    pub tournament_size: Option<usize>,
    #[arg(long)]
    pub max_motif_length: Option<usize>,
    #[arg(long)]
    pub max_rule_count: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub unused_rule_crossover_rate: Option<f64>,
    /// Sets ARM, RRM, CWM, APM, and RPM at once
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    #[arg(long)]
    pub mutation_rate_arm: Option<f64>,
    #[arg(long)]
    pub mutation_rate_rrm: Option<f64>,
    #[arg(long)]
    pub mutation_rate_cwm: Option<f64>,
    #[arg(long)]
    pub mutation_rate_apm: Option<f64>,
    #[arg(long)]
    pub mutation_rate_rpm: Option<f64>,
    #[arg(long)]
    pub k_folds: Option<usize>,
    #[arg(long)]
    pub weight_init_min: Option<f64>,
    #[arg(long)]
    pub weight_init_max: Option<f64>,
}

impl ConfigOverrides {
    pub fn apply(&self, config: &mut EvolutionConfig<f64>) {
        if let Some(v) = self.population_size {
            config.population_size = v;
        }
        if let Some(v) = self.tournament_size {
            config.tournament_size = v;
        }
        if let Some(v) = self.max_motif_length {
            config.max_motif_length = v;
        }
        if let Some(v) = self.max_rule_count {
            config.max_rule_count = v;
        }
        if let Some(v) = self.generations {
            config.generations = v;
        }
        if let Some(v) = self.unused_rule_crossover_rate {
            config.unused_rule_crossover_rate = v;
        }
        if let Some(v) = self.mutation_rate {
            config.mutation_rates = crate::domain::MutationRates::uniform(v);
        }
        if let Some(v) = self.mutation_rate_arm {
            config.mutation_rates.arm = v;
        }
        if let Some(v) = self.mutation_rate_rrm {
            config.mutation_rates.rrm = v;
        }
        if let Some(v) = self.mutation_rate_cwm {
            config.mutation_rates.cwm = v;
        }
        if let Some(v) = self.mutation_rate_apm {
            config.mutation_rates.apm = v;
        }
        if let Some(v) = self.mutation_rate_rpm {
            config.mutation_rates.rpm = v;
        }
        if let Some(v) = self.k_folds {
            config.k_folds = v;
        }
        if let Some(v) = self.weight_init_min {
            config.weight_init_range = v..=*config.weight_init_range.end();
        }
        if let Some(v) = self.weight_init_max {
            config.weight_init_range = *config.weight_init_range.start()..=v;
        }
    }
}

/// Apply a key-value config file (`key value` or `key=value`, `#` comments).
/// Keys are the snake_case engine parameter names.
pub fn apply_config_file(config: &mut EvolutionConfig<f64>, path: &Path) -> Result<()> {
    let content = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let source = path.display().to_string();
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => line
                .split_once(char::is_whitespace)
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::parse(&source, line_no, "expected 'key value'"))?,
        };
        let bad = || Error::parse(&source, line_no, format!("invalid value for {key}"));
        match key {
            "population_size" => config.population_size = value.parse().map_err(|_| bad())?,
            "tournament_size" => config.tournament_size = value.parse().map_err(|_| bad())?,
            "max_motif_length" => config.max_motif_length = value.parse().map_err(|_| bad())?,
            "max_rule_count" => config.max_rule_count = value.parse().map_err(|_| bad())?,
            "generations" => config.generations = value.parse().map_err(|_| bad())?,
            "unused_rule_crossover_rate" => {
                config.unused_rule_crossover_rate = value.parse().map_err(|_| bad())?
            }
            "mutation_rate" => {
                config.mutation_rates =
                    crate::domain::MutationRates::uniform(value.parse().map_err(|_| bad())?)
            }
            "mutation_rate_arm" => config.mutation_rates.arm = value.parse().map_err(|_| bad())?,
            "mutation_rate_rrm" => config.mutation_rates.rrm = value.parse().map_err(|_| bad())?,
            "mutation_rate_cwm" => config.mutation_rates.cwm = value.parse().map_err(|_| bad())?,
            "mutation_rate_apm" => config.mutation_rates.apm = value.parse().map_err(|_| bad())?,
            "mutation_rate_rpm" => config.mutation_rates.rpm = value.parse().map_err(|_| bad())?,
            "k_folds" => config.k_folds = value.parse().map_err(|_| bad())?,
            "weight_init_min" => {
                config.weight_init_range =
                    value.parse().map_err(|_| bad())?..=*config.weight_init_range.end()
            }
            "weight_init_max" => {
                config.weight_init_range =
                    *config.weight_init_range.start()..=value.parse().map_err(|_| bad())?
            }
            other => {
                return Err(Error::parse(
                    &source,
                    line_no,
                    format!("unknown config key {other}"),
                ))
            }
        }
    }
    Ok(())
}

// ── train ───────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training dataset CSV
    #[arg(long)]
    pub dataset: PathBuf,
    /// Output root; artifacts land in <out>/<experiment>/<seed>/
    #[arg(long, default_value = "runs")]
    pub out: PathBuf,
    /// Experiment name (output subdirectory)
    #[arg(long, default_value = "experiment")]
    pub experiment: String,
    /// Number of independent evolution runs
    #[arg(long, default_value_t = 50)]
    pub repeats: usize,
    /// Master seed; per-repeat seeds derive from it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for repeats (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Evaluate fitness in parallel inside each run
    #[arg(long, default_value_t = false)]
    pub parallel_eval: bool,
    /// Key-value config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: ConfigOverrides,
}

/// Everything one repeat produced.
#[derive(Debug, Clone)]
pub struct TrainedRun {
    pub repeat: usize,
    pub seed: u64,
    pub training_fitness: f64,
    pub test_fitness: f64,
    pub total_rules: usize,
    pub expressed_rules: usize,
    pub model_path: PathBuf,
    pub trace_path: PathBuf,
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub runs: Vec<TrainedRun>,
    /// Index into `runs` of the overall best model.
    pub best: usize,
    pub summary_path: PathBuf,
    pub best_model_path: PathBuf,
}

/// Resolved plan for one training experiment.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub experiment: String,
    pub repeats: usize,
    pub master_seed: u64,
    pub config: EvolutionConfig<f64>,
    pub dataset_path: PathBuf,
    pub output_root: PathBuf,
    pub workers: usize,
    pub eval_mode: EvalMode,
}

impl RunManifest {
    pub fn from_args(args: &TrainArgs) -> Result<Self> {
        let mut config = EvolutionConfig::<f64>::default();
        if let Some(path) = &args.config {
            apply_config_file(&mut config, path)?;
        }
        args.overrides.apply(&mut config);
        if args.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be >= 1".into()));
        }
        let workers = args
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
            .min(args.repeats);
        Ok(RunManifest {
            experiment: args.experiment.clone(),
            repeats: args.repeats,
            master_seed: args.seed,
            config,
            dataset_path: args.dataset.clone(),
            output_root: args.out.clone(),
            workers,
            eval_mode: if args.parallel_eval {
                EvalMode::Parallel
            } else {
                EvalMode::Sequential
            },
        })
    }

    /// Distinct, reproducible per-repeat seeds.
    pub fn repeat_seeds(&self) -> Vec<u64> {
        (0..self.repeats)
            .map(|i| seeds::repeat_seed(self.master_seed, i as u64))
            .collect()
    }

    pub fn experiment_dir(&self) -> PathBuf {
        self.output_root.join(&self.experiment)
    }
}

fn run_context<D: std::fmt::Display>(repeat: usize, seed: u64, e: D) -> Error {
    Error::InvalidConfig(format!("repeat {repeat} (seed {seed}): {e}"))
}

fn train_one_repeat(
    manifest: &RunManifest,
    dataset: &Dataset<f64>,
    dataset_checksum: &str,
    repeat: usize,
    seed: u64,
) -> Result<TrainedRun> {
    let mut config = manifest.config.clone();
    config.rng_seed = seed;
    let run = run_evolution(dataset, &config, manifest.eval_mode)
        .map_err(|e| run_context(repeat, seed, e))?;

    let run_dir = manifest.experiment_dir().join(seed.to_string());
    fs::create_dir_all(&run_dir)
        .map_err(|e| Error::io(format!("creating {}", run_dir.display()), e))?;
    let trace_path = run_dir.join("trace.csv");
    write_trace(&trace_path, &run.trace).map_err(|e| run_context(repeat, seed, e))?;
    let model_path = run_dir.join("model.txt");
    let file = ModelFile::from_model(
        &run.best.model,
        config.clone(),
        Provenance {
            seed,
            dataset_checksum: dataset_checksum.to_string(),
            generation: config.generations as u64,
        },
    );
    save_model(&model_path, &file).map_err(|e| run_context(repeat, seed, e))?;

    Ok(TrainedRun {
        repeat,
        seed,
        training_fitness: run.best.training_fitness,
        test_fitness: run.best.test_fitness,
        total_rules: run.best.model.len(),
        expressed_rules: run.best.model.expressed_count(),
        model_path,
        trace_path,
    })
}

/// Execute the whole training experiment: all repeats (in parallel over the
/// worker pool), the per-run artifacts, and the summary selecting the
/// overall best model by training fitness (ties by test fitness, then seed).
pub fn run_train(args: &TrainArgs) -> Result<TrainOutcome> {
    let manifest = RunManifest::from_args(args)?;
    let raw = fs::read(&manifest.dataset_path)
        .map_err(|e| Error::io(format!("reading {}", manifest.dataset_path.display()), e))?;
    let dataset_checksum = sha256_hex(&raw);
    let content = String::from_utf8(raw)
        .map_err(|_| Error::parse(manifest.dataset_path.display().to_string(), 0, "not UTF-8"))?;
    let dataset: Dataset<f64> =
        parse_dataset_str(&content, &manifest.dataset_path.display().to_string())?;
    manifest.config.validate_for_dataset(dataset.len())?;

    let exp_dir = manifest.experiment_dir();
    fs::create_dir_all(&exp_dir)
        .map_err(|e| Error::io(format!("creating {}", exp_dir.display()), e))?;

    let seeds = manifest.repeat_seeds();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<TrainedRun>>>> =
        Mutex::new((0..manifest.repeats).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..manifest.workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= manifest.repeats {
                    break;
                }
                let outcome = train_one_repeat(&manifest, &dataset, &dataset_checksum, i, seeds[i]);
                results.lock().expect("worker poisoned")[i] = Some(outcome);
            });
        }
    });

    let mut runs = Vec::with_capacity(manifest.repeats);
    for slot in results.into_inner().expect("workers joined") {
        runs.push(slot.expect("every repeat executed")?);
    }

    let best = (0..runs.len())
        .min_by(|&a, &b| {
            let ra = &runs[a];
            let rb = &runs[b];
            ra.training_fitness
                .partial_cmp(&rb.training_fitness)
                .expect("finite fitness")
                .then(
                    ra.test_fitness
                        .partial_cmp(&rb.test_fitness)
                        .expect("finite fitness"),
                )
                .then(ra.seed.cmp(&rb.seed))
        })
        .expect("at least one repeat");

    let mut summary = format!(
        "# overall-best-seed: {}\n{SUMMARY_HEADER}\n",
        runs[best].seed
    );
    for run in &runs {
        let model_file = format!("{}/model.txt", run.seed);
        summary.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            run.repeat,
            run.seed,
            run.training_fitness,
            run.test_fitness,
            run.total_rules,
            run.expressed_rules,
            model_file
        ));
    }
    let summary_path = exp_dir.join("summary.csv");
    fs::write(&summary_path, summary)
        .map_err(|e| Error::io(format!("writing {}", summary_path.display()), e))?;

    let best_model_path = exp_dir.join("best_model.txt");
    fs::copy(&runs[best].model_path, &best_model_path)
        .map_err(|e| Error::io(format!("writing {}", best_model_path.display()), e))?;

    Ok(TrainOutcome {
        best,
        runs,
        summary_path,
        best_model_path,
    })
}

// ── optimize ────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Trained model file
    #[arg(long)]
    pub model: PathBuf,
    /// Output CSV of ranked candidates
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub pool_size: usize,
    #[arg(long, default_value_t = 12)]
    pub sequence_length: usize,
    #[arg(long, default_value_t = 5000)]
    pub generations: usize,
    #[arg(long, default_value_t = 10)]
    pub top_n: usize,
    /// Gate insoluble candidates to score zero
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set, value_name = "BOOL")]
    pub solubility_filter: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub const CANDIDATES_HEADER: &str = "rank,sequence,predicted_score,hydrophobicity_sum";

/// Optimize candidates under a saved model and write the ranked CSV.
pub fn run_optimize(args: &OptimizeArgs) -> Result<Vec<(crate::domain::Sequence, f64)>> {
    let file: ModelFile<f64> = load_model(&args.model)?;
    let model = file.to_model();
    let config = OptimizerConfig {
        pool_size: args.pool_size,
        sequence_length: args.sequence_length,
        generations: args.generations,
        top_n: args.top_n,
        solubility_filter: args.solubility_filter,
        rng_seed: args.seed,
    };
    let ranked = optimize(&model, &config)?;

    if args.solubility_filter && ranked.iter().all(|(_, score)| *score == 0.0) {
        eprintln!(
            "warning: every returned candidate scored zero; the pool may be \
             stuck on insoluble or unmatched sequences"
        );
    }

    let table = crate::domain::HydrophobicityTable::<f64>::standard();
    let mut out = String::from(CANDIDATES_HEADER);
    out.push('\n');
    for (rank, (sequence, score)) in ranked.iter().enumerate() {
        let hydro = crate::domain::hydrophobicity_sum(sequence, &table)?;
        out.push_str(&format!("{rank},{sequence},{score},{hydro}\n"));
    }
    fs::write(&args.out, out)
        .map_err(|e| Error::io(format!("writing {}", args.out.display()), e))?;
    Ok(ranked)
}

// ── evaluate ────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Trained model file
    #[arg(long)]
    pub model: PathBuf,
    /// Labeled hold-out CSV (same format as training data)
    #[arg(long)]
    pub dataset: PathBuf,
    /// Top-k cutoff for the overlap statistic
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Output CSV report
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_evaluate(args: &EvaluateArgs) -> Result<RankEvaluation<f64>> {
    let file: ModelFile<f64> = load_model(&args.model)?;
    let model = file.to_model();
    let labeled: Dataset<f64> = io::load_dataset(&args.dataset)?;
    let eval = rank_evaluation(&model, &labeled, args.k)?;
    fs::write(&args.out, serialize_rank_report(&labeled, &eval))
        .map_err(|e| Error::io(format!("writing {}", args.out.display()), e))?;

    println!("rank Pearson r: {}", eval.pearson_r);
    match &eval.raw_pearson_r {
        Some(r) => println!("raw-value Pearson r: {r}"),
        None => println!("raw-value Pearson r: undefined (constant series)"),
    }
    println!(
        "top-{} overlap: {} of {}",
        eval.k, eval.top_k_overlap, eval.k
    );
    Ok(eval)
}

// ── report-motifs ───────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct ReportMotifsArgs {
    /// Model files or glob patterns (e.g. runs/exp/*/model.txt)
    #[arg(long = "models", required = true, num_args = 1..)]
    pub models: Vec<String>,
    /// Minimum fraction of models a motif must appear in (inclusive)
    #[arg(long, default_value_t = 0.10)]
    pub threshold: f64,
    /// Output CSV report
    #[arg(long)]
    pub out: PathBuf,
}

fn expand_model_paths(patterns: &[String]) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for pattern in patterns {
        if pattern.contains(['*', '?', '[']) {
            let matches = glob::glob(pattern)
                .map_err(|e| Error::InvalidConfig(format!("bad glob pattern '{pattern}': {e}")))?;
            for entry in matches {
                let path = entry.map_err(|e| {
                    Error::io(format!("reading glob match in '{pattern}'"), e.into())
                })?;
                paths.push(path);
            }
        } else {
            paths.push(PathBuf::from(pattern));
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(Error::EmptyInput("no model files matched"));
    }
    Ok(paths)
}

pub fn run_report_motifs(args: &ReportMotifsArgs) -> Result<crate::metrics::MotifFrequencyReport> {
    let paths = expand_model_paths(&args.models)?;
    let mut models: Vec<Model<f64>> = Vec::with_capacity(paths.len());
    for path in &paths {
        models.push(load_model::<f64>(path)?.to_model());
    }
    let report = motif_frequency(&models, args.threshold)?;
    write_motif_report(&args.out, &report)?;
    Ok(report)
}

// ── epoch-append ────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct EpochAppendArgs {
    /// Current dataset CSV
    #[arg(long)]
    pub dataset: PathBuf,
    /// Newly measured sequences to append (same CSV format)
    #[arg(long)]
    pub additions: PathBuf,
    /// Output path for the next-epoch dataset
    #[arg(long)]
    pub out: PathBuf,
    /// Epoch number of the output (default: previous epoch + 1)
    #[arg(long)]
    pub epoch: Option<u64>,
}

fn parse_epoch(comments: &[String]) -> Option<u64> {
    comments
        .iter()
        .find_map(|c| c.strip_prefix("epoch:").and_then(|v| v.trim().parse().ok()))
}

pub fn run_epoch_append(args: &EpochAppendArgs) -> Result<Dataset<f64>> {
    let (previous, comments) = load_dataset_with_comments::<f64>(&args.dataset)?;
    let additions: Dataset<f64> = io::load_dataset(&args.additions)?;
    let epoch = args
        .epoch
        .unwrap_or_else(|| parse_epoch(&comments).unwrap_or(1) + 1);

    for add in additions.iter() {
        let dup = previous
            .iter()
            .any(|e| e.sequence == add.sequence && e.cest_value == add.cest_value);
        if dup {
            eprintln!(
                "warning: duplicate measurement appended: {},{}",
                add.sequence, add.cest_value
            );
        }
    }

    let prev_bytes = fs::read(&args.dataset)
        .map_err(|e| Error::io(format!("reading {}", args.dataset.display()), e))?;
    let add_bytes = fs::read(&args.additions)
        .map_err(|e| Error::io(format!("reading {}", args.additions.display()), e))?;
    let provenance = vec![
        format!("epoch: {epoch}"),
        format!(
            "source-dataset: {} sha256:{}",
            args.dataset.display(),
            sha256_hex(&prev_bytes)
        ),
        format!(
            "source-additions: {} sha256:{}",
            args.additions.display(),
            sha256_hex(&add_bytes)
        ),
    ];

    let mut entries = previous.into_entries();
    entries.extend(additions.into_entries());
    let merged = Dataset::new(entries);
    save_dataset(&args.out, &merged, &provenance)?;
    Ok(merged)
}

/// Dispatch a parsed command line. Returns process exit code 0 on success.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => {
            let outcome = run_train(&args)?;
            let best = &outcome.runs[outcome.best];
            println!(
                "{} runs complete; best seed {} (training RMSE {})",
                outcome.runs.len(),
                best.seed,
                best.training_fitness
            );
            println!("summary: {}", outcome.summary_path.display());
            println!("best model: {}", outcome.best_model_path.display());
        }
        Command::Optimize(args) => {
            let ranked = run_optimize(&args)?;
            println!(
                "wrote {} candidates to {}",
                ranked.len(),
                args.out.display()
            );
        }
        Command::Evaluate(args) => {
            run_evaluate(&args)?;
            println!("report: {}", args.out.display());
        }
        Command::ReportMotifs(args) => {
            let report = run_report_motifs(&args)?;
            println!(
                "{} motifs at threshold {}: {}",
                report.rows.len(),
                report.threshold,
                args.out.display()
            );
        }
        Command::EpochAppend(args) => {
            let merged = run_epoch_append(&args)?;
            println!("wrote {} records to {}", merged.len(), args.out.display());
        }
    }
    Ok(())
}
