//! File formats: dataset CSV, model files, trace and report CSVs, FASTA
//! import, and the bundled measurement data.
//!
//! Model files are line-oriented UTF-8 with `#`-prefixed provenance
//! comments. Weights and other real-valued fields are serialized with 17
//! significant digits, so parsing a saved model reproduces it bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::domain::{
    Dataset, EvolutionConfig, LabeledSequence, Model, MutationRates, Rule, Sequence,
};
use crate::error::{Error, Result};
use crate::evolution::GenerationTrace;
use crate::metrics::{MotifFrequencyReport, RankEvaluation};
use crate::scalar::Scalar;

pub const DATASET_HEADER: &str = "sequence,cest_3_6ppm";
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Hex SHA-256 of raw bytes; used for dataset checksums in provenance.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").expect("write to string");
    }
    out
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

// ── dataset CSV ─────────────────────────────────────────────────

fn parse_value<T: Scalar>(text: &str) -> Option<T> {
    text.parse::<f64>().ok().and_then(T::from_f64)
}

/// Parse dataset CSV text. `source` names the input in errors.
pub fn parse_dataset_str<T: Scalar>(content: &str, source: &str) -> Result<Dataset<T>> {
    let mut entries = Vec::new();
    let mut header_seen = false;
    for (line_no, raw) in content.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != DATASET_HEADER {
                return Err(Error::parse(
                    source,
                    line_no,
                    format!("expected header '{DATASET_HEADER}', found '{line}'"),
                ));
            }
            header_seen = true;
            continue;
        }
        let mut fields = line.split(',');
        let (seq_text, value_text) = match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(v), None) => (s, v),
            _ => {
                return Err(Error::parse(
                    source,
                    line_no,
                    "expected exactly two comma-separated fields",
                ))
            }
        };
        let sequence =
            Sequence::parse(seq_text).map_err(|e| Error::parse(source, line_no, e.to_string()))?;
        let value: T = parse_value(value_text).ok_or_else(|| {
            Error::parse(
                source,
                line_no,
                format!("invalid CEST value '{value_text}'"),
            )
        })?;
        let entry = LabeledSequence::new(sequence, value)
            .map_err(|e| Error::parse(source, line_no, e.to_string()))?;
        entries.push(entry);
    }
    if !header_seen {
        return Err(Error::parse(source, 1, "missing dataset header"));
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput("empty dataset"));
    }
    Ok(Dataset::new(entries))
}

pub fn load_dataset<T: Scalar>(path: &Path) -> Result<Dataset<T>> {
    let content = read_to_string(path)?;
    parse_dataset_str(&content, &path.display().to_string())
}

/// Load a dataset along with its leading `#` comment lines (comment marker
/// stripped); epoch provenance lives in those comments.
pub fn load_dataset_with_comments<T: Scalar>(path: &Path) -> Result<(Dataset<T>, Vec<String>)> {
    let content = read_to_string(path)?;
    let comments = content
        .lines()
        .take_while(|l| l.starts_with('#') || l.trim().is_empty())
        .filter(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim().to_string())
        .collect();
    let dataset = parse_dataset_str(&content, &path.display().to_string())?;
    Ok((dataset, comments))
}

pub fn serialize_dataset<T: Scalar>(dataset: &Dataset<T>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(DATASET_HEADER);
    out.push('\n');
    for entry in dataset.iter() {
        let _ = writeln!(out, "{},{}", entry.sequence, entry.cest_value);
    }
    out
}

pub fn save_dataset<T: Scalar>(
    path: &Path,
    dataset: &Dataset<T>,
    comments: &[String],
) -> Result<()> {
    write_file(path, &serialize_dataset(dataset, comments))
}

// ── bundled data ────────────────────────────────────────────────

/// The measurement data shipped with the crate (see `data/README.md`).
pub mod bundled {
    use super::parse_dataset_str;
    use crate::domain::Dataset;
    use crate::scalar::Scalar;

    /// All 162 measurements, in collection order.
    pub const FULL_CSV: &str = include_str!("../data/cest_full.csv");
    /// The 36 literature-derived measurements that seeded epoch 1.
    pub const EPOCH1_CSV: &str = include_str!("../data/cest_epoch1.csv");
    /// 43-row hold-out approximation for rank evaluation.
    pub const MOCK_CSV: &str = include_str!("../data/cest_mock.csv");

    pub fn full<T: Scalar>() -> Dataset<T> {
        parse_dataset_str(FULL_CSV, "bundled:cest_full.csv").expect("bundled asset is valid")
    }

    pub fn epoch1<T: Scalar>() -> Dataset<T> {
        parse_dataset_str(EPOCH1_CSV, "bundled:cest_epoch1.csv").expect("bundled asset is valid")
    }

    pub fn mock<T: Scalar>() -> Dataset<T> {
        parse_dataset_str(MOCK_CSV, "bundled:cest_mock.csv").expect("bundled asset is valid")
    }
}

// ── model files ─────────────────────────────────────────────────

/// Where a saved model came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub dataset_checksum: String,
    pub generation: u64,
}

/// One serialized rule: motif text, weight, status.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFileRule<T> {
    pub motif: Sequence,
    pub weight: T,
    pub status: bool,
}

/// On-disk form of a trained model with its configuration echo and
/// provenance. Round-trips losslessly through `serialize_model` /
/// `parse_model_str`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile<T> {
    pub format_version: u32,
    pub config: EvolutionConfig<T>,
    pub provenance: Provenance,
    pub rules: Vec<ModelFileRule<T>>,
}

impl<T: Scalar> ModelFile<T> {
    pub fn from_model(
        model: &Model<T>,
        config: EvolutionConfig<T>,
        provenance: Provenance,
    ) -> Self {
        let rules = model
            .rules()
            .iter()
            .map(|r| ModelFileRule {
                motif: r.motif.clone(),
                weight: r.weight,
                status: r.status,
            })
            .collect();
        ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            config,
            provenance,
            rules,
        }
    }

    /// Rebuild the in-memory model. Ids are assigned in file order, which
    /// reproduces the order the model was saved in, so predictions are
    /// identical to the original's.
    pub fn to_model(&self) -> Model<T> {
        Model::new(
            self.rules
                .iter()
                .enumerate()
                .map(|(i, r)| Rule::new(i as u32, r.motif.clone(), r.weight, r.status))
                .collect(),
        )
    }
}

fn fmt_real<T: Scalar>(v: T) -> String {
    format!("{v:.16e}")
}

pub fn serialize_model<T: Scalar>(file: &ModelFile<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "motifgp-model v{}", file.format_version);
    let _ = writeln!(out, "# seed: {}", file.provenance.seed);
    let _ = writeln!(
        out,
        "# dataset-sha256: {}",
        file.provenance.dataset_checksum
    );
    let _ = writeln!(out, "# generation: {}", file.provenance.generation);
    let c = &file.config;
    let _ = writeln!(out, "config population_size {}", c.population_size);
    let _ = writeln!(out, "config tournament_size {}", c.tournament_size);
    let _ = writeln!(out, "config max_motif_length {}", c.max_motif_length);
    let _ = writeln!(out, "config max_rule_count {}", c.max_rule_count);
    let _ = writeln!(out, "config generations {}", c.generations);
    let _ = writeln!(
        out,
        "config unused_rule_crossover_rate {:.16e}",
        c.unused_rule_crossover_rate
    );
    let _ = writeln!(
        out,
        "config mutation_rate_arm {:.16e}",
        c.mutation_rates.arm
    );
    let _ = writeln!(
        out,
        "config mutation_rate_rrm {:.16e}",
        c.mutation_rates.rrm
    );
    let _ = writeln!(
        out,
        "config mutation_rate_cwm {:.16e}",
        c.mutation_rates.cwm
    );
    let _ = writeln!(
        out,
        "config mutation_rate_apm {:.16e}",
        c.mutation_rates.apm
    );
    let _ = writeln!(
        out,
        "config mutation_rate_rpm {:.16e}",
        c.mutation_rates.rpm
    );
    let _ = writeln!(out, "config k_folds {}", c.k_folds);
    let _ = writeln!(
        out,
        "config weight_init_min {}",
        fmt_real(*c.weight_init_range.start())
    );
    let _ = writeln!(
        out,
        "config weight_init_max {}",
        fmt_real(*c.weight_init_range.end())
    );
    let _ = writeln!(out, "config rng_seed {}", c.rng_seed);
    let _ = writeln!(out, "rules {}", file.rules.len());
    for rule in &file.rules {
        let _ = writeln!(
            out,
            "rule {} {} {}",
            rule.motif,
            fmt_real(rule.weight),
            u8::from(rule.status)
        );
    }
    out
}

struct ConfigDraft {
    population_size: Option<usize>,
    tournament_size: Option<usize>,
    max_motif_length: Option<usize>,
    max_rule_count: Option<usize>,
    generations: Option<usize>,
    unused_rule_crossover_rate: Option<f64>,
    rates: [Option<f64>; 5],
    k_folds: Option<usize>,
    weight_init_min: Option<f64>,
    weight_init_max: Option<f64>,
    rng_seed: Option<u64>,
}

impl ConfigDraft {
    fn empty() -> Self {
        ConfigDraft {
            population_size: None,
            tournament_size: None,
            max_motif_length: None,
            max_rule_count: None,
            generations: None,
            unused_rule_crossover_rate: None,
            rates: [None; 5],
            k_folds: None,
            weight_init_min: None,
            weight_init_max: None,
            rng_seed: None,
        }
    }

    fn finish<T: Scalar>(self, source: &str) -> Result<EvolutionConfig<T>> {
        let need = |name: &str| Error::parse(source, 0, format!("missing config key {name}"));
        let real = |v: f64| T::from_f64(v).expect("finite config value");
        Ok(EvolutionConfig {
            population_size: self
                .population_size
                .ok_or_else(|| need("population_size"))?,
            tournament_size: self
                .tournament_size
                .ok_or_else(|| need("tournament_size"))?,
            max_motif_length: self
                .max_motif_length
                .ok_or_else(|| need("max_motif_length"))?,
            max_rule_count: self.max_rule_count.ok_or_else(|| need("max_rule_count"))?,
            generations: self.generations.ok_or_else(|| need("generations"))?,
            unused_rule_crossover_rate: self
                .unused_rule_crossover_rate
                .ok_or_else(|| need("unused_rule_crossover_rate"))?,
            mutation_rates: MutationRates {
                arm: self.rates[0].ok_or_else(|| need("mutation_rate_arm"))?,
                rrm: self.rates[1].ok_or_else(|| need("mutation_rate_rrm"))?,
                cwm: self.rates[2].ok_or_else(|| need("mutation_rate_cwm"))?,
                apm: self.rates[3].ok_or_else(|| need("mutation_rate_apm"))?,
                rpm: self.rates[4].ok_or_else(|| need("mutation_rate_rpm"))?,
            },
            k_folds: self.k_folds.ok_or_else(|| need("k_folds"))?,
            weight_init_range: real(
                self.weight_init_min
                    .ok_or_else(|| need("weight_init_min"))?,
            )
                ..=real(
                    self.weight_init_max
                        .ok_or_else(|| need("weight_init_max"))?,
                ),
            rng_seed: self.rng_seed.ok_or_else(|| need("rng_seed"))?,
        })
    }
}

pub fn parse_model_str<T: Scalar>(content: &str, source: &str) -> Result<ModelFile<T>> {
    let mut lines = content.lines().enumerate();

    let (line_no, first) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 1, "empty model file"))?;
    let version: u32 = first
        .strip_prefix("motifgp-model v")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| {
            Error::parse(
                source,
                line_no + 1,
                "expected 'motifgp-model v<version>' header",
            )
        })?;
    if version != MODEL_FORMAT_VERSION {
        return Err(Error::UnsupportedVersion {
            found: version,
            supported: MODEL_FORMAT_VERSION,
        });
    }

    let mut seed = None;
    let mut checksum = None;
    let mut generation = None;
    let mut draft = ConfigDraft::empty();
    let mut declared_rules: Option<usize> = None;
    let mut rules: Vec<ModelFileRule<T>> = Vec::new();

    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("seed:") {
                seed = Some(
                    v.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::parse(source, line_no, "invalid seed"))?,
                );
            } else if let Some(v) = comment.strip_prefix("dataset-sha256:") {
                checksum = Some(v.trim().to_string());
            } else if let Some(v) = comment.strip_prefix("generation:") {
                generation = Some(
                    v.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::parse(source, line_no, "invalid generation"))?,
                );
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("config") => {
                let key = tokens
                    .next()
                    .ok_or_else(|| Error::parse(source, line_no, "config line missing key"))?;
                let value = tokens
                    .next()
                    .ok_or_else(|| Error::parse(source, line_no, "config line missing value"))?;
                let bad = || Error::parse(source, line_no, format!("invalid value for {key}"));
                match key {
                    "population_size" => {
                        draft.population_size = Some(value.parse().map_err(|_| bad())?)
                    }
                    "tournament_size" => {
                        draft.tournament_size = Some(value.parse().map_err(|_| bad())?)
                    }
                    "max_motif_length" => {
                        draft.max_motif_length = Some(value.parse().map_err(|_| bad())?)
                    }
                    "max_rule_count" => {
                        draft.max_rule_count = Some(value.parse().map_err(|_| bad())?)
                    }
                    "generations" => draft.generations = Some(value.parse().map_err(|_| bad())?),
                    "unused_rule_crossover_rate" => {
                        draft.unused_rule_crossover_rate = Some(value.parse().map_err(|_| bad())?)
                    }
                    "mutation_rate_arm" => draft.rates[0] = Some(value.parse().map_err(|_| bad())?),
                    "mutation_rate_rrm" => draft.rates[1] = Some(value.parse().map_err(|_| bad())?),
                    "mutation_rate_cwm" => draft.rates[2] = Some(value.parse().map_err(|_| bad())?),
                    "mutation_rate_apm" => draft.rates[3] = Some(value.parse().map_err(|_| bad())?),
                    "mutation_rate_rpm" => draft.rates[4] = Some(value.parse().map_err(|_| bad())?),
                    "k_folds" => draft.k_folds = Some(value.parse().map_err(|_| bad())?),
                    "weight_init_min" => {
                        draft.weight_init_min = Some(value.parse().map_err(|_| bad())?)
                    }
                    "weight_init_max" => {
                        draft.weight_init_max = Some(value.parse().map_err(|_| bad())?)
                    }
                    "rng_seed" => draft.rng_seed = Some(value.parse().map_err(|_| bad())?),
                    other => {
                        return Err(Error::parse(
                            source,
                            line_no,
                            format!("unknown config key {other}"),
                        ))
                    }
                }
            }
            Some("rules") => {
                let count = tokens
                    .next()
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(source, line_no, "invalid rule count"))?;
                declared_rules = Some(count);
            }
            Some("rule") => {
                let motif_text = tokens
                    .next()
                    .ok_or_else(|| Error::parse(source, line_no, "rule line missing motif"))?;
                let weight_text = tokens
                    .next()
                    .ok_or_else(|| Error::parse(source, line_no, "rule line missing weight"))?;
                let status_text = tokens
                    .next()
                    .ok_or_else(|| Error::parse(source, line_no, "rule line missing status"))?;
                let motif = Sequence::parse(motif_text)
                    .map_err(|e| Error::parse(source, line_no, e.to_string()))?;
                let weight: T = parse_value(weight_text).ok_or_else(|| {
                    Error::parse(source, line_no, format!("invalid weight '{weight_text}'"))
                })?;
                let status = match status_text {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(Error::parse(
                            source,
                            line_no,
                            format!("invalid status '{other}' (expected 0 or 1)"),
                        ))
                    }
                };
                rules.push(ModelFileRule {
                    motif,
                    weight,
                    status,
                });
            }
            Some(other) => {
                return Err(Error::parse(
                    source,
                    line_no,
                    format!("unexpected line '{other}...'"),
                ))
            }
            None => {}
        }
    }

    let declared =
        declared_rules.ok_or_else(|| Error::parse(source, 0, "missing 'rules <count>' line"))?;
    if rules.len() != declared {
        return Err(Error::parse(
            source,
            0,
            format!(
                "truncated or inconsistent model file: declared {declared} rules, found {}",
                rules.len()
            ),
        ));
    }
    let provenance = Provenance {
        seed: seed.ok_or_else(|| Error::parse(source, 0, "missing provenance field seed"))?,
        dataset_checksum: checksum
            .ok_or_else(|| Error::parse(source, 0, "missing provenance field dataset-sha256"))?,
        generation: generation
            .ok_or_else(|| Error::parse(source, 0, "missing provenance field generation"))?,
    };
    Ok(ModelFile {
        format_version: version,
        config: draft.finish(source)?,
        provenance,
        rules,
    })
}

pub fn save_model<T: Scalar>(path: &Path, file: &ModelFile<T>) -> Result<()> {
    write_file(path, &serialize_model(file))
}

pub fn load_model<T: Scalar>(path: &Path) -> Result<ModelFile<T>> {
    let content = read_to_string(path)?;
    parse_model_str(&content, &path.display().to_string())
}

// ── trace and report CSVs ───────────────────────────────────────

pub const TRACE_HEADER: &str = "generation,best_training_rmse,mean_training_rmse,best_test_rmse";

pub fn serialize_trace<T: Scalar>(trace: &[GenerationTrace<T>]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for t in trace {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            t.generation, t.best_training_fitness, t.mean_training_fitness, t.best_test_fitness
        );
    }
    out
}

pub fn write_trace<T: Scalar>(path: &Path, trace: &[GenerationTrace<T>]) -> Result<()> {
    write_file(path, &serialize_trace(trace))
}

pub fn read_trace<T: Scalar>(path: &Path) -> Result<Vec<GenerationTrace<T>>> {
    let content = read_to_string(path)?;
    let source = path.display().to_string();
    let mut rows = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == TRACE_HEADER {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::parse(&source, line_no, "expected four fields"));
        }
        let generation = fields[0]
            .parse::<usize>()
            .map_err(|_| Error::parse(&source, line_no, "invalid generation"))?;
        let parse = |text: &str| -> Result<T> {
            parse_value(text)
                .ok_or_else(|| Error::parse(&source, line_no, format!("invalid value '{text}'")))
        };
        rows.push(GenerationTrace {
            generation,
            best_training_fitness: parse(fields[1])?,
            mean_training_fitness: parse(fields[2])?,
            best_test_fitness: parse(fields[3])?,
        });
    }
    Ok(rows)
}

/// Rank-evaluation report: summary comments, then one row per entry with
/// its measured value and both ranks (0 = best).
pub fn serialize_rank_report<T: Scalar>(labeled: &Dataset<T>, eval: &RankEvaluation<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rank_pearson_r: {}", eval.pearson_r);
    match &eval.raw_pearson_r {
        Some(r) => {
            let _ = writeln!(out, "# raw_pearson_r: {r}");
        }
        None => {
            let _ = writeln!(out, "# raw_pearson_r: undefined");
        }
    }
    let _ = writeln!(out, "# k: {}", eval.k);
    let _ = writeln!(out, "# top_k_overlap: {}", eval.top_k_overlap);
    out.push_str("index,sequence,actual_value,actual_rank,predicted_rank\n");
    let mut actual_rank = vec![0usize; labeled.len()];
    let mut predicted_rank = vec![0usize; labeled.len()];
    for (pos, &i) in eval.actual_order.iter().enumerate() {
        actual_rank[i] = pos;
    }
    for (pos, &i) in eval.predicted_order.iter().enumerate() {
        predicted_rank[i] = pos;
    }
    for (i, entry) in labeled.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i, entry.sequence, entry.cest_value, actual_rank[i], predicted_rank[i]
        );
    }
    out
}

pub fn write_rank_report<T: Scalar>(
    path: &Path,
    labeled: &Dataset<T>,
    eval: &RankEvaluation<T>,
) -> Result<()> {
    write_file(path, &serialize_rank_report(labeled, eval))
}

pub fn serialize_motif_report(report: &MotifFrequencyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# threshold: {}", report.threshold);
    out.push_str("motif,count,fraction\n");
    for row in &report.rows {
        let _ = writeln!(out, "{},{},{}", row.motif, row.count, row.fraction);
    }
    out
}

pub fn write_motif_report(path: &Path, report: &MotifFrequencyReport) -> Result<()> {
    write_file(path, &serialize_motif_report(report))
}

// ── FASTA import ────────────────────────────────────────────────

/// Read `>`-header FASTA records, concatenating wrapped sequence lines.
/// Sequence-only (no labels); `;` comment lines are skipped.
pub fn read_fasta(path: &Path) -> Result<Vec<(String, Sequence)>> {
    let content = read_to_string(path)?;
    parse_fasta_str(&content, &path.display().to_string())
}

pub fn parse_fasta_str(content: &str, source: &str) -> Result<Vec<(String, Sequence)>> {
    let mut records: Vec<(String, Sequence)> = Vec::new();
    let mut current: Option<(String, String, usize)> = None; // name, residues, header line

    let mut flush = |current: &mut Option<(String, String, usize)>| -> Result<()> {
        if let Some((name, residues, line_no)) = current.take() {
            let sequence = Sequence::parse(&residues)
                .map_err(|e| Error::parse(source, line_no, format!("record '{name}': {e}")))?;
            records.push((name, sequence));
        }
        Ok(())
    };

    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            flush(&mut current)?;
            current = Some((header.trim().to_string(), String::new(), line_no));
        } else {
            match current.as_mut() {
                Some((_, residues, _)) => residues.push_str(line.trim()),
                None => {
                    return Err(Error::parse(
                        source,
                        line_no,
                        "sequence data before first '>' header",
                    ))
                }
            }
        }
    }
    flush(&mut current)?;
    if records.is_empty() {
        return Err(Error::EmptyInput("FASTA file has no records"));
    }
    Ok(records)
}
