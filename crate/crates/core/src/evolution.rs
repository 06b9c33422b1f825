//! The GP loop: seeded initialization, k-fold RMSE fitness, tournament
//! selection with elitism, crossover with table shrinking, and the five
//! mutation operators (ARM, RRM, CWM, APM, RPM).
//!
//! All randomness flows through one seeded RNG on the coordinating thread;
//! fitness evaluation consumes no randomness, so parallel evaluation is
//! guaranteed to reproduce sequential results bit for bit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{AminoAcid, Dataset, EvolutionConfig, Model, Rule, Sequence};
use crate::error::{Error, Result};
use crate::predictor::{predict, refresh_status_with, SubstringIndex};
use crate::scalar::Scalar;

/// A model with its cross-validated fitness (RMSE; lower is better).
#[derive(Debug, Clone, PartialEq)]
pub struct Individual<T> {
    pub model: Model<T>,
    pub training_fitness: T,
    pub test_fitness: T,
}

/// A fixed partition of dataset indices into k folds of near-equal size.
///
/// Built once per run from the seeded RNG and reused for every evaluation,
/// so elite fitness values carry over unchanged between generations.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldAssignment {
    fold_of: Vec<usize>,
    k: usize,
}

impl FoldAssignment {
    pub fn generate(len: usize, k: usize, rng: &mut impl Rng) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidConfig("k_folds must be >= 2".into()));
        }
        if k > len {
            return Err(Error::InvalidConfig(format!(
                "k_folds ({k}) exceeds dataset size ({len})"
            )));
        }
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(rng);
        let mut fold_of = vec![0; len];
        for (pos, &idx) in order.iter().enumerate() {
            fold_of[idx] = pos % k;
        }
        Ok(FoldAssignment { fold_of, k })
    }

    /// Build from explicit fold ids (mainly for tests and replays).
    /// Validates that the ids partition `0..len` into k folds whose sizes
    /// differ by at most one, none empty.
    pub fn from_fold_ids(fold_of: Vec<usize>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidConfig("k_folds must be >= 2".into()));
        }
        let mut sizes = vec![0usize; k];
        for &f in &fold_of {
            if f >= k {
                return Err(Error::InvalidConfig(format!(
                    "fold id {f} out of range for k={k}"
                )));
            }
            sizes[f] += 1;
        }
        let (min, max) = (
            sizes.iter().copied().min().unwrap_or(0),
            sizes.iter().copied().max().unwrap_or(0),
        );
        if min == 0 {
            return Err(Error::InvalidConfig("every fold must be non-empty".into()));
        }
        if max - min > 1 {
            return Err(Error::InvalidConfig(
                "fold sizes may differ by at most one".into(),
            ));
        }
        Ok(FoldAssignment { fold_of, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.fold_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fold_of.is_empty()
    }

    pub fn fold_of(&self, index: usize) -> usize {
        self.fold_of[index]
    }
}

/// Per-generation fitness statistics for plotting and monitoring.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationTrace<T> {
    pub generation: usize,
    pub best_training_fitness: T,
    pub mean_training_fitness: T,
    /// Test fitness of the individual with the best training fitness.
    pub best_test_fitness: T,
}

/// Whether fitness evaluation within a generation runs on one thread or
/// fans out over rayon. Results are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    #[default]
    Sequential,
    Parallel,
}

/// Result of one evolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRun<T> {
    pub best: Individual<T>,
    pub trace: Vec<GenerationTrace<T>>,
}

fn random_rule<T: Scalar>(id: u32, config: &EvolutionConfig<T>, rng: &mut impl Rng) -> Rule<T> {
    let len = rng.gen_range(1..=config.max_motif_length);
    let residues = (0..len)
        .map(|_| AminoAcid::from_standard_index(rng.gen_range(0..AminoAcid::STANDARD_COUNT)))
        .collect();
    let motif = Sequence::from_residues(residues).expect("length >= 1");
    let weight = rng.gen_range(config.weight_init_range.clone());
    Rule::new(id, motif, weight, false)
}

fn random_model<T: Scalar>(
    config: &EvolutionConfig<T>,
    index: &SubstringIndex,
    rng: &mut impl Rng,
) -> Model<T> {
    let count = rng.gen_range(1..=config.max_rule_count);
    let rules = (0..count)
        .map(|i| random_rule(i as u32, config, rng))
        .collect();
    refresh_status_with(&Model::new(rules), index)
}

/// Seed a population of random models, statuses already refreshed against
/// `dataset`.
pub fn init_population<T: Scalar>(
    config: &EvolutionConfig<T>,
    dataset: &Dataset<T>,
    rng: &mut impl Rng,
) -> Result<Vec<Model<T>>> {
    config.validate_for_dataset(dataset.len())?;
    let index = SubstringIndex::build(dataset, config.max_motif_length);
    Ok((0..config.population_size)
        .map(|_| random_model(config, &index, rng))
        .collect())
}

/// K-fold cross-validated fitness.
///
/// For each fold, the RMSE of the model's predictions over the other folds
/// (training split) and over the fold itself (test split); the two fitness
/// values are the means of those k RMSEs. Selection uses the training
/// fitness; test fitness is reported only.
pub fn evaluate<T: Scalar>(
    model: Model<T>,
    dataset: &Dataset<T>,
    folds: &FoldAssignment,
) -> Result<Individual<T>> {
    if folds.len() != dataset.len() {
        return Err(Error::InvalidConfig(format!(
            "fold assignment covers {} entries but dataset has {}",
            folds.len(),
            dataset.len()
        )));
    }
    let sq_errors: Vec<T> = dataset
        .iter()
        .map(|entry| {
            let err = predict(&model, &entry.sequence).value - entry.cest_value;
            err * err
        })
        .collect();

    let k = folds.k();
    let mut train_rmse_sum = T::zero();
    let mut test_rmse_sum = T::zero();
    for fold in 0..k {
        let mut train_sq = T::zero();
        let mut train_n = 0usize;
        let mut test_sq = T::zero();
        let mut test_n = 0usize;
        for (i, &sq) in sq_errors.iter().enumerate() {
            if folds.fold_of(i) == fold {
                test_sq = test_sq + sq;
                test_n += 1;
            } else {
                train_sq = train_sq + sq;
                train_n += 1;
            }
        }
        if test_n == 0 || train_n == 0 {
            return Err(Error::InvalidConfig(format!(
                "fold {fold} leaves an empty split"
            )));
        }
        train_rmse_sum =
            train_rmse_sum + (train_sq / T::from_usize(train_n).expect("count")).sqrt();
        test_rmse_sum = test_rmse_sum + (test_sq / T::from_usize(test_n).expect("count")).sqrt();
    }
    let k_scalar = T::from_usize(k).expect("count");
    Ok(Individual {
        model,
        training_fitness: train_rmse_sum / k_scalar,
        test_fitness: test_rmse_sum / k_scalar,
    })
}

/// Sample `tournament_size` distinct individuals and return the indices of
/// the two with the lowest training fitness (ties broken by population
/// index).
pub fn tournament_select<T: Scalar>(
    population: &[Individual<T>],
    config: &EvolutionConfig<T>,
    rng: &mut impl Rng,
) -> Result<(usize, usize)> {
    let t = config.tournament_size;
    if t < 2 {
        return Err(Error::InvalidConfig(
            "tournament_size must be >= 2 to pick two parents".into(),
        ));
    }
    if t > population.len() {
        return Err(Error::InvalidConfig(format!(
            "tournament_size ({t}) exceeds population size ({})",
            population.len()
        )));
    }
    let mut pool: Vec<usize> = rand::seq::index::sample(rng, population.len(), t).into_vec();
    pool.sort_by(|&a, &b| {
        population[a]
            .training_fitness
            .partial_cmp(&population[b].training_fitness)
            .expect("finite fitness")
            .then(a.cmp(&b))
    });
    Ok((pool[0], pool[1]))
}

/// Recombine two parents into one offspring.
///
/// Every expressed rule of both parents is inherited; each unexpressed rule
/// survives independently with `unused_rule_crossover_rate`. If the result
/// exceeds `max_rule_count` it is shrunk: unexpressed rules go first
/// (shortest motif first), then expressed rules shortest-first, until the
/// table is legal. Rule ids are reassigned and the table re-sorted.
pub fn crossover<T: Scalar>(
    a: &Model<T>,
    b: &Model<T>,
    config: &EvolutionConfig<T>,
    rng: &mut impl Rng,
) -> Model<T> {
    let mut offspring: Vec<Rule<T>> = Vec::with_capacity(a.len() + b.len());
    for parent in [a, b] {
        offspring.extend(parent.rules().iter().filter(|r| r.status).cloned());
    }
    for parent in [a, b] {
        for rule in parent.rules().iter().filter(|r| !r.status) {
            if rng.gen_bool(config.unused_rule_crossover_rate) {
                offspring.push(rule.clone());
            }
        }
    }
    // Stable length-descending order; shrink victims come off the tail.
    offspring.sort_by_key(|r| std::cmp::Reverse(r.motif.len()));
    while offspring.len() > config.max_rule_count {
        let victim = offspring
            .iter()
            .rposition(|r| !r.status)
            .unwrap_or(offspring.len() - 1);
        offspring.remove(victim);
    }
    for (i, rule) in offspring.iter_mut().enumerate() {
        rule.id = i as u32;
    }
    Model::new(offspring)
}

/// Apply the five mutation operators in order: ARM, RRM, then per rule CWM,
/// APM, RPM. Each gate is always drawn so RNG consumption is deterministic;
/// an operator whose guard fails (table full, last rule, motif at a length
/// bound) is skipped without further draws.
///
/// Motif edits leave rule statuses stale; refresh them before predicting.
pub fn mutate<T: Scalar>(
    model: &Model<T>,
    config: &EvolutionConfig<T>,
    rng: &mut impl Rng,
) -> Model<T> {
    let rates = &config.mutation_rates;
    let mut rules = model.rules().to_vec();

    if rng.gen_bool(rates.arm) && rules.len() < config.max_rule_count {
        let id = rules.iter().map(|r| r.id).max().map_or(0, |m| m + 1);
        rules.push(random_rule(id, config, rng));
    }
    if rng.gen_bool(rates.rrm) && rules.len() > 1 {
        let victim = rng.gen_range(0..rules.len());
        rules.remove(victim);
    }
    for rule in rules.iter_mut() {
        if rng.gen_bool(rates.cwm) {
            // Sign first, then magnitude in [0, 1).
            let subtract = rng.gen_bool(0.5);
            let delta = rng.gen_range(T::zero()..T::one());
            rule.weight = if subtract {
                rule.weight - delta
            } else {
                rule.weight + delta
            };
        }
        if rng.gen_bool(rates.apm) && rule.motif.len() < config.max_motif_length {
            let pos = rng.gen_range(0..=rule.motif.len());
            let aa = AminoAcid::from_standard_index(rng.gen_range(0..AminoAcid::STANDARD_COUNT));
            rule.motif = rule.motif.inserted(pos, aa);
        }
        if rng.gen_bool(rates.rpm) && rule.motif.len() > 1 {
            let pos = rng.gen_range(0..rule.motif.len());
            rule.motif = rule.motif.removed(pos).expect("length checked");
        }
    }
    Model::new(rules)
}

fn best_index<T: Scalar>(population: &[Individual<T>]) -> usize {
    let mut best = 0;
    for i in 1..population.len() {
        if population[i].training_fitness < population[best].training_fitness {
            best = i;
        }
    }
    best
}

fn trace_of<T: Scalar>(generation: usize, population: &[Individual<T>]) -> GenerationTrace<T> {
    let best = best_index(population);
    let n = T::from_usize(population.len()).expect("count");
    let mean = population
        .iter()
        .fold(T::zero(), |acc, ind| acc + ind.training_fitness)
        / n;
    GenerationTrace {
        generation,
        best_training_fitness: population[best].training_fitness,
        mean_training_fitness: mean,
        best_test_fitness: population[best].test_fitness,
    }
}

fn evaluate_all<T: Scalar>(
    models: Vec<Model<T>>,
    dataset: &Dataset<T>,
    folds: &FoldAssignment,
    mode: EvalMode,
) -> Result<Vec<Individual<T>>> {
    match mode {
        EvalMode::Sequential => models
            .into_iter()
            .map(|m| evaluate(m, dataset, folds))
            .collect(),
        EvalMode::Parallel => models
            .into_par_iter()
            .map(|m| evaluate(m, dataset, folds))
            .collect(),
    }
}

/// Run the full loop: fixed fold assignment, initial random population, then
/// `generations` rounds of elite copy plus tournament -> crossover ->
/// mutation -> status refresh for the remaining slots.
///
/// The trace has `generations + 1` entries; entry 0 is the evaluated initial
/// population. With the folds fixed per run, elitism makes the best training
/// fitness non-increasing across the trace.
pub fn run_evolution<T: Scalar>(
    dataset: &Dataset<T>,
    config: &EvolutionConfig<T>,
    mode: EvalMode,
) -> Result<EvolutionRun<T>> {
    config.validate_for_dataset(dataset.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let folds = FoldAssignment::generate(dataset.len(), config.k_folds, &mut rng)?;
    let index = SubstringIndex::build(dataset, config.max_motif_length);

    let initial: Vec<Model<T>> = (0..config.population_size)
        .map(|_| random_model(config, &index, &mut rng))
        .collect();
    let mut population = evaluate_all(initial, dataset, &folds, mode)?;
    let mut trace = Vec::with_capacity(config.generations + 1);
    trace.push(trace_of(0, &population));

    for generation in 1..=config.generations {
        let elite = population[best_index(&population)].clone();
        let mut offspring = Vec::with_capacity(config.population_size - 1);
        for _ in 1..config.population_size {
            let (pa, pb) = tournament_select(&population, config, &mut rng)?;
            let child = crossover(
                &population[pa].model,
                &population[pb].model,
                config,
                &mut rng,
            );
            let child = mutate(&child, config, &mut rng);
            offspring.push(refresh_status_with(&child, &index));
        }
        let mut next = evaluate_all(offspring, dataset, &folds, mode)?;
        next.insert(0, elite);
        population = next;
        debug_assert_eq!(population.len(), config.population_size);
        trace.push(trace_of(generation, &population));
    }

    let best = population[best_index(&population)].clone();
    Ok(EvolutionRun { best, trace })
}
