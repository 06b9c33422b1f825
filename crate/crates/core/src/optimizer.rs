//! Candidate-sequence optimization under a frozen, trained model.
//!
//! A pool of fixed-length random peptides hill-climbs: each generation every
//! sequence gets one random single-site substitution, kept only if the
//! (solubility-gated) predicted score does not decrease. The pool best is
//! exempt from mutation that generation, so it is preserved unchanged.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{is_soluble, AminoAcid, HydrophobicityTable, Model, Sequence};
use crate::error::{Error, Result};
use crate::predictor::predict;
use crate::scalar::Scalar;
use crate::seeds;

/// Parameters of one optimization run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizerConfig {
    pub pool_size: usize,
    pub sequence_length: usize,
    pub generations: usize,
    /// How many ranked candidates to return.
    pub top_n: usize,
    /// Gate predictions of insoluble peptides to zero.
    pub solubility_filter: bool,
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            pool_size: 100,
            sequence_length: 12,
            generations: 5000,
            top_n: 10,
            solubility_filter: true,
            rng_seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pool_size == 0 {
            return Err(Error::InvalidConfig("pool_size must be >= 1".into()));
        }
        if self.sequence_length == 0 {
            return Err(Error::InvalidConfig("sequence_length must be >= 1".into()));
        }
        if self.top_n == 0 || self.top_n > self.pool_size {
            return Err(Error::InvalidConfig(format!(
                "top_n must be in 1..={}",
                self.pool_size
            )));
        }
        Ok(())
    }
}

/// Predicted score with the solubility gate applied: insoluble peptides
/// score zero when the filter is on, otherwise the raw prediction.
pub fn gated_predict<T: Scalar>(
    model: &Model<T>,
    seq: &Sequence,
    table: &HydrophobicityTable<T>,
    filter_on: bool,
) -> Result<T> {
    if filter_on && !is_soluble(seq, table)? {
        return Ok(T::zero());
    }
    Ok(predict(model, seq).value)
}

/// The optimizer's working state: fixed-length candidate sequences with
/// their current gated scores (scores[i] always reflects sequences[i]).
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool<T> {
    sequences: Vec<Sequence>,
    scores: Vec<T>,
}

impl<T: Scalar> CandidatePool<T> {
    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    /// Index of the best-scoring sequence (first on ties).
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.scores.len() {
            if self.scores[i] > self.scores[best] {
                best = i;
            }
        }
        best
    }

    /// Top `n` candidates sorted by score descending, ties by sequence text.
    pub fn ranked(&self, n: usize) -> Vec<(Sequence, T)> {
        let mut order: Vec<usize> = (0..self.sequences.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .partial_cmp(&self.scores[a])
                .expect("finite scores")
                .then(self.sequences[a].cmp(&self.sequences[b]))
        });
        order
            .into_iter()
            .take(n)
            .map(|i| (self.sequences[i].clone(), self.scores[i]))
            .collect()
    }
}

fn random_sequence(len: usize, rng: &mut impl Rng) -> Sequence {
    let residues = (0..len)
        .map(|_| AminoAcid::from_standard_index(rng.gen_range(0..AminoAcid::STANDARD_COUNT)))
        .collect();
    Sequence::from_residues(residues).expect("length >= 1")
}

/// One hill-climb step for pool slot `index` at `generation`.
///
/// Draws from an RNG stream derived from (seed, generation, index) and
/// touches nothing but its own slot, so the order slots are processed in —
/// or whether they run in parallel — cannot change the outcome. The
/// substituted symbol may equal the old one. Equal scores keep the change;
/// only a strictly worse score reverts.
fn stepped<T: Scalar>(
    model: &Model<T>,
    table: &HydrophobicityTable<T>,
    config: &OptimizerConfig,
    generation: usize,
    index: usize,
    sequence: &Sequence,
    score: T,
) -> Result<(Sequence, T)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::mix(
        config.rng_seed,
        &[generation as u64, index as u64],
    ));
    let site = rng.gen_range(0..config.sequence_length);
    let aa = AminoAcid::from_standard_index(rng.gen_range(0..AminoAcid::STANDARD_COUNT));
    let candidate = sequence.substituted(site, aa);
    let candidate_score = gated_predict(model, &candidate, table, config.solubility_filter)?;
    if candidate_score >= score {
        Ok((candidate, candidate_score))
    } else {
        Ok((sequence.clone(), score))
    }
}

/// Run the full hill climb and return the final pool.
pub fn evolve_pool<T: Scalar>(
    model: &Model<T>,
    config: &OptimizerConfig,
) -> Result<CandidatePool<T>> {
    config.validate()?;
    let table = HydrophobicityTable::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let sequences: Vec<Sequence> = (0..config.pool_size)
        .map(|_| random_sequence(config.sequence_length, &mut rng))
        .collect();
    let scores: Vec<T> = sequences
        .iter()
        .map(|s| gated_predict(model, s, &table, config.solubility_filter))
        .collect::<Result<_>>()?;
    let mut pool = CandidatePool { sequences, scores };

    for generation in 0..config.generations {
        let elite = pool.best_index();
        for i in 0..pool.sequences.len() {
            if i == elite {
                continue;
            }
            let (seq, score) = stepped(
                model,
                &table,
                config,
                generation,
                i,
                &pool.sequences[i],
                pool.scores[i],
            )?;
            pool.sequences[i] = seq;
            pool.scores[i] = score;
        }
    }
    Ok(pool)
}

/// Hill-climb a random pool under `model` and return the `top_n` candidates
/// with their gated scores, best first.
pub fn optimize<T: Scalar>(
    model: &Model<T>,
    config: &OptimizerConfig,
) -> Result<Vec<(Sequence, T)>> {
    let pool = evolve_pool(model, config)?;
    Ok(pool.ranked(config.top_n))
}
