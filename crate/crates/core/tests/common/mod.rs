//! Shared test support: an independent brute-force reference predictor and
//! random generators for fuzzing.
//!
//! The reference scanner is deliberately written from scratch (char vectors,
//! explicit flags) so it shares no code path with the production predictor.

use rand::Rng;

use motifgp::domain::{AminoAcid, Model as GenericModel, Rule as GenericRule};
use motifgp::{Model, Rule, Sequence};

/// Naive re-scan with explicit window comparison. Same contract as
/// `predictor::predict` but an independent implementation.
pub fn reference_predict(model: &Model, seq: &Sequence) -> f64 {
    let hay: Vec<char> = seq.to_string().chars().collect();
    let mut total = 0.0;
    let mut pos = 0;
    while pos < hay.len() {
        let mut fired = false;
        for rule in model.rules() {
            if !rule.status {
                continue;
            }
            let motif: Vec<char> = rule.motif.to_string().chars().collect();
            let m = motif.len();
            if pos + m > hay.len() {
                continue;
            }
            let window = &hay[pos..pos + m];
            let forward = window.iter().zip(motif.iter()).all(|(a, b)| a == b);
            let backward = window.iter().rev().zip(motif.iter()).all(|(a, b)| a == b);
            if forward || backward {
                total += rule.weight;
                pos += m;
                fired = true;
                break;
            }
        }
        if !fired {
            pos += 1;
        }
    }
    total
}

pub fn random_sequence(rng: &mut impl Rng, len: usize) -> Sequence {
    let residues = (0..len)
        .map(|_| AminoAcid::from_standard_index(rng.gen_range(0..AminoAcid::STANDARD_COUNT)))
        .collect();
    Sequence::from_residues(residues).expect("non-empty")
}

pub fn random_rule(rng: &mut impl Rng, id: u32, max_motif: usize) -> Rule {
    let len = rng.gen_range(1..=max_motif);
    let motif = random_sequence(rng, len);
    GenericRule::new(id, motif, rng.gen_range(-5.0..=5.0), rng.gen_bool(0.5))
}

/// Random model with `0..=max_rules` rules of mixed statuses.
pub fn random_model(rng: &mut impl Rng, max_rules: usize, max_motif: usize) -> Model {
    let count = rng.gen_range(0..=max_rules);
    GenericModel::new(
        (0..count)
            .map(|i| random_rule(rng, i as u32, max_motif))
            .collect(),
    )
}
