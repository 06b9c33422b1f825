//! Model prediction and rule-status refresh.
//!
//! Prediction scans a sequence left to right. At each position the rules are
//! tried in table order (longest motif first); the first expressed rule whose
//! motif — forward or reversed — equals the window at that position fires,
//! adds its weight, and jumps the scan past the matched window. Positions
//! where nothing fires advance by one.

use std::collections::HashSet;

use crate::domain::{Dataset, Model, Rule, Sequence};
use crate::scalar::Scalar;

/// Outcome of scoring one sequence against one model.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    /// Sum of the weights of the fired rules.
    pub value: T,
    /// Which rule fired at which scan position, in match order.
    pub matched_rules: Vec<RuleMatch>,
}

/// One rule firing during a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleMatch {
    pub rule_id: u32,
    pub position: usize,
}

fn window_matches<T>(rule: &Rule<T>, window: &[u8]) -> bool {
    let motif = rule.motif.as_bytes();
    window == motif || window.iter().zip(motif.iter().rev()).all(|(a, b)| a == b)
}

/// Predicted CEST contrast of `seq` under `model`.
///
/// A palindromic motif matching both ways still fires once. Unexpressed
/// rules never fire; an empty or all-unexpressed model predicts zero.
pub fn predict<T: Scalar>(model: &Model<T>, seq: &Sequence) -> Prediction<T> {
    let bytes = seq.as_bytes();
    let n = bytes.len();
    let mut value = T::zero();
    let mut matched_rules = Vec::new();
    let mut position = 0;
    'scan: while position < n {
        for rule in model.rules() {
            if !rule.status {
                continue;
            }
            let len = rule.motif.len();
            if position + len > n {
                continue;
            }
            if window_matches(rule, &bytes[position..position + len]) {
                value = value + rule.weight;
                matched_rules.push(RuleMatch {
                    rule_id: rule.id,
                    position,
                });
                position += len;
                continue 'scan;
            }
        }
        position += 1;
    }
    Prediction {
        value,
        matched_rules,
    }
}

/// All contiguous substrings (up to a length cap) of a dataset's sequences,
/// for O(1) motif lookups during status refresh.
#[derive(Debug, Clone)]
pub struct SubstringIndex {
    max_len: usize,
    substrings: HashSet<Box<[u8]>>,
}

impl SubstringIndex {
    pub fn build<T: Scalar>(dataset: &Dataset<T>, max_len: usize) -> Self {
        let mut substrings = HashSet::new();
        for entry in dataset.iter() {
            let bytes = entry.sequence.as_bytes();
            for start in 0..bytes.len() {
                let stop = (start + max_len).min(bytes.len());
                for end in start + 1..=stop {
                    substrings.insert(Box::from(&bytes[start..end]));
                }
            }
        }
        SubstringIndex {
            max_len,
            substrings,
        }
    }

    /// True iff the motif or its reverse occurs in the indexed dataset.
    /// Motifs longer than the index cap cannot match.
    pub fn contains_motif_or_reverse(&self, motif: &Sequence) -> bool {
        if motif.len() > self.max_len {
            return false;
        }
        if self.substrings.contains(motif.as_bytes()) {
            return true;
        }
        let reversed: Vec<u8> = motif.as_bytes().iter().rev().copied().collect();
        self.substrings.contains(reversed.as_slice())
    }
}

/// Recompute every rule's status against `dataset`.
///
/// A rule is expressed iff its motif or reversed motif is a contiguous
/// substring of at least one dataset sequence — the same reverse matching
/// prediction uses. Idempotent.
pub fn refresh_status<T: Scalar>(model: &Model<T>, dataset: &Dataset<T>) -> Model<T> {
    let max_len = model
        .rules()
        .iter()
        .map(|r| r.motif.len())
        .max()
        .unwrap_or(0);
    let index = SubstringIndex::build(dataset, max_len);
    refresh_status_with(model, &index)
}

/// `refresh_status` against a prebuilt index; the hot path inside evolution.
pub fn refresh_status_with<T: Scalar>(model: &Model<T>, index: &SubstringIndex) -> Model<T> {
    let rules = model
        .rules()
        .iter()
        .map(|r| Rule {
            status: index.contains_motif_or_reverse(&r.motif),
            ..r.clone()
        })
        .collect();
    Model::new(rules)
}
