//! Sequence-function modeling for peptides: weighted-motif rule tables
//! evolved by genetic programming against measured CEST contrast, plus a
//! hill-climbing optimizer that proposes new high-scoring soluble peptides
//! under a trained model.
//!
//! The numeric core is generic over the scalar type (f32 or f64 via
//! [`Scalar`]); the type aliases at the crate root fix the f64
//! instantiation the CLI and file formats use.

pub mod cli;
pub mod domain;
mod error;
pub mod evolution;
pub mod io;
pub mod metrics;
pub mod optimizer;
pub mod predictor;
mod scalar;
pub mod seeds;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use domain::{hydrophobicity_sum, is_soluble, AminoAcid, MutationRates, Sequence};
pub use evolution::{EvalMode, FoldAssignment};
pub use optimizer::OptimizerConfig;

/// Scalar type used by the CLI and the on-disk formats.
pub type Value = f64;

pub type HydrophobicityTable = domain::HydrophobicityTable<Value>;
pub type Rule = domain::Rule<Value>;
pub type Model = domain::Model<Value>;
pub type LabeledSequence = domain::LabeledSequence<Value>;
pub type Dataset = domain::Dataset<Value>;
pub type EvolutionConfig = domain::EvolutionConfig<Value>;
pub type Prediction = predictor::Prediction<Value>;
pub type Individual = evolution::Individual<Value>;
pub type GenerationTrace = evolution::GenerationTrace<Value>;
pub type EvolutionRun = evolution::EvolutionRun<Value>;
pub type CandidatePool = optimizer::CandidatePool<Value>;
pub type RankEvaluation = metrics::RankEvaluation<Value>;
pub type MotifFrequencyReport = metrics::MotifFrequencyReport;
pub type ModelFile = io::ModelFile<Value>;
