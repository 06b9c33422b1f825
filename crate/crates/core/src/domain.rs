//! Core value types: amino acids, sequences, rules, models, datasets,
//! and engine configuration.
//!
//! Everything here is an immutable value type once constructed and safe to
//! share read-only across threads. Evolutionary operators never mutate in
//! place; they build new values.

use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The 20 standard amino acids, the only symbols random generation and
/// mutation ever emit.
const GENERATION_ALPHABET: &[u8; 20] = b"ACDEFGHIKLMNPQRSTVWY";

/// Symbols accepted when parsing external data: the standard 20 plus the
/// nonstandard `J`, which appears in the hydrophobicity table and may occur
/// in imported sequences.
const ACCEPTED_ALPHABET: &[u8; 21] = b"ACDEFGHIJKLMNPQRSTVWY";

/// One residue symbol from the accepted alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AminoAcid(u8);

impl AminoAcid {
    /// Number of symbols in the generation alphabet.
    pub const STANDARD_COUNT: usize = 20;

    /// Accepts the 21-symbol alphabet (uppercase only). Returns `None` for
    /// anything else; callers attach positional context to the error.
    pub fn from_char(c: char) -> Option<AminoAcid> {
        if c.is_ascii_uppercase() && ACCEPTED_ALPHABET.contains(&(c as u8)) {
            Some(AminoAcid(c as u8))
        } else {
            None
        }
    }

    /// The i-th symbol of the 20-letter generation alphabet.
    ///
    /// Panics if `i >= 20`; used with uniform draws in `0..STANDARD_COUNT`.
    pub fn from_standard_index(i: usize) -> AminoAcid {
        AminoAcid(GENERATION_ALPHABET[i])
    }

    pub fn symbol(self) -> char {
        self.0 as char
    }

    pub fn as_byte(self) -> u8 {
        self.0
    }

    /// False only for `J`.
    pub fn is_standard(self) -> bool {
        self.0 != b'J'
    }
}

impl fmt::Debug for AminoAcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AminoAcid({})", self.symbol())
    }
}

impl fmt::Display for AminoAcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A non-empty peptide sequence (or motif) over the accepted alphabet.
///
/// Ordering and hashing are byte-wise, so `Ord` is plain lexicographic
/// order on the residue symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<u8>);

impl Sequence {
    /// Parse from text. Rejects empty input and any symbol outside the
    /// accepted alphabet, naming the symbol and its 0-based position.
    pub fn parse(text: &str) -> Result<Sequence> {
        if text.is_empty() {
            return Err(Error::EmptySequence);
        }
        let mut bytes = Vec::with_capacity(text.len());
        for (position, c) in text.chars().enumerate() {
            match AminoAcid::from_char(c) {
                Some(aa) => bytes.push(aa.as_byte()),
                None => {
                    return Err(Error::UnknownResidue {
                        symbol: c,
                        position,
                    })
                }
            }
        }
        Ok(Sequence(bytes))
    }

    pub fn from_residues(residues: Vec<AminoAcid>) -> Result<Sequence> {
        if residues.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence(
            residues.into_iter().map(AminoAcid::as_byte).collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Sequences are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn residues(&self) -> impl Iterator<Item = AminoAcid> + '_ {
        self.0.iter().map(|&b| AminoAcid(b))
    }

    pub fn residue(&self, i: usize) -> AminoAcid {
        AminoAcid(self.0[i])
    }

    pub fn reversed(&self) -> Sequence {
        Sequence(self.0.iter().rev().copied().collect())
    }

    /// Copy with the residue at `pos` replaced.
    pub fn substituted(&self, pos: usize, aa: AminoAcid) -> Sequence {
        let mut bytes = self.0.clone();
        bytes[pos] = aa.as_byte();
        Sequence(bytes)
    }

    /// Copy with `aa` inserted before position `pos` (`pos == len` appends).
    pub fn inserted(&self, pos: usize, aa: AminoAcid) -> Sequence {
        let mut bytes = self.0.clone();
        bytes.insert(pos, aa.as_byte());
        Sequence(bytes)
    }

    /// Copy with the residue at `pos` removed; rejects emptying the sequence.
    pub fn removed(&self, pos: usize) -> Result<Sequence> {
        if self.0.len() == 1 {
            return Err(Error::EmptySequence);
        }
        let mut bytes = self.0.clone();
        bytes.remove(pos);
        Ok(Sequence(bytes))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence(\"{self}\")")
    }
}

/// Rose-scale hydrophobicity values for the 21 accepted symbols.
const STANDARD_HYDROPHOBICITY: &[(u8, f64); 21] = &[
    (b'A', 0.17),
    (b'C', -0.24),
    (b'D', 1.23),
    (b'E', 2.02),
    (b'F', -1.13),
    (b'G', 0.01),
    (b'H', 0.96),
    (b'I', -0.31),
    (b'J', 0.17),
    (b'K', 0.99),
    (b'L', -0.56),
    (b'M', -0.23),
    (b'N', 0.42),
    (b'P', 0.45),
    (b'Q', 0.58),
    (b'R', 0.81),
    (b'S', 0.13),
    (b'T', 0.14),
    (b'V', 0.07),
    (b'W', -1.85),
    (b'Y', -0.94),
];

/// Map from residue symbol to hydrophobicity value.
#[derive(Debug, Clone, PartialEq)]
pub struct HydrophobicityTable<T> {
    values: [Option<T>; 26],
}

impl<T: Scalar> HydrophobicityTable<T> {
    /// Build from explicit entries. Later duplicates overwrite earlier ones.
    /// Non-finite values are rejected.
    pub fn new(entries: impl IntoIterator<Item = (AminoAcid, T)>) -> Result<Self> {
        let mut values = [None; 26];
        for (aa, v) in entries {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "non-finite hydrophobicity value for '{}'",
                    aa.symbol()
                )));
            }
            values[(aa.as_byte() - b'A') as usize] = Some(v);
        }
        Ok(HydrophobicityTable { values })
    }

    /// The built-in Rose-scale table covering all 21 accepted symbols.
    pub fn standard() -> Self {
        let entries = STANDARD_HYDROPHOBICITY.iter().map(|&(b, v)| {
            let value = T::from_f64(v).expect("representable constant");
            (AminoAcid(b), value)
        });
        Self::new(entries).expect("built-in values are finite")
    }

    pub fn get(&self, aa: AminoAcid) -> Option<T> {
        self.values[(aa.as_byte() - b'A') as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (AminoAcid, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (AminoAcid(b'A' + i as u8), v)))
    }
}

/// Sum of per-residue hydrophobicity values.
///
/// Values are folded in sorted order, so the total depends only on the
/// multiset of residues: reversing (or permuting) a sequence gives the
/// bit-identical sum.
pub fn hydrophobicity_sum<T: Scalar>(seq: &Sequence, table: &HydrophobicityTable<T>) -> Result<T> {
    let mut values = Vec::with_capacity(seq.len());
    for (position, aa) in seq.residues().enumerate() {
        match table.get(aa) {
            Some(v) => values.push(v),
            None => {
                return Err(Error::MissingHydrophobicity {
                    symbol: aa.symbol(),
                    position,
                })
            }
        }
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    Ok(values.into_iter().fold(T::zero(), |acc, v| acc + v))
}

/// A peptide is treated as soluble when its hydrophobicity sum is >= 0;
/// only strictly negative sums are insoluble.
pub fn is_soluble<T: Scalar>(seq: &Sequence, table: &HydrophobicityTable<T>) -> Result<bool> {
    Ok(hydrophobicity_sum(seq, table)? >= T::zero())
}

/// One row of a model table: a motif with a weight and an expression status.
///
/// `status` is true iff the motif (forward or reversed) occurred as a
/// contiguous substring of at least one dataset sequence at the last
/// status refresh. Only expressed rules participate in prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub id: u32,
    pub motif: Sequence,
    pub weight: T,
    pub status: bool,
}

impl<T: Scalar> Rule<T> {
    pub fn new(id: u32, motif: Sequence, weight: T, status: bool) -> Self {
        Rule {
            id,
            motif,
            weight,
            status,
        }
    }
}

/// An ordered rule table; the unit of evolution.
///
/// Rules are kept sorted longest-motif-first (ties by ascending rule id) at
/// every observation point, so prediction always tries longer motifs before
/// shorter ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<T> {
    rules: Vec<Rule<T>>,
}

impl<T: Scalar> Model<T> {
    pub fn new(mut rules: Vec<Rule<T>>) -> Self {
        sort_rules(&mut rules);
        Model { rules }
    }

    pub fn empty() -> Self {
        Model { rules: Vec::new() }
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn expressed_count(&self) -> usize {
        self.rules.iter().filter(|r| r.status).count()
    }

    /// Consume the model and hand back its rules (still sorted).
    pub fn into_rules(self) -> Vec<Rule<T>> {
        self.rules
    }
}

pub(crate) fn sort_rules<T>(rules: &mut [Rule<T>]) {
    rules.sort_by(|a, b| b.motif.len().cmp(&a.motif.len()).then(a.id.cmp(&b.id)));
}

/// A peptide with its measured CEST contrast (MTR_asym at 3.6 ppm).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSequence<T> {
    pub sequence: Sequence,
    pub cest_value: T,
}

impl<T: Scalar> LabeledSequence<T> {
    /// Rejects non-finite or negative measurements.
    pub fn new(sequence: Sequence, cest_value: T) -> Result<Self> {
        if !cest_value.is_finite() || cest_value < T::zero() {
            return Err(Error::InvalidConfig(format!(
                "CEST value for {sequence} must be finite and non-negative"
            )));
        }
        Ok(LabeledSequence {
            sequence,
            cest_value,
        })
    }
}

/// Training corpus. Duplicate sequence texts are permitted; repeated
/// measurements of the same peptide are distinct records.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    entries: Vec<LabeledSequence<T>>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(entries: Vec<LabeledSequence<T>>) -> Self {
        Dataset { entries }
    }

    pub fn entries(&self) -> &[LabeledSequence<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LabeledSequence<T>> {
        self.entries.iter()
    }

    pub fn into_entries(self) -> Vec<LabeledSequence<T>> {
        self.entries
    }
}

/// Per-operator mutation probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationRates {
    /// Add-rule mutation: append one random rule to the model.
    pub arm: f64,
    /// Remove-rule mutation: delete one uniformly chosen rule.
    pub rrm: f64,
    /// Change-weight mutation: nudge a rule weight by +-uniform(0,1).
    pub cwm: f64,
    /// Add-to-pattern mutation: insert a random symbol into a motif.
    pub apm: f64,
    /// Remove-from-pattern mutation: delete one motif symbol.
    pub rpm: f64,
}

impl MutationRates {
    pub fn uniform(rate: f64) -> Self {
        MutationRates {
            arm: rate,
            rrm: rate,
            cwm: rate,
            apm: rate,
            rpm: rate,
        }
    }
}

impl Default for MutationRates {
    fn default() -> Self {
        MutationRates::uniform(0.16)
    }
}

/// Every parameter of one model-evolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig<T> {
    pub population_size: usize,
    pub tournament_size: usize,
    pub max_motif_length: usize,
    pub max_rule_count: usize,
    pub generations: usize,
    /// Probability that an unexpressed parent rule survives crossover.
    pub unused_rule_crossover_rate: f64,
    pub mutation_rates: MutationRates,
    pub k_folds: usize,
    /// Closed interval for initial rule weights.
    pub weight_init_range: RangeInclusive<T>,
    pub rng_seed: u64,
}

impl<T: Scalar> Default for EvolutionConfig<T> {
    fn default() -> Self {
        let five = T::from_f64(5.0).expect("representable constant");
        EvolutionConfig {
            population_size: 100,
            tournament_size: 5,
            max_motif_length: 9,
            max_rule_count: 100,
            generations: 5000,
            unused_rule_crossover_rate: 0.20,
            mutation_rates: MutationRates::default(),
            k_folds: 10,
            weight_init_range: -five..=five,
            rng_seed: 0,
        }
    }
}

impl<T: Scalar> EvolutionConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::InvalidConfig("population_size must be >= 1".into()));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return Err(Error::InvalidConfig(format!(
                "tournament_size must be in 1..={}",
                self.population_size
            )));
        }
        if self.max_motif_length == 0 {
            return Err(Error::InvalidConfig("max_motif_length must be >= 1".into()));
        }
        if self.max_rule_count == 0 {
            return Err(Error::InvalidConfig("max_rule_count must be >= 1".into()));
        }
        let rates = [
            (
                "unused_rule_crossover_rate",
                self.unused_rule_crossover_rate,
            ),
            ("mutation_rate_arm", self.mutation_rates.arm),
            ("mutation_rate_rrm", self.mutation_rates.rrm),
            ("mutation_rate_cwm", self.mutation_rates.cwm),
            ("mutation_rate_apm", self.mutation_rates.apm),
            ("mutation_rate_rpm", self.mutation_rates.rpm),
        ];
        for (name, rate) in rates {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a probability in [0, 1], got {rate}"
                )));
            }
        }
        if self.k_folds < 2 {
            return Err(Error::InvalidConfig("k_folds must be >= 2".into()));
        }
        let (lo, hi) = (
            *self.weight_init_range.start(),
            *self.weight_init_range.end(),
        );
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidConfig(
                "weight_init_range must be a finite low..=high interval".into(),
            ));
        }
        Ok(())
    }

    /// Checks that also depend on the training dataset.
    pub fn validate_for_dataset(&self, dataset_len: usize) -> Result<()> {
        self.validate()?;
        if dataset_len == 0 {
            return Err(Error::EmptyInput("training dataset"));
        }
        if self.k_folds > dataset_len {
            return Err(Error::InvalidConfig(format!(
                "k_folds ({}) exceeds dataset size ({dataset_len})",
                self.k_folds
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> HydrophobicityTable<f64> {
        HydrophobicityTable::standard()
    }

    #[test]
    fn accepted_alphabet_is_standard_plus_j() {
        for &b in GENERATION_ALPHABET {
            assert!(AminoAcid::from_char(b as char).is_some());
        }
        let j = AminoAcid::from_char('J').unwrap();
        assert!(!j.is_standard());
        assert!(AminoAcid::from_char('B').is_none());
        assert!(AminoAcid::from_char('X').is_none());
        assert!(AminoAcid::from_char('k').is_none(), "lowercase rejected");
        assert!(AminoAcid::from_char('*').is_none());
    }

    #[test]
    fn sequence_parse_rejects_empty() {
        assert!(matches!(Sequence::parse(""), Err(Error::EmptySequence)));
    }

    #[test]
    fn sequence_parse_names_symbol_and_position() {
        match Sequence::parse("KKXK") {
            Err(Error::UnknownResidue { symbol, position }) => {
                assert_eq!(symbol, 'X');
                assert_eq!(position, 2);
            }
            other => panic!("expected UnknownResidue, got {other:?}"),
        }
    }

    #[test]
    fn sequence_edits() {
        let s = Sequence::parse("KTW").unwrap();
        let a = AminoAcid::from_char('A').unwrap();
        assert_eq!(s.substituted(1, a).to_string(), "KAW");
        assert_eq!(s.inserted(0, a).to_string(), "AKTW");
        assert_eq!(s.inserted(3, a).to_string(), "KTWA");
        assert_eq!(s.removed(2).unwrap().to_string(), "KT");
        let one = Sequence::parse("K").unwrap();
        assert!(one.removed(0).is_err());
        assert_eq!(s.reversed().to_string(), "WTK");
    }

    #[test]
    fn standard_table_has_21_entries_with_published_values() {
        let t = table();
        assert_eq!(t.iter().count(), 21);
        let get = |c| t.get(AminoAcid::from_char(c).unwrap()).unwrap();
        assert_eq!(get('W'), -1.85);
        assert_eq!(get('E'), 2.02);
        assert_eq!(get('K'), 0.99);
        assert_eq!(get('J'), 0.17);
        assert_eq!(get('G'), 0.01);
    }

    #[test]
    fn hydrophobicity_sum_k12() {
        // Hand fold of twelve 0.99 values; lands exactly on the 11.88 literal.
        let k12 = Sequence::parse("KKKKKKKKKKKK").unwrap();
        let sum = hydrophobicity_sum(&k12, &table()).unwrap();
        assert_eq!(sum, 11.88);
    }

    #[test]
    fn hydrophobicity_sum_w12() {
        // Twelve -1.85 values; one ulp away from the -22.2 literal.
        let w12 = Sequence::parse("WWWWWWWWWWWW").unwrap();
        let sum = hydrophobicity_sum(&w12, &table()).unwrap();
        let oracle = (0..12).fold(0.0f64, |acc, _| acc + (-1.85));
        assert_eq!(sum, oracle);
        assert!((sum - (-22.20)).abs() < 1e-12);
    }

    #[test]
    fn hydrophobicity_sum_gv() {
        let gv = Sequence::parse("GV").unwrap();
        assert_eq!(hydrophobicity_sum(&gv, &table()).unwrap(), 0.08);
    }

    #[test]
    fn hydrophobicity_sum_missing_entry() {
        let partial =
            HydrophobicityTable::<f64>::new([(AminoAcid::from_char('K').unwrap(), 0.99)]).unwrap();
        let seq = Sequence::parse("KKW").unwrap();
        match hydrophobicity_sum(&seq, &partial) {
            Err(Error::MissingHydrophobicity { symbol, position }) => {
                assert_eq!(symbol, 'W');
                assert_eq!(position, 2);
            }
            other => panic!("expected MissingHydrophobicity, got {other:?}"),
        }
    }

    #[test]
    fn solubility_boundary_is_inclusive() {
        let k = AminoAcid::from_char('K').unwrap();
        let t = AminoAcid::from_char('T').unwrap();
        let zero_sum = HydrophobicityTable::new([(k, 1.0), (t, -1.0)]).unwrap();
        let kt = Sequence::parse("KT").unwrap();
        assert_eq!(hydrophobicity_sum(&kt, &zero_sum).unwrap(), 0.0);
        assert!(is_soluble(&kt, &zero_sum).unwrap());
    }

    #[test]
    fn solubility_of_reference_peptides() {
        let t = table();
        assert!(is_soluble(&Sequence::parse("KKKKKKKKKKKK").unwrap(), &t).unwrap());
        assert!(!is_soluble(&Sequence::parse("WWWWWWWWWWWW").unwrap(), &t).unwrap());
        assert!(is_soluble(&Sequence::parse("GV").unwrap(), &t).unwrap());
    }

    #[test]
    fn hydrophobicity_works_in_f32() {
        let t32 = HydrophobicityTable::<f32>::standard();
        let k12 = Sequence::parse("KKKKKKKKKKKK").unwrap();
        let sum = hydrophobicity_sum(&k12, &t32).unwrap();
        assert!((sum - 11.88f32).abs() < 1e-5);
        assert!(is_soluble(&k12, &t32).unwrap());
    }

    #[test]
    fn table_values_round_trip_through_text() {
        let t = table();
        for (aa, v) in t.iter() {
            let display: f64 = format!("{v}").parse().unwrap();
            assert_eq!(display, v, "Display round-trip for {aa}");
            let sci: f64 = format!("{v:.16e}").parse().unwrap();
            assert_eq!(sci, v, "17-digit round-trip for {aa}");
        }
    }

    fn rule(id: u32, motif: &str) -> Rule<f64> {
        Rule::new(id, Sequence::parse(motif).unwrap(), 1.0, true)
    }

    #[test]
    fn model_sorts_longest_first_with_id_tiebreak() {
        let m = Model::new(vec![
            rule(3, "K"),
            rule(1, "TK"),
            rule(0, "AA"),
            rule(2, "KWT"),
        ]);
        let order: Vec<u32> = m.rules().iter().map(|r| r.id).collect();
        assert_eq!(order, vec![2, 0, 1, 3]);
    }

    #[test]
    fn model_sort_is_idempotent() {
        let m = Model::new(vec![
            rule(5, "K"),
            rule(4, "K"),
            rule(9, "WTA"),
            rule(0, "QQ"),
        ]);
        let again = Model::new(m.rules().to_vec());
        assert_eq!(m, again);
    }

    #[test]
    fn labeled_sequence_rejects_bad_values() {
        let s = Sequence::parse("KK").unwrap();
        assert!(LabeledSequence::new(s.clone(), -1.0).is_err());
        assert!(LabeledSequence::new(s.clone(), f64::NAN).is_err());
        assert!(LabeledSequence::new(s.clone(), f64::INFINITY).is_err());
        assert!(LabeledSequence::new(s, 0.0).is_ok());
    }

    #[test]
    fn default_config_matches_published_parameters() {
        let c = EvolutionConfig::<f64>::default();
        assert_eq!(c.population_size, 100);
        assert_eq!(c.tournament_size, 5);
        assert_eq!(c.max_motif_length, 9);
        assert_eq!(c.max_rule_count, 100);
        assert_eq!(c.generations, 5000);
        assert_eq!(c.unused_rule_crossover_rate, 0.20);
        for rate in [
            c.mutation_rates.arm,
            c.mutation_rates.rrm,
            c.mutation_rates.cwm,
            c.mutation_rates.apm,
            c.mutation_rates.rpm,
        ] {
            assert_eq!(rate, 0.16);
        }
        assert_eq!(c.k_folds, 10);
        assert_eq!(c.weight_init_range, -5.0..=5.0);
    }

    #[test]
    fn config_validation() {
        let ok = EvolutionConfig::<f64>::default();
        assert!(ok.validate().is_ok());

        let mut c = ok.clone();
        c.tournament_size = c.population_size + 1;
        assert!(c.validate().is_err());

        let mut c = ok.clone();
        c.k_folds = 1;
        assert!(c.validate().is_err(), "k_folds >= 2 enforced");

        let mut c = ok.clone();
        c.mutation_rates.cwm = 1.5;
        assert!(c.validate().is_err());

        let mut c = ok.clone();
        c.weight_init_range = 5.0..=-5.0;
        assert!(c.validate().is_err());

        assert!(ok.validate_for_dataset(163).is_ok());
        assert!(
            ok.validate_for_dataset(9).is_err(),
            "k_folds > dataset size"
        );
        assert!(ok.validate_for_dataset(0).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_sequence(max_len: usize) -> impl Strategy<Value = Sequence> {
            prop::collection::vec(0usize..AminoAcid::STANDARD_COUNT, 1..=max_len).prop_map(|idx| {
                Sequence::from_residues(
                    idx.into_iter()
                        .map(AminoAcid::from_standard_index)
                        .collect(),
                )
                .unwrap()
            })
        }

        proptest! {
            #[test]
            fn hydrophobicity_sum_is_reversal_invariant(seq in arb_sequence(30)) {
                let t = HydrophobicityTable::<f64>::standard();
                prop_assert_eq!(
                    hydrophobicity_sum(&seq, &t).unwrap(),
                    hydrophobicity_sum(&seq.reversed(), &t).unwrap()
                );
            }

            #[test]
            fn model_sorting_is_stable_and_idempotent(
                lens in prop::collection::vec(1usize..=9, 0..=40)
            ) {
                let rules: Vec<Rule<f64>> = lens
                    .into_iter()
                    .enumerate()
                    .map(|(i, len)| {
                        let motif = Sequence::from_residues(
                            vec![AminoAcid::from_standard_index(i % 20); len],
                        )
                        .unwrap();
                        Rule::new(i as u32, motif, 0.5, i % 2 == 0)
                    })
                    .collect();
                let once = Model::new(rules);
                let twice = Model::new(once.rules().to_vec());
                prop_assert_eq!(&once, &twice);
                for pair in once.rules().windows(2) {
                    let ordered = pair[0].motif.len() > pair[1].motif.len()
                        || (pair[0].motif.len() == pair[1].motif.len()
                            && pair[0].id < pair[1].id);
                    prop_assert!(ordered);
                }
            }
        }
    }
}
