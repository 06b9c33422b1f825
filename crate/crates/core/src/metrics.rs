//! Scoring and analysis: RMSE, MTR_asym, reference normalization, Pearson
//! correlation, rank evaluation against held-out data, and motif-frequency
//! reports over collections of models.

use std::collections::{HashMap, HashSet};

use crate::domain::{Dataset, Model, Sequence};
use crate::error::{Error, Result};
use crate::predictor::predict;
use crate::scalar::Scalar;

/// Root mean square error sqrt(sum((d_i - f_i)^2) / n).
pub fn rmse<T: Scalar>(targets: &[T], predictions: &[T]) -> Result<T> {
    if targets.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            targets: targets.len(),
            predictions: predictions.len(),
        });
    }
    if targets.is_empty() {
        return Err(Error::EmptyInput("rmse series"));
    }
    let n = T::from_usize(targets.len()).expect("representable length");
    let sum_sq = targets
        .iter()
        .zip(predictions)
        .fold(T::zero(), |acc, (&d, &f)| {
            let e = d - f;
            acc + e * e
        });
    Ok((sum_sq / n).sqrt())
}

/// Asymmetric magnetization transfer ratio (S_-tau - S_+tau) / S_0.
pub fn mtr_asym<T: Scalar>(s_minus: T, s_plus: T, s0: T) -> Result<T> {
    if s0 == T::zero() {
        return Err(Error::ZeroReference);
    }
    Ok((s_minus - s_plus) / s0)
}

/// Divide every value by a reference measurement (e.g. the K12 contrast).
pub fn normalize_to_reference<T: Scalar>(values: &[T], reference: T) -> Result<Vec<T>> {
    if reference == T::zero() {
        return Err(Error::ZeroReference);
    }
    Ok(values.iter().map(|&v| v / reference).collect())
}

/// Sample Pearson correlation coefficient.
///
/// Undefined (and rejected) for series shorter than two points or with zero
/// variance.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            targets: x.len(),
            predictions: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidConfig(
            "pearson requires at least two points".into(),
        ));
    }
    let n = T::from_usize(x.len()).expect("representable length");
    let mean = |s: &[T]| s.iter().fold(T::zero(), |a, &v| a + v) / n;
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    let mut syy = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::ConstantSeries);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// How well a model's predicted ordering of labeled sequences matches their
/// measured ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEvaluation<T> {
    /// Pearson correlation between the two rank vectors.
    pub pearson_r: T,
    /// Pearson correlation between raw predictions and measured values;
    /// `None` when either series is constant.
    pub raw_pearson_r: Option<T>,
    /// Size of the intersection of the two top-k index sets.
    pub top_k_overlap: usize,
    pub k: usize,
    /// Entry indices sorted by predicted value, best first.
    pub predicted_order: Vec<usize>,
    /// Entry indices sorted by measured value, best first.
    pub actual_order: Vec<usize>,
}

/// Sort indices descending by value; ties keep input order.
fn descending_order<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite values"));
    order
}

fn rank_vector<T: Scalar>(order: &[usize]) -> Vec<T> {
    let mut rank = vec![T::zero(); order.len()];
    for (pos, &idx) in order.iter().enumerate() {
        rank[idx] = T::from_usize(pos).expect("representable rank");
    }
    rank
}

/// Rank `labeled` by raw (ungated) prediction and by measured value, and
/// compare the two orderings.
///
/// Duplicated sequences are distinct entries; ranking ties are broken by
/// input order. The caller is responsible for `labeled` being disjoint from
/// the model's training data.
pub fn rank_evaluation<T: Scalar>(
    model: &Model<T>,
    labeled: &Dataset<T>,
    k: usize,
) -> Result<RankEvaluation<T>> {
    let n = labeled.len();
    if k > n {
        return Err(Error::InvalidConfig(format!(
            "top-k ({k}) exceeds number of labeled entries ({n})"
        )));
    }
    let predictions: Vec<T> = labeled
        .iter()
        .map(|e| predict(model, &e.sequence).value)
        .collect();
    let actuals: Vec<T> = labeled.iter().map(|e| e.cest_value).collect();

    let predicted_order = descending_order(&predictions);
    let actual_order = descending_order(&actuals);
    let predicted_rank = rank_vector::<T>(&predicted_order);
    let actual_rank = rank_vector::<T>(&actual_order);

    let pearson_r = pearson(&predicted_rank, &actual_rank)?;
    let raw_pearson_r = match pearson(&predictions, &actuals) {
        Ok(r) => Some(r),
        Err(Error::ConstantSeries) => None,
        Err(e) => return Err(e),
    };

    let top_predicted: HashSet<usize> = predicted_order[..k].iter().copied().collect();
    let top_k_overlap = actual_order[..k]
        .iter()
        .filter(|i| top_predicted.contains(i))
        .count();

    Ok(RankEvaluation {
        pearson_r,
        raw_pearson_r,
        top_k_overlap,
        k,
        predicted_order,
        actual_order,
    })
}

/// One motif's prevalence across a collection of models.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifFrequencyRow {
    pub motif: Sequence,
    /// Number of models with at least one expressed rule carrying the motif.
    pub count: usize,
    pub fraction: f64,
}

/// Motifs shared by at least `threshold` of the models.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifFrequencyReport {
    pub rows: Vec<MotifFrequencyRow>,
    pub threshold: f64,
}

/// Count, per distinct motif, the models containing at least one expressed
/// rule with that motif, and keep motifs whose fraction reaches `threshold`
/// (inclusive).
///
/// Rows are sorted by count descending, then motif length descending, then
/// motif text.
pub fn motif_frequency<T: Scalar>(
    models: &[Model<T>],
    threshold: f64,
) -> Result<MotifFrequencyReport> {
    if models.is_empty() {
        return Err(Error::EmptyInput("model list"));
    }
    let mut counts: HashMap<Sequence, usize> = HashMap::new();
    for model in models {
        let expressed: HashSet<&Sequence> = model
            .rules()
            .iter()
            .filter(|r| r.status)
            .map(|r| &r.motif)
            .collect();
        for motif in expressed {
            *counts.entry(motif.clone()).or_insert(0) += 1;
        }
    }
    let total = models.len() as f64;
    let mut rows: Vec<MotifFrequencyRow> = counts
        .into_iter()
        .map(|(motif, count)| MotifFrequencyRow {
            motif,
            count,
            fraction: count as f64 / total,
        })
        .filter(|row| row.fraction >= threshold)
        .collect();
    rows.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(b.motif.len().cmp(&a.motif.len()))
            .then(a.motif.cmp(&b.motif))
    });
    Ok(MotifFrequencyReport { rows, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{LabeledSequence, Rule};

    fn seq(s: &str) -> Sequence {
        Sequence::parse(s).unwrap()
    }

    #[test]
    fn rmse_zero_when_exact() {
        let v = [1.0, 2.5, 7.0];
        assert_eq!(rmse(&v, &v).unwrap(), 0.0);
    }

    #[test]
    fn rmse_single_point() {
        assert_eq!(rmse(&[3.0], &[1.0]).unwrap(), 2.0);
    }

    #[test]
    fn rmse_hand_value() {
        // sqrt(((1-2)^2 + (2-4)^2) / 2) = sqrt(2.5)
        let r = rmse(&[1.0, 2.0], &[2.0, 4.0]).unwrap();
        assert_eq!(r, 2.5f64.sqrt());
        assert!((r - 1.58113883).abs() < 1e-8);
    }

    #[test]
    fn rmse_rejects_bad_input() {
        assert!(matches!(
            rmse(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(rmse::<f64>(&[], &[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn mtr_asym_hand_values() {
        assert!((mtr_asym(0.8f64, 0.6, 1.0).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(mtr_asym(0.7f64, 0.7, 2.0).unwrap(), 0.0);
        assert!((mtr_asym(0.9f64, 0.3, 2.0).unwrap() - 0.3).abs() < 1e-12);
        assert!(matches!(
            mtr_asym(0.9f64, 0.3, 0.0),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn normalization_against_k12() {
        assert_eq!(normalize_to_reference(&[12.5], 12.5).unwrap(), vec![1.0]);
        // The "400% of K12" scale.
        assert_eq!(normalize_to_reference(&[50.0], 12.5).unwrap(), vec![4.0]);
        assert_eq!(normalize_to_reference(&[0.0], 7.3).unwrap(), vec![0.0]);
        assert!(matches!(
            normalize_to_reference(&[1.0], 0.0),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn pearson_perfect_linear() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_eq!(pearson(&x, &y).unwrap(), 1.0);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &neg).unwrap(), -1.0);
    }

    #[test]
    fn pearson_hand_value() {
        // Covariance 4, both variances 5 -> r = 4/5.
        let r: f64 = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
    }

    #[test]
    fn pearson_rejects_degenerate_series() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ConstantSeries)
        ));
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    /// Dataset where sequence length i+1 has measured value v[i], plus a
    /// single-K-rule model so predictions equal sequence lengths.
    fn length_scored_dataset(values: &[f64]) -> (Model<f64>, Dataset<f64>) {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &v)| LabeledSequence::new(seq(&"K".repeat(i + 1)), v).unwrap())
            .collect();
        let model = Model::new(vec![Rule::new(0, seq("K"), 1.0, true)]);
        (model, Dataset::new(entries))
    }

    #[test]
    fn rank_evaluation_perfect_ordering() {
        let (model, data) = length_scored_dataset(&[1.0, 2.0, 3.0, 4.0]);
        let eval = rank_evaluation(&model, &data, 2).unwrap();
        assert_eq!(eval.pearson_r, 1.0);
        assert_eq!(eval.top_k_overlap, 2);
        assert_eq!(eval.predicted_order, vec![3, 2, 1, 0]);
        assert_eq!(eval.actual_order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn rank_evaluation_exact_reversal() {
        // Longer sequences predict higher but measure lower.
        let (model, data) = length_scored_dataset(&[4.0, 3.0, 2.0, 1.0]);
        let eval = rank_evaluation(&model, &data, 2).unwrap();
        assert_eq!(eval.pearson_r, -1.0);
        assert_eq!(eval.top_k_overlap, 0);
    }

    #[test]
    fn rank_evaluation_breaks_ties_by_input_order() {
        let (model, data) = length_scored_dataset(&[7.0, 7.0, 7.0, 7.0]);
        let eval = rank_evaluation(&model, &data, 4).unwrap();
        assert_eq!(eval.actual_order, vec![0, 1, 2, 3]);
        assert_eq!(eval.top_k_overlap, 4);
        // Measured values constant -> raw correlation undefined.
        assert_eq!(eval.raw_pearson_r, None);
    }

    #[test]
    fn rank_evaluation_rejects_oversized_k() {
        let (model, data) = length_scored_dataset(&[1.0, 2.0]);
        assert!(rank_evaluation(&model, &data, 3).is_err());
    }

    fn single_rule_model(motif: &str, status: bool) -> Model<f64> {
        Model::new(vec![Rule::new(0, seq(motif), 1.0, status)])
    }

    #[test]
    fn motif_frequency_identical_models() {
        let models: Vec<Model<f64>> = (0..50).map(|_| single_rule_model("KW", true)).collect();
        let report = motif_frequency(&models, 0.10).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].motif, seq("KW"));
        assert_eq!(report.rows[0].count, 50);
        assert_eq!(report.rows[0].fraction, 1.0);
    }

    #[test]
    fn motif_frequency_threshold_boundary_is_inclusive() {
        // Motif in exactly 1 of 10 models: fraction 0.10 stays in at 0.10.
        let mut models = vec![single_rule_model("KWT", true)];
        models.extend((0..9).map(|_| single_rule_model("A", true)));
        let report = motif_frequency(&models, 0.10).unwrap();
        assert!(report.rows.iter().any(|r| r.motif == seq("KWT")));

        let empty = motif_frequency(&models, 1.1).unwrap();
        assert!(empty.rows.is_empty());

        let all = motif_frequency(&models, 0.0).unwrap();
        assert_eq!(all.rows.len(), 2);
    }

    #[test]
    fn motif_frequency_ignores_unexpressed_and_duplicate_rules() {
        let dup = Model::new(vec![
            Rule::new(0, seq("KW"), 1.0, true),
            Rule::new(1, seq("KW"), 2.0, true),
            Rule::new(2, seq("QQ"), 1.0, false),
        ]);
        let report = motif_frequency(&[dup], 0.0).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].count, 1, "one model counts once");
    }

    #[test]
    fn motif_frequency_sorting() {
        // a: KW + Q, b: KW + AAA, c: KW -> KW count 3; AAA and Q count 1,
        // AAA before Q (longer), ties after that are lexicographic.
        let mk = |motifs: &[&str]| {
            Model::new(
                motifs
                    .iter()
                    .enumerate()
                    .map(|(i, m)| Rule::new(i as u32, seq(m), 1.0, true))
                    .collect::<Vec<Rule<f64>>>(),
            )
        };
        let models = [mk(&["KW", "Q"]), mk(&["KW", "AAA"]), mk(&["KW"])];
        let report = motif_frequency(&models, 0.0).unwrap();
        let order: Vec<String> = report.rows.iter().map(|r| r.motif.to_string()).collect();
        assert_eq!(order, vec!["KW", "AAA", "Q"]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rmse_is_symmetric_and_zero_on_self(
                v in prop::collection::vec(-50.0..50.0f64, 1..40),
                w in prop::collection::vec(-50.0..50.0f64, 1..40)
            ) {
                let n = v.len().min(w.len());
                let (v, w) = (&v[..n], &w[..n]);
                prop_assert_eq!(rmse(v, v).unwrap(), 0.0);
                prop_assert_eq!(rmse(v, w).unwrap(), rmse(w, v).unwrap());
            }

            #[test]
            fn rmse_matches_independent_two_pass_oracle(
                pairs in prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64), 1..60)
            ) {
                let d: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let f: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                // Two explicit passes: residuals first, then mean of squares.
                let residuals: Vec<f64> = d.iter().zip(&f).map(|(a, b)| a - b).collect();
                let mean_sq: f64 =
                    residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64;
                let oracle = mean_sq.sqrt();
                let found = rmse(&d, &f).unwrap();
                prop_assert!(
                    (found - oracle).abs() <= 1e-12 * oracle.max(1.0),
                    "rmse {} vs oracle {}",
                    found,
                    oracle
                );
            }

            #[test]
            fn rmse_scales_linearly(
                pairs in prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64), 1..40),
                c in -8.0..8.0f64
            ) {
                let d: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let f: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                let cd: Vec<f64> = d.iter().map(|v| c * v).collect();
                let cf: Vec<f64> = f.iter().map(|v| c * v).collect();
                let lhs = rmse(&cd, &cf).unwrap();
                let rhs = c.abs() * rmse(&d, &f).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
            }

            #[test]
            fn pearson_is_invariant_under_positive_affine_maps(
                pairs in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..30),
                a in 0.1..5.0f64,
                b in -10.0..10.0f64
            ) {
                let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                prop_assume!(x.iter().any(|&v| v != x[0]));
                prop_assume!(y.iter().any(|&v| v != y[0]));
                let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let r0 = pearson(&x, &y).unwrap();
                let r1 = pearson(&xt, &y).unwrap();
                prop_assert!((r0 - r1).abs() < 1e-12);
            }
        }
    }
}
