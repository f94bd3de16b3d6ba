//! Evaluation: confusion counts, accuracy, precision/recall/F1, ROC curves
//! with trapezoidal AUC, and the cross-validation / holdout protocols.
//!
//! Degenerate precision/recall/F1 (zero denominators) are reported as 0
//! with an explicit flag rather than NaN. ROC ties are grouped (one vertex
//! per distinct score), which makes the trapezoidal area equal the
//! half-credit rank statistic. Fold results are pooled: confusion counts
//! add up and (score, label) pairs concatenate before the curve is built.

use crate::classifiers::{self, ModelSpec, TrainedModel};
use crate::dataset::{stratified_kfold, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub true_neg: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    pub fn add(&mut self, other: &ConfusionCounts) {
        self.true_pos += other.true_pos;
        self.true_neg += other.true_neg;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
    }
}

fn check_binary(values: &[u8]) -> Result<()> {
    if values.iter().any(|&v| v > 1) {
        return Err(Error::InvalidConfig(
            "labels and predictions must be 0 or 1".into(),
        ));
    }
    Ok(())
}

/// Exact confusion counts from predictions and ground-truth labels.
pub fn confusion(predictions: &[u8], labels: &[u8]) -> Result<ConfusionCounts> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyCounts);
    }
    check_binary(predictions)?;
    check_binary(labels)?;
    let mut c = ConfusionCounts::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        match (p, y) {
            (1, 1) => c.true_pos += 1,
            (0, 0) => c.true_neg += 1,
            (1, 0) => c.false_pos += 1,
            (0, 1) => c.false_neg += 1,
            _ => unreachable!("checked binary"),
        }
    }
    Ok(c)
}

/// (TP + TN) / total.
pub fn accuracy(c: &ConfusionCounts) -> Result<f64> {
    if c.total() == 0 {
        return Err(Error::EmptyCounts);
    }
    Ok((c.true_pos + c.true_neg) as f64 / c.total() as f64)
}

/// A metric value with a degeneracy flag: 0 with `degenerate = true` when
/// the defining denominator was zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub value: f64,
    pub degenerate: bool,
}

impl Metric {
    fn ratio(num: u64, den: u64) -> Metric {
        if den == 0 {
            Metric {
                value: 0.0,
                degenerate: true,
            }
        } else {
            Metric {
                value: num as f64 / den as f64,
                degenerate: false,
            }
        }
    }
}

/// TP / (TP + FP).
pub fn precision(c: &ConfusionCounts) -> Metric {
    Metric::ratio(c.true_pos, c.true_pos + c.false_pos)
}

/// TP / (TP + FN).
pub fn recall(c: &ConfusionCounts) -> Metric {
    Metric::ratio(c.true_pos, c.true_pos + c.false_neg)
}

/// Harmonic mean of precision and recall: 2 / (1/recall + 1/precision).
pub fn f_measure(c: &ConfusionCounts) -> Metric {
    let p = precision(c);
    let r = recall(c);
    if p.degenerate || r.degenerate || p.value + r.value <= 0.0 {
        return Metric {
            value: 0.0,
            degenerate: true,
        };
    }
    Metric {
        value: 2.0 * p.value * r.value / (p.value + r.value),
        degenerate: false,
    }
}

/// One ROC vertex: the (fpr, tpr) reached when classifying scores >=
/// `threshold` as positive. The leading vertex has threshold +infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC curve from (0,0) to (1,1), one vertex per distinct score.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

impl RocCurve {
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "threshold,fpr,tpr")?;
        for p in &self.points {
            writeln!(w, "{},{},{}", p.threshold, p.fpr, p.tpr)?;
        }
        Ok(())
    }
}

/// Sweep thresholds over the distinct scores (descending) and integrate
/// the curve with the trapezoidal rule. Tied scores share one vertex, so
/// the area equals the half-credit rank statistic.
pub fn roc_and_auc(scores: &[f64], labels: &[u8]) -> Result<(RocCurve, f64)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if scores.is_empty() {
        return Err(Error::EmptyCounts);
    }
    check_binary(labels)?;
    for (i, s) in scores.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::NonFiniteFeature { column: i });
        }
    }
    let pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let neg = labels.len() as f64 - pos;
    if pos == 0.0 || neg == 0.0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut i = 0;
    while i < order.len() {
        let score = scores[order[i]];
        let mut j = i;
        while j < order.len() && scores[order[j]] == score {
            if labels[order[j]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        points.push(RocPoint {
            threshold: score,
            fpr: fp as f64 / neg,
            tpr: tp as f64 / pos,
        });
        i = j;
    }

    let mut auc = 0.0;
    for w in points.windows(2) {
        auc += (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0;
    }
    Ok((RocCurve { points }, auc))
}

/// How an evaluation was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    /// "cross-validation" or "holdout".
    pub mode: String,
    pub k: Option<usize>,
    pub seed: u64,
    pub train_size: usize,
    pub eval_size: usize,
}

/// Metrics for one model on one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    pub counts: ConfusionCounts,
    pub accuracy: f64,
    pub precision: Metric,
    pub recall: Metric,
    pub f1: Metric,
    pub auc: f64,
    pub roc: RocCurve,
    pub protocol: Protocol,
}

impl ModelReport {
    pub fn any_degenerate(&self) -> bool {
        self.precision.degenerate || self.recall.degenerate || self.f1.degenerate
    }
}

fn subset(d: &Dataset, indices: &[usize]) -> Dataset {
    Dataset {
        feature_names: d.feature_names.clone(),
        instances: indices.iter().map(|&i| d.instances[i].clone()).collect(),
        meta: d.meta.clone(),
    }
}

fn score_and_classify(
    model: &TrainedModel,
    d: &Dataset,
    indices: impl Iterator<Item = usize>,
    scores: &mut Vec<f64>,
    preds: &mut Vec<u8>,
    labels: &mut Vec<u8>,
) -> Result<()> {
    for i in indices {
        let inst = &d.instances[i];
        let s = model.score(&inst.features)?;
        scores.push(s);
        preds.push(u8::from(s >= 0.5));
        labels.push(inst.label);
    }
    Ok(())
}

fn assemble_report(
    scores: Vec<f64>,
    preds: Vec<u8>,
    labels: Vec<u8>,
    protocol: Protocol,
) -> Result<ModelReport> {
    let counts = confusion(&preds, &labels)?;
    let (roc, auc) = roc_and_auc(&scores, &labels)?;
    Ok(ModelReport {
        accuracy: accuracy(&counts)?,
        precision: precision(&counts),
        recall: recall(&counts),
        f1: f_measure(&counts),
        counts,
        auc,
        roc,
        protocol,
    })
}

/// Stratified k-fold cross-validation: train on each fold's complement,
/// score its fold, pool the predictions, and compute all metrics on the
/// pooled data. Deterministic given the seed.
pub fn cross_validate(d: &Dataset, spec: &ModelSpec, k: usize, seed: u64) -> Result<ModelReport> {
    let folds = stratified_kfold(d, k, seed)?;
    let mut scores = Vec::with_capacity(d.len());
    let mut preds = Vec::with_capacity(d.len());
    let mut labels = Vec::with_capacity(d.len());
    for (train_idx, test_idx) in &folds {
        let model = classifiers::train(&subset(d, train_idx), spec)?;
        score_and_classify(
            &model,
            d,
            test_idx.iter().copied(),
            &mut scores,
            &mut preds,
            &mut labels,
        )?;
    }
    assemble_report(
        scores,
        preds,
        labels,
        Protocol {
            mode: "cross-validation".into(),
            k: Some(k),
            seed,
            train_size: d.len(),
            eval_size: d.len(),
        },
    )
}

/// Train on the full training set, evaluate on the test set.
pub fn evaluate_holdout(train: &Dataset, test: &Dataset, spec: &ModelSpec) -> Result<ModelReport> {
    if train.feature_names != test.feature_names {
        return Err(Error::SchemaMismatch {
            expected: train.feature_names.join(","),
            got: test.feature_names.join(","),
        });
    }
    let model = classifiers::train(train, spec)?;
    let mut scores = Vec::with_capacity(test.len());
    let mut preds = Vec::with_capacity(test.len());
    let mut labels = Vec::with_capacity(test.len());
    score_and_classify(
        &model,
        test,
        0..test.len(),
        &mut scores,
        &mut preds,
        &mut labels,
    )?;
    assemble_report(
        scores,
        preds,
        labels,
        Protocol {
            mode: "holdout".into(),
            k: None,
            seed: spec.seed,
            train_size: train.len(),
            eval_size: test.len(),
        },
    )
}

pub mod report {
    //! Table rendering for evaluation results: an aligned text table in the
    //! Model | Accuracy (%) | AUC | F-Measure layout, a machine-readable
    //! CSV, and per-model ROC CSVs.

    use super::ModelReport;
    use crate::classifiers::ModelKind;

    #[derive(Debug, Clone, PartialEq)]
    pub struct ReportRow {
        pub model: ModelKind,
        pub report: ModelReport,
    }

    #[derive(Debug, Clone, PartialEq)]
    pub struct EvalReport {
        pub title: String,
        pub rows: Vec<ReportRow>,
    }

    impl EvalReport {
        pub fn render_text(&self) -> String {
            let model_width = self
                .rows
                .iter()
                .map(|r| r.model.label().len())
                .chain(["Model".len()])
                .max()
                .unwrap_or(5);
            let mut out = String::new();
            out.push_str(&format!("{}\n", self.title));
            out.push_str(&format!(
                "{:<model_width$} | Accuracy (%) |   AUC | F-Measure\n",
                "Model"
            ));
            out.push_str(&format!(
                "{:-<model_width$}-+--------------+-------+----------\n",
                ""
            ));
            let mut any_degenerate = false;
            for row in &self.rows {
                let r = &row.report;
                any_degenerate |= r.any_degenerate();
                out.push_str(&format!(
                    "{:<model_width$} | {:>12.2} | {:.3} | {:>9.3}{}\n",
                    row.model.label(),
                    r.accuracy * 100.0,
                    r.auc,
                    r.f1.value,
                    if r.any_degenerate() { " *" } else { "" },
                ));
            }
            if any_degenerate {
                out.push_str("* degenerate precision/recall/F1 reported as 0\n");
            }
            out
        }

        pub fn render_csv(&self) -> String {
            let mut out =
                String::from("model,accuracy,precision,recall,f1,auc,tp,tn,fp,fn,degenerate\n");
            for row in &self.rows {
                let r = &row.report;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    row.model.tag(),
                    r.accuracy,
                    r.precision.value,
                    r.recall.value,
                    r.f1.value,
                    r.auc,
                    r.counts.true_pos,
                    r.counts.true_neg,
                    r.counts.false_pos,
                    r.counts.false_neg,
                    r.any_degenerate(),
                ));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{MlpParams, ModelKind, ModelParams};
    use crate::dataset::{DatasetMeta, Instance};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn confusion_trivial_cases() {
        let c = confusion(&[1, 0], &[1, 0]).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                true_pos: 1,
                true_neg: 1,
                false_pos: 0,
                false_neg: 0
            }
        );
        let c = confusion(&[0, 1], &[1, 0]).unwrap();
        assert_eq!(c.true_pos, 0);
        assert_eq!(c.true_neg, 0);
        assert_eq!(c.false_pos, 1);
        assert_eq!(c.false_neg, 1);
    }

    #[test]
    fn confusion_validates_input() {
        assert!(matches!(
            confusion(&[1], &[1, 0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(confusion(&[], &[]), Err(Error::EmptyCounts)));
        assert!(confusion(&[2], &[0]).is_err());
    }

    #[test]
    fn confusion_matches_recount_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(1..50);
            let preds: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            let c = confusion(&preds, &labels).unwrap();
            let mut e = ConfusionCounts::default();
            for i in 0..n {
                match (preds[i], labels[i]) {
                    (1, 1) => e.true_pos += 1,
                    (0, 0) => e.true_neg += 1,
                    (1, 0) => e.false_pos += 1,
                    _ => e.false_neg += 1,
                }
            }
            assert_eq!(c, e);
            assert_eq!(c.total(), n as u64);
        }
    }

    #[test]
    fn accuracy_examples() {
        let perfect = ConfusionCounts {
            true_pos: 5,
            true_neg: 5,
            false_pos: 0,
            false_neg: 0,
        };
        assert_eq!(accuracy(&perfect).unwrap(), 1.0);
        let nine_tenths = ConfusionCounts {
            true_pos: 50,
            true_neg: 40,
            false_pos: 5,
            false_neg: 5,
        };
        assert!((accuracy(&nine_tenths).unwrap() - 0.9).abs() < 1e-15);
        assert!(accuracy(&ConfusionCounts::default()).is_err());
    }

    #[test]
    fn precision_recall_trivial_and_degenerate() {
        let c = ConfusionCounts {
            true_pos: 3,
            true_neg: 1,
            false_pos: 0,
            false_neg: 2,
        };
        assert_eq!(precision(&c).value, 1.0);
        assert!(!precision(&c).degenerate);
        assert_eq!(recall(&c).value, 0.6);

        let no_positive_predictions = ConfusionCounts {
            true_pos: 0,
            true_neg: 5,
            false_pos: 0,
            false_neg: 3,
        };
        let p = precision(&no_positive_predictions);
        assert!(p.degenerate);
        assert_eq!(p.value, 0.0);
        let r = recall(&no_positive_predictions);
        assert!(!r.degenerate);
        assert_eq!(r.value, 0.0);
        assert!(f_measure(&no_positive_predictions).degenerate);
    }

    #[test]
    fn f_measure_examples() {
        // precision = recall = p gives F1 = p.
        let c = ConfusionCounts {
            true_pos: 3,
            true_neg: 0,
            false_pos: 1,
            false_neg: 1,
        };
        let p = precision(&c).value;
        let r = recall(&c).value;
        assert_eq!(p, r);
        assert!((f_measure(&c).value - p).abs() < 1e-15);

        // precision 1, recall 0.5 gives 2/3.
        let c = ConfusionCounts {
            true_pos: 2,
            true_neg: 1,
            false_pos: 0,
            false_neg: 2,
        };
        assert!((f_measure(&c).value - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn metric_identities_on_random_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let c = ConfusionCounts {
                true_pos: rng.gen_range(0..100),
                true_neg: rng.gen_range(0..100),
                false_pos: rng.gen_range(0..100),
                false_neg: rng.gen_range(0..100),
            };
            if c.total() == 0 {
                continue;
            }
            let acc = accuracy(&c).unwrap();
            let direct = (c.true_pos + c.true_neg) as f64 / c.total() as f64;
            assert!((acc - direct).abs() < 1e-12);

            // accuracy = (recall*P + specificity*N) / (P + N) over actual
            // class sizes.
            let actual_pos = c.true_pos + c.false_neg;
            let actual_neg = c.true_neg + c.false_pos;
            if actual_pos > 0 && actual_neg > 0 {
                let specificity = c.true_neg as f64 / actual_neg as f64;
                let identity = (recall(&c).value * actual_pos as f64
                    + specificity * actual_neg as f64)
                    / (actual_pos + actual_neg) as f64;
                assert!((acc - identity).abs() < 1e-12);
            }

            // F1 sits between min and max of precision and recall.
            let p = precision(&c);
            let r = recall(&c);
            let f = f_measure(&c);
            if !p.degenerate && !r.degenerate && p.value > 0.0 && r.value > 0.0 {
                assert!(f.value <= p.value.max(r.value) + 1e-12);
                assert!(f.value >= p.value.min(r.value) - 1e-12);
            }
        }
    }

    #[test]
    fn roc_perfect_ranking_has_unit_area() {
        let scores = [0.9, 0.8, 0.7, 0.2, 0.1];
        let labels = [1, 1, 1, 0, 0];
        let (curve, auc) = roc_and_auc(&scores, &labels).unwrap();
        assert_eq!(auc, 1.0);
        assert_eq!(curve.points.first().unwrap().threshold, f64::INFINITY);
        let last = curve.points.last().unwrap();
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
    }

    #[test]
    fn roc_constant_scores_give_half_area() {
        let scores = [0.5, 0.5, 0.5, 0.5];
        let labels = [1, 0, 1, 0];
        let (curve, auc) = roc_and_auc(&scores, &labels).unwrap();
        assert_eq!(auc, 0.5);
        // One distinct score plus the leading vertex.
        assert_eq!(curve.points.len(), 2);
    }

    #[test]
    fn roc_rejects_single_class_input() {
        assert!(matches!(
            roc_and_auc(&[0.1, 0.9], &[1, 1]),
            Err(Error::SingleClass)
        ));
    }

    /// Half-credit rank statistic: P(score_pos > score_neg) + 0.5 P(tie).
    fn rank_statistic(scores: &[f64], labels: &[u8]) -> f64 {
        let mut wins = 0.0f64;
        let mut pairs = 0.0f64;
        for (i, &yi) in labels.iter().enumerate() {
            if yi != 1 {
                continue;
            }
            for (j, &yj) in labels.iter().enumerate() {
                if yj != 0 {
                    continue;
                }
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn trapezoidal_auc_equals_rank_statistic_with_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for round in 0..300 {
            let n = rng.gen_range(2..60);
            // Coarse grid forces plenty of ties.
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 7.0).collect();
            let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            let pos = labels.iter().filter(|&&y| y == 1).count();
            if pos == 0 || pos == n {
                continue;
            }
            let (_, auc) = roc_and_auc(&scores, &labels).unwrap();
            let oracle = rank_statistic(&scores, &labels);
            assert!(
                (auc - oracle).abs() < 1e-9,
                "round {round}: auc {auc} vs rank {oracle}"
            );
        }
    }

    #[test]
    fn auc_is_invariant_under_monotone_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let scores: Vec<f64> = (0..40).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let labels: Vec<u8> = (0..40).map(|i| u8::from(i % 3 == 0)).collect();
        let (curve, auc) = roc_and_auc(&scores, &labels).unwrap();
        for transform in [
            (|s: f64| 2.0 * s + 1.0) as fn(f64) -> f64,
            |s| s.exp(),
            |s| s.powi(3),
        ] {
            let mapped: Vec<f64> = scores.iter().map(|&s| transform(s)).collect();
            let (curve2, auc2) = roc_and_auc(&mapped, &labels).unwrap();
            assert!((auc - auc2).abs() < 1e-12);
            let shape: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.fpr, p.tpr)).collect();
            let shape2: Vec<(f64, f64)> = curve2.points.iter().map(|p| (p.fpr, p.tpr)).collect();
            assert_eq!(shape, shape2);
        }
    }

    #[test]
    fn auc_flips_with_classes_swapped_and_scores_negated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(4..40);
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
            let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            let pos = labels.iter().filter(|&&y| y == 1).count();
            if pos == 0 || pos == n {
                continue;
            }
            let (_, auc) = roc_and_auc(&scores, &labels).unwrap();
            let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
            let swapped: Vec<u8> = labels.iter().map(|&y| 1 - y).collect();
            let (_, auc2) = roc_and_auc(&negated, &swapped).unwrap();
            assert!((auc - auc2).abs() < 1e-12);
        }
    }

    fn labeled_dataset(rows: &[(Vec<f64>, u8)]) -> Dataset {
        Dataset {
            feature_names: (0..rows[0].0.len()).map(|i| format!("f{i}")).collect(),
            instances: rows
                .iter()
                .map(|(f, y)| Instance {
                    pair: None,
                    features: f.clone(),
                    label: *y,
                })
                .collect(),
            meta: DatasetMeta::default(),
        }
    }

    #[test]
    fn constant_feature_cv_accuracy_is_majority_fraction() {
        let rows: Vec<(Vec<f64>, u8)> = (0..40).map(|i| (vec![1.0], u8::from(i < 30))).collect();
        let d = labeled_dataset(&rows);
        for kind in [ModelKind::DecisionTree, ModelKind::NaiveBayes] {
            let spec = ModelSpec::with_defaults(kind, 0);
            let report = cross_validate(&d, &spec, 10, 0).unwrap();
            assert!(
                (report.accuracy - 0.75).abs() < 1e-12,
                "{kind:?}: {}",
                report.accuracy
            );
        }
    }

    #[test]
    fn pooled_confusion_equals_sum_of_per_fold_confusions() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rows: Vec<(Vec<f64>, u8)> = (0..60)
            .map(|i| {
                let y = u8::from(i % 2 == 0);
                let x = f64::from(y) * 2.0 + rng.gen_range(-1.5..1.5);
                (vec![x], y)
            })
            .collect();
        let d = labeled_dataset(&rows);
        let spec = ModelSpec::with_defaults(ModelKind::NaiveBayes, 7);
        let k = 5;
        let seed = 13;
        let report = cross_validate(&d, &spec, k, seed).unwrap();

        // Recount fold by fold through the public pieces.
        let folds = stratified_kfold(&d, k, seed).unwrap();
        let mut summed = ConfusionCounts::default();
        for (train_idx, test_idx) in &folds {
            let model = classifiers::train(&subset(&d, train_idx), &spec).unwrap();
            let preds: Vec<u8> = test_idx
                .iter()
                .map(|&i| model.classify(&d.instances[i].features, 0.5).unwrap())
                .collect();
            let labels: Vec<u8> = test_idx.iter().map(|&i| d.instances[i].label).collect();
            summed.add(&confusion(&preds, &labels).unwrap());
        }
        assert_eq!(report.counts, summed);
        assert_eq!(report.counts.total(), d.len() as u64);
    }

    #[test]
    fn cross_validation_is_deterministic() {
        let rows: Vec<(Vec<f64>, u8)> = (0..30)
            .map(|i| (vec![i as f64], u8::from(i % 2 == 0)))
            .collect();
        let d = labeled_dataset(&rows);
        let spec = ModelSpec {
            params: ModelParams::Mlp(MlpParams {
                epochs: 20,
                ..MlpParams::default()
            }),
            seed: 3,
        };
        let a = cross_validate(&d, &spec, 5, 11).unwrap();
        let b = cross_validate(&d, &spec, 5, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn holdout_on_identical_separable_sets_is_perfect() {
        let rows: Vec<(Vec<f64>, u8)> = (0..20)
            .map(|i| (vec![i as f64], u8::from(i >= 10)))
            .collect();
        let d = labeled_dataset(&rows);
        let spec = ModelSpec::with_defaults(ModelKind::DecisionTree, 0);
        let report = evaluate_holdout(&d, &d, &spec).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.auc, 1.0);
        assert_eq!(report.protocol.mode, "holdout");
    }

    #[test]
    fn holdout_rejects_schema_mismatch() {
        let a = labeled_dataset(&[(vec![1.0], 0), (vec![2.0], 1)]);
        let mut b = a.clone();
        b.feature_names = vec!["other".into()];
        let spec = ModelSpec::with_defaults(ModelKind::NaiveBayes, 0);
        assert!(matches!(
            evaluate_holdout(&a, &b, &spec),
            Err(Error::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn report_rendering_has_table_shape() {
        let rows: Vec<(Vec<f64>, u8)> = (0..20)
            .map(|i| (vec![i as f64], u8::from(i >= 10)))
            .collect();
        let d = labeled_dataset(&rows);
        let spec = ModelSpec::with_defaults(ModelKind::DecisionTree, 0);
        let model_report = evaluate_holdout(&d, &d, &spec).unwrap();
        let eval_report = report::EvalReport {
            title: "toy".into(),
            rows: vec![report::ReportRow {
                model: ModelKind::DecisionTree,
                report: model_report.clone(),
            }],
        };
        let text = eval_report.render_text();
        assert!(text.contains("Model"));
        assert!(text.contains("Accuracy (%)"));
        assert!(text.contains("J48"));
        assert!(text.contains("100.00"));

        let csv = eval_report.render_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().starts_with("j48,1,"));

        let mut roc_csv = Vec::new();
        model_report.roc.write_csv(&mut roc_csv).unwrap();
        let roc_text = String::from_utf8(roc_csv).unwrap();
        assert!(roc_text.starts_with("threshold,fpr,tpr\ninf,0,0\n"));
    }
}
