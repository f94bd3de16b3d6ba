//! Five supervised binary classifiers built from first principles, all
//! seeded and deterministic, exposing a probability-like score in [0, 1].
//!
//! Decision tree and naive Bayes consume raw features; logistic
//! regression, the MLP, and the linear SVM train on min-max normalized
//! features via a [`Normalizer`] fitted on the training split and bound to
//! the model. Trained models round-trip through a versioned flat text
//! format with 17-significant-digit floats and identical predictions.

pub mod logreg;
pub mod mlp;
pub mod naive_bayes;
pub mod svm;
pub mod tree;

use std::io::{BufRead, BufReader, Read, Write};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub use logreg::{LogRegModel, LogRegParams};
pub use mlp::{MlpLoss, MlpModel, MlpParams};
pub use naive_bayes::{GaussianNb, NbParams};
pub use svm::{SvmModel, SvmParams};
pub use tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    DecisionTree,
    NaiveBayes,
    LogReg,
    Mlp,
    LinearSvm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::DecisionTree,
        ModelKind::LinearSvm,
        ModelKind::Mlp,
        ModelKind::LogReg,
        ModelKind::NaiveBayes,
    ];

    /// Short tag used on the command line and in the model format.
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::DecisionTree => "j48",
            ModelKind::NaiveBayes => "nb",
            ModelKind::LogReg => "logreg",
            ModelKind::Mlp => "mlp",
            ModelKind::LinearSvm => "svm",
        }
    }

    /// Human label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::DecisionTree => "J48",
            ModelKind::NaiveBayes => "Naive Bayes",
            ModelKind::LogReg => "Log-Reg",
            ModelKind::Mlp => "MLP",
            ModelKind::LinearSvm => "SVM",
        }
    }

    pub fn from_tag(tag: &str) -> Option<ModelKind> {
        Self::ALL.iter().copied().find(|k| k.tag() == tag)
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-kind hyperparameters; the variant determines the model kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    DecisionTree(TreeParams),
    NaiveBayes(NbParams),
    LogReg(LogRegParams),
    Mlp(MlpParams),
    LinearSvm(SvmParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::DecisionTree(_) => ModelKind::DecisionTree,
            ModelParams::NaiveBayes(_) => ModelKind::NaiveBayes,
            ModelParams::LogReg(_) => ModelKind::LogReg,
            ModelParams::Mlp(_) => ModelKind::Mlp,
            ModelParams::LinearSvm(_) => ModelKind::LinearSvm,
        }
    }

    pub fn defaults_for(kind: ModelKind) -> ModelParams {
        match kind {
            ModelKind::DecisionTree => ModelParams::DecisionTree(TreeParams::default()),
            ModelKind::NaiveBayes => ModelParams::NaiveBayes(NbParams::default()),
            ModelKind::LogReg => ModelParams::LogReg(LogRegParams::default()),
            ModelKind::Mlp => ModelParams::Mlp(MlpParams::default()),
            ModelKind::LinearSvm => ModelParams::LinearSvm(SvmParams::default()),
        }
    }
}

/// What to train: a kind with hyperparameters, and a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub params: ModelParams,
    pub seed: u64,
}

impl ModelSpec {
    pub fn with_defaults(kind: ModelKind, seed: u64) -> ModelSpec {
        ModelSpec {
            params: ModelParams::defaults_for(kind),
            seed,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match &self.params {
            ModelParams::DecisionTree(p) => {
                if p.min_leaf < 1 {
                    return bad(format!("min_leaf must be >= 1, got {}", p.min_leaf));
                }
            }
            ModelParams::NaiveBayes(p) => {
                if p.variance_floor.is_nan() || p.variance_floor <= 0.0 {
                    return bad(format!(
                        "variance_floor must be > 0, got {}",
                        p.variance_floor
                    ));
                }
            }
            ModelParams::LogReg(p) => {
                if p.learning_rate.is_nan() || p.learning_rate <= 0.0 {
                    return bad(format!(
                        "learning rate must be > 0, got {}",
                        p.learning_rate
                    ));
                }
                if p.l2 < 0.0 || !p.l2.is_finite() {
                    return bad(format!("l2 must be >= 0, got {}", p.l2));
                }
                if p.max_epochs < 1 {
                    return bad("max_epochs must be >= 1".into());
                }
                if p.tol < 0.0 {
                    return bad(format!("tol must be >= 0, got {}", p.tol));
                }
            }
            ModelParams::Mlp(p) => {
                if p.hidden_units == Some(0) {
                    return bad("hidden_units must be >= 1".into());
                }
                if p.learning_rate.is_nan() || p.learning_rate <= 0.0 {
                    return bad(format!(
                        "learning rate must be > 0, got {}",
                        p.learning_rate
                    ));
                }
                if p.momentum < 0.0 || p.momentum >= 1.0 {
                    return bad(format!("momentum must be in [0, 1), got {}", p.momentum));
                }
                if p.epochs < 1 {
                    return bad("epochs must be >= 1".into());
                }
            }
            ModelParams::LinearSvm(p) => {
                if p.c.is_nan() || p.c <= 0.0 {
                    return bad(format!("C must be > 0, got {}", p.c));
                }
                if p.epochs < 1 {
                    return bad("epochs must be >= 1".into());
                }
            }
        }
        Ok(())
    }
}

/// Per-feature min-max scaler fitted on training data. Degenerate columns
/// (min = max) map to 0; values outside the fitted range extrapolate
/// linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Normalizer {
    pub fn fit(rows: &[Vec<f64>]) -> Normalizer {
        let d = rows.first().map_or(0, |r| r.len());
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for row in rows {
            for ((lo, hi), v) in min.iter_mut().zip(max.iter_mut()).zip(row) {
                *lo = lo.min(*v);
                *hi = hi.max(*v);
            }
        }
        Normalizer { min, max }
    }

    pub fn len(&self) -> usize {
        self.min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(
                |(v, (lo, hi))| {
                    if hi > lo {
                        (v - lo) / (hi - lo)
                    } else {
                        0.0
                    }
                },
            )
            .collect()
    }

    pub fn apply_all(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.apply(r)).collect()
    }
}

/// A trained model variant.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierModel {
    DecisionTree(DecisionTree),
    GaussianNb(GaussianNb),
    LogReg(LogRegModel),
    Mlp(MlpModel),
    LinearSvm(SvmModel),
}

impl ClassifierModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ClassifierModel::DecisionTree(_) => ModelKind::DecisionTree,
            ClassifierModel::GaussianNb(_) => ModelKind::NaiveBayes,
            ClassifierModel::LogReg(_) => ModelKind::LogReg,
            ClassifierModel::Mlp(_) => ModelKind::Mlp,
            ClassifierModel::LinearSvm(_) => ModelKind::LinearSvm,
        }
    }

    fn uses_normalizer(&self) -> bool {
        matches!(
            self,
            ClassifierModel::LogReg(_) | ClassifierModel::Mlp(_) | ClassifierModel::LinearSvm(_)
        )
    }
}

/// A model plus the normalizer and schema it was trained with.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub model: ClassifierModel,
    pub normalizer: Normalizer,
    pub schema: Vec<String>,
}

/// Train a model on a dataset. Logistic regression, the MLP,
/// and the SVM require both classes; the tree and naive Bayes tolerate one
/// class and predict it constantly.
pub fn train(d: &Dataset, spec: &ModelSpec) -> Result<TrainedModel> {
    spec.validate()?;
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if d.n_features() == 0 {
        return Err(Error::InvalidConfig("dataset has no features".into()));
    }
    d.validate()?;

    let xs: Vec<Vec<f64>> = d.instances.iter().map(|i| i.features.clone()).collect();
    let ys: Vec<u8> = d.instances.iter().map(|i| i.label).collect();
    let normalizer = Normalizer::fit(&xs);

    let model = match &spec.params {
        ModelParams::DecisionTree(p) => ClassifierModel::DecisionTree(tree::fit(&xs, &ys, p)),
        ModelParams::NaiveBayes(p) => ClassifierModel::GaussianNb(naive_bayes::fit(&xs, &ys, p)),
        ModelParams::LogReg(p) => {
            if !d.both_classes_present() {
                return Err(Error::SingleClass);
            }
            ClassifierModel::LogReg(logreg::fit(&normalizer.apply_all(&xs), &ys, p))
        }
        ModelParams::Mlp(p) => {
            if !d.both_classes_present() {
                return Err(Error::SingleClass);
            }
            ClassifierModel::Mlp(mlp::fit(&normalizer.apply_all(&xs), &ys, p, spec.seed))
        }
        ModelParams::LinearSvm(p) => {
            if !d.both_classes_present() {
                return Err(Error::SingleClass);
            }
            ClassifierModel::LinearSvm(svm::fit(&normalizer.apply_all(&xs), &ys, p))
        }
    };

    Ok(TrainedModel {
        model,
        normalizer,
        schema: d.feature_names.clone(),
    })
}

impl TrainedModel {
    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.schema.len() {
            return Err(Error::SchemaMismatch {
                expected: self.schema.join(","),
                got: format!("{} values", x.len()),
            });
        }
        for (col, v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature { column: col });
            }
        }
        Ok(())
    }

    /// Probability-like score of class 1 in [0, 1].
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        let scaled;
        let input: &[f64] = if self.model.uses_normalizer() {
            scaled = self.normalizer.apply(x);
            &scaled
        } else {
            x
        };
        Ok(match &self.model {
            ClassifierModel::DecisionTree(m) => m.score(input),
            ClassifierModel::GaussianNb(m) => m.score(input),
            ClassifierModel::LogReg(m) => m.score(input),
            ClassifierModel::Mlp(m) => m.forward(input),
            ClassifierModel::LinearSvm(m) => m.score(input),
        })
    }

    /// 1 iff score >= threshold.
    pub fn classify(&self, x: &[f64], threshold: f64) -> Result<u8> {
        Ok(u8::from(self.score(x)? >= threshold))
    }
}

// ---------------------------------------------------------------------
// Flat text model format, version 1.

const FORMAT_HEADER: &str = "linkpred-model v1";

/// 17 significant digits: enough for an exact f64 round trip.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| fmt_f64(v))
        .collect::<Vec<_>>()
        .join(" ")
}

struct LineReader<R: Read> {
    lines: std::io::Lines<BufReader<R>>,
    lineno: usize,
}

impl<R: Read> LineReader<R> {
    fn new(r: R) -> Self {
        LineReader {
            lines: BufReader::new(r).lines(),
            lineno: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::ModelFormat {
            line: self.lineno,
            msg: msg.into(),
        }
    }

    fn next_line(&mut self) -> Result<String> {
        self.lineno += 1;
        match self.lines.next() {
            Some(line) => Ok(line?),
            None => Err(self.err("unexpected end of model file")),
        }
    }

    /// Next line, which must start with `key `; returns the remainder.
    fn field(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        line.strip_prefix(key)
            .and_then(|rest| {
                rest.strip_prefix(' ')
                    .or(Some(rest).filter(|r| r.is_empty()))
            })
            .map(|r| r.to_string())
            .ok_or_else(|| self.err(format!("expected {key:?}, got {line:?}")))
    }

    fn parse_f64(&self, s: &str) -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| self.err(format!("bad float {s:?}")))
    }

    fn parse_floats(&self, s: &str) -> Result<Vec<f64>> {
        s.split_whitespace().map(|t| self.parse_f64(t)).collect()
    }

    fn parse_usize(&self, s: &str) -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| self.err(format!("bad integer {s:?}")))
    }

    fn float_field(&mut self, key: &str) -> Result<f64> {
        let value = self.field(key)?;
        self.parse_f64(&value)
    }

    fn floats_field(&mut self, key: &str) -> Result<Vec<f64>> {
        let value = self.field(key)?;
        self.parse_floats(&value)
    }

    fn usize_field(&mut self, key: &str) -> Result<usize> {
        let value = self.field(key)?;
        self.parse_usize(&value)
    }
}

impl TrainedModel {
    /// Serialize to the versioned flat text format.
    pub fn save<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{FORMAT_HEADER}")?;
        writeln!(w, "kind {}", self.model.kind().tag())?;
        writeln!(w, "features {}", self.schema.len())?;
        for name in &self.schema {
            writeln!(w, "feature {name}")?;
        }
        writeln!(w, "normalizer_min {}", fmt_floats(&self.normalizer.min))?;
        writeln!(w, "normalizer_max {}", fmt_floats(&self.normalizer.max))?;
        match &self.model {
            ClassifierModel::DecisionTree(t) => {
                writeln!(w, "nodes {}", t.nodes.len())?;
                for node in &t.nodes {
                    match node {
                        tree::Node::Split {
                            feature,
                            threshold,
                            left,
                            right,
                        } => writeln!(w, "split {feature} {} {left} {right}", fmt_f64(*threshold))?,
                        tree::Node::Leaf { counts } => {
                            writeln!(w, "leaf {} {}", counts[0], counts[1])?
                        }
                    }
                }
            }
            ClassifierModel::GaussianNb(m) => {
                writeln!(w, "priors {}", fmt_floats(&m.priors))?;
                for class in 0..2 {
                    match &m.stats[class] {
                        Some(s) => {
                            writeln!(w, "class {class} present")?;
                            writeln!(w, "mean {}", fmt_floats(&s.mean))?;
                            writeln!(w, "var {}", fmt_floats(&s.var))?;
                        }
                        None => writeln!(w, "class {class} absent")?,
                    }
                }
            }
            ClassifierModel::LogReg(m) => {
                writeln!(w, "weights {}", fmt_floats(&m.weights))?;
                writeln!(w, "bias {}", fmt_f64(m.bias))?;
            }
            ClassifierModel::Mlp(m) => {
                writeln!(w, "hidden {}", m.w1.len())?;
                for row in &m.w1 {
                    writeln!(w, "w1 {}", fmt_floats(row))?;
                }
                writeln!(w, "b1 {}", fmt_floats(&m.b1))?;
                writeln!(w, "w2 {}", fmt_floats(&m.w2))?;
                writeln!(w, "b2 {}", fmt_f64(m.b2))?;
            }
            ClassifierModel::LinearSvm(m) => {
                writeln!(w, "weights {}", fmt_floats(&m.weights))?;
                writeln!(w, "bias {}", fmt_f64(m.bias))?;
                writeln!(
                    w,
                    "calibration {} {}",
                    fmt_f64(m.calibration.0),
                    fmt_f64(m.calibration.1)
                )?;
            }
        }
        writeln!(w, "end")
    }

    pub fn save_string(&self) -> String {
        let mut buf = Vec::new();
        self.save(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("model format is UTF-8")
    }

    /// Parse the flat text format back into a model.
    pub fn load<R: Read>(r: R) -> Result<TrainedModel> {
        let mut lr = LineReader::new(r);
        let header = lr.next_line()?;
        if header != FORMAT_HEADER {
            return Err(lr.err(format!("unknown format header {header:?}")));
        }
        let kind_tag = lr.field("kind")?;
        let kind = ModelKind::from_tag(&kind_tag)
            .ok_or_else(|| lr.err(format!("unknown model kind {kind_tag:?}")))?;
        let n_features = lr.usize_field("features")?;
        let mut schema = Vec::with_capacity(n_features);
        for _ in 0..n_features {
            schema.push(lr.field("feature")?);
        }
        let min = lr.floats_field("normalizer_min")?;
        let max = lr.floats_field("normalizer_max")?;
        if min.len() != n_features || max.len() != n_features {
            return Err(lr.err("normalizer arity does not match feature count"));
        }
        let normalizer = Normalizer { min, max };

        let model = match kind {
            ModelKind::DecisionTree => {
                let count = lr.usize_field("nodes")?;
                let mut nodes = Vec::with_capacity(count);
                for _ in 0..count {
                    let line = lr.next_line()?;
                    let mut parts = line.split_whitespace();
                    match parts.next() {
                        Some("split") => {
                            let toks: Vec<&str> = parts.collect();
                            if toks.len() != 4 {
                                return Err(lr.err(format!("bad split line {line:?}")));
                            }
                            nodes.push(tree::Node::Split {
                                feature: lr.parse_usize(toks[0])?,
                                threshold: lr.parse_f64(toks[1])?,
                                left: lr.parse_usize(toks[2])?,
                                right: lr.parse_usize(toks[3])?,
                            });
                        }
                        Some("leaf") => {
                            let toks: Vec<&str> = parts.collect();
                            if toks.len() != 2 {
                                return Err(lr.err(format!("bad leaf line {line:?}")));
                            }
                            nodes.push(tree::Node::Leaf {
                                counts: [lr.parse_usize(toks[0])?, lr.parse_usize(toks[1])?],
                            });
                        }
                        _ => return Err(lr.err(format!("bad tree node line {line:?}"))),
                    }
                }
                for node in &nodes {
                    if let tree::Node::Split {
                        feature,
                        left,
                        right,
                        ..
                    } = node
                    {
                        if *feature >= n_features || *left >= nodes.len() || *right >= nodes.len() {
                            return Err(lr.err("tree node index out of range"));
                        }
                    }
                }
                ClassifierModel::DecisionTree(DecisionTree { nodes })
            }
            ModelKind::NaiveBayes => {
                let priors = lr.floats_field("priors")?;
                if priors.len() != 2 {
                    return Err(lr.err("expected two priors"));
                }
                let mut stats: [Option<naive_bayes::ClassStats>; 2] = [None, None];
                for (class, slot) in stats.iter_mut().enumerate() {
                    let status = lr.field(&format!("class {class}"))?;
                    match status.as_str() {
                        "present" => {
                            let mean = lr.floats_field("mean")?;
                            let var = lr.floats_field("var")?;
                            if mean.len() != n_features || var.len() != n_features {
                                return Err(lr.err("class stats arity mismatch"));
                            }
                            *slot = Some(naive_bayes::ClassStats { mean, var });
                        }
                        "absent" => {}
                        other => return Err(lr.err(format!("bad class status {other:?}"))),
                    }
                }
                if stats.iter().all(Option::is_none) {
                    return Err(lr.err("naive Bayes model has no classes"));
                }
                ClassifierModel::GaussianNb(GaussianNb {
                    priors: [priors[0], priors[1]],
                    stats,
                })
            }
            ModelKind::LogReg => {
                let weights = lr.floats_field("weights")?;
                if weights.len() != n_features {
                    return Err(lr.err("weight arity mismatch"));
                }
                let bias = lr.float_field("bias")?;
                ClassifierModel::LogReg(LogRegModel { weights, bias })
            }
            ModelKind::Mlp => {
                let hidden = lr.usize_field("hidden")?;
                let mut w1 = Vec::with_capacity(hidden);
                for _ in 0..hidden {
                    let row = lr.floats_field("w1")?;
                    if row.len() != n_features {
                        return Err(lr.err("w1 arity mismatch"));
                    }
                    w1.push(row);
                }
                let b1 = lr.floats_field("b1")?;
                let w2 = lr.floats_field("w2")?;
                if b1.len() != hidden || w2.len() != hidden {
                    return Err(lr.err("hidden layer arity mismatch"));
                }
                let b2 = lr.float_field("b2")?;
                ClassifierModel::Mlp(MlpModel { w1, b1, w2, b2 })
            }
            ModelKind::LinearSvm => {
                let weights = lr.floats_field("weights")?;
                if weights.len() != n_features {
                    return Err(lr.err("weight arity mismatch"));
                }
                let bias = lr.float_field("bias")?;
                let cal = lr.floats_field("calibration")?;
                if cal.len() != 2 {
                    return Err(lr.err("calibration must have two values"));
                }
                ClassifierModel::LinearSvm(SvmModel {
                    weights,
                    bias,
                    calibration: (cal[0], cal[1]),
                })
            }
        };

        let end = lr.next_line()?;
        if end != "end" {
            return Err(lr.err(format!("expected trailing \"end\", got {end:?}")));
        }
        Ok(TrainedModel {
            model,
            normalizer,
            schema,
        })
    }
}
