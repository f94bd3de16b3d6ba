//! Labeled instance sets: pair selection, labeling, temporal splits,
//! stratified k-fold partitions, and leakage diagnostics.
//!
//! Positive pairs are the graph's edges; negatives are uniformly sampled
//! non-adjacent pairs (seeded). Labels always come from adjacency in the
//! labeling graph: 1 iff the pair is an edge. Assembly encodes unreachable
//! distances as (longest finite distance in the split) + 1 and records the
//! sentinel in the dataset metadata.

use std::collections::HashSet;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::{self, Distance, ExtractOptions, FeatureMask};
use crate::graph::{AuthorId, CoauthorGraph};
use crate::ingest::{filter_publications, Publication};

/// Train/test year ranges, both inclusive, non-overlapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_years: (i32, i32),
    pub test_years: (i32, i32),
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        let (tl, th) = self.train_years;
        let (sl, sh) = self.test_years;
        if tl > th {
            return Err(Error::InvalidYearRange { lo: tl, hi: th });
        }
        if sl > sh {
            return Err(Error::InvalidYearRange { lo: sl, hi: sh });
        }
        if tl <= sh && sl <= th {
            return Err(Error::InvalidConfig(format!(
                "train years {tl}..={th} overlap test years {sl}..={sh}"
            )));
        }
        Ok(())
    }
}

/// Split publications into disjoint train/test sets by year.
pub fn temporal_split(
    pubs: &[Publication],
    spec: &SplitSpec,
) -> Result<(Vec<Publication>, Vec<Publication>)> {
    spec.validate()?;
    let train = filter_publications(pubs, spec.train_years.0, spec.train_years.1)?;
    let test = filter_publications(pubs, spec.test_years.0, spec.test_years.1)?;
    Ok((train, test))
}

/// A labeled pair prior to feature extraction.
pub type LabeledPair = (AuthorId, AuthorId, u8);

/// Output of [`sample_pairs`].
#[derive(Debug, Clone)]
pub struct PairSample {
    pub pairs: Vec<LabeledPair>,
    pub warnings: Vec<String>,
}

/// Enumerating every candidate non-edge is exact but quadratic; beyond this
/// many unordered pairs, rejection sampling takes over.
const ENUMERATE_PAIR_LIMIT: u64 = 2_000_000;

/// Is there a path from u to v of length <= d?
fn within_distance(g: &CoauthorGraph, u: AuthorId, v: AuthorId, d: u32) -> bool {
    match features::shortest_distance(g, u, v, false) {
        Ok(Distance::Finite(dist)) => dist <= d,
        _ => false,
    }
}

/// Select labeled pairs: every edge as a positive, plus `ratio` negatives
/// per positive drawn uniformly from non-adjacent pairs (optionally only
/// those within `max_neg_distance` hops). Deterministic given the seed.
pub fn sample_pairs(
    g: &CoauthorGraph,
    ratio: f64,
    max_neg_distance: Option<u32>,
    seed: u64,
) -> Result<PairSample> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "negative ratio must be positive, got {ratio}"
        )));
    }
    let n = g.n() as u64;
    let mut pairs: Vec<LabeledPair> = g.edges().map(|(u, v)| (u, v, 1u8)).collect();
    if pairs.is_empty() {
        return Err(Error::NoPositives);
    }
    let positives = pairs.len();
    let total_pairs = n * n.saturating_sub(1) / 2;
    let non_edges = total_pairs - positives as u64;
    let mut requested = (ratio * positives as f64).round() as usize;
    let mut warnings = Vec::new();
    // More negatives than non-edges exist can never be satisfied; cap the
    // quota up front so rejection sampling terminates promptly.
    if requested as u64 > non_edges {
        warnings.push(format!(
            "requested {requested} negative pairs but only {non_edges} non-adjacent pairs exist; truncating"
        ));
        requested = non_edges as usize;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let accepts = |u: AuthorId, v: AuthorId| match max_neg_distance {
        Some(d) => within_distance(g, u, v, d),
        None => true,
    };

    let mut negatives: Vec<(AuthorId, AuthorId)> = Vec::with_capacity(requested);
    if total_pairs <= ENUMERATE_PAIR_LIMIT {
        let mut candidates: Vec<(AuthorId, AuthorId)> = Vec::new();
        for u in 1..=g.n() {
            for v in (u + 1)..=g.n() {
                let (u, v) = (AuthorId(u), AuthorId(v));
                if !g.contains_edge(u, v)? {
                    candidates.push((u, v));
                }
            }
        }
        // Shuffle before the (possibly expensive) distance filter so only
        // about `requested` candidates ever get checked.
        candidates.shuffle(&mut rng);
        for (u, v) in candidates {
            if negatives.len() == requested {
                break;
            }
            if accepts(u, v) {
                negatives.push((u, v));
            }
        }
        if negatives.len() < requested {
            warnings.push(format!(
                "requested {requested} negative pairs but only {} are available; truncating",
                negatives.len()
            ));
        }
    } else {
        let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(requested);
        let budget = 100 * requested as u64 + 10_000;
        let mut attempts = 0u64;
        while negatives.len() < requested && attempts < budget {
            attempts += 1;
            let a = rng.gen_range(1..=g.n());
            let b = rng.gen_range(1..=g.n());
            if a == b {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if chosen.contains(&(lo, hi)) {
                continue;
            }
            let (u, v) = (AuthorId(lo), AuthorId(hi));
            if g.contains_edge(u, v)? || !accepts(u, v) {
                continue;
            }
            chosen.insert((lo, hi));
            negatives.push((u, v));
        }
        if negatives.len() < requested {
            warnings.push(format!(
                "requested {requested} negative pairs but sampling found {} within budget; truncating",
                negatives.len()
            ));
        }
    }

    pairs.extend(negatives.into_iter().map(|(u, v)| (u, v, 0u8)));
    Ok(PairSample { pairs, warnings })
}

/// One labeled feature vector. `pair` is present for assembled datasets and
/// absent for datasets read back from ARFF.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub pair: Option<(AuthorId, AuthorId)>,
    pub features: Vec<f64>,
    pub label: u8,
}

/// A feature whose values deterministically encode the class on a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakageWarning {
    pub feature: String,
    pub pattern: String,
}

impl std::fmt::Display for LeakageWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "feature '{}' determines the class label on this dataset ({})",
            self.feature, self.pattern
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetMeta {
    pub name: String,
    pub split: Option<String>,
    pub year_range: Option<(i32, i32)>,
    /// Numeric stand-in used for unreachable distances, when any occurred.
    pub unreachable_sentinel: Option<f64>,
    pub seed: Option<u64>,
    pub neg_ratio: Option<f64>,
    pub leakage: Vec<LeakageWarning>,
}

/// Schema'd collection of labeled instances. The class attribute is
/// implicit and binary {0,1}, always last when serialized.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub instances: Vec<Instance>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// (class-0 count, class-1 count).
    pub fn class_counts(&self) -> (usize, usize) {
        let ones = self.instances.iter().filter(|i| i.label == 1).count();
        (self.instances.len() - ones, ones)
    }

    pub fn both_classes_present(&self) -> bool {
        let (n0, n1) = self.class_counts();
        n0 > 0 && n1 > 0
    }

    /// All instances conform to the schema arity and are finite.
    pub fn validate(&self) -> Result<()> {
        for inst in &self.instances {
            if inst.features.len() != self.feature_names.len() {
                return Err(Error::SchemaMismatch {
                    expected: self.feature_names.join(","),
                    got: format!("{} values", inst.features.len()),
                });
            }
            for (col, x) in inst.features.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteFeature { column: col });
                }
            }
        }
        Ok(())
    }

    /// Comma-separated export: header row is the schema, one instance per
    /// line, floats in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for name in &self.feature_names {
            write!(w, "{name},")?;
        }
        writeln!(w, "class")?;
        for inst in &self.instances {
            for x in &inst.features {
                write!(w, "{x},")?;
            }
            writeln!(w, "{}", inst.label)?;
        }
        Ok(())
    }
}

/// Assemble a dataset from pairs: features from `feature_graph`, labels by
/// adjacency in `label_graph`. The two graphs coincide for the standard
/// same-graph protocol; passing the later period's graph as `label_graph`
/// gives the experimental future-link labeling.
pub fn assemble_with_labels(
    feature_graph: &CoauthorGraph,
    label_graph: &CoauthorGraph,
    pairs: &[(AuthorId, AuthorId)],
    mask: FeatureMask,
    opts: ExtractOptions,
    mut meta: DatasetMeta,
) -> Result<Dataset> {
    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(pairs.len());
    for &(u, v) in pairs {
        let key = if u <= v {
            (u.get(), v.get())
        } else {
            (v.get(), u.get())
        };
        if !seen.insert(key) {
            return Err(Error::InvalidConfig(format!(
                "duplicate pair ({}, {})",
                key.0, key.1
            )));
        }
    }

    let raw = features::extract(feature_graph, pairs, mask, opts)?;

    let max_finite = raw
        .iter()
        .filter_map(|r| r.distance.and_then(Distance::finite))
        .max();
    let any_unreachable = raw
        .iter()
        .any(|r| matches!(r.distance, Some(Distance::Unreachable)));
    let sentinel = (max_finite.unwrap_or(0) + 1) as f64;
    meta.unreachable_sentinel = (mask.distance && any_unreachable).then_some(sentinel);

    let mut instances = Vec::with_capacity(pairs.len());
    for (row, &(u, v)) in raw.iter().zip(pairs) {
        let mut values = Vec::with_capacity(mask.count());
        if mask.distance {
            values.push(match row.distance.unwrap() {
                Distance::Finite(d) => d as f64,
                Distance::Unreachable => sentinel,
            });
        }
        if mask.neighbors {
            values.push(row.neighbors.unwrap() as f64);
        }
        if mask.papers {
            values.push(row.papers.unwrap() as f64);
        }
        let label = u8::from(label_graph.contains_edge(u, v)?);
        instances.push(Instance {
            pair: Some((u, v)),
            features: values,
            label,
        });
    }

    let mut dataset = Dataset {
        feature_names: mask.active_names().iter().map(|s| s.to_string()).collect(),
        instances,
        meta,
    };
    dataset.meta.leakage = leakage_check(&dataset);
    Ok(dataset)
}

/// Same-graph assembly: features and labels both from `g`.
pub fn assemble(
    g: &CoauthorGraph,
    pairs: &[(AuthorId, AuthorId)],
    mask: FeatureMask,
    opts: ExtractOptions,
    meta: DatasetMeta,
) -> Result<Dataset> {
    assemble_with_labels(g, g, pairs, mask, opts, meta)
}

/// Detect features that are a deterministic function of the class label:
/// no observed feature value appears with both labels. The two classic
/// patterns (value > 0 ⇔ class 1, value = 1 ⇔ class 1) are named in the
/// warning; anything else reports as a general value-to-class mapping.
/// Datasets with a single class are vacuous and produce no warnings.
pub fn leakage_check(d: &Dataset) -> Vec<LeakageWarning> {
    if !d.both_classes_present() {
        return Vec::new();
    }
    let mut warnings = Vec::new();
    for (col, name) in d.feature_names.iter().enumerate() {
        let mut value_labels: std::collections::HashMap<u64, (bool, bool)> =
            std::collections::HashMap::new();
        let mut positive_iff_one = true;
        let mut one_iff_one = true;
        for inst in &d.instances {
            let x = inst.features[col];
            let entry = value_labels.entry(x.to_bits()).or_insert((false, false));
            if inst.label == 1 {
                entry.1 = true;
            } else {
                entry.0 = true;
            }
            positive_iff_one &= (x > 0.0) == (inst.label == 1);
            one_iff_one &= (x == 1.0) == (inst.label == 1);
        }
        let deterministic = value_labels.values().all(|&(n0, n1)| !(n0 && n1));
        if deterministic {
            let pattern = if positive_iff_one {
                "value > 0 exactly for class 1".to_string()
            } else if one_iff_one {
                "value = 1 exactly for class 1".to_string()
            } else {
                "every observed value maps to a single class".to_string()
            };
            warnings.push(LeakageWarning {
                feature: name.clone(),
                pattern,
            });
        }
    }
    warnings
}

/// Stratified k-fold partitions: `k` (train, test) index pairs. Test folds
/// are disjoint, cover every index, and hold each class's instances in
/// near-equal shares (floor/ceil of count/k). Seeded and deterministic.
pub fn stratified_kfold(d: &Dataset, k: usize, seed: u64) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!(
            "k must be at least 2, got {k}"
        )));
    }
    if d.instances.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, inst) in d.instances.iter().enumerate() {
        by_class[usize::from(inst.label == 1)].push(i);
    }
    for (class, members) in by_class.iter().enumerate() {
        if !members.is_empty() && members.len() < k {
            return Err(Error::ClassTooSmall {
                class: class as u8,
                count: members.len(),
                k,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for members in by_class.iter_mut() {
        if members.is_empty() {
            continue;
        }
        members.shuffle(&mut rng);
        let base = members.len() / k;
        let remainder = members.len() % k;
        // Hand the class's surplus instances to the currently smallest
        // folds so fold sizes stay even across classes.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&f| (folds[f].len(), f));
        let mut counts = vec![base; k];
        for &f in order.iter().take(remainder) {
            counts[f] += 1;
        }
        let mut it = members.iter().copied();
        for (f, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                folds[f].push(it.next().unwrap());
            }
        }
    }

    let all: Vec<usize> = (0..d.instances.len()).collect();
    let mut out = Vec::with_capacity(k);
    for fold in &folds {
        let mut test = fold.clone();
        test.sort_unstable();
        let test_set: HashSet<usize> = test.iter().copied().collect();
        let train: Vec<usize> = all
            .iter()
            .copied()
            .filter(|i| !test_set.contains(i))
            .collect();
        out.push((train, test));
    }
    Ok(out)
}
