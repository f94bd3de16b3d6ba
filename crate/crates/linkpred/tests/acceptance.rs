//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Every expected value here is produced by an oracle that is independent
//! of the implementation path it checks: breadth-first search for the
//! Dijkstra distances, brute-force set arithmetic for the pair features,
//! naive recounts for the metrics, the half-credit rank statistic for the
//! AUC, central finite differences for the gradients, and closed-form
//! Gaussian posteriors for naive Bayes.

use std::collections::{HashSet, VecDeque};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linkpred::arff;
use linkpred::classifiers::{
    self, logreg,
    mlp::{MlpLoss, MlpModel},
    LogRegParams, MlpParams, ModelKind, ModelParams, ModelSpec, SvmParams, TrainedModel,
};
use linkpred::dataset::{assemble, sample_pairs, stratified_kfold, Dataset, DatasetMeta, Instance};
use linkpred::eval::{
    accuracy, confusion, cross_validate, f_measure, precision, recall, roc_and_auc,
};
use linkpred::features::{
    distances_from, sum_of_neighbors, sum_of_papers, Distance, ExtractOptions, FeatureMask,
};
use linkpred::graph::{build_graph, AuthorId, CoauthorGraph};
use linkpred::ingest::{Publication, PublicationKind};

fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> CoauthorGraph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    CoauthorGraph::from_edges(n, &edges).unwrap()
}

/// Independent breadth-first-search oracle over the whole graph.
fn bfs_all(g: &CoauthorGraph, src: u32) -> Vec<Option<u32>> {
    let n = g.n() as usize;
    let mut dist: Vec<Option<u32>> = vec![None; n];
    let mut queue = VecDeque::new();
    dist[(src - 1) as usize] = Some(0);
    queue.push_back(src);
    while let Some(node) = queue.pop_front() {
        let d = dist[(node - 1) as usize].unwrap();
        for &nbr in g.neighbors(AuthorId(node)).unwrap() {
            if dist[(nbr - 1) as usize].is_none() {
                dist[(nbr - 1) as usize] = Some(d + 1);
                queue.push_back(nbr);
            }
        }
    }
    dist
}

#[test]
fn criterion_1_shortest_path_matches_bfs_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1);
    for round in 0..100 {
        let n = rng.gen_range(2..=200);
        let p = rng.gen_range(0.02..=0.3);
        let g = random_graph(&mut rng, n, p);
        for src in 1..=n {
            let oracle = bfs_all(&g, src);
            let got = distances_from(&g, AuthorId(src)).unwrap();
            for v in 0..n as usize {
                let expect = match oracle[v] {
                    Some(d) => Distance::Finite(d),
                    None => Distance::Unreachable,
                };
                assert_eq!(got[v], expect, "round {round} n={n} src={src} v={}", v + 1);
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "all-pairs comparison took {elapsed:?}, budget 30 s"
    );
    println!(
        "acceptance 1 (shortest-path BFS oracle, 100 graphs, {:.1?}): PASS",
        elapsed
    );
}

fn synthetic_papers(rng: &mut ChaCha8Rng, n_authors: usize, n_papers: usize) -> Vec<Publication> {
    let mut pubs: Vec<Publication> = Vec::with_capacity(n_papers + n_authors);
    let mut seen = vec![false; n_authors];
    fn push_paper(authors: Vec<usize>, pubs: &mut Vec<Publication>, seen: &mut [bool]) {
        for &a in &authors {
            seen[a] = true;
        }
        pubs.push(Publication {
            key: format!("k{}", pubs.len()),
            kind: PublicationKind::Article,
            title: "t".into(),
            year: Some(2015),
            authors: authors.iter().map(|a| format!("author {a}")).collect(),
        });
    }
    for _ in 0..n_papers {
        let size = rng.gen_range(2..=3);
        let mut authors: Vec<usize> = Vec::with_capacity(size);
        while authors.len() < size {
            // Quadratic skew: low indices publish much more.
            let t: f64 = rng.gen();
            let a = ((t * t) * n_authors as f64) as usize % n_authors;
            if !authors.contains(&a) {
                authors.push(a);
            }
        }
        push_paper(authors, &mut pubs, &mut seen);
    }
    // Every author appears on at least one paper.
    for a in 0..n_authors {
        if !seen[a] {
            let partner = rng.gen_range(0..50.min(n_authors));
            if partner == a {
                continue;
            }
            push_paper(vec![a, partner], &mut pubs, &mut seen);
        }
    }
    pubs
}

#[test]
fn criterion_2_feature_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD2);

    // The worked example: 3 and 4 neighbors, all distinct, sum 7.
    let mut edges = vec![(1, 3), (1, 4), (1, 5)];
    edges.extend([(2, 6), (2, 7), (2, 8), (2, 9)]);
    let g = CoauthorGraph::from_edges(9, &edges).unwrap();
    assert_eq!(sum_of_neighbors(&g, AuthorId(1), AuthorId(2)).unwrap(), 7);

    // 1000 random pairs against set-union and publication-recount oracles.
    let mut checked = 0;
    while checked < 1000 {
        let pubs = synthetic_papers(&mut rng, 60, 80);
        let (g, idx) = build_graph(&pubs);
        let n = g.n();
        for _ in 0..100 {
            let u = AuthorId(rng.gen_range(1..=n));
            let v = AuthorId(rng.gen_range(1..=n));
            if u == v {
                continue;
            }
            let a: HashSet<u32> = g.neighbors(u).unwrap().iter().copied().collect();
            let b: HashSet<u32> = g.neighbors(v).unwrap().iter().copied().collect();
            assert_eq!(
                sum_of_neighbors(&g, u, v).unwrap(),
                a.union(&b).count() as u32
            );

            let recount = |id: AuthorId| {
                let name = idx.name_of(id).unwrap();
                pubs.iter()
                    .filter(|p| p.authors.iter().any(|x| x == name))
                    .count() as u32
            };
            assert_eq!(sum_of_papers(&g, u, v).unwrap(), recount(u) + recount(v));
            checked += 1;
        }
    }
    println!("acceptance 2 (feature oracles, {checked} pairs + worked example): PASS");
}

#[test]
fn criterion_3_metric_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD3);

    // Accuracy / precision / recall / F1 against naive recounts.
    for _ in 0..1000 {
        let n = rng.gen_range(1..200);
        let preds: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
        let c = confusion(&preds, &labels).unwrap();

        let (mut tp, mut tn, mut fp, mut fn_) = (0u64, 0u64, 0u64, 0u64);
        for i in 0..n {
            match (preds[i], labels[i]) {
                (1, 1) => tp += 1,
                (0, 0) => tn += 1,
                (1, 0) => fp += 1,
                _ => fn_ += 1,
            }
        }
        assert_eq!(
            (c.true_pos, c.true_neg, c.false_pos, c.false_neg),
            (tp, tn, fp, fn_)
        );
        let total = (tp + tn + fp + fn_) as f64;
        assert!((accuracy(&c).unwrap() - (tp + tn) as f64 / total).abs() < 1e-12);
        if tp + fp > 0 {
            assert!((precision(&c).value - tp as f64 / (tp + fp) as f64).abs() < 1e-12);
        }
        if tp + fn_ > 0 {
            assert!((recall(&c).value - tp as f64 / (tp + fn_) as f64).abs() < 1e-12);
        }
        let p = precision(&c).value;
        let r = recall(&c).value;
        if p + r > 0.0 && tp + fp > 0 && tp + fn_ > 0 {
            assert!((f_measure(&c).value - 2.0 * p * r / (p + r)).abs() < 1e-12);
        }
    }

    // Trapezoidal AUC against the half-credit rank statistic, with ties.
    let mut auc_rounds = 0;
    while auc_rounds < 1000 {
        let n = rng.gen_range(2..150);
        let grid: u32 = rng.gen_range(2..12);
        let scores: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0..grid) as f64 / grid as f64)
            .collect();
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
        let pos = labels.iter().filter(|&&y| y == 1).count();
        if pos == 0 || pos == n {
            continue;
        }
        let (_, auc) = roc_and_auc(&scores, &labels).unwrap();
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for i in 0..n {
            for j in 0..n {
                if labels[i] == 1 && labels[j] == 0 {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
        }
        assert!(
            (auc - wins / pairs).abs() < 1e-9,
            "auc {auc} vs rank {}",
            wins / pairs
        );
        auc_rounds += 1;
    }
    println!("acceptance 3 (metric identities, 1000 confusion vectors + 1000 AUC sets): PASS");
}

#[test]
fn criterion_4_gradient_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD4);
    let step = 1e-5;
    let check = |analytic: f64, numeric: f64, what: &str| {
        let denom = analytic.abs().max(numeric.abs()).max(1e-8);
        assert!(
            ((analytic - numeric) / denom).abs() <= 1e-4,
            "{what}: analytic {analytic} vs numeric {numeric}"
        );
    };

    for case in 0..20 {
        let n = rng.gen_range(3..20);
        let d = rng.gen_range(1..4);
        let xs: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let ys: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
        let weights: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bias = rng.gen_range(-1.0..1.0);
        let l2 = rng.gen_range(0.0..0.1);

        let (gw, gb) = logreg::objective_gradient(&weights, bias, &xs, &ys, l2);
        for j in 0..d {
            let mut wp = weights.clone();
            let mut wm = weights.clone();
            wp[j] += step;
            wm[j] -= step;
            let numeric = (logreg::objective(&wp, bias, &xs, &ys, l2)
                - logreg::objective(&wm, bias, &xs, &ys, l2))
                / (2.0 * step);
            check(gw[j], numeric, &format!("logreg case {case} w[{j}]"));
        }
        let numeric_b = (logreg::objective(&weights, bias + step, &xs, &ys, l2)
            - logreg::objective(&weights, bias - step, &xs, &ys, l2))
            / (2.0 * step);
        check(gb, numeric_b, &format!("logreg case {case} bias"));
    }

    for case in 0..20 {
        let d = rng.gen_range(1..4);
        let h = rng.gen_range(1..4);
        let model = MlpModel {
            w1: (0..h)
                .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect(),
            b1: (0..h).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            w2: (0..h).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            b2: rng.gen_range(-1.0..1.0),
        };
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let y = f64::from(rng.gen_range(0..2) as u8);
        let loss = MlpLoss::SquaredError;
        let g = model.sample_gradient(&x, y, loss);
        for j in 0..h {
            for k in 0..d {
                let mut plus = model.clone();
                let mut minus = model.clone();
                plus.w1[j][k] += step;
                minus.w1[j][k] -= step;
                check(
                    g.w1[j][k],
                    (plus.sample_loss(&x, y, loss) - minus.sample_loss(&x, y, loss)) / (2.0 * step),
                    &format!("mlp case {case} w1[{j}][{k}]"),
                );
            }
            let mut plus = model.clone();
            let mut minus = model.clone();
            plus.w2[j] += step;
            minus.w2[j] -= step;
            check(
                g.w2[j],
                (plus.sample_loss(&x, y, loss) - minus.sample_loss(&x, y, loss)) / (2.0 * step),
                &format!("mlp case {case} w2[{j}]"),
            );
            let mut plus = model.clone();
            let mut minus = model.clone();
            plus.b1[j] += step;
            minus.b1[j] -= step;
            check(
                g.b1[j],
                (plus.sample_loss(&x, y, loss) - minus.sample_loss(&x, y, loss)) / (2.0 * step),
                &format!("mlp case {case} b1[{j}]"),
            );
        }
        let mut plus = model.clone();
        let mut minus = model.clone();
        plus.b2 += step;
        minus.b2 -= step;
        check(
            g.b2,
            (plus.sample_loss(&x, y, loss) - minus.sample_loss(&x, y, loss)) / (2.0 * step),
            &format!("mlp case {case} b2"),
        );
    }
    println!("acceptance 4 (gradient checks, 20 logreg + 20 mlp cases): PASS");
}

#[test]
fn criterion_5_naive_bayes_hand_oracle() {
    // Fixed 4-instance dataset: class 0 at x = 1, 3; class 1 at x = 5, 9.
    // ML moments: mean0 = 2, var0 = 1; mean1 = 7, var1 = 4; priors 1/2.
    let d = Dataset {
        feature_names: vec!["x".into()],
        instances: [(1.0, 0u8), (3.0, 0), (5.0, 1), (9.0, 1)]
            .iter()
            .map(|&(x, y)| Instance {
                pair: None,
                features: vec![x],
                label: y,
            })
            .collect(),
        meta: DatasetMeta::default(),
    };
    let trained =
        classifiers::train(&d, &ModelSpec::with_defaults(ModelKind::NaiveBayes, 0)).unwrap();

    // Closed form: posterior1(x) = q1 / (q0 + q1) with
    //   q0 = 1/2 * exp(-(x-2)^2 / 2)  / sqrt(2 pi)
    //   q1 = 1/2 * exp(-(x-7)^2 / 8)  / sqrt(8 pi)
    let pi = std::f64::consts::PI;
    let posterior = |x: f64| {
        let q0 = 0.5 * (-(x - 2.0) * (x - 2.0) / 2.0).exp() / (2.0 * pi).sqrt();
        let q1 = 0.5 * (-(x - 7.0) * (x - 7.0) / 8.0).exp() / (8.0 * pi).sqrt();
        q1 / (q0 + q1)
    };
    for x in [-2.0, 0.0, 1.0, 2.0, 3.5, 4.0, 5.0, 7.0, 9.0, 11.0] {
        let got = trained.score(&[x]).unwrap();
        let expect = posterior(x);
        assert!(
            (got - expect).abs() < 1e-12,
            "x = {x}: got {got}, hand value {expect}"
        );
    }
    println!("acceptance 5 (naive Bayes hand-derived posteriors at 1e-12): PASS");
}

#[test]
fn criterion_6_leakage_reproduction() {
    for seed in [1u64, 2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pubs = synthetic_papers(&mut rng, 150, 220);
        let (g, _) = build_graph(&pubs);
        let sample = sample_pairs(&g, 1.0, None, seed).unwrap();
        let pairs: Vec<(AuthorId, AuthorId)> = sample.pairs.iter().map(|p| (p.0, p.1)).collect();
        // The paper's configuration: sum_of_papers among the features,
        // labels from the same graph, direct edges present.
        let d = assemble(
            &g,
            &pairs,
            FeatureMask::ALL,
            ExtractOptions::default(),
            DatasetMeta::default(),
        )
        .unwrap();

        assert!(
            !d.meta.leakage.is_empty(),
            "seed {seed}: no leakage warning fired"
        );
        assert!(
            d.meta
                .leakage
                .iter()
                .any(|w| w.feature == "shortest_distance"),
            "seed {seed}: warnings {:?}",
            d.meta.leakage
        );

        let trained =
            classifiers::train(&d, &ModelSpec::with_defaults(ModelKind::DecisionTree, seed))
                .unwrap();
        let used = match &trained.model {
            classifiers::ClassifierModel::DecisionTree(t) => t.used_features(),
            other => panic!("unexpected model {other:?}"),
        };
        assert_eq!(
            used.len(),
            1,
            "seed {seed}: tree used features {used:?}, expected a single one"
        );
        // Perfect training separation through that single feature.
        let correct = d
            .instances
            .iter()
            .filter(|i| trained.classify(&i.features, 0.5).unwrap() == i.label)
            .count();
        assert_eq!(correct, d.len(), "seed {seed}");
    }
    println!("acceptance 6 (leakage warning + single-feature tree on 3 random graphs): PASS");
}

#[test]
fn criterion_7_single_feature_dominance() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD7);
    let pubs = synthetic_papers(&mut rng, 2000, 1150);
    let (g, _) = build_graph(&pubs);
    assert_eq!(g.n(), 2000, "generator must cover all authors");

    let sample = sample_pairs(&g, 1.0, None, 7).unwrap();
    assert!(sample.warnings.is_empty());
    let pairs: Vec<(AuthorId, AuthorId)> = sample.pairs.iter().map(|p| (p.0, p.1)).collect();

    let distance_data = assemble(
        &g,
        &pairs,
        FeatureMask::DISTANCE_ONLY,
        ExtractOptions::default(),
        DatasetMeta::default(),
    )
    .unwrap();
    let neighbors_data = assemble(
        &g,
        &pairs,
        FeatureMask::NEIGHBORS_ONLY,
        ExtractOptions::default(),
        DatasetMeta::default(),
    )
    .unwrap();

    for kind in ModelKind::ALL {
        let spec = ModelSpec::with_defaults(kind, 42);
        let on_distance = cross_validate(&distance_data, &spec, 10, 99).unwrap();
        let on_neighbors = cross_validate(&neighbors_data, &spec, 10, 99).unwrap();
        assert!(
            on_distance.accuracy >= 0.95,
            "{kind:?}: distance accuracy {}",
            on_distance.accuracy
        );
        assert!(
            on_distance.auc >= 0.95,
            "{kind:?}: distance AUC {}",
            on_distance.auc
        );
        assert!(
            on_neighbors.accuracy < on_distance.accuracy,
            "{kind:?}: neighbors accuracy {} not below distance {}",
            on_neighbors.accuracy,
            on_distance.accuracy
        );
        assert!(
            on_neighbors.auc < on_distance.auc,
            "{kind:?}: neighbors AUC {} not below distance {}",
            on_neighbors.auc,
            on_distance.auc
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "dominance run took {elapsed:?}, budget 2 min"
    );
    println!(
        "acceptance 7 (distance dominates neighbors for all 5 models, {:.1?}): PASS",
        elapsed
    );
}

#[test]
fn criterion_9_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD9);

    // ARFF write -> read identity, 1000 generated datasets.
    for case in 0..1000 {
        let nf = rng.gen_range(1..4);
        let n = rng.gen_range(0..25);
        let d = Dataset {
            feature_names: (0..nf).map(|i| format!("f{i}")).collect(),
            instances: (0..n)
                .map(|_| Instance {
                    pair: None,
                    features: (0..nf)
                        .map(|_| match rng.gen_range(0..3) {
                            0 => rng.gen_range(-100..100) as f64,
                            1 => rng.gen_range(-1e6..1e6),
                            _ => rng.gen::<f64>() * 10f64.powi(rng.gen_range(-300..300)),
                        })
                        .collect(),
                    label: rng.gen_range(0..2) as u8,
                })
                .collect(),
            meta: DatasetMeta {
                name: "case".into(),
                ..DatasetMeta::default()
            },
        };
        let text = arff::write_arff_string(&d, "case");
        let back = arff::read_arff(text.as_bytes()).unwrap();
        assert_eq!(back.feature_names, d.feature_names, "case {case}");
        assert_eq!(back.instances, d.instances, "case {case}");
    }

    // Model save -> load identity, 1000 models across the five kinds.
    let probes: Vec<Vec<f64>> = (0..12)
        .map(|_| vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
        .collect();
    for case in 0..1000 {
        let kind = ModelKind::ALL[case % 5];
        let n = rng.gen_range(6..16);
        let d = Dataset {
            feature_names: vec!["a".into(), "b".into()],
            instances: (0..n)
                .map(|i| {
                    let y = (i % 2) as u8;
                    Instance {
                        pair: None,
                        features: vec![
                            f64::from(y) * 2.0 + rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                        ],
                        label: y,
                    }
                })
                .collect(),
            meta: DatasetMeta::default(),
        };
        let params = match kind {
            ModelKind::Mlp => ModelParams::Mlp(MlpParams {
                epochs: 3,
                ..MlpParams::default()
            }),
            ModelKind::LogReg => ModelParams::LogReg(LogRegParams {
                max_epochs: 40,
                ..LogRegParams::default()
            }),
            ModelKind::LinearSvm => ModelParams::LinearSvm(SvmParams {
                epochs: 10,
                ..SvmParams::default()
            }),
            other => ModelParams::defaults_for(other),
        };
        let trained = classifiers::train(
            &d,
            &ModelSpec {
                params,
                seed: case as u64,
            },
        )
        .unwrap();
        let text = trained.save_string();
        let loaded = TrainedModel::load(text.as_bytes()).unwrap();
        assert_eq!(trained, loaded, "case {case} ({kind:?})");
        for x in &probes {
            assert_eq!(
                trained.score(x).unwrap().to_bits(),
                loaded.score(x).unwrap().to_bits(),
                "case {case} ({kind:?})"
            );
        }
    }
    println!("acceptance 9 (ARFF and model round-trips, 1000 cases each): PASS");
}

#[test]
fn criterion_10_stratified_kfold_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDA);
    for case in 0..100 {
        let k = rng.gen_range(2..=10);
        let n0 = rng.gen_range(k..k * 20);
        let n1 = rng.gen_range(k..k * 20);
        let d = Dataset {
            feature_names: vec!["x".into()],
            instances: (0..n0 + n1)
                .map(|i| Instance {
                    pair: None,
                    features: vec![i as f64],
                    label: u8::from(i >= n0),
                })
                .collect(),
            meta: DatasetMeta::default(),
        };
        let folds = stratified_kfold(&d, k, case as u64).unwrap();
        assert_eq!(folds.len(), k);

        let mut seen = HashSet::new();
        for (train, test) in &folds {
            for &i in test {
                assert!(seen.insert(i), "case {case}: index {i} in two folds");
            }
            assert_eq!(train.len() + test.len(), n0 + n1);
            let ones = test.iter().filter(|&&i| d.instances[i].label == 1).count();
            let zeros = test.len() - ones;
            let expected_ones = n1 as f64 * test.len() as f64 / (n0 + n1) as f64;
            let expected_zeros = n0 as f64 * test.len() as f64 / (n0 + n1) as f64;
            assert!(
                (ones as f64 - expected_ones).abs() <= 1.0 + 1e-9,
                "case {case}: {ones} ones, proportional share {expected_ones}"
            );
            assert!(
                (zeros as f64 - expected_zeros).abs() <= 1.0 + 1e-9,
                "case {case}: {zeros} zeros, proportional share {expected_zeros}"
            );
        }
        assert_eq!(seen.len(), n0 + n1, "case {case}: folds must cover all");
    }
    println!("acceptance 10 (stratified k-fold contract on 100 datasets): PASS");
}
