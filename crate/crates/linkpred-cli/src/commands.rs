//! Command implementations. Each command validates its configuration,
//! writes every artifact under the output directory, and finishes with a
//! resolved-config echo plus a manifest of content hashes. Identical
//! inputs and seeds produce byte-identical outputs.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use linkpred::arff;
use linkpred::classifiers::{self, ModelKind, ModelSpec};
use linkpred::dataset::{assemble, sample_pairs, temporal_split, Dataset, DatasetMeta, SplitSpec};
use linkpred::eval::{cross_validate, evaluate_holdout, report::EvalReport, report::ReportRow};
use linkpred::features::{ExtractOptions, FeatureMask};
use linkpred::graph::{build_graph, AuthorId, CoauthorGraph};
use linkpred::ingest::{parse_stream, IngestConfig, IngestStats, Publication, PublicationKind};

use crate::output::OutDir;

#[derive(Clone)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

pub fn mask_name(mask: FeatureMask) -> String {
    let mut parts = Vec::new();
    if mask.distance {
        parts.push("dist");
    }
    if mask.neighbors {
        parts.push("neighbors");
    }
    if mask.papers {
        parts.push("papers");
    }
    parts.join("_")
}

fn kinds_json(kinds: &[PublicationKind]) -> Value {
    Value::Array(
        kinds
            .iter()
            .map(|k| Value::String(k.as_str().to_string()))
            .collect(),
    )
}

fn models_json(models: &[ModelKind]) -> Value {
    Value::Array(
        models
            .iter()
            .map(|m| Value::String(m.tag().to_string()))
            .collect(),
    )
}

fn stats_json(stats: &IngestStats) -> Value {
    json!({
        "records_read": stats.records_read,
        "records_skipped": stats.records_skipped,
        "records_filtered": stats.records_filtered,
        "lines_consumed": stats.lines_consumed,
        "missing_year": stats.missing_year,
        "unknown_entities": stats.unknown_entities,
    })
}

pub fn read_publications(
    input: &Path,
    max_lines: Option<u64>,
    kinds: &[PublicationKind],
    years: Option<(i32, i32)>,
) -> Result<(Vec<Publication>, IngestStats)> {
    let file = File::open(input)
        .with_context(|| format!("ingest: cannot open input {}", input.display()))?;
    let cfg = IngestConfig {
        max_lines,
        year_lo: years.map(|(lo, _)| lo),
        year_hi: years.map(|(_, hi)| hi),
        kinds: Some(kinds.to_vec()),
        on_malformed: Default::default(),
    };
    let mut stream =
        parse_stream(BufReader::new(file), cfg).context("ingest: opening DBLP stream")?;
    let mut pubs = Vec::new();
    for record in &mut stream {
        pubs.push(record.context("ingest: parsing records")?);
    }
    Ok((pubs, stream.stats()))
}

pub struct IngestCmd<'a> {
    pub input: &'a Path,
    pub max_lines: Option<u64>,
    pub kinds: Vec<PublicationKind>,
    pub years: Option<(i32, i32)>,
    pub out: &'a Path,
}

pub fn cmd_ingest(cmd: IngestCmd) -> Result<()> {
    let mut out = OutDir::create(cmd.out)?;
    let (pubs, stats) = read_publications(cmd.input, cmd.max_lines, &cmd.kinds, cmd.years)?;

    let mut dump = String::new();
    for p in &pubs {
        let line = json!({
            "key": p.key,
            "kind": p.kind.as_str(),
            "title": p.title,
            "year": p.year,
            "authors": p.authors,
        });
        dump.push_str(&line.to_string());
        dump.push('\n');
    }
    out.write("records.jsonl", dump.as_bytes())?;
    out.write(
        "ingest_stats.json",
        &serde_json::to_vec_pretty(&stats_json(&stats))?,
    )?;
    if stats.unknown_entities > 0 {
        out.warn(format!(
            "{} unknown entity references were kept as literal text",
            stats.unknown_entities
        ));
    }
    println!(
        "ingest: {} records ({} skipped, {} filtered, {} lines)",
        stats.records_read, stats.records_skipped, stats.records_filtered, stats.lines_consumed
    );
    out.finish(
        "ingest",
        json!({
            "input": cmd.input.display().to_string(),
            "max_lines": cmd.max_lines,
            "kinds": kinds_json(&cmd.kinds),
            "years": cmd.years.map(|(lo, hi)| json!([lo, hi])),
            "stats": stats_json(&stats),
        }),
    )
}

pub struct BuildCmd<'a> {
    pub input: &'a Path,
    pub max_lines: Option<u64>,
    pub kinds: Vec<PublicationKind>,
    pub years: Option<(i32, i32)>,
    pub out: &'a Path,
}

pub fn cmd_build(cmd: BuildCmd) -> Result<()> {
    let mut out = OutDir::create(cmd.out)?;
    let (pubs, stats) = read_publications(cmd.input, cmd.max_lines, &cmd.kinds, cmd.years)?;
    let usable: Vec<Publication> = pubs.into_iter().filter(|p| !p.authors.is_empty()).collect();
    let (graph, index) = build_graph(&usable);

    let mut edges = Vec::new();
    graph
        .write_edge_list(&mut edges)
        .context("graph: edge list")?;
    out.write("edges.txt", &edges)?;
    let mut nodes = Vec::new();
    graph
        .write_node_table(&index, &mut nodes)
        .context("graph: node table")?;
    out.write("nodes.tsv", &nodes)?;
    let graph_stats = json!({
        "authors": graph.n(),
        "edges": graph.edge_count(),
        "publications": usable.len(),
    });
    out.write(
        "graph_stats.json",
        &serde_json::to_vec_pretty(&graph_stats)?,
    )?;
    println!(
        "build: {} authors, {} edges from {} publications",
        graph.n(),
        graph.edge_count(),
        usable.len()
    );
    out.finish(
        "build",
        json!({
            "input": cmd.input.display().to_string(),
            "max_lines": cmd.max_lines,
            "kinds": kinds_json(&cmd.kinds),
            "years": cmd.years.map(|(lo, hi)| json!([lo, hi])),
            "ingest_stats": stats_json(&stats),
            "graph": graph_stats,
        }),
    )
}

#[derive(Clone)]
pub struct SplitConfig {
    pub train_years: (i32, i32),
    pub test_years: (i32, i32),
    pub mask: FeatureMask,
    pub exclude_direct_edge: bool,
    pub exclude_endpoints_from_union: bool,
    pub neg_ratio: f64,
    pub max_neg_distance: Option<u32>,
    pub seed: u64,
    pub cumulative_test_graph: bool,
}

pub struct SplitOutcome {
    pub train: Dataset,
    pub test: Dataset,
    pub train_graph: CoauthorGraph,
    pub test_graph: CoauthorGraph,
    pub train_pubs: usize,
    pub test_pubs: usize,
}

/// Shared pipeline trunk: split by year, build per-split graphs, sample
/// pairs (train with `seed`, test with `seed + 1`), assemble datasets.
pub fn build_split_datasets(
    pubs: &[Publication],
    cfg: &SplitConfig,
    out: &mut OutDir,
) -> Result<SplitOutcome> {
    let spec = SplitSpec {
        train_years: cfg.train_years,
        test_years: cfg.test_years,
    };
    let (train_pubs, test_pubs) = temporal_split(pubs, &spec).context("dataset: temporal split")?;
    if cfg.mask.distance && !cfg.exclude_direct_edge {
        out.warn(
            "shortest_distance is computed with the direct edge present; \
             adjacent pairs always score distance 1 (label leakage into the class)",
        );
    }

    let opts = ExtractOptions {
        exclude_direct_edge: cfg.exclude_direct_edge,
        exclude_endpoints_from_union: cfg.exclude_endpoints_from_union,
    };

    let (train_graph, _) = build_graph(&train_pubs);
    let train = split_dataset(
        &train_graph,
        "train",
        cfg.train_years,
        cfg.mask,
        opts,
        cfg.neg_ratio,
        cfg.max_neg_distance,
        cfg.seed,
        out,
    )?;

    let test_graph = if cfg.cumulative_test_graph {
        let mut all = train_pubs.clone();
        all.extend(test_pubs.iter().cloned());
        build_graph(&all).0
    } else {
        build_graph(&test_pubs).0
    };
    let test = split_dataset(
        &test_graph,
        "test",
        cfg.test_years,
        cfg.mask,
        opts,
        cfg.neg_ratio,
        cfg.max_neg_distance,
        cfg.seed.wrapping_add(1),
        out,
    )?;

    Ok(SplitOutcome {
        train,
        test,
        train_graph,
        test_graph,
        train_pubs: train_pubs.len(),
        test_pubs: test_pubs.len(),
    })
}

#[allow(clippy::too_many_arguments)]
fn split_dataset(
    graph: &CoauthorGraph,
    split: &str,
    years: (i32, i32),
    mask: FeatureMask,
    opts: ExtractOptions,
    neg_ratio: f64,
    max_neg_distance: Option<u32>,
    seed: u64,
    out: &mut OutDir,
) -> Result<Dataset> {
    let sample = sample_pairs(graph, neg_ratio, max_neg_distance, seed)
        .with_context(|| format!("dataset: sampling pairs for the {split} split"))?;
    for w in &sample.warnings {
        out.warn(format!("{split} split: {w}"));
    }
    let pairs: Vec<(AuthorId, AuthorId)> = sample.pairs.iter().map(|p| (p.0, p.1)).collect();
    let meta = DatasetMeta {
        name: format!("dblp_{split}"),
        split: Some(split.to_string()),
        year_range: Some(years),
        seed: Some(seed),
        neg_ratio: Some(neg_ratio),
        ..DatasetMeta::default()
    };
    let d = assemble(graph, &pairs, mask, opts, meta)
        .with_context(|| format!("dataset: assembling the {split} split"))?;
    for w in &d.meta.leakage {
        out.warn(format!("{split} split: {w}"));
    }
    Ok(d)
}

fn write_dataset(out: &mut OutDir, d: &Dataset, stem: &str) -> Result<()> {
    let mut arff_bytes = Vec::new();
    arff::write_arff(d, &d.meta.name, &mut arff_bytes)
        .with_context(|| format!("arff: writing {stem}.arff"))?;
    out.write(&format!("{stem}.arff"), &arff_bytes)?;
    let mut csv_bytes = Vec::new();
    d.write_csv(&mut csv_bytes)
        .with_context(|| format!("dataset: writing {stem}.csv"))?;
    out.write(&format!("{stem}.csv"), &csv_bytes)?;
    Ok(())
}

fn dataset_summary(d: &Dataset) -> Value {
    let (n0, n1) = d.class_counts();
    json!({
        "instances": d.len(),
        "positives": n1,
        "negatives": n0,
        "features": d.feature_names,
        "unreachable_sentinel": d.meta.unreachable_sentinel,
        "leakage_warnings": d.meta.leakage.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

pub struct DatasetCmd<'a> {
    pub input: &'a Path,
    pub max_lines: Option<u64>,
    pub kinds: Vec<PublicationKind>,
    pub split: SplitConfig,
    pub out: &'a Path,
}

pub fn cmd_dataset(cmd: DatasetCmd) -> Result<()> {
    let mut out = OutDir::create(cmd.out)?;
    let (pubs, stats) = read_publications(cmd.input, cmd.max_lines, &cmd.kinds, None)?;
    let outcome = build_split_datasets(&pubs, &cmd.split, &mut out)?;
    write_dataset(&mut out, &outcome.train, "train")?;
    write_dataset(&mut out, &outcome.test, "test")?;
    let summary = json!({
        "train": dataset_summary(&outcome.train),
        "test": dataset_summary(&outcome.test),
        "train_publications": outcome.train_pubs,
        "test_publications": outcome.test_pubs,
        "train_authors": outcome.train_graph.n(),
        "test_authors": outcome.test_graph.n(),
    });
    out.write("dataset_stats.json", &serde_json::to_vec_pretty(&summary)?)?;
    println!(
        "dataset: train {} instances / test {} instances",
        outcome.train.len(),
        outcome.test.len()
    );
    out.finish(
        "dataset",
        json!({
            "input": cmd.input.display().to_string(),
            "max_lines": cmd.max_lines,
            "kinds": kinds_json(&cmd.kinds),
            "train_years": [cmd.split.train_years.0, cmd.split.train_years.1],
            "test_years": [cmd.split.test_years.0, cmd.split.test_years.1],
            "features": mask_name(cmd.split.mask),
            "exclude_direct_edge": cmd.split.exclude_direct_edge,
            "neg_ratio": cmd.split.neg_ratio,
            "max_neg_distance": cmd.split.max_neg_distance,
            "seed": cmd.split.seed,
            "cumulative_test_graph": cmd.split.cumulative_test_graph,
            "ingest_stats": stats_json(&stats),
            "datasets": summary,
        }),
    )
}

pub struct TrainCmd<'a> {
    pub data: &'a Path,
    pub models: Vec<ModelKind>,
    pub seed: u64,
    pub out: &'a Path,
}

pub fn cmd_train(cmd: TrainCmd) -> Result<()> {
    let mut out = OutDir::create(cmd.out)?;
    let file = File::open(cmd.data)
        .with_context(|| format!("train: cannot open {}", cmd.data.display()))?;
    let d = arff::read_arff(BufReader::new(file)).context("train: reading ARFF")?;
    if d.is_empty() {
        bail!("train: dataset {} is empty", cmd.data.display());
    }
    for kind in &cmd.models {
        let spec = ModelSpec::with_defaults(*kind, cmd.seed);
        let trained = classifiers::train(&d, &spec)
            .with_context(|| format!("train: fitting {}", kind.label()))?;
        out.write(
            &format!("model_{}.txt", kind.tag()),
            trained.save_string().as_bytes(),
        )?;
        println!("train: {} fitted on {} instances", kind.label(), d.len());
    }
    out.finish(
        "train",
        json!({
            "data": cmd.data.display().to_string(),
            "models": models_json(&cmd.models),
            "seed": cmd.seed,
            "instances": d.len(),
            "features": d.feature_names,
        }),
    )
}

fn report_json(report: &EvalReport) -> Value {
    json!({
        "title": report.title,
        "rows": report.rows.iter().map(|row| {
            let r = &row.report;
            json!({
                "model": row.model.tag(),
                "accuracy": r.accuracy,
                "precision": r.precision.value,
                "recall": r.recall.value,
                "f1": r.f1.value,
                "auc": r.auc,
                "tp": r.counts.true_pos,
                "tn": r.counts.true_neg,
                "fp": r.counts.false_pos,
                "fn": r.counts.false_neg,
                "degenerate": r.any_degenerate(),
            })
        }).collect::<Vec<_>>(),
    })
}

/// Write one table in the requested format plus per-model ROC CSVs, and
/// echo the text rendering to stdout. `base` names the table:
/// report_<base>.<ext> and roc_<base>_<model>.csv.
fn emit_report(
    out: &mut OutDir,
    report: &EvalReport,
    base: &str,
    format: &TableFormat,
) -> Result<()> {
    print!("{}", report.render_text());
    println!();
    match format {
        TableFormat::Text => out.write(
            &format!("report_{base}.txt"),
            report.render_text().as_bytes(),
        )?,
        TableFormat::Csv => out.write(
            &format!("report_{base}.csv"),
            report.render_csv().as_bytes(),
        )?,
        TableFormat::Json => out.write(
            &format!("report_{base}.json"),
            &serde_json::to_vec_pretty(&report_json(report))?,
        )?,
    }
    for row in &report.rows {
        let mut roc = Vec::new();
        row.report.roc.write_csv(&mut roc)?;
        out.write(&format!("roc_{}_{}.csv", base, row.model.tag()), &roc)?;
    }
    Ok(())
}

fn run_models_cv(
    d: &Dataset,
    models: &[ModelKind],
    k: usize,
    seed: u64,
    title: String,
) -> Result<EvalReport> {
    let mut rows = Vec::new();
    for kind in models {
        let spec = ModelSpec::with_defaults(*kind, seed);
        let report = cross_validate(d, &spec, k, seed)
            .with_context(|| format!("eval: {k}-fold cross-validation of {}", kind.label()))?;
        rows.push(ReportRow {
            model: *kind,
            report,
        });
    }
    Ok(EvalReport { title, rows })
}

fn run_models_holdout(
    train: &Dataset,
    test: &Dataset,
    models: &[ModelKind],
    seed: u64,
    title: String,
) -> Result<EvalReport> {
    let mut rows = Vec::new();
    for kind in models {
        let spec = ModelSpec::with_defaults(*kind, seed);
        let report = evaluate_holdout(train, test, &spec)
            .with_context(|| format!("eval: holdout evaluation of {}", kind.label()))?;
        rows.push(ReportRow {
            model: *kind,
            report,
        });
    }
    Ok(EvalReport { title, rows })
}

pub struct EvalCmd<'a> {
    pub data: &'a Path,
    pub test: Option<&'a Path>,
    pub models: Vec<ModelKind>,
    pub k: usize,
    pub seed: u64,
    pub format: TableFormat,
    pub out: &'a Path,
}

pub fn cmd_eval(cmd: EvalCmd) -> Result<()> {
    let mut out = OutDir::create(cmd.out)?;
    let file = File::open(cmd.data)
        .with_context(|| format!("eval: cannot open {}", cmd.data.display()))?;
    let data = arff::read_arff(BufReader::new(file)).context("eval: reading ARFF")?;

    let cv = run_models_cv(
        &data,
        &cmd.models,
        cmd.k,
        cmd.seed,
        format!("{}-fold cross-validation on {}", cmd.k, cmd.data.display()),
    )?;
    emit_report(&mut out, &cv, "cv", &cmd.format)?;

    if let Some(test_path) = cmd.test {
        let file = File::open(test_path)
            .with_context(|| format!("eval: cannot open {}", test_path.display()))?;
        let test = arff::read_arff(BufReader::new(file)).context("eval: reading test ARFF")?;
        let holdout = run_models_holdout(
            &data,
            &test,
            &cmd.models,
            cmd.seed,
            format!(
                "holdout: trained on {}, evaluated on {}",
                cmd.data.display(),
                test_path.display()
            ),
        )?;
        emit_report(&mut out, &holdout, "holdout", &cmd.format)?;
    }

    out.finish(
        "eval",
        json!({
            "data": cmd.data.display().to_string(),
            "test": cmd.test.map(|p| p.display().to_string()),
            "models": models_json(&cmd.models),
            "k": cmd.k,
            "seed": cmd.seed,
        }),
    )
}

pub struct ReproduceCmd<'a> {
    pub input: &'a Path,
    pub max_lines: Option<u64>,
    pub kinds: Vec<PublicationKind>,
    pub split: SplitConfig,
    pub feature_sets: Vec<FeatureMask>,
    pub models: Vec<ModelKind>,
    pub k: usize,
    pub format: TableFormat,
    pub out: &'a Path,
}

/// Full pipeline: ingest, split, per-feature-set datasets, then one table
/// per feature-set and split. Training tables use k-fold cross-validation
/// on the training split; test tables train on the training split and
/// evaluate on the test split (holdout).
pub fn cmd_reproduce(cmd: ReproduceCmd) -> Result<()> {
    let mut out = OutDir::create(cmd.out)?;
    let (pubs, stats) = read_publications(cmd.input, cmd.max_lines, &cmd.kinds, None)?;
    eprintln!(
        "reproduce: {} records ingested ({} lines)",
        stats.records_read, stats.lines_consumed
    );

    let mut summaries = Vec::new();
    for &mask in &cmd.feature_sets {
        let set = mask_name(mask);
        let split_cfg = SplitConfig {
            mask,
            ..cmd.split.clone()
        };
        let outcome = build_split_datasets(&pubs, &split_cfg, &mut out)?;
        eprintln!(
            "reproduce [{set}]: train {} instances ({} authors), test {} instances ({} authors)",
            outcome.train.len(),
            outcome.train_graph.n(),
            outcome.test.len(),
            outcome.test_graph.n()
        );
        write_dataset(&mut out, &outcome.train, &format!("train_{set}"))?;
        write_dataset(&mut out, &outcome.test, &format!("test_{set}"))?;

        let train_table = run_models_cv(
            &outcome.train,
            &cmd.models,
            cmd.k,
            cmd.split.seed,
            format!(
                "[{set}] training split {}..={}, {}-fold cross-validation",
                cmd.split.train_years.0, cmd.split.train_years.1, cmd.k
            ),
        )?;
        emit_report(&mut out, &train_table, &format!("{set}_train"), &cmd.format)?;

        let test_table = run_models_holdout(
            &outcome.train,
            &outcome.test,
            &cmd.models,
            cmd.split.seed,
            format!(
                "[{set}] test split {}..={}, holdout (trained on the training split)",
                cmd.split.test_years.0, cmd.split.test_years.1
            ),
        )?;
        emit_report(&mut out, &test_table, &format!("{set}_test"), &cmd.format)?;

        summaries.push(json!({
            "feature_set": set,
            "train": dataset_summary(&outcome.train),
            "test": dataset_summary(&outcome.test),
            "train_table": report_json(&train_table),
            "test_table": report_json(&test_table),
        }));
    }

    out.write(
        "summary.json",
        &serde_json::to_vec_pretty(&Value::Array(summaries))?,
    )?;
    out.finish(
        "reproduce",
        json!({
            "input": cmd.input.display().to_string(),
            "max_lines": cmd.max_lines,
            "kinds": kinds_json(&cmd.kinds),
            "train_years": [cmd.split.train_years.0, cmd.split.train_years.1],
            "test_years": [cmd.split.test_years.0, cmd.split.test_years.1],
            "feature_sets": cmd.feature_sets.iter().map(|m| mask_name(*m)).collect::<Vec<_>>(),
            "exclude_direct_edge": cmd.split.exclude_direct_edge,
            "neg_ratio": cmd.split.neg_ratio,
            "max_neg_distance": cmd.split.max_neg_distance,
            "seed": cmd.split.seed,
            "test_sampling_seed": cmd.split.seed.wrapping_add(1),
            "cumulative_test_graph": cmd.split.cumulative_test_graph,
            "models": models_json(&cmd.models),
            "k": cmd.k,
            "test_protocol": "holdout trained on the training split",
            "ingest_stats": stats_json(&stats),
        }),
    )
}
