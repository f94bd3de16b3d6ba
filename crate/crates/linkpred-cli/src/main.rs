//! Command-line pipeline for link prediction on DBLP-style co-authorship
//! data: `ingest`, `build`, `dataset`, `train`, `eval`, and the end-to-end
//! `reproduce`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{SplitConfig, TableFormat};
use linkpred::classifiers::ModelKind;
use linkpred::features::FeatureMask;
use linkpred::ingest::PublicationKind;

fn parse_year_range(s: &str) -> Result<(i32, i32), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: i32 = lo.trim().parse().map_err(|_| format!("bad year {lo:?}"))?;
    let hi: i32 = hi.trim().parse().map_err(|_| format!("bad year {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty year range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_features(s: &str) -> Result<FeatureMask, String> {
    let mut mask = FeatureMask {
        distance: false,
        neighbors: false,
        papers: false,
    };
    for part in s.split(',') {
        match part.trim() {
            "dist" | "distance" | "shortest_distance" => mask.distance = true,
            "neighbors" | "sum_of_neighbors" => mask.neighbors = true,
            "papers" | "sum_of_papers" => mask.papers = true,
            other => {
                return Err(format!(
                    "unknown feature {other:?} (dist, neighbors, papers)"
                ))
            }
        }
    }
    if mask.is_empty() {
        return Err("feature list selects nothing".into());
    }
    Ok(mask)
}

/// Comma-separated model list; clap needs a single-value wrapper type.
#[derive(Clone)]
struct ModelList(Vec<ModelKind>);

fn parse_models(s: &str) -> Result<ModelList, String> {
    if s.trim() == "all" {
        return Ok(ModelList(ModelKind::ALL.to_vec()));
    }
    let mut models = Vec::new();
    for part in s.split(',') {
        let tag = part.trim();
        let kind = ModelKind::from_tag(tag)
            .ok_or_else(|| format!("unknown model {tag:?} (j48, svm, mlp, logreg, nb, all)"))?;
        if !models.contains(&kind) {
            models.push(kind);
        }
    }
    if models.is_empty() {
        return Err("model list selects nothing".into());
    }
    Ok(ModelList(models))
}

/// Comma-separated record-kind list.
#[derive(Clone)]
struct KindList(Vec<PublicationKind>);

fn parse_kinds(s: &str) -> Result<KindList, String> {
    if s.trim() == "all" {
        return Ok(KindList(PublicationKind::ALL.to_vec()));
    }
    let mut kinds = Vec::new();
    for part in s.split(',') {
        let tag = part.trim();
        let kind =
            PublicationKind::from_tag(tag).ok_or_else(|| format!("unknown record kind {tag:?}"))?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    Ok(KindList(kinds))
}

fn parse_format(s: &str) -> Result<TableFormat, String> {
    match s {
        "text" => Ok(TableFormat::Text),
        "csv" => Ok(TableFormat::Csv),
        "json" => Ok(TableFormat::Json),
        other => Err(format!("unknown format {other:?} (text, csv, json)")),
    }
}

#[derive(Parser)]
#[command(
    name = "linkpred",
    version,
    about = "Link prediction on DBLP-style co-authorship networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// DBLP-format XML file.
    #[arg(long)]
    input: PathBuf,
    /// Truncate the raw input after this many physical lines.
    #[arg(long)]
    max_lines: Option<u64>,
    /// Record kinds to keep (comma list or "all").
    #[arg(long, value_parser = parse_kinds, default_value = "article,inproceedings,incollection,book")]
    kinds: KindList,
}

#[derive(Args)]
struct SplitArgs {
    /// Training years as LO:HI (inclusive).
    #[arg(long, value_parser = parse_year_range, default_value = "2012:2016")]
    train_years: (i32, i32),
    /// Test years as LO:HI (inclusive).
    #[arg(long, value_parser = parse_year_range, default_value = "2017:2018")]
    test_years: (i32, i32),
    /// Compute distances with the pair's direct edge removed.
    #[arg(long)]
    exclude_direct_edge: bool,
    /// Negatives sampled per positive.
    #[arg(long, default_value_t = 1.0)]
    neg_ratio: f64,
    /// Keep only negatives within this many hops.
    #[arg(long)]
    max_neg_distance: Option<u32>,
    /// Seed for sampling and training.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Build the test graph from training plus test publications.
    #[arg(long)]
    cumulative_test_graph: bool,
}

impl SplitArgs {
    fn to_config(&self, mask: FeatureMask) -> SplitConfig {
        SplitConfig {
            train_years: self.train_years,
            test_years: self.test_years,
            mask,
            exclude_direct_edge: self.exclude_direct_edge,
            exclude_endpoints_from_union: false,
            neg_ratio: self.neg_ratio,
            max_neg_distance: self.max_neg_distance,
            seed: self.seed,
            cumulative_test_graph: self.cumulative_test_graph,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse records and dump them as JSON lines with ingest statistics.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        /// Keep only records with a year in LO:HI.
        #[arg(long, value_parser = parse_year_range)]
        years: Option<(i32, i32)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the co-authorship graph and export its edges and nodes.
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = parse_year_range)]
        years: Option<(i32, i32)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble labeled train/test datasets and write ARFF/CSV files.
    Dataset {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        split: SplitArgs,
        /// Features to extract (comma list of dist, neighbors, papers).
        #[arg(long, value_parser = parse_features, default_value = "dist,neighbors")]
        features: FeatureMask,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train models on an ARFF dataset and save them.
    Train {
        /// Training data (ARFF).
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = parse_models, default_value = "all")]
        models: ModelList,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate on a dataset, optionally holdout-evaluate on a second.
    Eval {
        /// Dataset to cross-validate on (ARFF).
        #[arg(long)]
        data: PathBuf,
        /// Optional test dataset for a holdout table.
        #[arg(long)]
        test: Option<PathBuf>,
        #[arg(long, value_parser = parse_models, default_value = "all")]
        models: ModelList,
        /// Folds for cross-validation.
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_parser = parse_format, default_value = "text")]
        format: TableFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the whole pipeline and emit one table per feature set and split.
    Reproduce {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        split: SplitArgs,
        /// Restrict to a single feature set instead of the standard three
        /// (dist; neighbors; dist,neighbors).
        #[arg(long, value_parser = parse_features)]
        features: Option<FeatureMask>,
        #[arg(long, value_parser = parse_models, default_value = "all")]
        models: ModelList,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, value_parser = parse_format, default_value = "text")]
        format: TableFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Ingest { input, years, out } => commands::cmd_ingest(commands::IngestCmd {
            input: &input.input,
            max_lines: input.max_lines,
            kinds: input.kinds.0,
            years,
            out: &out,
        }),
        Command::Build { input, years, out } => commands::cmd_build(commands::BuildCmd {
            input: &input.input,
            max_lines: input.max_lines,
            kinds: input.kinds.0,
            years,
            out: &out,
        }),
        Command::Dataset {
            input,
            split,
            features,
            out,
        } => commands::cmd_dataset(commands::DatasetCmd {
            input: &input.input,
            max_lines: input.max_lines,
            kinds: input.kinds.0,
            split: split.to_config(features),
            out: &out,
        }),
        Command::Train {
            data,
            models,
            seed,
            out,
        } => commands::cmd_train(commands::TrainCmd {
            data: &data,
            models: models.0,
            seed,
            out: &out,
        }),
        Command::Eval {
            data,
            test,
            models,
            k,
            seed,
            format,
            out,
        } => commands::cmd_eval(commands::EvalCmd {
            data: &data,
            test: test.as_deref(),
            models: models.0,
            k,
            seed,
            format,
            out: &out,
        }),
        Command::Reproduce {
            input,
            split,
            features,
            models,
            k,
            format,
            out,
        } => {
            let feature_sets = match features {
                Some(mask) => vec![mask],
                None => vec![
                    FeatureMask::DISTANCE_ONLY,
                    FeatureMask::NEIGHBORS_ONLY,
                    FeatureMask {
                        distance: true,
                        neighbors: true,
                        papers: false,
                    },
                ],
            };
            commands::cmd_reproduce(commands::ReproduceCmd {
                input: &input.input,
                max_lines: input.max_lines,
                kinds: input.kinds.0,
                split: split.to_config(FeatureMask::ALL),
                feature_sets,
                models: models.0,
                k,
                format,
                out: &out,
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
