//! End-to-end pipeline on a small in-memory corpus: parse records, build
//! the co-authorship graph, sample labeled pairs, extract features, and
//! cross-validate all five classifiers.
//!
//! Run with: `cargo run --example pipeline`

use linkpred::classifiers::{ModelKind, ModelSpec};
use linkpred::dataset::{assemble, sample_pairs, DatasetMeta};
use linkpred::eval::cross_validate;
use linkpred::eval::report::{EvalReport, ReportRow};
use linkpred::features::{ExtractOptions, FeatureMask};
use linkpred::graph::build_graph;
use linkpred::ingest::{parse_all, IngestConfig};

fn main() -> Result<(), linkpred::Error> {
    // A tiny bibliography: three research groups with a few bridges.
    let mut doc = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<dblp>\n");
    let groups: [&[&str]; 3] = [
        &["Ada", "Ben", "Cleo", "Dan"],
        &["Eve", "Falk", "Gus"],
        &["Hana", "Ivo", "Jil", "Kai"],
    ];
    let mut key = 0;
    for (g, members) in groups.iter().enumerate() {
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                doc.push_str(&format!(
                    "<article key=\"k/{key}\"><author>{}</author><author>{}</author>\
                     <title>Joint work {g}.{key}</title><year>2015</year></article>\n",
                    members[i], members[j]
                ));
                key += 1;
            }
        }
    }
    // Bridges between the groups.
    for (a, b) in [("Dan", "Eve"), ("Gus", "Hana")] {
        doc.push_str(&format!(
            "<inproceedings key=\"k/{key}\"><author>{a}</author><author>{b}</author>\
             <title>Bridge paper</title><year>2016</year></inproceedings>\n"
        ));
        key += 1;
    }
    doc.push_str("</dblp>\n");

    let (pubs, stats) = parse_all(doc.as_bytes(), IngestConfig::default())?;
    println!(
        "parsed {} records ({} lines)",
        stats.records_read, stats.lines_consumed
    );

    let (graph, index) = build_graph(&pubs);
    println!("graph: {} authors, {} edges", graph.n(), graph.edge_count());
    if let Some(id) = index.id_of("Dan") {
        println!("Dan has {} co-authors", graph.degree(id)?);
    }

    let sample = sample_pairs(&graph, 1.0, None, 7)?;
    let pairs: Vec<_> = sample.pairs.iter().map(|p| (p.0, p.1)).collect();
    let data = assemble(
        &graph,
        &pairs,
        FeatureMask::ALL,
        ExtractOptions::default(),
        DatasetMeta::default(),
    )?;
    println!(
        "dataset: {} instances, {} features",
        data.len(),
        data.n_features()
    );
    for warning in &data.meta.leakage {
        println!("note: {warning}");
    }

    let mut rows = Vec::new();
    for kind in ModelKind::ALL {
        let spec = ModelSpec::with_defaults(kind, 7);
        let report = cross_validate(&data, &spec, 5, 7)?;
        rows.push(ReportRow {
            model: kind,
            report,
        });
    }
    let table = EvalReport {
        title: "5-fold cross-validation, all features".into(),
        rows,
    };
    print!("{}", table.render_text());
    Ok(())
}
