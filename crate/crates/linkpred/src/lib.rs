//! Link prediction on co-authorship networks.
//!
//! The pipeline stages, each in its own module:
//!
//! - [`ingest`]: stream-parse DBLP-flavored XML into publication records
//!   with bounded memory, a physical-line budget, and a fixed entity table.
//! - [`graph`]: build the undirected co-authorship graph with per-author
//!   publication counts and a name/id index.
//! - [`features`]: per-pair features: shortest path distance (Dijkstra),
//!   sum of neighbors (union cardinality), sum of papers.
//! - [`dataset`]: pair sampling, labeling, temporal splits, stratified
//!   k-fold partitions, and leakage diagnostics.
//! - [`classifiers`]: five supervised models implemented from first
//!   principles: decision tree, Gaussian naive Bayes, logistic regression,
//!   one-hidden-layer MLP, linear SVM. Seeded and deterministic.
//! - [`eval`]: confusion counts, accuracy/precision/recall/F1, ROC curves
//!   with trapezoidal AUC, k-fold cross-validation and holdout protocols.
//! - [`arff`]: read/write the attribute-relation text format.
//!
//! ```
//! use linkpred::features::{shortest_distance, Distance};
//! use linkpred::graph::{build_graph, AuthorId};
//! use linkpred::ingest::{parse_all, IngestConfig};
//!
//! let doc = "<dblp>\
//!     <article key=\"a\"><author>Ada</author><author>Ben</author>\
//!     <title>T1</title><year>2015</year></article>\
//!     <article key=\"b\"><author>Ben</author><author>Cleo</author>\
//!     <title>T2</title><year>2016</year></article>\
//!     </dblp>";
//! let (pubs, _) = parse_all(doc.as_bytes(), IngestConfig::default())?;
//! let (graph, index) = build_graph(&pubs);
//!
//! let ada = index.id_of("Ada").unwrap();
//! let cleo = index.id_of("Cleo").unwrap();
//! assert_eq!(shortest_distance(&graph, ada, cleo, false)?, Distance::Finite(2));
//! # Ok::<(), linkpred::Error>(())
//! ```

pub mod arff;
pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod ingest;

pub use error::{Error, Result};
