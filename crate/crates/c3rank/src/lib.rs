//! Multi-layer bibliometric author ranking.
//!
//! `c3rank` ingests bibliographic corpora, builds a three-layer network
//! (paper–paper citation, author–author citation, author–author
//! coauthorship, plus authorship links between the layers), and ranks
//! authors with a coupled damped fixed-point iteration. Five quantities are
//! iterated in lock step:
//!
//! - **PQI**: paper quality, a PageRank-style score on the citation layer;
//! - **ACI**: author citation index, the same recurrence on the
//!   author–author citation layer;
//! - **AAI**: author coauthorship index, an undamped random walk on the
//!   coauthorship layer;
//! - **PCI**: paper citation index, each author's share of their papers'
//!   PQI, split among coauthors by a credit exponent;
//! - **C³**: the composite author score, a damped sum of the three
//!   author components.
//!
//! Alongside the solver the crate ships the baseline h-index, a
//! deterministic synthetic-corpus generator, and the analysis routines used
//! to study tie-breaking and rank stability over time (histograms, cohort
//! drift, tie statistics, Pearson correlation across snapshots, per-author
//! trajectories).
//!
//! # Quick start
//!
//! ```
//! use c3rank::corpus::Corpus;
//! use c3rank::graph::{GraphBuildOptions, MultiLayerGraph};
//! use c3rank::solver::{solve, SolverConfig};
//!
//! let jsonl = concat!(
//!     r#"{"id":"p1","title":"first","year":1997,"authors":["X"],"refs":[]}"#, "\n",
//!     r#"{"id":"p2","title":"second","year":1998,"authors":["Y"],"refs":["p1"]}"#, "\n",
//! );
//! let (corpus, report) = c3rank::corpus::parse_jsonl(jsonl.as_bytes())?;
//! assert_eq!(report.rejected_total(), 0);
//!
//! let snapshot = corpus.snapshot(1998);
//! let (graph, _build) = MultiLayerGraph::build(&snapshot, GraphBuildOptions::default());
//! let (scores, conv) = solve(&graph, &SolverConfig::default())?;
//!
//! assert!(conv.converged);
//! let x = graph.author_idx("X").unwrap();
//! assert!((scores.c3[x.as_usize()] - 1.25).abs() < 1e-9);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Module map:
//!
//! - [`corpus`]: record parsing (plain-text citation format, JSON lines),
//!   validation, year-bounded snapshots;
//! - [`graph`]: the immutable indexed multi-layer network;
//! - [`solver`]: the fixed-point iteration, plus a dense verification
//!   oracle in [`solver::oracle`];
//! - [`metrics`]: citation counts and the h-index baseline;
//! - [`analysis`]: distributions, tie statistics, temporal consistency,
//!   trajectories;
//! - [`synth`]: seeded synthetic corpora with preferential attachment;
//! - [`export`]: deterministic CSV writers shared by the CLI.

pub mod analysis;
pub mod corpus;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod solver;
pub mod synth;

// The guide under book/ doubles as a test suite: every Rust snippet in the
// chapters is compiled and run by `cargo test --doc`.
#[cfg(doctest)]
#[doc(hidden)]
pub mod book {
    #[doc = include_str!("../../../book/src/corpus.md")]
    pub mod corpus_chapter {}
    #[doc = include_str!("../../../book/src/network.md")]
    pub mod network_chapter {}
    #[doc = include_str!("../../../book/src/ranking.md")]
    pub mod ranking_chapter {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    pub mod convergence_chapter {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    pub mod baselines_chapter {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    pub mod analysis_chapter {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    pub mod synthetic_chapter {}
}
