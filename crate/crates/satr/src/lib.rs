//! Deciding **simple realizability of abstract topological graphs** whose
//! crossing graphs have components of at most three edges, with
//! machine-checkable realization certificates.
//!
//! An abstract topological graph (AT-graph) is a graph together with a set of
//! edge pairs that are required to cross. This crate decides whether such a
//! specification can be drawn in the plane so that exactly the listed pairs
//! cross, each pair exactly once, and adjacent edges never cross — and if so,
//! produces a combinatorial witness (a planarization with rotation system)
//! that an independent checker validates via Euler's formula.
//!
//! ```
//! use satr::atcore::ATGraph;
//! use satr::graph::Graph;
//!
//! let mut g = Graph::new();
//! for v in ["a", "b", "c", "d"] {
//!     g.add_vertex(v).unwrap();
//! }
//! g.add_edge_by_ids("e1", "a", "b").unwrap();
//! g.add_edge_by_ids("e2", "c", "d").unwrap();
//! let at = ATGraph::new(g, [("e1", "e2")]).unwrap();
//! let verdict = satr::acp::solve(&at).unwrap();
//! assert!(verdict.is_yes());
//! ```

pub mod acp;
pub mod atcore;
pub mod cli;
pub mod embedding;
pub mod graph;
pub mod hardness;
pub mod oracle;
pub mod pqtree;
pub mod spqr;

#[doc = include_str!("../../../README.md")]
#[cfg(doctest)]
pub struct ReadmeDoctests;

#[doc = include_str!("../../../book/src/at-graphs.md")]
#[cfg(doctest)]
pub struct BookAtGraphs;

#[doc = include_str!("../../../book/src/embeddings.md")]
#[cfg(doctest)]
pub struct BookEmbeddings;

#[doc = include_str!("../../../book/src/pq-trees.md")]
#[cfg(doctest)]
pub struct BookPqTrees;

#[doc = include_str!("../../../book/src/spqr-trees.md")]
#[cfg(doctest)]
pub struct BookSpqrTrees;

#[doc = include_str!("../../../book/src/solver.md")]
#[cfg(doctest)]
pub struct BookSolver;

#[doc = include_str!("../../../book/src/oracle-and-certificates.md")]
#[cfg(doctest)]
pub struct BookOracleAndCertificates;

#[doc = include_str!("../../../book/src/hard-instances.md")]
#[cfg(doctest)]
pub struct BookHardInstances;
