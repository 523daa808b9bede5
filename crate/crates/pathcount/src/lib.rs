//! Exact counting and exactly-uniform sampling of combinatorial structures
//! on graphs of bounded pathwidth.
//!
//! Given a graph and a path decomposition, this crate counts and samples
//! cliques and the valid labelings of any *edge-universal* labeling
//! problem — one whose validity is a single binary predicate checked on
//! every edge, which covers proper `c`-colorings, independent sets, and
//! downsets of a DAG. All counts are arbitrary-precision and all sampling
//! uses exact integer arithmetic, so sampled structures are uniform in the
//! strict sense, not up to floating-point error.
//!
//! The downset engine doubles as a stable matching toolbox: the stable
//! matchings of an instance biject with the downsets of its rotation
//! digraph, so counting and uniform sampling reduce to the same dynamic
//! program.
//!
//! ```
//! use pathcount::graph::generate;
//! use pathcount::decomposition::{greedy_decomposition, to_nice};
//! use pathcount::engine::count_valid_labelings;
//! use pathcount::problems::LabelingProblem;
//!
//! let g = generate::path(3)?;
//! let npd = to_nice(&g, &greedy_decomposition(&g))?;
//! let count = count_valid_labelings(&g, &npd, &LabelingProblem::independent_set())?;
//! assert_eq!(count, 5u32.into());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cliques;
pub mod decomposition;
pub mod engine;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod problems;

pub use engine::Count;
