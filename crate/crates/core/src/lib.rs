//! Dempster-Shafer support, plausibility and conflict for completely specified
//! paths through a complete directed acyclic graph of evidence.
//!
//! [`fast`] evaluates a single path directly in `O(n 2^n)`; [`oracle`] builds
//! the full combined mass function by brute force and is kept as ground truth
//! for small graphs.

pub mod bench;
pub mod cli;
pub mod error;
pub mod fast;
pub mod graph;
pub mod io;
pub mod oracle;

pub use error::{Error, Result};
pub use fast::{conflict, pls_star, rank_paths, spt_star, ConflictTable, Ranking};
pub use graph::{CompletePath, EvidenceGraph, FrameSubset, Trit, TritPattern};
pub use oracle::{oracle_combine, oracle_report, BeliefReport, MassTable, PathBelief};
