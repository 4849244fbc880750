//! Exact h-fold sumsets and representation functions, `B_{h,s}` checks, and
//! machine-checked counting-function lower bounds for sets whose sumsets
//! have many representations.
//!
//! All verdicts are computed on finite sets and are only as strong as the
//! declared [`Exactness`] window.

pub mod cli;
pub mod construct;
pub mod error;
pub mod intset;
pub mod parallel;
pub mod repcount;
pub mod selftest;
pub mod verify;

pub use construct::{density_report, greedy_repair, ConstructionLog, DensityReport, Strategy};
pub use error::{Error, Result};
pub use intset::{block_of, blocks, BlockDecomposition, IntegerSet};
pub use repcount::{rep_count, rep_count_naive, rep_table, sumset, Exactness, RepTable};
pub use verify::{run_theorem, TheoremId, TheoremParams, TheoremReport};

/// Version tag written into every structured report.
pub const SCHEMA_VERSION: u32 = 1;
