//! Shellsort gap-sequence laboratory: an instrumented Shellsort engine, gap
//! sequence generators, structure-aware final passes for Pratt presorting,
//! a grid optimizer for gap templates, and a benchmark harness.

pub mod bench;
pub mod chain;
pub mod engine;
pub mod gaps;
pub mod optimizer;
pub mod rng;
pub mod stats;
pub mod verify;

pub use engine::{shellsort, AccountingModel, Key, SortError, SortMetrics};
pub use gaps::catalog::{resolve, Strategy};
pub use gaps::{GapError, GapSequence};
pub use stats::{CostKind, TrialStats};
