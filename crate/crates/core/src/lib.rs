//! Exact top-k trajectory similarity search.
//!
//! Trajectories are snapped to a Z-ordered grid, indexed in a trie of
//! reference-point paths and searched best-first with lower bounds that are
//! computed incrementally along each path. A dataset is split into shards,
//! each with its own trie, and queried in parallel.

pub mod distances;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod partition;
pub mod search;
pub mod trie;
pub mod zorder;

mod codec;

pub use engine::{build_index, build_index_with_grid, linear_scan, load_index, save_index, BuildParams, PartitionedIndex, QueryResult};
pub use error::{Error, Result};
pub use partition::Strategy;
pub use model::{build_grid, BBox, Dataset, GridConfig, Measure, Point, Trajectory};
pub use search::{top_k_search, Hit, QueryContext, SearchStats};
pub use trie::{RpTrie, PivotSet};
pub use zorder::{ReferenceTrajectory, ZValue};
