//! Minimum-conductance graph bipartitioning.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: edge-list loading, connectivity, largest component.
//! - [`conductance`]: exact rational conductance values.
//! - [`partition`]: the incremental engine that evaluates and applies
//!   single-vertex moves and two-vertex swaps without full recomputation.
//! - [`oracle`]: exhaustive enumeration for small graphs.
//! - [`budget`]: stopping rules, run results and seeded random streams.
//! - [`local_search`]: steepest descent and the randomized flip/swap search
//!   (LS1, ALS1, RLS1,2, ARLS1,2).
//! - [`genetic`]: generational genetic algorithms with one-point and
//!   uniform crossover (AGA-1PX, AGA-UX).
//! - [`memetic`]: the steady-state adaptive memetic algorithm (StS AMA).
//! - [`bench`]: experiment runner, aggregation and CSV output.

pub mod bench;
pub mod budget;
pub mod conductance;
pub mod genetic;
pub mod graph;
pub mod local_search;
pub mod memetic;
pub mod oracle;
pub mod partition;

pub use budget::{Budget, Meter, SearchResult};
pub use conductance::Conductance;
pub use graph::{load_edge_list, parse_edge_list, Graph, GraphError, VertexId};
pub use partition::{EngineError, MoveDelta, PartitionState};
