//! Exact traveling salesman and Hamiltonian cycle algorithms for graphs of
//! maximum degree three, with a randomized and a deterministic extension to
//! maximum degree four.

pub mod degree_four;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod hitting_set;
pub mod listing;
pub mod matches;
pub mod oracle;
pub mod four_cycle;
pub mod reduce;
pub mod tsp;

pub use error::{GenError, GraphError, OracleError};
pub use graph::{EdgeId, EdgeSpec, GraphSpec, Multigraph, VertexId, Weight};
