//! Minimum Hamilton cycles by greedy deletion of cycle-basis cycles, with an
//! exact Held–Karp oracle and a randomized comparison harness.
//!
//! ```
//! let g = hamtsp::parse_graph("0 1 1\n1 2 2\n0 2 3\n").unwrap();
//! let result = hamtsp::run_one_one(&g);
//! assert_eq!(result.status, hamtsp::Status::Ok);
//! assert_eq!(result.weight, Some(hamtsp::Weight::from_int(6)));
//! ```

pub mod cycle_space;
pub mod equation;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod removability;
pub mod solver;

pub use graph::{parse_graph, Edge, EdgeSet, Graph, GraphError, Weight};
pub use solver::{run_one_one, run_one_one_with, SolverOptions, Status, TourResult};
