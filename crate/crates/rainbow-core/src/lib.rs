//! Solvers and instance compilers for rainbow edge colorings.
//!
//! A coloring of the edges with `k` colors satisfies a vertex pair when some
//! path between the two vertices uses pairwise distinct colors. The crate
//! decides, counts, approximates and kernelizes such problems, and compiles
//! 3-CNF formulas into equivalent rainbow-coloring instances with witness
//! transport in both directions.

pub mod config;
pub mod dsu;
pub mod error;
pub mod exact;
pub mod biclique;
pub mod format;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod maxrb;
pub mod reduction;
pub mod verify;
mod verify_fast;

pub use config::{Budgets, Config};
pub use error::{Error, Result};
pub use graph::{Dist, Graph, Pair};
pub use instance::{Coloring, Instance, PartialColoring, Requests};
