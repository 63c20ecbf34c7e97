//! Crossing numbers, bisection width and the recursive bisection scheme
//! behind lower bounds of the form `cr(G) >= c' e^(2+1/a) / n^(1+1/a)`.
//!
//! Everything in this crate is pure computation over immutable values and
//! builds without `std`; file formats, the command-line driver and the
//! verification suites live in the companion `crossnum` crate.
//!
//! Module map:
//!
//! * [`graph`]: simple undirected graphs, vertex sets, components, degree sums.
//! * [`geometry`] and [`drawing`]: exact straight-line drawings and crossing counts.
//! * [`planarity`]: planarity decision by path embedding.
//! * [`crossing`]: exact crossing numbers of small graphs by planarization search.
//! * [`bisection`]: exact and local-search bisection width plus the degree-norm checks.
//! * [`bounds`]: closed-form crossing-number bounds and their constants.
//! * [`decomposition`]: vertex splitting and the level-by-level decomposition trace.
//! * [`generators`] and [`cycles`]: the grid and blow-up constructions, classic
//!   graphs, random graphs and even-cycle detection.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bisection;
pub mod bounds;
pub mod crossing;
pub mod cycles;
pub mod decomposition;
pub mod drawing;
mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub(crate) mod math;
pub mod planarity;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexSet};
