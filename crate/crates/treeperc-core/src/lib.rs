//! Bernoulli bond percolation on large rooted random trees.
//!
//! The crate provides, for trees on the vertex set `{0, ..., n}` rooted at 0:
//!
//! * [`tree`]: a compact parent-array representation with validation, depth
//!   tables, and reduced-tree-length queries (the number of edges needed to
//!   connect the root to a set of target vertices).
//! * [`generate`]: linear-time samplers for five tree families: uniform
//!   recursive trees, preferential-attachment (scale-free) trees, uniform
//!   labeled (Cayley) trees, complete d-ary trees, and star-like trees made
//!   of equal paths hanging from the root.
//! * [`percolation`]: independent edge removal with parameter `p`, the
//!   critical regime `p = 1 - c/l(n)`, and linear-time cluster extraction
//!   (root cluster size and ranked non-root cluster sizes).
//! * [`isolation`]: the random root-isolation algorithm (repeatedly cut a
//!   uniform edge of the root component and freeze the detached subtree)
//!   together with the `1/(j(j+1))` first-cut law.
//! * [`stats`]: exact enumeration oracles for the moment identity
//!   `E[((n+1)^-1 C0)^k] = E[p^(L_k)]`, empirical moments, one- and
//!   two-sample Kolmogorov-Smirnov tests, Pearson chi-square tests, and the
//!   reference laws showing up in the limit theorems (exponential spacings of
//!   inverse cluster sizes, chi distributions, survival law of the lowest
//!   removed edge in a d-ary tree).
//!
//! Everything is `no_std` (with `alloc`); all operations are pure functions
//! of their inputs and an explicit RNG, so trials can run on independent
//! streams in parallel without shared state.

#![no_std]
#![deny(unsafe_code)]
// `!(x > bound)` comparisons double as NaN rejection on parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod generate;
pub mod isolation;
mod math;
pub mod percolation;
mod special;
pub mod stats;
pub mod tree;

pub use generate::{FamilySpec, GenError};
pub use isolation::IsolationTrace;
pub use percolation::{EdgeMask, PercolationOutcome, RegimeError, Scale};
pub use stats::{PoissonLimitRef, StatsError, SummaryStats};
pub use tree::{DepthTable, Tree, TreeError, Vertex};
