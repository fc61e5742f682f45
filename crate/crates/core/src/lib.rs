//! Randomly colored random bipartite graphs: generation, maximum matchings,
//! color profiles of perfect matchings, alternating-cycle recoloring, and the
//! expansion/audit diagnostics built on top of them.
//!
//! The model: a bipartite graph on sides `A` and `B` of equal size `n`, each
//! of the `n²` pairs kept independently with probability `p = (ln n + ω)/n`,
//! and every kept edge colored i.i.d. from a law `α = (α_1, …, α_q)`. A
//! perfect matching `M` has a *color profile* — the vector counting its edges
//! of each color — and `mcp(G)` denotes the set of profiles realized by the
//! perfect matchings of `G`.
//!
//! Conventions used throughout:
//!
//! * Vertices and colors are 0-based in the Rust API. The text file formats
//!   and all JSON artifacts use 1-based indices; conversion happens at the
//!   serialization boundary.
//! * Everything randomized is driven by an explicit `u64` seed through a
//!   fixed, portable generator ([`rng`]), so equal seeds give byte-equal
//!   outputs on any platform.
//! * Derived quantities from threshold formulas (`ln n` terms and friends)
//!   are kept real-valued; set sizes are compared against them as `f64`,
//!   with explicit `ceil` only where a construction demands an integer.

pub mod error;
pub mod expansion;
pub mod experiments;
pub mod graph;
pub mod lemma;
pub mod matching;
pub mod oracle;
pub mod recolor;
pub mod rng;
pub(crate) mod ser;

pub mod cli;

pub use error::{Error, Result};
pub use graph::{edge_probability, ColorLaw, ColoredBipartiteGraph, RandomModelParams, Side};
pub use matching::{maximum_matching, profile, ColorProfile, Matching};
