//! DP-coloring (correspondence coloring) of graphs.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: simple graphs, the edge-list format, clique tests and generators;
//! - [`cover`]: covers `(L, H)` of a base graph, their validation, residual covers
//!   and the cover text format;
//! - [`exact`]: exhaustive solvers for small instances (colorings, `χ_DP`,
//!   independent-set counts);
//! - [`sampler`]: uniform samplers for independent subsets of cover neighborhoods;
//! - [`colorer`]: the randomized two-phase coloring pipelines;
//! - [`harness`]: Monte-Carlo and exact experiments with CSV/JSON reports.

pub mod graph;
pub mod seed;

pub use graph::{parse_graph, Family, Graph, GraphError, ParseError};
pub mod cover;

pub use cover::{Cover, CoverError, CoverVertex, PartialColoring, ResidualCover};
pub mod exact;
pub mod sampler;
pub mod colorer;
pub mod harness;
