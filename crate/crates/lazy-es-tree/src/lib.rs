//! Incremental single-source distances on directed graphs, deterministic
//! and with lazily refreshed forward neighbourhoods.
//!
//! A [`LazyEsTree`] keeps estimates for one distance threshold `τ` up to a
//! depth of about `2τ(1+ε)`. Each vertex `u` files its out-neighbours in a
//! cache indexed by (possibly stale) estimates, and only the part of that
//! cache close to `u`'s own estimate, the forward neighbourhood, is rescanned
//! when `u` improves. How often that happens depends on the heaviness
//! `h(u)`: a forward neighbourhood is rescanned every `2^h(u)` decrements.
//!
//! [`TauBank`] combines thresholds `1, 2, 4, …` into estimates with
//! `dist ≤ est ≤ (1+ε)·dist`, [`WarmupTree`] is the simpler two-state
//! (light/heavy) variant used as a cross-check, and [`WeightedGrid`] covers
//! integer weights by rounding into a grid of (hop, weight) scales.
//!
//! ```
//! use lazy_es_tree::TauBank;
//!
//! let mut bank = TauBank::new(6, 0, 0.5).unwrap();
//! for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)] {
//!     bank.insert_edge(u, v).unwrap();
//! }
//! assert_eq!(bank.global_distance(5), 5);
//! bank.insert_edge(0, 4).unwrap();
//! assert_eq!(bank.global_distance(5), 2);
//! assert_eq!(bank.global_path(5).unwrap().unwrap(), vec![(0, 4), (4, 5)]);
//! ```

mod bank;
mod fenwick;
mod grid;
mod tree;
mod warmup;

pub use bank::TauBank;
pub use grid::{alpha, round_and_scale, GridInstance, WeightedGrid};
pub use tree::{LazyEsTree, LazyOptions, LazyStats};
pub use warmup::{WarmupStats, WarmupTree};

use graph_core::{VertexId, Weight};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum LazyError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("weight {0} out of range")]
    WeightOutOfRange(Weight),
    #[error("operation not available: {0}")]
    ModeViolation(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
