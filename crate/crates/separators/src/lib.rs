//! Separator procedures for the two decremental pipelines.
//!
//! The unweighted side works on an [`SGraph`] whose marked vertices `S`
//! carry all the length: an edge costs one when its tail is marked and zero
//! otherwise. [`out_sep`] and [`in_sep`] grow layers of that distance around
//! a root and cut at a thin layer; [`split`] applies them recursively until
//! every remaining strongly connected piece is shallow.
//!
//! The weighted side works on a [`WGraph`]. [`out_separator`] cuts the edges
//! leaving a ball of exponentially distributed radius, and [`partition`]
//! uses it to break every strongly connected component of large diameter.

mod ball;
mod graph;
mod layered;
mod partition;
mod split;

pub use ball::{ball_separator, out_separator, EdgeSeparatorResult};
pub use es_tree::Direction;
pub use graph::{SGraph, Scope, WGraph};
pub use layered::{in_sep, out_sep, LayeredSearch, SeparatorResult};
pub use partition::{partition, partition_within, PartitionFailed};
pub use split::{split, SplitResult};
