//! Decremental strongly connected components with a randomized hierarchy of
//! shallow trees, and single-source reachability on top of it.
//!
//! [`Hierarchy`] answers "are `u` and `v` strongly connected" in constant
//! time while edges are deleted. [`Reachability`] adds an edge from every
//! vertex back to a source, so that reaching a vertex from the source is the
//! same as sharing its component.
//!
//! The guarantees hold against an adversary that fixes the deletion sequence
//! in advance. Answers given here are plain booleans and reveal nothing about
//! the random choices, so adaptive callers are fine as well; anything that
//! would expose tree paths would only be sound for a fixed sequence.

mod hierarchy;
mod reach;

pub use hierarchy::{default_delta, Hierarchy, HierarchyError, Rebuild, Stats};
pub use reach::Reachability;
