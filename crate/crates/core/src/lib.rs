//! Crossing-free force-directed layout of evolving (insert-only) trees.
//!
//! Two engines keep every drawing free of edge crossings while a tree grows
//! one node at a time:
//!
//! * [`engine::dynacola_insert`] subdivides every edge into a short polyline
//!   and surrounds each node with a collision circle; overlapping circles of
//!   non-adjacent nodes repel each other.
//! * [`engine::dynasafe_insert`] draws straight edges and applies each node's
//!   move only after checking that it introduces no crossing, backing off
//!   geometrically otherwise.
//!
//! The [`metrics`] module scores layouts (desired edge length, compactness,
//! stability, stress, crossings). The crate is `no_std` with `alloc`; enable
//! the `parallel` feature to evaluate forces on a rayon pool.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod quadtree;
pub mod tree;

mod fallback;

pub use engine::{EngineError, EngineParams, LayoutState};
pub use geometry::{Point2, Rect2, Segment2, Vec2};
pub use metrics::{LabelSpec, MetricsError, MetricsReport};
pub use tree::{EdgeId, EvolvingTree, NodeId, NodeKind, TreeError};
