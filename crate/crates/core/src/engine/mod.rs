//! Layout engines for evolving trees.
//!
//! Every engine takes the current [`LayoutState`] and the edge that was just
//! added to the [`EvolvingTree`], places the new child, then relaxes the
//! whole drawing with a fixed number of force rounds. Displacements are
//! applied at the end of each round.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{Point2, Vec2};
use crate::tree::{EdgeId, EvolvingTree, NodeId, TreeError};

mod dynacola;
mod dynasafe;
pub mod forces;
mod naive;
mod placement;
mod session;

pub use dynacola::{dynacola_insert, dynacola_round};
pub use dynasafe::{dynasafe_insert, dynasafe_insert_logged, SafeMove};
pub use forces::{
    collision_radii, force_collision, force_edge, force_gravity, force_repulse_elliptical,
    force_stress,
};
pub use naive::naive_redraw_insert;
pub use placement::place_new_node;
pub use session::{Algorithm, LayoutSession};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid engine parameter: {0}")]
    InvalidParams(&'static str),
    #[error("placement exhausted: no crossing-free position next to {0}")]
    PlacementExhausted(NodeId),
    #[error("layout covers {layout} nodes but the edge expects {expected}")]
    LayoutMismatch { layout: usize, expected: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Tunable constants of both engines.
///
/// `n_iters`, `n_s`, `p` and `q` are the method's own constants; the force
/// strengths and the remaining knobs are tuned engineering choices.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineParams {
    /// Force rounds run after each insertion.
    pub n_iters: usize,
    /// Bend nodes per edge (DynaCola).
    pub n_s: usize,
    /// Back-off factor applied to a rejected move (DynaSafe).
    pub p: f64,
    /// Maximum number of back-offs before a node stays put (DynaSafe).
    pub q: u32,
    /// Candidate positions sampled per placement round.
    pub sample_count: usize,
    pub k_edge: f64,
    pub k_repulse: f64,
    pub k_collide: f64,
    pub k_gravity: f64,
    pub k_stress: f64,
    /// Barnes-Hut opening criterion.
    pub theta: f64,
    /// Horizontal stretch of the elliptical repulsion (DynaSafe).
    pub ellipse_aspect: f64,
    /// Per-round step cap as a fraction of the smallest collision radius.
    pub step_cap_fraction: f64,
    pub seed: u64,
    /// Repulsive charge of a real node.
    pub charge_real: f64,
    /// Repulsive charge of a bend node.
    pub charge_subdivision: f64,
    /// Distance floor of the inverse-square laws.
    pub softening: f64,
    /// Radius shrink factor between unsuccessful placement rounds.
    pub placement_shrink: f64,
    pub placement_rounds: usize,
}

impl Default for EngineParams {
    fn default() -> Self {
        EngineParams {
            n_iters: 50,
            n_s: 1,
            p: 0.8,
            q: 12,
            sample_count: 100,
            k_edge: 0.2,
            k_repulse: 1500.0,
            k_collide: 0.5,
            k_gravity: 0.0005,
            k_stress: 0.3,
            theta: 0.9,
            ellipse_aspect: 3.0,
            step_cap_fraction: 0.5,
            seed: 0,
            charge_real: 1.0,
            charge_subdivision: 0.25,
            softening: 1.0,
            placement_shrink: 0.9,
            placement_rounds: 200,
        }
    }
}

impl EngineParams {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = EngineError::InvalidParams;
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(bad("p must lie in (0, 1)"));
        }
        if self.q < 1 {
            return Err(bad("q must be at least 1"));
        }
        if self.sample_count < 1 {
            return Err(bad("sample_count must be at least 1"));
        }
        if self.placement_rounds < 1 {
            return Err(bad("placement_rounds must be at least 1"));
        }
        if !(self.placement_shrink > 0.0 && self.placement_shrink < 1.0) {
            return Err(bad("placement_shrink must lie in (0, 1)"));
        }
        let strengths = [
            self.k_edge,
            self.k_repulse,
            self.k_collide,
            self.k_gravity,
            self.k_stress,
            self.theta,
            self.step_cap_fraction,
            self.charge_real,
            self.charge_subdivision,
            self.softening,
        ];
        if strengths.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(bad("strengths must be finite and non-negative"));
        }
        if !(self.ellipse_aspect.is_finite() && self.ellipse_aspect >= 1.0) {
            return Err(bad("ellipse_aspect must be at least 1"));
        }
        Ok(())
    }
}

/// Positions of every drawn node (real and bend) after one insertion.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LayoutState {
    /// Indexed by `NodeId`.
    pub positions: Vec<Point2>,
    pub timestep: usize,
}

impl LayoutState {
    pub fn position(&self, id: NodeId) -> Option<Point2> {
        self.positions.get(id.0).copied()
    }
}

/// Per-node displacement accumulator.
#[derive(Debug, Clone, PartialEq)]
pub struct Displacement {
    pub delta: Vec<Vec2>,
}

impl Displacement {
    pub fn zeros(n: usize) -> Self {
        Displacement {
            delta: alloc::vec![Vec2::ZERO; n],
        }
    }

    pub fn add(&mut self, other: &Displacement) {
        for (d, o) in self.delta.iter_mut().zip(&other.delta) {
            *d += *o;
        }
    }

    /// Vector sum over all nodes.
    pub fn net(&self) -> Vec2 {
        self.delta.iter().fold(Vec2::ZERO, |acc, d| acc + *d)
    }
}

/// Drawn segments whose endpoints both have positions.
pub(crate) fn drawn_segments(tree: &EvolvingTree, placed: usize) -> Vec<(NodeId, NodeId)> {
    tree.segments()
        .filter(|(a, b)| a.0 < placed && b.0 < placed)
        .collect()
}

/// One drawn segment acting as a spring.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Spring {
    pub a: NodeId,
    pub b: NodeId,
    pub rest: f64,
    pub stiffness: f64,
}

/// Springs for every drawn segment with both endpoints placed.
///
/// A piece of an edge split into `m` pieces gets stiffness `m * k_edge`, so
/// the chain as a whole responds like one spring of stiffness `k_edge`.
pub(crate) fn springs(tree: &EvolvingTree, placed: usize, k_edge: f64) -> Vec<Spring> {
    tree.edges()
        .iter()
        .flat_map(|e| {
            let rest = e.segment_desired_length();
            let stiffness = k_edge * e.segments.len() as f64;
            e.segments.iter().map(move |&(a, b)| Spring { a, b, rest, stiffness })
        })
        .filter(|s| s.a.0 < placed && s.b.0 < placed)
        .collect()
}

/// Generator for one insertion step; streams keep steps independent.
pub(crate) fn step_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Evaluates `f` for every index, on the rayon pool when `parallel` is on.
///
/// Each output slot is produced by one closure call, so results do not depend
/// on the number of workers.
#[cfg(feature = "parallel")]
pub(crate) fn gather<F>(n: usize, f: F) -> Vec<Vec2>
where
    F: Fn(usize) -> Vec2 + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn gather<F>(n: usize, f: F) -> Vec<Vec2>
where
    F: Fn(usize) -> Vec2,
{
    (0..n).map(f).collect()
}

/// Checks the layout/edge preconditions shared by all engines and returns
/// the parent and child of `edge`.
pub(crate) fn new_edge_endpoints(
    tree: &EvolvingTree,
    layout: &LayoutState,
    edge: EdgeId,
) -> Result<(NodeId, NodeId, f64), EngineError> {
    let rec = tree.edge(edge).ok_or(TreeError::UnknownEdge(edge))?;
    if layout.positions.len() != rec.child.0 {
        return Err(EngineError::LayoutMismatch {
            layout: layout.positions.len(),
            expected: rec.child.0,
        });
    }
    Ok((rec.parent, rec.child, rec.desired_length))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        EngineParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_params() {
        let cases: [fn(&mut EngineParams); 5] = [
            |p| p.p = 1.0,
            |p| p.q = 0,
            |p| p.sample_count = 0,
            |p| p.k_edge = -1.0,
            |p| p.ellipse_aspect = 0.5,
        ];
        for mutate in cases {
            let mut p = EngineParams::default();
            mutate(&mut p);
            assert!(p.validate().is_err());
        }
    }
}
