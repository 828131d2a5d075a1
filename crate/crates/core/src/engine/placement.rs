use rand::Rng;

use super::{drawn_segments, step_rng, EngineError, EngineParams, LayoutState};
use crate::geometry::{closed_segments_intersect, orientation, point_segment_distance, Point2, Vec2};
use crate::tree::{EvolvingTree, NodeId};

/// Finds a crossing-free position for a new child of `parent`.
///
/// Each round samples `sample_count` uniform directions at the current
/// radius, starting from `desired_length`; among the crossing-free samples
/// the one farthest from every drawn segment wins. When none is free the
/// radius shrinks by `placement_shrink` and sampling repeats. The generator
/// is keyed on `(seed, number of placed nodes)`.
pub fn place_new_node(
    layout: &LayoutState,
    tree: &EvolvingTree,
    parent: NodeId,
    desired_length: f64,
    params: &EngineParams,
) -> Result<Point2, EngineError> {
    let origin = layout
        .position(parent)
        .ok_or(crate::tree::TreeError::UnknownNode(parent))?;
    let placed = layout.positions.len();
    let segments = drawn_segments(tree, placed);
    let pos = &layout.positions;
    let mut rng = step_rng(params.seed, placed as u64);

    let mut radius = desired_length;
    for _ in 0..params.placement_rounds {
        let mut best: Option<(f64, Point2)> = None;
        for _ in 0..params.sample_count {
            let angle = rng.random::<f64>() * core::f64::consts::TAU;
            let candidate = origin + Vec2::from_angle(angle) * radius;
            if !candidate.is_finite() || candidate == origin {
                continue;
            }
            if !edge_is_free(origin, candidate, parent, &segments, pos) {
                continue;
            }
            let clearance = segments
                .iter()
                .map(|&(a, b)| point_segment_distance(candidate, pos[a.0], pos[b.0]))
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(c, _)| clearance > c) {
                best = Some((clearance, candidate));
            }
        }
        if let Some((_, p)) = best {
            return Ok(p);
        }
        radius *= params.placement_shrink;
    }
    Err(EngineError::PlacementExhausted(parent))
}

/// The segment `origin -> candidate` meets no drawn segment, and does not
/// fold onto one of the parent's own segments.
fn edge_is_free(
    origin: Point2,
    candidate: Point2,
    parent: NodeId,
    segments: &[(NodeId, NodeId)],
    pos: &[Point2],
) -> bool {
    segments.iter().all(|&(a, b)| {
        if a == parent || b == parent {
            let other = pos[if a == parent { b.0 } else { a.0 }];
            !folds(origin, candidate, other)
        } else {
            !closed_segments_intersect(origin, candidate, pos[a.0], pos[b.0])
        }
    })
}

/// Two segments leaving `o` towards `p` and `q` overlap.
fn folds(o: Point2, p: Point2, q: Point2) -> bool {
    orientation(o, p, q) == 0.0 && (p - o).dot(q - o) > 0.0
}
