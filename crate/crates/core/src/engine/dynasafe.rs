use alloc::vec;
use alloc::vec::Vec;

use super::forces::{add_edge_forces, force_gravity, pairwise};
use super::{new_edge_endpoints, place_new_node, springs, EngineError, EngineParams, LayoutState, Spring};
use crate::geometry::{closed_segments_intersect, Point2, Rect2, Vec2};
use crate::tree::{EdgeId, EvolvingTree, NodeId};

/// Outcome of one node's safe move in one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafeMove {
    pub round: usize,
    pub node: NodeId,
    /// Length of the force-proposed displacement.
    pub proposed: f64,
    /// Length actually applied; 0 when every back-off still crossed.
    pub applied: f64,
    /// Number of `p` reductions before the move was accepted.
    pub backoffs: Option<u32>,
}

/// Inserts `new_edge` with the safe-move engine (straight-line edges).
///
/// After placing the child, each of `n_iters` rounds sums edge springs,
/// stress between non-adjacent real nodes, elliptical repulsion and gravity,
/// then moves the nodes one at a time. A move that would make one of the
/// node's segments meet a non-adjacent segment is shrunk by `p` and retried,
/// at most `q` times; after that the node stays where it is.
pub fn dynasafe_insert(
    tree: &EvolvingTree,
    layout: &LayoutState,
    new_edge: EdgeId,
    params: &EngineParams,
) -> Result<LayoutState, EngineError> {
    dynasafe_run(tree, layout, new_edge, params, None)
}

/// [`dynasafe_insert`] that also records every node's move.
pub fn dynasafe_insert_logged(
    tree: &EvolvingTree,
    layout: &LayoutState,
    new_edge: EdgeId,
    params: &EngineParams,
    log: &mut Vec<SafeMove>,
) -> Result<LayoutState, EngineError> {
    dynasafe_run(tree, layout, new_edge, params, Some(log))
}

fn dynasafe_run(
    tree: &EvolvingTree,
    layout: &LayoutState,
    new_edge: EdgeId,
    params: &EngineParams,
    mut log: Option<&mut Vec<SafeMove>>,
) -> Result<LayoutState, EngineError> {
    params.validate()?;
    let (parent, _child, desired) = new_edge_endpoints(tree, layout, new_edge)?;
    let placed = place_new_node(layout, tree, parent, desired, params)?;
    let mut state = LayoutState {
        positions: layout.positions.clone(),
        timestep: tree.timestep(),
    };
    state.positions.push(placed);
    let n = state.positions.len();

    let segments = springs(tree, n, params.k_edge);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, s) in segments.iter().enumerate() {
        incident[s.a.0].push(k);
        incident[s.b.0].push(k);
    }

    for round in 0..params.n_iters {
        let positions = &state.positions;
        let mut delta = vec![Vec2::ZERO; n];
        add_edge_forces(positions, &segments, &mut delta);
        let pair = pairwise(
            tree,
            positions,
            (params.k_stress > 0.0).then_some(params.k_stress),
            (params.k_repulse > 0.0).then_some((params.k_repulse, params.ellipse_aspect, params.softening)),
        );
        let gravity = force_gravity(positions, params.k_gravity);
        for ((d, f), g) in delta.iter_mut().zip(&pair.delta).zip(&gravity.delta) {
            *d += *f + *g;
        }

        let mut mover = SafeMover::new(&segments, &incident, &state.positions);
        for (w, d) in delta.iter().enumerate() {
            if *d == Vec2::ZERO || !d.is_finite() {
                continue;
            }
            let outcome = mover.try_move(w, *d, params.p, params.q);
            if let Some(log) = log.as_deref_mut() {
                let applied = outcome.map_or(0.0, |k| (*d * params.p.powi(k as i32)).norm());
                log.push(SafeMove {
                    round,
                    node: NodeId(w),
                    proposed: d.norm(),
                    applied,
                    backoffs: outcome,
                });
            }
        }
        state.positions = mover.into_positions();
    }
    Ok(state)
}

/// Applies moves one node at a time against the current drawing.
struct SafeMover<'a> {
    segments: &'a [Spring],
    incident: &'a [Vec<usize>],
    positions: Vec<Point2>,
    boxes: Vec<Rect2>,
}

impl<'a> SafeMover<'a> {
    fn new(segments: &'a [Spring], incident: &'a [Vec<usize>], positions: &[Point2]) -> Self {
        let boxes = segments
            .iter()
            .map(|s| Rect2::from_corners(positions[s.a.0], positions[s.b.0]))
            .collect();
        SafeMover {
            segments,
            incident,
            positions: positions.to_vec(),
            boxes,
        }
    }

    /// Moves node `w` by `delta * p^k` for the smallest safe `k <= q`.
    fn try_move(&mut self, w: usize, delta: Vec2, p: f64, q: u32) -> Option<u32> {
        let start = self.positions[w];
        for k in 0..=q {
            let candidate = start + delta * p.powi(k as i32);
            if candidate == start {
                break;
            }
            if self.is_safe(w, candidate) {
                self.positions[w] = candidate;
                for &s in &self.incident[w] {
                    let seg = self.segments[s];
                    self.boxes[s] = Rect2::from_corners(self.positions[seg.a.0], self.positions[seg.b.0]);
                }
                return Some(k);
            }
        }
        None
    }

    fn is_safe(&self, w: usize, candidate: Point2) -> bool {
        for &s in &self.incident[w] {
            let seg = self.segments[s];
            let other = if seg.a.0 == w { seg.b.0 } else { seg.a.0 };
            let far = self.positions[other];
            let moving = Rect2::from_corners(candidate, far);
            for (t, &Spring { a: c, b: d, .. }) in self.segments.iter().enumerate() {
                if c.0 == w || d.0 == w || c.0 == other || d.0 == other {
                    continue;
                }
                let bx = &self.boxes[t];
                if bx.min.x > moving.max.x
                    || bx.max.x < moving.min.x
                    || bx.min.y > moving.max.y
                    || bx.max.y < moving.min.y
                {
                    continue;
                }
                if closed_segments_intersect(candidate, far, self.positions[c.0], self.positions[d.0]) {
                    return false;
                }
            }
        }
        true
    }

    fn into_positions(self) -> Vec<Point2> {
        self.positions
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Node 4 hangs below node 3 in a narrow slot between two long walls.
    #[test]
    fn pinned_node_stays_put() {
        let spring = |a, b| Spring {
            a: NodeId(a),
            b: NodeId(b),
            rest: 1.0,
            stiffness: 1.0,
        };
        let segments = vec![spring(0, 1), spring(2, 5), spring(3, 4)];
        let positions = vec![
            Point2::new(-1.0, -100.0),
            Point2::new(-1.0, 100.0),
            Point2::new(1.0, -100.0),
            Point2::new(0.0, 50.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 100.0),
        ];
        let mut incident = vec![Vec::new(); 6];
        for (k, s) in segments.iter().enumerate() {
            incident[s.a.0].push(k);
            incident[s.b.0].push(k);
        }
        let mut mover = SafeMover::new(&segments, &incident, &positions);
        // even 0.8^12 * 2000 is far beyond either wall
        assert_eq!(mover.try_move(4, Vec2::new(2000.0, 0.0), 0.8, 12), None);
        assert_eq!(mover.try_move(4, Vec2::new(-2000.0, 0.0), 0.8, 12), None);
        assert_eq!(mover.into_positions()[4], Point2::new(0.0, 0.0));

        let mut mover = SafeMover::new(&segments, &incident, &positions);
        // 100 * 0.8^k < 1 first at k = 21 > 12; 10 * 0.8^11 < 1
        assert_eq!(mover.try_move(4, Vec2::new(10.0, 0.0), 0.8, 12), Some(11));
    }
}
