use alloc::vec;
use alloc::vec::Vec;

use super::forces::{add_collision_forces, add_edge_forces, collision_radii, force_gravity};
use super::{gather, new_edge_endpoints, place_new_node, springs, EngineError, EngineParams, LayoutState, Spring};
use crate::geometry::{Point2, Vec2};
use crate::metrics::crossing_pairs;
use crate::quadtree::QuadTree;
use crate::tree::{EdgeId, EvolvingTree, NodeId, NodeKind};

/// Inserts `new_edge` with the collision-based engine.
///
/// The child is placed by sampling, the edge is split by `n_s` bend nodes
/// spread evenly along the placed segment, and `n_iters` force rounds follow
/// (see [`dynacola_round`]).
pub fn dynacola_insert(
    tree: &mut EvolvingTree,
    layout: &LayoutState,
    new_edge: EdgeId,
    params: &EngineParams,
) -> Result<LayoutState, EngineError> {
    params.validate()?;
    let (parent, _child, desired) = new_edge_endpoints(tree, layout, new_edge)?;
    let placed = place_new_node(layout, tree, parent, desired, params)?;

    let mut positions = layout.positions.clone();
    positions.push(placed);
    let origin = positions[parent.0];
    let bends = tree.subdivide(new_edge, params.n_s)?;
    let pieces = (bends.len() + 1) as f64;
    for (k, _) in bends.iter().enumerate() {
        positions.push(origin + (placed - origin) * ((k + 1) as f64 / pieces));
    }

    let mut state = LayoutState {
        positions,
        timestep: tree.timestep(),
    };
    for _ in 0..params.n_iters {
        dynacola_round(tree, &mut state, params);
    }
    Ok(state)
}

/// One round of edge springs, Barnes-Hut repulsion, collision and gravity.
///
/// Each node's step is capped at `step_cap_fraction` times the smallest
/// collision radius. If the moved drawing still has a crossing, the moved
/// endpoints of the offending segments return to their previous positions
/// until none remains; the previous drawing was crossing-free, so this
/// terminates. Returns the number of rolled-back nodes.
pub fn dynacola_round(tree: &EvolvingTree, state: &mut LayoutState, params: &EngineParams) -> usize {
    let n = state.positions.len();
    let positions = &state.positions;
    let segments = springs(tree, n, params.k_edge);
    let radii = collision_radii(tree, positions);

    let mut delta = vec![Vec2::ZERO; n];
    add_edge_forces(positions, &segments, &mut delta);

    if params.k_repulse > 0.0 && n > 1 {
        let charges: Vec<f64> = tree.nodes()[..n]
            .iter()
            .map(|rec| match rec.kind {
                NodeKind::Real => params.charge_real,
                NodeKind::Subdivision => params.charge_subdivision,
            })
            .collect();
        let bh = QuadTree::build(positions, &charges)
            .expect("finite positions")
            .with_softening(params.softening);
        let repulsion = gather(n, |i| bh.repulsion_at(positions[i], Some(i), params.theta, params.k_repulse));
        for (d, r) in delta.iter_mut().zip(repulsion) {
            *d += r;
        }
    }

    add_collision_forces(tree, positions, &radii, params.k_collide, &mut delta);

    for (d, g) in delta.iter_mut().zip(force_gravity(positions, params.k_gravity).delta) {
        *d += g;
    }

    let min_radius = radii.iter().copied().filter(|r| *r > 0.0).fold(f64::INFINITY, f64::min);
    let cap = params.step_cap_fraction * min_radius.max(params.softening);
    let previous = state.positions.clone();
    let mut moved = vec![false; n];
    for (w, d) in delta.iter().enumerate() {
        let step = d.clamp_length(cap);
        if step != Vec2::ZERO && step.is_finite() {
            state.positions[w] += step;
            moved[w] = true;
        }
    }
    roll_back_crossings(&segments, &previous, &mut state.positions, &mut moved)
}

fn roll_back_crossings(
    segments: &[Spring],
    previous: &[Point2],
    positions: &mut [Point2],
    moved: &mut [bool],
) -> usize {
    let pairs: Vec<(NodeId, NodeId)> = segments.iter().map(|s| (s.a, s.b)).collect();
    let mut reverted = 0;
    loop {
        let crossings = crossing_pairs(positions, &pairs);
        if crossings.is_empty() {
            return reverted;
        }
        let before = reverted;
        for (i, j) in crossings {
            for node in [pairs[i].0, pairs[i].1, pairs[j].0, pairs[j].1] {
                if moved[node.0] {
                    positions[node.0] = previous[node.0];
                    moved[node.0] = false;
                    reverted += 1;
                }
            }
        }
        if reverted == before {
            // crossings already present before this round; nothing to undo
            return reverted;
        }
    }
}
