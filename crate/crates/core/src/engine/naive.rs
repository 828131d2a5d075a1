use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::forces::{add_edge_forces, force_gravity};
use super::{gather, new_edge_endpoints, springs, step_rng, EngineError, EngineParams, LayoutState};
use crate::geometry::{Point2, Vec2};
use crate::quadtree::QuadTree;
use crate::tree::{EdgeId, EvolvingTree};

/// Stream offset keeping redraw randomness apart from placement sampling.
const REDRAW_STREAM: u64 = 1 << 40;

/// Full-redraw baseline: forgets the previous drawing entirely.
///
/// Every node restarts from a seeded random position in a disc sized to the
/// tree, followed by `4 * n_iters` rounds of springs, repulsion and gravity
/// with no crossing protection.
pub fn naive_redraw_insert(
    tree: &EvolvingTree,
    layout: &LayoutState,
    new_edge: EdgeId,
    params: &EngineParams,
) -> Result<LayoutState, EngineError> {
    params.validate()?;
    new_edge_endpoints(tree, layout, new_edge)?;
    let n = tree.node_count();
    let segments = springs(tree, n, params.k_edge);
    let mean_length = segments.iter().map(|s| s.rest).sum::<f64>() / segments.len().max(1) as f64;

    let mut rng = step_rng(params.seed, REDRAW_STREAM + n as u64);
    let disc = mean_length * libm::sqrt(n as f64);
    let mut positions: Vec<Point2> = (0..n)
        .map(|_| {
            let r = disc * libm::sqrt(rng.random::<f64>());
            let angle = rng.random::<f64>() * core::f64::consts::TAU;
            Point2::ORIGIN + Vec2::from_angle(angle) * r
        })
        .collect();

    let charges = vec![params.charge_real; n];
    for _ in 0..4 * params.n_iters {
        let mut delta = vec![Vec2::ZERO; n];
        add_edge_forces(&positions, &segments, &mut delta);
        if params.k_repulse > 0.0 {
            let bh = QuadTree::build(&positions, &charges)
                .expect("finite positions")
                .with_softening(params.softening);
            let rep = gather(n, |i| bh.repulsion_at(positions[i], Some(i), params.theta, params.k_repulse));
            for (d, r) in delta.iter_mut().zip(rep) {
                *d += r;
            }
        }
        let gravity = force_gravity(&positions, params.k_gravity);
        for ((p, d), g) in positions.iter_mut().zip(&delta).zip(&gravity.delta) {
            *p += (*d + *g).clamp_length(mean_length);
        }
    }
    Ok(LayoutState {
        positions,
        timestep: tree.timestep(),
    })
}
