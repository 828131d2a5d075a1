//! Force laws. Every function returns displacements, not accelerations:
//! the engines add them straight onto positions.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{gather, Displacement, EngineParams, LayoutState, Spring};
use crate::fallback::separating_axis;
use crate::geometry::{Point2, Vec2};
use crate::quadtree::{inverse_square, unit_or_fallback};
use crate::tree::{EvolvingTree, NodeId};

/// Spring along one segment: `k_edge * (|ab| - desired)` on each endpoint,
/// pulling together when too long and apart when too short.
pub fn force_edge(seg: (Point2, Point2), desired: f64, k_edge: f64) -> (Vec2, Vec2) {
    edge_between(seg.0, seg.1, 0, 1, desired, k_edge)
}

#[inline]
pub(crate) fn edge_between(a: Point2, b: Point2, ia: usize, ib: usize, desired: f64, k: f64) -> (Vec2, Vec2) {
    let ab = b - a;
    let len = ab.norm();
    if len == 0.0 {
        // coincident endpoints: push apart at full strength
        let axis = separating_axis(ia, ib);
        let f = axis * (k * desired);
        return (-f, f);
    }
    let f = ab * (k * (len - desired) / len);
    (f, -f)
}

pub(crate) fn add_edge_forces(positions: &[Point2], springs: &[Spring], out: &mut [Vec2]) {
    for s in springs {
        let (fa, fb) = edge_between(positions[s.a.0], positions[s.b.0], s.a.0, s.b.0, s.rest, s.stiffness);
        out[s.a.0] += fa;
        out[s.b.0] += fb;
    }
}

/// Pull of every node towards the centroid: `k_gravity * (centroid - x)`.
pub fn force_gravity(positions: &[Point2], k_gravity: f64) -> Displacement {
    if positions.is_empty() {
        return Displacement::zeros(0);
    }
    let n = positions.len() as f64;
    let (sx, sy) = positions.iter().fold((0.0, 0.0), |(x, y), p| (x + p.x, y + p.y));
    let centroid = Point2::new(sx / n, sy / n);
    Displacement {
        delta: positions.iter().map(|p| (centroid - *p) * k_gravity).collect(),
    }
}

/// Collision radius of each node: half its longest incident segment.
pub fn collision_radii(tree: &EvolvingTree, positions: &[Point2]) -> Vec<f64> {
    (0..positions.len())
        .map(|w| {
            tree.neighbors(NodeId(w))
                .iter()
                .filter(|x| x.0 < positions.len())
                .map(|x| positions[w].distance(positions[x.0]))
                .fold(0.0, f64::max)
                / 2.0
        })
        .collect()
}

/// Separating push between overlapping collision circles.
///
/// Each node of an overlapping pair that is not joined by a segment moves
/// `k_collide * (r_w + r_x - d) / 2` away from the other.
pub fn force_collision(tree: &EvolvingTree, layout: &LayoutState, params: &EngineParams) -> Displacement {
    let radii = collision_radii(tree, &layout.positions);
    let mut out = vec![Vec2::ZERO; layout.positions.len()];
    add_collision_forces(tree, &layout.positions, &radii, params.k_collide, &mut out);
    Displacement { delta: out }
}

pub(crate) fn add_collision_forces(
    tree: &EvolvingTree,
    positions: &[Point2],
    radii: &[f64],
    k_collide: f64,
    out: &mut [Vec2],
) {
    let n = positions.len();
    let mut order: Vec<usize> = (0..n).collect();
    let left = |i: usize| positions[i].x - radii[i];
    order.sort_unstable_by(|&i, &j| {
        left(i)
            .partial_cmp(&left(j))
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });
    for (k, &w) in order.iter().enumerate() {
        let right = positions[w].x + radii[w];
        for &x in &order[k + 1..] {
            if left(x) >= right {
                break;
            }
            let reach = radii[w] + radii[x];
            let delta = positions[w] - positions[x];
            if delta.y.abs() >= reach {
                continue;
            }
            let dist = delta.norm();
            if dist >= reach || tree.neighbors(NodeId(w)).contains(&NodeId(x)) {
                continue;
            }
            let push = unit_or_fallback(delta, w, x) * (k_collide * (reach - dist) / 2.0);
            out[w] += push;
            out[x] -= push;
        }
    }
}

/// Stress force between real nodes not joined by an edge.
///
/// Each end moves `k_stress * (|x_i - x_j| - D_ij) / D_ij` towards the other
/// when too far apart and away when too close.
pub fn force_stress(tree: &EvolvingTree, layout: &LayoutState, k_stress: f64) -> Displacement {
    pairwise(tree, &layout.positions, Some(k_stress), None)
}

/// Pairwise inverse-square repulsion with elliptical contours.
///
/// The force magnitude is evaluated at the distance obtained after dividing
/// the x-separation by `ellipse_aspect`, and acts along the true separation.
/// Horizontally separated nodes therefore repel more strongly than vertically
/// separated ones at the same distance; `ellipse_aspect = 1` is the plain
/// circular law.
pub fn force_repulse_elliptical(
    positions: &[Point2],
    k_repulse: f64,
    ellipse_aspect: f64,
    softening: f64,
) -> Displacement {
    let delta = gather(positions.len(), |i| {
        let mut f = Vec2::ZERO;
        for (j, pj) in positions.iter().enumerate() {
            if j != i {
                f += elliptical_pair(positions[i], *pj, i, j, k_repulse, ellipse_aspect, softening);
            }
        }
        f
    });
    Displacement { delta }
}

#[inline]
fn elliptical_pair(pi: Point2, pj: Point2, i: usize, j: usize, k: f64, aspect: f64, softening: f64) -> Vec2 {
    let delta = pi - pj;
    let sx = delta.x / aspect;
    let scaled = libm::sqrt(sx * sx + delta.y * delta.y);
    unit_or_fallback(delta, i, j) * inverse_square(scaled, k, softening)
}

/// Stress and/or elliptical repulsion gathered per real node; the layout must
/// cover every real node. Returns a displacement for every position.
pub(crate) fn pairwise(
    tree: &EvolvingTree,
    positions: &[Point2],
    k_stress: Option<f64>,
    repulse: Option<(f64, f64, f64)>,
) -> Displacement {
    let real: Vec<NodeId> = tree
        .real_nodes()
        .iter()
        .copied()
        .filter(|v| v.0 < positions.len())
        .collect();
    let dist = tree.distances();
    let per_real = gather(real.len(), |i| {
        let u = real[i];
        let pu = positions[u.0];
        let mut f = Vec2::ZERO;
        for (j, &v) in real.iter().enumerate() {
            if j == i {
                continue;
            }
            let pv = positions[v.0];
            if let Some(k) = k_stress {
                if !tree.are_tree_adjacent(u, v) {
                    let delta = pu - pv;
                    let d = delta.norm();
                    let target = dist.get(i, j);
                    f -= unit_or_fallback(delta, u.0, v.0) * (k * (d - target) / target);
                }
            }
            if let Some((k, aspect, softening)) = repulse {
                f += elliptical_pair(pu, pv, u.0, v.0, k, aspect, softening);
            }
        }
        f
    });
    let mut delta = vec![Vec2::ZERO; positions.len()];
    for (v, f) in real.iter().zip(per_real) {
        delta[v.0] = f;
    }
    Displacement { delta }
}
