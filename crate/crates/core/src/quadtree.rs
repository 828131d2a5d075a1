//! Barnes-Hut quadtree for the all-pairs repulsive force.
//!
//! Bodies are addressed by their index in the slices passed to
//! [`QuadTree::build`]. The tree is immutable once built and is rebuilt every
//! force round.

use alloc::vec::Vec;

use thiserror::Error;

use crate::fallback::separating_axis;
use crate::geometry::{Point2, Rect2, Vec2};

/// Deeper cells aggregate all their bodies into one leaf.
pub const MAX_DEPTH: usize = 32;

/// Softening floor of the inverse-square law, in layout units.
pub const DEFAULT_SOFTENING: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadTreeError {
    #[error("cannot build a quadtree over zero bodies")]
    Empty,
    #[error("{positions} positions but {charges} charges")]
    LengthMismatch { positions: usize, charges: usize },
    #[error("body {0} has a non-finite position or charge")]
    NonFinite(usize),
}

#[derive(Debug, Clone)]
pub struct QuadNode {
    pub region: Rect2,
    pub total_charge: f64,
    pub center_of_charge: Point2,
    /// Number of bodies below this cell.
    pub count: usize,
    /// Traceless quadrupole `(xx, xy, yy)` about `center_of_charge`.
    pub quadrupole: [f64; 3],
    children: Option<[u32; 4]>,
    /// Range into the occupant table; non-empty only for leaves.
    occupants: (u32, u32),
}

impl QuadNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct QuadTree {
    nodes: Vec<QuadNode>,
    occupants: Vec<usize>,
    positions: Vec<Point2>,
    charges: Vec<f64>,
    softening: f64,
}

impl QuadTree {
    pub fn build(positions: &[Point2], charges: &[f64]) -> Result<Self, QuadTreeError> {
        if positions.is_empty() {
            return Err(QuadTreeError::Empty);
        }
        if positions.len() != charges.len() {
            return Err(QuadTreeError::LengthMismatch {
                positions: positions.len(),
                charges: charges.len(),
            });
        }
        for (i, (p, q)) in positions.iter().zip(charges).enumerate() {
            if !p.is_finite() || !q.is_finite() {
                return Err(QuadTreeError::NonFinite(i));
            }
        }

        let mut bounds = crate::geometry::bounding_rect(positions).expect("non-empty");
        let side = bounds.width().max(bounds.height()).max(1e-9);
        bounds.max = Point2::new(bounds.min.x + side, bounds.min.y + side);

        let mut tree = QuadTree {
            nodes: Vec::with_capacity(2 * positions.len()),
            occupants: Vec::with_capacity(positions.len()),
            positions: positions.to_vec(),
            charges: charges.to_vec(),
            softening: DEFAULT_SOFTENING,
        };
        let ids: Vec<usize> = (0..positions.len()).collect();
        tree.build_cell(bounds, ids, 0);
        Ok(tree)
    }

    pub fn with_softening(mut self, softening: f64) -> Self {
        self.softening = softening;
        self
    }

    pub fn root(&self) -> &QuadNode {
        &self.nodes[0]
    }

    pub fn children(&self, node: &QuadNode) -> impl Iterator<Item = &QuadNode> {
        node.children
            .into_iter()
            .flatten()
            .map(move |c| &self.nodes[c as usize])
    }

    pub fn occupants(&self, node: &QuadNode) -> &[usize] {
        &self.occupants[node.occupants.0 as usize..node.occupants.1 as usize]
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    fn build_cell(&mut self, region: Rect2, ids: Vec<usize>, depth: usize) -> u32 {
        let index = self.nodes.len() as u32;
        self.nodes.push(QuadNode {
            region,
            total_charge: 0.0,
            center_of_charge: region.center(),
            count: ids.len(),
            quadrupole: [0.0; 3],
            children: None,
            occupants: (0, 0),
        });

        let all_coincident = ids.windows(2).all(|w| self.positions[w[0]] == self.positions[w[1]]);
        if ids.len() <= 1 || depth >= MAX_DEPTH || all_coincident {
            let start = self.occupants.len() as u32;
            let (charge, center) = self.aggregate_bodies(&ids);
            let mut quad = [0.0; 3];
            if let Some(c) = center {
                for &i in &ids {
                    add_quadrupole(&mut quad, self.charges[i], self.positions[i] - c);
                }
            }
            self.occupants.extend_from_slice(&ids);
            let node = &mut self.nodes[index as usize];
            node.occupants = (start, self.occupants.len() as u32);
            node.total_charge = charge;
            node.quadrupole = quad;
            if let Some(c) = center {
                node.center_of_charge = c;
            }
            return index;
        }

        let mid = region.center();
        let mut quadrants: [Vec<usize>; 4] = Default::default();
        for id in ids {
            let p = self.positions[id];
            let east = p.x >= mid.x;
            let north = p.y >= mid.y;
            quadrants[(north as usize) << 1 | east as usize].push(id);
        }
        let sub = [
            Rect2::from_corners(region.min, mid),
            Rect2::from_corners(Point2::new(mid.x, region.min.y), Point2::new(region.max.x, mid.y)),
            Rect2::from_corners(Point2::new(region.min.x, mid.y), Point2::new(mid.x, region.max.y)),
            Rect2::from_corners(mid, region.max),
        ];
        let mut children = [0u32; 4];
        for (k, bodies) in quadrants.into_iter().enumerate() {
            children[k] = self.build_cell(sub[k], bodies, depth + 1);
        }

        let (mut charge, mut wx, mut wy, mut n) = (0.0, 0.0, 0.0, 0usize);
        let (mut mx, mut my) = (0.0, 0.0);
        for &c in &children {
            let child = &self.nodes[c as usize];
            if child.count == 0 {
                continue;
            }
            charge += child.total_charge;
            wx += child.total_charge * child.center_of_charge.x;
            wy += child.total_charge * child.center_of_charge.y;
            mx += child.count as f64 * child.center_of_charge.x;
            my += child.count as f64 * child.center_of_charge.y;
            n += child.count;
        }
        let center = if charge > 0.0 {
            Point2::new(wx / charge, wy / charge)
        } else {
            Point2::new(mx / n as f64, my / n as f64)
        };
        // parallel-axis shift of each child's moment to the new centre
        let mut quad = [0.0; 3];
        for &c in &children {
            let child = &self.nodes[c as usize];
            if child.count == 0 {
                continue;
            }
            for (q, cq) in quad.iter_mut().zip(child.quadrupole) {
                *q += cq;
            }
            add_quadrupole(&mut quad, child.total_charge, child.center_of_charge - center);
        }
        let node = &mut self.nodes[index as usize];
        node.children = Some(children);
        node.total_charge = charge;
        node.center_of_charge = center;
        node.quadrupole = quad;
        index
    }

    /// Charge sum and charge-weighted centre (plain mean if all charges vanish).
    fn aggregate_bodies(&self, ids: &[usize]) -> (f64, Option<Point2>) {
        if ids.is_empty() {
            return (0.0, None);
        }
        let charge: f64 = ids.iter().map(|&i| self.charges[i]).sum();
        let (sx, sy) = if charge > 0.0 {
            ids.iter().fold((0.0, 0.0), |(x, y), &i| {
                let q = self.charges[i];
                (x + q * self.positions[i].x, y + q * self.positions[i].y)
            })
        } else {
            ids.iter().fold((0.0, 0.0), |(x, y), &i| {
                (x + self.positions[i].x, y + self.positions[i].y)
            })
        };
        let w = if charge > 0.0 { charge } else { ids.len() as f64 };
        (charge, Some(Point2::new(sx / w, sy / w)))
    }

    /// Barnes-Hut repulsion felt at `p`.
    ///
    /// A cell is accepted as one pseudo-body when it does not contain `p` and
    /// `width / distance < theta`; `theta = 0` therefore reduces to exact
    /// pairwise summation. The body `self_id` is skipped and its own charge
    /// scales the result (1 when `self_id` is `None`).
    pub fn repulsion_at(&self, p: Point2, self_id: Option<usize>, theta: f64, strength: f64) -> Vec2 {
        let own_charge = self_id.map_or(1.0, |i| self.charges[i]);
        let scale = strength * own_charge;
        let mut force = Vec2::ZERO;
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(idx) = stack.pop() {
            let node = &self.nodes[idx as usize];
            if node.count == 0 {
                continue;
            }
            match node.children {
                None => {
                    for &j in self.occupants(node) {
                        if Some(j) == self_id {
                            continue;
                        }
                        let delta = p - self.positions[j];
                        let dir = unit_or_fallback(delta, self_id.unwrap_or(usize::MAX), j);
                        force += dir * inverse_square(delta.norm(), scale * self.charges[j], self.softening);
                    }
                }
                Some(children) => {
                    let delta = p - node.center_of_charge;
                    let dist = delta.norm();
                    if !node.region.contains(p) && dist > 0.0 && node.region.width() < theta * dist {
                        force += delta * (inverse_square(dist, scale * node.total_charge, self.softening) / dist);
                        if dist > self.softening {
                            force += quadrupole_force(node.quadrupole, delta, dist) * scale;
                        }
                    } else {
                        // reverse so the traversal visits quadrants in index order
                        stack.extend(children.iter().rev());
                    }
                }
            }
        }
        force
    }
}

/// Adds the moment of charge `q` at offset `d` from the expansion centre.
#[inline]
fn add_quadrupole(quad: &mut [f64; 3], q: f64, d: Vec2) {
    quad[0] += q * (2.0 * d.x * d.x - d.y * d.y);
    quad[1] += q * 3.0 * d.x * d.y;
    quad[2] += q * (2.0 * d.y * d.y - d.x * d.x);
}

/// Second-order correction of the far-field force at offset `r` (`|r| = dist`)
/// from a cell's centre of charge. The law `q r / |r|^3` derives from the
/// potential `q / |r|`, whose expansion this is.
#[inline]
fn quadrupole_force(quad: [f64; 3], r: Vec2, dist: f64) -> Vec2 {
    let qr = Vec2::new(quad[0] * r.x + quad[1] * r.y, quad[1] * r.x + quad[2] * r.y);
    let rqr = r.dot(qr);
    let d2 = dist * dist;
    let d5 = d2 * d2 * dist;
    qr * (-1.0 / d5) + r * (2.5 * rqr / (d5 * d2))
}

/// Magnitude of the softened inverse-square law.
#[inline]
pub fn inverse_square(dist: f64, charge_strength: f64, softening: f64) -> f64 {
    let d = dist.max(softening);
    charge_strength / (d * d)
}

/// `delta / |delta|`, or a deterministic pair axis when `delta` vanishes.
#[inline]
pub(crate) fn unit_or_fallback(delta: Vec2, a: usize, b: usize) -> Vec2 {
    let n = delta.norm();
    if n > 0.0 {
        delta * (1.0 / n)
    } else {
        separating_axis(a, b)
    }
}
