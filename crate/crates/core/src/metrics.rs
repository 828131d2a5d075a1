//! Layout quality measures: desired edge length, compactness, stability,
//! stress, and exact crossing counts.

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::engine::LayoutState;
use crate::geometry::{bounding_rect, closed_segments_intersect, Point2, Rect2};
use crate::tree::{EvolvingTree, NodeId, MAX_LABEL_CHARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("layout has no edges")]
    NoEdges,
    #[error("zero desired length")]
    ZeroDesiredLength,
    #[error("degenerate layout: {0}")]
    Degenerate(&'static str),
    #[error("trace must contain at least 2 frames")]
    TooFewFrames,
    #[error("layout is missing positions for {0} nodes")]
    MissingPositions(usize),
}

/// Label box dimensions in layout units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelSpec {
    pub char_width: f64,
    pub line_height: f64,
    pub max_chars: usize,
}

impl Default for LabelSpec {
    fn default() -> Self {
        LabelSpec {
            char_width: 8.0,
            line_height: 16.0,
            max_chars: MAX_LABEL_CHARS,
        }
    }
}

impl LabelSpec {
    /// Box width for a label of `chars` characters; empty labels take one cell.
    pub fn width(&self, chars: usize) -> f64 {
        chars.clamp(1, self.max_chars) as f64 * self.char_width
    }

    pub fn area(&self, chars: usize) -> f64 {
        self.width(chars) * self.line_height
    }
}

/// All five measures at one checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub timestep: usize,
    pub node_count: usize,
    pub del_loss: f64,
    pub compactness_loss: f64,
    pub stability_loss: f64,
    pub stress_loss: f64,
    pub crossing_count: usize,
    pub elapsed_ms: Option<f64>,
}

impl MetricsReport {
    /// Scores the last frame of `frames`; stability covers the whole slice.
    ///
    /// Measures that are undefined for the frame (a single node, one frame)
    /// are reported as 0.
    pub fn compute(
        tree: &EvolvingTree,
        frames: &[LayoutState],
        spec: &LabelSpec,
        elapsed_ms: Option<f64>,
    ) -> Result<Self, MetricsError> {
        let last = frames.last().ok_or(MetricsError::TooFewFrames)?;
        let present = real_nodes_in(tree, last);
        let single = present.len() < 2;
        let segments: Vec<(NodeId, NodeId)> = tree
            .segments()
            .filter(|(a, b)| a.0 < last.positions.len() && b.0 < last.positions.len())
            .collect();
        Ok(MetricsReport {
            timestep: last.timestep,
            node_count: present.len(),
            del_loss: if single { 0.0 } else { del_loss(tree, last)? },
            compactness_loss: if single {
                0.0
            } else {
                compactness_loss(tree, last, spec)?
            },
            stability_loss: if frames.len() < 2 || single {
                0.0
            } else {
                stability_loss(tree, frames)?
            },
            stress_loss: if single { 0.0 } else { stress_loss(tree, last)? },
            crossing_count: count_crossings(&last.positions, &segments),
            elapsed_ms,
        })
    }
}

fn real_nodes_in(tree: &EvolvingTree, layout: &LayoutState) -> Vec<NodeId> {
    tree.real_nodes()
        .iter()
        .copied()
        .filter(|v| v.0 < layout.positions.len())
        .collect()
}

/// Realized polyline length and desired length of every real edge drawn in
/// `layout`.
fn realized_edges(tree: &EvolvingTree, layout: &LayoutState) -> Vec<(f64, f64)> {
    let n = layout.positions.len();
    tree.edges()
        .iter()
        .filter(|e| e.segments.iter().all(|(a, b)| a.0 < n && b.0 < n))
        .map(|e| {
            let realized = e
                .segments
                .iter()
                .map(|(a, b)| layout.positions[a.0].distance(layout.positions[b.0]))
                .sum();
            (realized, e.desired_length)
        })
        .collect()
}

/// Root-mean-square relative error of realized versus desired edge lengths.
pub fn del_loss_from_lengths(edges: &[(f64, f64)]) -> Result<f64, MetricsError> {
    if edges.is_empty() {
        return Err(MetricsError::NoEdges);
    }
    let mut sum = 0.0;
    for &(realized, desired) in edges {
        if desired == 0.0 {
            return Err(MetricsError::ZeroDesiredLength);
        }
        let rel = (realized - desired) / desired;
        sum += rel * rel;
    }
    Ok(libm::sqrt(sum / edges.len() as f64))
}

/// Desired-edge-length loss over real edges; subdivided edges are measured
/// along their polyline.
pub fn del_loss(tree: &EvolvingTree, layout: &LayoutState) -> Result<f64, MetricsError> {
    del_loss_from_lengths(&realized_edges(tree, layout))
}

/// Smallest scale `s >= 1` at which no two label boxes centred on `s * p`
/// overlap.
///
/// Two boxes are disjoint once separated along either axis, so every pair
/// contributes the smaller of its two per-axis thresholds and the answer is
/// the largest such threshold.
pub fn min_separating_scale(
    points: &[Point2],
    widths: &[f64],
    height: f64,
) -> Result<f64, MetricsError> {
    let mut scale: f64 = 1.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dx = libm::fabs(points[i].x - points[j].x);
            let dy = libm::fabs(points[i].y - points[j].y);
            if dx == 0.0 && dy == 0.0 {
                return Err(MetricsError::Degenerate("two labels share a position"));
            }
            let need_x = if dx > 0.0 {
                (widths[i] + widths[j]) / 2.0 / dx
            } else {
                f64::INFINITY
            };
            let need_y = if dy > 0.0 { height / dy } else { f64::INFINITY };
            scale = scale.max(need_x.min(need_y));
        }
    }
    Ok(scale)
}

/// Drawing area over total label area once the drawing is scaled until no
/// labels overlap. `label_chars[v]` is the character count of label `v`.
pub fn compactness_from_labels(
    points: &[Point2],
    label_chars: &[usize],
    spec: &LabelSpec,
) -> Result<f64, MetricsError> {
    if points.len() < 2 {
        return Err(MetricsError::Degenerate("fewer than 2 nodes"));
    }
    let widths: Vec<f64> = label_chars.iter().map(|&c| spec.width(c)).collect();
    let s = min_separating_scale(points, &widths, spec.line_height)?;
    let mut area_sum = 0.0;
    let mut bounds: Option<Rect2> = None;
    for (p, &w) in points.iter().zip(&widths) {
        let rect = Rect2::centered(Point2::new(p.x * s, p.y * s), w, spec.line_height);
        bounds = Some(bounds.map_or(rect, |b| b.union(&rect)));
        area_sum += w * spec.line_height;
    }
    Ok(bounds.expect("at least two points").area() / area_sum)
}

/// Compactness loss over the real nodes of `layout`.
pub fn compactness_loss(
    tree: &EvolvingTree,
    layout: &LayoutState,
    spec: &LabelSpec,
) -> Result<f64, MetricsError> {
    let present = real_nodes_in(tree, layout);
    let points: Vec<Point2> = present.iter().map(|v| layout.positions[v.0]).collect();
    let chars: Vec<usize> = present
        .iter()
        .map(|v| tree.node(*v).map_or(0, |n| n.label_chars()))
        .collect();
    compactness_from_labels(&points, &chars, spec)
}

/// Total movement of real nodes between consecutive frames, divided by the
/// bounding area of the final frame.
///
/// A node contributes only between frames that both contain it, so the jump
/// into its first position is not counted.
pub fn stability_loss(tree: &EvolvingTree, frames: &[LayoutState]) -> Result<f64, MetricsError> {
    if frames.len() < 2 {
        return Err(MetricsError::TooFewFrames);
    }
    let mut movement = 0.0;
    for pair in frames.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        for v in tree.real_nodes() {
            if v.0 < prev.positions.len() && v.0 < next.positions.len() {
                movement += prev.positions[v.0].distance(next.positions[v.0]);
            }
        }
    }
    let last = frames.last().expect("len >= 2");
    let points: Vec<Point2> = real_nodes_in(tree, last)
        .iter()
        .map(|v| last.positions[v.0])
        .collect();
    let area = bounding_rect(&points)
        .map_err(|_| MetricsError::Degenerate("final frame is empty"))?
        .area();
    if area <= 0.0 {
        return Err(MetricsError::Degenerate("final frame has zero bounding area"));
    }
    Ok(movement / area)
}

/// Normalized stress over unordered real-node pairs.
///
/// Positions are first rescaled so the mean realized edge length equals the
/// mean desired edge length, which makes the value independent of the
/// drawing's overall scale.
pub fn stress_loss(tree: &EvolvingTree, layout: &LayoutState) -> Result<f64, MetricsError> {
    let present = real_nodes_in(tree, layout);
    if present.len() < 2 {
        return Err(MetricsError::Degenerate("fewer than 2 nodes"));
    }
    let edges = realized_edges(tree, layout);
    if edges.is_empty() {
        return Err(MetricsError::NoEdges);
    }
    let realized: f64 = edges.iter().map(|e| e.0).sum();
    let desired: f64 = edges.iter().map(|e| e.1).sum();
    if realized <= 0.0 {
        return Err(MetricsError::Degenerate("all edges have zero length"));
    }
    let scale = desired / realized;

    let dist = tree.distances();
    let (mut num, mut den) = (0.0, 0.0);
    for (a, &u) in present.iter().enumerate() {
        let ou = tree.ordinal(u).expect("real node");
        for &v in &present[a + 1..] {
            let ov = tree.ordinal(v).expect("real node");
            let d = layout.positions[u.0].distance(layout.positions[v.0]) * scale;
            let diff = dist.get(ou, ov) - d;
            num += diff * diff;
            den += d;
        }
    }
    if den <= 0.0 {
        return Err(MetricsError::Degenerate("all nodes coincide"));
    }
    Ok(libm::sqrt(num) / den)
}

/// Segments `s` and `t` are both drawn and share no node.
#[inline]
fn independent(s: (NodeId, NodeId), t: (NodeId, NodeId)) -> bool {
    s.0 != t.0 && s.0 != t.1 && s.1 != t.0 && s.1 != t.1
}

/// O(S²) reference crossing count.
///
/// Pairs that share a node id never count; any other pair whose closed
/// segments meet does, including a segment passing through a node point.
pub fn count_crossings_brute_force(positions: &[Point2], segments: &[(NodeId, NodeId)]) -> usize {
    let mut count = 0;
    for (i, &s) in segments.iter().enumerate() {
        for &t in &segments[i + 1..] {
            if independent(s, t)
                && closed_segments_intersect(
                    positions[s.0 .0],
                    positions[s.1 .0],
                    positions[t.0 .0],
                    positions[t.1 .0],
                )
            {
                count += 1;
            }
        }
    }
    count
}

/// Index pairs `(i, j)`, `i < j`, of crossing segments, found with a sweep
/// over x-extents. Matches the brute-force predicate exactly.
pub fn crossing_pairs(positions: &[Point2], segments: &[(NodeId, NodeId)]) -> Vec<(usize, usize)> {
    let boxes: Vec<Rect2> = segments
        .iter()
        .map(|&(a, b)| Rect2::from_corners(positions[a.0], positions[b.0]))
        .collect();
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_unstable_by(|&i, &j| {
        boxes[i]
            .min
            .x
            .partial_cmp(&boxes[j].min.x)
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });

    let mut pairs = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let bi = boxes[i];
        for &j in &order[k + 1..] {
            let bj = boxes[j];
            if bj.min.x > bi.max.x {
                break;
            }
            if bj.min.y > bi.max.y || bi.min.y > bj.max.y {
                continue;
            }
            let (s, t) = (segments[i], segments[j]);
            if independent(s, t)
                && closed_segments_intersect(
                    positions[s.0 .0],
                    positions[s.1 .0],
                    positions[t.0 .0],
                    positions[t.1 .0],
                )
            {
                pairs.push((i.min(j), i.max(j)));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Number of crossing segment pairs (sweep-accelerated).
pub fn count_crossings(positions: &[Point2], segments: &[(NodeId, NodeId)]) -> usize {
    crossing_pairs(positions, segments).len()
}
