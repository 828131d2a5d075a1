use evotree_core::quadtree::{QuadTree, QuadTreeError};
use evotree_core::{Point2, Vec2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STRENGTH: f64 = 300.0;
const SOFTENING: f64 = 1.0;

fn random_bodies(n: usize, seed: u64) -> (Vec<Point2>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n)
        .map(|_| Point2::new(rng.random_range(-1000.0..1000.0), rng.random_range(-1000.0..1000.0)))
        .collect();
    let charges = (0..n).map(|i| if i % 3 == 0 { 0.25 } else { 1.0 }).collect();
    (pts, charges)
}

/// Direct O(n^2) summation of the softened inverse-square law.
fn exact(pts: &[Point2], charges: &[f64]) -> Vec<Vec2> {
    (0..pts.len())
        .map(|i| {
            let mut f = Vec2::ZERO;
            for j in 0..pts.len() {
                if i == j {
                    continue;
                }
                let d = pts[i] - pts[j];
                let len = d.norm();
                let mag = STRENGTH * charges[i] * charges[j] / len.max(SOFTENING).powi(2);
                f += d * (mag / len);
            }
            f
        })
        .collect()
}

fn approx(tree: &QuadTree, pts: &[Point2], theta: f64) -> Vec<Vec2> {
    (0..pts.len())
        .map(|i| tree.repulsion_at(pts[i], Some(i), theta, STRENGTH))
        .collect()
}

#[test]
fn small_trees() {
    let t = QuadTree::build(&[Point2::new(0., 0.)], &[1.0]).unwrap();
    assert!(t.root().is_leaf());
    assert_eq!(t.root().total_charge, 1.0);
    assert_eq!(t.root().center_of_charge, Point2::new(0., 0.));

    let t = QuadTree::build(&[Point2::new(0., 0.), Point2::new(4., 4.)], &[1.0, 3.0]).unwrap();
    assert_eq!(t.root().total_charge, 4.0);
    assert_eq!(t.root().center_of_charge, Point2::new(3., 3.));

    assert_eq!(QuadTree::build(&[], &[]).unwrap_err(), QuadTreeError::Empty);
}

#[test]
fn two_body_law() {
    let pts = [Point2::new(0., 0.), Point2::new(0., 10.)];
    let t = QuadTree::build(&pts, &[1.0, 1.0]).unwrap();
    let f0 = t.repulsion_at(pts[0], Some(0), 0.0, STRENGTH);
    let f1 = t.repulsion_at(pts[1], Some(1), 0.0, STRENGTH);
    assert!((f0.norm() - STRENGTH / 100.0).abs() < 1e-12);
    assert_eq!(f0, -f1);
    assert!(f0.y < 0.0 && f0.x == 0.0);
}

#[test]
fn root_center_matches_direct_mean() {
    let (pts, charges) = random_bodies(200, 3);
    let t = QuadTree::build(&pts, &charges).unwrap();
    let q: f64 = charges.iter().sum();
    let cx = pts.iter().zip(&charges).map(|(p, c)| p.x * c).sum::<f64>() / q;
    let cy = pts.iter().zip(&charges).map(|(p, c)| p.y * c).sum::<f64>() / q;
    assert!((t.root().total_charge - q).abs() < 1e-9);
    assert!((t.root().center_of_charge.x - cx).abs() < 1e-9);
    assert!((t.root().center_of_charge.y - cy).abs() < 1e-9);
}

#[test]
fn every_cell_aggregates_its_descendants() {
    let (pts, charges) = random_bodies(300, 4);
    let t = QuadTree::build(&pts, &charges).unwrap();
    let mut stack = vec![t.root()];
    while let Some(node) = stack.pop() {
        if node.is_leaf() {
            let q: f64 = t.occupants(node).iter().map(|&i| charges[i]).sum();
            assert!((node.total_charge - q).abs() < 1e-9);
            assert!(t.occupants(node).len() <= 1);
            for &i in t.occupants(node) {
                assert!(node.region.contains(pts[i]));
            }
        } else {
            let q: f64 = t.children(node).map(|c| c.total_charge).sum();
            assert!((node.total_charge - q).abs() < 1e-9);
            stack.extend(t.children(node));
        }
    }
}

#[test]
fn theta_zero_is_exact() {
    let (pts, charges) = random_bodies(50, 5);
    let t = QuadTree::build(&pts, &charges).unwrap();
    for (a, e) in approx(&t, &pts, 0.0).iter().zip(exact(&pts, &charges)) {
        assert!((*a - e).norm() <= 1e-12 * e.norm(), "{a:?} vs {e:?}");
    }
}

/// RMS of the error vectors over RMS of the exact forces. Per-node ratios are
/// ill-conditioned wherever the exact net force nearly cancels.
fn rms_relative(approx: &[Vec2], exact: &[Vec2]) -> f64 {
    let err: f64 = approx.iter().zip(exact).map(|(a, e)| (*a - *e).norm_squared()).sum();
    let norm: f64 = exact.iter().map(|e| e.norm_squared()).sum();
    (err / norm).sqrt()
}

#[test]
fn default_theta_within_one_percent_rms() {
    for seed in 0..5 {
        let (pts, charges) = random_bodies(500, seed);
        let t = QuadTree::build(&pts, &charges).unwrap();
        let rms = rms_relative(&approx(&t, &pts, 0.9), &exact(&pts, &charges));
        assert!(rms < 0.01, "seed {seed}: rms relative error {rms}");
    }
}

#[test]
fn momentum_vanishes() {
    let (pts, charges) = random_bodies(500, 7);
    let exact = exact(&pts, &charges);
    let scale: f64 = exact.iter().map(|f| f.norm()).sum();
    let net = exact.iter().fold(Vec2::ZERO, |a, f| a + *f);
    assert!(net.norm() <= 1e-9 * scale);

    let t = QuadTree::build(&pts, &charges).unwrap();
    let bh = approx(&t, &pts, 0.9);
    let net = bh.iter().fold(Vec2::ZERO, |a, f| a + *f);
    assert!(net.norm() <= 0.01 * scale, "net {net:?}, scale {scale}");
}

#[test]
fn coincident_bodies_terminate_and_repel() {
    let pts = vec![Point2::new(1.0, 1.0); 40];
    let t = QuadTree::build(&pts, &vec![1.0; 40]).unwrap();
    let f = t.repulsion_at(pts[0], Some(0), 0.9, STRENGTH);
    assert!(f.is_finite());
    let sum = (0..40).fold(Vec2::ZERO, |a, i| a + t.repulsion_at(pts[i], Some(i), 0.9, STRENGTH));
    assert!(sum.norm() < 1e-9 * STRENGTH);
}

proptest! {
    #[test]
    fn build_is_deterministic(raw in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..60)) {
        let pts: Vec<Point2> = raw.iter().map(|&(x, y)| Point2::new(x, y)).collect();
        let charges = vec![1.0; pts.len()];
        let a = QuadTree::build(&pts, &charges).unwrap();
        let b = QuadTree::build(&pts, &charges).unwrap();
        for (i, p) in pts.iter().enumerate() {
            prop_assert_eq!(a.repulsion_at(*p, Some(i), 0.9, 1.0), b.repulsion_at(*p, Some(i), 0.9, 1.0));
        }
    }
}
