mod common;

use common::{grow, random_tree};
use evotree_core::engine::{
    collision_radii, dynacola_insert, dynasafe_insert, dynasafe_insert_logged, force_collision,
    force_edge, force_gravity, force_repulse_elliptical, force_stress, naive_redraw_insert,
    place_new_node, Algorithm,
};
use evotree_core::geometry::closed_segments_intersect;
use evotree_core::metrics::{count_crossings_brute_force, del_loss, stability_loss};
use evotree_core::quadtree::QuadTree;
use evotree_core::{EngineError, EngineParams, EvolvingTree, LayoutState, NodeId, Point2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zero_crossings_every_step(algorithm: Algorithm) {
    let edges = random_tree(100, 5, 0);
    grow(algorithm, EngineParams::default(), &edges, |s| {
        let segments = s.segments();
        assert_eq!(
            count_crossings_brute_force(&s.layout().positions, &segments),
            0,
            "{} crossed at step {}",
            algorithm.name(),
            s.tree().timestep()
        );
    });
}

#[test]
fn dynacola_hundred_insertions_stay_crossing_free() {
    zero_crossings_every_step(Algorithm::DynaCola);
}

#[test]
fn dynasafe_hundred_insertions_stay_crossing_free() {
    zero_crossings_every_step(Algorithm::DynaSafe);
}

#[test]
fn dynacola_keeps_subdivisions() {
    for n_s in [0, 1, 3] {
        let params = EngineParams { n_s, ..EngineParams::default() };
        let s = grow(Algorithm::DynaCola, params, &random_tree(30, 5, 4), |_| {});
        assert_eq!(s.layout().positions.len(), s.tree().node_count());
        for e in s.tree().edges() {
            assert_eq!(e.bends().count(), n_s);
            assert_eq!(e.segments.len(), n_s + 1);
        }
    }
}

#[test]
fn sessions_are_deterministic() {
    for alg in [Algorithm::DynaCola, Algorithm::DynaSafe, Algorithm::Naive] {
        let edges = random_tree(40, 5, 9);
        let params = EngineParams { seed: 99, ..EngineParams::default() };
        let a = grow(alg, params.clone(), &edges, |_| {});
        let b = grow(alg, params, &edges, |_| {});
        assert_eq!(a.layout(), b.layout(), "{}", alg.name());
    }
}

#[test]
fn first_child_relaxes_to_desired_length() {
    for alg in [Algorithm::DynaCola, Algorithm::DynaSafe] {
        let s = grow(alg, EngineParams::default(), &[(0, 1)], |_| {});
        assert_eq!(s.tree().real_count(), 2);
        assert_eq!(s.crossings(), 0);
        let del = del_loss(s.tree(), s.layout()).unwrap();
        assert!(del < 0.2, "{}: del {del}", alg.name());
    }
}

#[test]
fn star_relaxes_within_ten_percent() {
    let star: Vec<(usize, usize)> = (1..=5).map(|i| (0, i)).collect();
    for alg in [Algorithm::DynaCola, Algorithm::DynaSafe] {
        let params = EngineParams { n_iters: 200, ..EngineParams::default() };
        let s = grow(alg, params, &star, |_| {});
        let del = del_loss(s.tree(), s.layout()).unwrap();
        assert!(del < 0.1, "{}: del {del}", alg.name());
    }
}

/// Returns the tree and layout after `n` insertions plus the next edge, not
/// yet laid out.
fn pending_insertion(alg: Algorithm, n: usize) -> (EvolvingTree, LayoutState, evotree_core::EdgeId) {
    let edges = random_tree(n + 2, 5, 21);
    let s = grow(alg, EngineParams::default(), &edges[..n], |_| {});
    let mut tree = s.tree().clone();
    let (parent, _) = edges[n];
    let parent = tree.real_nodes()[parent];
    let e = tree.add_child(parent, "next", 100.0).unwrap();
    (tree, s.layout().clone(), e)
}

#[test]
fn zero_rounds_only_place() {
    let params = EngineParams { n_iters: 0, ..EngineParams::default() };

    let (mut tree, layout, e) = pending_insertion(Algorithm::DynaCola, 15);
    let out = dynacola_insert(&mut tree, &layout, e, &params).unwrap();
    assert_eq!(&out.positions[..layout.positions.len()], &layout.positions[..]);
    assert_eq!(out.positions.len(), layout.positions.len() + 1 + params.n_s);
    // bends sit evenly on the placed segment
    let rec = tree.edge(e).unwrap();
    let (p, c) = (out.positions[rec.parent.0], out.positions[rec.child.0]);
    let b = out.positions[rec.bends().next().unwrap().0];
    assert!((b - (p + (c - p) * 0.5)).norm() < 1e-9);

    let (tree, layout, e) = pending_insertion(Algorithm::DynaSafe, 15);
    let out = dynasafe_insert(&tree, &layout, e, &params).unwrap();
    assert_eq!(&out.positions[..layout.positions.len()], &layout.positions[..]);
    assert_eq!(out.positions.len(), layout.positions.len() + 1);
}

#[test]
fn layout_mismatch_is_rejected() {
    let (tree, layout, e) = pending_insertion(Algorithm::DynaSafe, 5);
    let mut short = layout.clone();
    short.positions.pop();
    assert!(matches!(
        dynasafe_insert(&tree, &short, e, &EngineParams::default()),
        Err(EngineError::LayoutMismatch { .. })
    ));
    let bad = EngineParams { p: 1.5, ..EngineParams::default() };
    assert!(matches!(dynasafe_insert(&tree, &layout, e, &bad), Err(EngineError::InvalidParams(_))));
}

#[test]
fn safe_moves_follow_the_backoff_ladder() {
    let edges = random_tree(40, 5, 5);
    // strong gravity crowds the drawing so that some moves get rejected
    let params = EngineParams { k_gravity: 0.05, ..EngineParams::default() };
    let mut tree = EvolvingTree::new();
    let mut ids = vec![tree.add_root("r").unwrap()];
    let mut layout = LayoutState { positions: vec![Point2::ORIGIN], timestep: 0 };
    let mut log = Vec::new();
    for &(parent, _) in &edges {
        let e = tree.add_child(ids[parent], "x", 100.0).unwrap();
        ids.push(tree.edge(e).unwrap().child);
        layout = dynasafe_insert_logged(&tree, &layout, e, &params, &mut log).unwrap();
    }
    assert!(!log.is_empty());
    let mut backed_off = 0;
    for m in &log {
        match m.backoffs {
            None => assert_eq!(m.applied, 0.0),
            Some(k) => {
                assert!(k <= params.q);
                let expected = m.proposed * params.p.powi(k as i32);
                assert!((m.applied - expected).abs() <= 1e-9 * m.proposed, "{m:?}");
                backed_off += (k > 0) as usize;
            }
        }
    }
    assert!(backed_off > 0, "expected some rejected moves in a 40-node run");
}

/// A spiral wall around the parent leaves only short edges crossing-free.
#[test]
fn placement_shrinks_inside_a_cage() {
    let mut tree = EvolvingTree::new();
    let hub = tree.add_root("hub").unwrap();
    let mut positions = vec![Point2::ORIGIN];
    let mut prev = hub;
    let steps = 19;
    for k in 0..steps {
        let angle = (10.0 + 20.0 * k as f64).to_radians();
        let r = 60.0 + 10.0 * k as f64 / (steps - 1) as f64;
        let e = tree.add_child(prev, format!("w{k}"), 20.0).unwrap();
        prev = tree.edge(e).unwrap().child;
        positions.push(Point2::ORIGIN + Vec2::from_angle(angle) * r);
    }
    let layout = LayoutState { positions, timestep: tree.timestep() };
    let segments: Vec<(NodeId, NodeId)> = tree.segments().collect();
    assert_eq!(count_crossings_brute_force(&layout.positions, &segments), 0);

    let params = EngineParams::default();
    let p = place_new_node(&layout, &tree, hub, 100.0, &params).unwrap();
    assert!(p.distance(Point2::ORIGIN) < 100.0);
    for &(a, b) in &segments {
        if a != hub && b != hub {
            assert!(!closed_segments_intersect(Point2::ORIGIN, p, layout.positions[a.0], layout.positions[b.0]));
        }
    }
    assert_eq!(place_new_node(&layout, &tree, hub, 100.0, &params).unwrap(), p);

    let tight = EngineParams { placement_rounds: 3, ..EngineParams::default() };
    assert_eq!(
        place_new_node(&layout, &tree, hub, 100.0, &tight),
        Err(EngineError::PlacementExhausted(hub))
    );
}

#[test]
fn placement_on_an_empty_drawing_uses_the_full_length() {
    let mut tree = EvolvingTree::new();
    let root = tree.add_root("r").unwrap();
    let layout = LayoutState { positions: vec![Point2::ORIGIN], timestep: 0 };
    let p = place_new_node(&layout, &tree, root, 100.0, &EngineParams::default()).unwrap();
    assert!((p.distance(Point2::ORIGIN) - 100.0).abs() < 1e-9);
}

#[test]
fn force_law_examples() {
    let (a, b) = force_edge((Point2::new(0., 0.), Point2::new(150., 0.)), 100.0, 0.1);
    assert!((a.norm() - 5.0).abs() < 1e-12 && a + b == Vec2::ZERO);

    let g = force_gravity(&[Point2::new(-3., 0.), Point2::new(3., 0.)], 0.5);
    assert_eq!(g.delta[0], -g.delta[1]);
    assert!(g.delta[0].x > 0.0);

    // path a-b-c; a and c are 300 apart but 200 apart in the tree
    let mut tree = EvolvingTree::new();
    let a = tree.add_root("a").unwrap();
    let e = tree.add_child(a, "b", 100.0).unwrap();
    let b = tree.edge(e).unwrap().child;
    tree.add_child(b, "c", 100.0).unwrap();
    let layout = LayoutState {
        positions: vec![Point2::new(0., 0.), Point2::new(150., 0.), Point2::new(300., 0.)],
        timestep: 2,
    };
    let s = force_stress(&tree, &layout, 0.05);
    assert!((s.delta[0] - Vec2::new(0.025, 0.0)).norm() < 1e-15);
    assert!((s.delta[2] - Vec2::new(-0.025, 0.0)).norm() < 1e-15);
    assert_eq!(s.delta[1], Vec2::ZERO);

    let exact_line = LayoutState {
        positions: vec![Point2::new(0., 0.), Point2::new(100., 0.), Point2::new(200., 0.)],
        timestep: 2,
    };
    assert!(force_stress(&tree, &exact_line, 0.05).delta.iter().all(|d| d.norm() < 1e-15));
}

#[test]
fn collision_overlap_example() {
    // siblings x and y, each 50 from the root, 40 apart: radii 25 + 25
    let mut tree = EvolvingTree::new();
    let r = tree.add_root("r").unwrap();
    tree.add_child(r, "x", 50.0).unwrap();
    tree.add_child(r, "y", 50.0).unwrap();
    let h = (50.0f64 * 50.0 - 20.0 * 20.0).sqrt();
    let layout = LayoutState {
        positions: vec![Point2::ORIGIN, Point2::new(-20.0, h), Point2::new(20.0, h)],
        timestep: 2,
    };
    let radii = collision_radii(&tree, &layout.positions);
    assert!((radii[1] - 25.0).abs() < 1e-12 && (radii[2] - 25.0).abs() < 1e-12);
    let params = EngineParams { k_collide: 0.3, ..EngineParams::default() };
    let c = force_collision(&tree, &layout, &params);
    assert!((c.delta[1] - Vec2::new(-1.5, 0.0)).norm() < 1e-12, "{:?}", c.delta[1]);
    assert!((c.delta[2] - Vec2::new(1.5, 0.0)).norm() < 1e-12);
    // the root overlaps both children but is adjacent to them
    assert_eq!(c.delta[0], Vec2::ZERO);

    let far = LayoutState {
        positions: vec![Point2::ORIGIN, Point2::new(-50.0, 0.0), Point2::new(50.0, 0.0)],
        timestep: 2,
    };
    assert!(force_collision(&tree, &far, &params).delta.iter().all(|d| *d == Vec2::ZERO));
}

#[test]
fn elliptical_repulsion_reduces_to_circular() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pts: Vec<Point2> = (0..40)
        .map(|_| Point2::new(rng.random_range(-300.0..300.0), rng.random_range(-300.0..300.0)))
        .collect();
    let circular = force_repulse_elliptical(&pts, 300.0, 1.0, 1.0);
    let tree = QuadTree::build(&pts, &vec![1.0; pts.len()]).unwrap();
    for (i, f) in circular.delta.iter().enumerate() {
        let bh = tree.repulsion_at(pts[i], Some(i), 0.0, 300.0);
        assert!((*f - bh).norm() <= 1e-12 * bh.norm());
    }
    let stretched = force_repulse_elliptical(&pts, 300.0, 3.0, 1.0);
    assert!(stretched.net().norm() <= 1e-9 * stretched.delta.iter().map(|d| d.norm()).sum::<f64>());
}

#[test]
fn pairwise_forces_have_zero_momentum() {
    let s = grow(Algorithm::DynaCola, EngineParams::default(), &random_tree(40, 5, 13), |_| {});
    let scale = |d: &evotree_core::engine::Displacement| d.delta.iter().map(|v| v.norm()).sum::<f64>().max(1e-300);
    let collision = force_collision(s.tree(), s.layout(), &EngineParams { k_collide: 1.0, ..EngineParams::default() });
    assert!(collision.net().norm() <= 1e-9 * scale(&collision));
    let stress = force_stress(s.tree(), s.layout(), 0.3);
    assert!(stress.net().norm() <= 1e-9 * scale(&stress));
    let gravity = force_gravity(&s.layout().positions, 0.02);
    assert!(gravity.net().norm() <= 1e-9 * scale(&gravity));
}

#[test]
fn naive_baseline_is_reproducible_and_unstable() {
    let edges = random_tree(100, 5, 2);
    let run = |alg| {
        let mut frames = Vec::new();
        let s = grow(alg, EngineParams::default(), &edges, |s| frames.push(s.layout().clone()));
        (stability_loss(s.tree(), &frames).unwrap(), s.layout().clone())
    };
    let (naive, layout_a) = run(Algorithm::Naive);
    let (_, layout_b) = run(Algorithm::Naive);
    assert_eq!(layout_a, layout_b);
    let (safe, _) = run(Algorithm::DynaSafe);
    assert!(naive > safe, "naive {naive} vs dynasafe {safe}");

    // direct call matches the session
    let mut tree = EvolvingTree::new();
    let r = tree.add_root("r").unwrap();
    let layout = LayoutState { positions: vec![Point2::ORIGIN], timestep: 0 };
    let e = tree.add_child(r, "c", 100.0).unwrap();
    let out = naive_redraw_insert(&tree, &layout, e, &EngineParams::default()).unwrap();
    assert_eq!(out, naive_redraw_insert(&tree, &layout, e, &EngineParams::default()).unwrap());
}
