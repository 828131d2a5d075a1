#![allow(dead_code)]

use evotree_core::engine::{Algorithm, LayoutSession};
use evotree_core::{EngineParams, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random-attachment tree as `(parent ordinal, child ordinal)` pairs; every
/// node keeps total degree at most `max_degree`.
pub fn random_tree(n: usize, max_degree: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut open = vec![0usize];
    let mut edges = Vec::new();
    for child in 1..n {
        let k = rng.random_range(0..open.len());
        let parent = open[k];
        degree[parent] += 1;
        degree[child] = 1;
        if degree[parent] >= max_degree {
            open.swap_remove(k);
        }
        open.push(child);
        edges.push((parent, child));
    }
    edges
}

/// Grows a session through `edges`, calling `check` after every insertion.
pub fn grow(
    algorithm: Algorithm,
    params: EngineParams,
    edges: &[(usize, usize)],
    mut check: impl FnMut(&LayoutSession),
) -> LayoutSession {
    let mut session = LayoutSession::new(algorithm, params).unwrap();
    let mut ids = vec![session.insert_root("n0").unwrap()];
    for &(parent, child) in edges {
        let id: NodeId = session
            .insert_child(ids[parent], format!("n{child}"), 100.0)
            .unwrap();
        ids.push(id);
        check(&session);
    }
    session
}
