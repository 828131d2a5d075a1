//! Bridges event files, engine sessions and trace frames.

use std::collections::HashMap;
use std::time::Instant;

use evotree_core::engine::{Algorithm, LayoutSession};
use evotree_core::{EngineError, EngineParams, EvolvingTree, LayoutState, NodeId, Point2};
use indexmap::IndexMap;
use thiserror::Error;

use crate::events::Event;
use crate::trace::{bend_key, Frame, Trace};

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("insertion {step} (`{id}`): {source}")]
    Engine { step: usize, id: String, source: EngineError },
    #[error("frame {frame}: {msg}")]
    Mismatch { frame: usize, msg: String },
}

/// One applied insertion.
#[derive(Debug, Clone)]
pub struct Step {
    pub frame: Frame,
    /// Exact crossing count of the drawing after this insertion.
    pub crossings: usize,
}

/// Feeds events through an engine, yielding one [`Step`] per event (the
/// root included).
pub struct Replay<'a> {
    events: &'a [Event],
    session: LayoutSession,
    nodes: HashMap<&'a str, NodeId>,
    next: usize,
    timings: bool,
    failed: bool,
}

impl<'a> Replay<'a> {
    pub fn new(
        events: &'a [Event],
        algorithm: Algorithm,
        params: EngineParams,
        timings: bool,
    ) -> Result<Self, EngineError> {
        Ok(Replay {
            events,
            session: LayoutSession::new(algorithm, params)?,
            nodes: HashMap::new(),
            next: 0,
            timings,
            failed: false,
        })
    }

    pub fn session(&self) -> &LayoutSession {
        &self.session
    }

    fn apply(&mut self, event: &'a Event) -> Result<NodeId, EngineError> {
        match event {
            Event::Root { label, .. } => self.session.insert_root(label.as_str()),
            Event::Edge { parent, label, length, .. } => {
                let parent = self.nodes[parent.as_str()];
                self.session.insert_child(parent, label.as_str(), *length)
            }
        }
    }
}

impl Iterator for Replay<'_> {
    type Item = Result<Step, ReplayError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let event = self.events.get(self.next)?;
        let step = self.next;
        let start = Instant::now();
        let node = match self.apply(event) {
            Ok(node) => node,
            Err(source) => {
                self.failed = true;
                return Some(Err(ReplayError::Engine { step, id: event.node_id().to_string(), source }));
            }
        };
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        self.nodes.insert(event.node_id(), node);
        self.next += 1;
        let mut frame = frame_of(self.events, self.session.tree(), self.session.layout());
        frame.elapsed_ms = self.timings.then_some(elapsed);
        Some(Ok(Step { frame, crossings: self.session.crossings() }))
    }
}

/// Snapshot of a session as a trace frame. Real nodes of `tree` correspond
/// to `events` in order.
pub fn frame_of(events: &[Event], tree: &EvolvingTree, layout: &LayoutState) -> Frame {
    let id_of = |v: NodeId| events[tree.ordinal(v).expect("real node")].node_id();
    let n = layout.positions.len();
    let xy = |v: NodeId| {
        let p = layout.positions[v.0];
        [p.x, p.y]
    };
    let pos: IndexMap<String, [f64; 2]> = tree
        .real_nodes()
        .iter()
        .filter(|v| v.0 < n)
        .map(|&v| (id_of(v).to_string(), xy(v)))
        .collect();
    let bends = tree
        .edges()
        .iter()
        .filter(|e| e.child.0 < n && e.bends().next().is_some())
        .map(|e| (bend_key(id_of(e.parent), id_of(e.child)), e.bends().map(xy).collect()))
        .collect();
    Frame { t: layout.timestep, pos, bends, elapsed_ms: None }
}

/// Rebuilds the tree and every layout recorded in `trace`.
///
/// Bend counts come from the trace, so traces of any engine and any `n_s`
/// are accepted. Frame `i` must hold exactly the first `i + 1` nodes.
pub fn rebuild(events: &[Event], trace: &Trace) -> Result<(EvolvingTree, Vec<LayoutState>), ReplayError> {
    let frames = &trace.frames;
    if frames.len() > events.len() {
        return Err(ReplayError::Mismatch {
            frame: events.len() + 1,
            msg: format!("trace has {} frames but only {} events", frames.len(), events.len()),
        });
    }
    let last = frames.last().expect("read_trace rejects empty traces");
    let events = &events[..frames.len()];

    let mut tree = EvolvingTree::new();
    let mut nodes: HashMap<&str, NodeId> = HashMap::new();
    for event in events {
        let id = match event {
            Event::Root { label, .. } => tree.add_root(label.as_str()),
            Event::Edge { parent, child, label, length } => {
                let edge = tree
                    .add_child(nodes[parent.as_str()], label.as_str(), *length)
                    .and_then(|e| {
                        let bends = last.bends.get(&bend_key(parent, child)).map_or(0, Vec::len);
                        tree.subdivide(e, bends).map(|_| e)
                    });
                edge.map(|e| tree.edge(e).expect("just added").child)
            }
        }
        .map_err(|e| ReplayError::Mismatch { frame: frames.len(), msg: e.to_string() })?;
        nodes.insert(event.node_id(), id);
    }

    let edge_keys: HashMap<String, usize> = tree
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| (bend_key(event_id(events, &tree, e.parent), event_id(events, &tree, e.child)), k))
        .collect();
    let layouts = frames
        .iter()
        .enumerate()
        .map(|(i, f)| layout_of(events, &tree, &nodes, &edge_keys, i, f))
        .collect::<Result<_, _>>()?;
    Ok((tree, layouts))
}

fn layout_of(
    events: &[Event],
    tree: &EvolvingTree,
    nodes: &HashMap<&str, NodeId>,
    edge_keys: &HashMap<String, usize>,
    index: usize,
    frame: &Frame,
) -> Result<LayoutState, ReplayError> {
    let err = |msg: String| ReplayError::Mismatch { frame: index + 1, msg };
    if frame.t != index {
        return Err(err(format!("expected t = {index}, found {}", frame.t)));
    }
    if frame.pos.len() != index + 1 {
        return Err(err(format!("expected {} positions, found {}", index + 1, frame.pos.len())));
    }
    // node ids are dense: the present nodes are exactly those below `count`
    let count = match &events[index] {
        Event::Root { .. } => 1,
        Event::Edge { child, .. } => {
            let c = nodes[child.as_str()];
            tree.parent_edge(c).expect("child has an edge").bends().count() + c.0 + 1
        }
    };
    let mut positions: Vec<Option<Point2>> = vec![None; count];
    for (id, [x, y]) in &frame.pos {
        let v = *nodes
            .get(id.as_str())
            .filter(|v| v.0 < count)
            .ok_or_else(|| err(format!("unknown id `{id}`")))?;
        positions[v.0] = Some(Point2::new(*x, *y));
    }
    for (key, pts) in &frame.bends {
        let edge = edge_keys
            .get(key)
            .map(|&k| &tree.edges()[k])
            .filter(|e| e.child.0 < count)
            .ok_or_else(|| err(format!("unknown edge `{key}`")))?;
        let bends: Vec<NodeId> = edge.bends().collect();
        if bends.len() != pts.len() {
            return Err(err(format!("edge `{key}` has {} bends, expected {}", pts.len(), bends.len())));
        }
        for (b, [x, y]) in bends.iter().zip(pts) {
            positions[b.0] = Some(Point2::new(*x, *y));
        }
    }
    let positions = positions
        .into_iter()
        .enumerate()
        .map(|(k, p)| p.ok_or_else(|| err(format!("no position for node {k}"))))
        .collect::<Result<_, _>>()?;
    Ok(LayoutState { positions, timestep: frame.t })
}

fn event_id<'e>(events: &'e [Event], tree: &EvolvingTree, v: NodeId) -> &'e str {
    events[tree.ordinal(v).expect("real node")].node_id()
}
