//! Tab-separated evolving-tree event files.
//!
//! ```text
//! root <id> <label>
//! edge <parent-id> <child-id> <child-label> <desired-length>
//! ```
//!
//! Fields are separated by single tabs, so labels may contain spaces. Lines starting with `#` and blank lines are skipped.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Root { id: String, label: String },
    Edge { parent: String, child: String, label: String, length: f64 },
}

impl Event {
    /// Id of the node this event introduces.
    pub fn node_id(&self) -> &str {
        match self {
            Event::Root { id, .. } => id,
            Event::Edge { child, .. } => child,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Event::Root { label, .. } | Event::Edge { label, .. } => label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct EventError {
    /// 1-based.
    pub line: usize,
    pub kind: EventErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventErrorKind {
    #[error("root required first")]
    RootRequired,
    #[error("second root record")]
    DuplicateRoot,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown parent `{0}`")]
    UnknownParent(String),
    #[error("invalid id `{0}`")]
    InvalidId(String),
    #[error("bad length `{0}`")]
    BadLength(String),
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("file has no root record")]
    Empty,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

/// Positive decimal: digits with an optional fractional part.
fn parse_length(s: &str) -> Option<f64> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !digits(int) || !digits(frac) || s.ends_with('.') {
        return None;
    }
    let v: f64 = s.parse().ok()?;
    (v > 0.0 && v.is_finite()).then_some(v)
}

pub fn parse_events(text: &str) -> Result<Vec<Event>, EventError> {
    let mut events = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |kind| EventError { line, kind };
        let fields: Vec<&str> = raw.split('\t').collect();
        let event = match fields.as_slice() {
            ["root", id, label] => {
                if !events.is_empty() {
                    return Err(err(EventErrorKind::DuplicateRoot));
                }
                Event::Root { id: id.to_string(), label: label.to_string() }
            }
            ["edge", parent, child, label, length] => {
                if events.is_empty() {
                    return Err(err(EventErrorKind::RootRequired));
                }
                if !seen.contains(*parent) {
                    return Err(err(EventErrorKind::UnknownParent(parent.to_string())));
                }
                let length =
                    parse_length(length).ok_or_else(|| err(EventErrorKind::BadLength(length.to_string())))?;
                Event::Edge {
                    parent: parent.to_string(),
                    child: child.to_string(),
                    label: label.to_string(),
                    length,
                }
            }
            ["edge", ..] if events.is_empty() => return Err(err(EventErrorKind::RootRequired)),
            [kind, ..] => {
                return Err(err(EventErrorKind::Malformed(format!(
                    "`{kind}` record with {} fields",
                    fields.len()
                ))))
            }
            [] => unreachable!("split yields at least one field"),
        };
        let id = event.node_id();
        if !valid_id(id) {
            return Err(err(EventErrorKind::InvalidId(id.to_string())));
        }
        if !seen.insert(id.to_string()) {
            return Err(err(EventErrorKind::DuplicateId(id.to_string())));
        }
        events.push(event);
    }
    if events.is_empty() {
        return Err(EventError { line: last_line.max(1), kind: EventErrorKind::Empty });
    }
    Ok(events)
}

/// Serializes events, one record per line.
pub fn write_events(events: &[Event]) -> String {
    let mut out = String::new();
    for e in events {
        match e {
            Event::Root { id, label } => writeln!(out, "root\t{id}\t{label}"),
            Event::Edge { parent, child, label, length } => {
                writeln!(out, "edge\t{parent}\t{child}\t{label}\t{length}")
            }
        }
        .expect("writing to a String");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least one node")]
    NoNodes,
    #[error("max degree must be at least 2")]
    DegreeTooSmall,
}

/// Random-attachment tree: each new node hangs from a uniformly chosen node
/// that still has spare degree. Ids are `n0`, `n1`, ...; labels `v0`, `v1`, ...
pub fn generate_synthetic(
    n_nodes: usize,
    max_degree: usize,
    desired_length: f64,
    seed: u64,
) -> Result<Vec<Event>, GenerateError> {
    if n_nodes == 0 {
        return Err(GenerateError::NoNodes);
    }
    if max_degree < 2 {
        return Err(GenerateError::DegreeTooSmall);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n_nodes];
    // nodes with spare capacity; swap_remove keeps this O(1) and deterministic
    let mut open = vec![0usize];
    let mut events = vec![Event::Root { id: "n0".into(), label: "v0".into() }];
    for child in 1..n_nodes {
        let k = rng.random_range(0..open.len());
        let parent = open[k];
        degree[parent] += 1;
        degree[child] = 1;
        if degree[parent] >= max_degree {
            open.swap_remove(k);
        }
        open.push(child);
        events.push(Event::Edge {
            parent: format!("n{parent}"),
            child: format!("n{child}"),
            label: format!("v{child}"),
            length: desired_length,
        });
    }
    Ok(events)
}
