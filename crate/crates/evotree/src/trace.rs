//! JSON-lines layout traces.
//!
//! An optional first line holds a header object without a `"t"` key (the
//! effective run configuration). Every other line is one frame:
//!
//! ```text
//! {"t":1,"pos":{"A":[0.0,0.0],"B":[97.1,3.5]},"bends":{"A-B":[[48.6,1.7]]}}
//! ```
//!
//! Coordinates use the shortest decimal that reads back to the same `f64`,
//! so a round trip is exact.

use std::io::{self, Write};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    /// Insertions applied so far; the root-only frame is `t = 0`.
    pub t: usize,
    /// Real node positions by id, in insertion order.
    pub pos: IndexMap<String, [f64; 2]>,
    /// Bend positions of subdivided edges keyed `"<parent>-<child>"`, in
    /// order from parent to child.
    #[serde(default)]
    pub bends: IndexMap<String, Vec<[f64; 2]>>,
    /// Wall-clock time of this insertion; only written when timings are on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub header: Option<Value>,
    pub frames: Vec<Frame>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace must contain ≥1 frame")]
    Empty,
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: header object is only allowed on the first line")]
    MisplacedHeader { line: usize },
}

pub fn bend_key(parent: &str, child: &str) -> String {
    format!("{parent}-{child}")
}

/// Appends frames one line at a time, so a partial trace stays readable.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out }
    }

    pub fn header(&mut self, header: &Value) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, header)?;
        self.out.write_all(b"\n")
    }

    pub fn frame(&mut self, frame: &Frame) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, frame)?;
        self.out.write_all(b"\n")
    }

    pub fn into_inner(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_trace(trace: &Trace) -> String {
    let mut w = TraceWriter::new(Vec::new());
    if let Some(h) = &trace.header {
        w.header(h).expect("writing to memory");
    }
    for f in &trace.frames {
        w.frame(f).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("serde_json emits UTF-8")
}

pub fn read_trace(text: &str) -> Result<Trace, TraceError> {
    let mut trace = Trace::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw).map_err(|source| TraceError::Json { line, source })?;
        if value.get("t").is_none() {
            if trace.header.is_some() || !trace.frames.is_empty() {
                return Err(TraceError::MisplacedHeader { line });
            }
            trace.header = Some(value);
            continue;
        }
        let frame = serde_json::from_value(value).map_err(|source| TraceError::Json { line, source })?;
        trace.frames.push(frame);
    }
    if trace.frames.is_empty() {
        return Err(TraceError::Empty);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(t: usize) -> Frame {
        let mut pos = IndexMap::new();
        pos.insert("A".to_string(), [0.0, 0.0]);
        pos.insert("B".to_string(), [0.1 + t as f64, -1.0 / 3.0]);
        let mut bends = IndexMap::new();
        bends.insert(bend_key("A", "B"), vec![[1e-7, 2.5], [123456.789, -0.0]]);
        Frame { t, pos, bends, elapsed_ms: None }
    }

    #[test]
    fn round_trip_is_exact() {
        let trace = Trace {
            header: Some(serde_json::json!({"comment": "effective config"})),
            frames: (0..3).map(frame).collect(),
        };
        let text = write_trace(&trace);
        assert_eq!(read_trace(&text).unwrap(), trace);
        assert!(!text.contains("elapsed_ms"));
    }

    #[test]
    fn errors() {
        assert_eq!(read_trace("").unwrap_err().to_string(), "trace must contain ≥1 frame");
        assert!(matches!(read_trace("{\"a\":1}\n").unwrap_err(), TraceError::Empty));
        let good = write_trace(&Trace { header: None, frames: vec![frame(0)] });
        let bad = format!("{good}{{\"t\":1,\"pos\":\n");
        assert!(matches!(read_trace(&bad).unwrap_err(), TraceError::Json { line: 2, .. }));
        let late = format!("{good}{{\"x\":1}}\n");
        assert!(matches!(read_trace(&late).unwrap_err(), TraceError::MisplacedHeader { line: 2 }));
    }
}
