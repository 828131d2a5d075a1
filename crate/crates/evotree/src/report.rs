//! Checkpoint metrics and their CSV form.

use evotree_core::{EvolvingTree, LabelSpec, LayoutState, MetricsError, MetricsReport};
use serde::Serialize;

pub const CSV_HEADER: &str = "step,nodes,del,compactness,stability,stress,crossings,elapsed_ms";

/// One report per checkpoint: frame `i` (0-based) is a checkpoint when
/// `(i + 1) % every == 0`. Stability covers frames `0..=i`; `elapsed_ms`
/// is the summed insertion time up to the checkpoint when every frame has one.
pub fn checkpoint_reports(
    tree: &EvolvingTree,
    frames: &[LayoutState],
    elapsed_ms: &[Option<f64>],
    every: usize,
    spec: &LabelSpec,
) -> Result<Vec<MetricsReport>, MetricsError> {
    assert!(every > 0, "checkpoint interval must be positive");
    let mut total = Some(0.0);
    let mut rows = Vec::new();
    for i in 0..frames.len() {
        total = total.zip(elapsed_ms.get(i).copied().flatten()).map(|(a, b)| a + b);
        if (i + 1) % every == 0 {
            rows.push(MetricsReport::compute(tree, &frames[..=i], spec, total)?);
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct Row {
    step: usize,
    nodes: usize,
    del: f64,
    compactness: f64,
    stability: f64,
    stress: f64,
    crossings: usize,
    elapsed_ms: Option<f64>,
}

/// CSV with a fixed header and LF line endings.
pub fn write_csv(reports: &[MetricsReport]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).expect("writing to memory");
    for r in reports {
        w.serialize(Row {
            step: r.timestep,
            nodes: r.node_count,
            del: r.del_loss,
            compactness: r.compactness_loss,
            stability: r.stability_loss,
            stress: r.stress_loss,
            crossings: r.crossing_count,
            elapsed_ms: r.elapsed_ms,
        })
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv of numbers is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shape() {
        let r = MetricsReport {
            timestep: 99,
            node_count: 100,
            del_loss: 0.25,
            compactness_loss: 0.5,
            stability_loss: 0.0,
            stress_loss: 1e-3,
            crossing_count: 0,
            elapsed_ms: None,
        };
        let text = write_csv(&[r.clone(), MetricsReport { elapsed_ms: Some(12.5), ..r }]);
        assert_eq!(
            text,
            "step,nodes,del,compactness,stability,stress,crossings,elapsed_ms\n\
             99,100,0.25,0.5,0.0,0.001,0,\n\
             99,100,0.25,0.5,0.0,0.001,0,12.5\n"
        );
    }
}
