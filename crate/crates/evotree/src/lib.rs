//! File formats, rendering and the command-line front end for
//! [`evotree_core`] layouts.
//!
//! The pipeline is `gen` (event file) → `layout` (JSON-lines trace) →
//! `metrics` (CSV) / `render` (SVG frames); see [`cli`].

pub mod cli;
pub mod config;
pub mod events;
pub mod replay;
pub mod report;
pub mod svg;
pub mod trace;

pub use events::{generate_synthetic, parse_events, write_events, Event, EventError};
pub use replay::{frame_of, rebuild, Replay, ReplayError, Step};
pub use report::{checkpoint_reports, write_csv};
pub use svg::{render_svg, SvgOptions};
pub use trace::{read_trace, write_trace, Frame, Trace, TraceError};
