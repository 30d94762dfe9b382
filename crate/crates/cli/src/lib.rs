//! Command-line front end: solving, sandpile comparison, experiment sweeps
//! and SVG rendering.

pub mod app;
pub mod render;

pub use app::{parse_points, run};
pub use render::{render_svg, FillMode, RenderSpec};
