//! Deterministic report output: CSV/Markdown tables and SVG charts.

mod charts;
pub mod format;
mod svg;
mod tables;

pub use charts::{
    bubble_radius, format_value, render_density_map, render_ranking, render_topology, ChartKind, ChartSpec,
    RenderError, Scale,
};
pub use format::Decimal;
pub use svg::{escape, Anchor, Element, SvgDocument};
pub use tables::{
    emit_table, survey_groups_table, survey_options_table, survey_understanding_table, DensityTable, Table,
    TableFormat, ToTable, ABSENT,
};
