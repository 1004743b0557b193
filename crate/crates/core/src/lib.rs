//! Hybrid-space media analytics: an event ledger over real places and
//! virtual media venues, the media metrics computed from it, survey scoring,
//! and deterministic CSV/Markdown/SVG reports.

pub mod analysis;
pub mod cli;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod render;
