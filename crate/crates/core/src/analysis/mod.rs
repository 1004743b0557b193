//! Rankings, segment shares, topology series, space comparison and survey
//! scoring built on top of the metrics table.

mod compare;
mod correlation;
mod ranking;
mod survey;
mod topology;

use thiserror::Error;

pub use compare::{compare_spaces, ModalityComparison, TypeComparison};
pub use correlation::{correlate_activity, spearman, CorrelationResult, CorrelationTag};
pub use ranking::{rank_media, type_share, MetricKey, RankEntry, Ranking, Segment, TypeShare};
pub use survey::{score_survey, GroupTally, OptionTally, ParticipantScore, SurveyReport, UnderstandingTally};
pub use topology::{topology_series, TopologyPoint, TopologySeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("segment of {requested} exceeds the {available} ranked media")]
    SegmentTooLarge { requested: usize, available: usize },
    #[error("segment is empty")]
    EmptySegment,
    #[error("ledger has no project window")]
    NoWindow,
    #[error("registry has no media")]
    EmptyRegistry,
}
