use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use super::AnalysisError;
use crate::ingest::MediaRegistry;
use crate::metrics::{Fraction, MetricsRow, MetricsTable};
use crate::model::{MediaType, MediumId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKey {
    Range,
    Interactions,
    ResponseRate,
}

impl MetricKey {
    pub const ALL: [MetricKey; 3] = [MetricKey::Range, MetricKey::Interactions, MetricKey::ResponseRate];

    /// Command-line spelling, also used in output file names.
    pub fn name(self) -> &'static str {
        match self {
            MetricKey::Range => "range",
            MetricKey::Interactions => "interactions",
            MetricKey::ResponseRate => "response-rate",
        }
    }

    pub fn is_rate(self) -> bool {
        self == MetricKey::ResponseRate
    }

    pub fn value_of(self, row: &MetricsRow) -> Option<Fraction> {
        match self {
            MetricKey::Range => row.range.map(Ratio::from_integer),
            MetricKey::Interactions => row.interactions.map(Ratio::from_integer),
            MetricKey::ResponseRate => row.response_rate,
        }
    }
}

impl fmt::Display for MetricKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricKey::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown metric {s:?} (expected range, interactions or response-rate)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEntry {
    pub medium_id: MediumId,
    pub media_type: MediaType,
    /// `None` only for unranked media.
    pub value: Option<Fraction>,
}

/// `entries` are sorted by value descending, then media type, then id.
/// `unranked` holds media without a value, sorted by media type then id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub key: MetricKey,
    pub entries: Vec<RankEntry>,
    pub unranked: Vec<RankEntry>,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.entries.len() + self.unranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ranked entries followed by unranked ones.
    pub fn ordered(&self) -> impl Iterator<Item = &RankEntry> {
        self.entries.iter().chain(self.unranked.iter())
    }

    pub fn ids(&self) -> Vec<&str> {
        self.ordered().map(|e| e.medium_id.as_str()).collect()
    }
}

fn tie_order(a: &RankEntry, b: &RankEntry) -> Ordering {
    a.media_type
        .cmp(&b.media_type)
        .then_with(|| a.medium_id.as_str().cmp(b.medium_id.as_str()))
}

/// Rows whose medium is not in the registry are skipped.
pub fn rank_media(table: &MetricsTable, key: MetricKey, registry: &MediaRegistry) -> Ranking {
    let mut entries = Vec::new();
    let mut unranked = Vec::new();
    for row in &table.rows {
        let Some(media_type) = registry.media_type(&row.medium_id) else {
            continue;
        };
        let entry = RankEntry {
            medium_id: row.medium_id.clone(),
            media_type,
            value: key.value_of(row),
        };
        if entry.value.is_some() {
            entries.push(entry);
        } else {
            unranked.push(entry);
        }
    }
    entries.sort_by(|a, b| b.value.cmp(&a.value).then_with(|| tie_order(a, b)));
    unranked.sort_by(tie_order);
    Ranking { key, entries, unranked }
}

/// Leading or trailing slice of the full ranking order (ranked, then unranked).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    TopN(usize),
    BottomM(usize),
}

impl Segment {
    pub fn size(self) -> usize {
        match self {
            Segment::TopN(n) | Segment::BottomM(n) => n,
        }
    }

    pub fn label(self) -> String {
        match self {
            Segment::TopN(n) => format!("top{n}"),
            Segment::BottomM(m) => format!("bottom{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeShare {
    pub segment: Segment,
    counts: BTreeMap<MediaType, u64>,
    size: u64,
}

impl TypeShare {
    pub fn count(&self, t: MediaType) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn share(&self, t: MediaType) -> Fraction {
        Ratio::new(self.count(t), self.size)
    }

    pub fn shares(&self) -> [(MediaType, Fraction); 4] {
        MediaType::ALL.map(|t| (t, self.share(t)))
    }
}

pub fn type_share(ranking: &Ranking, segment: Segment) -> Result<TypeShare, AnalysisError> {
    let n = segment.size();
    let available = ranking.len();
    if n == 0 {
        return Err(AnalysisError::EmptySegment);
    }
    if n > available {
        return Err(AnalysisError::SegmentTooLarge {
            requested: n,
            available,
        });
    }
    let skip = match segment {
        Segment::TopN(_) => 0,
        Segment::BottomM(_) => available - n,
    };
    let mut counts = BTreeMap::new();
    for e in ranking.ordered().skip(skip).take(n) {
        *counts.entry(e.media_type).or_insert(0) += 1;
    }
    Ok(TypeShare {
        segment,
        counts,
        size: n as u64,
    })
}
