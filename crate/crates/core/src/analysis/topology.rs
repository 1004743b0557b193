use std::collections::BTreeMap;

use num_rational::Ratio;

use super::{AnalysisError, MetricKey};
use crate::ingest::{EventLedger, MediaRegistry, Window};
use crate::metrics::Fraction;
use crate::model::MediumId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyPoint {
    /// Days since the window start; lies in `0..window.days()`.
    pub day_index: u32,
    pub medium_id: MediumId,
    pub value: Fraction,
}

/// Points sorted by day, then registry order. At most one point per
/// (day, medium).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologySeries {
    pub metric: MetricKey,
    pub window: Window,
    pub points: Vec<TopologyPoint>,
}

impl TopologySeries {
    pub fn points_for<'a>(&'a self, id: &'a MediumId) -> impl Iterator<Item = &'a TopologyPoint> + 'a {
        self.points.iter().filter(move |p| &p.medium_id == id)
    }

    pub fn max_value(&self) -> Option<Fraction> {
        self.points.iter().map(|p| p.value).max()
    }
}

#[derive(Default, Clone, Copy)]
struct Day {
    reach: Option<u64>,
    interactions: Option<u64>,
}

fn add(slot: &mut Option<u64>, v: Option<u64>) {
    if let Some(v) = v {
        *slot = Some(slot.unwrap_or(0) + v);
    }
}

/// Range and Interactions emit that day's sum on days where a record carries
/// the count. ResponseRate emits cumulative interactions over cumulative
/// reach on each day with records, once reach is positive and some
/// interaction has been recorded.
pub fn topology_series(
    ledger: &EventLedger,
    registry: &MediaRegistry,
    metric: MetricKey,
) -> Result<TopologySeries, AnalysisError> {
    let window = ledger.window.ok_or(AnalysisError::NoWindow)?;
    // (day, registry position) -> that day's sums
    let mut days: BTreeMap<(u32, usize), Day> = BTreeMap::new();
    for r in &ledger.records {
        let (Some(pos), Some(day)) = (registry.position(&r.medium_id), window.day_index(r.date)) else {
            continue;
        };
        let d = days.entry((day, pos)).or_default();
        add(&mut d.reach, r.persons_reached);
        add(&mut d.interactions, r.interactions);
    }
    let mut cumulative: BTreeMap<usize, Day> = BTreeMap::new();
    let mut points = Vec::new();
    for ((day_index, pos), d) in days {
        let value = match metric {
            MetricKey::Range => d.reach.map(Ratio::from_integer),
            MetricKey::Interactions => d.interactions.map(Ratio::from_integer),
            MetricKey::ResponseRate => {
                let c = cumulative.entry(pos).or_default();
                add(&mut c.reach, d.reach);
                add(&mut c.interactions, d.interactions);
                match (c.interactions, c.reach) {
                    (Some(i), Some(r)) if r > 0 => Some(Ratio::new(i, r)),
                    _ => None,
                }
            }
        };
        if let Some(value) = value {
            points.push(TopologyPoint {
                day_index,
                medium_id: registry.media()[pos].id.clone(),
                value,
            });
        }
    }
    Ok(TopologySeries { metric, window, points })
}
