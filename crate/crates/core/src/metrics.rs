//! Per-medium metrics over an event ledger: modality, net range,
//! interactions, response and completion rates, and persons per location.
//!
//! Every ratio is an exact `Ratio<u64>`; rounding happens only when rendering.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::ingest::{EventLedger, MediaRegistry};
use crate::model::{Coordinates, MediaType, Medium, MediumId, Place};

pub type Fraction = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("registry has no media")]
    EmptyRegistry,
    #[error("unknown medium {0}")]
    UnknownMedium(MediumId),
    #[error("response rate needs a positive range")]
    ZeroRange,
    #[error("completion rate needs at least one participant")]
    ZeroParticipants,
    #[error("{completers} completers exceed {participants} participants")]
    CompletersExceedParticipants { completers: u64, participants: u64 },
}

/// Count of media per type. `total` is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalityMix {
    counts: BTreeMap<MediaType, u64>,
    total: u64,
}

impl ModalityMix {
    pub fn count(&self, t: MediaType) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn share(&self, t: MediaType) -> Fraction {
        Ratio::new(self.count(t), self.total)
    }

    /// All four types in canonical order, absent types with share 0.
    pub fn shares(&self) -> [(MediaType, Fraction); 4] {
        MediaType::ALL.map(|t| (t, self.share(t)))
    }
}

pub fn modality(registry: &MediaRegistry) -> Result<ModalityMix, MetricsError> {
    modality_of(registry.media())
}

pub fn modality_of(media: &[Medium]) -> Result<ModalityMix, MetricsError> {
    if media.is_empty() {
        return Err(MetricsError::EmptyRegistry);
    }
    let mut counts = BTreeMap::new();
    for m in media {
        *counts.entry(m.media_type).or_insert(0) += 1;
    }
    Ok(ModalityMix {
        counts,
        total: media.len() as u64,
    })
}

fn known(registry: &MediaRegistry, id: &MediumId) -> Result<(), MetricsError> {
    if registry.contains(id) {
        Ok(())
    } else {
        Err(MetricsError::UnknownMedium(id.clone()))
    }
}

fn sum_present(values: impl Iterator<Item = Option<u64>>) -> Option<u64> {
    values.flatten().fold(None, |acc, v| Some(acc.unwrap_or(0) + v))
}

/// Sum of `persons_reached`; `None` when no record of the medium carries one.
pub fn net_range(ledger: &EventLedger, registry: &MediaRegistry, id: &MediumId) -> Result<Option<u64>, MetricsError> {
    known(registry, id)?;
    Ok(sum_present(ledger.records_for(id).map(|r| r.persons_reached)))
}

/// Sum of `interactions`; `None` when no record of the medium carries one.
pub fn interactions(
    ledger: &EventLedger,
    registry: &MediaRegistry,
    id: &MediumId,
) -> Result<Option<u64>, MetricsError> {
    known(registry, id)?;
    Ok(sum_present(ledger.records_for(id).map(|r| r.interactions)))
}

pub fn response_rate(m_ia: u64, r_ng: u64) -> Result<Fraction, MetricsError> {
    if r_ng == 0 {
        return Err(MetricsError::ZeroRange);
    }
    Ok(Ratio::new(m_ia, r_ng))
}

pub fn completion_rate(completers: u64, participants: u64) -> Result<Fraction, MetricsError> {
    if participants == 0 {
        return Err(MetricsError::ZeroParticipants);
    }
    if completers > participants {
        return Err(MetricsError::CompletersExceedParticipants {
            completers,
            participants,
        });
    }
    Ok(Ratio::new(completers, participants))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionStats {
    pub participants: u64,
    pub completers: u64,
    /// `None` only when there are no participants.
    pub rate: Option<Fraction>,
}

impl CompletionStats {
    pub fn new(completers: u64, participants: u64) -> Result<Self, MetricsError> {
        let rate = match completion_rate(completers, participants) {
            Ok(r) => Some(r),
            Err(MetricsError::ZeroParticipants) => None,
            Err(e) => return Err(e),
        };
        Ok(CompletionStats {
            participants,
            completers,
            rate,
        })
    }
}

/// `response_rate` is present iff `range > 0` and `interactions` is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsRow {
    pub medium_id: MediumId,
    pub range: Option<u64>,
    pub interactions: Option<u64>,
    pub response_rate: Option<Fraction>,
}

/// One row per registry medium, in registry order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn row(&self, id: &MediumId) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| &r.medium_id == id)
    }
}

pub fn metrics_table(ledger: &EventLedger, registry: &MediaRegistry) -> Result<MetricsTable, MetricsError> {
    let mut rows = Vec::with_capacity(registry.len());
    for m in registry.media() {
        let range = net_range(ledger, registry, &m.id)?;
        let inter = interactions(ledger, registry, &m.id)?;
        let rate = match (inter, range) {
            (Some(i), Some(r)) if r > 0 => Some(response_rate(i, r)?),
            _ => None,
        };
        rows.push(MetricsRow {
            medium_id: m.id.clone(),
            range,
            interactions: inter,
            response_rate: rate,
        });
    }
    Ok(MetricsTable { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensityLocation {
    Real {
        name: String,
        coords: Option<Coordinates>,
    },
    /// A virtual medium counts as its own location.
    Virtual(MediumId),
}

impl DensityLocation {
    pub fn label(&self) -> &str {
        match self {
            DensityLocation::Real { name, .. } => name,
            DensityLocation::Virtual(id) => id.as_str(),
        }
    }
}

/// Persons per location. `by_medium` lists contributions in first-appearance
/// order and sums to `persons`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaceDensity {
    pub location: DensityLocation,
    pub persons: u64,
    pub by_medium: Vec<(MediumId, u64)>,
}

impl PlaceDensity {
    /// Type with the largest share of persons; ties go to the canonically
    /// earlier type. `None` when the registry knows none of the media.
    pub fn dominant_type(&self, registry: &MediaRegistry) -> Option<MediaType> {
        let mut per_type: BTreeMap<MediaType, u64> = BTreeMap::new();
        for (id, n) in &self.by_medium {
            if let Some(t) = registry.media_type(id) {
                *per_type.entry(t).or_insert(0) += n;
            }
        }
        per_type
            .into_iter()
            .fold(None, |best: Option<(MediaType, u64)>, (t, n)| match best {
                Some((_, bn)) if bn >= n => best,
                _ => Some((t, n)),
            })
            .map(|(t, _)| t)
    }
}

fn add_to(by_medium: &mut Vec<(MediumId, u64)>, id: &MediumId, n: u64) {
    match by_medium.iter_mut().find(|(m, _)| m == id) {
        Some((_, total)) => *total += n,
        None => by_medium.push((id.clone(), n)),
    }
}

/// Real places in first-appearance order, then one entry per medium that has a
/// virtual record carrying reach, in first-appearance order.
///
/// A real place counts each record's headcount (reach, else interactions).
/// A virtual medium's density is its whole net range.
pub fn place_density(ledger: &EventLedger) -> Vec<PlaceDensity> {
    let mut real: Vec<PlaceDensity> = Vec::new();
    let mut virtual_media: Vec<MediumId> = Vec::new();
    for r in &ledger.records {
        match &r.place {
            Place::Real { name, coords } => {
                let idx = match real
                    .iter()
                    .position(|p| matches!(&p.location, DensityLocation::Real { name: n, .. } if n == name))
                {
                    Some(i) => i,
                    None => {
                        real.push(PlaceDensity {
                            location: DensityLocation::Real {
                                name: name.clone(),
                                coords: *coords,
                            },
                            persons: 0,
                            by_medium: Vec::new(),
                        });
                        real.len() - 1
                    }
                };
                let entry = &mut real[idx];
                if let DensityLocation::Real { coords: c @ None, .. } = &mut entry.location {
                    *c = *coords;
                }
                let n = r.headcount();
                entry.persons += n;
                add_to(&mut entry.by_medium, &r.medium_id, n);
            }
            Place::Virtual => {
                if r.persons_reached.is_some() && !virtual_media.contains(&r.medium_id) {
                    virtual_media.push(r.medium_id.clone());
                }
            }
        }
    }
    let mut out: Vec<PlaceDensity> = real.into_iter().filter(|p| p.persons > 0).collect();
    for id in virtual_media {
        let persons = sum_present(ledger.records_for(&id).map(|r| r.persons_reached)).unwrap_or(0);
        if persons > 0 {
            out.push(PlaceDensity {
                location: DensityLocation::Virtual(id.clone()),
                persons,
                by_medium: vec![(id, persons)],
            });
        }
    }
    out
}
