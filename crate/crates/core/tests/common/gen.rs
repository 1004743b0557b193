use chrono::{Days, NaiveDate};
use proptest::prelude::*;

use hybridspace::ingest::{EventLedger, EventRecord, MediaRegistry};
use hybridspace::model::{Coordinates, MediaType, Medium, MediumId, Place};

pub const PLACES: [(&str, f64, f64); 4] = [
    ("Herrsching", 47.99, 11.17),
    ("München", 48.14, 11.58),
    ("Wien", 48.21, 16.37),
    ("Ames, Iowa", 42.03, -93.62),
];

pub fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2023, 1, 1).unwrap()
}

pub fn registry_from(types: &[usize]) -> MediaRegistry {
    let media = types
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let media_type = MediaType::ALL[t];
            Medium {
                id: MediumId::new(format!("{}_{i}", media_type.prefix())),
                name: format!("Medium {i}"),
                media_type,
            }
        })
        .collect();
    MediaRegistry::new(media).unwrap()
}

pub fn arb_registry() -> impl Strategy<Value = MediaRegistry> {
    prop::collection::vec(0usize..4, 1..30).prop_map(|t| registry_from(&t))
}

pub type RawRecord = (usize, u64, Option<usize>, Option<u64>, Option<u64>);

pub fn arb_raw_records(max: usize) -> impl Strategy<Value = Vec<RawRecord>> {
    prop::collection::vec(
        (
            0usize..64,
            0u64..184,
            prop::option::of(0usize..PLACES.len()),
            prop::option::of(0u64..2000),
            prop::option::of(0u64..500),
        ),
        0..max,
    )
}

pub fn build_ledger(registry: &MediaRegistry, raw: &[RawRecord]) -> EventLedger {
    let records = raw
        .iter()
        .map(|&(m, day, place, reach, inter)| {
            let medium = &registry.media()[m % registry.len()];
            let place = match place {
                Some(p) => {
                    let (name, lat, lon) = PLACES[p];
                    Place::real(name, Some(Coordinates::new(lat, lon).unwrap())).unwrap()
                }
                None => Place::Virtual,
            };
            // A record must carry at least one count.
            let reach = if reach.is_none() && inter.is_none() {
                Some(1)
            } else {
                reach
            };
            EventRecord {
                date: start() + Days::new(day),
                medium_id: medium.id.clone(),
                place,
                persons_reached: reach,
                reach_unit: if reach.is_some() {
                    "persons".into()
                } else {
                    String::new()
                },
                interactions: inter,
                interaction_unit: if inter.is_some() { "likes".into() } else { String::new() },
            }
        })
        .collect();
    EventLedger::new(records).with_window(super::window()).unwrap()
}

pub fn arb_space() -> impl Strategy<Value = (MediaRegistry, EventLedger)> {
    (arb_registry(), arb_raw_records(60)).prop_map(|(reg, raw)| {
        let ledger = build_ledger(&reg, &raw);
        (reg, ledger)
    })
}

/// Rank of x[i] by counting: 1 + (#smaller) + (#equal others)/2.
pub fn counting_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let below = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            1.0 + below + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}

pub fn oracle_rho(xs: &[f64], ys: &[f64]) -> Option<f64> {
    pearson(&counting_ranks(xs), &counting_ranks(ys))
}
