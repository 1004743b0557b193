use chrono::NaiveDate;

use super::{
    check_header, csv_reader, csv_writer, finish_csv, IngestError, Issue, IssueCode, MediaRegistry, ValidationReport,
};
use crate::model::{Coordinates, MediumId, Place};

pub const EVENTS_HEADER: [&str; 9] = [
    "date",
    "medium_id",
    "place",
    "lat",
    "lon",
    "persons_reached",
    "reach_unit",
    "interactions",
    "interaction_unit",
];

const DATE_FORMAT: &str = "%Y-%m-%d";

/// Inclusive project window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    start: NaiveDate,
    end: NaiveDate,
}

impl Window {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self, IngestError> {
        if start > end {
            return Err(Issue::new(
                0,
                IssueCode::InvalidWindow,
                format!("window start {start} is after end {end}"),
            )
            .into());
        }
        Ok(Window { start, end })
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    /// Number of calendar days covered, both ends included.
    pub fn days(&self) -> u32 {
        ((self.end - self.start).num_days() + 1) as u32
    }

    pub fn day_index(&self, date: NaiveDate) -> Option<u32> {
        self.contains(date).then(|| (date - self.start).num_days() as u32)
    }
}

/// One dated observation for a medium at a place. A record carries a reach
/// count, an interaction count, or both; an absent count means "no data",
/// which is different from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub date: NaiveDate,
    pub medium_id: MediumId,
    pub place: Place,
    pub persons_reached: Option<u64>,
    pub reach_unit: String,
    pub interactions: Option<u64>,
    pub interaction_unit: String,
}

impl EventRecord {
    /// Persons physically accounted for at the record's place: the reach
    /// count when recorded, otherwise the interacting persons.
    pub fn headcount(&self) -> u64 {
        self.persons_reached.or(self.interactions).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventLedger {
    pub records: Vec<EventRecord>,
    pub window: Option<Window>,
}

impl EventLedger {
    pub fn new(records: Vec<EventRecord>) -> Self {
        EventLedger { records, window: None }
    }

    /// Attaches a window, rejecting records dated outside it.
    pub fn with_window(mut self, window: Window) -> Result<Self, IngestError> {
        if let Some((i, r)) = self.records.iter().enumerate().find(|(_, r)| !window.contains(r.date)) {
            return Err(window_issue(i + 2, r.date, &window).into());
        }
        self.window = Some(window);
        Ok(self)
    }

    pub fn records_for<'a>(&'a self, id: &'a MediumId) -> impl Iterator<Item = &'a EventRecord> + 'a {
        self.records.iter().filter(move |r| &r.medium_id == id)
    }
}

fn window_issue(line: usize, date: NaiveDate, window: &Window) -> Issue {
    Issue::new(
        line,
        IssueCode::WindowViolation,
        format!("date {date} outside window {}..{}", window.start, window.end),
    )
}

fn parse_count(line: usize, field: &str, value: &str, issues: &mut Vec<Issue>) -> Option<u64> {
    if value.is_empty() {
        return None;
    }
    match value.parse::<i128>() {
        Ok(n) if n < 0 => {
            issues.push(Issue::new(
                line,
                IssueCode::NegativeCount,
                format!("{field} is negative ({n})"),
            ));
            None
        }
        Ok(n) => match u64::try_from(n) {
            Ok(n) => Some(n),
            Err(_) => {
                issues.push(Issue::new(line, IssueCode::MalformedRow, format!("{field} too large")));
                None
            }
        },
        Err(_) => {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                format!("{field} is not an integer: {value:?}"),
            ));
            None
        }
    }
}

fn parse_place(line: usize, name: &str, lat: &str, lon: &str, issues: &mut Vec<Issue>) -> Option<Place> {
    if name.is_empty() {
        if !lat.is_empty() || !lon.is_empty() {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                "virtual place cannot carry coordinates",
            ));
            return None;
        }
        return Some(Place::Virtual);
    }
    if name.trim().is_empty() {
        issues.push(Issue::new(line, IssueCode::EmptyPlaceName, "place name is blank"));
        return None;
    }
    let coords = match (lat.is_empty(), lon.is_empty()) {
        (true, true) => None,
        (false, false) => {
            let (Ok(la), Ok(lo)) = (lat.parse::<f64>(), lon.parse::<f64>()) else {
                issues.push(Issue::new(
                    line,
                    IssueCode::MalformedRow,
                    format!("bad coordinates {lat:?}, {lon:?}"),
                ));
                return None;
            };
            match Coordinates::new(la, lo) {
                Ok(c) => Some(c),
                Err(_) => {
                    issues.push(Issue::new(
                        line,
                        IssueCode::CoordinateOutOfRange,
                        format!("coordinates ({la}, {lo}) out of range"),
                    ));
                    return None;
                }
            }
        }
        _ => {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                "lat and lon must both be given or both be empty",
            ));
            return None;
        }
    };
    Some(Place::Real {
        name: name.to_string(),
        coords,
    })
}

/// Checks every row, returning the records that passed and all issues found.
fn check_rows(
    text: &str,
    registry: &MediaRegistry,
    window: Option<&Window>,
) -> Result<(Vec<EventRecord>, Vec<Issue>), IngestError> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, &EVENTS_HEADER)?;
    let mut records = Vec::new();
    let mut issues = Vec::new();
    for result in reader.records() {
        let row = result.map_err(|e| IngestError::Syntax(e.to_string()))?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.len() != EVENTS_HEADER.len() {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                format!("expected {} fields, found {}", EVENTS_HEADER.len(), row.len()),
            ));
            continue;
        }
        let before = issues.len();

        let date = match NaiveDate::parse_from_str(&row[0], DATE_FORMAT) {
            Ok(d) => {
                if let Some(w) = window.filter(|w| !w.contains(d)) {
                    issues.push(window_issue(line, d, w));
                }
                Some(d)
            }
            Err(_) => {
                issues.push(Issue::new(line, IssueCode::BadDate, format!("bad date {:?}", &row[0])));
                None
            }
        };
        let medium_id = MediumId::new(&row[1]);
        if !registry.contains(&medium_id) {
            issues.push(Issue::new(
                line,
                IssueCode::UnknownMedium,
                format!("medium {medium_id:?} not in registry"),
            ));
        }
        let place = parse_place(line, &row[2], &row[3], &row[4], &mut issues);
        let persons_reached = parse_count(line, "persons_reached", &row[5], &mut issues);
        let interactions = parse_count(line, "interactions", &row[7], &mut issues);
        if row[5].is_empty() && row[7].is_empty() {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                "record carries neither persons_reached nor interactions",
            ));
        }

        if issues.len() == before {
            records.push(EventRecord {
                date: date.expect("no issue implies a date"),
                medium_id,
                place: place.expect("no issue implies a place"),
                persons_reached,
                reach_unit: row[6].to_string(),
                interactions,
                interaction_unit: row[8].to_string(),
            });
        }
    }
    Ok((records, issues))
}

/// Parses `events.csv` against a registry. No window is attached.
pub fn parse_event_ledger(text: &str, registry: &MediaRegistry) -> Result<EventLedger, IngestError> {
    let (records, issues) = check_rows(text, registry, None)?;
    match issues.into_iter().next() {
        Some(first) => Err(first.into()),
        None => Ok(EventLedger::new(records)),
    }
}

/// Like [`parse_event_ledger`] but also enforces the project window.
pub fn parse_event_ledger_in_window(
    text: &str,
    registry: &MediaRegistry,
    window: Window,
) -> Result<EventLedger, IngestError> {
    let (records, issues) = check_rows(text, registry, Some(&window))?;
    match issues.into_iter().next() {
        Some(first) => Err(first.into()),
        None => Ok(EventLedger {
            records,
            window: Some(window),
        }),
    }
}

fn coverage_warnings(records: &[EventRecord], registry: &MediaRegistry) -> Vec<Issue> {
    let mut warnings = Vec::new();
    for m in registry.media() {
        let mut any = false;
        let mut reach = false;
        let mut interactions = false;
        for r in records.iter().filter(|r| r.medium_id == m.id) {
            any = true;
            reach |= r.persons_reached.is_some();
            interactions |= r.interactions.is_some();
        }
        if !any {
            warnings.push(Issue::new(
                0,
                IssueCode::NoRecords,
                format!("{} has no ledger records", m.id),
            ));
            continue;
        }
        if !reach {
            warnings.push(Issue::new(0, IssueCode::NoReach, format!("{} has no reach data", m.id)));
        }
        if !interactions {
            warnings.push(Issue::new(
                0,
                IssueCode::NoInteractions,
                format!("{} has no interaction data", m.id),
            ));
        }
    }
    warnings
}

/// Validates an already-built ledger. Errors and warnings are data, never a
/// failure. Line numbers assume the canonical one-record-per-line layout.
pub fn validate_ledger(ledger: &EventLedger, registry: &MediaRegistry) -> ValidationReport {
    let mut errors = Vec::new();
    for (i, r) in ledger.records.iter().enumerate() {
        let line = i + 2;
        if !registry.contains(&r.medium_id) {
            errors.push(Issue::new(
                line,
                IssueCode::UnknownMedium,
                format!("medium {:?} not in registry", r.medium_id),
            ));
        }
        if let Some(w) = ledger.window.as_ref().filter(|w| !w.contains(r.date)) {
            errors.push(window_issue(line, r.date, w));
        }
        if let Place::Real { name, coords } = &r.place {
            if name.trim().is_empty() {
                errors.push(Issue::new(line, IssueCode::EmptyPlaceName, "place name is blank"));
            }
            if let Some(c) = coords {
                if Coordinates::new(c.lat, c.lon).is_err() {
                    errors.push(Issue::new(
                        line,
                        IssueCode::CoordinateOutOfRange,
                        format!("coordinates ({}, {}) out of range", c.lat, c.lon),
                    ));
                }
            }
        }
        if r.persons_reached.is_none() && r.interactions.is_none() {
            errors.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                "record carries neither persons_reached nor interactions",
            ));
        }
    }
    ValidationReport {
        errors,
        warnings: coverage_warnings(&ledger.records, registry),
    }
}

/// Row-level validation straight from text, reporting every issue.
pub fn validate_events_text(
    text: &str,
    registry: &MediaRegistry,
    window: Option<Window>,
) -> Result<ValidationReport, IngestError> {
    let (records, errors) = check_rows(text, registry, window.as_ref())?;
    Ok(ValidationReport {
        errors,
        warnings: coverage_warnings(&records, registry),
    })
}

fn opt_count(n: Option<u64>) -> String {
    n.map(|n| n.to_string()).unwrap_or_default()
}

pub fn serialize_event_ledger(ledger: &EventLedger) -> String {
    let mut w = csv_writer();
    w.write_record(EVENTS_HEADER).expect("in-memory write");
    for r in &ledger.records {
        let date = r.date.format(DATE_FORMAT).to_string();
        let (place, lat, lon) = match &r.place {
            Place::Virtual => (String::new(), String::new(), String::new()),
            Place::Real { name, coords } => match coords {
                Some(c) => (name.clone(), c.lat.to_string(), c.lon.to_string()),
                None => (name.clone(), String::new(), String::new()),
            },
        };
        w.write_record([
            date.as_str(),
            r.medium_id.as_str(),
            place.as_str(),
            lat.as_str(),
            lon.as_str(),
            opt_count(r.persons_reached).as_str(),
            r.reach_unit.as_str(),
            opt_count(r.interactions).as_str(),
            r.interaction_unit.as_str(),
        ])
        .expect("in-memory write");
    }
    finish_csv(w)
}
