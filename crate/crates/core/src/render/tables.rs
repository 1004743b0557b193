use num_rational::Ratio;

use super::charts::format_value;
use super::format::{apportion_percent, format_percent, format_signed_points, format_units, Decimal};
use crate::analysis::{ModalityComparison, Ranking, SurveyReport, TopologySeries, TypeShare};
use crate::ingest::{MediaRegistry, Tag};
use crate::metrics::{DensityLocation, Fraction, MetricsTable, ModalityMix, PlaceDensity};
use crate::model::MediaType;

pub const ABSENT: &str = "-";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Markdown => "md",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = crate::ingest::csv_writer();
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        crate::ingest::finish_csv(w)
    }

    pub fn to_markdown(&self) -> String {
        let cell = |s: &str| s.replace('|', "\\|");
        let mut out = String::new();
        out.push_str(&format!(
            "| {} |\n",
            self.headers.iter().map(|h| cell(h)).collect::<Vec<_>>().join(" | ")
        ));
        out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for r in &self.rows {
            out.push_str(&format!(
                "| {} |\n",
                r.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | ")
            ));
        }
        out
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Markdown => self.to_markdown(),
        }
    }
}

/// Anything that lays out as a report table.
pub trait ToTable {
    fn to_table(&self, sep: Decimal) -> Table;
}

/// CSV always uses a decimal point; Markdown honours `sep`.
pub fn emit_table(rows: &impl ToTable, format: TableFormat, sep: Decimal) -> String {
    let sep = match format {
        TableFormat::Csv => Decimal::Point,
        TableFormat::Markdown => sep,
    };
    rows.to_table(sep).render(format)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| ABSENT.to_string())
}

impl ToTable for MetricsTable {
    fn to_table(&self, sep: Decimal) -> Table {
        let mut t = Table::new(&["medium_id", "range", "interactions", "response_rate"]);
        for r in &self.rows {
            t.push(vec![
                r.medium_id.to_string(),
                opt(r.range),
                opt(r.interactions),
                opt(r.response_rate.map(|v| format_percent(v, 0, sep))),
            ]);
        }
        t
    }
}

impl ToTable for Ranking {
    fn to_table(&self, sep: Decimal) -> Table {
        let mut t = Table::new(&["rank", "medium_id", "value"]);
        for (i, e) in self.entries.iter().enumerate() {
            let v = e.value.expect("ranked entries carry values");
            let shown = if self.key.is_rate() {
                format_percent(v, 0, sep)
            } else {
                format_value(self.key, v)
            };
            t.push(vec![(i + 1).to_string(), e.medium_id.to_string(), shown]);
        }
        for e in &self.unranked {
            t.push(vec![ABSENT.into(), e.medium_id.to_string(), ABSENT.into()]);
        }
        t
    }
}

/// Shares of a partition, apportioned so the displayed column sums to 100.00%.
fn share_column(shares: &[(MediaType, Fraction)], sep: Decimal) -> Vec<String> {
    let parts: Vec<Fraction> = shares.iter().map(|(_, s)| *s).collect();
    apportion_percent(&parts, 2)
        .into_iter()
        .map(|u| format!("{}%", format_units(u, 2, sep)))
        .collect()
}

fn type_count_table(shares: [(MediaType, Fraction); 4], count: impl Fn(MediaType) -> u64, sep: Decimal) -> Table {
    let mut t = Table::new(&["media_type", "count", "share"]);
    for ((mt, _), share) in shares.iter().zip(share_column(&shares, sep)) {
        t.push(vec![mt.name().into(), count(*mt).to_string(), share]);
    }
    t
}

impl ToTable for ModalityMix {
    fn to_table(&self, sep: Decimal) -> Table {
        type_count_table(self.shares(), |t| self.count(t), sep)
    }
}

impl ToTable for TypeShare {
    fn to_table(&self, sep: Decimal) -> Table {
        type_count_table(self.shares(), |t| self.count(t), sep)
    }
}

impl ToTable for ModalityComparison {
    fn to_table(&self, sep: Decimal) -> Table {
        let mut t = Table::new(&["media_type", &self.label_a, &self.label_b, "delta"]);
        let a: Vec<_> = self.rows.iter().map(|r| (r.media_type, r.share_a)).collect();
        let b: Vec<_> = self.rows.iter().map(|r| (r.media_type, r.share_b)).collect();
        for ((row, sa), sb) in self.rows.iter().zip(share_column(&a, sep)).zip(share_column(&b, sep)) {
            t.push(vec![
                row.media_type.name().into(),
                sa,
                sb,
                format_signed_points(row.delta, 2, sep),
            ]);
        }
        t
    }
}

impl ToTable for TopologySeries {
    fn to_table(&self, sep: Decimal) -> Table {
        let mut t = Table::new(&["day_index", "date", "medium_id", "value"]);
        for p in &self.points {
            let date = self.window.start() + chrono::Days::new(p.day_index as u64);
            let value = if self.metric.is_rate() {
                format_percent(p.value, 2, sep)
            } else {
                p.value.to_integer().to_string()
            };
            t.push(vec![
                p.day_index.to_string(),
                date.to_string(),
                p.medium_id.to_string(),
                value,
            ]);
        }
        t
    }
}

/// Place densities with the dominant media type looked up in `registry`.
pub struct DensityTable<'a> {
    pub densities: &'a [PlaceDensity],
    pub registry: &'a MediaRegistry,
}

impl ToTable for DensityTable<'_> {
    fn to_table(&self, _sep: Decimal) -> Table {
        let mut t = Table::new(&["location", "kind", "lat", "lon", "persons", "dominant_type"]);
        for d in self.densities {
            let (kind, lat, lon) = match &d.location {
                DensityLocation::Real { coords, .. } => {
                    ("real", opt(coords.map(|c| c.lat)), opt(coords.map(|c| c.lon)))
                }
                DensityLocation::Virtual(_) => ("virtual", ABSENT.into(), ABSENT.into()),
            };
            t.push(vec![
                d.location.label().into(),
                kind.into(),
                lat,
                lon,
                d.persons.to_string(),
                opt(d.dominant_type(self.registry).map(|t| t.name())),
            ]);
        }
        t
    }
}

fn share_of(count: u64, total: u64, sep: Decimal) -> String {
    if total == 0 {
        ABSENT.into()
    } else {
        format_percent(Ratio::new(count, total), 2, sep)
    }
}

fn tag_name(tag: &Tag) -> String {
    match tag {
        Tag::Modern => "modern".into(),
        Tag::Traditional => "traditional".into(),
        Tag::Low => "low".into(),
        Tag::Correct => "correct".into(),
        Tag::Incorrect => "incorrect".into(),
        Tag::Descriptive => "descriptive".into(),
        Tag::Activity(w) => format!("activity:{w}"),
        Tag::Media { media_type, .. } => format!("media:{}", media_type.name()),
    }
}

/// Per-participant scores.
impl ToTable for SurveyReport {
    fn to_table(&self, _sep: Decimal) -> Table {
        let mut t = Table::new(&[
            "answer_id",
            "completer",
            "modern",
            "traditional",
            "low",
            "d_correct",
            "e_correct",
            "media_use",
            "activity",
        ]);
        for p in &self.participants {
            let score = |answered: bool, n: u32| if answered { format!("{n}/3") } else { ABSENT.into() };
            t.push(vec![
                p.answer_id.to_string(),
                if p.completer { "yes" } else { "no" }.into(),
                p.understanding.modern.to_string(),
                p.understanding.traditional.to_string(),
                p.understanding.low.to_string(),
                score(p.answered_d, p.d_correct),
                score(p.answered_e, p.e_correct),
                if p.answered_f {
                    p.media_use.to_string()
                } else {
                    ABSENT.into()
                },
                if p.answered_f {
                    p.activity.to_string()
                } else {
                    ABSENT.into()
                },
            ]);
        }
        t
    }
}

/// Option counts with shares over all participants.
pub fn survey_options_table(report: &SurveyReport, sep: Decimal) -> Table {
    let n = report.participant_count();
    let mut t = Table::new(&["question", "option", "label", "tag", "count", "share"]);
    for o in &report.options {
        t.push(vec![
            o.question.to_string(),
            o.option.clone(),
            o.label.clone(),
            tag_name(&o.tag),
            o.count.to_string(),
            share_of(o.count, n, sep),
        ]);
    }
    t
}

/// Answered and unanswered counts per question group.
pub fn survey_groups_table(report: &SurveyReport, sep: Decimal) -> Table {
    let n = report.participant_count();
    let mut t = Table::new(&["group", "answered", "unanswered", "answered_share", "unanswered_share"]);
    for g in &report.groups {
        t.push(vec![
            g.group.letter().to_string(),
            g.answered.to_string(),
            g.unanswered.to_string(),
            share_of(g.answered, n, sep),
            share_of(g.unanswered, n, sep),
        ]);
    }
    t
}

/// Aggregate understanding coding over all C-group answers.
pub fn survey_understanding_table(report: &SurveyReport, sep: Decimal) -> Table {
    let u = report.understanding;
    let mut t = Table::new(&["understanding", "count", "share"]);
    let total = u.total();
    let counts = [("modern", u.modern), ("traditional", u.traditional), ("low", u.low)];
    let shares: Vec<String> = if total == 0 {
        vec![ABSENT.into(); 3]
    } else {
        let parts: Vec<Fraction> = counts.iter().map(|(_, c)| Ratio::new(*c, total)).collect();
        apportion_percent(&parts, 2)
            .into_iter()
            .map(|u| format!("{}%", format_units(u, 2, sep)))
            .collect()
    };
    for ((name, c), s) in counts.iter().zip(shares) {
        t.push(vec![name.to_string(), c.to_string(), s]);
    }
    t
}
