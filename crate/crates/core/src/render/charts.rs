use thiserror::Error;

use super::format::{format_percent, Decimal};
use super::svg::{Anchor, Element, SvgDocument};
use crate::analysis::{MetricKey, Ranking, TopologySeries};
use crate::ingest::MediaRegistry;
use crate::metrics::{DensityLocation, Fraction, PlaceDensity};
use crate::model::{color_of, colors, MediaType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("ranking has no media")]
    EmptyRanking,
    #[error("series has no points")]
    EmptySeries,
    #[error("invalid chart spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    RankingBars,
    TopologyBubbles,
    DensityMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// `log10(1 + v)`, so zero maps to zero.
    Log,
}

/// Layout parameters. The density map ignores `scale` and `max_radius`: its
/// circles always have a diameter of one pixel per person.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    /// `None` picks log for counts and linear for rates.
    pub scale: Option<Scale>,
    pub labels: bool,
    /// Radius of the largest topology bubble.
    pub max_radius: f64,
    /// Width of the density map's column for locations without coordinates.
    pub side_column: f64,
}

impl ChartSpec {
    pub fn ranking_bars() -> Self {
        ChartSpec {
            kind: ChartKind::RankingBars,
            width: 640.0,
            height: 480.0,
            margin: 20.0,
            scale: None,
            labels: true,
            max_radius: 0.0,
            side_column: 0.0,
        }
    }

    pub fn topology_bubbles() -> Self {
        ChartSpec {
            kind: ChartKind::TopologyBubbles,
            width: 800.0,
            height: 800.0,
            margin: 40.0,
            scale: None,
            labels: true,
            max_radius: 18.0,
            side_column: 0.0,
        }
    }

    pub fn density_map() -> Self {
        ChartSpec {
            kind: ChartKind::DensityMap,
            width: 800.0,
            height: 600.0,
            margin: 20.0,
            scale: None,
            labels: true,
            max_radius: 0.0,
            side_column: 160.0,
        }
    }

    fn check(&self, kind: ChartKind) -> Result<(), RenderError> {
        if self.kind != kind {
            return Err(RenderError::InvalidSpec(format!(
                "expected {kind:?} spec, got {:?}",
                self.kind
            )));
        }
        let plot_w = self.width - 2.0 * self.margin - self.side_column;
        let plot_h = self.height - 2.0 * self.margin;
        if !(self.margin >= 0.0 && plot_w > 0.0 && plot_h > 0.0 && self.max_radius >= 0.0) {
            return Err(RenderError::InvalidSpec(
                "dimensions leave no positive plot area".into(),
            ));
        }
        Ok(())
    }
}

fn to_f64(r: Fraction) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn text(x: f64, y: f64, content: impl Into<String>, size: f64, anchor: Anchor) -> Element {
    Element::Text {
        x,
        y,
        content: content.into(),
        size,
        anchor,
        fill: colors::NEUTRAL_GREY,
    }
}

fn fill_of(t: MediaType) -> &'static str {
    color_of(t).hex()
}

pub fn format_value(key: MetricKey, v: Fraction) -> String {
    if key.is_rate() {
        format_percent(v, 0, Decimal::Point)
    } else {
        v.to_integer().to_string()
    }
}

const LABEL_WIDTH: f64 = 48.0;
const VALUE_WIDTH: f64 = 64.0;

/// One bar per medium from top to bottom in ranking order. Ranked bars take
/// their media type's color; unranked media get a grey stub.
pub fn render_ranking(
    ranking: &Ranking,
    registry: &MediaRegistry,
    spec: &ChartSpec,
) -> Result<SvgDocument, RenderError> {
    spec.check(ChartKind::RankingBars)?;
    if ranking.is_empty() {
        return Err(RenderError::EmptyRanking);
    }
    let scale = spec.scale.unwrap_or(if ranking.key.is_rate() {
        Scale::Linear
    } else {
        Scale::Log
    });
    let project = |v: f64| match scale {
        Scale::Linear => v,
        Scale::Log => (1.0 + v).log10(),
    };
    let max = ranking
        .entries
        .iter()
        .filter_map(|e| e.value.map(to_f64))
        .map(project)
        .fold(0.0, f64::max);
    let mut doc = SvgDocument::new(spec.width, spec.height);
    let left = spec.margin + LABEL_WIDTH;
    let plot_w = spec.width - left - spec.margin - VALUE_WIDTH;
    let pitch = (spec.height - 2.0 * spec.margin) / ranking.len() as f64;
    let bar_h = pitch * 0.8;
    doc.push(Element::Line {
        x1: left,
        y1: spec.margin,
        x2: left,
        y2: spec.height - spec.margin,
        stroke: colors::NEUTRAL_GREY,
    });
    for (i, e) in ranking.ordered().enumerate() {
        let y = spec.margin + i as f64 * pitch + (pitch - bar_h) / 2.0;
        let name = registry.get(&e.medium_id).map(|m| m.name.as_str()).unwrap_or("");
        let (width, fill, label) = match e.value {
            Some(v) => {
                let w = if max > 0.0 {
                    project(to_f64(v)) / max * plot_w
                } else {
                    0.0
                };
                (w, fill_of(e.media_type), format_value(ranking.key, v))
            }
            None => (4.0, colors::NEUTRAL_GREY, "-".to_string()),
        };
        doc.push(Element::Rect {
            x: left,
            y,
            width,
            height: bar_h,
            fill,
            attrs: vec![("data-medium", e.medium_id.to_string())],
            title: Some(format!("{} {name}: {label}", e.medium_id)),
        });
        if spec.labels {
            let ty = y + bar_h * 0.75;
            doc.push(text(left - 4.0, ty, e.medium_id.to_string(), bar_h * 0.8, Anchor::End));
            doc.push(text(left + width + 4.0, ty, label, bar_h * 0.8, Anchor::Start));
        }
    }
    Ok(doc)
}

/// Radius of a bubble for value `v` when `max_v` maps to `max_radius`.
pub fn bubble_radius(v: f64, max_v: f64, max_radius: f64) -> f64 {
    if v <= 0.0 || max_v <= 0.0 {
        0.0
    } else {
        v.sqrt() * (max_radius / max_v.sqrt())
    }
}

/// Media lanes left to right in registry order, days bottom to top, bubble
/// area proportional to the value. Points with value 0 draw nothing.
pub fn render_topology(
    series: &TopologySeries,
    registry: &MediaRegistry,
    spec: &ChartSpec,
) -> Result<SvgDocument, RenderError> {
    spec.check(ChartKind::TopologyBubbles)?;
    if series.points.is_empty() {
        return Err(RenderError::EmptySeries);
    }
    let mut doc = SvgDocument::new(spec.width, spec.height);
    let lanes = registry.len() as f64;
    let lane_w = (spec.width - 2.0 * spec.margin) / lanes;
    let bottom = spec.height - spec.margin;
    let day_h = (spec.height - 2.0 * spec.margin) / series.window.days() as f64;
    let max_v = series.max_value().map(to_f64).unwrap_or(0.0);

    doc.push(Element::Line {
        x1: spec.margin,
        y1: bottom,
        x2: spec.width - spec.margin,
        y2: bottom,
        stroke: colors::NEUTRAL_GREY,
    });
    doc.push(Element::Line {
        x1: spec.margin,
        y1: bottom,
        x2: spec.margin,
        y2: spec.margin,
        stroke: colors::NEUTRAL_GREY,
    });
    if spec.labels {
        for (i, m) in registry.media().iter().enumerate() {
            let x = spec.margin + (i as f64 + 0.5) * lane_w;
            doc.push(text(x, bottom + 14.0, m.id.to_string(), 9.0, Anchor::Middle));
        }
        doc.push(text(
            spec.margin - 4.0,
            bottom,
            series.window.start().to_string(),
            9.0,
            Anchor::End,
        ));
        doc.push(text(
            spec.margin - 4.0,
            spec.margin,
            series.window.end().to_string(),
            9.0,
            Anchor::End,
        ));
    }
    for p in &series.points {
        let v = to_f64(p.value);
        let r = bubble_radius(v, max_v, spec.max_radius);
        if r <= 0.0 {
            continue;
        }
        let (Some(pos), Some(t)) = (registry.position(&p.medium_id), registry.media_type(&p.medium_id)) else {
            continue;
        };
        let label = if series.metric.is_rate() {
            format_percent(p.value, 0, Decimal::Point)
        } else {
            p.value.to_integer().to_string()
        };
        doc.push(Element::Circle {
            cx: spec.margin + (pos as f64 + 0.5) * lane_w,
            cy: bottom - (p.day_index as f64 + 0.5) * day_h,
            r,
            fill: fill_of(t),
            opacity: 0.6,
            attrs: vec![
                ("data-medium", p.medium_id.to_string()),
                ("data-day", p.day_index.to_string()),
            ],
            title: Some(format!("{} day {}: {label}", p.medium_id, p.day_index)),
        });
    }
    Ok(doc)
}

/// Circles whose diameter in pixels equals the persons count. Located
/// places use an equirectangular projection of their bounding box; virtual
/// media and places without coordinates stack in a side column on the right.
/// Side-column circles are drawn first so located places stay visible.
pub fn render_density_map(
    densities: &[PlaceDensity],
    registry: &MediaRegistry,
    spec: &ChartSpec,
) -> Result<SvgDocument, RenderError> {
    spec.check(ChartKind::DensityMap)?;
    let mut doc = SvgDocument::new(spec.width, spec.height);
    let plot_w = spec.width - 2.0 * spec.margin - spec.side_column;
    let plot_h = spec.height - 2.0 * spec.margin;

    let located: Vec<(&PlaceDensity, f64, f64)> = densities
        .iter()
        .filter_map(|d| match &d.location {
            DensityLocation::Real { coords: Some(c), .. } => Some((d, c.lat, c.lon)),
            _ => None,
        })
        .collect();
    let side: Vec<&PlaceDensity> = densities
        .iter()
        .filter(|d| !matches!(&d.location, DensityLocation::Real { coords: Some(_), .. }))
        .collect();

    let (min_lat, max_lat, min_lon, max_lon) = located.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(_, lat, lon)| (a.min(lat), b.max(lat), c.min(lon), d.max(lon)),
    );
    let project = |lat: f64, lon: f64| {
        let x = if max_lon > min_lon {
            spec.margin + (lon - min_lon) / (max_lon - min_lon) * plot_w
        } else {
            spec.margin + plot_w / 2.0
        };
        let y = if max_lat > min_lat {
            spec.margin + (max_lat - lat) / (max_lat - min_lat) * plot_h
        } else {
            spec.margin + plot_h / 2.0
        };
        (x, y)
    };

    let circle = |doc: &mut SvgDocument, d: &PlaceDensity, x: f64, y: f64| {
        if d.persons == 0 {
            return;
        }
        let fill = d.dominant_type(registry).map(fill_of).unwrap_or(colors::NEUTRAL_GREY);
        let label = d.location.label().to_string();
        doc.push(Element::Circle {
            cx: x,
            cy: y,
            r: d.persons as f64 / 2.0,
            fill,
            opacity: 0.5,
            attrs: vec![("data-place", label.clone()), ("data-diameter", d.persons.to_string())],
            title: Some(format!("{label}: {}", d.persons)),
        });
        if spec.labels {
            doc.push(text(x, y - 3.0, label, 9.0, Anchor::Middle));
        }
    };

    let side_x = spec.width - spec.margin - spec.side_column / 2.0;
    let pitch = plot_h / side.len().max(1) as f64;
    for (i, d) in side.iter().enumerate() {
        circle(&mut doc, d, side_x, spec.margin + (i as f64 + 0.5) * pitch);
    }
    for (d, lat, lon) in located {
        let (x, y) = project(lat, lon);
        circle(&mut doc, d, x, y);
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::rank_media;
    use crate::ingest::{parse_event_ledger_in_window, parse_media_registry, Window};
    use crate::metrics::{metrics_table, place_density};
    use chrono::NaiveDate;

    const MEDIA: &str = "medium_id,name,media_type\nP_V,Vernissage,Primary\nQ_I,Instagram,Quaternary\n";

    fn fixture(rows: &str) -> (crate::ingest::EventLedger, MediaRegistry) {
        let reg = parse_media_registry(MEDIA).unwrap();
        let w = Window::new(
            NaiveDate::from_ymd_opt(2023, 1, 1).unwrap(),
            NaiveDate::from_ymd_opt(2023, 7, 3).unwrap(),
        )
        .unwrap();
        let text =
            format!("date,medium_id,place,lat,lon,persons_reached,reach_unit,interactions,interaction_unit\n{rows}");
        (parse_event_ledger_in_window(&text, &reg, w).unwrap(), reg)
    }

    fn radii(doc: &SvgDocument) -> Vec<f64> {
        doc.circles()
            .map(|e| match e {
                Element::Circle { r, .. } => *r,
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn empty_ranking_rejected() {
        let reg = parse_media_registry(MEDIA).unwrap();
        let r = Ranking {
            key: MetricKey::Range,
            entries: Vec::new(),
            unranked: Vec::new(),
        };
        assert_eq!(
            render_ranking(&r, &reg, &ChartSpec::ranking_bars()),
            Err(RenderError::EmptyRanking)
        );
    }

    #[test]
    fn ranking_bars_colored_and_grey() {
        let (l, reg) = fixture("2023-01-02,Q_I,,,,586,views,311,likes\n");
        let ranking = rank_media(&metrics_table(&l, &reg).unwrap(), MetricKey::Range, &reg);
        let doc = render_ranking(&ranking, &reg, &ChartSpec::ranking_bars()).unwrap();
        let fills: Vec<_> = doc
            .rects()
            .map(|e| match e {
                Element::Rect { fill, .. } => *fill,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(fills, vec![colors::PURPLE, colors::NEUTRAL_GREY]);
    }

    #[test]
    fn bubble_area_proportional() {
        let r1 = bubble_radius(1.0, 4.0, 10.0);
        let r4 = bubble_radius(4.0, 4.0, 10.0);
        assert!((r4 / r1 - 2.0).abs() < 1e-12);
        assert_eq!(bubble_radius(0.0, 4.0, 10.0), 0.0);
    }

    #[test]
    fn topology_skips_zero() {
        let (l, reg) = fixture("2023-01-02,Q_I,,,,0,views,,\n2023-01-03,Q_I,,,,9,views,,\n");
        let series = crate::analysis::topology_series(&l, &reg, MetricKey::Range).unwrap();
        let doc = render_topology(&series, &reg, &ChartSpec::topology_bubbles()).unwrap();
        assert_eq!(radii(&doc), vec![18.0]);
    }

    #[test]
    fn density_diameter_is_persons() {
        let (l, reg) = fixture(
            "2023-01-02,P_V,München,48.14,11.58,,,65,persons\n2023-01-02,P_V,Tutzing,47.91,11.28,,,1,persons\n",
        );
        let doc = render_density_map(&place_density(&l), &reg, &ChartSpec::density_map()).unwrap();
        assert_eq!(radii(&doc), vec![32.5, 0.5]);
        let svg = doc.to_svg_string();
        assert!(svg.contains("data-place=\"München\" data-diameter=\"65\""));
        assert!(svg.contains(colors::GREEN));
    }

    #[test]
    fn spec_kind_checked() {
        let reg = parse_media_registry(MEDIA).unwrap();
        assert!(matches!(
            render_density_map(&[], &reg, &ChartSpec::ranking_bars()),
            Err(RenderError::InvalidSpec(_))
        ));
    }
}
