//! Domain vocabulary shared by every other module: media types, media,
//! places, participant activities and the color convention.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown media type prefix in id {0:?}")]
    UnknownPrefix(String),
    #[error("unknown media type {0:?}")]
    UnknownMediaType(String),
    #[error("unknown activity {0:?}")]
    UnknownActivity(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("real place needs a non-empty name")]
    EmptyPlaceName,
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    CoordinateOutOfRange { lat: f64, lon: f64 },
    #[error("activity mapping line {line}: {message}")]
    MappingRow { line: usize, message: String },
}

/// Faulstich media types. The derived ordering is the canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MediaType {
    Primary,
    Secondary,
    Tertiary,
    Quaternary,
}

impl MediaType {
    pub const ALL: [MediaType; 4] = [
        MediaType::Primary,
        MediaType::Secondary,
        MediaType::Tertiary,
        MediaType::Quaternary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MediaType::Primary => "Primary",
            MediaType::Secondary => "Secondary",
            MediaType::Tertiary => "Tertiary",
            MediaType::Quaternary => "Quaternary",
        }
    }

    /// Leading letter of medium ids of this type.
    pub fn prefix(self) -> char {
        match self {
            MediaType::Primary => 'P',
            MediaType::Secondary => 'S',
            MediaType::Tertiary => 'T',
            MediaType::Quaternary => 'Q',
        }
    }
}

impl fmt::Display for MediaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MediaType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MediaType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ModelError::UnknownMediaType(s.to_string()))
    }
}

/// Derives the media type from the leading letter of a medium id.
pub fn media_type_of_id(id: &str) -> Result<MediaType, ModelError> {
    let first = id
        .chars()
        .next()
        .ok_or_else(|| ModelError::UnknownPrefix(id.to_string()))?;
    MediaType::ALL
        .into_iter()
        .find(|t| t.prefix() == first)
        .ok_or_else(|| ModelError::UnknownPrefix(id.to_string()))
}

/// Short medium code such as `P_V` or `Q_I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MediumId(String);

impl MediumId {
    pub fn new(id: impl Into<String>) -> Self {
        MediumId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MediumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for MediumId {
    fn from(s: &str) -> Self {
        MediumId(s.to_string())
    }
}

impl PartialEq<str> for MediumId {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for MediumId {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Medium {
    pub id: MediumId,
    pub name: String,
    pub media_type: MediaType,
}

/// Latitude/longitude in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordinates {
    pub lat: f64,
    pub lon: f64,
}

impl Coordinates {
    pub fn new(lat: f64, lon: f64) -> Result<Self, ModelError> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(ModelError::CoordinateOutOfRange { lat, lon });
        }
        Ok(Coordinates { lat, lon })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Place {
    Real {
        name: String,
        coords: Option<Coordinates>,
    },
    /// A medium without an assignable physical location.
    Virtual,
}

impl Place {
    pub fn real(name: impl Into<String>, coords: Option<Coordinates>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(ModelError::EmptyPlaceName);
        }
        Ok(Place::Real { name, coords })
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Place::Real { name, .. } => Some(name),
            Place::Virtual => None,
        }
    }

    pub fn coords(&self) -> Option<Coordinates> {
        match self {
            Place::Real { coords, .. } => *coords,
            Place::Virtual => None,
        }
    }

    pub fn is_virtual(&self) -> bool {
        matches!(self, Place::Virtual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActivityKind {
    Reception,
    Reflection,
    Discourse,
    MediaActivity,
    ArtisticActivity,
}

impl ActivityKind {
    pub const ALL: [ActivityKind; 5] = [
        ActivityKind::Reception,
        ActivityKind::Reflection,
        ActivityKind::Discourse,
        ActivityKind::MediaActivity,
        ActivityKind::ArtisticActivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActivityKind::Reception => "Reception",
            ActivityKind::Reflection => "Reflection",
            ActivityKind::Discourse => "Discourse",
            ActivityKind::MediaActivity => "MediaActivity",
            ActivityKind::ArtisticActivity => "ArtisticActivity",
        }
    }
}

impl FromStr for ActivityKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ActivityKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ModelError::UnknownActivity(s.to_string()))
    }
}

/// Popper's three worlds: physical (1), mental (2), objective knowledge (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PopperWorld {
    World1,
    World2,
    World3,
}

impl PopperWorld {
    pub const ALL: [PopperWorld; 3] = [PopperWorld::World1, PopperWorld::World2, PopperWorld::World3];

    pub fn name(self) -> &'static str {
        match self {
            PopperWorld::World1 => "World1",
            PopperWorld::World2 => "World2",
            PopperWorld::World3 => "World3",
        }
    }
}

impl FromStr for PopperWorld {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PopperWorld::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| ModelError::UnknownWorld(s.to_string()))
    }
}

/// Activity to world assignment. Loaded from a data file; the default
/// matches the bundled `popper.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopperMapping {
    worlds: BTreeMap<ActivityKind, PopperWorld>,
}

impl Default for PopperMapping {
    fn default() -> Self {
        let worlds = ActivityKind::ALL
            .into_iter()
            .map(|a| {
                let w = match a {
                    ActivityKind::Reception | ActivityKind::MediaActivity => PopperWorld::World1,
                    ActivityKind::Discourse | ActivityKind::Reflection => PopperWorld::World2,
                    ActivityKind::ArtisticActivity => PopperWorld::World3,
                };
                (a, w)
            })
            .collect();
        PopperMapping { worlds }
    }
}

impl PopperMapping {
    /// Parses an `activity,world` CSV. Every activity must be listed exactly once.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "activity,world")) => {}
            _ => {
                return Err(ModelError::MappingRow {
                    line: 1,
                    message: "expected header `activity,world`".into(),
                })
            }
        }
        let mut worlds = BTreeMap::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.is_empty() {
                continue;
            }
            let (activity, world) = line.split_once(',').ok_or_else(|| ModelError::MappingRow {
                line: line_no,
                message: "expected two fields".into(),
            })?;
            let activity: ActivityKind = activity.parse()?;
            let world: PopperWorld = world.parse()?;
            if worlds.insert(activity, world).is_some() {
                return Err(ModelError::MappingRow {
                    line: line_no,
                    message: format!("activity {} listed twice", activity.name()),
                });
            }
        }
        if let Some(missing) = ActivityKind::ALL.into_iter().find(|a| !worlds.contains_key(a)) {
            return Err(ModelError::MappingRow {
                line: 0,
                message: format!("activity {} not mapped", missing.name()),
            });
        }
        Ok(PopperMapping { worlds })
    }

    pub fn world_of(&self, activity: ActivityKind) -> PopperWorld {
        // parse() and default() both guarantee totality
        self.worlds[&activity]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("activity,world\n");
        for (a, w) in &self.worlds {
            out.push_str(a.name());
            out.push(',');
            out.push_str(w.name());
            out.push('\n');
        }
        out
    }
}

/// World of an activity under the default mapping.
pub fn popper_world_of(activity: ActivityKind) -> PopperWorld {
    PopperMapping::default().world_of(activity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorToken {
    Green,
    Red,
    Orange,
    Purple,
}

impl ColorToken {
    pub fn name(self) -> &'static str {
        match self {
            ColorToken::Green => "green",
            ColorToken::Red => "red",
            ColorToken::Orange => "orange",
            ColorToken::Purple => "purple",
        }
    }

    pub fn hex(self) -> &'static str {
        match self {
            ColorToken::Green => colors::GREEN,
            ColorToken::Red => colors::RED,
            ColorToken::Orange => colors::ORANGE,
            ColorToken::Purple => colors::PURPLE,
        }
    }
}

/// Fixed hex values for the color tokens used in every chart.
pub mod colors {
    pub const GREEN: &str = "#2E8B57";
    pub const RED: &str = "#C0392B";
    pub const ORANGE: &str = "#E67E22";
    pub const PURPLE: &str = "#8E44AD";
    /// Unranked or absent values.
    pub const NEUTRAL_GREY: &str = "#9E9E9E";
}

pub fn color_of(t: MediaType) -> ColorToken {
    match t {
        MediaType::Primary => ColorToken::Green,
        MediaType::Secondary => ColorToken::Red,
        MediaType::Tertiary => ColorToken::Orange,
        MediaType::Quaternary => ColorToken::Purple,
    }
}
