use std::collections::HashMap;

use super::{check_header, csv_reader, csv_writer, finish_csv, IngestError, Issue, IssueCode, ValidationReport};
use crate::model::{media_type_of_id, MediaType, Medium, MediumId};

pub const MEDIA_HEADER: [&str; 3] = ["medium_id", "name", "media_type"];

/// Media in file order. Ids are unique, the registry is never empty and every
/// id prefix agrees with its media type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediaRegistry {
    media: Vec<Medium>,
    index: HashMap<MediumId, usize>,
}

impl MediaRegistry {
    pub fn new(media: Vec<Medium>) -> Result<Self, IngestError> {
        if media.is_empty() {
            return Err(Issue::new(0, IssueCode::EmptyRegistry, "registry has no media").into());
        }
        let mut index = HashMap::with_capacity(media.len());
        for (pos, m) in media.iter().enumerate() {
            if let Some(issue) = prefix_issue(pos + 2, m.id.as_str(), m.media_type) {
                return Err(issue.into());
            }
            if index.insert(m.id.clone(), pos).is_some() {
                return Err(
                    Issue::new(pos + 2, IssueCode::DuplicateId, format!("duplicate medium id {}", m.id)).into(),
                );
            }
        }
        Ok(MediaRegistry { media, index })
    }

    pub fn media(&self) -> &[Medium] {
        &self.media
    }

    pub fn len(&self) -> usize {
        self.media.len()
    }

    pub fn is_empty(&self) -> bool {
        self.media.is_empty()
    }

    pub fn get(&self, id: &MediumId) -> Option<&Medium> {
        self.index.get(id).map(|&i| &self.media[i])
    }

    pub fn contains(&self, id: &MediumId) -> bool {
        self.index.contains_key(id)
    }

    /// Registry position, used as a stable secondary order.
    pub fn position(&self, id: &MediumId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn media_type(&self, id: &MediumId) -> Option<MediaType> {
        self.get(id).map(|m| m.media_type)
    }
}

fn prefix_issue(line: usize, id: &str, declared: MediaType) -> Option<Issue> {
    match media_type_of_id(id) {
        Ok(t) if t == declared => None,
        Ok(t) => Some(Issue::new(
            line,
            IssueCode::PrefixMismatch,
            format!("id {id} has {t} prefix but media_type is {declared}"),
        )),
        Err(_) => Some(Issue::new(
            line,
            IssueCode::PrefixMismatch,
            format!("id {id:?} does not start with P, S, T or Q"),
        )),
    }
}

fn check_rows(text: &str) -> Result<(Vec<Medium>, Vec<Issue>), IngestError> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, &MEDIA_HEADER)?;
    let mut media = Vec::new();
    let mut issues = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for result in reader.records() {
        let record = result.map_err(|e| IngestError::Syntax(e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != MEDIA_HEADER.len() {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                format!("expected {} fields, found {}", MEDIA_HEADER.len(), record.len()),
            ));
            continue;
        }
        let (id, name, type_field) = (&record[0], &record[1], &record[2]);
        if id.is_empty() || name.is_empty() {
            issues.push(Issue::new(
                line,
                IssueCode::MalformedRow,
                "medium_id and name must be non-empty",
            ));
            continue;
        }
        let media_type: MediaType = match type_field.parse() {
            Ok(t) => t,
            Err(_) => {
                issues.push(Issue::new(
                    line,
                    IssueCode::MalformedRow,
                    format!("unknown media_type {type_field:?}"),
                ));
                continue;
            }
        };
        if let Some(first) = seen.get(id) {
            issues.push(Issue::new(
                line,
                IssueCode::DuplicateId,
                format!("medium id {id} already defined on line {first}"),
            ));
            continue;
        }
        seen.insert(id.to_string(), line);
        if let Some(issue) = prefix_issue(line, id, media_type) {
            issues.push(issue);
            continue;
        }
        media.push(Medium {
            id: MediumId::new(id),
            name: name.to_string(),
            media_type,
        });
    }
    if media.is_empty() && issues.is_empty() {
        issues.push(Issue::new(1, IssueCode::EmptyRegistry, "registry has no media"));
    }
    Ok((media, issues))
}

/// Parses `media.csv` (`medium_id,name,media_type`).
pub fn parse_media_registry(text: &str) -> Result<MediaRegistry, IngestError> {
    let (media, issues) = check_rows(text)?;
    if let Some(first) = issues.into_iter().next() {
        return Err(first.into());
    }
    MediaRegistry::new(media)
}

/// Collects every registry issue instead of stopping at the first.
pub fn validate_registry_text(text: &str) -> Result<ValidationReport, IngestError> {
    let (_, errors) = check_rows(text)?;
    Ok(ValidationReport {
        errors,
        warnings: Vec::new(),
    })
}

pub fn serialize_media_registry(registry: &MediaRegistry) -> String {
    let mut w = csv_writer();
    w.write_record(MEDIA_HEADER).expect("in-memory write");
    for m in registry.media() {
        w.write_record([m.id.as_str(), m.name.as_str(), m.media_type.name()])
            .expect("in-memory write");
    }
    finish_csv(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code_of(text: &str) -> Option<IssueCode> {
        parse_media_registry(text).err().and_then(|e| e.code())
    }

    #[test]
    fn parses_rows_in_order() {
        let reg = parse_media_registry("medium_id,name,media_type\nQ_I,Instagram,Quaternary\nP_V,Vernissage,Primary\n")
            .unwrap();
        assert_eq!(reg.len(), 2);
        assert_eq!(
            reg.media()[0],
            Medium {
                id: MediumId::new("Q_I"),
                name: "Instagram".into(),
                media_type: MediaType::Quaternary
            }
        );
        assert_eq!(reg.position(&MediumId::new("P_V")), Some(1));
    }

    #[test]
    fn duplicate_id() {
        let text = "medium_id,name,media_type\nP_V,Vernissage,Primary\nP_V,Other,Primary\n";
        assert_eq!(code_of(text), Some(IssueCode::DuplicateId));
    }

    #[test]
    fn prefix_mismatch() {
        let text = "medium_id,name,media_type\nP_V,Vernissage,Secondary\n";
        assert_eq!(code_of(text), Some(IssueCode::PrefixMismatch));
    }

    #[test]
    fn malformed_rows() {
        assert_eq!(
            code_of("medium_id,name,media_type\nP_V,Vernissage\n"),
            Some(IssueCode::MalformedRow)
        );
        assert_eq!(
            code_of("medium_id,name,media_type\nP_V,Vernissage,Radio\n"),
            Some(IssueCode::MalformedRow)
        );
        assert_eq!(
            code_of("medium_id,name,media_type\n,Vernissage,Primary\n"),
            Some(IssueCode::MalformedRow)
        );
    }

    #[test]
    fn empty_registry_rejected() {
        assert_eq!(code_of("medium_id,name,media_type\n"), Some(IssueCode::EmptyRegistry));
        assert!(MediaRegistry::new(Vec::new()).is_err());
    }

    #[test]
    fn bad_header_is_syntax() {
        assert!(matches!(
            parse_media_registry("id,name,type\nP_V,Vernissage,Primary\n"),
            Err(IngestError::Syntax(_))
        ));
    }

    #[test]
    fn validator_collects_everything() {
        let text = "medium_id,name,media_type\nP_V,Vernissage,Secondary\nP_K,Talk,Primary\nP_K,Talk,Primary\nX\n";
        let report = validate_registry_text(text).unwrap();
        let codes: Vec<_> = report.errors.iter().map(|i| (i.line, i.code)).collect();
        assert_eq!(
            codes,
            vec![
                (2, IssueCode::PrefixMismatch),
                (4, IssueCode::DuplicateId),
                (5, IssueCode::MalformedRow)
            ]
        );
    }

    #[test]
    fn quoting_survives_round_trip() {
        let text = "medium_id,name,media_type\nS_B,\"Library, Bookshop\",Secondary\n";
        let reg = parse_media_registry(text).unwrap();
        assert_eq!(reg.media()[0].name, "Library, Bookshop");
        assert_eq!(serialize_media_registry(&reg), text);
    }
}
