use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{IngestError, Issue, IssueCode, ValidationReport};
use crate::model::MediaType;

/// The six question groups of the questionnaire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuestionGroup {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl QuestionGroup {
    pub const ALL: [QuestionGroup; 6] = [
        QuestionGroup::A,
        QuestionGroup::B,
        QuestionGroup::C,
        QuestionGroup::D,
        QuestionGroup::E,
        QuestionGroup::F,
    ];

    pub fn letter(self) -> char {
        match self {
            QuestionGroup::A => 'A',
            QuestionGroup::B => 'B',
            QuestionGroup::C => 'C',
            QuestionGroup::D => 'D',
            QuestionGroup::E => 'E',
            QuestionGroup::F => 'F',
        }
    }

    /// Number of questions in the group.
    pub fn size(self) -> u8 {
        match self {
            QuestionGroup::A | QuestionGroup::F => 5,
            _ => 3,
        }
    }

    pub fn questions(self) -> impl Iterator<Item = QuestionCode> {
        (1..=self.size()).map(move |n| QuestionCode { group: self, number: n })
    }
}

/// Question code such as `C2`; valid codes are A1..A5, B1..B3, C1..C3,
/// D1..D3, E1..E3 and F1..F5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuestionCode {
    group: QuestionGroup,
    number: u8,
}

impl QuestionCode {
    pub fn group(self) -> QuestionGroup {
        self.group
    }

    pub fn number(self) -> u8 {
        self.number
    }
}

impl fmt::Display for QuestionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.group.letter(), self.number)
    }
}

impl FromStr for QuestionCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| "empty question code".to_string())?;
        let group = QuestionGroup::ALL
            .into_iter()
            .find(|g| g.letter() == letter)
            .ok_or_else(|| format!("unknown question code {s:?}"))?;
        let number: u8 = chars
            .as_str()
            .parse()
            .map_err(|_| format!("unknown question code {s:?}"))?;
        if number == 0 || number > group.size() || chars.as_str().starts_with('0') {
            return Err(format!("unknown question code {s:?}"));
        }
        Ok(QuestionCode { group, number })
    }
}

/// Coding attached to an answer option.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Modern,
    Traditional,
    Low,
    Correct,
    Incorrect,
    /// Plain descriptive answer (demographics, situation).
    Descriptive,
    /// Individual activity with the given weight.
    Activity(u32),
    /// Use of a medium of the given type, optionally also weighted as activity.
    Media {
        media_type: MediaType,
        #[serde(default)]
        activity: u32,
    },
}

impl Tag {
    pub fn activity_weight(&self) -> u32 {
        match self {
            Tag::Activity(w) => *w,
            Tag::Media { activity, .. } => *activity,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionKind {
    Single,
    Multi,
    FreeText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionKey {
    pub code: String,
    pub label: String,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionKey {
    pub label: String,
    pub kind: QuestionKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<OptionKey>,
    /// Activity weight of a non-empty free-text answer.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub activity: u32,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

impl QuestionKey {
    pub fn option(&self, code: &str) -> Option<&OptionKey> {
        self.options.iter().find(|o| o.code == code)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawAnswerKey {
    questions: BTreeMap<String, QuestionKey>,
}

/// Data-driven coding of every keyed question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerKey {
    questions: BTreeMap<QuestionCode, QuestionKey>,
}

impl AnswerKey {
    pub fn question(&self, code: QuestionCode) -> Option<&QuestionKey> {
        self.questions.get(&code)
    }

    pub fn questions(&self) -> impl Iterator<Item = (QuestionCode, &QuestionKey)> {
        self.questions.iter().map(|(c, q)| (*c, q))
    }
}

fn invalid_key(message: String) -> IngestError {
    Issue::new(0, IssueCode::InvalidKey, message).into()
}

pub fn parse_answer_key(text: &str) -> Result<AnswerKey, IngestError> {
    let raw: RawAnswerKey = serde_json::from_str(text).map_err(|e| IngestError::Syntax(e.to_string()))?;
    let mut questions = BTreeMap::new();
    for (code, q) in raw.questions {
        let parsed: QuestionCode = code.parse().map_err(invalid_key)?;
        match q.kind {
            QuestionKind::FreeText if !q.options.is_empty() => {
                return Err(invalid_key(format!("free-text question {code} cannot list options")))
            }
            QuestionKind::Single | QuestionKind::Multi if q.options.is_empty() => {
                return Err(invalid_key(format!("choice question {code} has no options")))
            }
            _ => {}
        }
        let mut seen = BTreeSet::new();
        for o in &q.options {
            if o.code.is_empty() || !seen.insert(o.code.as_str()) {
                return Err(invalid_key(format!(
                    "question {code}: option code {:?} empty or repeated",
                    o.code
                )));
            }
        }
        questions.insert(parsed, q);
    }
    Ok(AnswerKey { questions })
}

pub fn serialize_answer_key(key: &AnswerKey) -> String {
    let raw = RawAnswerKey {
        questions: key.questions.iter().map(|(c, q)| (c.to_string(), q.clone())).collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("answer key serializes");
    out.push('\n');
    out
}

/// A participant's answer to one question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Choice(String),
    Choices(Vec<String>),
    Text(String),
}

impl Answer {
    pub fn is_answered(&self) -> bool {
        match self {
            Answer::Choice(s) | Answer::Text(s) => !s.trim().is_empty(),
            Answer::Choices(v) => !v.is_empty(),
        }
    }

    /// Selected option codes; empty for free text.
    pub fn selected(&self) -> &[String] {
        match self {
            Answer::Choice(s) => std::slice::from_ref(s),
            Answer::Choices(v) => v,
            Answer::Text(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub answer_id: u32,
    pub answers: BTreeMap<QuestionCode, Answer>,
    pub note: Option<String>,
}

impl Participant {
    pub fn answered(&self, code: QuestionCode) -> bool {
        self.answers.get(&code).is_some_and(Answer::is_answered)
    }

    pub fn answered_group(&self, group: QuestionGroup) -> bool {
        group.questions().any(|q| self.answered(q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurveyDataset {
    pub participants: Vec<Participant>,
    /// Answer ids of participants who answered every question group.
    pub completers: BTreeSet<u32>,
}

impl SurveyDataset {
    pub fn participant(&self, answer_id: u32) -> Option<&Participant> {
        self.participants.iter().find(|p| p.answer_id == answer_id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawAnswer {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawParticipant {
    answer_id: u32,
    answers: BTreeMap<String, RawAnswer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn convert_answer(
    pos: usize,
    answer_id: u32,
    code: QuestionCode,
    raw: RawAnswer,
    key: &AnswerKey,
    issues: &mut Vec<Issue>,
) -> Option<Answer> {
    let Some(q) = key.question(code) else {
        return Some(match raw {
            RawAnswer::One(s) => Answer::Text(s),
            RawAnswer::Many(v) => Answer::Choices(v),
        });
    };
    let check = |opt: &str, issues: &mut Vec<Issue>| {
        if q.option(opt).is_none() {
            issues.push(Issue::new(
                pos,
                IssueCode::UnknownOption,
                format!("ID {answer_id}: option {opt:?} not in key for {code}"),
            ));
            false
        } else {
            true
        }
    };
    match (q.kind, raw) {
        (QuestionKind::FreeText, RawAnswer::One(s)) => Some(Answer::Text(s)),
        (QuestionKind::Single, RawAnswer::One(s)) => {
            if s.is_empty() || check(&s, issues) {
                Some(Answer::Choice(s))
            } else {
                None
            }
        }
        (QuestionKind::Multi, RawAnswer::Many(v)) => {
            // Every option is checked so that all unknown codes are reported.
            let unknown = v.iter().filter(|o| !check(o, issues)).count();
            (unknown == 0).then_some(Answer::Choices(v))
        }
        (kind, _) => {
            issues.push(Issue::new(
                pos,
                IssueCode::MalformedRow,
                format!("ID {answer_id}: answer shape does not match {kind:?} question {code}"),
            ));
            None
        }
    }
}

fn check_survey(text: &str, key: &AnswerKey) -> Result<(SurveyDataset, Vec<Issue>), IngestError> {
    let raw: Vec<RawParticipant> = serde_json::from_str(text).map_err(|e| IngestError::Syntax(e.to_string()))?;
    let mut issues = Vec::new();
    let mut seen = BTreeSet::new();
    let mut participants = Vec::with_capacity(raw.len());
    for (i, rp) in raw.into_iter().enumerate() {
        let pos = i + 1;
        if !seen.insert(rp.answer_id) {
            issues.push(Issue::new(
                pos,
                IssueCode::DuplicateAnswerId,
                format!("answer id {} appears twice", rp.answer_id),
            ));
            continue;
        }
        let mut answers = BTreeMap::new();
        for (code, value) in rp.answers {
            let parsed: QuestionCode = match code.parse() {
                Ok(c) => c,
                Err(msg) => {
                    issues.push(Issue::new(
                        pos,
                        IssueCode::UnknownQuestionCode,
                        format!("ID {}: {msg}", rp.answer_id),
                    ));
                    continue;
                }
            };
            if let Some(a) = convert_answer(pos, rp.answer_id, parsed, value, key, &mut issues) {
                answers.insert(parsed, a);
            }
        }
        participants.push(Participant {
            answer_id: rp.answer_id,
            answers,
            note: rp.note,
        });
    }
    let completers = participants
        .iter()
        .filter(|p| QuestionGroup::ALL.into_iter().all(|g| p.answered_group(g)))
        .map(|p| p.answer_id)
        .collect();
    Ok((
        SurveyDataset {
            participants,
            completers,
        },
        issues,
    ))
}

/// Parses `survey.json` against the answer key.
pub fn parse_survey(text: &str, key: &AnswerKey) -> Result<SurveyDataset, IngestError> {
    let (dataset, issues) = check_survey(text, key)?;
    match issues.into_iter().next() {
        Some(first) => Err(first.into()),
        None => Ok(dataset),
    }
}

pub fn validate_survey_text(text: &str, key: &AnswerKey) -> Result<ValidationReport, IngestError> {
    let (_, errors) = check_survey(text, key)?;
    Ok(ValidationReport {
        errors,
        warnings: Vec::new(),
    })
}

pub fn serialize_survey(dataset: &SurveyDataset) -> String {
    let raw: Vec<RawParticipant> = dataset
        .participants
        .iter()
        .map(|p| RawParticipant {
            answer_id: p.answer_id,
            answers: p
                .answers
                .iter()
                .map(|(c, a)| {
                    let v = match a {
                        Answer::Choice(s) | Answer::Text(s) => RawAnswer::One(s.clone()),
                        Answer::Choices(v) => RawAnswer::Many(v.clone()),
                    };
                    (c.to_string(), v)
                })
                .collect(),
            note: p.note.clone(),
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&raw).expect("survey serializes");
    out.push('\n');
    out
}
