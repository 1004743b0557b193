//! Text-file ingestion: media registry and event ledger (CSV), survey
//! responses and answer key (JSON).
//!
//! Every row-level rule lives in one checker per format. The strict parsers
//! stop at the first issue the checker reports; the validators collect all of
//! them. Both paths share the checker, so they accept and reject the same
//! inputs.

mod ledger;
mod registry;
mod survey;

use std::fmt;

use thiserror::Error;

pub use ledger::{
    parse_event_ledger, parse_event_ledger_in_window, serialize_event_ledger, validate_events_text, validate_ledger,
    EventLedger, EventRecord, Window, EVENTS_HEADER,
};
pub use registry::{
    parse_media_registry, serialize_media_registry, validate_registry_text, MediaRegistry, MEDIA_HEADER,
};
pub use survey::{
    parse_answer_key, parse_survey, serialize_answer_key, serialize_survey, validate_survey_text, Answer, AnswerKey,
    OptionKey, Participant, QuestionCode, QuestionGroup, QuestionKey, QuestionKind, SurveyDataset, Tag,
};

/// Machine-readable issue codes shared by parse errors and validation reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueCode {
    MalformedRow,
    DuplicateId,
    PrefixMismatch,
    EmptyRegistry,
    UnknownMedium,
    NegativeCount,
    BadDate,
    CoordinateOutOfRange,
    WindowViolation,
    InvalidWindow,
    EmptyPlaceName,
    DuplicateAnswerId,
    UnknownQuestionCode,
    UnknownOption,
    InvalidKey,
    /// Warning: registry medium without any ledger record.
    NoRecords,
    /// Warning: medium has records but none carries a reach count.
    NoReach,
    /// Warning: medium has records but none carries an interaction count.
    NoInteractions,
}

impl IssueCode {
    pub fn name(self) -> &'static str {
        match self {
            IssueCode::MalformedRow => "MalformedRow",
            IssueCode::DuplicateId => "DuplicateId",
            IssueCode::PrefixMismatch => "PrefixMismatch",
            IssueCode::EmptyRegistry => "EmptyRegistry",
            IssueCode::UnknownMedium => "UnknownMedium",
            IssueCode::NegativeCount => "NegativeCount",
            IssueCode::BadDate => "BadDate",
            IssueCode::CoordinateOutOfRange => "CoordinateOutOfRange",
            IssueCode::WindowViolation => "WindowViolation",
            IssueCode::InvalidWindow => "InvalidWindow",
            IssueCode::EmptyPlaceName => "EmptyPlaceName",
            IssueCode::DuplicateAnswerId => "DuplicateAnswerId",
            IssueCode::UnknownQuestionCode => "UnknownQuestionCode",
            IssueCode::UnknownOption => "UnknownOption",
            IssueCode::InvalidKey => "InvalidKey",
            IssueCode::NoRecords => "NoRecords",
            IssueCode::NoReach => "NoReach",
            IssueCode::NoInteractions => "NoInteractions",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One finding. For CSV input `line` is the physical line (header = 1);
/// for JSON input it is the 1-based position of the offending record.
/// Zero marks a file-level finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub line: usize,
    pub code: IssueCode,
    pub message: String,
}

impl Issue {
    pub fn new(line: usize, code: IssueCode, message: impl Into<String>) -> Self {
        Issue {
            line,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            return write!(f, "{}: {}", self.code, self.message);
        }
        write!(f, "line {}: {}: {}", self.line, self.code, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    /// A content rule was violated. Maps to "data invalid".
    #[error("{0}")]
    Invalid(Issue),
    /// The file could not be read as the expected format at all
    /// (bad header, broken CSV quoting, JSON syntax).
    #[error("syntax error: {0}")]
    Syntax(String),
}

impl IngestError {
    pub fn code(&self) -> Option<IssueCode> {
        match self {
            IngestError::Invalid(issue) => Some(issue.code),
            IngestError::Syntax(_) => None,
        }
    }
}

impl From<Issue> for IngestError {
    fn from(issue: Issue) -> Self {
        IngestError::Invalid(issue)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        write!(f, "{} error(s), {} warning(s)", self.errors.len(), self.warnings.len())
    }
}

pub(crate) fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new())
}

pub(crate) fn finish_csv(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("in-memory writer cannot fail");
    String::from_utf8(bytes).expect("csv writer emits the UTF-8 it was given")
}

/// Reads the header row and checks it exactly matches `expected`.
pub(crate) fn check_header(reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<(), IngestError> {
    let headers = reader.headers().map_err(|e| IngestError::Syntax(e.to_string()))?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(IngestError::Syntax(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

pub(crate) fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes())
}
