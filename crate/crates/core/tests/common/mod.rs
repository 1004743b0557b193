#![allow(dead_code)]

pub mod gen;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use hybridspace::ingest::{
    parse_answer_key, parse_event_ledger_in_window, parse_media_registry, parse_survey, AnswerKey, EventLedger,
    MediaRegistry, SurveyDataset, Window,
};
use hybridspace::model::MediumId;

pub fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(dir: &str, file: &str) -> String {
    let p = fixture_dir(dir).join(file);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn window() -> Window {
    Window::new(
        NaiveDate::from_ymd_opt(2023, 1, 1).unwrap(),
        NaiveDate::from_ymd_opt(2023, 7, 3).unwrap(),
    )
    .unwrap()
}

pub struct Exhibition {
    pub registry: MediaRegistry,
    pub ledger: EventLedger,
    pub key: AnswerKey,
    pub survey: SurveyDataset,
}

pub fn exhibition() -> Exhibition {
    let registry = parse_media_registry(&read_fixture("exhibition", "media.csv")).unwrap();
    let ledger = parse_event_ledger_in_window(&read_fixture("exhibition", "events.csv"), &registry, window()).unwrap();
    let key = parse_answer_key(&read_fixture("exhibition", "answer_key.json")).unwrap();
    let survey = parse_survey(&read_fixture("exhibition", "survey.json"), &key).unwrap();
    Exhibition {
        registry,
        ledger,
        key,
        survey,
    }
}

pub fn survey_registry() -> MediaRegistry {
    parse_media_registry(&read_fixture("online-survey", "media.csv")).unwrap()
}

pub fn id(s: &str) -> MediumId {
    MediumId::new(s)
}

/// Runs the binary; returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_hybridspace"))
        .args(args)
        .env_remove("HYBRIDSPACE_PROJECT")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Copies a fixture directory into `dest` so tests can mutate it.
pub fn copy_fixture(name: &str, dest: &Path) {
    for entry in fs::read_dir(fixture_dir(name)).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            fs::copy(entry.path(), dest.join(entry.file_name())).unwrap();
        }
    }
}

/// Headcount per real place straight from the CSV text.
pub fn csv_place_fold(text: &str) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for row in reader.records() {
        let row = row.unwrap();
        if row[2].is_empty() {
            continue;
        }
        let count = if !row[5].is_empty() { &row[5] } else { &row[7] };
        *out.entry(row[2].to_string()).or_insert(0) += count.parse::<u64>().unwrap();
    }
    out
}
