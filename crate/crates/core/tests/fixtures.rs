mod common;

use common::{exhibition, fixture_dir, id, read_fixture, survey_registry};
use hybridspace::cli::ProjectConfig;
use hybridspace::ingest::{
    parse_answer_key, parse_event_ledger, parse_media_registry, parse_survey, serialize_answer_key,
    serialize_event_ledger, serialize_media_registry, serialize_survey, validate_events_text, validate_registry_text,
    validate_survey_text, IssueCode, QuestionGroup,
};
use hybridspace::model::{media_type_of_id, MediaType, PopperMapping};

#[test]
fn registry_round_trips() {
    for dir in ["exhibition", "online-survey"] {
        let text = read_fixture(dir, "media.csv");
        let reg = parse_media_registry(&text).unwrap();
        assert_eq!(serialize_media_registry(&reg), text, "{dir}");
    }
}

#[test]
fn ledger_round_trips() {
    let p = exhibition();
    assert_eq!(
        serialize_event_ledger(&p.ledger),
        read_fixture("exhibition", "events.csv")
    );
}

#[test]
fn survey_and_key_round_trip() {
    let key_text = read_fixture("exhibition", "answer_key.json");
    let key = parse_answer_key(&key_text).unwrap();
    assert_eq!(serialize_answer_key(&key), key_text);
    let text = read_fixture("exhibition", "survey.json");
    assert_eq!(serialize_survey(&parse_survey(&text, &key).unwrap()), text);
}

#[test]
fn popper_file_matches_default_mapping() {
    let m = PopperMapping::parse(&read_fixture("exhibition", "popper.csv")).unwrap();
    assert_eq!(m, PopperMapping::default());
}

#[test]
fn prefix_agrees_with_every_registry_entry() {
    for reg in [exhibition().registry, survey_registry()] {
        for m in reg.media() {
            assert_eq!(media_type_of_id(m.id.as_str()).unwrap(), m.media_type);
        }
    }
}

#[test]
fn registry_sizes() {
    let p = exhibition();
    assert_eq!(p.registry.len(), 19);
    let s = survey_registry();
    assert_eq!(s.len(), 21);
    let q = s
        .media()
        .iter()
        .filter(|m| m.media_type == MediaType::Quaternary)
        .count();
    assert_eq!(q, 9);
}

#[test]
fn fixtures_validate_with_only_coverage_warnings() {
    let p = exhibition();
    let reg_report = validate_registry_text(&read_fixture("exhibition", "media.csv")).unwrap();
    assert!(reg_report.is_accepted() && reg_report.warnings.is_empty());

    let r = validate_events_text(
        &read_fixture("exhibition", "events.csv"),
        &p.registry,
        Some(common::window()),
    )
    .unwrap();
    assert!(r.errors.is_empty(), "{:?}", r.errors);
    let mut warned: Vec<(IssueCode, String)> = r
        .warnings
        .iter()
        .map(|w| (w.code, w.message.split_whitespace().next().unwrap().to_string()))
        .collect();
    warned.sort();
    assert_eq!(
        warned,
        vec![
            (IssueCode::NoReach, "P_P".to_string()),
            (IssueCode::NoInteractions, "Q_M".to_string()),
            (IssueCode::NoInteractions, "S_Z".to_string()),
        ]
    );

    let s = validate_survey_text(&read_fixture("exhibition", "survey.json"), &p.key).unwrap();
    assert!(s.errors.is_empty(), "{:?}", s.errors);
}

#[test]
fn every_record_lies_in_the_window() {
    let p = exhibition();
    let w = common::window();
    assert_eq!(w.days(), 184);
    assert!(p.ledger.records.iter().all(|r| w.contains(r.date)));
}

#[test]
fn invitation_cards_are_mailed_on_one_day() {
    let p = exhibition();
    let mut days: Vec<_> = p
        .ledger
        .records_for(&id("S_I"))
        .filter(|r| r.persons_reached.is_some())
        .map(|r| r.date)
        .collect();
    days.dedup();
    assert_eq!(days.len(), 1);
}

#[test]
fn fixture_lists_39_real_places() {
    let text = read_fixture("exhibition", "events.csv");
    let reg = parse_media_registry(&read_fixture("exhibition", "media.csv")).unwrap();
    let ledger = parse_event_ledger(&text, &reg).unwrap();
    let mut names: Vec<&str> = ledger.records.iter().filter_map(|r| r.place.name()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 39);
    assert!(ledger
        .records
        .iter()
        .all(|r| r.place.is_virtual() || r.place.coords().is_some()));
}

#[test]
fn survey_has_fourteen_participants_and_three_completers() {
    let p = exhibition();
    assert_eq!(p.survey.participants.len(), 14);
    assert_eq!(p.survey.completers.iter().copied().collect::<Vec<_>>(), vec![3, 7, 15]);
    let answered_f = p
        .survey
        .participants
        .iter()
        .filter(|q| q.answered_group(QuestionGroup::F))
        .count();
    assert_eq!(answered_f, 3);
}

#[test]
fn project_configs_load() {
    let c = ProjectConfig::load(&fixture_dir("exhibition")).unwrap();
    assert_eq!(c.label, "media-analysis");
    assert!(c.events.is_some() && c.survey.is_some() && c.answer_key.is_some());
    assert_eq!(c.survey_medium.as_ref().map(|m| m.as_str()), Some("Q_S"));
    let s = ProjectConfig::load(&fixture_dir("online-survey")).unwrap();
    assert_eq!(s.label, "online-survey");
    assert!(s.events.is_none());
}
