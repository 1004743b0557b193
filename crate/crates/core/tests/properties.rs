mod common;

use std::collections::BTreeMap;

use chrono::Days;
use num_rational::Ratio;
use proptest::prelude::*;

use common::gen::{arb_registry, arb_space, registry_from, start};
use hybridspace::analysis::{
    compare_spaces, rank_media, score_survey, topology_series, type_share, MetricKey, Segment,
};
use hybridspace::ingest::{
    parse_answer_key, parse_event_ledger, parse_event_ledger_in_window, parse_survey, serialize_event_ledger,
    validate_events_text, EventRecord, IngestError, QuestionGroup, QuestionKind,
};
use hybridspace::metrics::{
    interactions, metrics_table, modality, net_range, place_density, response_rate, MetricsRow, MetricsTable,
};
use hybridspace::model::{colors, MediaType, Place};
use hybridspace::render::{bubble_radius, render_ranking, ChartSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn modality_shares_sum_to_one(reg in arb_registry()) {
        let mix = modality(&reg).unwrap();
        let total: Ratio<u64> = mix.shares().iter().map(|(_, s)| *s).sum();
        prop_assert_eq!(total, Ratio::from_integer(1));
        for t in MediaType::ALL {
            let n = reg.media().iter().filter(|m| m.media_type == t).count() as u64;
            prop_assert_eq!(mix.share(t), Ratio::new(n, reg.len() as u64));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ranking_is_a_sorted_permutation((reg, ledger) in arb_space(), key in 0usize..3) {
        let key = [MetricKey::Range, MetricKey::Interactions, MetricKey::ResponseRate][key];
        let table = metrics_table(&ledger, &reg).unwrap();
        let ranking = rank_media(&table, key, &reg);
        let mut ids: Vec<&str> = ranking.ids();
        ids.sort();
        let mut expected: Vec<&str> = reg.media().iter().map(|m| m.id.as_str()).collect();
        expected.sort();
        prop_assert_eq!(ids, expected);
        prop_assert!(ranking.entries.windows(2).all(|w| w[0].value >= w[1].value));
        prop_assert!(ranking.entries.iter().all(|e| e.value.is_some()));
        prop_assert!(ranking.unranked.iter().all(|e| e.value.is_none()));
    }

    #[test]
    fn ranking_ignores_positive_scaling((reg, ledger) in arb_space(), k in 1u64..1000) {
        let table = metrics_table(&ledger, &reg).unwrap();
        let scaled = MetricsTable {
            rows: table
                .rows
                .iter()
                .map(|r| MetricsRow {
                    medium_id: r.medium_id.clone(),
                    range: r.range.map(|v| v * k),
                    interactions: r.interactions.map(|v| v * k),
                    response_rate: r.response_rate.map(|v| v * Ratio::from_integer(k)),
                })
                .collect(),
        };
        for key in [MetricKey::Range, MetricKey::Interactions, MetricKey::ResponseRate] {
            let (a, b) = (rank_media(&table, key, &reg), rank_media(&scaled, key, &reg));
            prop_assert_eq!(a.ids(), b.ids());
        }
    }

    #[test]
    fn segments_recombine_to_full_distribution((reg, ledger) in arb_space(), split in 0usize..64) {
        let table = metrics_table(&ledger, &reg).unwrap();
        let ranking = rank_media(&table, MetricKey::Range, &reg);
        let len = ranking.len();
        let n = split % (len + 1);
        let mix = modality(&reg).unwrap();
        for t in MediaType::ALL {
            let top = if n == 0 { 0 } else { type_share(&ranking, Segment::TopN(n)).unwrap().count(t) };
            let bottom = if n == len { 0 } else { type_share(&ranking, Segment::BottomM(len - n)).unwrap().count(t) };
            prop_assert_eq!(top + bottom, mix.count(t));
        }
    }

    #[test]
    fn topology_conserves_totals((reg, ledger) in arb_space()) {
        let table = metrics_table(&ledger, &reg).unwrap();
        for key in [MetricKey::Range, MetricKey::Interactions] {
            let series = topology_series(&ledger, &reg, key).unwrap();
            prop_assert!(series.points.iter().all(|p| p.day_index < series.window.days()));
            for row in &table.rows {
                let pts: Vec<_> = series.points_for(&row.medium_id).collect();
                let mut days: Vec<u32> = pts.iter().map(|p| p.day_index).collect();
                days.dedup();
                prop_assert_eq!(days.len(), pts.len());
                let total: Option<Ratio<u64>> = pts.iter().map(|p| p.value).reduce(|a, b| a + b);
                let expected = match key {
                    MetricKey::Range => row.range,
                    _ => row.interactions,
                };
                prop_assert_eq!(total, expected.map(Ratio::from_integer));
            }
        }
    }

    #[test]
    fn response_rate_times_range_is_interactions(m in 0u64..1_000_000, r in 1u64..1_000_000) {
        let rate = response_rate(m, r).unwrap();
        prop_assert_eq!(rate * Ratio::from_integer(r), Ratio::from_integer(m));
    }

    #[test]
    fn adding_reach_never_lowers_range((reg, ledger) in arb_space(), pick in 0usize..64, n in 1u64..500, day in 0u64..184) {
        let target = reg.media()[pick % reg.len()].id.clone();
        let before = net_range(&ledger, &reg, &target).unwrap().unwrap_or(0);
        let mut grown = ledger.clone();
        grown.records.push(EventRecord {
            date: start() + Days::new(day),
            medium_id: target.clone(),
            place: Place::Virtual,
            persons_reached: Some(n),
            reach_unit: "persons".into(),
            interactions: None,
            interaction_unit: String::new(),
        });
        let after = net_range(&grown, &reg, &target).unwrap().unwrap();
        prop_assert!(after >= before);
        prop_assert_eq!(after, before + n);
    }

    #[test]
    fn metrics_table_has_one_row_per_medium((reg, ledger) in arb_space()) {
        let table = metrics_table(&ledger, &reg).unwrap();
        prop_assert_eq!(table.rows.len(), reg.len());
        for (row, m) in table.rows.iter().zip(reg.media()) {
            prop_assert_eq!(&row.medium_id, &m.id);
            let expect_rate = matches!((row.range, row.interactions), (Some(r), Some(_)) if r > 0);
            prop_assert_eq!(row.response_rate.is_some(), expect_rate);
        }
    }

    #[test]
    fn density_contributions_sum_to_persons((_reg, ledger) in arb_space()) {
        for d in place_density(&ledger) {
            prop_assert_eq!(d.by_medium.iter().map(|(_, n)| n).sum::<u64>(), d.persons);
        }
    }

    #[test]
    fn ledger_round_trips((reg, ledger) in arb_space()) {
        let text = serialize_event_ledger(&ledger);
        let back = parse_event_ledger_in_window(&text, &reg, common::window()).unwrap();
        prop_assert_eq!(&back, &ledger);
        prop_assert_eq!(serialize_event_ledger(&back), text);
    }

    #[test]
    fn comparing_a_space_with_itself_is_zero(reg in arb_registry()) {
        let c = compare_spaces((&reg, "a"), (&reg, "b")).unwrap();
        prop_assert!(c.rows.iter().all(|r| r.delta == Ratio::from_integer(0)));
        prop_assert_eq!(c.l1_distance(), Ratio::from_integer(0));
    }

    #[test]
    fn bubble_area_is_monotone(a in 0.001f64..1e7, b in 0.001f64..1e7) {
        prop_assume!(a < b);
        let max = 1e7;
        prop_assert!(bubble_radius(a, max, 18.0) < bubble_radius(b, max, 18.0));
    }

    #[test]
    fn ranking_chart_uses_only_palette_colors((reg, ledger) in arb_space()) {
        let table = metrics_table(&ledger, &reg).unwrap();
        let ranking = rank_media(&table, MetricKey::Range, &reg);
        let svg = render_ranking(&ranking, &reg, &ChartSpec::ranking_bars()).unwrap().to_svg_string();
        let allowed = [colors::GREEN, colors::RED, colors::ORANGE, colors::PURPLE, colors::NEUTRAL_GREY];
        for attr in ["fill=\"", "stroke=\""] {
            for chunk in svg.split(attr).skip(1) {
                let color = &chunk[..chunk.find('"').unwrap()];
                prop_assert!(allowed.contains(&color), "unexpected color {}", color);
            }
        }
    }
}

/// One CSV cell per field; each field may be valid or broken.
fn arb_event_rows() -> impl Strategy<Value = Vec<[String; 9]>> {
    let date = prop_oneof![
        Just("2023-03-01".to_string()),
        Just("2023-07-03".to_string()),
        Just("2023-07-04".to_string()),
        Just("2022-12-31".to_string()),
        Just("2023-02-30".to_string()),
        Just("03/01/2023".to_string()),
    ];
    let medium = prop_oneof![Just("P_0"), Just("Q_1"), Just("S_2"), Just("X_9"), Just("")].prop_map(String::from);
    let place = prop_oneof![
        Just(("".to_string(), "".to_string(), "".to_string())),
        Just(("Herrsching".to_string(), "47.99".to_string(), "11.17".to_string())),
        Just(("Herrsching".to_string(), "".to_string(), "".to_string())),
        Just(("Nowhere".to_string(), "95.5".to_string(), "11".to_string())),
        Just(("Halfway".to_string(), "47.99".to_string(), "".to_string())),
        Just(("".to_string(), "47.99".to_string(), "11.17".to_string())),
        Just(("Odd".to_string(), "north".to_string(), "11".to_string())),
    ];
    let count = prop_oneof![
        Just(String::new()),
        Just("0".to_string()),
        Just("12".to_string()),
        Just("-3".to_string()),
        Just("1.5".to_string()),
        Just("many".to_string()),
    ];
    prop::collection::vec((date, medium, place, count.clone(), count), 0..8).prop_map(|rows| {
        rows.into_iter()
            .map(|(d, m, (p, lat, lon), r, i)| {
                let ru = if r.is_empty() {
                    String::new()
                } else {
                    "persons".to_string()
                };
                let iu = if i.is_empty() {
                    String::new()
                } else {
                    "likes".to_string()
                };
                [d, m, p, lat, lon, r, ru, i, iu]
            })
            .collect()
    })
}

fn events_csv(rows: &[[String; 9]]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "date",
        "medium_id",
        "place",
        "lat",
        "lon",
        "persons_reached",
        "reach_unit",
        "interactions",
        "interaction_unit",
    ])
    .unwrap();
    for r in rows {
        w.write_record(r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parser_rejects_exactly_what_validator_flags(rows in arb_event_rows(), windowed in any::<bool>()) {
        let reg = registry_from(&[0, 3, 1]);
        let text = events_csv(&rows);
        let window = windowed.then(common::window);
        let report = validate_events_text(&text, &reg, window).unwrap();
        let parsed = match window {
            Some(w) => parse_event_ledger_in_window(&text, &reg, w),
            None => parse_event_ledger(&text, &reg),
        };
        match parsed {
            Ok(ledger) => {
                prop_assert!(report.errors.is_empty(), "{:?}", report.errors);
                prop_assert_eq!(ledger.records.len(), rows.len());
            }
            Err(IngestError::Invalid(issue)) => prop_assert_eq!(report.errors.first(), Some(&issue)),
            Err(e) => prop_assert!(false, "unexpected syntax error {e}"),
        }
    }
}

fn arb_survey_json(key: &hybridspace::ingest::AnswerKey) -> impl Strategy<Value = String> {
    let questions: Vec<(String, QuestionKind, Vec<String>)> = key
        .questions()
        .map(|(c, q)| {
            (
                c.to_string(),
                q.kind,
                q.options.iter().map(|o| o.code.clone()).collect(),
            )
        })
        .collect();
    let nq = questions.len();
    prop::collection::vec(
        prop::collection::vec((any::<bool>(), any::<prop::sample::Index>(), any::<u8>()), nq),
        0..20,
    )
    .prop_map(move |people| {
        let list: Vec<serde_json::Value> = people
            .iter()
            .enumerate()
            .map(|(i, picks)| {
                let mut answers = BTreeMap::new();
                for ((code, kind, opts), (answer, idx, mask)) in questions.iter().zip(picks) {
                    if !answer {
                        continue;
                    }
                    let v = match kind {
                        QuestionKind::FreeText => serde_json::json!(if mask % 3 == 0 { " " } else { "A note." }),
                        QuestionKind::Single => serde_json::json!(opts[idx.index(opts.len())]),
                        QuestionKind::Multi => {
                            let chosen: Vec<&String> = opts
                                .iter()
                                .enumerate()
                                .filter(|(j, _)| mask >> (j % 8) & 1 == 1)
                                .map(|(_, o)| o)
                                .collect();
                            serde_json::json!(chosen)
                        }
                    };
                    answers.insert(code.clone(), v);
                }
                serde_json::json!({"answer_id": i + 1, "answers": answers})
            })
            .collect();
        serde_json::to_string(&list).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn answered_plus_unanswered_is_participants(text in arb_survey_json(&exhibition_key())) {
        let key = exhibition_key();
        let dataset = parse_survey(&text, &key).unwrap();
        let report = score_survey(&dataset, &key);
        for g in QuestionGroup::ALL {
            let t = report.group(g);
            prop_assert_eq!(t.answered + t.unanswered, report.participant_count());
        }
        for p in &report.participants {
            prop_assert!(p.d_correct <= 3 && p.e_correct <= 3);
            prop_assert_eq!(p.completer, QuestionGroup::ALL.iter().all(|&g| dataset.participant(p.answer_id).unwrap().answered_group(g)));
        }
        prop_assert!(report.completion.completers <= report.completion.participants);
    }
}

fn exhibition_key() -> hybridspace::ingest::AnswerKey {
    parse_answer_key(&common::read_fixture("exhibition", "answer_key.json")).unwrap()
}

#[test]
fn interactions_fold_agrees_on_exhibition_fixture() {
    let p = common::exhibition();
    for m in p.registry.media() {
        let direct = interactions(&p.ledger, &p.registry, &m.id).unwrap();
        let table = metrics_table(&p.ledger, &p.registry).unwrap();
        assert_eq!(table.row(&m.id).unwrap().interactions, direct);
    }
}
