use std::collections::BTreeMap;

use crate::ingest::{Answer, AnswerKey, QuestionCode, QuestionGroup, QuestionKind, SurveyDataset, Tag};
use crate::metrics::CompletionStats;
use crate::model::MediaType;

/// `answered + unanswered` equals the participant count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupTally {
    pub group: QuestionGroup,
    pub answered: u64,
    pub unanswered: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionTally {
    pub question: QuestionCode,
    pub option: String,
    pub label: String,
    pub tag: Tag,
    /// Participants who selected the option.
    pub count: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnderstandingTally {
    pub modern: u64,
    pub traditional: u64,
    pub low: u64,
}

impl UnderstandingTally {
    pub fn total(&self) -> u64 {
        self.modern + self.traditional + self.low
    }

    fn add(&mut self, other: UnderstandingTally) {
        self.modern += other.modern;
        self.traditional += other.traditional;
        self.low += other.low;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantScore {
    pub answer_id: u32,
    pub completer: bool,
    /// Tags of the C-group answers.
    pub understanding: UnderstandingTally,
    pub answered_d: bool,
    /// At most 3.
    pub d_correct: u32,
    pub answered_e: bool,
    /// At most 3.
    pub e_correct: u32,
    pub answered_f: bool,
    /// Weighted individual activity over F1..F5.
    pub activity: u32,
    /// Media selected in F3.
    pub media_use: u32,
    /// F3 selections per media type.
    pub media_by_type: BTreeMap<MediaType, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyReport {
    pub participants: Vec<ParticipantScore>,
    pub groups: Vec<GroupTally>,
    /// Every option of every choice question in key order.
    pub options: Vec<OptionTally>,
    /// Participants choosing a `correct` option, per keyed question that has one.
    pub correct_by_question: BTreeMap<QuestionCode, u64>,
    pub understanding: UnderstandingTally,
    pub completion: CompletionStats,
}

impl SurveyReport {
    pub fn participant_count(&self) -> u64 {
        self.participants.len() as u64
    }

    pub fn participant(&self, answer_id: u32) -> Option<&ParticipantScore> {
        self.participants.iter().find(|p| p.answer_id == answer_id)
    }

    pub fn group(&self, group: QuestionGroup) -> GroupTally {
        self.groups[group as usize]
    }

    pub fn option(&self, question: &str, option: &str) -> Option<&OptionTally> {
        let q: QuestionCode = question.parse().ok()?;
        self.options.iter().find(|o| o.question == q && o.option == option)
    }
}

fn selected_tags<'k>(key: &'k AnswerKey, code: QuestionCode, answer: &Answer) -> Vec<&'k Tag> {
    let Some(q) = key.question(code) else {
        return Vec::new();
    };
    answer
        .selected()
        .iter()
        .filter_map(|o| q.option(o).map(|opt| &opt.tag))
        .collect()
}

fn count_correct(key: &AnswerKey, p: &crate::ingest::Participant, group: QuestionGroup) -> u32 {
    group
        .questions()
        .filter(|c| {
            p.answers
                .get(c)
                .is_some_and(|a| selected_tags(key, *c, a).contains(&&Tag::Correct))
        })
        .count() as u32
}

/// Missing answers count as unanswered.
pub fn score_survey(dataset: &SurveyDataset, key: &AnswerKey) -> SurveyReport {
    let n = dataset.participants.len() as u64;
    let groups = QuestionGroup::ALL
        .into_iter()
        .map(|g| {
            let answered = dataset.participants.iter().filter(|p| p.answered_group(g)).count() as u64;
            GroupTally {
                group: g,
                answered,
                unanswered: n - answered,
            }
        })
        .collect();

    let mut options = Vec::new();
    let mut correct_by_question = BTreeMap::new();
    for (code, q) in key.questions() {
        if q.kind == QuestionKind::FreeText {
            continue;
        }
        let mut correct = None;
        for opt in &q.options {
            let count = dataset
                .participants
                .iter()
                .filter(|p| p.answers.get(&code).is_some_and(|a| a.selected().contains(&opt.code)))
                .count() as u64;
            if opt.tag == Tag::Correct {
                *correct.get_or_insert(0) += count;
            }
            options.push(OptionTally {
                question: code,
                option: opt.code.clone(),
                label: opt.label.clone(),
                tag: opt.tag.clone(),
                count,
            });
        }
        if let Some(c) = correct {
            correct_by_question.insert(code, c);
        }
    }

    let mut understanding = UnderstandingTally::default();
    let mut participants = Vec::with_capacity(dataset.participants.len());
    for p in &dataset.participants {
        let mut u = UnderstandingTally::default();
        for c in QuestionGroup::C.questions() {
            if let Some(a) = p.answers.get(&c) {
                for tag in selected_tags(key, c, a) {
                    match tag {
                        Tag::Modern => u.modern += 1,
                        Tag::Traditional => u.traditional += 1,
                        Tag::Low => u.low += 1,
                        _ => {}
                    }
                }
            }
        }
        understanding.add(u);

        let mut activity = 0;
        let mut media_use = 0;
        let mut media_by_type = BTreeMap::new();
        for c in QuestionGroup::F.questions() {
            let Some(a) = p.answers.get(&c).filter(|a| a.is_answered()) else {
                continue;
            };
            if let (Answer::Text(_), Some(q)) = (a, key.question(c)) {
                activity += q.activity;
            }
            for tag in selected_tags(key, c, a) {
                activity += tag.activity_weight();
                if let Tag::Media { media_type, .. } = tag {
                    media_use += 1;
                    *media_by_type.entry(*media_type).or_insert(0) += 1;
                }
            }
        }

        participants.push(ParticipantScore {
            answer_id: p.answer_id,
            completer: dataset.completers.contains(&p.answer_id),
            understanding: u,
            answered_d: p.answered_group(QuestionGroup::D),
            d_correct: count_correct(key, p, QuestionGroup::D),
            answered_e: p.answered_group(QuestionGroup::E),
            e_correct: count_correct(key, p, QuestionGroup::E),
            answered_f: p.answered_group(QuestionGroup::F),
            activity,
            media_use,
            media_by_type,
        });
    }

    let completion =
        CompletionStats::new(dataset.completers.len() as u64, n).expect("completers are a subset of participants");
    SurveyReport {
        participants,
        groups,
        options,
        correct_by_question,
        understanding,
        completion,
    }
}
