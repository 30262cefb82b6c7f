//! Shared domain types: dataset problems, generated questions, pipeline
//! results, and token accounting.
//!
//! Dataset records are line-delimited JSON objects with fixed, case-sensitive
//! field names: `id`, `category`, `subtype`, `text`, and optional `image`,
//! `answer`, `choices`. Unknown extra fields are ignored.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::geom::ValidationReport;
use crate::orchestrator::AgentMessage;

/// Top-level problem family. Each category owns its legal subtypes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Geometry2D,
    Function,
}

impl Category {
    pub const ALL: [Category; 2] = [Category::Geometry2D, Category::Function];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Geometry2D => "Geometry2D",
            Category::Function => "Function",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        Category::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Problem subtype. `Applied` exists in both taxonomies and is
/// disambiguated by the category field, never by name alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subtype {
    Angle,
    Length,
    Area,
    Applied,
    Analytic,
    Property,
    Expression,
    Coordinate,
}

impl Subtype {
    pub const ALL: [Subtype; 8] = [
        Subtype::Angle,
        Subtype::Length,
        Subtype::Area,
        Subtype::Applied,
        Subtype::Analytic,
        Subtype::Property,
        Subtype::Expression,
        Subtype::Coordinate,
    ];

    /// Subtypes legal under a category, in taxonomy order.
    pub fn legal_for(category: Category) -> &'static [Subtype] {
        match category {
            Category::Geometry2D => &[
                Subtype::Angle,
                Subtype::Length,
                Subtype::Area,
                Subtype::Applied,
                Subtype::Analytic,
            ],
            Category::Function => &[
                Subtype::Property,
                Subtype::Expression,
                Subtype::Coordinate,
                Subtype::Applied,
            ],
        }
    }

    pub fn is_legal_for(&self, category: Category) -> bool {
        Subtype::legal_for(category).contains(self)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Subtype::Angle => "Angle",
            Subtype::Length => "Length",
            Subtype::Area => "Area",
            Subtype::Applied => "Applied",
            Subtype::Analytic => "Analytic",
            Subtype::Property => "Property",
            Subtype::Expression => "Expression",
            Subtype::Coordinate => "Coordinate",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        Subtype::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One dataset record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    pub text: String,
    pub category: Category,
    pub subtype: Subtype,
    /// Reference to the problem's original figure file, if any. Paths are
    /// resolved relative to the dataset file's directory.
    pub original_figure: Option<String>,
    pub gold_answer: Option<String>,
    pub choices: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("subtype `{subtype}` is not legal for category `{category}`")]
    IllegalSubtype { category: Category, subtype: Subtype },
}

/// On-disk shape of a dataset record. Field names are part of the format.
#[derive(Serialize, Deserialize)]
struct RawRecord {
    id: String,
    category: String,
    subtype: String,
    text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    answer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    choices: Option<Vec<String>>,
}

/// Parses one dataset record line into a [`Problem`].
pub fn parse_problem_record(raw: &str) -> Result<Problem, RecordError> {
    let rec: RawRecord =
        serde_json::from_str(raw).map_err(|e| RecordError::MalformedRecord(e.to_string()))?;
    let category = Category::from_str(&rec.category)
        .ok_or_else(|| RecordError::MalformedRecord(format!("unknown category `{}`", rec.category)))?;
    let subtype = Subtype::from_str(&rec.subtype)
        .ok_or_else(|| RecordError::MalformedRecord(format!("unknown subtype `{}`", rec.subtype)))?;
    if !subtype.is_legal_for(category) {
        return Err(RecordError::IllegalSubtype { category, subtype });
    }
    if rec.text.is_empty() {
        return Err(RecordError::MalformedRecord("empty problem text".into()));
    }
    Ok(Problem {
        id: rec.id,
        text: rec.text,
        category,
        subtype,
        original_figure: rec.image,
        gold_answer: rec.answer,
        choices: rec.choices,
    })
}

/// Serializes a [`Problem`] back to its single-line record form.
pub fn serialize_problem_record(problem: &Problem) -> String {
    let rec = RawRecord {
        id: problem.id.clone(),
        category: problem.category.as_str().to_string(),
        subtype: problem.subtype.as_str().to_string(),
        text: problem.text.clone(),
        image: problem.original_figure.clone(),
        answer: problem.gold_answer.clone(),
        choices: problem.choices.clone(),
    };
    serde_json::to_string(&rec).expect("record serialization cannot fail")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuestionKind {
    MultipleChoice,
    FreeForm,
}

/// A question produced by the question-generator stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedQuestion {
    pub kind: QuestionKind,
    pub stem: String,
    /// Empty iff `kind` is `FreeForm`.
    pub choices: Vec<String>,
    pub answer: String,
}

#[derive(Debug, Error)]
pub enum QuestionError {
    #[error("multiple-choice question needs at least 2 choices, got {0}")]
    TooFewChoices(usize),
    #[error("answer `{0}` does not match exactly one choice")]
    AnswerNotAChoice(String),
}

impl GeneratedQuestion {
    pub fn multiple_choice(
        stem: String,
        choices: Vec<String>,
        answer: String,
    ) -> Result<Self, QuestionError> {
        if choices.len() < 2 {
            return Err(QuestionError::TooFewChoices(choices.len()));
        }
        if choices.iter().filter(|c| **c == answer).count() != 1 {
            return Err(QuestionError::AnswerNotAChoice(answer));
        }
        Ok(GeneratedQuestion {
            kind: QuestionKind::MultipleChoice,
            stem,
            choices,
            answer,
        })
    }

    pub fn free_form(stem: String, answer: String) -> Self {
        GeneratedQuestion {
            kind: QuestionKind::FreeForm,
            stem,
            choices: Vec::new(),
            answer,
        }
    }
}

/// Token and wall-time accounting. Totals are sums over calls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub input_tokens: u64,
    pub output_tokens: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl TokenUsage {
    pub fn new(input_tokens: u64, output_tokens: u64, wall_time: f64) -> Self {
        TokenUsage {
            input_tokens,
            output_tokens,
            wall_time,
        }
    }

    pub fn accumulate(&mut self, other: TokenUsage) {
        self.input_tokens += other.input_tokens;
        self.output_tokens += other.output_tokens;
        self.wall_time += other.wall_time;
    }
}

impl std::ops::Add for TokenUsage {
    type Output = TokenUsage;
    fn add(mut self, other: TokenUsage) -> TokenUsage {
        self.accumulate(other);
        self
    }
}

/// Terminal status of one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunStatus {
    Completed,
    FailedValidation,
    FailedExecution,
    Aborted,
}

/// Everything one pipeline run produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub problem_id: String,
    pub transcript: Vec<AgentMessage>,
    /// File name of the produced figure, relative to the run directory.
    pub figure: Option<String>,
    pub figure_code: Option<String>,
    pub questions: Vec<GeneratedQuestion>,
    pub summary: String,
    pub validation_reports: Vec<ValidationReport>,
    pub usage: TokenUsage,
    pub status: RunStatus,
}

impl PipelineResult {
    /// Checks the structural invariants that every finished run must hold.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.status == RunStatus::Completed {
            if self.figure.is_none() {
                return Err("completed run has no figure".into());
            }
            if self.summary.is_empty() {
                return Err("completed run has empty summary".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_direct_field_mapping() {
        let p = parse_problem_record(
            r#"{"id":"g1","category":"Geometry2D","subtype":"Angle","text":"Find angle ABC."}"#,
        )
        .unwrap();
        assert_eq!(p.category, Category::Geometry2D);
        assert_eq!(p.subtype, Subtype::Angle);
        assert_eq!(p.text, "Find angle ABC.");
        assert!(p.original_figure.is_none());
    }

    #[test]
    fn rejects_forbidden_pairing() {
        let err = parse_problem_record(
            r#"{"id":"f1","category":"Function","subtype":"Angle","text":"x"}"#,
        )
        .unwrap_err();
        match err {
            RecordError::IllegalSubtype { category, subtype } => {
                assert_eq!(category, Category::Function);
                assert_eq!(subtype, Subtype::Angle);
            }
            other => panic!("expected IllegalSubtype, got {other:?}"),
        }
    }

    #[test]
    fn accepts_all_nine_legal_pairs() {
        let mut n = 0;
        for category in Category::ALL {
            for subtype in Subtype::legal_for(category) {
                let raw = format!(
                    r#"{{"id":"p{n}","category":"{category}","subtype":"{subtype}","text":"t"}}"#
                );
                parse_problem_record(&raw)
                    .unwrap_or_else(|e| panic!("legal pair {category}/{subtype} rejected: {e}"));
                n += 1;
            }
        }
        assert_eq!(n, 9);
    }

    #[test]
    fn rejects_every_illegal_pairing() {
        for category in Category::ALL {
            for subtype in Subtype::ALL {
                let raw = format!(
                    r#"{{"id":"x","category":"{category}","subtype":"{subtype}","text":"t"}}"#
                );
                let res = parse_problem_record(&raw);
                if subtype.is_legal_for(category) {
                    assert!(res.is_ok());
                } else {
                    assert!(
                        matches!(res, Err(RecordError::IllegalSubtype { .. })),
                        "pair {category}/{subtype} should be illegal"
                    );
                }
            }
        }
    }

    #[test]
    fn ignores_unknown_extra_fields() {
        let p = parse_problem_record(
            r#"{"id":"g1","category":"Geometry2D","subtype":"Area","text":"t","split":"test","difficulty":3}"#,
        )
        .unwrap();
        assert_eq!(p.subtype, Subtype::Area);
    }

    #[test]
    fn rejects_empty_text_and_bad_syntax() {
        assert!(matches!(
            parse_problem_record(
                r#"{"id":"a","category":"Function","subtype":"Property","text":""}"#
            ),
            Err(RecordError::MalformedRecord(_))
        ));
        assert!(matches!(
            parse_problem_record("not json"),
            Err(RecordError::MalformedRecord(_))
        ));
    }

    #[test]
    fn record_round_trip() {
        let p = Problem {
            id: "p9".into(),
            text: "Compute the area of square ABCD.".into(),
            category: Category::Geometry2D,
            subtype: Subtype::Area,
            original_figure: Some("images/p9.png".into()),
            gold_answer: Some("16".into()),
            choices: Some(vec!["8".into(), "16".into()]),
        };
        let line = serialize_problem_record(&p);
        let back = parse_problem_record(&line).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn multiple_choice_invariants() {
        assert!(
            GeneratedQuestion::multiple_choice("q".into(), vec!["a".into()], "a".into()).is_err()
        );
        assert!(GeneratedQuestion::multiple_choice(
            "q".into(),
            vec!["a".into(), "b".into()],
            "c".into()
        )
        .is_err());
        let q = GeneratedQuestion::multiple_choice(
            "q".into(),
            vec!["a".into(), "b".into()],
            "b".into(),
        )
        .unwrap();
        assert_eq!(q.kind, QuestionKind::MultipleChoice);
        let f = GeneratedQuestion::free_form("q".into(), "any".into());
        assert!(f.choices.is_empty());
    }

    #[test]
    fn usage_accumulates() {
        let mut total = TokenUsage::default();
        total.accumulate(TokenUsage::new(3400, 600, 60.0));
        total.accumulate(TokenUsage::new(100, 50, 1.5));
        assert_eq!(total.input_tokens, 3500);
        assert_eq!(total.output_tokens, 650);
        assert!((total.wall_time - 61.5).abs() < 1e-12);
    }
}
