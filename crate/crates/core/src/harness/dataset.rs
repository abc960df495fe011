//! SICK-style tab-separated problem files.

use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

use crate::ingest::{normalize_text, LlfDoc};
use crate::lambda::Term;
use crate::Label;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("missing column {0:?}")]
    MissingColumn(&'static str),
    #[error("row {row}: {msg}")]
    Format { row: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub id: String,
    pub premise: String,
    pub hypothesis: String,
    pub gold: Label,
    pub split: Option<String>,
    pub premise_llf: Option<Term>,
    pub hypothesis_llf: Option<Term>,
}

impl Problem {
    pub fn new(id: &str, premise: &str, hypothesis: &str, gold: Label) -> Problem {
        Problem {
            id: id.to_string(),
            premise: premise.to_string(),
            hypothesis: hypothesis.to_string(),
            gold,
            split: None,
            premise_llf: None,
            hypothesis_llf: None,
        }
    }

    pub fn with_llfs(mut self, premise: Term, hypothesis: Term) -> Problem {
        self.premise_llf = Some(premise);
        self.hypothesis_llf = Some(hypothesis);
        self
    }

    pub fn llfs(&self) -> Option<(&Term, &Term)> {
        Some((self.premise_llf.as_ref()?, self.hypothesis_llf.as_ref()?))
    }
}

#[derive(Debug, Default)]
pub struct Dataset {
    pub problems: Vec<Problem>,
    pub skipped: Vec<DatasetError>,
}

const ID: &[&str] = &["pair_id", "id"];
const PREMISE: &[&str] = &["premise", "sentence_a"];
const HYPOTHESIS: &[&str] = &["hypothesis", "sentence_b"];
const LABEL: &[&str] = &["label", "entailment_label", "gold_label"];
const SPLIT: &[&str] = &["split", "semeval_set"];

fn column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers.iter().position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
}

pub fn parse_dataset<R: std::io::Read>(reader: R) -> Result<Dataset, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(b'\t').quoting(false).flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let need = |names: &[&str], label: &'static str| column(&headers, names).ok_or(DatasetError::MissingColumn(label));
    let (id, prem, hyp, lab) =
        (need(ID, "pair_ID")?, need(PREMISE, "premise")?, need(HYPOTHESIS, "hypothesis")?, need(LABEL, "label")?);
    let split = column(&headers, SPLIT);
    let mut out = Dataset::default();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let parsed = rec.map_err(DatasetError::from).and_then(|rec| {
            let get = |k: usize| {
                rec.get(k)
                    .map(str::trim)
                    .ok_or_else(|| DatasetError::Format { row, msg: format!("only {} fields", rec.len()) })
            };
            let gold = get(lab)?.parse::<Label>().map_err(|e| DatasetError::Format { row, msg: e.to_string() })?;
            let mut p = Problem::new(get(id)?, get(prem)?, get(hyp)?, gold);
            p.split = split.and_then(|k| rec.get(k)).map(|s| s.trim().to_uppercase());
            Ok(p)
        });
        match parsed {
            Ok(p) => out.problems.push(p),
            Err(e) => {
                log::warn!("skipping dataset row: {e}");
                out.skipped.push(e);
            }
        }
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<Dataset, DatasetError> {
    parse_dataset(std::fs::File::open(path)?)
}

/// Keeps problems of the given split (case-insensitive).
pub fn filter_split(problems: Vec<Problem>, split: &str) -> Vec<Problem> {
    problems.into_iter().filter(|p| p.split.as_deref().is_some_and(|s| s.eq_ignore_ascii_case(split))).collect()
}

/// Fills in logical forms by normalized sentence text. Returns how many
/// problems have both.
pub fn attach_llfs(problems: &mut [Problem], llfs: &[LlfDoc]) -> usize {
    let by_text: HashMap<String, &Term> = llfs.iter().map(|d| (normalize_text(&d.text), &d.term)).collect();
    let mut covered = 0;
    for p in problems.iter_mut() {
        p.premise_llf = by_text.get(&normalize_text(&p.premise)).map(|t| (*t).clone());
        p.hypothesis_llf = by_text.get(&normalize_text(&p.hypothesis)).map(|t| (*t).clone());
        covered += usize::from(p.llfs().is_some());
    }
    covered
}
