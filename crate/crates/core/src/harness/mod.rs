//! Dataset loading, classification, vote aggregation and evaluation.

mod dataset;
mod metrics;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

pub use dataset::{attach_llfs, filter_split, load_dataset, parse_dataset, Dataset, DatasetError, Problem};
pub use metrics::{tenths_of_percent, Confusion};

use crate::tableau::Prover;
use crate::Label;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no prediction for problem {0}")]
    MissingPrediction(String),
    #[error("{path}:{line}: {msg}")]
    Format { path: String, line: usize, msg: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Prover,
    External,
}

/// Labels keyed by problem id.
pub type Predictions = BTreeMap<String, Label>;

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionSet {
    pub model: String,
    pub provenance: Provenance,
    pub predictions: Predictions,
}

impl PredictionSet {
    pub fn new(model: &str, provenance: Provenance, predictions: Predictions) -> PredictionSet {
        PredictionSet { model: model.to_string(), provenance, predictions }
    }

    pub fn get(&self, id: &str) -> Result<Label, HarnessError> {
        self.predictions.get(id).copied().ok_or_else(|| HarnessError::MissingPrediction(id.to_string()))
    }
}

/// Neutral when either logical form is missing, otherwise the prover's
/// label.
pub fn classify(problem: &Problem, prover: &Prover) -> Label {
    match problem.llfs() {
        Some((p, h)) => prover.classify(p, h),
        None => Label::Neutral,
    }
}

/// Classifies problems on the current rayon pool.
pub fn classify_all(problems: &[Problem], prover: &Prover) -> Predictions {
    problems.par_iter().map(|p| (p.id.clone(), classify(p, prover))).collect::<Vec<_>>().into_iter().collect()
}

/// Non-neutral votes win when they agree; disagreement or no
/// non-neutral vote gives neutral.
pub fn ensemble(votes: &[Label]) -> Label {
    let mut decided: Option<Label> = None;
    for &v in votes.iter().filter(|v| !v.is_neutral()) {
        match decided {
            None => decided = Some(v),
            Some(d) if d != v => return Label::Neutral,
            _ => {}
        }
    }
    decided.unwrap_or(Label::Neutral)
}

/// Per-problem ensemble over sets that must all cover the same problems.
pub fn ensemble_sets(model: &str, sets: &[&PredictionSet]) -> Result<PredictionSet, HarnessError> {
    let mut out = Predictions::new();
    if let Some(first) = sets.first() {
        for id in first.predictions.keys() {
            let votes = sets.iter().map(|s| s.get(id)).collect::<Result<Vec<_>, _>>()?;
            out.insert(id.clone(), ensemble(&votes));
        }
        for s in &sets[1..] {
            if let Some(extra) = s.predictions.keys().find(|k| !first.predictions.contains_key(*k)) {
                return Err(HarnessError::MissingPrediction(extra.clone()));
            }
        }
    }
    Ok(PredictionSet::new(model, Provenance::Prover, out))
}

/// Prover proofs (E or C) override the external label.
pub fn hybrid(prover: &PredictionSet, external: &PredictionSet) -> Result<PredictionSet, HarnessError> {
    let mut out = Predictions::new();
    for (id, &ext) in &external.predictions {
        let own = prover.get(id)?;
        out.insert(id.clone(), if own.is_neutral() { ext } else { own });
    }
    if let Some(extra) = prover.predictions.keys().find(|k| !external.predictions.contains_key(*k)) {
        return Err(HarnessError::MissingPrediction(extra.clone()));
    }
    Ok(PredictionSet::new(&format!("{}+{}", prover.model, external.model), Provenance::External, out))
}

pub struct Evaluation {
    pub confusion: Confusion,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.confusion.fmt(f)
    }
}

pub fn evaluate(problems: &[Problem], predictions: &Predictions) -> Result<Evaluation, HarnessError> {
    let mut confusion = Confusion::default();
    for p in problems {
        let pred = predictions.get(&p.id).ok_or_else(|| HarnessError::MissingPrediction(p.id.clone()))?;
        confusion.add(p.gold, *pred);
    }
    Ok(Evaluation { confusion })
}

/// Reads `pair_ID<TAB>label` lines; a header line is allowed.
pub fn parse_predictions(path: &str, src: &str) -> Result<Predictions, HarnessError> {
    let mut out = Predictions::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| HarnessError::Format { path: path.to_string(), line: i + 1, msg };
        let (id, label) =
            line.split_once('\t').ok_or_else(|| err(format!("expected two tab-separated fields: {line:?}")))?;
        match label.trim().parse::<Label>() {
            Ok(l) => {
                out.insert(id.trim().to_string(), l);
            }
            Err(_) if i == 0 => continue,
            Err(e) => return Err(err(e.to_string())),
        }
    }
    Ok(out)
}

pub fn read_predictions(path: &Path) -> Result<Predictions, HarnessError> {
    parse_predictions(&path.display().to_string(), &std::fs::read_to_string(path)?)
}

pub fn write_predictions(preds: &Predictions) -> String {
    let mut out = String::from("pair_ID\tlabel\n");
    for (id, l) in preds {
        out.push_str(&format!("{id}\t{l}\n"));
    }
    out
}
