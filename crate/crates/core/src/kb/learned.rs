//! Learned relations and their file format: one `⊑|≡|| lhs rhs` per line.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{normalize_word, LexRelation, RelKind, RelSource};

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct LearnedError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LearnedSet {
    rels: BTreeSet<LexRelation>,
}

impl LearnedSet {
    pub fn insert(&mut self, rel: LexRelation) -> bool {
        self.rels.insert(LexRelation { source: RelSource::Learned, ..rel })
    }

    pub fn extend<I: IntoIterator<Item = LexRelation>>(&mut self, it: I) {
        for r in it {
            self.insert(r);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &LexRelation> {
        self.rels.iter()
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }

    pub fn contains(&self, rel: &LexRelation) -> bool {
        self.rels.contains(&LexRelation { source: RelSource::Learned, ..rel.clone() })
    }

    /// Symmetric kinds hold in both directions.
    pub fn holds(&self, kind: RelKind, a: &str, b: &str) -> bool {
        let probe = |l: &str, r: &str| LexRelation::learned(kind, l, r);
        self.rels.contains(&probe(a, b)) || (kind.is_symmetric() && self.rels.contains(&probe(b, a)))
    }

    /// Words directly above `w` via learned subsumption or synonymy.
    pub(crate) fn successors(&self, w: &str) -> Vec<String> {
        self.rels
            .iter()
            .filter_map(|r| match r.kind {
                RelKind::Subsumes if r.lhs == w => Some(r.rhs.clone()),
                RelKind::Synonym if r.lhs == w => Some(r.rhs.clone()),
                RelKind::Synonym if r.rhs == w => Some(r.lhs.clone()),
                _ => None,
            })
            .collect()
    }
}

impl FromIterator<LexRelation> for LearnedSet {
    fn from_iter<I: IntoIterator<Item = LexRelation>>(iter: I) -> Self {
        let mut s = LearnedSet::default();
        s.extend(iter);
        s
    }
}

fn kind_of(sym: &str) -> Option<RelKind> {
    match sym {
        "⊑" | "<=" => Some(RelKind::Subsumes),
        "≡" | "==" => Some(RelKind::Synonym),
        "|" => Some(RelKind::Disjoint),
        _ => None,
    }
}

/// Parses a learned-relation file. `#` starts a comment line.
pub fn parse_learned(src: &str) -> Result<LearnedSet, LearnedError> {
    let mut set = LearnedSet::default();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| LearnedError { line: i + 1, msg };
        if parts.len() != 3 {
            return Err(err(format!("expected `<relation> <lhs> <rhs>`, found {line:?}")));
        }
        let kind = kind_of(parts[0]).ok_or_else(|| err(format!("unknown relation {:?}", parts[0])))?;
        set.insert(LexRelation::learned(kind, &normalize_word(parts[1]), &normalize_word(parts[2])));
    }
    Ok(set)
}

pub fn write_learned(set: &LearnedSet) -> String {
    set.iter().map(|r| format!("{r}\n")).collect()
}
