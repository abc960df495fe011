//! Loading and validating pre-parsed syntactic terms.
//!
//! A record file holds blank-line separated records:
//!
//! ```text
//! #id 3a #prov manual #text ganzen en eenden
//! (app (const "en" VG "α->α->α") (const "ganzen" N "np") (const "eenden" N "np"))
//! #lemma ganzen alpino N(soort,mv,basis) gans
//! #lemma en alpino VG(neven) en
//! #lemma eenden alpino N(soort,mv,basis) eend
//! ```
//!
//! The same layout, with `#stage llf` in the header, stores logical forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::lambda::{
    app, check_linear, lam, parse_terms, type_of, Calculus, Const, Ctx, ParseError, Term, Ty, TypeError, SCHEMA_ATOM,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("record {id}: {source}")]
    Parse {
        id: String,
        #[source]
        source: ParseError,
    },
    #[error("record {id}: {msg}")]
    Format { id: String, msg: String },
    #[error("record {id}: {msg}")]
    Validation { id: String, msg: String },
    #[error("unknown {tagset} tag {tag:?}")]
    UnknownTag { tagset: TagSet, tag: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Alpino,
    Npn,
    Manual,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Alpino => "alpino",
            Provenance::Npn => "npn",
            Provenance::Manual => "manual",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alpino" => Ok(Provenance::Alpino),
            "npn" => Ok(Provenance::Npn),
            "manual" => Ok(Provenance::Manual),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TagSet {
    Alpino,
    Universal,
    Penn,
}

impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TagSet::Alpino => "alpino",
            TagSet::Universal => "universal",
            TagSet::Penn => "penn",
        })
    }
}

impl FromStr for TagSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alpino" => Ok(TagSet::Alpino),
            "universal" => Ok(TagSet::Universal),
            "penn" => Ok(TagSet::Penn),
            other => Err(format!("unknown tagset {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaEntry {
    pub tagset: TagSet,
    pub tag: String,
    pub lemma: String,
}

/// One record of a term file, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub id: String,
    pub provenance: Provenance,
    pub stage: Option<String>,
    pub text: String,
    pub term: Term,
    pub lemmas: BTreeMap<String, LemmaEntry>,
}

/// A validated syntactic term with its lexical annotation. Constants carry
/// surface tokens as their lemma until fixing replaces them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntacticDoc {
    pub sentence_id: String,
    pub raw_text: String,
    pub provenance: Provenance,
    pub term: Term,
    pub lemma_map: BTreeMap<String, LemmaEntry>,
}

impl Record {
    pub fn serialize(&self) -> String {
        let mut out = format!("#id {} #prov {}", self.id, self.provenance);
        if let Some(stage) = &self.stage {
            out.push_str(&format!(" #stage {stage}"));
        }
        out.push_str(&format!(" #text {}\n{}\n", self.text, self.term));
        for (tok, e) in &self.lemmas {
            out.push_str(&format!("#lemma {tok} {} {} {}\n", e.tagset, e.tag, e.lemma));
        }
        out
    }
}

impl SyntacticDoc {
    pub fn to_record(&self) -> Record {
        Record {
            id: self.sentence_id.clone(),
            provenance: self.provenance,
            stage: None,
            text: self.raw_text.clone(),
            term: self.term.clone(),
            lemmas: self.lemma_map.clone(),
        }
    }

    pub fn serialize(&self) -> String {
        self.to_record().serialize()
    }
}

/// Writes records separated by blank lines.
pub fn serialize_records<'a, I: IntoIterator<Item = &'a Record>>(records: I) -> String {
    records.into_iter().map(Record::serialize).collect::<Vec<_>>().join("\n")
}

fn parse_header(line: &str) -> Result<(String, Provenance, Option<String>, String), String> {
    let rest = line.strip_prefix("#id ").ok_or("header must start with #id")?;
    let (id, rest) = rest.split_once(" #prov ").ok_or("missing #prov")?;
    let (prov_and_stage, text) = match rest.split_once(" #text") {
        Some((a, b)) => (a, b.strip_prefix(' ').unwrap_or(b)),
        None => return Err("missing #text".into()),
    };
    let (prov, stage) = match prov_and_stage.split_once(" #stage ") {
        Some((p, s)) => (p.trim(), Some(s.trim().to_string())),
        None => (prov_and_stage.trim(), None),
    };
    Ok((id.trim().to_string(), prov.parse()?, stage, text.trim().to_string()))
}

fn parse_block(block: &str) -> Result<Record, IngestError> {
    let mut lines = block.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or_default();
    let (id, provenance, stage, text) =
        parse_header(header.trim()).map_err(|msg| IngestError::Format { id: "?".into(), msg })?;
    let mut term_src = String::new();
    let mut lemmas = BTreeMap::new();
    for line in lines {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("#lemma ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(IngestError::Format { id, msg: format!("bad lemma line {line:?}") });
            }
            let tagset = parts[1].parse().map_err(|msg| IngestError::Format { id: id.clone(), msg })?;
            lemmas.insert(
                parts[0].to_string(),
                LemmaEntry { tagset, tag: parts[2].to_string(), lemma: parts[3].to_string() },
            );
        } else if line.starts_with('#') {
            return Err(IngestError::Format { id, msg: format!("unexpected directive {line:?}") });
        } else {
            term_src.push_str(line);
            term_src.push('\n');
        }
    }
    let mut terms = parse_terms(&term_src).map_err(|source| IngestError::Parse { id: id.clone(), source })?;
    if terms.len() != 1 {
        return Err(IngestError::Format { id, msg: format!("expected one term, found {}", terms.len()) });
    }
    Ok(Record { id, provenance, stage, text, term: terms.remove(0), lemmas })
}

/// Splits a file into records. Malformed records are returned as errors in
/// place so callers can log and continue.
pub fn parse_records(src: &str) -> Vec<Result<Record, IngestError>> {
    let mut blocks = Vec::new();
    let mut cur = String::new();
    for line in src.lines() {
        if line.trim().is_empty() {
            if !cur.trim().is_empty() {
                blocks.push(std::mem::take(&mut cur));
            }
            cur.clear();
        } else {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.trim().is_empty() {
        blocks.push(cur);
    }
    blocks.iter().map(|b| parse_block(b)).collect()
}

/// Result of loading a file: valid items plus the rejected records.
#[derive(Debug)]
pub struct Loaded<T> {
    pub items: Vec<T>,
    pub skipped: Vec<IngestError>,
}

impl<T> Default for Loaded<T> {
    fn default() -> Self {
        Loaded { items: Vec::new(), skipped: Vec::new() }
    }
}

/// Replaces schematic coordinator types by the most general type shared
/// by the coordinated arguments.
pub fn instantiate_coordinators(t: &Term) -> Result<Term, String> {
    fn go(t: &Term, scope: &mut Ctx) -> Result<Term, String> {
        match t {
            Term::Var(_) => Ok(t.clone()),
            Term::Const(c) => {
                if c.ty.contains_atom(SCHEMA_ATOM) {
                    Err(format!("coordinator {} has no arguments to instantiate from", c.lemma))
                } else {
                    Ok(t.clone())
                }
            }
            Term::Abs(x, ty, b) => {
                let saved = scope.insert(x.clone(), ty.clone());
                let body = go(b, scope);
                match saved {
                    Some(old) => scope.insert(x.clone(), old),
                    None => scope.remove(x),
                };
                Ok(lam(x, ty.clone(), body?))
            }
            Term::App(..) => {
                let (head, args) = t.head_and_args();
                let args = args.into_iter().map(|a| go(a, scope)).collect::<Result<Vec<_>, _>>()?;
                let head = match head {
                    Term::Const(c) if c.ty.contains_atom(SCHEMA_ATOM) => {
                        let (params, _) = c.ty.uncurry();
                        let mut inst: Option<Ty> = None;
                        for (p, a) in params.iter().zip(&args) {
                            if !p.is_atom(SCHEMA_ATOM) {
                                continue;
                            }
                            let aty = type_of(a, scope).map_err(|e| e.to_string())?;
                            inst = Some(match inst {
                                None => aty,
                                Some(prev) => prev.generalize(&aty).ok_or_else(|| {
                                    format!("coordinated arguments of {} have incompatible types", c.lemma)
                                })?,
                            });
                        }
                        let inst = inst.ok_or_else(|| format!("cannot instantiate coordinator {}", c.lemma))?;
                        Term::Const(Const { ty: c.ty.substitute_atom(SCHEMA_ATOM, &inst), ..c.clone() })
                    }
                    other => go(other, scope)?,
                };
                Ok(args.into_iter().fold(head, app))
            }
        }
    }
    go(t, &mut Ctx::new())
}

/// Validates a parsed record as a syntactic document.
pub fn validate_syntactic(rec: Record) -> Result<SyntacticDoc, IngestError> {
    let id = rec.id.clone();
    let invalid = |msg: String| IngestError::Validation { id: id.clone(), msg };
    let term = instantiate_coordinators(&rec.term).map_err(invalid)?;
    let mut atom_err = None;
    term.visit_consts(&mut |c| {
        if atom_err.is_none() {
            if let Err(e) = Calculus::Syntactic.check(&c.ty) {
                atom_err = Some(e);
            }
        }
    });
    if let Some(e) = atom_err {
        return Err(invalid(e.to_string()));
    }
    type_of(&term, &Ctx::new()).map_err(|e| invalid(e.to_string()))?;
    if !check_linear(&term) {
        return Err(invalid("term is not linear".into()));
    }
    for c in term.constants() {
        if !rec.lemmas.contains_key(&c.lemma) {
            return Err(invalid(format!("no lemma entry for {:?}", c.lemma)));
        }
    }
    Ok(SyntacticDoc {
        sentence_id: rec.id,
        raw_text: rec.text,
        provenance: rec.provenance,
        term,
        lemma_map: rec.lemmas,
    })
}

/// Parses and validates syntactic records; invalid ones are logged and
/// returned in `skipped`.
pub fn parse_syntactic(src: &str) -> Loaded<SyntacticDoc> {
    let mut out = Loaded::default();
    for r in parse_records(src) {
        match r.and_then(validate_syntactic) {
            Ok(doc) => out.items.push(doc),
            Err(e) => {
                log::warn!("skipping syntactic record: {e}");
                out.skipped.push(e);
            }
        }
    }
    out
}

pub fn load_syntactic(path: &Path) -> Result<Loaded<SyntacticDoc>, IngestError> {
    Ok(parse_syntactic(&std::fs::read_to_string(path)?))
}

/// A logical form record of type s in the semantic calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LlfDoc {
    pub id: String,
    pub text: String,
    pub term: Term,
}

impl LlfDoc {
    pub fn to_record(&self) -> Record {
        Record {
            id: self.id.clone(),
            provenance: Provenance::Manual,
            stage: Some("llf".into()),
            text: self.text.clone(),
            term: self.term.clone(),
            lemmas: BTreeMap::new(),
        }
    }
}

pub fn validate_llf(rec: Record) -> Result<LlfDoc, IngestError> {
    let id = rec.id.clone();
    let invalid = |msg: String| IngestError::Validation { id: id.clone(), msg };
    let ty = type_of(&rec.term, &Ctx::new()).map_err(|e| invalid(e.to_string()))?;
    if !ty.is_sentence() {
        return Err(invalid(format!("logical form has type {ty}, expected s")));
    }
    let mut atom_err: Option<TypeError> = None;
    rec.term.visit_consts(&mut |c| {
        if atom_err.is_none() {
            atom_err = Calculus::Semantic.check(&c.ty).err();
        }
    });
    if let Some(e) = atom_err {
        return Err(invalid(e.to_string()));
    }
    Ok(LlfDoc { id: rec.id, text: rec.text, term: rec.term })
}

pub fn parse_llfs(src: &str) -> Loaded<LlfDoc> {
    let mut out = Loaded::default();
    for r in parse_records(src) {
        match r.and_then(validate_llf) {
            Ok(doc) => out.items.push(doc),
            Err(e) => {
                log::warn!("skipping logical form record: {e}");
                out.skipped.push(e);
            }
        }
    }
    out
}

pub fn load_llfs(path: &Path) -> Result<Loaded<LlfDoc>, IngestError> {
    Ok(parse_llfs(&std::fs::read_to_string(path)?))
}

/// Lowercased, whitespace-collapsed text without final punctuation; the
/// key used to link sentences to problems.
pub fn normalize_text(s: &str) -> String {
    let joined = s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    joined.trim_end_matches(['.', '!', '?']).trim_end().to_string()
}

/// Parser coverage: sentences parsed, and problems whose two sides both
/// parsed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub sentences: usize,
    pub problems: usize,
}

pub fn coverage<'a, I>(parsed_texts: I, problems: &[(&str, &str)]) -> Coverage
where
    I: IntoIterator<Item = &'a str>,
{
    let parsed: std::collections::HashSet<String> = parsed_texts.into_iter().map(normalize_text).collect();
    let problems = problems
        .iter()
        .filter(|(p, h)| parsed.contains(&normalize_text(p)) && parsed.contains(&normalize_text(h)))
        .count();
    Coverage { sentences: parsed.len(), problems }
}

/// Many-to-one map from a source tagset to Penn-style tags.
///
/// Keys are either bare tags (`N`, `NOUN`) or a bare tag with a single
/// feature (`N(mv)`, `NOUN|Number=Plur`); feature keys win over bare ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagMap {
    pub source: TagSet,
    pub entries: HashMap<String, String>,
}

impl TagMap {
    pub fn universal() -> TagMap {
        let pairs = [
            ("ADJ", "JJ"),
            ("ADP", "IN"),
            ("ADV", "RB"),
            ("AUX", "VB"),
            ("CCONJ", "CC"),
            ("CONJ", "CC"),
            ("DET", "DT"),
            ("INTJ", "UH"),
            ("NOUN", "NN"),
            ("NOUN|Number=Plur", "NNS"),
            ("NUM", "CD"),
            ("PART", "RP"),
            ("PRON", "PRP"),
            ("PROPN", "NNP"),
            ("PUNCT", "."),
            ("SCONJ", "IN"),
            ("SYM", "SYM"),
            ("VERB", "VB"),
            ("X", "FW"),
        ];
        TagMap::from_pairs(TagSet::Universal, &pairs)
    }

    pub fn alpino() -> TagMap {
        let pairs = [
            ("N", "NN"),
            ("N(mv)", "NNS"),
            ("ADJ", "JJ"),
            ("WW", "VB"),
            ("VNW", "PRP"),
            ("LID", "DT"),
            ("VZ", "IN"),
            ("VG", "CC"),
            ("BW", "RB"),
            ("TW", "CD"),
            ("SPEC", "NNP"),
            ("TSW", "UH"),
            ("LET", "."),
        ];
        TagMap::from_pairs(TagSet::Alpino, &pairs)
    }

    fn from_pairs(source: TagSet, pairs: &[(&str, &str)]) -> TagMap {
        TagMap { source, entries: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect() }
    }

    /// Reads `source<TAB>penn` lines; `#` starts a comment.
    pub fn from_tsv(source: TagSet, src: &str) -> Result<TagMap, String> {
        let mut entries = HashMap::new();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = line.split_once('\t').ok_or_else(|| format!("line {}: expected two columns", i + 1))?;
            entries.insert(a.trim().to_string(), b.trim().to_string());
        }
        Ok(TagMap { source, entries })
    }

    /// Penn image of a source tag.
    pub fn map(&self, tag: &str) -> Option<&str> {
        if let Some(t) = self.entries.get(tag) {
            return Some(t);
        }
        let (base, feats): (&str, Vec<&str>) = match self.source {
            TagSet::Alpino => match tag.split_once('(') {
                Some((b, rest)) => (b, rest.trim_end_matches(')').split(',').map(str::trim).collect()),
                None => (tag, vec![]),
            },
            _ => {
                let mut parts = tag.split('|');
                (parts.next().unwrap_or(tag), parts.collect())
            }
        };
        for f in feats {
            let key = match self.source {
                TagSet::Alpino => format!("{base}({f})"),
                _ => format!("{base}|{f}"),
            };
            if let Some(t) = self.entries.get(&key) {
                return Some(t);
            }
        }
        self.entries.get(base).map(String::as_str)
    }
}

/// Rewrites every tag into Penn style using the map for its tagset.
/// Penn-tagged entries are left alone, so the operation is idempotent.
pub fn normalize_tags(doc: &SyntacticDoc, maps: &[TagMap]) -> Result<SyntacticDoc, IngestError> {
    let lookup = |tagset: TagSet, tag: &str| -> Result<String, IngestError> {
        if tagset == TagSet::Penn {
            return Ok(tag.to_string());
        }
        maps.iter()
            .find(|m| m.source == tagset)
            .and_then(|m| m.map(tag))
            .map(str::to_string)
            .ok_or_else(|| IngestError::UnknownTag { tagset, tag: tag.to_string() })
    };
    let mut lemma_map = BTreeMap::new();
    for (tok, e) in &doc.lemma_map {
        lemma_map.insert(
            tok.clone(),
            LemmaEntry { tagset: TagSet::Penn, tag: lookup(e.tagset, &e.tag)?, lemma: e.lemma.clone() },
        );
    }
    // The lemma entry tag is the more specific one (it keeps number
    // features), so it wins over the tag written in the term.
    let term = doc.term.try_map_consts(&mut |c| {
        let pos = match lemma_map.get(&c.lemma) {
            Some(e) => e.tag.clone(),
            None => lookup(TagSet::Penn, &c.pos)?,
        };
        Ok::<_, IngestError>(Const { pos, ..c.clone() })
    })?;
    Ok(SyntacticDoc { term, lemma_map, ..doc.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GANZEN: &str = r#"#id 3a #prov manual #text ganzen en eenden
(app (const "en" VG "α->α->α") (const "ganzen" N "np") (const "eenden" N "np"))
#lemma ganzen alpino N(soort,mv,basis) gans
#lemma en alpino VG(neven) en
#lemma eenden alpino N(soort,mv,basis) eend
"#;

    #[test]
    fn np_coordination_instantiates_to_np() {
        let loaded = parse_syntactic(GANZEN);
        assert!(loaded.skipped.is_empty(), "{:?}", loaded.skipped);
        let doc = &loaded.items[0];
        let en = doc.term.head_const().unwrap();
        assert_eq!(en.ty.to_string(), "np->np->np");
    }

    #[test]
    fn empty_input() {
        let loaded = parse_syntactic("");
        assert!(loaded.items.is_empty() && loaded.skipped.is_empty());
    }

    #[test]
    fn missing_lemma_is_rejected() {
        let src = GANZEN.replace("#lemma en alpino VG(neven) en\n", "");
        let loaded = parse_syntactic(&src);
        assert!(loaded.items.is_empty());
        assert!(matches!(loaded.skipped[0], IngestError::Validation { .. }));
    }

    #[test]
    fn nonlinear_is_rejected() {
        let src = r#"#id x #prov manual #text x
(app (lam x "np" (app (const "eten" WW "np->np->s") x x)) (const "bessen" N "np"))
#lemma eten alpino WW eten
#lemma bessen alpino N bes
"#;
        let loaded = parse_syntactic(src);
        assert_eq!(loaded.skipped.len(), 1);
    }

    #[test]
    fn round_trip() {
        let doc = parse_syntactic(GANZEN).items.remove(0);
        let again = parse_syntactic(&doc.serialize()).items.remove(0);
        assert_eq!(doc, again);
    }

    #[test]
    fn tags_normalize_with_features() {
        let doc = parse_syntactic(GANZEN).items.remove(0);
        let norm = normalize_tags(&doc, &[TagMap::alpino(), TagMap::universal()]).unwrap();
        assert_eq!(norm.lemma_map["ganzen"].tag, "NNS");
        assert_eq!(norm.lemma_map["en"].tag, "CC");
        assert_eq!(normalize_tags(&norm, &[]).unwrap(), norm);
        assert_eq!(TagMap::universal().map("VERB"), Some("VB"));
        assert_eq!(TagMap::universal().map("NOUN|Number=Plur"), Some("NNS"));
    }

    #[test]
    fn unknown_tag() {
        let src = GANZEN.replace("VG(neven)", "XYZ");
        let doc = parse_syntactic(&src).items.remove(0);
        assert!(matches!(normalize_tags(&doc, &[TagMap::alpino()]), Err(IngestError::UnknownTag { .. })));
    }

    #[test]
    fn coverage_counts_both_sides() {
        let parsed = ["Een hond rent.", "een kat slaapt"];
        let problems = [("een hond rent", "Een kat slaapt"), ("een hond rent", "een vogel zingt")];
        assert_eq!(coverage(parsed, &problems), Coverage { sentences: 2, problems: 1 });
    }
}
