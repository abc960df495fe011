//! Lexical knowledge: a WordNet loaded from prolog facts, queried with the
//! all-sense approach, plus an overlay of learned relations.

mod learned;
mod prolog;

pub use learned::{parse_learned, write_learned, LearnedError, LearnedSet};
pub use prolog::{load_prolog_kb, normalize_word, parse_prolog_kb, PrologError};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::lambda::{Term, Ty};

pub type SynsetId = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosClass {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl PosClass {
    /// WordNet synset type letter; satellites count as adjectives.
    pub fn from_wordnet(s: &str) -> Option<PosClass> {
        match s {
            "n" => Some(PosClass::Noun),
            "v" => Some(PosClass::Verb),
            "a" | "s" => Some(PosClass::Adj),
            "r" => Some(PosClass::Adv),
            _ => None,
        }
    }

    pub fn from_penn(tag: &str) -> Option<PosClass> {
        if tag.starts_with("NN") {
            Some(PosClass::Noun)
        } else if tag.starts_with("VB") {
            Some(PosClass::Verb)
        } else if tag.starts_with("JJ") {
            Some(PosClass::Adj)
        } else if tag.starts_with("RB") {
            Some(PosClass::Adv)
        } else {
            None
        }
    }

    /// Guess from a semantic type when the tag says nothing.
    pub fn from_type(ty: &Ty) -> Option<PosClass> {
        let n = Ty::n();
        match ty {
            t if t.is_atom("n") => Some(PosClass::Noun),
            Ty::Fun(a, r) if **a == n && **r == n => Some(PosClass::Adj),
            Ty::Fun(a, r) if a.is_atom("np") && r.is_sentence() => match r.as_ref() {
                Ty::Atom { feature: Some(f), .. } if f == "adj" => Some(PosClass::Adj),
                _ => Some(PosClass::Verb),
            },
            Ty::Fun(_, r) if r.is_vp() => Some(PosClass::Verb),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub wnum: i64,
    pub word: String,
    pub sense: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub pos: PosClass,
    pub members: Vec<Member>,
}

/// A word together with its class, identifying the senses a word-specific
/// relation (antonymy, derivation) holds between.
pub type SenseKey = (String, PosClass);

#[derive(Clone, Debug, Default)]
pub struct WordNet {
    synsets: HashMap<SynsetId, Synset>,
    senses: HashMap<String, Vec<SynsetId>>,
    pub(crate) hypernyms: HashMap<SynsetId, Vec<SynsetId>>,
    pub(crate) similar: HashSet<(SynsetId, SynsetId)>,
    pub(crate) antonyms: HashSet<(SenseKey, SenseKey)>,
    pub(crate) derived: HashSet<(SenseKey, SenseKey)>,
}

impl WordNet {
    pub(crate) fn add_member(&mut self, id: SynsetId, pos: PosClass, wnum: i64, word: &str, sense: i64) {
        let syn = self.synsets.entry(id).or_insert_with(|| Synset { id, pos, members: Vec::new() });
        syn.members.push(Member { wnum, word: word.to_string(), sense });
        let ids = self.senses.entry(word.to_string()).or_default();
        if !ids.contains(&id) {
            ids.push(id);
        }
    }

    pub(crate) fn sense_key(&self, id: SynsetId, wnum: i64) -> Option<SenseKey> {
        let syn = self.synsets.get(&id)?;
        syn.members.iter().find(|m| m.wnum == wnum).map(|m| (m.word.clone(), syn.pos))
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.senses.contains_key(word)
    }

    /// Synsets containing `word`, restricted to `class` when given.
    pub fn synsets_of(&self, word: &str, class: Option<PosClass>) -> Vec<SynsetId> {
        self.senses
            .get(word)
            .map(|ids| ids.iter().copied().filter(|id| class.is_none_or(|c| self.synsets[id].pos == c)).collect())
            .unwrap_or_default()
    }

    /// Reflexive-transitive hypernym closure. The visited set makes cyclic
    /// data safe.
    pub fn hypernym_closure(&self, start: &[SynsetId]) -> HashSet<SynsetId> {
        let mut seen: HashSet<SynsetId> = start.iter().copied().collect();
        let mut queue: VecDeque<SynsetId> = start.iter().copied().collect();
        while let Some(id) = queue.pop_front() {
            for &h in self.hypernyms.get(&id).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    fn classes(a: Option<PosClass>, b: Option<PosClass>) -> Option<(Option<PosClass>, Option<PosClass>)> {
        match (a, b) {
            (Some(x), Some(y)) if x != y => None,
            (Some(x), None) | (None, Some(x)) => Some((Some(x), Some(x))),
            other => Some(other),
        }
    }

    pub fn synonym(&self, a: &str, ca: Option<PosClass>, b: &str, cb: Option<PosClass>) -> Option<RelSource> {
        if let Some((ca, cb)) = Self::classes(ca, cb) {
            let sa = self.synsets_of(a, ca);
            let sb = self.synsets_of(b, cb);
            if sa.iter().any(|x| sb.contains(x)) {
                return Some(RelSource::WordnetSynset);
            }
            if sa.iter().any(|x| sb.iter().any(|y| self.similar.contains(&(*x, *y)))) {
                return Some(RelSource::WordnetSim);
            }
        }
        let derived = self.derived.iter().any(|((wa, pa), (wb, pb))| {
            wa == a && wb == b && ca.is_none_or(|c| c == *pa) && cb.is_none_or(|c| c == *pb)
        });
        derived.then_some(RelSource::WordnetDer)
    }

    pub fn subsumes(&self, a: &str, ca: Option<PosClass>, b: &str, cb: Option<PosClass>) -> bool {
        let Some((ca, cb)) = Self::classes(ca, cb) else { return false };
        let sb = self.synsets_of(b, cb);
        if sb.is_empty() {
            return false;
        }
        let closure = self.hypernym_closure(&self.synsets_of(a, ca));
        sb.iter().any(|id| closure.contains(id))
    }

    pub fn disjoint(&self, a: &str, ca: Option<PosClass>, b: &str, cb: Option<PosClass>) -> bool {
        let Some((ca, cb)) = Self::classes(ca, cb) else { return false };
        self.antonyms.iter().any(|((wa, pa), (wb, pb))| {
            wa == a && wb == b && ca.is_none_or(|c| c == *pa) && cb.is_none_or(|c| c == *pb)
        })
    }

    /// All words in the hypernym closure of `word`'s synsets.
    fn words_above(&self, word: &str, class: Option<PosClass>) -> Vec<String> {
        let closure = self.hypernym_closure(&self.synsets_of(word, class));
        let mut out: Vec<String> =
            closure.iter().flat_map(|id| self.synsets[id].members.iter().map(|m| m.word.clone())).collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelKind {
    Subsumes,
    Disjoint,
    Synonym,
}

impl RelKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RelKind::Subsumes => "⊑",
            RelKind::Disjoint => "|",
            RelKind::Synonym => "≡",
        }
    }

    pub fn is_symmetric(self) -> bool {
        self != RelKind::Subsumes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelSource {
    WordnetHyp,
    WordnetAnt,
    WordnetSim,
    WordnetDer,
    WordnetSynset,
    Learned,
}

/// A directed relation between lexical units.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexRelation {
    pub kind: RelKind,
    pub lhs: String,
    pub rhs: String,
    pub source: RelSource,
}

impl LexRelation {
    pub fn learned(kind: RelKind, lhs: &str, rhs: &str) -> LexRelation {
        LexRelation { kind, lhs: normalize_word(lhs), rhs: normalize_word(rhs), source: RelSource::Learned }
    }
}

impl fmt::Display for LexRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kind.symbol(), self.lhs, self.rhs)
    }
}

/// A lemma (possibly multiword, joined by `_`) with an optional class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexUnit {
    pub lemma: String,
    pub class: Option<PosClass>,
}

impl LexUnit {
    pub fn new(lemma: &str, class: Option<PosClass>) -> LexUnit {
        LexUnit { lemma: normalize_word(lemma), class }
    }

    /// Unit for a constant or a constant-only application such as
    /// `musical instrument`; `None` when the term contains variables or
    /// abstractions.
    pub fn from_term(t: &Term) -> Option<LexUnit> {
        fn words(t: &Term, out: &mut Vec<String>) -> bool {
            match t {
                Term::Const(c) => {
                    out.push(c.lemma.clone());
                    true
                }
                Term::App(f, a) => words(f, out) && words(a, out),
                _ => false,
            }
        }
        fn class(t: &Term) -> Option<PosClass> {
            match t {
                Term::Const(c) => PosClass::from_penn(&c.pos).or_else(|| PosClass::from_type(&c.ty)),
                Term::App(f, a) => {
                    let fty = f.head_const().map(|c| &c.ty);
                    let modifier = match f.as_ref() {
                        Term::Const(c) => c.ty.as_fun().is_some_and(|(x, r)| x == r),
                        _ => fty.is_some_and(|ty| ty.arity() >= 2),
                    };
                    if modifier {
                        class(a)
                    } else {
                        t.head_const().and_then(|c| PosClass::from_penn(&c.pos).or_else(|| PosClass::from_type(&c.ty)))
                    }
                }
                _ => None,
            }
        }
        let mut ws = Vec::new();
        if !words(t, &mut ws) {
            return None;
        }
        Some(LexUnit { lemma: normalize_word(&ws.join("_")), class: class(t) })
    }

    pub fn word_count(&self) -> usize {
        self.lemma.split('_').filter(|w| !w.is_empty()).count()
    }
}

impl fmt::Display for LexUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lemma)
    }
}

/// Which relations hold between two units, before precedence is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RelFlags {
    pub synonym: Option<RelSource>,
    pub subsumes: Option<RelSource>,
    pub disjoint: Option<RelSource>,
}

/// Read-mostly knowledge base. Cloning is cheap; `add_learned` returns a
/// new view and never touches the WordNet indices.
#[derive(Clone, Debug, Default)]
pub struct Kb {
    wordnet: Arc<WordNet>,
    learned: Arc<LearnedSet>,
    /// Let learned subsumptions chain with WordNet hypernymy.
    pub learned_closure: bool,
}

impl Kb {
    pub fn empty() -> Kb {
        Kb::default()
    }

    pub fn new(wordnet: WordNet) -> Kb {
        Kb { wordnet: Arc::new(wordnet), ..Kb::default() }
    }

    pub fn wordnet(&self) -> &WordNet {
        &self.wordnet
    }

    pub fn learned(&self) -> &LearnedSet {
        &self.learned
    }

    pub fn add_learned(&self, rel: LexRelation) -> Kb {
        let mut set = (*self.learned).clone();
        set.insert(rel);
        Kb { learned: Arc::new(set), ..self.clone() }
    }

    pub fn with_learned(&self, set: LearnedSet) -> Kb {
        let mut merged = (*self.learned).clone();
        merged.extend(set.iter().cloned());
        Kb { learned: Arc::new(merged), ..self.clone() }
    }

    /// The base knowledge without any learned relations.
    pub fn without_learned(&self) -> Kb {
        Kb { learned: Arc::new(LearnedSet::default()), ..self.clone() }
    }

    pub fn flags(&self, a: &LexUnit, b: &LexUnit) -> RelFlags {
        let wn = &self.wordnet;
        let l = &self.learned;
        let learned = |k| l.holds(k, &a.lemma, &b.lemma).then_some(RelSource::Learned);
        let synonym = learned(RelKind::Synonym).or_else(|| wn.synonym(&a.lemma, a.class, &b.lemma, b.class));
        let subsumes = learned(RelKind::Subsumes)
            .or_else(|| wn.subsumes(&a.lemma, a.class, &b.lemma, b.class).then_some(RelSource::WordnetHyp))
            .or_else(|| (self.learned_closure && self.closure_subsumes(a, b)).then_some(RelSource::Learned));
        let disjoint = learned(RelKind::Disjoint)
            .or_else(|| wn.disjoint(&a.lemma, a.class, &b.lemma, b.class).then_some(RelSource::WordnetAnt));
        RelFlags { synonym, subsumes, disjoint }
    }

    /// Strongest relation from `a` to `b`: synonym, then subsumes, then
    /// disjoint.
    pub fn relation(&self, a: &LexUnit, b: &LexUnit) -> Option<LexRelation> {
        let f = self.flags(a, b);
        let (kind, source) = if let Some(s) = f.synonym {
            (RelKind::Synonym, s)
        } else if let Some(s) = f.subsumes {
            (RelKind::Subsumes, s)
        } else {
            (RelKind::Disjoint, f.disjoint?)
        };
        Some(LexRelation { kind, lhs: a.lemma.clone(), rhs: b.lemma.clone(), source })
    }

    /// Whether everything `a` denotes is `b`: equal lemmas, synonymy or
    /// subsumption.
    pub fn infers(&self, a: &LexUnit, b: &LexUnit) -> bool {
        if a.lemma == b.lemma && (a.class.is_none() || b.class.is_none() || a.class == b.class) {
            return true;
        }
        let f = self.flags(a, b);
        f.synonym.is_some() || f.subsumes.is_some()
    }

    pub fn disjoint(&self, a: &LexUnit, b: &LexUnit) -> bool {
        self.flags(a, b).disjoint.is_some()
    }

    /// Word-level search mixing learned edges and WordNet hypernymy.
    fn closure_subsumes(&self, a: &LexUnit, b: &LexUnit) -> bool {
        let mut seen: HashSet<String> = HashSet::from([a.lemma.clone()]);
        let mut queue = VecDeque::from([(a.lemma.clone(), a.class)]);
        while let Some((w, class)) = queue.pop_front() {
            if w == b.lemma || self.wordnet.subsumes(&w, class, &b.lemma, b.class) {
                return true;
            }
            let mut next: Vec<String> = self.learned.successors(&w);
            next.extend(self.wordnet.words_above(&w, class));
            for n in next {
                if seen.insert(n.clone()) {
                    queue.push_back((n, None));
                }
            }
        }
        false
    }
}
