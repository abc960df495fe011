//! Abductive learning of lexical relations from labeled problems.
//!
//! When the prover misses a gold label, the tableau for that label is
//! expanded in full and its open branches are mined for pairs of
//! predicates over the same arguments. Sets of relations over those pairs
//! are tried cheapest first until one lets the prover reach the label.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::harness::Problem;
use crate::kb::{Kb, LearnedSet, LexRelation, LexUnit, RelKind};
use crate::tableau::{Config, End, Entry, Prover, Sign};
use crate::Label;

#[derive(Clone, Debug)]
pub struct AbductionConfig {
    /// Prover calls allowed per problem, the initial check included.
    pub max_prover_calls: usize,
    /// Longest phrase, in words, on either side of a relation.
    pub max_words: usize,
    /// Largest relation set tried.
    pub max_relations: usize,
}

impl Default for AbductionConfig {
    fn default() -> Self {
        AbductionConfig { max_prover_calls: 200, max_words: 2, max_relations: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub relation: LexRelation,
    pub cost: usize,
    pub source_nodes: Vec<usize>,
}

/// A single constant, or a constant applied to one constant.
fn short_phrase(t: &crate::lambda::Term, max_words: usize) -> Option<LexUnit> {
    use crate::lambda::Term;
    let ok = match t {
        Term::Const(_) => true,
        Term::App(f, a) => matches!((f.as_ref(), a.as_ref()), (Term::Const(_), Term::Const(_))),
        _ => false,
    };
    let u = LexUnit::from_term(t).filter(|_| ok)?;
    (u.word_count() <= max_words).then_some(u)
}

fn compatible(kb: &Kb, kind: RelKind, a: &LexUnit, b: &LexUnit) -> bool {
    match kind {
        RelKind::Subsumes => !kb.disjoint(a, b) && !kb.disjoint(b, a) && !kb.infers(a, b),
        RelKind::Disjoint => !kb.infers(a, b) && !kb.infers(b, a) && !kb.disjoint(a, b),
        RelKind::Synonym => !kb.disjoint(a, b),
    }
}

fn target_roots(problem: &Problem, gold: Label) -> Option<Vec<Entry>> {
    let (p, h) = problem.llfs()?;
    let sign = match gold {
        Label::Entailment => Sign::F,
        Label::Contradiction => Sign::T,
        Label::Neutral => return None,
    };
    Some(vec![Entry::root(p.clone(), Sign::T), Entry::root(h.clone(), sign)])
}

/// Candidate relations read off the open branches of the gold tableau,
/// sorted by cost and then text.
pub fn candidates(problem: &Problem, kb: &Kb, tableau: &Config, cfg: &AbductionConfig) -> Vec<Candidate> {
    let Some(roots) = target_roots(problem, problem.gold) else { return Vec::new() };
    let mut full = tableau.clone();
    full.search.explore_all_branches = true;
    let proof = Prover::new(kb.clone(), full).tableau(roots);
    let mut found: BTreeMap<LexRelation, BTreeSet<usize>> = BTreeMap::new();
    for (branch, end) in proof.leaves() {
        if matches!(end, End::Closed(_) | End::Unexplored) {
            continue;
        }
        let units: Vec<(usize, &Entry, LexUnit)> = branch
            .iter()
            .filter_map(|&id| {
                let e = &proof.node(id).entry;
                short_phrase(&e.term, cfg.max_words).map(|u| (id, e, u))
            })
            .collect();
        for (i, (ia, ea, ua)) in units.iter().enumerate() {
            for (ib, eb, ub) in &units[i + 1..] {
                if ea.args.is_empty() || ea.args != eb.args || ua.lemma == ub.lemma {
                    continue;
                }
                if ua.class.is_some() && ub.class.is_some() && ua.class != ub.class {
                    continue;
                }
                let (kind, lhs, rhs) = match (ea.sign, eb.sign) {
                    (Sign::T, Sign::F) => (RelKind::Subsumes, ua, ub),
                    (Sign::F, Sign::T) => (RelKind::Subsumes, ub, ua),
                    (Sign::T, Sign::T) if problem.gold == Label::Contradiction => {
                        let (l, r) = if ua.lemma <= ub.lemma { (ua, ub) } else { (ub, ua) };
                        (RelKind::Disjoint, l, r)
                    }
                    _ => continue,
                };
                if !compatible(kb, kind, lhs, rhs) {
                    continue;
                }
                found.entry(LexRelation::learned(kind, &lhs.lemma, &rhs.lemma)).or_default().extend([*ia, *ib]);
            }
        }
    }
    let mut out: Vec<Candidate> = found
        .into_iter()
        .map(|(relation, nodes)| {
            let cost = LexUnit::new(&relation.lhs, None).word_count() + LexUnit::new(&relation.rhs, None).word_count();
            Candidate { relation, cost, source_nodes: nodes.into_iter().collect() }
        })
        .collect();
    out.sort_by_key(|c| (c.cost, c.relation.to_string()));
    out
}

/// Index subsets of `costs` with the given size and total, in
/// lexicographic index order.
fn subsets(costs: &[usize], size: usize, total: usize) -> Vec<Vec<usize>> {
    fn go(costs: &[usize], start: usize, size: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..costs.len() {
            if costs[i] > total {
                continue;
            }
            cur.push(i);
            go(costs, i + 1, size, total - costs[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(costs, 0, size, total, &mut Vec::new(), &mut out);
    out
}

/// The cheapest relation set (then fewest relations, then first in text
/// order) under which the prover reaches the gold label. `Some` of an
/// empty set when no knowledge is missing; `None` for neutral gold,
/// missing logical forms, or when the call budget runs out.
pub fn abduce(problem: &Problem, kb: &Kb, tableau: &Config, cfg: &AbductionConfig) -> Option<Vec<LexRelation>> {
    let (p, h) = problem.llfs()?;
    if problem.gold.is_neutral() {
        return None;
    }
    let proves = |set: &[LexRelation]| {
        let kb = kb.with_learned(set.iter().cloned().collect());
        Prover::new(kb, tableau.clone()).classify(p, h) == problem.gold
    };
    if proves(&[]) {
        return Some(Vec::new());
    }
    let cands = candidates(problem, kb, tableau, cfg);
    log::debug!("problem {}: {} abduction candidates", problem.id, cands.len());
    let costs: Vec<usize> = cands.iter().map(|c| c.cost).collect();
    let max_cost: usize = {
        let mut sorted = costs.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        sorted.iter().take(cfg.max_relations).sum()
    };
    let mut calls = 1;
    for cost in 1..=max_cost {
        for size in 1..=cfg.max_relations.min(cands.len()) {
            let mut sets: Vec<Vec<LexRelation>> = subsets(&costs, size, cost)
                .into_iter()
                .map(|ix| {
                    let mut s: Vec<LexRelation> = ix.into_iter().map(|i| cands[i].relation.clone()).collect();
                    s.sort();
                    s
                })
                .collect();
            sets.sort_by_key(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>());
            for set in sets {
                if calls >= cfg.max_prover_calls {
                    log::debug!("problem {}: abduction budget spent", problem.id);
                    return None;
                }
                calls += 1;
                if proves(&set) {
                    return Some(set);
                }
            }
        }
    }
    None
}

/// Relations found for each problem and the merged overlay.
#[derive(Clone, Debug, Default)]
pub struct Learned {
    pub relations: LearnedSet,
    /// Supporting problem ids per kept relation.
    pub support: BTreeMap<LexRelation, Vec<String>>,
    /// Pairs of incompatible relations that were both dropped.
    pub conflicts: Vec<(LexRelation, LexRelation)>,
}

impl Learned {
    /// Tab-separated audit lines: relation, category placeholder, ids.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (rel, ids) in &self.support {
            out.push_str(&format!("{rel}\t?\t{}\n", ids.join(",")));
        }
        for (a, b) in &self.conflicts {
            out.push_str(&format!("# conflict: {a} vs {b}\n"));
        }
        out
    }
}

fn conflicting(a: &LexRelation, b: &LexRelation) -> bool {
    use RelKind::*;
    let same = a.lhs == b.lhs && a.rhs == b.rhs;
    let swapped = a.lhs == b.rhs && a.rhs == b.lhs;
    match (a.kind, b.kind) {
        (Subsumes, Subsumes) => swapped,
        (Subsumes, Disjoint) | (Disjoint, Subsumes) | (Synonym, Disjoint) | (Disjoint, Synonym) => same || swapped,
        _ => false,
    }
}

/// Abduces each problem against the frozen `kb` in parallel and merges the
/// results in problem-id order.
pub fn learn(problems: &[Problem], kb: &Kb, tableau: &Config, cfg: &AbductionConfig) -> Learned {
    let mut found: Vec<(String, Vec<LexRelation>)> = problems
        .par_iter()
        .filter(|p| !p.gold.is_neutral())
        .filter_map(|p| abduce(p, kb, tableau, cfg).map(|set| (p.id.clone(), set)))
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0));
    for (id, set) in &found {
        let p = problems.iter().find(|p| &p.id == id).expect("problem id");
        let (prem, hyp) = p.llfs().expect("abduced problems have logical forms");
        let replay = Prover::new(kb.with_learned(set.iter().cloned().collect()), tableau.clone());
        assert_eq!(replay.classify(prem, hyp), p.gold, "abduced set for {id} does not replay");
    }
    let mut support: BTreeMap<LexRelation, Vec<String>> = BTreeMap::new();
    for (id, set) in found {
        for r in set {
            support.entry(r).or_default().push(id.clone());
        }
    }
    let rels: Vec<&LexRelation> = support.keys().collect();
    let mut conflicts = Vec::new();
    let mut dropped = BTreeSet::new();
    for (i, a) in rels.iter().enumerate() {
        for b in &rels[i + 1..] {
            if conflicting(a, b) {
                log::warn!("dropping conflicting learned relations {a} and {b}");
                conflicts.push(((*a).clone(), (*b).clone()));
                dropped.insert((*a).clone());
                dropped.insert((*b).clone());
            }
        }
    }
    support.retain(|r, _| !dropped.contains(r));
    let relations = support.keys().cloned().collect();
    Learned { relations, support, conflicts }
}
