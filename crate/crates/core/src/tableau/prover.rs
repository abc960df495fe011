use std::collections::{BTreeSet, HashSet};

use super::config::Config;
use super::entry::{entity, Entry, Sign};
use super::proof::{mentions, Closure, End, Justification, Node, Proof, Status, Tree};
use super::rules::{closes, expand, find_closure, EntityUse, Rule};
use crate::kb::Kb;
use crate::label::Label;
use crate::lambda::{Term, Ty};

/// Result of proving one premise/hypothesis pair.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub label: Label,
    /// Tableau for premise true, hypothesis false.
    pub entailment: Proof,
    /// Tableau for premise and hypothesis both true; only built when the
    /// first one stays open.
    pub contradiction: Option<Proof>,
}

impl Outcome {
    /// The proof that decided the label, if any.
    pub fn decisive(&self) -> Option<&Proof> {
        match self.label {
            Label::Entailment => Some(&self.entailment),
            Label::Contradiction => self.contradiction.as_ref(),
            Label::Neutral => None,
        }
    }

    pub fn exhausted(&self) -> bool {
        self.entailment.status == Status::Exhausted
            || self.contradiction.as_ref().is_some_and(|p| p.status == Status::Exhausted)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Prover {
    pub kb: Kb,
    pub config: Config,
}

type AppKey = (Rule, usize, Option<String>);

#[derive(Clone, Default)]
struct Branch {
    ids: Vec<usize>,
    present: HashSet<Entry>,
    entities: Vec<Term>,
    applied: HashSet<AppKey>,
}

struct Choice {
    rule: Rule,
    node: usize,
    entity: Option<Term>,
    children: Vec<Vec<Entry>>,
}

struct Search<'a> {
    kb: &'a Kb,
    cfg: &'a Config,
    nodes: Vec<Node>,
    applications: usize,
    next_entity: usize,
    reserved: BTreeSet<String>,
    exhausted: bool,
}

fn key(rule: Rule, node: usize, entity: Option<&Term>) -> AppKey {
    let name = match rule.entity_use() {
        EntityUse::Existing => entity.and_then(|e| e.as_const()).map(|c| c.lemma.clone()),
        _ => None,
    };
    (rule, node, name)
}

impl<'a> Search<'a> {
    fn entry(&self, id: usize) -> &Entry {
        &self.nodes[id - 1].entry
    }

    fn over_budget(&self) -> bool {
        self.applications >= self.cfg.budget.rule_applications || self.nodes.len() >= self.cfg.budget.nodes
    }

    fn add_node(&mut self, entry: Entry, by: Justification) -> usize {
        let id = self.nodes.len() + 1;
        self.nodes.push(Node { id, entry, by });
        id
    }

    fn fresh_entity(&mut self, br: &Branch) -> Term {
        loop {
            self.next_entity += 1;
            let name = format!("c{}", self.next_entity);
            let c = entity(&name);
            if !self.reserved.contains(&name) && !br.ids.iter().any(|&i| mentions(self.entry(i), &c)) {
                return c;
            }
        }
    }

    /// First closure involving `id` against the branch.
    fn closure(&self, br: &Branch, id: usize) -> Option<Closure> {
        let e = self.entry(id);
        if self.cfg.rule_enabled(Rule::Bot.name()) && closes(Rule::Bot, &[e], self.kb, self.cfg) {
            return Some(Closure { rule: Rule::Bot, ids: vec![id] });
        }
        br.ids
            .iter()
            .filter(|&&o| o != id)
            .find_map(|&o| find_closure(id, o, (e, self.entry(o)), self.kb, self.cfg))
            .map(|(rule, ids)| Closure { rule, ids })
    }

    /// Whether `e` would close at once on the branch extended by `sibs`.
    fn closes_with(&self, br: &Branch, e: &Entry, sibs: &[Entry]) -> bool {
        let (kb, cfg) = (self.kb, self.cfg);
        if cfg.rule_enabled(Rule::Bot.name()) && closes(Rule::Bot, &[e], kb, cfg) {
            return true;
        }
        let others = br.ids.iter().map(|&o| self.entry(o)).chain(sibs.iter().filter(|s| *s != e));
        others.into_iter().any(|o| find_closure(0, 1, (e, o), kb, cfg).is_some())
    }

    fn enabled(&self, rule: Rule) -> bool {
        self.cfg.rule_enabled(rule.name())
    }

    fn next_linear(&mut self, br: &mut Branch) -> Option<(Rule, usize, Option<Term>, Vec<Entry>)> {
        for rule in Rule::LINEAR {
            if !self.enabled(rule) {
                continue;
            }
            for &id in &br.ids.clone() {
                if br.applied.contains(&key(rule, id, None)) {
                    continue;
                }
                let probe = (rule.entity_use() == EntityUse::Fresh).then(|| entity("_"));
                let Some(out) = expand(rule, self.entry(id), probe.as_ref(), self.cfg) else { continue };
                br.applied.insert(key(rule, id, None));
                let ent = match rule.entity_use() {
                    EntityUse::Fresh => Some(self.fresh_entity(br)),
                    _ => None,
                };
                let out = match &ent {
                    Some(c) => expand(rule, self.entry(id), Some(c), self.cfg)?,
                    None => out,
                };
                let new: Vec<Entry> = out.into_iter().flatten().filter(|e| !br.present.contains(e)).collect();
                if new.is_empty() && ent.is_none() {
                    continue;
                }
                return Some((rule, id, ent, new));
            }
        }
        None
    }

    fn next_branching(&self, br: &mut Branch) -> Option<Choice> {
        let mut best: Option<(usize, Choice)> = None;
        let mut useless = Vec::new();
        for rule in Rule::BRANCHING {
            if !self.enabled(rule) {
                continue;
            }
            for &id in &br.ids {
                let ents: Vec<Option<&Term>> = match rule.entity_use() {
                    EntityUse::Existing => br.entities.iter().map(Some).collect(),
                    _ => vec![None],
                };
                for ent in ents {
                    let k = key(rule, id, ent);
                    if br.applied.contains(&k) {
                        continue;
                    }
                    let Some(out) = expand(rule, self.entry(id), ent, self.cfg) else { continue };
                    let children: Vec<Vec<Entry>> =
                        out.into_iter().map(|c| c.into_iter().filter(|e| !br.present.contains(e)).collect()).collect();
                    if children.iter().any(Vec::is_empty) {
                        useless.push(k);
                        continue;
                    }
                    let score = children.iter().filter(|c| c.iter().any(|e| self.closes_with(br, e, c))).count();
                    if best.as_ref().is_none_or(|(s, _)| score > *s) {
                        best = Some((score, Choice { rule, node: id, entity: ent.cloned(), children }));
                    }
                }
            }
        }
        br.applied.extend(useless);
        best.map(|(_, c)| c)
    }

    /// Adds entries to a branch, returning their ids and the first closure.
    fn push(&mut self, br: &mut Branch, entries: Vec<Entry>, by: &Justification) -> (Vec<usize>, Option<Closure>) {
        let mut ids = Vec::new();
        for e in entries {
            if br.present.contains(&e) {
                continue;
            }
            let id = self.add_node(e.clone(), by.clone());
            br.ids.push(id);
            br.present.insert(e);
            ids.push(id);
        }
        let closure = ids.iter().find_map(|&id| self.closure(br, id));
        (ids, closure)
    }

    fn expand(&mut self, mut br: Branch, mut segment: Vec<usize>) -> Tree {
        loop {
            if self.over_budget() {
                self.exhausted = true;
                return Tree { nodes: segment, end: End::Exhausted };
            }
            if let Some((rule, id, ent, new)) = self.next_linear(&mut br) {
                self.applications += 1;
                if let Some(c) = &ent {
                    br.entities.push(c.clone());
                }
                let by = Justification { rule, parents: vec![id], entity: ent };
                let (ids, closure) = self.push(&mut br, new, &by);
                segment.extend(ids);
                if let Some(c) = closure {
                    return Tree { nodes: segment, end: End::Closed(c) };
                }
                continue;
            }
            let Some(choice) = self.next_branching(&mut br) else {
                return Tree { nodes: segment, end: End::Open };
            };
            self.applications += 1;
            br.applied.insert(key(choice.rule, choice.node, choice.entity.as_ref()));
            let by = Justification { rule: choice.rule, parents: vec![choice.node], entity: choice.entity };
            // Children are numbered before any of them is expanded.
            let mut staged = Vec::new();
            for entries in choice.children {
                let mut child = br.clone();
                let ids: Vec<usize> = entries
                    .into_iter()
                    .map(|e| {
                        child.present.insert(e.clone());
                        let id = self.add_node(e, by.clone());
                        child.ids.push(id);
                        id
                    })
                    .collect();
                staged.push((child, ids));
            }
            let mut children = Vec::new();
            let mut decided = false;
            for (child, ids) in staged {
                if decided {
                    children.push(Tree { nodes: ids, end: End::Unexplored });
                    continue;
                }
                let closure = ids.iter().find_map(|&id| self.closure(&child, id));
                let tree = match closure {
                    Some(c) => Tree { nodes: ids, end: End::Closed(c) },
                    None => self.expand(child, ids),
                };
                let open = !all_closed(&tree);
                decided = self.exhausted || (open && !self.cfg.search.explore_all_branches);
                children.push(tree);
            }
            return Tree { nodes: segment, end: End::Split { by, children } };
        }
    }
}

fn all_closed(t: &Tree) -> bool {
    match &t.end {
        End::Closed(_) => true,
        End::Split { children, .. } => children.iter().all(all_closed),
        _ => false,
    }
}

fn initial_entities(entries: &[Entry], cfg: &Config) -> Vec<Term> {
    let mut out = Vec::new();
    for e in entries {
        for t in std::iter::once(&e.term).chain(&e.args) {
            t.visit_consts(&mut |c| {
                let t = Term::Const(c.clone());
                if cfg.ty_eq(&c.ty, &Ty::np()) && !out.contains(&t) {
                    out.push(t);
                }
            });
        }
    }
    out
}

impl Prover {
    pub fn new(kb: Kb, config: Config) -> Prover {
        Prover { kb, config }
    }

    /// Builds a tableau from signed root entries.
    pub fn tableau(&self, roots: Vec<Entry>) -> Proof {
        let mut s = Search {
            kb: &self.kb,
            cfg: &self.config,
            nodes: Vec::new(),
            applications: 0,
            next_entity: 0,
            reserved: BTreeSet::new(),
            exhausted: false,
        };
        for e in &roots {
            for t in std::iter::once(&e.term).chain(&e.args) {
                t.visit_consts(&mut |c| {
                    s.reserved.insert(c.lemma.clone());
                });
            }
        }
        let mut br = Branch { entities: initial_entities(&roots, &self.config), ..Branch::default() };
        let by = Justification { rule: Rule::Init, parents: vec![], entity: None };
        let (ids, _) = s.push(&mut br, roots, &by);
        let closure = (0..ids.len()).find_map(|k| {
            let sub = Branch { ids: ids[..=k].to_vec(), ..Branch::default() };
            s.closure(&sub, ids[k])
        });
        let tree = match closure {
            Some(c) => Tree { nodes: ids, end: End::Closed(c) },
            None => s.expand(br, ids),
        };
        let status = if all_closed(&tree) {
            Status::Closed
        } else if s.exhausted {
            Status::Exhausted
        } else {
            Status::Open
        };
        log::debug!("tableau {:?} after {} rule applications, {} nodes", status, s.applications, s.nodes.len());
        Proof { nodes: s.nodes, tree, status, rule_applications: s.applications }
    }

    /// Entailment if premise-true/hypothesis-false closes, contradiction if
    /// premise-true/hypothesis-true closes, neutral otherwise.
    pub fn prove(&self, premise: &Term, hypothesis: &Term) -> Outcome {
        let entailment =
            self.tableau(vec![Entry::root(premise.clone(), Sign::T), Entry::root(hypothesis.clone(), Sign::F)]);
        if entailment.is_closed() {
            return Outcome { label: Label::Entailment, entailment, contradiction: None };
        }
        let contra =
            self.tableau(vec![Entry::root(premise.clone(), Sign::T), Entry::root(hypothesis.clone(), Sign::T)]);
        let label = if contra.is_closed() { Label::Contradiction } else { Label::Neutral };
        Outcome { label, entailment, contradiction: Some(contra) }
    }

    pub fn classify(&self, premise: &Term, hypothesis: &Term) -> Label {
        self.prove(premise, hypothesis).label
    }
}
