use std::collections::HashSet;
use std::fmt::Write as _;

use super::config::Config;
use super::entry::{is_entity, Entry, Sign};
use super::rules::{closes, expand, EntityUse, Rule};
use crate::kb::Kb;
use crate::lambda::Term;

#[derive(Clone, Debug, PartialEq)]
pub struct Justification {
    pub rule: Rule,
    pub parents: Vec<usize>,
    pub entity: Option<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: usize,
    pub entry: Entry,
    pub by: Justification,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub rule: Rule,
    pub ids: Vec<usize>,
}

/// How a branch segment ends.
#[derive(Clone, Debug, PartialEq)]
pub enum End {
    Closed(Closure),
    /// Saturated without closing.
    Open,
    /// The budget ran out while this branch was being expanded.
    Exhausted,
    /// Not expanded because the outcome was already decided.
    Unexplored,
    Split {
        by: Justification,
        children: Vec<Tree>,
    },
}

/// A run of nodes added on one branch, followed by its end.
#[derive(Clone, Debug, PartialEq)]
pub struct Tree {
    pub nodes: Vec<usize>,
    pub end: End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Closed,
    Open,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    /// All nodes, `nodes[i].id == i + 1`.
    pub nodes: Vec<Node>,
    pub tree: Tree,
    pub status: Status,
    pub rule_applications: usize,
}

impl Tree {
    fn visit<'a>(&'a self, path: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], &'a End)) {
        let len = path.len();
        path.extend(&self.nodes);
        match &self.end {
            End::Split { children, .. } => {
                for c in children {
                    c.visit(path, f);
                }
            }
            end => f(path, end),
        }
        path.truncate(len);
    }
}

impl Proof {
    pub fn is_closed(&self) -> bool {
        self.status == Status::Closed
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id - 1]
    }

    /// Every leaf as the node ids on its branch, root first.
    pub fn leaves(&self) -> Vec<(Vec<usize>, &End)> {
        let mut out = Vec::new();
        self.tree.visit(&mut Vec::new(), &mut |p, e| out.push((p.to_vec(), e)));
        out
    }

    pub fn open_branches(&self) -> Vec<Vec<usize>> {
        self.leaves().into_iter().filter(|(_, e)| matches!(e, End::Open)).map(|(p, _)| p).collect()
    }

    /// Closures in the order they were found.
    pub fn closures(&self) -> Vec<&Closure> {
        self.leaves()
            .into_iter()
            .filter_map(|(_, e)| match e {
                End::Closed(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    /// Names of every rule used, in node order, then closures.
    pub fn rules_used(&self) -> Vec<Rule> {
        let mut out: Vec<Rule> = self.nodes.iter().map(|n| n.by.rule).filter(|r| *r != Rule::Init).collect();
        out.extend(self.closures().iter().map(|c| c.rule));
        out
    }

    /// Plain-text rendering, one node per line, children indented.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_tree(&self.tree, 0, &mut out);
        out
    }

    fn render_tree(&self, t: &Tree, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        for &id in &t.nodes {
            let n = self.node(id);
            let _ = writeln!(out, "{pad}{id} {} <- {}", n.entry, justification(&n.by));
        }
        match &t.end {
            End::Closed(c) => {
                let ids: Vec<String> = c.ids.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "{pad}× {}({})", c.rule, ids.join(","));
            }
            End::Open => {
                let _ = writeln!(out, "{pad}open");
            }
            End::Exhausted => {
                let _ = writeln!(out, "{pad}exhausted");
            }
            End::Unexplored => {
                let _ = writeln!(out, "{pad}unexplored");
            }
            End::Split { by, children } => {
                for (k, c) in children.iter().enumerate() {
                    let _ = writeln!(out, "{pad}branch {}/{} of {}", k + 1, children.len(), justification(by));
                    self.render_tree(c, depth + 1, out);
                }
            }
        }
    }

    /// Re-checks every step of the proof: each node must follow from its
    /// recorded antecedents, every entity introduced as fresh must be new to
    /// its branch, and every closure must hold under `kb`.
    pub fn replay(&self, kb: &Kb, cfg: &Config) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i + 1 {
                return Err(format!("node {} stored at position {}", n.id, i + 1));
            }
        }
        let mut err = None;
        self.tree.visit(&mut Vec::new(), &mut |path, end| {
            if err.is_some() {
                return;
            }
            if let Err(e) = self.check_branch(path, end, kb, cfg) {
                err = Some(e);
            }
        });
        err.map_or(Ok(()), Err)
    }

    fn check_branch(&self, path: &[usize], end: &End, kb: &Kb, cfg: &Config) -> Result<(), String> {
        let mut seen: HashSet<usize> = HashSet::new();
        for (pos, &id) in path.iter().enumerate() {
            let n = self.node(id);
            if n.by.rule != Rule::Init {
                if n.by.parents.iter().any(|p| !seen.contains(p)) {
                    return Err(format!("node {id}: antecedent not on branch"));
                }
                let ante = &self.node(n.by.parents[0]).entry;
                let out = expand(n.by.rule, ante, n.by.entity.as_ref(), cfg)
                    .ok_or_else(|| format!("node {id}: {} does not apply", n.by.rule))?;
                if !out.iter().flatten().any(|e| *e == n.entry) {
                    return Err(format!("node {id}: not produced by {}", n.by.rule));
                }
                if n.by.rule.entity_use() == EntityUse::Fresh {
                    let c = n.by.entity.as_ref().ok_or_else(|| format!("node {id}: missing entity"))?;
                    let earlier = path[..pos].iter().take_while(|&&j| self.node(j).by != n.by);
                    for j in earlier {
                        if mentions(&self.node(*j).entry, c) {
                            return Err(format!("node {id}: entity {} is not fresh", c.pretty()));
                        }
                    }
                }
            }
            seen.insert(id);
        }
        if let End::Closed(c) = end {
            if c.ids.iter().any(|i| !seen.contains(i)) {
                return Err(format!("closure {}: node not on branch", c.rule));
            }
            let ante: Vec<&Entry> = c.ids.iter().map(|&i| &self.node(i).entry).collect();
            if !closes(c.rule, &ante, kb, cfg) {
                return Err(format!("closure {}({:?}) does not hold", c.rule, c.ids));
            }
        } else if self.status == Status::Closed {
            return Err("closed proof with a leaf that is not closed".into());
        }
        Ok(())
    }

    /// Entities used on the proof, in order of first appearance.
    pub fn entities(&self) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for n in &self.nodes {
            for a in &n.entry.args {
                if is_entity(a) && !out.contains(a) {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    pub fn entry_sign(&self, id: usize) -> Sign {
        self.node(id).entry.sign
    }
}

pub(crate) fn mentions(e: &Entry, c: &Term) -> bool {
    let Some(target) = c.as_const() else { return false };
    let mut found = false;
    for t in std::iter::once(&e.term).chain(&e.args) {
        t.visit_consts(&mut |k| found |= k == target);
    }
    found
}

fn justification(j: &Justification) -> String {
    let mut parts: Vec<String> = j.parents.iter().map(|p| p.to_string()).collect();
    if let Some(e) = &j.entity {
        parts.push(e.pretty());
    }
    format!("{}({})", j.rule, parts.join(","))
}
