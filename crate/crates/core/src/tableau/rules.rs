//! The rule inventory. Expansion rules map antecedent entries (and, for
//! quantifier rules, an entity) to child branches; closure rules decide
//! whether a set of entries is inconsistent.

use std::fmt;
use std::str::FromStr;

use super::config::Config;
use super::entry::{Entry, Sign};
use crate::kb::{Kb, LexUnit, PosClass};
use crate::lambda::{app, substitute, Const, Term, Ty};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Init,
    AbstPull,
    ArgPush,
    Pss,
    Aux,
    VacMod,
    AdjSubT,
    AndT,
    SomeT,
    EveryF,
    NoF,
    SomeF,
    NoT,
    EveryT,
    AndF,
    Bot,
    Subs,
    VerbParticle,
    Disj,
}

/// How a rule uses entities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntityUse {
    None,
    Fresh,
    Existing,
}

impl Rule {
    /// Non-branching expansion rules in application order.
    pub const LINEAR: [Rule; 10] = [
        Rule::AbstPull,
        Rule::ArgPush,
        Rule::Pss,
        Rule::Aux,
        Rule::VacMod,
        Rule::AdjSubT,
        Rule::AndT,
        Rule::SomeT,
        Rule::EveryF,
        Rule::NoF,
    ];
    /// Branching rules in priority order.
    pub const BRANCHING: [Rule; 4] = [Rule::SomeF, Rule::NoT, Rule::EveryT, Rule::AndF];
    pub const CLOSURE: [Rule; 4] = [Rule::Bot, Rule::Subs, Rule::VerbParticle, Rule::Disj];

    pub const ALL: [Rule; 19] = [
        Rule::Init,
        Rule::AbstPull,
        Rule::ArgPush,
        Rule::Pss,
        Rule::Aux,
        Rule::VacMod,
        Rule::AdjSubT,
        Rule::AndT,
        Rule::SomeT,
        Rule::EveryF,
        Rule::NoF,
        Rule::SomeF,
        Rule::NoT,
        Rule::EveryT,
        Rule::AndF,
        Rule::Bot,
        Rule::Subs,
        Rule::VerbParticle,
        Rule::Disj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Init => "init",
            Rule::AbstPull => "abstPull",
            Rule::ArgPush => "argPush",
            Rule::Pss => "pss",
            Rule::Aux => "aux",
            Rule::VacMod => "vacmod",
            Rule::AdjSubT => "adj⊂T",
            Rule::AndT => "andT",
            Rule::SomeT => "someT",
            Rule::EveryF => "everyF",
            Rule::NoF => "noF",
            Rule::SomeF => "someF",
            Rule::NoT => "noT",
            Rule::EveryT => "everyT",
            Rule::AndF => "andF",
            Rule::Bot => "×⊥",
            Rule::Subs => "≤×",
            Rule::VerbParticle => "×v-pr",
            Rule::Disj => "|×",
        }
    }

    pub fn entity_use(self) -> EntityUse {
        match self {
            Rule::SomeT | Rule::EveryF | Rule::NoF => EntityUse::Fresh,
            Rule::SomeF | Rule::NoT | Rule::EveryT => EntityUse::Existing,
            _ => EntityUse::None,
        }
    }

    pub fn is_closure(self) -> bool {
        Rule::CLOSURE.contains(&self)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Rule, String> {
        Rule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

fn lemma_in(c: &Const, list: &[String]) -> bool {
    list.iter().any(|w| w.eq_ignore_ascii_case(&c.lemma))
}

fn head_in<'a>(t: &'a Term, list: &[String]) -> Option<(&'a Const, Vec<&'a Term>)> {
    let (head, args) = t.head_and_args();
    match head {
        Term::Const(c) if lemma_in(c, list) => Some((c, args)),
        _ => None,
    }
}

/// `τ→τ` up to features.
fn type_preserving(ty: &Ty, cfg: &Config) -> bool {
    ty.as_fun().is_some_and(|(a, r)| cfg.ty_eq(a, r))
}

fn is_np_const(t: &Term, cfg: &Config) -> bool {
    t.as_const().is_some_and(|c| cfg.ty_eq(&c.ty, &Ty::np()))
}

/// Retypes an intransitive passive predicate, with any type-preserving
/// wrappers, to a transitive one.
fn to_transitive(v: &Term, cfg: &Config) -> Option<Term> {
    let tv = Ty::fun(Ty::np(), Ty::vp());
    match v {
        Term::Const(c) if c.ty.is_vp() => Some(Term::Const(Const { ty: tv, ..c.clone() })),
        Term::App(f, b) => {
            let wrapper = f.as_const().filter(|c| type_preserving(&c.ty, cfg))?;
            let f2 = Term::Const(Const { ty: Ty::fun(tv.clone(), tv), ..wrapper.clone() });
            Some(app(f2, to_transitive(b, cfg)?))
        }
        _ => None,
    }
}

/// Child branches produced by a rule, or `None` when it does not apply.
/// `entity` is required by quantifier rules and ignored otherwise.
pub fn expand(rule: Rule, e: &Entry, entity: Option<&Term>, cfg: &Config) -> Option<Vec<Vec<Entry>>> {
    let lex = &cfg.lexicon;
    let one = |entries: Vec<Entry>| Some(vec![entries]);
    let quant = |list: &[String]| -> Option<(Term, Term)> {
        if !e.args.is_empty() {
            return None;
        }
        let (_, args) = head_in(&e.term, list)?;
        match args.as_slice() {
            [a, b] => Some(((*a).clone(), (*b).clone())),
            _ => None,
        }
    };
    let at = |t: &Term, c: &Term, s: Sign| Entry::new(t.clone(), vec![c.clone()], s);
    match rule {
        Rule::AbstPull => match (&e.term, e.args.split_first()) {
            (Term::Abs(x, _, body), Some((b, rest))) => {
                one(vec![Entry::new(substitute(body, x, b), rest.to_vec(), e.sign)])
            }
            _ => None,
        },
        Rule::ArgPush => match &e.term {
            Term::App(f, b) if is_np_const(b, cfg) => {
                if f.head_const().is_some_and(|c| lemma_in(c, &lex.passive_agent)) {
                    return None;
                }
                let mut args = vec![(**b).clone()];
                args.extend(e.args.iter().cloned());
                one(vec![Entry::new((**f).clone(), args, e.sign)])
            }
            _ => None,
        },
        Rule::Pss => {
            let (_, spine) = head_in(&e.term, &lex.passive_agent)?;
            let all: Vec<&Term> = spine.into_iter().chain(e.args.iter()).collect();
            match all.as_slice() {
                [b, v, c] if is_np_const(b, cfg) && is_np_const(c, cfg) => {
                    let v2 = to_transitive(v, cfg)?;
                    one(vec![Entry::new(v2, vec![(*c).clone(), (*b).clone()], e.sign)])
                }
                _ => None,
            }
        }
        Rule::Aux | Rule::VacMod | Rule::AdjSubT => {
            let list = match rule {
                Rule::Aux => &lex.auxiliary,
                Rule::VacMod => &lex.expletive,
                _ => &lex.subsective,
            };
            if rule == Rule::VacMod && !e.args.is_empty() || rule == Rule::AdjSubT && e.sign == Sign::F {
                return None;
            }
            match &e.term {
                Term::App(f, b) => {
                    let c = f.as_const()?;
                    (lemma_in(c, list) && type_preserving(&c.ty, cfg))
                        .then(|| vec![vec![Entry::new((**b).clone(), e.args.clone(), e.sign)]])
                }
                _ => None,
            }
        }
        Rule::AndT | Rule::AndF => {
            let sign = if rule == Rule::AndT { Sign::T } else { Sign::F };
            if e.sign != sign || e.args.len() != 1 {
                return None;
            }
            let (_, spine) = head_in(&e.term, &lex.relative)?;
            let [v, n] = spine.as_slice() else { return None };
            let c = &e.args[0];
            if sign == Sign::T {
                one(vec![at(v, c, sign), at(n, c, sign)])
            } else {
                Some(vec![vec![at(v, c, sign)], vec![at(n, c, sign)]])
            }
        }
        Rule::SomeT | Rule::SomeF | Rule::EveryT | Rule::EveryF | Rule::NoT | Rule::NoF => {
            let (list, sign) = match rule {
                Rule::SomeT => (&lex.existential, Sign::T),
                Rule::SomeF => (&lex.existential, Sign::F),
                Rule::EveryT => (&lex.universal, Sign::T),
                Rule::EveryF => (&lex.universal, Sign::F),
                Rule::NoT => (&lex.negative, Sign::T),
                _ => (&lex.negative, Sign::F),
            };
            if e.sign != sign {
                return None;
            }
            let (a, b) = quant(list)?;
            let c = entity?;
            Some(match rule {
                Rule::SomeT | Rule::NoF => vec![vec![at(&a, c, Sign::T), at(&b, c, Sign::T)]],
                Rule::SomeF | Rule::NoT => vec![vec![at(&a, c, Sign::F)], vec![at(&b, c, Sign::F)]],
                Rule::EveryT => vec![vec![at(&a, c, Sign::F)], vec![at(&b, c, Sign::T)]],
                _ => vec![vec![at(&a, c, Sign::T), at(&b, c, Sign::F)]],
            })
        }
        Rule::Init | Rule::Bot | Rule::Subs | Rule::VerbParticle | Rule::Disj => None,
    }
}

fn unit(t: &Term) -> Option<LexUnit> {
    LexUnit::from_term(t)
}

/// `a` entails `b` as predicates: α-equal, or lexically related.
fn infers(a: &Term, b: &Term, kb: &Kb) -> bool {
    if a == b {
        return true;
    }
    match (unit(a), unit(b)) {
        (Some(ua), Some(ub)) => kb.infers(&ua, &ub),
        _ => false,
    }
}

/// `v r` against `l` where `l` is the particle verb `r+v`.
fn particle_match(vr: &Entry, l: &Entry, kb: &Kb, cfg: &Config) -> bool {
    if vr.sign == l.sign || vr.args != l.args {
        return false;
    }
    let Term::App(v, r) = &vr.term else { return false };
    let (Some(v), Some(r), Some(lc)) = (v.as_const(), r.as_const(), l.term.as_const()) else { return false };
    if !cfg.ty_eq(&r.ty, &Ty::pr()) {
        return false;
    }
    let joined = LexUnit::new(&format!("{}{}", r.lemma, v.lemma), Some(PosClass::Verb));
    let lu = LexUnit::new(&lc.lemma, Some(PosClass::Verb));
    if kb.flags(&joined, &lu).synonym.is_some() {
        return true;
    }
    let Some(rest) = lc.lemma.strip_prefix(r.lemma.as_str()).filter(|s| !s.is_empty()) else { return false };
    let a = LexUnit::new(&v.lemma, Some(PosClass::Verb));
    let b = LexUnit::new(rest, Some(PosClass::Verb));
    match vr.sign {
        Sign::T => kb.infers(&a, &b),
        Sign::F => kb.infers(&b, &a),
    }
}

/// Checks a closure rule on its antecedents, in the order they are
/// recorded in proofs.
pub fn closes(rule: Rule, ante: &[&Entry], kb: &Kb, cfg: &Config) -> bool {
    match (rule, ante) {
        (Rule::Bot, [e]) => {
            e.sign == Sign::F
                && e.args.len() == 1
                && e.term.as_const().is_some_and(|c| lemma_in(c, &cfg.lexicon.existence) && c.ty.is_vp())
        }
        (Rule::Subs, [t, f]) => {
            t.sign == Sign::T && f.sign == Sign::F && t.args == f.args && infers(&t.term, &f.term, kb)
        }
        (Rule::VerbParticle, [vr, l]) => particle_match(vr, l, kb, cfg),
        (Rule::Disj, [a, b]) => {
            a.sign == Sign::T
                && b.sign == Sign::T
                && a.args == b.args
                && match (unit(&a.term), unit(&b.term)) {
                    (Some(ua), Some(ub)) => kb.disjoint(&ua, &ub) || kb.disjoint(&ub, &ua),
                    _ => false,
                }
        }
        _ => false,
    }
}

/// A closure between `new` and an earlier entry `old`, with antecedents in
/// recording order (true before false for `≤×`, the particle entry first
/// for `×v-pr`).
pub fn find_closure(
    new: usize,
    old: usize,
    entries: (&Entry, &Entry),
    kb: &Kb,
    cfg: &Config,
) -> Option<(Rule, Vec<usize>)> {
    let (en, eo) = entries;
    for rule in Rule::CLOSURE {
        if rule == Rule::Bot || !cfg.rule_enabled(rule.name()) {
            continue;
        }
        for (ids, pair) in [([old, new], [eo, en]), ([new, old], [en, eo])] {
            if closes(rule, &pair, kb, cfg) {
                return Some((rule, ids.to_vec()));
            }
        }
    }
    None
}
