//! Random mini-fragment problems and a finite-model oracle for them.
#![allow(dead_code)]

pub mod terms;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use nltab::kb::{parse_learned, Kb, LearnedSet};
use nltab::lambda::{apps, constant, lam, var, Term, Ty};

pub const NOUNS: [&str; 6] = ["hond", "kat", "dier", "man", "vrouw", "kind"];
pub const INTRANSITIVE: [&str; 2] = ["rennen", "bewegen"];
pub const TRANSITIVE: [&str; 2] = ["zien", "kussen"];
pub const QUANTIFIERS: [&str; 3] = ["een", "alle", "geen"];

pub const RELATIONS: &str = "⊑ hond dier\n⊑ kat dier\n| hond kat\n| man vrouw\n⊑ rennen bewegen\n";

pub fn relations() -> LearnedSet {
    parse_learned(RELATIONS).unwrap()
}

pub fn kb() -> Kb {
    Kb::empty().with_learned(relations())
}

/// A mini-fragment sentence.
#[derive(Clone, Debug, PartialEq)]
pub enum Sentence {
    /// `Q N V`
    Intransitive { q: &'static str, n: &'static str, v: &'static str },
    /// `Q1 N1 (λx. Q2 N2 (λy. V y x))`: some/every/no N1 Vs Q2 N2.
    Transitive { q1: &'static str, n1: &'static str, v: &'static str, q2: &'static str, n2: &'static str },
}

fn quant(q: &str) -> Term {
    constant(q, "DT", Ty::quantifier())
}

fn noun(n: &str) -> Term {
    constant(n, "NN", Ty::n())
}

impl Sentence {
    pub fn term(&self) -> Term {
        match *self {
            Sentence::Intransitive { q, n, v } => apps(quant(q), [noun(n), constant(v, "VB", Ty::vp())]),
            Sentence::Transitive { q1, n1, v, q2, n2 } => {
                let verb = constant(v, "VB", Ty::fun(Ty::np(), Ty::vp()));
                let inner = lam("y", Ty::np(), apps(verb, [var("y"), var("x")]));
                let scope = lam("x", Ty::np(), apps(quant(q2), [noun(n2), inner]));
                apps(quant(q1), [noun(n1), scope])
            }
        }
    }

    pub fn text(&self) -> String {
        match self {
            Sentence::Intransitive { q, n, v } => format!("{q} {n} {v}"),
            Sentence::Transitive { q1, n1, v, q2, n2 } => format!("{q1} {n1} {v} {q2} {n2}"),
        }
    }
}

fn pick<T: Copy>(rng: &mut impl Rng, xs: &[T]) -> T {
    *xs.choose(rng).unwrap()
}

pub fn random_sentence(rng: &mut impl Rng) -> Sentence {
    if rng.gen_bool(0.5) {
        Sentence::Intransitive { q: pick(rng, &QUANTIFIERS), n: pick(rng, &NOUNS), v: pick(rng, &INTRANSITIVE) }
    } else {
        Sentence::Transitive {
            q1: pick(rng, &QUANTIFIERS),
            n1: pick(rng, &NOUNS),
            v: pick(rng, &TRANSITIVE),
            q2: pick(rng, &QUANTIFIERS),
            n2: pick(rng, &NOUNS),
        }
    }
}

/// One random change to a sentence, to get related pairs.
pub fn mutate(rng: &mut impl Rng, s: &Sentence) -> Sentence {
    let mut s = s.clone();
    match &mut s {
        Sentence::Intransitive { q, n, v } => match rng.gen_range(0..3) {
            0 => *q = pick(rng, &QUANTIFIERS),
            1 => *n = pick(rng, &NOUNS),
            _ => *v = pick(rng, &INTRANSITIVE),
        },
        Sentence::Transitive { q1, n1, q2, n2, .. } => match rng.gen_range(0..4) {
            0 => *q1 = pick(rng, &QUANTIFIERS),
            1 => *n1 = pick(rng, &NOUNS),
            2 => *q2 = pick(rng, &QUANTIFIERS),
            _ => *n2 = pick(rng, &NOUNS),
        },
    }
    s
}

pub fn random_pair(rng: &mut impl Rng) -> (Sentence, Sentence) {
    let p = random_sentence(rng);
    let h = match rng.gen_range(0..3) {
        0 => random_sentence(rng),
        1 => mutate(rng, &p),
        _ => {
            let once = mutate(rng, &p);
            mutate(rng, &once)
        }
    };
    (p, h)
}

/// Ground propositional formulas.
#[derive(Clone, Debug)]
pub enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

#[derive(Default)]
pub struct Grounder {
    atoms: BTreeMap<(String, Vec<usize>), usize>,
}

impl Grounder {
    pub fn atom(&mut self, pred: &str, args: Vec<usize>) -> Prop {
        let n = self.atoms.len();
        Prop::Atom(*self.atoms.entry((pred.to_string(), args)).or_insert(n))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    fn quantify(
        &mut self,
        q: &str,
        dom: usize,
        mut restr: impl FnMut(&mut Self, usize) -> Prop,
        mut body: impl FnMut(&mut Self, usize) -> Prop,
    ) -> Prop {
        let cases: Vec<(Prop, Prop)> = (0..dom).map(|c| (restr(self, c), body(self, c))).collect();
        match q {
            "een" => Prop::Or(cases.into_iter().map(|(r, b)| Prop::And(vec![r, b])).collect()),
            "alle" => Prop::And(cases.into_iter().map(|(r, b)| Prop::Or(vec![Prop::Not(Box::new(r)), b])).collect()),
            "geen" => Prop::And(cases.into_iter().map(|(r, b)| Prop::Not(Box::new(Prop::And(vec![r, b])))).collect()),
            other => panic!("unknown quantifier {other}"),
        }
    }

    pub fn sentence(&mut self, s: &Sentence, dom: usize) -> Prop {
        match *s {
            Sentence::Intransitive { q, n, v } => {
                self.quantify(q, dom, |g, c| g.atom(n, vec![c]), |g, c| g.atom(v, vec![c]))
            }
            Sentence::Transitive { q1, n1, v, q2, n2 } => self.quantify(
                q1,
                dom,
                |g, x| g.atom(n1, vec![x]),
                |g, x| g.quantify(q2, dom, |g, y| g.atom(n2, vec![y]), |g, y| g.atom(v, vec![y, x])),
            ),
        }
    }

    /// Meaning postulates for the lexical relations, restricted to the
    /// predicates already grounded. A predicate that occurs in neither
    /// sentence can always be interpreted consistently with the postulates
    /// (everywhere true if it only occurs on the right of ⊑, everywhere
    /// false otherwise), so leaving it out changes no verdict.
    pub fn postulates(&mut self, dom: usize) -> Prop {
        let used: Vec<String> = self.atoms.keys().map(|(p, _)| p.clone()).collect();
        let mut out = Vec::new();
        for rel in relations().iter() {
            if !used.contains(&rel.lhs) || !used.contains(&rel.rhs) {
                continue;
            }
            for c in 0..dom {
                let a = self.atom(&rel.lhs, vec![c]);
                let b = self.atom(&rel.rhs, vec![c]);
                out.push(match rel.kind {
                    nltab::kb::RelKind::Subsumes => Prop::Or(vec![Prop::Not(Box::new(a)), b]),
                    nltab::kb::RelKind::Disjoint => Prop::Not(Box::new(Prop::And(vec![a, b]))),
                    nltab::kb::RelKind::Synonym => Prop::And(vec![
                        Prop::Or(vec![Prop::Not(Box::new(a.clone())), b.clone()]),
                        Prop::Or(vec![a, Prop::Not(Box::new(b))]),
                    ]),
                });
            }
        }
        Prop::And(out)
    }
}

/// Three-valued evaluation under a partial assignment.
fn eval(p: &Prop, asg: &[Option<bool>]) -> Option<bool> {
    match p {
        Prop::Atom(i) => asg[*i],
        Prop::Not(q) => eval(q, asg).map(|b| !b),
        Prop::And(qs) => {
            let mut unknown = false;
            for q in qs {
                match eval(q, asg) {
                    Some(false) => return Some(false),
                    None => unknown = true,
                    _ => {}
                }
            }
            if unknown {
                None
            } else {
                Some(true)
            }
        }
        Prop::Or(qs) => {
            let mut unknown = false;
            for q in qs {
                match eval(q, asg) {
                    Some(true) => return Some(true),
                    None => unknown = true,
                    _ => {}
                }
            }
            if unknown {
                None
            } else {
                Some(false)
            }
        }
    }
}

/// Splitting search with early cut-off on partial assignments.
pub fn satisfiable(p: &Prop, atoms: usize) -> bool {
    fn go(p: &Prop, asg: &mut Vec<Option<bool>>, next: usize) -> bool {
        match eval(p, asg) {
            Some(b) => b,
            None => {
                let i = (next..asg.len()).find(|&i| asg[i].is_none()).expect("undetermined with all atoms set");
                for v in [true, false] {
                    asg[i] = Some(v);
                    if go(p, asg, i + 1) {
                        asg[i] = None;
                        return true;
                    }
                }
                asg[i] = None;
                false
            }
        }
    }
    go(p, &mut vec![None; atoms], 0)
}

/// A model with at most three entities of the postulates and both
/// formulas built by `f`, if any.
fn has_model(f: impl Fn(&mut Grounder, usize) -> Prop) -> bool {
    (1..=3).any(|dom| {
        let mut g = Grounder::default();
        let body = f(&mut g, dom);
        let post = g.postulates(dom);
        satisfiable(&Prop::And(vec![post, body]), g.len())
    })
}

/// Whether a countermodel refutes `p ⊨ h` within three entities.
pub fn entailment_countermodel(p: &Sentence, h: &Sentence) -> bool {
    has_model(|g, dom| {
        let ps = g.sentence(p, dom);
        let hs = g.sentence(h, dom);
        Prop::And(vec![ps, Prop::Not(Box::new(hs))])
    })
}

/// Whether `p` and `h` can both hold within three entities.
pub fn consistent(p: &Sentence, h: &Sentence) -> bool {
    has_model(|g, dom| {
        let ps = g.sentence(p, dom);
        let hs = g.sentence(h, dom);
        Prop::And(vec![ps, hs])
    })
}
