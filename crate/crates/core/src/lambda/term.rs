//! Lambda terms with typed constants and typed binders.

use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use super::ty::Ty;

/// A lexical constant: lemma (or surface token before lemmatization),
/// part-of-speech tag and type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Const {
    pub lemma: String,
    pub pos: String,
    pub ty: Ty,
}

impl Const {
    pub fn new(lemma: &str, pos: &str, ty: Ty) -> Const {
        Const { lemma: lemma.to_string(), pos: pos.to_string(), ty }
    }
}

/// Terms compare and hash up to renaming of bound variables.
#[derive(Clone, Debug)]
pub enum Term {
    Var(String),
    Const(Const),
    App(Box<Term>, Box<Term>),
    Abs(String, Ty, Box<Term>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn constant(lemma: &str, pos: &str, ty: Ty) -> Term {
    Term::Const(Const::new(lemma, pos, ty))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Box::new(f), Box::new(a))
}

pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
    args.into_iter().fold(f, app)
}

pub fn lam(x: &str, ty: Ty, body: Term) -> Term {
    Term::Abs(x.to_string(), ty, Box::new(body))
}

impl Term {
    pub fn as_const(&self) -> Option<&Const> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Head and arguments of a spine `h a1 ... an`.
    pub fn head_and_args(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn head_const(&self) -> Option<&Const> {
        self.head_and_args().0.as_const()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::Const(_) => false,
            Term::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
            Term::Abs(y, _, b) => y != x && b.occurs_free(x),
        }
    }

    /// Every variable name used anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(f, a) => {
                f.all_var_names(out);
                a.all_var_names(out);
            }
            Term::Abs(x, _, b) => {
                out.insert(x.clone());
                b.all_var_names(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, _, b) => 1 + b.size(),
        }
    }

    pub fn constants(&self) -> Vec<&Const> {
        let mut out = Vec::new();
        self.visit_consts(&mut |c| out.push(c));
        out
    }

    pub fn visit_consts<'a>(&'a self, f: &mut dyn FnMut(&'a Const)) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => f(c),
            Term::App(g, a) => {
                g.visit_consts(f);
                a.visit_consts(f);
            }
            Term::Abs(_, _, b) => b.visit_consts(f),
        }
    }

    /// Rebuilds the term with every constant passed through `f`.
    pub fn map_consts(&self, f: &mut dyn FnMut(&Const) -> Const) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Const(c) => Term::Const(f(c)),
            Term::App(g, a) => app(g.map_consts(f), a.map_consts(f)),
            Term::Abs(x, ty, b) => lam(x, ty.clone(), b.map_consts(f)),
        }
    }

    pub fn try_map_consts<E>(&self, f: &mut dyn FnMut(&Const) -> Result<Const, E>) -> Result<Term, E> {
        Ok(match self {
            Term::Var(_) => self.clone(),
            Term::Const(c) => Term::Const(f(c)?),
            Term::App(g, a) => app(g.try_map_consts(f)?, a.try_map_consts(f)?),
            Term::Abs(x, ty, b) => lam(x, ty.clone(), b.try_map_consts(f)?),
        })
    }

    /// α-equivalence with a custom comparison on constants.
    pub fn alpha_eq_with(&self, other: &Term, const_eq: &dyn Fn(&Const, &Const) -> bool) -> bool {
        fn go(
            a: &Term,
            b: &Term,
            env_a: &mut Vec<String>,
            env_b: &mut Vec<String>,
            ce: &dyn Fn(&Const, &Const) -> bool,
        ) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    let ix = env_a.iter().rposition(|v| v == x);
                    let iy = env_b.iter().rposition(|v| v == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => env_a.len() - i == env_b.len() - j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Const(c), Term::Const(d)) => ce(c, d),
                (Term::App(f1, a1), Term::App(f2, a2)) => go(f1, f2, env_a, env_b, ce) && go(a1, a2, env_a, env_b, ce),
                (Term::Abs(x, t1, b1), Term::Abs(y, t2, b2)) => {
                    if t1 != t2 {
                        return false;
                    }
                    env_a.push(x.clone());
                    env_b.push(y.clone());
                    let r = go(b1, b2, env_a, env_b, ce);
                    env_a.pop();
                    env_b.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new(), const_eq)
    }

    fn hash_db<H: Hasher>(&self, env: &mut Vec<String>, state: &mut H) {
        match self {
            Term::Var(x) => match env.iter().rposition(|v| v == x) {
                Some(i) => {
                    0u8.hash(state);
                    (env.len() - i).hash(state);
                }
                None => {
                    1u8.hash(state);
                    x.hash(state);
                }
            },
            Term::Const(c) => {
                2u8.hash(state);
                c.hash(state);
            }
            Term::App(f, a) => {
                3u8.hash(state);
                f.hash_db(env, state);
                a.hash_db(env, state);
            }
            Term::Abs(x, ty, b) => {
                4u8.hash(state);
                ty.hash(state);
                env.push(x.clone());
                b.hash_db(env, state);
                env.pop();
            }
        }
    }

    /// Renames bound variables to `x0`, `x1`, ... in binding order, giving
    /// a canonical representative of the α-class.
    pub fn canonical(&self) -> Term {
        fn go(t: &Term, map: &mut HashMap<String, Vec<String>>, next: &mut usize, avoid: &BTreeSet<String>) -> Term {
            match t {
                Term::Var(x) => match map.get(x).and_then(|v| v.last()) {
                    Some(n) => Term::Var(n.clone()),
                    None => t.clone(),
                },
                Term::Const(_) => t.clone(),
                Term::App(f, a) => app(go(f, map, next, avoid), go(a, map, next, avoid)),
                Term::Abs(x, ty, b) => {
                    let mut name = format!("x{next}");
                    while avoid.contains(&name) {
                        *next += 1;
                        name = format!("x{next}");
                    }
                    *next += 1;
                    map.entry(x.clone()).or_default().push(name.clone());
                    let body = go(b, map, next, avoid);
                    map.get_mut(x).unwrap().pop();
                    lam(&name, ty.clone(), body)
                }
            }
        }
        let avoid = self.free_vars();
        go(self, &mut HashMap::new(), &mut 0, &avoid)
    }
}

/// Step from a node to one of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Fun,
    Arg,
    Body,
}

impl Term {
    pub fn child(&self, step: Step) -> Option<&Term> {
        match (self, step) {
            (Term::App(f, _), Step::Fun) => Some(f),
            (Term::App(_, a), Step::Arg) => Some(a),
            (Term::Abs(_, _, b), Step::Body) => Some(b),
            _ => None,
        }
    }

    pub fn at(&self, path: &[Step]) -> Option<&Term> {
        path.iter().try_fold(self, |t, s| t.child(*s))
    }

    /// Copy of `self` with the node at `path` replaced.
    pub fn replace_at(&self, path: &[Step], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((s, rest)) => match (self, s) {
                (Term::App(f, a), Step::Fun) => app(f.replace_at(rest, new), (**a).clone()),
                (Term::App(f, a), Step::Arg) => app((**f).clone(), a.replace_at(rest, new)),
                (Term::Abs(x, ty, b), Step::Body) => lam(x, ty.clone(), b.replace_at(rest, new)),
                _ => panic!("invalid path step {s:?}"),
            },
        }
    }

    /// Binders in scope at `path`, outermost first.
    pub fn binders_at(&self, path: &[Step]) -> Vec<(String, Ty)> {
        let mut out = Vec::new();
        let mut cur = self;
        for s in path {
            if let Term::Abs(x, ty, _) = cur {
                out.push((x.clone(), ty.clone()));
            }
            cur = cur.child(*s).expect("valid path");
        }
        out
    }

    /// Pre-order (node, fun, arg, body) listing of all paths.
    pub fn paths(&self) -> Vec<Vec<Step>> {
        fn go(t: &Term, cur: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
            out.push(cur.clone());
            match t {
                Term::App(f, a) => {
                    cur.push(Step::Fun);
                    go(f, cur, out);
                    cur.pop();
                    cur.push(Step::Arg);
                    go(a, cur, out);
                    cur.pop();
                }
                Term::Abs(_, _, b) => {
                    cur.push(Step::Body);
                    go(b, cur, out);
                    cur.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.alpha_eq_with(other, &|a, b| a == b)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.hash_db(&mut Vec::new(), state);
    }
}
