//! Types shared by the linear syntactic calculus and the simply-typed
//! semantic calculus.

use std::fmt;
use std::str::FromStr;

use super::TypeError;

/// A type: an atom with an optional feature, or a function type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Atom { name: String, feature: Option<String> },
    Fun(Box<Ty>, Box<Ty>),
}

/// How atom features are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FeatureMode {
    /// An absent feature matches any feature.
    #[default]
    Lenient,
    /// Features must be identical.
    Strict,
}

/// Placeholder atom for the polymorphic coordinator type.
pub const SCHEMA_ATOM: &str = "α";

impl Ty {
    pub fn atom(name: &str) -> Ty {
        Ty::Atom { name: name.to_string(), feature: None }
    }

    pub fn with_feature(name: &str, feature: &str) -> Ty {
        Ty::Atom { name: name.to_string(), feature: Some(feature.to_string()) }
    }

    pub fn fun(arg: Ty, res: Ty) -> Ty {
        Ty::Fun(Box::new(arg), Box::new(res))
    }

    /// Right-nested function type `a1 -> a2 -> ... -> res`.
    pub fn funs<I: IntoIterator<Item = Ty>>(args: I, res: Ty) -> Ty
    where
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter().rev().fold(res, |acc, a| Ty::fun(a, acc))
    }

    pub fn n() -> Ty {
        Ty::atom("n")
    }

    pub fn np() -> Ty {
        Ty::atom("np")
    }

    pub fn s() -> Ty {
        Ty::atom("s")
    }

    pub fn pp() -> Ty {
        Ty::atom("pp")
    }

    pub fn pr() -> Ty {
        Ty::atom("pr")
    }

    /// `np -> s`
    pub fn vp() -> Ty {
        Ty::fun(Ty::np(), Ty::s())
    }

    /// Raised quantifier type `n -> (np -> s) -> s`.
    pub fn quantifier() -> Ty {
        Ty::fun(Ty::n(), Ty::fun(Ty::vp(), Ty::s()))
    }

    pub fn is_atom(&self, atom: &str) -> bool {
        matches!(self, Ty::Atom { name, .. } if name == atom)
    }

    /// Any sentence type, regardless of feature.
    pub fn is_sentence(&self) -> bool {
        self.is_atom("s")
    }

    /// `np -> s_x` for any feature x.
    pub fn is_vp(&self) -> bool {
        match self {
            Ty::Fun(a, r) => a.is_atom("np") && r.is_sentence(),
            _ => false,
        }
    }

    pub fn as_fun(&self) -> Option<(&Ty, &Ty)> {
        match self {
            Ty::Fun(a, r) => Some((a, r)),
            Ty::Atom { .. } => None,
        }
    }

    /// Argument types and final result of a curried type.
    pub fn uncurry(&self) -> (Vec<&Ty>, &Ty) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Ty::Fun(a, r) = cur {
            args.push(a.as_ref());
            cur = r;
        }
        (args, cur)
    }

    pub fn arity(&self) -> usize {
        self.uncurry().0.len()
    }

    /// Drops `k` leading argument types.
    pub fn result_after(&self, k: usize) -> Option<&Ty> {
        let mut cur = self;
        for _ in 0..k {
            cur = cur.as_fun()?.1;
        }
        Some(cur)
    }

    /// Replaces the type reached after `k` arguments with `f(old)`.
    pub fn map_result_after(&self, k: usize, f: &dyn Fn(&Ty) -> Ty) -> Option<Ty> {
        if k == 0 {
            return Some(f(self));
        }
        let (a, r) = self.as_fun()?;
        Some(Ty::fun(a.clone(), r.map_result_after(k - 1, f)?))
    }

    /// Replaces the `k`-th argument type (0-based).
    pub fn replace_arg(&self, k: usize, new_arg: Ty) -> Option<Ty> {
        let (a, r) = self.as_fun()?;
        if k == 0 {
            Some(Ty::fun(new_arg, r.clone()))
        } else {
            Some(Ty::fun(a.clone(), r.replace_arg(k - 1, new_arg)?))
        }
    }

    pub fn unifies(&self, other: &Ty, mode: FeatureMode) -> bool {
        match (self, other) {
            (Ty::Atom { name: n1, feature: f1 }, Ty::Atom { name: n2, feature: f2 }) => {
                n1 == n2
                    && match (f1, f2, mode) {
                        (Some(a), Some(b), _) => a == b,
                        (None, None, _) => true,
                        (_, _, FeatureMode::Lenient) => true,
                        (_, _, FeatureMode::Strict) => false,
                    }
            }
            (Ty::Fun(a1, r1), Ty::Fun(a2, r2)) => a1.unifies(a2, mode) && r1.unifies(r2, mode),
            _ => false,
        }
    }

    /// Least specific common type: features are kept only where both agree,
    /// dropped where one side lacks them. `None` on a structural clash or on
    /// two different present features.
    pub fn generalize(&self, other: &Ty) -> Option<Ty> {
        match (self, other) {
            (Ty::Atom { name: n1, feature: f1 }, Ty::Atom { name: n2, feature: f2 }) => {
                if n1 != n2 {
                    return None;
                }
                let feature = match (f1, f2) {
                    (Some(a), Some(b)) if a == b => Some(a.clone()),
                    (Some(_), Some(_)) => return None,
                    _ => None,
                };
                Some(Ty::Atom { name: n1.clone(), feature })
            }
            (Ty::Fun(a1, r1), Ty::Fun(a2, r2)) => Some(Ty::fun(a1.generalize(a2)?, r1.generalize(r2)?)),
            _ => None,
        }
    }

    /// Homomorphic image under an atom mapping.
    pub fn try_map_atoms<E, F>(&self, f: &mut F) -> Result<Ty, E>
    where
        F: FnMut(&str, Option<&str>) -> Result<Ty, E> + ?Sized,
    {
        match self {
            Ty::Atom { name, feature } => f(name, feature.as_deref()),
            Ty::Fun(a, r) => Ok(Ty::fun(a.try_map_atoms(f)?, r.try_map_atoms(f)?)),
        }
    }

    pub fn contains_atom(&self, atom: &str) -> bool {
        match self {
            Ty::Atom { name, .. } => name == atom,
            Ty::Fun(a, r) => a.contains_atom(atom) || r.contains_atom(atom),
        }
    }

    pub fn substitute_atom(&self, atom: &str, by: &Ty) -> Ty {
        match self {
            Ty::Atom { name, .. } if name == atom => by.clone(),
            Ty::Atom { .. } => self.clone(),
            Ty::Fun(a, r) => Ty::fun(a.substitute_atom(atom, by), r.substitute_atom(atom, by)),
        }
    }

    /// The same type with every atom feature removed.
    pub fn erase_features(&self) -> Ty {
        match self {
            Ty::Atom { name, .. } => Ty::atom(name),
            Ty::Fun(a, r) => Ty::fun(a.erase_features(), r.erase_features()),
        }
    }

    pub fn atoms(&self) -> Vec<(&str, Option<&str>)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a str, Option<&'a str>)>) {
        match self {
            Ty::Atom { name, feature } => out.push((name, feature.as_deref())),
            Ty::Fun(a, r) => {
                a.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Atom { name, feature: None } => write!(f, "{name}"),
            Ty::Atom { name, feature: Some(feat) } => write!(f, "{name}:{feat}"),
            Ty::Fun(a, r) => {
                if a.as_fun().is_some() {
                    write!(f, "({a})->{r}")
                } else {
                    write!(f, "{a}->{r}")
                }
            }
        }
    }
}

impl FromStr for Ty {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Ty, TypeError> {
        let mut p = TyParser { src: s, chars: s.char_indices().peekable() };
        let ty = p.ty()?;
        p.skip_ws();
        match p.chars.peek() {
            None => Ok(ty),
            Some(&(i, c)) => Err(TypeError::Syntax(format!("unexpected '{c}' at {i} in type {s:?}"))),
        }
    }
}

struct TyParser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl TyParser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn err(&self, msg: &str) -> TypeError {
        TypeError::Syntax(format!("{msg} in type {:?}", self.src))
    }

    fn ty(&mut self) -> Result<Ty, TypeError> {
        let arg = self.prim()?;
        self.skip_ws();
        if let Some(&(_, '-')) = self.chars.peek() {
            self.chars.next();
            match self.chars.next() {
                Some((_, '>')) => {}
                _ => return Err(self.err("expected '->'")),
            }
            let res = self.ty()?;
            return Ok(Ty::fun(arg, res));
        }
        Ok(arg)
    }

    fn prim(&mut self) -> Result<Ty, TypeError> {
        self.skip_ws();
        if let Some(&(_, '(')) = self.chars.peek() {
            self.chars.next();
            let inner = self.ty()?;
            self.skip_ws();
            return match self.chars.next() {
                Some((_, ')')) => Ok(inner),
                _ => Err(self.err("expected ')'")),
            };
        }
        let name = self.ident()?;
        if let Some(&(_, ':')) = self.chars.peek() {
            self.chars.next();
            let feat = self.ident()?;
            return Ok(Ty::Atom { name, feature: Some(feat) });
        }
        Ok(Ty::Atom { name, feature: None })
    }

    fn ident(&mut self) -> Result<String, TypeError> {
        let mut out = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_alphanumeric() || c == '_' {
                out.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        if out.is_empty() {
            Err(self.err("expected an atom"))
        } else {
            Ok(out)
        }
    }
}

/// Which calculus a type is validated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    Syntactic,
    Semantic,
}

/// The syntactic atom inventory (31 atoms, sentence subtypes counted
/// separately).
pub const SYNTACTIC_ATOMS: [&str; 31] = [
    "np", "n", "s", "s:main", "s:sub", "s:v1", "s:whq", "s:whsub", "s:rel", "pp", "vnw", "vz", "tw", "ahi", "ww",
    "part", "ti", "oti", "ap", "adj", "pron", "bw", "cp", "inf", "ppres", "svan", "let", "vg", "lid", "spec", "tsw",
];

pub const SEMANTIC_ATOMS: [&str; 5] = ["n", "np", "s", "pp", "pr"];

pub const SENTENCE_FEATURES: [&str; 11] = ["dcl", "sub", "b", "pt", "pss", "ng", "to", "adj", "q", "wh", "main"];

impl Calculus {
    pub fn check(&self, ty: &Ty) -> Result<(), TypeError> {
        for (name, feature) in ty.atoms() {
            let known = match self {
                Calculus::Syntactic => {
                    let key = match feature {
                        Some(f) => format!("{name}:{f}"),
                        None => name.to_string(),
                    };
                    SYNTACTIC_ATOMS.contains(&key.as_str())
                }
                Calculus::Semantic => {
                    SEMANTIC_ATOMS.contains(&name)
                        && match feature {
                            None => true,
                            Some(f) => name == "s" && SENTENCE_FEATURES.contains(&f),
                        }
                }
            };
            if !known {
                let shown = match feature {
                    Some(f) => format!("{name}:{f}"),
                    None => name.to_string(),
                };
                return Err(TypeError::UnknownAtom { atom: shown, calculus: *self });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_right_assoc() {
        let t: Ty = "np->np->s:dcl".parse().unwrap();
        assert_eq!(t, Ty::fun(Ty::np(), Ty::fun(Ty::np(), Ty::with_feature("s", "dcl"))));
        let u: Ty = "(np->s)->s".parse().unwrap();
        assert_eq!(u.to_string(), "(np->s)->s");
        assert_eq!(" ( np -> s ) -> s ".parse::<Ty>().unwrap(), u);
    }

    #[test]
    fn parse_errors() {
        assert!("np->".parse::<Ty>().is_err());
        assert!("(np".parse::<Ty>().is_err());
        assert!("np s".parse::<Ty>().is_err());
    }

    #[test]
    fn feature_unification() {
        let s = Ty::s();
        let dcl = Ty::with_feature("s", "dcl");
        let sub = Ty::with_feature("s", "sub");
        assert!(s.unifies(&dcl, FeatureMode::Lenient));
        assert!(dcl.unifies(&s, FeatureMode::Lenient));
        assert!(!dcl.unifies(&sub, FeatureMode::Lenient));
        assert!(!s.unifies(&dcl, FeatureMode::Strict));
        assert!(dcl.unifies(&dcl, FeatureMode::Strict));
    }

    #[test]
    fn generalize_drops_one_sided_features() {
        let dcl = Ty::with_feature("s", "dcl");
        assert_eq!(dcl.generalize(&Ty::s()), Some(Ty::s()));
        assert_eq!(dcl.generalize(&dcl), Some(dcl.clone()));
        assert_eq!(dcl.generalize(&Ty::with_feature("s", "sub")), None);
        assert_eq!(Ty::np().generalize(&Ty::vp()), None);
    }

    #[test]
    fn registries() {
        assert!(Calculus::Semantic.check(&"np->s:dcl".parse().unwrap()).is_ok());
        assert!(Calculus::Semantic.check(&"ww".parse().unwrap()).is_err());
        assert!(Calculus::Semantic.check(&"np:dcl".parse().unwrap()).is_err());
        assert!(Calculus::Syntactic.check(&"ti->part->part".parse().unwrap()).is_ok());
        assert!(Calculus::Syntactic.check(&"s:dcl".parse().unwrap()).is_err());
    }
}
