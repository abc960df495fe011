use std::collections::{BTreeSet, HashMap};

use super::term::{app, lam, Term};
use super::ty::{FeatureMode, Ty};
use super::TypeError;

/// Typing context: variable name to type.
pub type Ctx = HashMap<String, Ty>;

/// Type of `t` under `ctx` with lenient feature matching.
pub fn type_of(t: &Term, ctx: &Ctx) -> Result<Ty, TypeError> {
    type_of_with(t, ctx, FeatureMode::Lenient)
}

pub fn type_of_with(t: &Term, ctx: &Ctx, mode: FeatureMode) -> Result<Ty, TypeError> {
    let mut scope: Vec<(&str, &Ty)> = Vec::new();
    infer(t, ctx, &mut scope, mode)
}

fn infer<'a>(t: &'a Term, ctx: &Ctx, scope: &mut Vec<(&'a str, &'a Ty)>, mode: FeatureMode) -> Result<Ty, TypeError> {
    match t {
        Term::Var(x) => {
            if let Some((_, ty)) = scope.iter().rev().find(|(n, _)| n == x) {
                return Ok((*ty).clone());
            }
            ctx.get(x).cloned().ok_or_else(|| TypeError::UnboundVariable(x.clone()))
        }
        Term::Const(c) => Ok(c.ty.clone()),
        Term::App(f, a) => {
            let fty = infer(f, ctx, scope, mode)?;
            let aty = infer(a, ctx, scope, mode)?;
            match fty {
                Ty::Fun(dom, res) => {
                    if aty.unifies(&dom, mode) {
                        Ok(*res)
                    } else {
                        Err(TypeError::Mismatch { term: t.to_string(), expected: *dom, found: aty })
                    }
                }
                other => Err(TypeError::NotAFunction { term: f.to_string(), ty: other }),
            }
        }
        Term::Abs(x, ty, b) => {
            scope.push((x, ty));
            let r = infer(b, ctx, scope, mode);
            scope.pop();
            Ok(Ty::fun(ty.clone(), r?))
        }
    }
}

/// True iff every abstraction binds a variable occurring exactly once in its
/// body.
pub fn check_linear(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::App(f, a) => check_linear(f) && check_linear(a),
        Term::Abs(x, _, b) => count_free(b, x) == 1 && check_linear(b),
    }
}

fn count_free(t: &Term, x: &str) -> usize {
    match t {
        Term::Var(y) => usize::from(x == y),
        Term::Const(_) => 0,
        Term::App(f, a) => count_free(f, x) + count_free(a, x),
        Term::Abs(y, _, b) => {
            if y == x {
                0
            } else {
                count_free(b, x)
            }
        }
    }
}

/// Smallest `base`, `base1`, `base2`, ... not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(stem) {
        return stem.to_string();
    }
    (1..).map(|i| format!("{stem}{i}")).find(|n| !avoid.contains(n)).unwrap()
}

/// Capture-avoiding substitution `t[x := s]`.
pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    let fv = s.free_vars();
    subst(t, x, s, &fv)
}

fn subst(t: &Term, x: &str, s: &Term, fv_s: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => app(subst(f, x, s, fv_s), subst(a, x, s, fv_s)),
        Term::Abs(y, ty, b) => {
            if y == x || !b.occurs_free(x) {
                return t.clone();
            }
            if fv_s.contains(y) {
                let mut avoid = fv_s.clone();
                b.all_var_names(&mut avoid);
                avoid.insert(x.to_string());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst(b, y, &Term::Var(y2.clone()), &BTreeSet::from([y2.clone()]));
                lam(&y2, ty.clone(), subst(&renamed, x, s, fv_s))
            } else {
                lam(y, ty.clone(), subst(b, x, s, fv_s))
            }
        }
    }
}

/// Substitution that first checks `s` against the declared type of `x`.
pub fn substitute_checked(t: &Term, x: &str, x_ty: &Ty, s: &Term, ctx: &Ctx) -> Result<Term, TypeError> {
    let sty = type_of(s, ctx)?;
    if !sty.unifies(x_ty, FeatureMode::Lenient) {
        return Err(TypeError::Mismatch { term: s.to_string(), expected: x_ty.clone(), found: sty });
    }
    Ok(substitute(t, x, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::term::{apps, constant, var};

    fn c(lemma: &str, ty: &str) -> Term {
        constant(lemma, "X", ty.parse().unwrap())
    }

    #[test]
    fn application_typing() {
        let t = app(c("zwemmen", "np->s"), c("eenden", "np"));
        assert_eq!(type_of(&t, &Ctx::new()).unwrap(), Ty::s());
        let id = lam("x", Ty::np(), var("x"));
        assert_eq!(type_of(&id, &Ctx::new()).unwrap(), "np->np".parse().unwrap());
    }

    #[test]
    fn typing_errors() {
        let bad = app(c("zwemmen", "np->s"), c("zwemmen", "np->s"));
        assert!(matches!(type_of(&bad, &Ctx::new()), Err(TypeError::Mismatch { .. })));
        assert!(matches!(type_of(&var("q"), &Ctx::new()), Err(TypeError::UnboundVariable(_))));
        let nf = app(c("a", "np"), c("b", "np"));
        assert!(matches!(type_of(&nf, &Ctx::new()), Err(TypeError::NotAFunction { .. })));
    }

    #[test]
    fn feature_modes() {
        let t = app(c("f", "s:dcl->s"), c("p", "s"));
        assert!(type_of_with(&t, &Ctx::new(), FeatureMode::Lenient).is_ok());
        assert!(type_of_with(&t, &Ctx::new(), FeatureMode::Strict).is_err());
    }

    #[test]
    fn linearity() {
        let f = c("f", "np->np->s");
        assert!(!check_linear(&lam("x", Ty::np(), apps(f.clone(), [var("x"), var("x")]))));
        assert!(!check_linear(&lam("x", Ty::np(), c("bessen", "np"))));
        assert!(check_linear(&lam("x", Ty::np(), app(c("g", "np->s"), var("x")))));
    }

    #[test]
    fn substitution_cases() {
        let f = c("f", "np->s");
        assert_eq!(substitute(&app(f.clone(), var("x")), "x", &c("c", "np")), app(f, c("c", "np")));
        let t = lam("y", Ty::np(), var("x"));
        let r = substitute(&t, "x", &var("y"));
        match &r {
            Term::Abs(y2, _, body) => {
                assert_ne!(y2, "y");
                assert_eq!(**body, var("y"));
            }
            other => panic!("unexpected {other}"),
        }
        assert_eq!(substitute(&var("z"), "x", &c("c", "np")), var("z"));
    }

    #[test]
    fn fresh_names_are_deterministic() {
        let avoid: BTreeSet<String> = ["y".to_string(), "y1".to_string()].into();
        assert_eq!(fresh_name("y", &avoid), "y2");
        assert_eq!(fresh_name("y1", &BTreeSet::new()), "y");
    }

    #[test]
    fn checked_substitution_rejects_mismatch() {
        let t = app(c("f", "np->s"), var("x"));
        let r = substitute_checked(&t, "x", &Ty::np(), &c("g", "np->s"), &Ctx::new());
        assert!(r.is_err());
    }
}
