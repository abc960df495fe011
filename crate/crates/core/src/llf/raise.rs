//! Raising `n→np` determiners to generalized quantifiers.

use std::collections::BTreeSet;

use super::LlfError;
use crate::lambda::{app, fresh_name, lam, type_of, Const, Ctx, Step, Term, Ty};

fn n_to_np() -> Ty {
    Ty::fun(Ty::n(), Ty::np())
}

/// `D N` with `D: n→np`.
fn is_candidate(t: &Term) -> bool {
    match t {
        Term::App(d, _) => d.as_const().is_some_and(|c| c.ty.erase_features() == n_to_np()),
        _ => false,
    }
}

/// Whether a candidate occurs strictly inside `t`, not under a binder.
fn contains_candidate(t: &Term) -> bool {
    match t {
        Term::App(f, a) => is_candidate(f) || is_candidate(a) || contains_candidate(f) || contains_candidate(a),
        _ => false,
    }
}

/// Right-to-left pre-order search for an innermost candidate outside any
/// abstraction.
fn find_candidate(t: &Term, path: &mut Vec<Step>) -> bool {
    let Term::App(f, a) = t else { return false };
    if is_candidate(t) && !contains_candidate(t) {
        return true;
    }
    for (step, child) in [(Step::Arg, a), (Step::Fun, f)] {
        path.push(step);
        if find_candidate(child, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn avoid_set(t: &Term, ctx: &Ctx) -> BTreeSet<String> {
    let mut avoid: BTreeSet<String> = ctx.keys().cloned().collect();
    t.all_var_names(&mut avoid);
    avoid
}

fn raise_at_s(t: &Term, ctx: &Ctx) -> Term {
    let mut path = Vec::new();
    if !find_candidate(t, &mut path) {
        return t.clone();
    }
    let Some(Term::App(d, noun)) = t.at(&path) else { unreachable!("candidate is an application") };
    let (d, noun) = (d.as_const().expect("candidate head").clone(), (**noun).clone());
    let v = fresh_name("x", &avoid_set(t, ctx));
    let mut inner_ctx = ctx.clone();
    inner_ctx.insert(v.clone(), Ty::np());
    let body = raise_at_s(&t.replace_at(&path, Term::Var(v.clone())), &inner_ctx);
    let scope = eta_reduce_top(lam(&v, Ty::np(), body));
    let raised = Term::Const(Const { ty: Ty::quantifier(), ..d });
    app(app(raised, noun), scope)
}

fn eta_reduce_top(t: Term) -> Term {
    if let Term::Abs(x, _, b) = &t {
        if let Term::App(f, a) = b.as_ref() {
            if matches!(a.as_ref(), Term::Var(y) if y == x) && !f.occurs_free(x) {
                return (**f).clone();
            }
        }
    }
    t
}

fn raise(t: &Term, ctx: &mut Ctx) -> Result<Term, LlfError> {
    let t2 = match t {
        Term::Var(_) | Term::Const(_) => return Ok(t.clone()),
        Term::App(f, a) => app(raise(f, ctx)?, raise(a, ctx)?),
        Term::Abs(x, ty, b) => {
            let saved = ctx.insert(x.clone(), ty.clone());
            let body = raise(b, ctx);
            match saved {
                Some(old) => ctx.insert(x.clone(), old),
                None => ctx.remove(x),
            };
            lam(x, ty.clone(), body?)
        }
    };
    let ty = type_of(&t2, ctx).map_err(|e| LlfError::RaiseFailure(e.to_string()))?;
    if ty.is_sentence() {
        return Ok(raise_at_s(&t2, ctx));
    }
    if ty.is_vp() && (is_candidate(&t2) || contains_candidate(&t2)) {
        let v = fresh_name("x", &avoid_set(&t2, ctx));
        let mut inner = ctx.clone();
        inner.insert(v.clone(), Ty::np());
        let body = raise_at_s(&app(t2, Term::Var(v.clone())), &inner);
        return Ok(eta_reduce_top(lam(&v, Ty::np(), body)));
    }
    Ok(t2)
}

/// Turns every `D N` with `D: n→np` into a quantifier `D: n→(np→s)→s`
/// scoping over the smallest enclosing sentence or verb phrase.
pub fn type_raise(t: &Term) -> Result<Term, LlfError> {
    let out = raise(t, &mut Ctx::new())?;
    let mut leftover = None;
    out.visit_consts(&mut |c| {
        if leftover.is_none() && c.ty.erase_features() == n_to_np() {
            leftover = Some(c.lemma.clone());
        }
    });
    if let Some(d) = leftover {
        return Err(LlfError::RaiseFailure(format!("determiner {d} has no scope site")));
    }
    type_of(&out, &Ctx::new())
        .map_err(|source| LlfError::IllTyped { stage: "type raising", source: Box::new(source) })?;
    Ok(out)
}
