use thiserror::Error;

use super::term::{app, lam, Term};
use super::typing::substitute;

/// Redex selection order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Leftmost-outermost.
    Normal,
    /// Leftmost-innermost.
    Applicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("reduction did not reach a normal form within {0} steps")]
pub struct FuelExhausted(pub usize);

/// One β-step, or `None` when `t` is normal.
pub fn step(t: &Term, strategy: Strategy) -> Option<Term> {
    match strategy {
        Strategy::Normal => step_normal(t),
        Strategy::Applicative => step_applicative(t),
    }
}

fn contract(t: &Term) -> Option<Term> {
    if let Term::App(f, a) = t {
        if let Term::Abs(x, _, body) = f.as_ref() {
            return Some(substitute(body, x, a));
        }
    }
    None
}

fn step_normal(t: &Term) -> Option<Term> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    match t {
        Term::App(f, a) => {
            if let Some(f2) = step_normal(f) {
                Some(app(f2, (**a).clone()))
            } else {
                step_normal(a).map(|a2| app((**f).clone(), a2))
            }
        }
        Term::Abs(x, ty, b) => step_normal(b).map(|b2| lam(x, ty.clone(), b2)),
        _ => None,
    }
}

fn step_applicative(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Some(f2) = step_applicative(f) {
                return Some(app(f2, (**a).clone()));
            }
            if let Some(a2) = step_applicative(a) {
                return Some(app((**f).clone(), a2));
            }
            contract(t)
        }
        Term::Abs(x, ty, b) => step_applicative(b).map(|b2| lam(x, ty.clone(), b2)),
        _ => None,
    }
}

/// Reduces to normal form, failing after `fuel` steps.
pub fn normalize(t: &Term, strategy: Strategy, fuel: usize) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step(&cur, strategy) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    if step(&cur, strategy).is_none() {
        Ok(cur)
    } else {
        Err(FuelExhausted(fuel))
    }
}

const DEFAULT_FUEL: usize = 100_000;

/// β-normal form by normal-order reduction. Well-typed simply-typed terms
/// always normalize; the fuel bound only guards against ill-typed input,
/// in which case the partially reduced term is returned.
pub fn beta_reduce(t: &Term) -> Term {
    let mut cur = t.clone();
    for _ in 0..DEFAULT_FUEL {
        match step_normal(&cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
    log::warn!("beta_reduce: fuel exhausted on {t}");
    cur
}

/// Repeated η-contraction `λx. f x ⇒ f` where `x` is not free in `f`.
pub fn eta_reduce(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => app(eta_reduce(f), eta_reduce(a)),
        Term::Abs(x, ty, b) => {
            let b = eta_reduce(b);
            if let Term::App(f, a) = &b {
                if matches!(a.as_ref(), Term::Var(y) if y == x) && !f.occurs_free(x) {
                    return (**f).clone();
                }
            }
            lam(x, ty.clone(), b)
        }
    }
}
