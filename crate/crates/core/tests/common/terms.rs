//! Random simply-typed terms and a nameless-form oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nltab::lambda::{app, constant, lam, var, Ctx, Term, Ty};

pub const NAMES: [&str; 3] = ["x", "y", "z"];

pub fn small_type(rng: &mut ChaCha8Rng, depth: u32) -> Ty {
    let atoms = [Ty::n(), Ty::np(), Ty::s()];
    if depth == 0 || rng.gen_bool(0.6) {
        atoms[rng.gen_range(0..3)].clone()
    } else {
        Ty::fun(small_type(rng, depth - 1), small_type(rng, depth - 1))
    }
}

/// A random term of type `ty` whose free variables come from `ctx`.
/// Binder names are drawn from a tiny pool so shadowing and capture
/// situations are common.
pub fn gen(rng: &mut ChaCha8Rng, ty: &Ty, ctx: &[(String, Ty)], depth: u32) -> Term {
    let vars: Vec<&(String, Ty)> = ctx.iter().rev().filter(|(_, t)| t == ty).collect();
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..6) };
    match choice {
        0 if !vars.is_empty() => {
            // Innermost binding of a name wins, so skip shadowed entries.
            let (name, _) = vars[rng.gen_range(0..vars.len())];
            let visible = ctx.iter().rev().find(|(n, _)| n == name).unwrap();
            if &visible.1 == ty {
                var(name)
            } else {
                constant(&format!("k{}", rng.gen_range(0..4)), "C", ty.clone())
            }
        }
        0 | 1 => constant(&format!("k{}", rng.gen_range(0..4)), "C", ty.clone()),
        2 | 3 if ty.as_fun().is_some() => {
            let (a, r) = ty.as_fun().unwrap();
            let x = NAMES[rng.gen_range(0..3)].to_string();
            let mut inner = ctx.to_vec();
            inner.push((x.clone(), a.clone()));
            lam(&x, a.clone(), gen(rng, r, &inner, depth - 1))
        }
        4 => {
            // An explicit redex.
            let a = small_type(rng, 1);
            let x = NAMES[rng.gen_range(0..3)].to_string();
            let mut inner = ctx.to_vec();
            inner.push((x.clone(), a.clone()));
            let body = gen(rng, ty, &inner, depth - 1);
            app(lam(&x, a.clone(), body), gen(rng, &a, ctx, depth - 1))
        }
        _ => {
            let a = small_type(rng, 1);
            app(gen(rng, &Ty::fun(a.clone(), ty.clone()), ctx, depth - 1), gen(rng, &a, ctx, depth - 1))
        }
    }
}

pub fn random_term(seed: u64) -> (Term, Ty, Ctx) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ty = small_type(&mut rng, 2);
    let free = vec![("x".to_string(), Ty::np()), ("f".to_string(), Ty::fun(Ty::np(), Ty::s()))];
    let t = gen(&mut rng, &ty, &free, 4);
    (t, ty, free.into_iter().collect())
}

/// Nameless form: bound variables as binder distances, free ones by name.
#[derive(Debug, PartialEq)]
pub enum Db {
    Free(String),
    Bound(usize),
    Const(String, Ty),
    App(Box<Db>, Box<Db>),
    Abs(Ty, Box<Db>),
}

pub fn to_db(t: &Term, env: &mut Vec<String>) -> Db {
    match t {
        Term::Var(x) => match env.iter().rev().position(|y| y == x) {
            Some(i) => Db::Bound(i),
            None => Db::Free(x.clone()),
        },
        Term::Const(c) => Db::Const(c.lemma.clone(), c.ty.clone()),
        Term::App(f, a) => Db::App(Box::new(to_db(f, env)), Box::new(to_db(a, env))),
        Term::Abs(x, ty, b) => {
            env.push(x.clone());
            let body = to_db(b, env);
            env.pop();
            Db::Abs(ty.clone(), Box::new(body))
        }
    }
}

/// Substitution on nameless terms; `s` has no dangling indices, so no
/// shifting is needed.
pub fn db_subst(t: Db, x: &str, s: &dyn Fn() -> Db) -> Db {
    match t {
        Db::Free(y) if y == x => s(),
        Db::App(f, a) => Db::App(Box::new(db_subst(*f, x, s)), Box::new(db_subst(*a, x, s))),
        Db::Abs(ty, b) => Db::Abs(ty, Box::new(db_subst(*b, x, s))),
        other => other,
    }
}
