//! Type-directed rewriting of simplified terms into the shape expected by
//! the prover.

use std::collections::BTreeMap;

use super::LlfError;
use crate::ingest::LemmaEntry;
use crate::lambda::{app, apps, beta_reduce, type_of, Const, Ctx, Step, Term, Ty};

#[derive(Clone, Debug)]
pub struct FixConfig {
    /// Maximum number of rule applications per term.
    pub budget: usize,
    pub determiners: Vec<String>,
    pub determiner_tag: String,
    pub coordinators: Vec<String>,
    pub coordinator_tag: String,
    /// The only copula whose adjunct PPs become complements.
    pub copula: String,
    pub plural_tags: Vec<String>,
    /// Tag prefixes of constants whose bare-noun arguments get a quantifier.
    pub governor_tags: Vec<String>,
}

impl Default for FixConfig {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        FixConfig {
            budget: 1000,
            determiners: owned(&["een", "de", "het", "s", "alle", "geen", "elke", "iedere", "sommige", "enkele"]),
            determiner_tag: "DT".into(),
            coordinators: owned(&["en", "of"]),
            coordinator_tag: "CC".into(),
            copula: "zijn".into(),
            plural_tags: owned(&["NNS", "NNPS"]),
            governor_tags: owned(&["VB", "IN"]),
        }
    }
}

impl FixConfig {
    fn is_det(&self, c: &Const) -> bool {
        c.pos == self.determiner_tag || self.determiners.contains(&c.lemma)
    }

    fn is_coord(&self, c: &Const) -> bool {
        c.pos == self.coordinator_tag || self.coordinators.contains(&c.lemma)
    }
}

/// The fixing rules, in application priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixRule {
    /// `C F G A ⇒ C' (F A) (G A)` for elliptical coordination, then β.
    CoordDistribution,
    /// A bare noun argument of a verb or preposition gets `een` or `s`.
    BareNp,
    /// `M (D N) ⇒ D (M' N)` with `M: np→np` turned into `M': n→n`.
    DeterminerRaise,
    /// A nominal typed as a predicative adjective becomes a noun.
    NominalAdjective,
    /// `P NP (zijn X) ⇒ zijn' (P' NP) X` with `zijn': pp→np→s`.
    PredicativePp,
}

impl FixRule {
    pub const ORDER: [FixRule; 5] = [
        FixRule::CoordDistribution,
        FixRule::BareNp,
        FixRule::DeterminerRaise,
        FixRule::NominalAdjective,
        FixRule::PredicativePp,
    ];
}

/// Replaces surface tokens by lemmas.
pub fn lemmatize(t: &Term, lemmas: &BTreeMap<String, LemmaEntry>) -> Term {
    t.map_consts(&mut |c| match lemmas.get(&c.lemma) {
        Some(e) => Const { lemma: e.lemma.clone(), ..c.clone() },
        None => c.clone(),
    })
}

fn fun(a: Ty, r: Ty) -> Ty {
    Ty::fun(a, r)
}

fn n_to_np() -> Ty {
    fun(Ty::n(), Ty::np())
}

fn plain(ty: &Ty) -> Ty {
    ty.erase_features()
}

/// Rebuilds a spine with its head constant retyped.
fn retype_head(t: &Term, ty: Ty) -> Term {
    let (head, args) = t.head_and_args();
    let c = head.as_const().expect("spine with constant head");
    apps(Term::Const(Const { ty, ..c.clone() }), args.into_iter().cloned())
}

/// Last noun-tagged constant of a nominal, used to decide number.
fn head_noun(t: &Term) -> Option<&Const> {
    t.constants().into_iter().rfind(|c| c.pos.starts_with("NN"))
}

fn try_rule(rule: FixRule, node: &Term, ctx: &Ctx, cfg: &FixConfig) -> Option<Term> {
    match rule {
        FixRule::CoordDistribution => {
            let (head, args) = node.head_and_args();
            let c = head.as_const()?;
            if args.len() != 3 || !cfg.is_coord(c) {
                return None;
            }
            if !matches!(args[0], Term::Abs(..)) && !matches!(args[1], Term::Abs(..)) {
                return None;
            }
            let (params, _) = c.ty.uncurry();
            let (sigma, rho) = params.first()?.as_fun()?;
            let aty = type_of(args[2], ctx).ok()?;
            if !aty.unifies(sigma, Default::default()) {
                return None;
            }
            let coord = Term::Const(Const { ty: fun(rho.clone(), fun(rho.clone(), rho.clone())), ..c.clone() });
            let out = apps(coord, [app(args[0].clone(), args[2].clone()), app(args[1].clone(), args[2].clone())]);
            Some(beta_reduce(&out))
        }
        FixRule::BareNp => {
            let Term::App(f, a) = node else { return None };
            if type_of(a, ctx).ok()? != Ty::n() {
                return None;
            }
            let (head, fargs) = f.head_and_args();
            let h = head.as_const()?;
            if !cfg.governor_tags.iter().any(|p| h.pos.starts_with(p.as_str())) {
                return None;
            }
            let (_, res) = type_of(f, ctx).ok()?.as_fun().map(|(x, r)| (x.clone(), r.clone()))?;
            if res == Ty::n() {
                return None;
            }
            let new_head_ty = h.ty.replace_arg(fargs.len(), Ty::np())?;
            let plural = head_noun(a).is_some_and(|c| cfg.plural_tags.contains(&c.pos));
            let q = Term::Const(Const::new(if plural { "s" } else { "een" }, &cfg.determiner_tag, n_to_np()));
            Some(app(retype_head(f, new_head_ty), app(q, (**a).clone())))
        }
        FixRule::DeterminerRaise => {
            let Term::App(m, x) = node else { return None };
            let Term::App(d, noun) = x.as_ref() else { return None };
            let dc = d.as_const()?;
            if !cfg.is_det(dc) || plain(&dc.ty) != n_to_np() {
                return None;
            }
            let (head, margs) = m.head_and_args();
            let h = head.as_const()?;
            if cfg.is_coord(h) || cfg.is_det(h) {
                return None;
            }
            if plain(&type_of(m, ctx).ok()?) != fun(Ty::np(), Ty::np()) {
                return None;
            }
            let new_ty = h.ty.map_result_after(margs.len(), &|_| fun(Ty::n(), Ty::n()))?;
            Some(app((**d).clone(), app(retype_head(m, new_ty), (**noun).clone())))
        }
        FixRule::NominalAdjective => {
            let Term::App(d, a) = node else { return None };
            let dc = d.as_const()?;
            let ac = a.as_const()?;
            if !cfg.is_det(dc) || plain(&ac.ty) != Ty::vp() {
                return None;
            }
            let (param, res) = dc.ty.as_fun()?;
            if param != &ac.ty || plain(res) != Ty::np() {
                return None;
            }
            let d2 = Term::Const(Const { ty: n_to_np(), ..dc.clone() });
            let a2 = Term::Const(Const { ty: Ty::n(), ..ac.clone() });
            Some(app(d2, a2))
        }
        FixRule::PredicativePp => {
            let (head, args) = node.head_and_args();
            let p = head.as_const()?;
            if args.len() != 2 {
                return None;
            }
            let (ptys, pres) = p.ty.uncurry();
            if ptys.len() != 2 || !ptys[0].is_atom("np") || !ptys[1].is_sentence() || !pres.is_sentence() {
                return None;
            }
            let Term::App(cop, x) = args[1] else { return None };
            let cc = cop.as_const()?;
            if !cc.ty.is_vp() {
                return None;
            }
            if cc.lemma != cfg.copula {
                log::debug!("{} looks like a copula but only {} is rewritten", cc.lemma, cfg.copula);
                return None;
            }
            let cop2 = Term::Const(Const { ty: fun(Ty::pp(), cc.ty.clone()), ..cc.clone() });
            let p2 = Term::Const(Const { ty: fun(Ty::np(), Ty::pp()), ..p.clone() });
            Some(apps(cop2, [app(p2, args[0].clone()), (**x).clone()]))
        }
    }
}

fn ctx_at(t: &Term, path: &[Step]) -> Ctx {
    t.binders_at(path).into_iter().collect()
}

/// Paths, in pre-order, at which `rule` applies.
pub fn rule_sites(t: &Term, rule: FixRule, cfg: &FixConfig) -> Vec<Vec<Step>> {
    t.paths()
        .into_iter()
        .filter(|p| {
            let node = t.at(p).expect("path from paths()");
            try_rule(rule, node, &ctx_at(t, p), cfg).is_some()
        })
        .collect()
}

/// Applies `rule` at `path`, if it matches there.
pub fn apply_rule_at(t: &Term, rule: FixRule, path: &[Step], cfg: &FixConfig) -> Option<Term> {
    let node = t.at(path)?;
    let new = try_rule(rule, node, &ctx_at(t, path), cfg)?;
    Some(t.replace_at(path, new))
}

fn first_site(t: &Term, rule: FixRule, cfg: &FixConfig) -> Option<Term> {
    fn go(t: &Term, rule: FixRule, ctx: &mut Ctx, cfg: &FixConfig) -> Option<Term> {
        if let Some(new) = try_rule(rule, t, ctx, cfg) {
            return Some(new);
        }
        match t {
            Term::App(f, a) => {
                if let Some(f2) = go(f, rule, ctx, cfg) {
                    return Some(app(f2, (**a).clone()));
                }
                go(a, rule, ctx, cfg).map(|a2| app((**f).clone(), a2))
            }
            Term::Abs(x, ty, b) => {
                let saved = ctx.insert(x.clone(), ty.clone());
                let r = go(b, rule, ctx, cfg);
                match saved {
                    Some(old) => ctx.insert(x.clone(), old),
                    None => ctx.remove(x),
                };
                r.map(|b2| crate::lambda::lam(x, ty.clone(), b2))
            }
            _ => None,
        }
    }
    go(t, rule, &mut Ctx::new(), cfg)
}

/// Applies the rules outermost-first, in priority order, restarting after
/// every rewrite, until none applies.
pub fn fix(t: &Term, cfg: &FixConfig) -> Result<Term, LlfError> {
    let mut cur = t.clone();
    let mut applied = 0;
    'outer: loop {
        for rule in FixRule::ORDER {
            if let Some(next) = first_site(&cur, rule, cfg) {
                applied += 1;
                if applied > cfg.budget {
                    return Err(LlfError::FixDivergence(cfg.budget));
                }
                log::trace!("fix {rule:?}: {}", next.pretty());
                cur = next;
                continue 'outer;
            }
        }
        break;
    }
    type_of(&cur, &Ctx::new()).map_err(|source| LlfError::IllTyped { stage: "fixing", source: Box::new(source) })?;
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_term;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    #[test]
    fn determiner_moves_above_modifiers() {
        let sim = t(
            r#"(app (const "groot" JJ "np->np") (app (const "bruin" JJ "np->np") (app (const "een" DT "n->np") (const "hond" NN "n"))))"#,
        );
        let fixed = fix(&sim, &FixConfig::default()).unwrap();
        assert_eq!(fixed.pretty(), "een (groot (bruin hond))");
        assert_eq!(fixed.at(&[Step::Arg, Step::Fun]).unwrap().as_const().unwrap().ty.to_string(), "n->n");
    }

    #[test]
    fn bare_plural_gets_s() {
        let sim = t(r#"(app (const "slapen" VB "n->s") (const "man" NNS "n"))"#);
        assert_eq!(fix(&sim, &FixConfig::default()).unwrap().pretty(), "slapen (s man)");
    }

    #[test]
    fn budget_is_enforced() {
        let sim = t(r#"(app (const "slapen" VB "n->s") (const "man" NNS "n"))"#);
        let cfg = FixConfig { budget: 0, ..FixConfig::default() };
        assert!(matches!(fix(&sim, &cfg), Err(LlfError::FixDivergence(0))));
    }

    #[test]
    fn other_copulas_are_left_alone() {
        let sim = t(
            r#"(app (const "op" IN "np->s->s") (app (const "een" DT "n->np") (const "berg" NN "n")) (app (const "staan" VB "np->s") (const "jan" NNP "np")))"#,
        );
        let fixed = fix(&sim, &FixConfig::default()).unwrap();
        assert_eq!(fixed, sim);
    }
}
