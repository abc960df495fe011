//! Randomized checks of the λ-calculus core against independent oracles.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::terms::{db_subst, gen, random_term, to_db};
use nltab::lambda::{
    beta_reduce, eta_reduce, normalize, parse_term, step, substitute, type_of, Ctx, Strategy, Term, Ty,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_terms_are_well_typed(seed in any::<u64>()) {
        let (t, ty, ctx) = random_term(seed);
        prop_assert_eq!(type_of(&t, &ctx).unwrap(), ty);
    }

    #[test]
    fn subject_reduction(seed in any::<u64>()) {
        let (t, ty, ctx) = random_term(seed);
        let mut cur = t;
        for _ in 0..50 {
            match step(&cur, Strategy::Normal) {
                Some(next) => {
                    prop_assert_eq!(type_of(&next, &ctx).unwrap(), ty.clone());
                    cur = next;
                }
                None => break,
            }
        }
    }

    #[test]
    fn reduction_terminates_and_is_confluent(seed in any::<u64>()) {
        let (t, ty, ctx) = random_term(seed);
        let normal = normalize(&t, Strategy::Normal, 100_000).unwrap();
        let applicative = normalize(&t, Strategy::Applicative, 100_000).unwrap();
        prop_assert_eq!(&normal, &applicative);
        prop_assert!(step(&normal, Strategy::Normal).is_none());
        prop_assert_eq!(type_of(&normal, &ctx).unwrap(), ty);
        prop_assert_eq!(beta_reduce(&t), normal);
    }

    #[test]
    fn eta_preserves_type(seed in any::<u64>()) {
        let (t, ty, ctx) = random_term(seed);
        let e = eta_reduce(&beta_reduce(&t));
        prop_assert_eq!(type_of(&e, &ctx).unwrap(), ty);
    }

    #[test]
    fn substitution_avoids_capture(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // `s` mentions the binder names, so naive substitution would capture.
        let free = vec![
            ("x".to_string(), Ty::np()),
            ("y".to_string(), Ty::np()),
            ("z".to_string(), Ty::np()),
            ("w".to_string(), Ty::np()),
        ];
        let t = gen(&mut rng, &Ty::s(), &free, 4);
        let s = gen(&mut rng, &Ty::np(), &free[..3], 2);
        let got = substitute(&t, "w", &s);
        let want = db_subst(to_db(&t, &mut Vec::new()), "w", &|| to_db(&s, &mut Vec::new()));
        prop_assert_eq!(to_db(&got, &mut Vec::new()), want);
        let ctx: Ctx = free.into_iter().collect();
        prop_assert_eq!(type_of(&got, &ctx).unwrap(), Ty::s());
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let (t, _, _) = random_term(seed);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }
}

#[test]
fn alpha_equivalent_terms_hash_alike() {
    use std::collections::HashSet;
    let a = parse_term(r#"(lam x "np" (app (const "f" V "np->np->s") x x))"#).unwrap();
    let b = parse_term(r#"(lam y "np" (app (const "f" V "np->np->s") y y))"#).unwrap();
    let set: HashSet<Term> = [a, b].into();
    assert_eq!(set.len(), 1);
}
