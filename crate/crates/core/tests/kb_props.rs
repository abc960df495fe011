use std::collections::HashSet;
use std::path::Path;

use proptest::prelude::*;

use nltab::ingest::load_llfs;
use nltab::kb::{load_prolog_kb, parse_prolog_kb, Kb, LexRelation, LexUnit, PosClass, RelKind};
use nltab::lambda::Term;
use nltab::tableau::{Config, Prover};

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn noun(w: &str) -> LexUnit {
    LexUnit::new(w, Some(PosClass::Noun))
}

#[test]
fn cyclic_hypernyms_terminate() {
    let (wn, errs) = load_prolog_kb(&[fixture("wordnet")]).unwrap();
    assert!(errs.is_empty());
    let kb = Kb::new(wn);
    assert!(kb.infers(&noun("hond"), &noun("huisdier")));
    assert!(kb.infers(&noun("huisdier"), &noun("hond")));
    assert!(kb.infers(&noun("huisdier"), &noun("dier")));
    assert!(!kb.infers(&noun("dier"), &noun("hond")));
    assert!(kb.infers(&noun("boy"), &noun("person")));
    assert!(!kb.infers(&noun("person"), &noun("boy")));
}

const WORDS: [&str; 5] = ["a", "b", "c", "d", "e"];

/// Random synsets over a handful of words (so words have several senses)
/// and random hypernym edges, cycles allowed.
fn wordnet_src() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<(usize, usize)>)> {
    let synsets = prop::collection::vec(prop::collection::vec(0..WORDS.len(), 1..3), 1..8);
    synsets.prop_flat_map(|syns| {
        let n = syns.len();
        (Just(syns), prop::collection::vec((0..n, 0..n), 0..12))
    })
}

fn render(syns: &[Vec<usize>], edges: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for (i, members) in syns.iter().enumerate() {
        let mut seen = HashSet::new();
        for (k, &w) in members.iter().enumerate() {
            if seen.insert(w) {
                out.push_str(&format!("s({},{},'{}',n,1,0).\n", i + 1, k + 1, WORDS[w]));
            }
        }
    }
    for (a, b) in edges {
        out.push_str(&format!("hyp({},{}).\n", a + 1, b + 1));
    }
    out
}

/// Reflexive-transitive closure by Floyd–Warshall.
fn reach(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn all_sense_subsumption_matches_closure((syns, edges) in wordnet_src()) {
        let (wn, errs) = parse_prolog_kb(&render(&syns, &edges));
        prop_assert!(errs.is_empty());
        let r = reach(syns.len(), &edges);
        let senses = |w: usize| -> Vec<usize> { (0..syns.len()).filter(|&s| syns[s].contains(&w)).collect() };
        for (a, wa) in WORDS.iter().enumerate() {
            for (b, wb) in WORDS.iter().enumerate() {
                let (sa, sb) = (senses(a), senses(b));
                let want = sa.iter().any(|&x| sb.iter().any(|&y| r[x][y]));
                let got = wn.subsumes(wa, Some(PosClass::Noun), wb, Some(PosClass::Noun));
                prop_assert_eq!(got, want, "{} ⊑ {}", wa, wb);
            }
        }
    }

    #[test]
    fn learned_relations_only_add((syns, edges) in wordnet_src(), a in 0..5usize, b in 0..5usize) {
        let (wn, _) = parse_prolog_kb(&render(&syns, &edges));
        let base = Kb::new(wn);
        let more = base.add_learned(LexRelation::learned(RelKind::Subsumes, WORDS[a], WORDS[b]));
        prop_assert!(base.learned().is_empty());
        prop_assert!(more.infers(&noun(WORDS[a]), &noun(WORDS[b])));
        for x in WORDS {
            for y in WORDS {
                if base.infers(&noun(x), &noun(y)) {
                    prop_assert!(more.infers(&noun(x), &noun(y)));
                }
            }
        }
    }
}

fn term(file: &str, id: &str) -> Term {
    load_llfs(&fixture(file)).unwrap().items.into_iter().find(|d| d.id == id).unwrap().term
}

/// Proofs found under a knowledge base stay valid when relations are added.
#[test]
fn proofs_replay_under_larger_kbs() {
    let (wn, _) = load_prolog_kb(&[fixture("wordnet")]).unwrap();
    let kb = Kb::new(wn);
    let cfg = Config::default();
    let prover = Prover::new(kb.clone(), cfg.clone());
    let cases = [("harmonica.llf", "harmonica-p", "harmonica-h"), ("hond.llf", "5220-p", "5220-h")];
    let extras = [
        LexRelation::learned(RelKind::Subsumes, "harmonica", "french_harp"),
        LexRelation::learned(RelKind::Disjoint, "boy", "girl"),
        LexRelation::learned(RelKind::Synonym, "kijken", "zien"),
    ];
    for (file, p, h) in cases {
        let out = prover.prove(&term(file, p), &term(file, h));
        let proof = out.decisive().unwrap();
        let mut bigger = kb.clone();
        for r in &extras {
            bigger = bigger.add_learned(r.clone());
            proof.replay(&bigger, &cfg).unwrap();
        }
        assert_eq!(Prover::new(bigger, cfg.clone()).classify(&term(file, p), &term(file, h)), out.label);
    }
}
