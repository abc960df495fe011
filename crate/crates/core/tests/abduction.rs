use std::collections::BTreeSet;
use std::path::Path;

use nltab::abduction::{abduce, candidates, learn, AbductionConfig};
use nltab::harness::Problem;
use nltab::ingest::load_llfs;
use nltab::kb::{load_prolog_kb, Kb, LexRelation, RelKind};
use nltab::lambda::Term;
use nltab::tableau::{Config, Prover};
use nltab::Label;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn term(file: &str, id: &str) -> Term {
    let docs = load_llfs(&fixture(file)).unwrap().items;
    docs.into_iter().find(|d| d.id == id).unwrap().term
}

fn problem(id: &str, file: &str, p: &str, h: &str, gold: Label) -> Problem {
    Problem::new(id, p, h, gold).with_llfs(term(file, p), term(file, h))
}

fn wordnet() -> Kb {
    Kb::new(load_prolog_kb(&[fixture("wordnet")]).unwrap().0)
}

fn sub(a: &str, b: &str) -> LexRelation {
    LexRelation::learned(RelKind::Subsumes, a, b)
}

fn french_harp() -> Problem {
    problem("french-harp-h", "harmonica.llf", "harmonica-p", "french-harp-h", Label::Entailment)
}

#[test]
fn french_harp_is_learned() {
    let kb = wordnet();
    let cfg = Config::default();
    let p = french_harp();
    let (prem, hyp) = p.llfs().unwrap();
    assert_eq!(Prover::new(kb.clone(), cfg.clone()).classify(prem, hyp), Label::Neutral);
    let set = abduce(&p, &kb, &cfg, &AbductionConfig::default()).unwrap();
    assert_eq!(set, vec![sub("harmonica", "french_harp")]);
    let learned = learn(std::slice::from_ref(&p), &kb, &cfg, &AbductionConfig::default());
    assert_eq!(learned.relations.len(), 1);
    let replay = Prover::new(kb.with_learned(learned.relations.clone()), cfg);
    assert_eq!(replay.classify(prem, hyp), Label::Entailment);
    assert_eq!(learned.report(), "⊑ harmonica french_harp\t?\tfrench-harp-h\n");
}

#[test]
fn provable_problem_needs_nothing() {
    let p = problem("fig2", "harmonica.llf", "harmonica-p", "harmonica-h", Label::Entailment);
    assert_eq!(abduce(&p, &wordnet(), &Config::default(), &AbductionConfig::default()), Some(vec![]));
}

#[test]
fn neutral_or_unparsed_problems_are_skipped() {
    let mut p = french_harp();
    p.gold = Label::Neutral;
    assert_eq!(abduce(&p, &wordnet(), &Config::default(), &AbductionConfig::default()), None);
    let bare = Problem::new("x", "a", "b", Label::Entailment);
    assert_eq!(abduce(&bare, &wordnet(), &Config::default(), &AbductionConfig::default()), None);
    assert!(learn(&[], &wordnet(), &Config::default(), &AbductionConfig::default()).relations.is_empty());
}

#[test]
fn short_phrases_are_preferred() {
    let p = problem("bias", "abduction.llf", "bias-p", "bias-h", Label::Entailment);
    let kb = Kb::empty();
    let cands: Vec<String> = candidates(&p, &kb, &Config::default(), &AbductionConfig::default())
        .iter()
        .map(|c| c.relation.to_string())
        .collect();
    assert!(cands.contains(&"⊑ oud_persoon fietser".to_string()), "{cands:?}");
    let set = abduce(&p, &kb, &Config::default(), &AbductionConfig::default()).unwrap();
    assert_eq!(set, vec![sub("persoon", "fietser")]);
}

#[test]
fn disjointness_for_contradictions() {
    let p = problem("rent-ligt", "abduction.llf", "man-rent", "alle-man-ligt", Label::Contradiction);
    let set = abduce(&p, &Kb::empty(), &Config::default(), &AbductionConfig::default()).unwrap();
    assert_eq!(set, vec![LexRelation::learned(RelKind::Disjoint, "liggen", "rennen")]);
}

#[test]
fn opposite_subsumptions_conflict() {
    let a = problem("1", "abduction.llf", "kat-slaapt", "poes-slaapt", Label::Entailment);
    let b = problem("2", "abduction.llf", "poes-slaapt", "kat-slaapt", Label::Entailment);
    let learned = learn(&[a, b], &Kb::empty(), &Config::default(), &AbductionConfig::default());
    assert!(learned.relations.is_empty());
    assert_eq!(learned.conflicts, vec![(sub("kat", "poes"), sub("poes", "kat"))]);
    assert!(learned.report().contains("conflict"));
}

/// Exhaustive oracle: all subsets of the candidates ordered by cost, size
/// and text; the first that proves the gold label.
fn exhaustive(p: &Problem, kb: &Kb) -> Option<Vec<LexRelation>> {
    let cands = candidates(p, kb, &Config::default(), &AbductionConfig::default());
    assert!(cands.len() <= 5, "{} candidates", cands.len());
    let (prem, hyp) = p.llfs().unwrap();
    let mut sets: Vec<(usize, usize, Vec<String>, Vec<LexRelation>)> = Vec::new();
    for mask in 1u32..(1 << cands.len()) {
        let chosen: Vec<_> = (0..cands.len()).filter(|i| mask & (1 << i) != 0).collect();
        if chosen.len() > 3 {
            continue;
        }
        let cost = chosen.iter().map(|&i| cands[i].cost).sum();
        let mut rels: Vec<LexRelation> = chosen.iter().map(|&i| cands[i].relation.clone()).collect();
        rels.sort();
        let text = rels.iter().map(ToString::to_string).collect();
        sets.push((cost, rels.len(), text, rels));
    }
    sets.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    sets.into_iter().map(|s| s.3).find(|rels| {
        let kb = kb.with_learned(rels.iter().cloned().collect());
        Prover::new(kb, Config::default()).classify(prem, hyp) == p.gold
    })
}

#[test]
fn matches_exhaustive_search() {
    let cases = [
        problem("bias", "abduction.llf", "bias-p", "bias-h", Label::Entailment),
        problem("rent-ligt", "abduction.llf", "man-rent", "alle-man-ligt", Label::Contradiction),
        problem("kat", "abduction.llf", "kat-slaapt", "poes-slaapt", Label::Entailment),
        problem("ligt", "abduction.llf", "man-rent", "geen-man-ligt", Label::Entailment),
    ];
    for p in cases {
        let found = abduce(&p, &Kb::empty(), &Config::default(), &AbductionConfig::default());
        assert_eq!(found, exhaustive(&p, &Kb::empty()), "problem {}", p.id);
    }
}

#[test]
fn learned_relations_respect_the_kb() {
    // nat | droog in the fixture, so droog ⊑ nat is never proposed.
    let kb = wordnet();
    for c in candidates(&french_harp(), &kb, &Config::default(), &AbductionConfig::default()) {
        let pair: BTreeSet<&str> = [c.relation.lhs.as_str(), c.relation.rhs.as_str()].into();
        assert!(!kb.disjoint(
            &nltab::kb::LexUnit::new(&c.relation.lhs, None),
            &nltab::kb::LexUnit::new(&c.relation.rhs, None)
        ));
        assert!(c.cost >= 2, "{pair:?}");
    }
}
