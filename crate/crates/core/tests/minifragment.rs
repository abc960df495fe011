mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{consistent, entailment_countermodel, kb, random_pair};
use nltab::tableau::{Config, Prover, Rule, SearchConfig};
use nltab::Label;

#[test]
fn prover_is_sound_on_random_pairs() {
    let prover = Prover::new(kb(), Config::default());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut decided = [0usize; 3];
    for _ in 0..300 {
        let (p, h) = random_pair(&mut rng);
        let out = prover.prove(&p.term(), &h.term());
        decided[out.label.index()] += 1;
        match out.label {
            Label::Entailment => assert!(!entailment_countermodel(&p, &h), "{} ⊨ {}", p.text(), h.text()),
            Label::Contradiction => assert!(!consistent(&p, &h), "{} ⊥ {}", p.text(), h.text()),
            Label::Neutral => {}
        }
        for proof in std::iter::once(&out.entailment).chain(out.contradiction.as_ref()) {
            proof.replay(&prover.kb, &prover.config).unwrap();
        }
    }
    // The sample must exercise both proof directions.
    assert!(decided[0] > 10 && decided[1] > 10, "{decided:?}");
}

#[test]
fn fresh_entities_are_new_to_their_branch() {
    let prover = Prover::new(
        kb(),
        Config { search: SearchConfig { explore_all_branches: true, ..Default::default() }, ..Default::default() },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fresh_steps = 0;
    for _ in 0..200 {
        let (p, h) = random_pair(&mut rng);
        let proof = prover.prove(&p.term(), &h.term()).entailment;
        for (branch, _) in proof.leaves() {
            for (pos, &id) in branch.iter().enumerate() {
                let node = proof.node(id);
                if node.by.rule != Rule::SomeT && node.by.rule != Rule::EveryF && node.by.rule != Rule::NoF {
                    continue;
                }
                fresh_steps += 1;
                let c = node.by.entity.as_ref().unwrap().as_const().unwrap().clone();
                for &earlier in &branch[..pos] {
                    let e = &proof.node(earlier);
                    if e.by == node.by {
                        break;
                    }
                    let mut seen = false;
                    for t in std::iter::once(&e.entry.term).chain(&e.entry.args) {
                        t.visit_consts(&mut |k| seen |= *k == c);
                    }
                    assert!(!seen, "entity {} reused", c.lemma);
                }
            }
        }
    }
    assert!(fresh_steps > 100);
}

#[test]
fn oracle_sanity() {
    let s = |q, n, v| common::Sentence::Intransitive { q, n, v };
    assert!(!entailment_countermodel(&s("een", "hond", "rennen"), &s("een", "dier", "bewegen")));
    assert!(entailment_countermodel(&s("een", "dier", "rennen"), &s("een", "hond", "rennen")));
    assert!(!consistent(&s("een", "hond", "rennen"), &s("geen", "dier", "bewegen")));
    // No existential import for alle.
    assert!(entailment_countermodel(&s("alle", "hond", "rennen"), &s("een", "hond", "rennen")));
}
