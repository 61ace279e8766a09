//! Cross-module invariants on seeded random inputs: semantics against
//! composed automata, canonical machines against brute force, enumeration
//! monotonicity, and the identity fixpoint against machine equality.

use autalg::automaton::{compose, Automaton, LetterId};
use autalg::elements::{acts_as_identity, canonicalize, equal_actions, CanonicalMachine};
use autalg::enumeration::{enumerate_ball, Mode};
use autalg::semantics::{act, next_state, SAutomaton};
use autalg::{random, samples};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn words_up_to(letters: usize, max_len: usize) -> Vec<Vec<LetterId>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..letters as u32 {
                let mut w = w.clone();
                w.push(LetterId(a));
                next.push(w);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn random_seq(rng: &mut impl Rng, aut: &Automaton, max_len: usize) -> Vec<autalg::StateId> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| autalg::StateId(rng.gen_range(0..aut.state_count()) as u32))
        .collect()
}

#[test]
fn sequences_act_like_composite_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..25 {
        let a = random::deterministic_automaton(&mut rng, 3, 2, 0.8);
        let sa = SAutomaton::new(a.clone()).unwrap();
        let squared = SAutomaton::new(compose(&a, &a).unwrap()).unwrap();
        let words = words_up_to(a.letter_count(), 6);
        for p in 0..a.state_count() {
            for q in 0..a.state_count() {
                let seq = [
                    autalg::StateId(p as u32),
                    autalg::StateId(q as u32),
                ];
                let name = format!("({},{})", a.states()[p], a.states()[q]);
                let composite = squared.state_id(&name).unwrap();
                for w in &words {
                    assert_eq!(
                        act(&sa, &seq, w).unwrap(),
                        act(&squared, &[composite], w).unwrap(),
                        "sequence and composite state disagree on {w:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn next_state_splits_the_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..40 {
        let a = random::deterministic_automaton(&mut rng, 4, 3, 0.8);
        let sa = SAutomaton::new(a.clone()).unwrap();
        let words = words_up_to(a.letter_count(), 4);
        for _ in 0..10 {
            let seq = random_seq(&mut rng, &a, 3);
            for u in words.iter().take(20) {
                for w in words.iter().take(20) {
                    let mut uw = u.clone();
                    uw.extend(w.iter().copied());
                    let whole = act(&sa, &seq, &uw).unwrap();
                    let head = act(&sa, &seq, u).unwrap();
                    let mid = next_state(&sa, &seq, u).unwrap();
                    match (whole, head, mid) {
                        (Some(whole), Some(head), Some(mid)) => {
                            let tail = act(&sa, &mid.states, w).unwrap();
                            if let Some(tail) = tail {
                                let mut glued = head.clone();
                                glued.extend(tail);
                                assert_eq!(glued, whole);
                            }
                        }
                        (None, _, _) => {}
                        (Some(_), head, mid) => {
                            assert!(head.is_some() && mid.is_some());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn word_problem_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..60 {
        let a = random::deterministic_automaton(&mut rng, 4, 3, 0.7);
        let sa = SAutomaton::new(a.clone()).unwrap();
        let words = words_up_to(a.letter_count(), 6);
        let left = random_seq(&mut rng, &a, 4);
        let right = random_seq(&mut rng, &a, 4);
        let claim = equal_actions(&sa, &left, &right);
        let brute = words
            .iter()
            .all(|w| act(&sa, &left, w).unwrap() == act(&sa, &right, w).unwrap());
        if claim {
            assert!(brute, "equal machines must agree everywhere");
        }
        if !brute {
            assert!(!claim, "a distinguishing word exists, machines must differ");
        }
    }
}

#[test]
fn identity_fixpoint_matches_machine_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..80 {
        let a = random::deterministic_automaton(&mut rng, 4, 3, 0.8);
        let sa = SAutomaton::new(a.clone()).unwrap();
        let seq = random_seq(&mut rng, &a, 3);
        let via_fixpoint = acts_as_identity(&sa, &seq);
        let via_machine =
            canonicalize(&sa, &seq) == CanonicalMachine::identity(sa.alphabet_arc());
        assert_eq!(via_fixpoint, via_machine);
        let empty: [autalg::StateId; 0] = [];
        let via_equality = equal_actions(&sa, &seq, &empty);
        assert_eq!(via_fixpoint, via_equality);
    }
}

#[test]
fn element_equality_is_a_congruence() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut checked = 0;
    while checked < 20 {
        let a = random::deterministic_automaton(&mut rng, 3, 2, 0.9);
        let sa = SAutomaton::new(a.clone()).unwrap();
        let s = random_seq(&mut rng, &a, 3);
        let t = random_seq(&mut rng, &a, 3);
        if !equal_actions(&sa, &s, &t) {
            continue;
        }
        checked += 1;
        let u = random_seq(&mut rng, &a, 2);
        let v = random_seq(&mut rng, &a, 2);
        let glue = |x: &[autalg::StateId]| {
            let mut out = u.clone();
            out.extend_from_slice(x);
            out.extend_from_slice(&v);
            out
        };
        assert!(equal_actions(&sa, &glue(&s), &glue(&t)));
    }
}

#[test]
fn growth_is_monotone_and_stable_once_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..30 {
        let a = random::deterministic_automaton(&mut rng, 3, 2, 0.8);
        let sa = SAutomaton::new(a).unwrap();
        let report = enumerate_ball(&sa, 5, Mode::Semigroup).unwrap();
        for pair in report.growth.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
        if report.closed {
            let bigger = enumerate_ball(&sa, 7, Mode::Semigroup).unwrap();
            assert!(bigger.closed);
            assert_eq!(bigger.elements.len(), report.elements.len());
            let same: std::collections::HashSet<_> =
                report.elements.iter().collect();
            assert!(bigger.elements.iter().all(|m| same.contains(m)));
        }
    }
}

#[test]
fn ball_witnesses_reproduce_their_elements() {
    let aut = SAutomaton::new(samples::brandt_automaton()).unwrap();
    let report = enumerate_ball(&aut, 4, Mode::Semigroup).unwrap();
    for (element, witness) in report.elements.iter().zip(&report.witnesses) {
        assert_eq!(&canonicalize(&aut, &witness.states), element);
    }
}

#[test]
fn relation_search_is_complete_at_its_bound() {
    // Exhaustive cross-check: enumerate every sequence of length up to 3,
    // group them by canonical machine, and compare the smallest total
    // length of a distinct equal pair with what find_relation reports.
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..40 {
        let a = random::deterministic_automaton(&mut rng, 3, 2, 0.8);
        let sa = SAutomaton::new(a.clone()).unwrap();
        let mut by_machine: std::collections::HashMap<_, Vec<Vec<autalg::StateId>>> =
            std::collections::HashMap::new();
        let mut layer: Vec<Vec<autalg::StateId>> = vec![Vec::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for seq in &layer {
                for q in 0..a.state_count() as u32 {
                    let mut seq = seq.clone();
                    seq.push(autalg::StateId(q));
                    next.push(seq);
                }
            }
            for seq in &next {
                by_machine
                    .entry(canonicalize(&sa, seq))
                    .or_default()
                    .push(seq.clone());
            }
            layer = next;
        }
        let brute_best = by_machine
            .values()
            .filter(|class| class.len() > 1)
            .map(|class| {
                let mut lens: Vec<usize> = class.iter().map(|s| s.len()).collect();
                lens.sort_unstable();
                lens[0] + lens[1]
            })
            .min();
        let found = autalg::find_relation(&sa, 3, autalg::Mode::Semigroup).unwrap();
        match (brute_best, found) {
            (Some(best), Some(w)) => {
                assert_eq!(w.left.states.len() + w.right.states.len(), best);
                assert!(equal_actions(&sa, &w.left.states, &w.right.states));
            }
            (None, None) => {}
            (brute, search) => panic!(
                "brute force and search disagree: {brute:?} vs {:?}",
                search.map(|w| (w.left.states, w.right.states))
            ),
        }
    }
}

#[test]
fn extended_adding_machine_realizes_free_inverse_relations() {
    // +1 +1~ (+1~)^n (+1)^n differs from (+1~)^n (+1)^n, while the plain
    // commuting pairs +0 +1 and +1 +0 coincide.
    let aut = SAutomaton::new(samples::extended_adding_machine()).unwrap();
    let ext = aut.extended().unwrap();
    let m = &ext.machine;
    let plus1 = m.state_id("+1").unwrap();
    let minus1 = m.state_id("+1~").unwrap();
    for n in 0..=4usize {
        let mut right = vec![minus1; n];
        right.extend(vec![plus1; n]);
        let mut left = vec![plus1, minus1];
        left.extend(right.clone());
        assert!(
            !equal_actions(m, &left, &right),
            "free inverse monoid relation failed at n = {n}"
        );
    }
}
