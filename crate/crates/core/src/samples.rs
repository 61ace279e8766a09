//! A handful of small classic machines, used throughout the tests and the
//! guide.

use crate::automaton::Automaton;

/// A one-state automaton that copies every letter: `s -a/a-> s` for each of
/// `letters`. Its single state acts as the identity.
pub fn identity_automaton(letters: &[&str]) -> Automaton {
    let quads: Vec<(&str, &str, &str, &str)> =
        letters.iter().map(|&a| ("s", a, a, "s")).collect();
    Automaton::new(
        vec!["s".into()],
        letters.iter().map(|&l| l.to_string()).collect(),
        &quads,
    )
    .expect("valid by construction")
}

/// The binary adding machine. Words over `{0,1}` are read as binary
/// numbers, least significant digit first; the state `+1` increments that
/// number and `+0` is the identity. Generates the free monoid on one
/// generator as a semigroup and the infinite cyclic group as a group.
pub fn adding_machine() -> Automaton {
    Automaton::new(
        vec!["+1".into(), "+0".into()],
        vec!["0".into(), "1".into()],
        &[
            ("+1", "1", "0", "+1"),
            ("+1", "0", "1", "+0"),
            ("+0", "0", "0", "+0"),
            ("+0", "1", "1", "+0"),
        ],
    )
    .expect("valid by construction")
}

/// The adding machine extended to a four-letter alphabet with marked
/// copies `0^`, `1^` of the digits: `+1` also increments across a marked
/// digit and `+0` fixes everything. The automaton is no longer complete
/// but still bi-deterministic; together with its inverse it generates the
/// free inverse monoid on one generator.
pub fn extended_adding_machine() -> Automaton {
    Automaton::new(
        vec!["+1".into(), "+0".into()],
        vec!["0".into(), "1".into(), "0^".into(), "1^".into()],
        &[
            ("+1", "1", "0", "+1"),
            ("+1", "0", "1", "+0"),
            ("+1", "0^", "1^", "+0"),
            ("+0", "0", "0", "+0"),
            ("+0", "1", "1", "+0"),
            ("+0", "0^", "0^", "+0"),
            ("+0", "1^", "1^", "+0"),
        ],
    )
    .expect("valid by construction")
}

/// A marking variant of the adding machine: `q` increments a plain binary
/// word while rewriting every digit to its marked copy, and `p` marks the
/// digits without incrementing. Neither state is defined on marked input,
/// so the generated semigroup is finite while the generated inverse
/// semigroup is not.
pub fn mark_adding_machine() -> Automaton {
    Automaton::new(
        vec!["q".into(), "p".into()],
        vec!["0".into(), "1".into(), "0^".into(), "1^".into()],
        &[
            ("q", "1", "0^", "q"),
            ("q", "0", "1^", "p"),
            ("p", "0", "0^", "p"),
            ("p", "1", "1^", "p"),
        ],
    )
    .expect("valid by construction")
}

/// An automaton generating the five-element Brandt semigroup: two states
/// acting on the five letters `a, b, ab, ba, 0` (the two-letter names are
/// single letters).
pub fn brandt_automaton() -> Automaton {
    Automaton::new(
        vec!["p".into(), "q".into()],
        vec![
            "a".into(),
            "b".into(),
            "ab".into(),
            "ba".into(),
            "0".into(),
        ],
        &[
            ("p", "a", "0", "p"),
            ("p", "b", "ab", "p"),
            ("p", "ab", "0", "p"),
            ("p", "ba", "a", "p"),
            ("p", "0", "0", "p"),
            ("q", "a", "ba", "q"),
            ("q", "b", "0", "q"),
            ("q", "ab", "b", "q"),
            ("q", "ba", "0", "q"),
            ("q", "0", "0", "q"),
        ],
    )
    .expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_classes() {
        assert!(identity_automaton(&["a"]).properties().is_g);
        let p = adding_machine().properties();
        assert!(p.is_g && p.complete && p.inverse_deterministic);
        let p = extended_adding_machine().properties();
        assert!(p.is_sbar && !p.complete);
        let p = mark_adding_machine().properties();
        assert!(p.is_sbar && !p.complete && !p.is_g);
        let p = brandt_automaton().properties();
        assert!(p.is_s && p.complete && !p.inverse_deterministic);
    }
}
