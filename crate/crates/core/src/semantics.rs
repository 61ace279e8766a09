//! The partial actions of deterministic automata on finite words.
//!
//! A state `q` acts on a word letter by letter: it rewrites the first
//! letter and hands the rest of the word to its successor state. A state
//! sequence acts by function composition, the rightmost state first. Both
//! actions are partial on non-complete automata; an undefined action is an
//! ordinary `None` result, never an error.

use std::ops::Deref;

use crate::automaton::{disjoint_union, Automaton, LetterId, StateId, Word};
use crate::error::{Error, Result};

/// A deterministic automaton with a constant-time transition table.
///
/// Wrapping is the only class check that is done by a constructor; every
/// other class requirement (bi-determinism, completeness) is validated by
/// the operation that needs it.
#[derive(Debug, Clone)]
pub struct SAutomaton {
    inner: Automaton,
    /// `table[q * letters + a]` is the unique transition from `q` on `a`.
    table: Vec<Option<(LetterId, StateId)>>,
}

impl Deref for SAutomaton {
    type Target = Automaton;

    fn deref(&self) -> &Automaton {
        &self.inner
    }
}

impl SAutomaton {
    pub fn new(automaton: Automaton) -> Result<SAutomaton> {
        let k = automaton.letter_count();
        let mut table = vec![None; automaton.state_count() * k];
        for t in automaton.transitions() {
            let slot = &mut table[t.from.idx() * k + t.input.idx()];
            if slot.is_some() {
                return Err(Error::ClassViolation(format!(
                    "not deterministic: two transitions from {:?} on {:?}",
                    automaton.state_name(t.from),
                    automaton.letter_name(t.input)
                )));
            }
            *slot = Some((t.output, t.to));
        }
        Ok(SAutomaton {
            inner: automaton,
            table,
        })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.inner
    }

    /// The unique transition from `q` on `a`, if any.
    #[inline]
    pub fn step(&self, q: StateId, a: LetterId) -> Option<(LetterId, StateId)> {
        self.table[q.idx() * self.inner.letter_count() + a.idx()]
    }

    /// Runs a composite state (a tuple of states, rightmost acting first)
    /// on one letter. Returns the emitted letter and the advanced tuple.
    pub fn step_tuple(&self, tuple: &[StateId], a: LetterId) -> Option<(LetterId, Vec<StateId>)> {
        let mut cur = a;
        let mut next = vec![StateId(0); tuple.len()];
        for i in (0..tuple.len()).rev() {
            let (out, to) = self.step(tuple[i], cur)?;
            next[i] = to;
            cur = out;
        }
        Some((cur, next))
    }

    /// The union of the automaton with its inverse, for acting with formal
    /// inverse generators. Requires a bi-deterministic automaton.
    pub fn extended(&self) -> Result<ExtendedAutomaton> {
        if !self.inner.properties().bi_deterministic {
            return Err(Error::ClassViolation(
                "extension with inverses requires a bi-deterministic automaton".into(),
            ));
        }
        let union = disjoint_union(&self.inner, &self.inner.inverse());
        debug_assert!(union
            .left
            .iter()
            .enumerate()
            .all(|(i, s)| s.idx() == i));
        let base_states = self.inner.state_count();
        Ok(ExtendedAutomaton {
            machine: SAutomaton::new(union.automaton)?,
            base_states,
        })
    }
}

/// A bi-deterministic automaton together with its inverse, as one
/// deterministic automaton. State `i` is state `i` of the base automaton;
/// state `base_states + i` is its formal inverse.
#[derive(Debug, Clone)]
pub struct ExtendedAutomaton {
    pub machine: SAutomaton,
    pub base_states: usize,
}

impl ExtendedAutomaton {
    pub fn inverse_of(&self, q: StateId) -> StateId {
        if q.idx() < self.base_states {
            StateId((q.idx() + self.base_states) as u32)
        } else {
            StateId((q.idx() - self.base_states) as u32)
        }
    }

    pub fn is_base_state(&self, q: StateId) -> bool {
        q.idx() < self.base_states
    }
}

/// A sequence of states acting by composition, rightmost first; the empty
/// sequence is the identity. `extended` records whether the identifiers
/// live in an automaton or in its union with the inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSeq {
    pub states: Vec<StateId>,
    pub extended: bool,
}

impl StateSeq {
    pub fn new(states: Vec<StateId>) -> StateSeq {
        StateSeq {
            states,
            extended: false,
        }
    }

    pub fn new_extended(states: Vec<StateId>) -> StateSeq {
        StateSeq {
            states,
            extended: true,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The state names, in the same order as the sequence.
    pub fn names(&self, automaton: &Automaton) -> Vec<String> {
        self.states
            .iter()
            .map(|&q| automaton.state_name(q).to_string())
            .collect()
    }
}

fn check_word(aut: &Automaton, word: &[LetterId]) -> Result<()> {
    for &a in word {
        if a.idx() >= aut.letter_count() {
            return Err(Error::InputError(format!(
                "letter index {} out of range",
                a.idx()
            )));
        }
    }
    Ok(())
}

fn check_seq(aut: &Automaton, seq: &[StateId]) -> Result<()> {
    for &q in seq {
        if q.idx() >= aut.state_count() {
            return Err(Error::InputError(format!(
                "state index {} out of range",
                q.idx()
            )));
        }
    }
    Ok(())
}

/// Applies a state sequence to a word. `None` means the action is not
/// defined on this word; when defined, the output has the input's length.
pub fn act(aut: &SAutomaton, seq: &[StateId], word: &[LetterId]) -> Result<Option<Word>> {
    check_seq(aut, seq)?;
    check_word(aut, word)?;
    let mut tuple = seq.to_vec();
    let mut out = Vec::with_capacity(word.len());
    for &a in word {
        match aut.step_tuple(&tuple, a) {
            Some((b, next)) => {
                out.push(b);
                tuple = next;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// The state sequence reached after a sequence reads a word, when every
/// intermediate action is defined. It is the state reached in the
/// corresponding power automaton; the empty sequence stays empty.
pub fn next_state(aut: &SAutomaton, seq: &[StateId], word: &[LetterId]) -> Result<Option<StateSeq>> {
    check_seq(aut, seq)?;
    check_word(aut, word)?;
    let mut tuple = seq.to_vec();
    for &a in word {
        match aut.step_tuple(&tuple, a) {
            Some((_, next)) => tuple = next,
            None => return Ok(None),
        }
    }
    Ok(Some(StateSeq::new(tuple)))
}

/// Applies a sequence to the finite approximation `u v^k` of the
/// ultimately periodic word `u v^omega`.
pub fn act_omega_prefix(
    aut: &SAutomaton,
    seq: &[StateId],
    prefix: &[LetterId],
    period: &[LetterId],
    repetitions: usize,
) -> Result<Option<Word>> {
    if period.is_empty() {
        return Err(Error::InvalidArgument(
            "the periodic part must be non-empty".into(),
        ));
    }
    let mut word = prefix.to_vec();
    for _ in 0..repetitions {
        word.extend_from_slice(period);
    }
    act(aut, seq, &word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn adding() -> SAutomaton {
        SAutomaton::new(samples::adding_machine()).unwrap()
    }

    fn act_str(aut: &SAutomaton, seq: &str, word: &str) -> Option<String> {
        let seq = aut.parse_state_seq(seq).unwrap();
        let word = aut.parse_word(word).unwrap();
        act(aut, &seq, &word)
            .unwrap()
            .map(|w| aut.format_word(&w))
    }

    #[test]
    fn adding_machine_increments_reverse_binary() {
        let aut = adding();
        assert_eq!(act_str(&aut, "+1", "010").as_deref(), Some("110"));
        assert_eq!(act_str(&aut, "+1", "1100").as_deref(), Some("0010"));
    }

    #[test]
    fn mark_adding_machine_is_partial() {
        let aut = SAutomaton::new(samples::mark_adding_machine()).unwrap();
        let q = aut.parse_state_seq("q").unwrap();
        let w = aut.parse_word("00").unwrap();
        let out = act(&aut, &q, &w).unwrap().unwrap();
        assert_eq!(aut.format_word(&out), "1^ 0^");
        assert_eq!(act(&aut, &q, &out).unwrap(), None);
    }

    #[test]
    fn empty_sequence_is_identity() {
        let aut = adding();
        let w = aut.parse_word("0110").unwrap();
        assert_eq!(act(&aut, &[], &w).unwrap().as_deref(), Some(&w[..]));
        assert_eq!(
            next_state(&aut, &[], &w).unwrap().unwrap(),
            StateSeq::new(vec![])
        );
    }

    #[test]
    fn next_state_follows_transitions() {
        let aut = adding();
        let plus1 = aut.state_id("+1").unwrap();
        let plus0 = aut.state_id("+0").unwrap();
        let one = aut.parse_word("1").unwrap();
        let zero = aut.parse_word("0").unwrap();
        assert_eq!(
            next_state(&aut, &[plus1], &one).unwrap().unwrap().states,
            vec![plus1]
        );
        assert_eq!(
            next_state(&aut, &[plus1], &zero).unwrap().unwrap().states,
            vec![plus0]
        );
        // Reading nothing changes nothing.
        assert_eq!(
            next_state(&aut, &[plus1], &[]).unwrap().unwrap().states,
            vec![plus1]
        );
    }

    #[test]
    fn brandt_state_keeps_looping() {
        let aut = SAutomaton::new(samples::brandt_automaton()).unwrap();
        let p = aut.state_id("p").unwrap();
        let b = aut.parse_word("b").unwrap();
        let out = act(&aut, &[p], &b).unwrap().unwrap();
        assert_eq!(aut.format_word(&out), "ab");
        assert_eq!(
            next_state(&aut, &[p], &b).unwrap().unwrap().states,
            vec![p]
        );
    }

    #[test]
    fn omega_prefix_wraps_increment() {
        let aut = adding();
        let seq = aut.parse_state_seq("+1").unwrap();
        let period = aut.parse_word("1").unwrap();
        let out = act_omega_prefix(&aut, &seq, &[], &period, 4).unwrap().unwrap();
        assert_eq!(aut.format_word(&out), "0000");
        // The empty sequence returns u v^k itself.
        let out = act_omega_prefix(&aut, &[], &[], &period, 3).unwrap().unwrap();
        assert_eq!(aut.format_word(&out), "111");
    }

    #[test]
    fn mark_adding_omega_prefix() {
        let aut = SAutomaton::new(samples::mark_adding_machine()).unwrap();
        let seq = aut.parse_state_seq("q").unwrap();
        let period = aut.parse_word("0").unwrap();
        let out = act_omega_prefix(&aut, &seq, &[], &period, 3).unwrap().unwrap();
        assert_eq!(aut.format_word(&out), "1^ 0^ 0^");
    }

    #[test]
    fn unknown_letter_is_an_error_not_undefined() {
        let aut = adding();
        assert!(aut.parse_word("012").is_err());
    }

    #[test]
    fn length_preservation_and_prefix_compatibility() {
        let aut = SAutomaton::new(samples::brandt_automaton()).unwrap();
        let p = aut.state_id("p").unwrap();
        let q = aut.state_id("q").unwrap();
        let letters: Vec<LetterId> = (0..aut.letter_count() as u32).map(LetterId).collect();
        let mut words = vec![Vec::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &words {
                for &a in &letters {
                    let mut w = w.clone();
                    w.push(a);
                    next.push(w);
                }
            }
            words = next;
            for w in &words {
                for seq in [vec![p], vec![q], vec![p, q], vec![q, p, q]] {
                    if let Some(out) = act(&aut, &seq, w).unwrap() {
                        assert_eq!(out.len(), w.len());
                        let shorter = &w[..w.len() - 1];
                        let prefix = act(&aut, &seq, shorter).unwrap().unwrap();
                        assert_eq!(&out[..shorter.len()], &prefix[..]);
                    }
                }
            }
        }
    }
}
