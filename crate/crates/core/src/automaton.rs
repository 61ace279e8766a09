//! Automata as finite sets of labelled transitions, together with the
//! structural predicates and the unary/binary constructions on them.
//!
//! An [`Automaton`] is a letter-to-letter transducer: a transition
//! `q -a/b-> p` consumes the letter `a` in state `q`, emits the letter `b`
//! and continues in state `p`. Input and output alphabet coincide, the
//! transition set is arbitrary (possibly non-deterministic, possibly
//! partial). Class membership is a property, not a constructor constraint;
//! see [`PropertyReport`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a state in an automaton's state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Index of a letter in an automaton's alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterId(pub u32);

impl StateId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl LetterId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A single transition `from -input/output-> to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub input: LetterId,
    pub output: LetterId,
    pub to: StateId,
}

/// A finite word over an automaton's alphabet.
pub type Word = Vec<LetterId>;

/// The structural predicates of an automaton, computed by counting
/// transitions per key.
///
/// `deterministic` bounds transitions per `(from, input)` by one,
/// `complete` demands at least one, `reversible` bounds incoming
/// transitions per `(input, to)` by one (co-determinism with respect to
/// the input). The `inverse_*` flags are the same predicates evaluated on
/// the inverse automaton, and `bi_*` is the conjunction of a flag with its
/// inverse twin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub deterministic: bool,
    pub complete: bool,
    pub reversible: bool,
    pub inverse_deterministic: bool,
    pub inverse_complete: bool,
    pub inverse_reversible: bool,
    pub bi_deterministic: bool,
    pub bi_complete: bool,
    pub bi_reversible: bool,
    /// Deterministic automata generate semigroups.
    pub is_s: bool,
    /// Bi-deterministic automata generate inverse semigroups.
    pub is_sbar: bool,
    /// Complete bi-deterministic automata generate groups.
    pub is_g: bool,
}

/// A finite letter-to-letter transducer over a single alphabet.
///
/// States and letters are interned: the `Vec<String>` orders are the orders
/// of the source, and every operation iterates in that order, so results
/// and exports are deterministic.
#[derive(Debug, Clone)]
pub struct Automaton {
    states: Vec<String>,
    alphabet: Arc<Vec<String>>,
    /// Sorted by `(from, input, output, to)`, no duplicates.
    transitions: Vec<Transition>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && *self.alphabet == *other.alphabet
            && self.transitions == other.transitions
    }
}

impl Eq for Automaton {}

fn intern(names: &[String], what: &str) -> Result<()> {
    if names.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} must be non-empty")));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::InvalidArgument(format!(
                "duplicate {what} identifier {n:?}"
            )));
        }
    }
    Ok(())
}

impl Automaton {
    /// Builds an automaton from state names, letter names and transitions
    /// given as `(from, input, output, to)` name quadruples.
    pub fn new<S: AsRef<str>>(
        states: Vec<String>,
        alphabet: Vec<String>,
        transitions: &[(S, S, S, S)],
    ) -> Result<Automaton> {
        intern(&states, "state")?;
        intern(&alphabet, "letter")?;
        let find = |pool: &[String], name: &str, what: &str| -> Result<u32> {
            pool.iter()
                .position(|x| x == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::InputError(format!("unknown {what} {name:?} in transition")))
        };
        let mut out = Vec::with_capacity(transitions.len());
        for (from, input, output, to) in transitions {
            out.push(Transition {
                from: StateId(find(&states, from.as_ref(), "state")?),
                input: LetterId(find(&alphabet, input.as_ref(), "letter")?),
                output: LetterId(find(&alphabet, output.as_ref(), "letter")?),
                to: StateId(find(&states, to.as_ref(), "state")?),
            });
        }
        out.sort_unstable();
        out.dedup();
        Ok(Automaton {
            states,
            alphabet: Arc::new(alphabet),
            transitions: out,
        })
    }

    /// Builds an automaton from already-interned transitions.
    pub(crate) fn from_parts(
        states: Vec<String>,
        alphabet: Arc<Vec<String>>,
        mut transitions: Vec<Transition>,
    ) -> Automaton {
        transitions.sort_unstable();
        transitions.dedup();
        debug_assert!(transitions
            .iter()
            .all(|t| t.from.idx() < states.len() && t.to.idx() < states.len()));
        Automaton {
            states,
            alphabet,
            transitions,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// The shared alphabet handle, as used by canonical machines.
    pub fn alphabet_arc(&self) -> Arc<Vec<String>> {
        Arc::clone(&self.alphabet)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.idx()]
    }

    pub fn letter_name(&self, a: LetterId) -> &str {
        &self.alphabet[a.idx()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .map(|i| LetterId(i as u32))
    }

    /// Parses a word. If the string splits on whitespace into known letter
    /// names those are used; otherwise every character must be a letter by
    /// itself. The empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if let Some(ids) = tokens
            .iter()
            .map(|t| self.letter_id(t))
            .collect::<Option<Vec<_>>>()
        {
            return Ok(ids);
        }
        text.chars()
            .map(|c| {
                self.letter_id(&c.to_string())
                    .ok_or_else(|| Error::InputError(format!("unknown letter {c:?}")))
            })
            .collect()
    }

    /// Renders a word; single-character alphabets concatenate, everything
    /// else joins with spaces.
    pub fn format_word(&self, word: &[LetterId]) -> String {
        let compact = self.alphabet.iter().all(|l| l.chars().count() == 1);
        let names: Vec<&str> = word.iter().map(|&a| self.letter_name(a)).collect();
        if compact {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    /// Parses a state sequence, whitespace-separated or character-wise,
    /// written in application order: the rightmost state acts first.
    pub fn parse_state_seq(&self, text: &str) -> Result<Vec<StateId>> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if let Some(ids) = tokens
            .iter()
            .map(|t| self.state_id(t))
            .collect::<Option<Vec<_>>>()
        {
            return Ok(ids);
        }
        text.chars()
            .map(|c| {
                self.state_id(&c.to_string())
                    .ok_or_else(|| Error::InputError(format!("unknown state {c:?}")))
            })
            .collect()
    }

    /// Computes all structural predicates in one pass over the transitions.
    pub fn properties(&self) -> PropertyReport {
        let n = self.states.len();
        let k = self.alphabet.len();
        let mut per_from_input = vec![0u32; n * k];
        let mut per_input_to = vec![0u32; k * n];
        let mut per_from_output = vec![0u32; n * k];
        let mut per_output_to = vec![0u32; k * n];
        for t in &self.transitions {
            per_from_input[t.from.idx() * k + t.input.idx()] += 1;
            per_input_to[t.input.idx() * n + t.to.idx()] += 1;
            per_from_output[t.from.idx() * k + t.output.idx()] += 1;
            per_output_to[t.output.idx() * n + t.to.idx()] += 1;
        }
        let deterministic = per_from_input.iter().all(|&c| c <= 1);
        let complete = per_from_input.iter().all(|&c| c >= 1);
        let reversible = per_input_to.iter().all(|&c| c <= 1);
        let inverse_deterministic = per_from_output.iter().all(|&c| c <= 1);
        let inverse_complete = per_from_output.iter().all(|&c| c >= 1);
        let inverse_reversible = per_output_to.iter().all(|&c| c <= 1);
        let bi_deterministic = deterministic && inverse_deterministic;
        let bi_complete = complete && inverse_complete;
        let bi_reversible = reversible && inverse_reversible;
        PropertyReport {
            deterministic,
            complete,
            reversible,
            inverse_deterministic,
            inverse_complete,
            inverse_reversible,
            bi_deterministic,
            bi_complete,
            bi_reversible,
            is_s: deterministic,
            is_sbar: bi_deterministic,
            is_g: bi_deterministic && complete,
        }
    }

    /// The inverse automaton: input and output swapped on a renamed copy of
    /// the state set. State `i` of the result is the copy of state `i` of
    /// the input, so taking the inverse twice is the identity up to the
    /// name suffix.
    pub fn inverse(&self) -> Automaton {
        let states = self
            .states
            .iter()
            .map(|s| inverse_state_name(s))
            .collect::<Vec<_>>();
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                from: t.from,
                input: t.output,
                output: t.input,
                to: t.to,
            })
            .collect();
        Automaton::from_parts(states, Arc::clone(&self.alphabet), transitions)
    }

    /// The dual automaton: the roles of states and letters swapped, a
    /// transition `q -a/b-> p` becoming `a -q/p-> b`.
    pub fn dual(&self) -> Automaton {
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                from: StateId(t.input.0),
                input: LetterId(t.from.0),
                output: LetterId(t.to.0),
                to: StateId(t.output.0),
            })
            .collect();
        Automaton::from_parts(
            (*self.alphabet).clone(),
            Arc::new(self.states.clone()),
            transitions,
        )
    }

    /// The `k`-fold composition of the automaton with itself. States are
    /// the full set of `k`-tuples (in application order, the rightmost
    /// component acting first); `power(1)` is the automaton itself.
    pub fn power(&self, k: usize) -> Result<Automaton> {
        if k == 0 {
            return Err(Error::InvalidArgument("power requires k >= 1".into()));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let n = self.states.len();
        n.checked_pow(k as u32)
            .filter(|&total| total <= 1_000_000)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("power state set {n}^{k} is too large"))
            })?;
        // Tuple index: first component is the outermost (last-acting) state.
        let total = n.pow(k as u32);
        let mut states = Vec::with_capacity(total);
        let mut tuple = vec![0usize; k];
        for _ in 0..total {
            let names: Vec<&str> = tuple.iter().map(|&i| self.states[i].as_str()).collect();
            states.push(format!("({})", names.join(",")));
            for pos in (0..k).rev() {
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
        }
        let index_of = |tuple: &[usize]| -> usize { tuple.iter().fold(0, |acc, &i| acc * n + i) };
        let mut transitions = Vec::new();
        let mut tuple = vec![0usize; k];
        for from_idx in 0..total {
            for a in 0..self.alphabet.len() {
                // Chase the letter through the tuple, rightmost state first;
                // non-determinism branches.
                let mut partial: Vec<(LetterId, Vec<usize>)> =
                    vec![(LetterId(a as u32), Vec::new())];
                for pos in (0..k).rev() {
                    let q = StateId(tuple[pos] as u32);
                    let mut next = Vec::new();
                    for (cur, tail) in &partial {
                        for t in self.transitions_from_on(q, *cur) {
                            let mut tail = tail.clone();
                            tail.push(t.to.idx());
                            next.push((t.output, tail));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for (out, rev_tuple) in partial {
                    let to_tuple: Vec<usize> = rev_tuple.into_iter().rev().collect();
                    transitions.push(Transition {
                        from: StateId(from_idx as u32),
                        input: LetterId(a as u32),
                        output: out,
                        to: StateId(index_of(&to_tuple) as u32),
                    });
                }
            }
            for pos in (0..k).rev() {
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
        }
        Ok(Automaton::from_parts(
            states,
            Arc::clone(&self.alphabet),
            transitions,
        ))
    }

    fn transitions_from_on(&self, q: StateId, a: LetterId) -> impl Iterator<Item = &Transition> {
        // Transitions are sorted by (from, input, ..), so binary search for
        // the run start.
        let start = self
            .transitions
            .partition_point(|t| (t.from, t.input) < (q, a));
        self.transitions[start..]
            .iter()
            .take_while(move |t| t.from == q && t.input == a)
    }

    /// All transitions leaving `q` on input `a`.
    pub fn successors(&self, q: StateId, a: LetterId) -> Vec<Transition> {
        self.transitions_from_on(q, a).copied().collect()
    }

    /// Canonical JSON rendering; parsing it back yields an equal automaton.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&AutomatonJson::from(self)).expect("serialization cannot fail")
    }

    /// Parses the JSON automaton format.
    pub fn from_json(text: &str) -> Result<Automaton> {
        let raw: AutomatonJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.build()
    }

    /// DOT rendering with one edge per transition labelled `input/output`.
    /// Output is byte-stable for equal automata.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for s in &self.states {
            out.push_str(&format!("  {};\n", dot_quote(s)));
        }
        for t in &self.transitions {
            out.push_str(&format!(
                "  {} -> {} [label={}];\n",
                dot_quote(self.state_name(t.from)),
                dot_quote(self.state_name(t.to)),
                dot_quote(&format!(
                    "{}/{}",
                    self.letter_name(t.input),
                    self.letter_name(t.output)
                )),
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn inverse_state_name(name: &str) -> String {
    format!("{name}~")
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Composes two automata over the same alphabet: `first` runs on the input
/// and `after` consumes its output. The state set is the full formal
/// product, named `(p,q)` for `p` in `after` and `q` in `first`.
pub fn compose(after: &Automaton, first: &Automaton) -> Result<Automaton> {
    let letter_map: Vec<LetterId> = first
        .alphabet()
        .iter()
        .map(|l| {
            after
                .letter_id(l)
                .ok_or_else(|| Error::AlphabetMismatch(format!("letter {l:?} missing")))
        })
        .collect::<Result<_>>()?;
    if after.letter_count() != first.letter_count() {
        return Err(Error::AlphabetMismatch(format!(
            "{} vs {} letters",
            after.letter_count(),
            first.letter_count()
        )));
    }
    let inv_letter_map: Vec<LetterId> = after
        .alphabet()
        .iter()
        .map(|l| first.letter_id(l).expect("checked above"))
        .collect();
    let nq = first.state_count();
    let mut states = Vec::with_capacity(after.state_count() * nq);
    for p in after.states() {
        for q in first.states() {
            states.push(format!("({p},{q})"));
        }
    }
    let mut transitions = Vec::new();
    for t1 in first.transitions() {
        let b_in_after = letter_map[t1.output.idx()];
        for p in 0..after.state_count() {
            for t2 in after.successors(StateId(p as u32), b_in_after) {
                transitions.push(Transition {
                    from: StateId((p * nq + t1.from.idx()) as u32),
                    input: t1.input,
                    output: inv_letter_map[t2.output.idx()],
                    to: StateId((t2.to.idx() * nq + t1.to.idx()) as u32),
                });
            }
        }
    }
    Ok(Automaton::from_parts(
        states,
        first.alphabet_arc(),
        transitions,
    ))
}

/// The disjoint union of two automata with the alphabets merged by letter
/// name. States are always taken apart; colliding right-hand names get a
/// `'` suffix until fresh. The returned partition maps recover which result
/// state came from which side.
pub struct UnionAutomaton {
    pub automaton: Automaton,
    /// For each state of `a`, its id in the union.
    pub left: Vec<StateId>,
    /// For each state of `b`, its id in the union.
    pub right: Vec<StateId>,
}

pub fn disjoint_union(a: &Automaton, b: &Automaton) -> UnionAutomaton {
    let mut alphabet: Vec<String> = a.alphabet().to_vec();
    for l in b.alphabet() {
        if !alphabet.contains(l) {
            alphabet.push(l.clone());
        }
    }
    let letter_in_union = |side: &Automaton, id: LetterId| -> LetterId {
        let name = side.letter_name(id);
        LetterId(alphabet.iter().position(|x| x == name).unwrap() as u32)
    };
    let mut states: Vec<String> = a.states().to_vec();
    let left: Vec<StateId> = (0..a.state_count() as u32).map(StateId).collect();
    let mut right = Vec::with_capacity(b.state_count());
    for s in b.states() {
        let mut name = s.clone();
        while states.contains(&name) {
            name.push('\'');
        }
        right.push(StateId(states.len() as u32));
        states.push(name);
    }
    let mut transitions = Vec::new();
    for t in a.transitions() {
        transitions.push(Transition {
            from: left[t.from.idx()],
            input: letter_in_union(a, t.input),
            output: letter_in_union(a, t.output),
            to: left[t.to.idx()],
        });
    }
    for t in b.transitions() {
        transitions.push(Transition {
            from: right[t.from.idx()],
            input: letter_in_union(b, t.input),
            output: letter_in_union(b, t.output),
            to: right[t.to.idx()],
        });
    }
    UnionAutomaton {
        automaton: Automaton::from_parts(states, Arc::new(alphabet), transitions),
        left,
        right,
    }
}

#[derive(Serialize, Deserialize)]
struct TransitionJson {
    from: String,
    #[serde(rename = "in")]
    input: String,
    out: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct AutomatonJson {
    states: Vec<String>,
    alphabet: Vec<String>,
    transitions: Vec<TransitionJson>,
}

impl From<&Automaton> for AutomatonJson {
    fn from(a: &Automaton) -> Self {
        AutomatonJson {
            states: a.states.clone(),
            alphabet: (*a.alphabet).clone(),
            transitions: a
                .transitions
                .iter()
                .map(|t| TransitionJson {
                    from: a.state_name(t.from).to_string(),
                    input: a.letter_name(t.input).to_string(),
                    out: a.letter_name(t.output).to_string(),
                    to: a.state_name(t.to).to_string(),
                })
                .collect(),
        }
    }
}

impl AutomatonJson {
    fn build(self) -> Result<Automaton> {
        let quads: Vec<(String, String, String, String)> = self
            .transitions
            .into_iter()
            .map(|t| (t.from, t.input, t.out, t.to))
            .collect();
        Automaton::new(self.states, self.alphabet, &quads)
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "automaton with {} states over {} letters, {} transitions",
            self.states.len(),
            self.alphabet.len(),
            self.transitions.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::semantics::{act, SAutomaton};
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn adding_machine_properties() {
        let report = samples::adding_machine().properties();
        assert!(report.deterministic && report.complete && report.inverse_deterministic);
        // Two transitions with input 0 enter +0.
        assert!(!report.reversible);
        assert!(report.is_g && report.is_s && report.is_sbar);
    }

    #[test]
    fn bireversible_yet_nondeterministic() {
        // One state branching on the same input/output pair to two targets.
        let aut = Automaton::new(
            vec!["q".into(), "r".into(), "s".into()],
            vec!["a".into(), "b".into()],
            &[("q", "a", "b", "r"), ("q", "a", "b", "s")],
        )
        .unwrap();
        let report = aut.properties();
        assert!(report.bi_reversible);
        assert!(!report.deterministic && !report.inverse_deterministic);
    }

    #[test]
    fn identity_automaton_has_every_flag() {
        let report = samples::identity_automaton(&["a"]).properties();
        assert!(
            report.deterministic
                && report.complete
                && report.reversible
                && report.inverse_deterministic
                && report.inverse_complete
                && report.inverse_reversible
                && report.bi_deterministic
                && report.bi_complete
                && report.bi_reversible
                && report.is_s
                && report.is_sbar
                && report.is_g
        );
    }

    #[test]
    fn inverse_of_adding_machine() {
        let inv = samples::adding_machine().inverse();
        assert_eq!(inv.states(), ["+1~", "+0~"]);
        // +1~ has the 0/1 self loop and 1/0 into +0~.
        let q = inv.state_id("+1~").unwrap();
        let zero = inv.letter_id("0").unwrap();
        let one = inv.letter_id("1").unwrap();
        assert_eq!(
            inv.successors(q, zero),
            vec![Transition {
                from: q,
                input: zero,
                output: one,
                to: q
            }]
        );
        let t = inv.successors(q, one);
        assert_eq!(t.len(), 1);
        assert_eq!(inv.state_name(t[0].to), "+0~");
    }

    #[test]
    fn inverse_of_mark_adding_machine() {
        let inv = samples::mark_adding_machine().inverse();
        // q~ has the 0^/1 loop and 1^/0 into p~; p~ fixes marks downward.
        let q = inv.state_id("q~").unwrap();
        let p = inv.state_id("p~").unwrap();
        let m0 = inv.letter_id("0^").unwrap();
        let m1 = inv.letter_id("1^").unwrap();
        assert_eq!(inv.successors(q, m0)[0].to, q);
        assert_eq!(inv.letter_name(inv.successors(q, m0)[0].output), "1");
        assert_eq!(inv.successors(q, m1)[0].to, p);
        assert_eq!(inv.letter_name(inv.successors(p, m1)[0].output), "1");
        let plain0 = inv.letter_id("0").unwrap();
        assert!(inv.successors(q, plain0).is_empty());
    }

    fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn involutions_on_random_automata() {
        let mut rng = seeded(11);
        for _ in 0..50 {
            let a = crate::random::automaton(&mut rng, 4, 3);
            assert_eq!(a.inverse().inverse().transitions(), a.transitions());
            assert_eq!(a.dual().dual(), a);
        }
    }

    #[test]
    fn dual_flag_correspondences() {
        let mut rng = seeded(12);
        for _ in 0..100 {
            let a = crate::random::automaton(&mut rng, 4, 3);
            let da = a.dual().properties();
            let pa = a.properties();
            assert_eq!(pa.deterministic, da.deterministic);
            assert_eq!(pa.complete, da.complete);
            assert_eq!(pa.inverse_deterministic, da.reversible);
            assert_eq!(pa.inverse_reversible, da.inverse_reversible);
        }
    }

    #[test]
    fn union_with_inverse_is_the_extension() {
        let a = samples::extended_adding_machine();
        let union = disjoint_union(&a, &a.inverse());
        assert_eq!(union.automaton.state_count(), 2 * a.state_count());
        assert_eq!(union.automaton.letter_count(), a.letter_count());
        assert_eq!(
            union.automaton.transitions().len(),
            2 * a.transitions().len()
        );
        // Provenance: the recorded partitions recover both sides.
        for (i, &s) in union.left.iter().enumerate() {
            assert_eq!(
                union.automaton.state_name(s),
                a.state_name(StateId(i as u32))
            );
        }
        for (i, &s) in union.right.iter().enumerate() {
            assert_eq!(
                union.automaton.state_name(s),
                format!("{}~", a.state_name(StateId(i as u32)))
            );
        }
    }

    #[test]
    fn union_renames_colliding_states() {
        let a = samples::adding_machine();
        let union = disjoint_union(&a, &a);
        assert_eq!(union.automaton.state_count(), 4);
        assert_eq!(union.automaton.states(), ["+1", "+0", "+1'", "+0'"]);
    }

    #[test]
    fn composition_preserves_classes() {
        let mut rng = seeded(13);
        for _ in 0..40 {
            let a = crate::random::deterministic_automaton(&mut rng, 3, 3, 0.8);
            let mut b = crate::random::deterministic_automaton(&mut rng, 3, 3, 0.8);
            while b.letter_count() != a.letter_count() {
                b = crate::random::deterministic_automaton(&mut rng, 3, 3, 0.8);
            }
            let c = compose(&b, &a).unwrap();
            assert!(c.properties().deterministic);
        }
        for _ in 0..40 {
            let a = crate::random::complete_automaton(&mut rng, 3, 3);
            let mut b = crate::random::complete_automaton(&mut rng, 3, 3);
            while b.letter_count() != a.letter_count() {
                b = crate::random::complete_automaton(&mut rng, 3, 3);
            }
            let c = compose(&b, &a).unwrap();
            assert!(c.properties().complete);
        }
        for _ in 0..40 {
            let a = crate::random::reversible_automaton(&mut rng, 3, 3);
            let mut b = crate::random::reversible_automaton(&mut rng, 3, 3);
            while b.letter_count() != a.letter_count() {
                b = crate::random::reversible_automaton(&mut rng, 3, 3);
            }
            let c = compose(&b, &a).unwrap();
            assert!(c.properties().reversible);
        }
    }

    #[test]
    fn composing_adding_machine_adds_two() {
        let a = samples::adding_machine();
        let c = SAutomaton::new(compose(&a, &a).unwrap()).unwrap();
        let plus2 = c.state_id("(+1,+1)").unwrap();
        let w = c.parse_word("00").unwrap();
        let out = act(&c, &[plus2], &w).unwrap().unwrap();
        assert_eq!(c.format_word(&out), "01");
    }

    #[test]
    fn compose_with_identity_changes_nothing() {
        let a = samples::adding_machine();
        let id = samples::identity_automaton(&["0", "1"]);
        let c = SAutomaton::new(compose(&id, &a).unwrap()).unwrap();
        let sa = SAutomaton::new(a.clone()).unwrap();
        for state in ["+1", "+0"] {
            let composite = c.state_id(&format!("(s,{state})")).unwrap();
            let plain = sa.state_id(state).unwrap();
            let mut words = vec![Vec::new()];
            for _ in 0..5 {
                let mut next = Vec::new();
                for w in &words {
                    for b in 0..2u32 {
                        let mut w = w.clone();
                        w.push(LetterId(b));
                        next.push(w);
                    }
                }
                words = next;
                for w in &words {
                    assert_eq!(
                        act(&c, &[composite], w).unwrap(),
                        act(&sa, &[plain], w).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn compose_rejects_alphabet_mismatch() {
        let a = samples::adding_machine();
        let b = samples::brandt_automaton();
        assert!(matches!(
            compose(&a, &b),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn power_sizes_and_actions() {
        let a = samples::adding_machine();
        assert!(a.power(0).is_err());
        assert_eq!(a.power(1).unwrap(), a);
        for k in [2usize, 3] {
            let p = a.power(k).unwrap();
            assert_eq!(p.state_count(), a.state_count().pow(k as u32));
        }
        let squared = SAutomaton::new(a.power(2).unwrap()).unwrap();
        let sa = SAutomaton::new(a.clone()).unwrap();
        let composite = squared.state_id("(+1,+1)").unwrap();
        let seq = [sa.state_id("+1").unwrap(), sa.state_id("+1").unwrap()];
        let mut words = vec![Vec::new()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &words {
                for b in 0..2u32 {
                    let mut w = w.clone();
                    w.push(LetterId(b));
                    next.push(w);
                }
            }
            words = next;
            for w in &words {
                assert_eq!(
                    act(&squared, &[composite], w).unwrap(),
                    act(&sa, &seq, w).unwrap()
                );
            }
        }
    }

    #[test]
    fn brandt_cubed_state_acts_like_single_state() {
        let a = samples::brandt_automaton();
        let cubed = SAutomaton::new(a.power(3).unwrap()).unwrap();
        let sa = SAutomaton::new(a.clone()).unwrap();
        let pqp = cubed.state_id("(p,q,p)").unwrap();
        let p = sa.state_id("p").unwrap();
        for letter in 0..a.letter_count() as u32 {
            let w = vec![LetterId(letter)];
            assert_eq!(
                act(&cubed, &[pqp], &w).unwrap(),
                act(&sa, &[p], &w).unwrap()
            );
        }
    }

    #[test]
    fn compose_association_up_to_renaming() {
        let mut rng = seeded(14);
        for _ in 0..10 {
            let a = crate::random::deterministic_automaton(&mut rng, 2, 2, 0.9);
            let (b, c) = loop {
                let b = crate::random::deterministic_automaton(&mut rng, 2, 2, 0.9);
                let c = crate::random::deterministic_automaton(&mut rng, 2, 2, 0.9);
                if b.letter_count() == a.letter_count() && c.letter_count() == a.letter_count() {
                    break (b, c);
                }
            };
            let left = SAutomaton::new(compose(&compose(&c, &b).unwrap(), &a).unwrap()).unwrap();
            let right = SAutomaton::new(compose(&c, &compose(&b, &a).unwrap()).unwrap()).unwrap();
            for cs in c.states() {
                for bs in b.states() {
                    for ass in a.states() {
                        let l = left.state_id(&format!("(({cs},{bs}),{ass})")).unwrap();
                        let r = right.state_id(&format!("({cs},({bs},{ass}))")).unwrap();
                        let mut words = vec![Vec::new()];
                        for _ in 0..4 {
                            let mut next = Vec::new();
                            for w in &words {
                                for x in 0..a.letter_count() as u32 {
                                    let mut w = w.clone();
                                    w.push(LetterId(x));
                                    next.push(w);
                                }
                            }
                            words = next;
                            for w in &words {
                                assert_eq!(
                                    act(&left, &[l], w).unwrap(),
                                    act(&right, &[r], w).unwrap()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_matches_canonical_format() {
        let json = samples::adding_machine().to_json();
        let expected = "{\"states\":[\"+1\",\"+0\"],\"alphabet\":[\"0\",\"1\"],\
                        \"transitions\":[\
                        {\"from\":\"+1\",\"in\":\"0\",\"out\":\"1\",\"to\":\"+0\"},\
                        {\"from\":\"+1\",\"in\":\"1\",\"out\":\"0\",\"to\":\"+1\"},\
                        {\"from\":\"+0\",\"in\":\"0\",\"out\":\"0\",\"to\":\"+0\"},\
                        {\"from\":\"+0\",\"in\":\"1\",\"out\":\"1\",\"to\":\"+0\"}]}";
        assert_eq!(json, expected);
        assert_eq!(Automaton::from_json(&json).unwrap(), samples::adding_machine());
    }

    #[test]
    fn dot_export_is_stable() {
        let dot = samples::adding_machine().to_dot();
        assert!(dot.contains("\"+1\" -> \"+0\" [label=\"0/1\"];"));
        assert_eq!(dot, samples::adding_machine().to_dot());
    }

    #[test]
    fn rejects_malformed_inputs() {
        assert!(Automaton::new(vec![], vec!["a".into()], &[] as &[(&str, &str, &str, &str)]).is_err());
        assert!(Automaton::new(vec!["q".into()], vec![], &[] as &[(&str, &str, &str, &str)]).is_err());
        assert!(Automaton::new(
            vec!["q".into(), "q".into()],
            vec!["a".into()],
            &[] as &[(&str, &str, &str, &str)]
        )
        .is_err());
        assert!(Automaton::new(
            vec!["q".into()],
            vec!["a".into()],
            &[("q", "a", "a", "missing")]
        )
        .is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_json_round_trip(seed in 0u64..10_000) {
            let mut rng = seeded(seed);
            let a = crate::random::automaton(&mut rng, 4, 3);
            let json = a.to_json();
            let back = Automaton::from_json(&json).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_json(), json);
        }

        #[test]
        fn prop_involutions(seed in 0u64..10_000) {
            let mut rng = seeded(seed);
            let a = crate::random::automaton(&mut rng, 4, 3);
            let double_inverse = a.inverse().inverse();
            prop_assert_eq!(double_inverse.transitions(), a.transitions());
            prop_assert_eq!(a.dual().dual(), a.clone());
            // Inversion swaps the determinism flags.
            let p = a.properties();
            let pi = a.inverse().properties();
            prop_assert_eq!(p.deterministic, pi.inverse_deterministic);
            prop_assert_eq!(p.inverse_deterministic, pi.deterministic);
            prop_assert_eq!(p.reversible, pi.inverse_reversible);
            prop_assert_eq!(p.complete, pi.inverse_complete);
        }
    }
}
