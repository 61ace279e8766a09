//! Canonical representations of the elements generated by a deterministic
//! automaton.
//!
//! The action of a state sequence is a partial, length-preserving,
//! prefix-compatible map on words. Two sequences are equal as elements
//! exactly when these maps coincide, and each map has a unique minimal
//! partial transducer computing it: reachable states only, no two states
//! bisimilar, states numbered in breadth-first discovery order. Comparing
//! these [`CanonicalMachine`]s decides the word problem.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::automaton::{Automaton, LetterId, StateId};
use crate::error::{Error, Result};
use crate::semantics::SAutomaton;

/// A row of a machine: for each letter, the emitted letter and the
/// successor state, or `None` where the action is undefined.
pub type MachineRow = Vec<Option<(LetterId, u32)>>;

/// The canonical minimal partial transducer of one element. The initial
/// state is `0`; two machines represent the same element exactly when they
/// are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalMachine {
    alphabet: Arc<Vec<String>>,
    table: Vec<MachineRow>,
}

impl CanonicalMachine {
    pub fn state_count(&self) -> usize {
        self.table.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn table(&self) -> &[MachineRow] {
        &self.table
    }

    /// The machine of the identity element over `alphabet`.
    pub fn identity(alphabet: Arc<Vec<String>>) -> CanonicalMachine {
        let row: MachineRow = (0..alphabet.len() as u32)
            .map(|a| Some((LetterId(a), 0)))
            .collect();
        CanonicalMachine {
            alphabet,
            table: vec![row],
        }
    }

    /// Whether this machine computes the identity on every word.
    pub fn is_identity(&self) -> bool {
        self.table.len() == 1
            && self.table[0]
                .iter()
                .enumerate()
                .all(|(a, e)| *e == Some((LetterId(a as u32), 0)))
    }

    /// Applies the element to a word; `None` where undefined.
    pub fn apply(&self, word: &[LetterId]) -> Option<Vec<LetterId>> {
        let mut state = 0u32;
        let mut out = Vec::with_capacity(word.len());
        for &a in word {
            let (b, next) = self.table[state as usize][a.idx()]?;
            out.push(b);
            state = next;
        }
        Some(out)
    }

    /// The machine of the composite `self` after `first` (`first` acts
    /// first). Partiality composes: defined where `first` is defined and
    /// `self` is defined on its output.
    pub fn compose(&self, first: &CanonicalMachine) -> CanonicalMachine {
        debug_assert_eq!(*self.alphabet, *first.alphabet);
        let letters = self.alphabet.len();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        index.insert((0, 0), 0);
        queue.push_back((0u32, 0u32));
        let mut table: Vec<MachineRow> = Vec::new();
        while let Some((outer, inner)) = queue.pop_front() {
            let mut row: MachineRow = vec![None; letters];
            for a in 0..letters {
                if let Some((mid, inner_next)) = first.table[inner as usize][a] {
                    if let Some((out, outer_next)) = self.table[outer as usize][mid.idx()] {
                        let key = (outer_next, inner_next);
                        let next = match index.get(&key) {
                            Some(&id) => id,
                            None => {
                                let id = index.len() as u32;
                                index.insert(key, id);
                                queue.push_back(key);
                                id
                            }
                        };
                        row[a] = Some((out, next));
                    }
                }
            }
            table.push(row);
        }
        canonical_form(Arc::clone(&self.alphabet), table)
    }

    /// The machine of the group inverse, when the element is an injective
    /// total-or-partial map whose transition outputs are distinct per
    /// state (always the case for elements over a bi-deterministic
    /// automaton). Returns `None` otherwise.
    pub fn inverse(&self) -> Option<CanonicalMachine> {
        let letters = self.alphabet.len();
        let mut table = Vec::with_capacity(self.table.len());
        for row in &self.table {
            let mut inv_row: MachineRow = vec![None; letters];
            for (a, entry) in row.iter().enumerate() {
                if let Some((b, next)) = entry {
                    if inv_row[b.idx()].is_some() {
                        return None;
                    }
                    inv_row[b.idx()] = Some((LetterId(a as u32), *next));
                }
            }
            table.push(inv_row);
        }
        Some(canonical_form(Arc::clone(&self.alphabet), table))
    }

    /// A content hash suitable for deduplication; equality of hashes must
    /// be confirmed by structural comparison.
    pub fn structural_hash(&self) -> u128 {
        let mut lo = DefaultHasher::new();
        0u8.hash(&mut lo);
        self.table.hash(&mut lo);
        let mut hi = DefaultHasher::new();
        1u8.hash(&mut hi);
        self.alphabet.len().hash(&mut hi);
        self.table.hash(&mut hi);
        ((hi.finish() as u128) << 64) | lo.finish() as u128
    }

    /// Serializes to the JSON automaton format with an extra `"initial"`
    /// field; state `i` is named `s<i>`.
    pub fn to_json(&self) -> String {
        let states: Vec<String> = (0..self.table.len()).map(|i| format!("s{i}")).collect();
        let transitions: Vec<serde_json::Value> = self
            .table
            .iter()
            .enumerate()
            .flat_map(|(q, row)| {
                let states = &states;
                let alphabet = &self.alphabet;
                row.iter().enumerate().filter_map(move |(a, entry)| {
                    entry.map(|(b, next)| {
                        serde_json::json!({
                            "from": states[q],
                            "in": alphabet[a],
                            "out": alphabet[b.idx()],
                            "to": states[next as usize],
                        })
                    })
                })
            })
            .collect();
        serde_json::json!({
            "states": states,
            "alphabet": *self.alphabet,
            "initial": "s0",
            "transitions": transitions,
        })
        .to_string()
    }
}

/// Minimizes a reachable table and renumbers it canonically.
///
/// The partition starts from the per-letter definedness/output signature
/// and is refined by successor blocks until stable; the quotient is then
/// numbered in breadth-first order from the initial state, letters visited
/// in alphabet order.
fn canonical_form(alphabet: Arc<Vec<String>>, table: Vec<MachineRow>) -> CanonicalMachine {
    let n = table.len();
    debug_assert!(n > 0);
    // Initial split: the output signature, ignoring successors.
    let mut block: Vec<u32> = assign_blocks(table.iter().map(|row| {
        row.iter()
            .map(|e| e.map(|(out, _)| out))
            .collect::<Vec<_>>()
    }));
    loop {
        let next: Vec<u32> = assign_blocks((0..n).map(|q| {
            (
                block[q],
                table[q]
                    .iter()
                    .map(|e| e.map(|(out, to)| (out, block[to as usize])))
                    .collect::<Vec<_>>(),
            )
        }));
        let stable = next == block;
        block = next;
        if stable {
            break;
        }
    }
    // Renumber blocks in BFS discovery order from the initial state.
    let letters = alphabet.len();
    let mut order: HashMap<u32, u32> = HashMap::new();
    let mut repr: Vec<usize> = Vec::new();
    order.insert(block[0], 0);
    repr.push(0);
    let mut head = 0;
    while head < repr.len() {
        let q = repr[head];
        head += 1;
        for a in 0..letters {
            if let Some((_, to)) = table[q][a] {
                order.entry(block[to as usize]).or_insert_with(|| {
                    repr.push(to as usize);
                    (repr.len() - 1) as u32
                });
            }
        }
    }
    let out_table: Vec<MachineRow> = repr
        .iter()
        .map(|&q| {
            table[q]
                .iter()
                .map(|e| e.map(|(out, to)| (out, order[&block[to as usize]])))
                .collect()
        })
        .collect();
    CanonicalMachine {
        alphabet,
        table: out_table,
    }
}

/// Maps each item to a dense block id, first-seen order.
fn assign_blocks<K: Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<u32> {
    let mut ids: HashMap<K, u32> = HashMap::new();
    keys.map(|k| {
        let next = ids.len() as u32;
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

/// Explores the composite states reachable from `seq` and returns their
/// transition table plus the tuple-to-index map.
fn reachable_table(
    aut: &SAutomaton,
    seq: &[StateId],
) -> (Vec<MachineRow>, HashMap<Vec<StateId>, u32>) {
    let letters = aut.letter_count();
    let mut index: HashMap<Vec<StateId>, u32> = HashMap::new();
    let mut queue: VecDeque<Vec<StateId>> = VecDeque::new();
    index.insert(seq.to_vec(), 0);
    queue.push_back(seq.to_vec());
    let mut table: Vec<MachineRow> = Vec::new();
    while let Some(tuple) = queue.pop_front() {
        let mut row: MachineRow = vec![None; letters];
        for a in 0..letters {
            if let Some((out, next)) = aut.step_tuple(&tuple, LetterId(a as u32)) {
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = index.len() as u32;
                        index.insert(next.clone(), id);
                        queue.push_back(next);
                        id
                    }
                };
                row[a] = Some((out, id));
            }
        }
        table.push(row);
    }
    (table, index)
}

/// The canonical machine of a state sequence. The empty sequence yields
/// the identity machine.
pub fn canonicalize(aut: &SAutomaton, seq: &[StateId]) -> CanonicalMachine {
    if seq.is_empty() {
        return CanonicalMachine::identity(aut.alphabet_arc());
    }
    let (table, _) = reachable_table(aut, seq);
    canonical_form(aut.alphabet_arc(), table)
}

/// The canonical machine of the composite `state` after `machine`. Used by
/// the enumeration to extend elements by one generator without rebuilding
/// long pipelines.
pub fn compose_state_machine(
    aut: &SAutomaton,
    state: StateId,
    machine: &CanonicalMachine,
) -> CanonicalMachine {
    let letters = aut.letter_count();
    let mut index: HashMap<(StateId, u32), u32> = HashMap::new();
    let mut queue = VecDeque::new();
    index.insert((state, 0), 0);
    queue.push_back((state, 0u32));
    let mut table: Vec<MachineRow> = Vec::new();
    while let Some((q, m)) = queue.pop_front() {
        let mut row: MachineRow = vec![None; letters];
        for a in 0..letters {
            if let Some((mid, m_next)) = machine.table[m as usize][a] {
                if let Some((out, q_next)) = aut.step(q, mid) {
                    let key = (q_next, m_next);
                    let next = match index.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = index.len() as u32;
                            index.insert(key, id);
                            queue.push_back(key);
                            id
                        }
                    };
                    row[a] = Some((out, next));
                }
            }
        }
        table.push(row);
    }
    canonical_form(aut.alphabet_arc(), table)
}

/// Whether two sequences induce the same partial map on all finite words
/// (equivalently, by prefix determination, on all infinite ones).
pub fn equal_actions(aut: &SAutomaton, left: &[StateId], right: &[StateId]) -> bool {
    canonicalize(aut, left) == canonicalize(aut, right)
}

/// Whether a sequence acts as the identity on every word.
///
/// Decided as a greatest fixpoint over the reachable composite states: a
/// state belongs to the identity set when it is defined on every letter,
/// echoes it, and stays in the set. The sequence acts as the identity
/// exactly when its own composite state belongs.
pub fn acts_as_identity(aut: &SAutomaton, seq: &[StateId]) -> bool {
    if seq.is_empty() {
        return true;
    }
    let (table, _) = reachable_table(aut, seq);
    let letters = aut.letter_count();
    let mut inside: Vec<bool> = table
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .all(|(a, e)| matches!(e, Some((out, _)) if out.idx() == a))
        })
        .collect();
    loop {
        let mut changed = false;
        for q in 0..table.len() {
            if !inside[q] {
                continue;
            }
            let stays = (0..letters).all(|a| match table[q][a] {
                Some((_, to)) => inside[to as usize],
                None => false,
            });
            if !stays {
                inside[q] = false;
                changed = true;
            }
        }
        if !changed {
            return inside[0];
        }
    }
}

/// Rebuilds a canonical machine as an [`Automaton`] value (state `i`
/// named `s<i>`), mostly for export.
pub fn machine_to_automaton(machine: &CanonicalMachine) -> Result<Automaton> {
    let states: Vec<String> = (0..machine.state_count()).map(|i| format!("s{i}")).collect();
    let alphabet: Vec<String> = machine.alphabet().to_vec();
    let mut quads = Vec::new();
    for (q, row) in machine.table().iter().enumerate() {
        for (a, entry) in row.iter().enumerate() {
            if let Some((b, to)) = entry {
                quads.push((
                    states[q].clone(),
                    alphabet[a].clone(),
                    alphabet[b.idx()].clone(),
                    states[*to as usize].clone(),
                ));
            }
        }
    }
    if states.is_empty() {
        return Err(Error::InvalidArgument("machine has no states".into()));
    }
    Automaton::new(states, alphabet, &quads)
}
