//! Orbits of finite words under state actions, the graphs they carry, and
//! stabilizer search.
//!
//! The orbit of a word collects the images of every positive-length state
//! sequence; the orbital graph adds the word itself as the root and one
//! edge per defined single-state action. With the inverse states included
//! the same construction yields the Schreier graph of a bi-deterministic
//! automaton.

use std::collections::HashMap;

use crate::automaton::{StateId, Word};
use crate::enumeration::{enumerate_ball, Mode};
use crate::error::{Error, Result};
use crate::semantics::{act, SAutomaton, StateSeq};

/// The orbital graph of a word: nodes are words of the same length, edges
/// are defined single-state actions labelled by the acting state. The
/// center is node `0`.
#[derive(Debug, Clone)]
pub struct OrbitalGraph {
    /// The automaton the edge labels refer to (the extended automaton when
    /// `with_inverses` is set).
    pub with_inverses: bool,
    pub center: Word,
    pub nodes: Vec<Word>,
    /// Edges `(source node, acting state, target node)` by index.
    pub edges: Vec<(usize, StateId, usize)>,
}

/// A directed cycle in an orbital graph: the visited nodes and the edge
/// labels between them (`labels[i]` acts from `nodes[i]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub labels: Vec<StateId>,
}

fn acting_machine(automaton: &SAutomaton, with_inverses: bool) -> Result<SAutomaton> {
    if with_inverses {
        Ok(automaton.extended()?.machine)
    } else {
        Ok(automaton.clone())
    }
}

/// Builds the orbital graph (Schreier graph when `with_inverses`) centered
/// at `word`. Requires a bi-deterministic automaton for the inverse part.
pub fn orbital_graph(
    automaton: &SAutomaton,
    word: &[crate::automaton::LetterId],
    with_inverses: bool,
) -> Result<OrbitalGraph> {
    let machine = acting_machine(automaton, with_inverses)?;
    let mut nodes: Vec<Word> = vec![word.to_vec()];
    let mut index: HashMap<Word, usize> = HashMap::new();
    index.insert(word.to_vec(), 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < nodes.len() {
        let source = nodes[head].clone();
        for q in (0..machine.state_count() as u32).map(StateId) {
            if let Some(image) = act(&machine, &[q], &source)? {
                let target = match index.get(&image) {
                    Some(&i) => i,
                    None => {
                        let i = nodes.len();
                        index.insert(image.clone(), i);
                        nodes.push(image);
                        i
                    }
                };
                edges.push((head, q, target));
            }
        }
        head += 1;
    }
    Ok(OrbitalGraph {
        with_inverses,
        center: word.to_vec(),
        nodes,
        edges,
    })
}

/// The orbit of a word: all images under positive-length state sequences.
/// The word itself belongs only if some sequence reproduces it.
pub fn orbit(
    automaton: &SAutomaton,
    word: &[crate::automaton::LetterId],
    with_inverses: bool,
) -> Result<Vec<Word>> {
    let graph = orbital_graph(automaton, word, with_inverses)?;
    let mut reached = vec![false; graph.nodes.len()];
    // One-step images seed the orbit; the closure follows edges.
    let mut queue = Vec::new();
    for &(source, _, target) in &graph.edges {
        if source == 0 && !reached[target] {
            reached[target] = true;
            queue.push(target);
        }
    }
    while let Some(node) = queue.pop() {
        for &(source, _, target) in &graph.edges {
            if source == node && !reached[target] {
                reached[target] = true;
                queue.push(target);
            }
        }
    }
    let mut orbit: Vec<Word> = graph
        .nodes
        .iter()
        .enumerate()
        .filter(|(i, _)| reached[*i])
        .map(|(_, w)| w.clone())
        .collect();
    orbit.sort();
    Ok(orbit)
}

impl OrbitalGraph {
    /// Finds a directed cycle if one exists. Self-loops count as cycles of
    /// length one. Depth-first search in node order makes the answer
    /// deterministic.
    pub fn find_cycle(&self) -> Option<Cycle> {
        let n = self.nodes.len();
        // Adjacency in edge order (deterministic).
        let mut adj: Vec<Vec<(StateId, usize)>> = vec![Vec::new(); n];
        for &(source, label, target) in &self.edges {
            adj[source].push((label, target));
        }
        let mut color = vec![0u8; n]; // 0 unseen, 1 on stack, 2 done
        let mut parent: Vec<Option<(usize, StateId)>> = vec![None; n];
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            // Iterative DFS with an explicit edge cursor per node.
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = 1;
            while let Some(&mut (node, ref mut cursor)) = stack.last_mut() {
                if *cursor < adj[node].len() {
                    let (label, target) = adj[node][*cursor];
                    *cursor += 1;
                    match color[target] {
                        0 => {
                            color[target] = 1;
                            parent[target] = Some((node, label));
                            stack.push((target, 0));
                        }
                        1 => {
                            // Back edge: unwind the stack from `node` back
                            // to `target`.
                            let mut nodes = vec![target];
                            let mut labels = vec![label];
                            let mut cur = node;
                            while cur != target {
                                let (prev, lab) = parent[cur].expect("on stack");
                                nodes.push(cur);
                                labels.push(lab);
                                cur = prev;
                            }
                            nodes[1..].reverse();
                            labels[1..].reverse();
                            // labels[i] should act from nodes[i]; after the
                            // reversal the collected labels are offset by
                            // one, so rotate them into place.
                            labels.rotate_left(1);
                            return Some(Cycle { nodes, labels });
                        }
                        _ => {}
                    }
                } else {
                    color[node] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    /// DOT rendering: nodes are words, edge labels are state names.
    pub fn to_dot(&self, automaton: &SAutomaton) -> Result<String> {
        let machine = acting_machine(automaton, self.with_inverses)?;
        let mut out = String::from("digraph orbit {\n  rankdir=LR;\n  node [shape=box];\n");
        for w in &self.nodes {
            out.push_str(&format!("  \"{}\";\n", machine.format_word(w)));
        }
        for &(source, label, target) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                machine.format_word(&self.nodes[source]),
                machine.format_word(&self.nodes[target]),
                machine.state_name(label),
            ));
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// All sequences of at most `maxlen` positive generators fixing `word`,
/// one shortlex-minimal representative per element.
pub fn stabilizer_elements(
    automaton: &SAutomaton,
    word: &[crate::automaton::LetterId],
    maxlen: usize,
) -> Result<Vec<StateSeq>> {
    let ball = enumerate_ball(automaton, maxlen, Mode::Semigroup)?;
    let mut fixing: Vec<&StateSeq> = ball
        .witnesses
        .iter()
        .filter(|seq| {
            act(automaton, &seq.states, word)
                .map(|out| out.as_deref() == Some(word))
                .unwrap_or(false)
        })
        .collect();
    fixing.sort_by_key(|seq| (seq.len(), seq.states.clone()));
    Ok(fixing.into_iter().cloned().collect())
}

/// Checks that the orbit with and without inverse generators coincide;
/// this always holds for a group automaton on a finite word.
pub fn check_orbit_coincidence(
    automaton: &SAutomaton,
    word: &[crate::automaton::LetterId],
) -> Result<bool> {
    if !automaton.properties().is_g {
        return Err(Error::ClassViolation(
            "orbit coincidence requires a group automaton".into(),
        ));
    }
    let plain = orbit(automaton, word, false)?;
    let with_inverses = orbit(automaton, word, true)?;
    Ok(plain == with_inverses)
}
