//! Ball enumeration of the generated structure and the bounded searches
//! built on it: finiteness semi-decision, relation search and
//! positive-relation search.
//!
//! The ball of radius `L` holds the distinct elements of all generator
//! sequences of length up to `L`. Enumeration extends one representative
//! sequence per element, which is sound because element equality is a
//! congruence and keeps the representatives shortlex-minimal.

use std::collections::HashMap;

use crate::automaton::StateId;
use crate::elements::{canonicalize, compose_state_machine, CanonicalMachine};
use crate::error::{Error, Result};
use crate::semantics::{SAutomaton, StateSeq};

/// Which generating set a ball is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// The states of the automaton.
    Semigroup,
    /// States and formal inverses; requires a bi-deterministic automaton.
    Inverse,
    /// States and inverses with the identity adjoined; requires a group
    /// automaton.
    Group,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Semigroup => "semigroup",
            Mode::Inverse => "inverse",
            Mode::Group => "group",
        }
    }
}

/// The result of enumerating a ball.
#[derive(Debug, Clone)]
pub struct BallReport {
    pub radius: usize,
    pub mode: Mode,
    /// Distinct elements, sorted canonically.
    pub elements: Vec<CanonicalMachine>,
    /// One shortlex-minimal witness sequence per element, aligned with
    /// `elements`.
    pub witnesses: Vec<StateSeq>,
    /// Cumulative ball sizes for radii `1..`; stops early once closed.
    pub growth: Vec<usize>,
    /// Whether multiplying by generators stays inside the ball.
    pub closed: bool,
}

/// The outcome of the finiteness semi-decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderResult {
    /// The ball closed; the structure has exactly this many elements.
    Finite(usize),
    /// The budget ran out; the growth profile is the evidence gathered.
    Unknown(Vec<usize>),
}

/// A pair of distinct sequences with equal actions. For a positive
/// relation the right-hand side is the empty sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationWitness {
    pub left: StateSeq,
    pub right: StateSeq,
}

/// The generator context for a mode: the automaton acted with and the
/// generator states, in order.
struct Generators {
    machine: SAutomaton,
    generators: Vec<StateId>,
    extended: bool,
}

fn generators_for(automaton: &SAutomaton, mode: Mode) -> Result<Generators> {
    match mode {
        Mode::Semigroup => Ok(Generators {
            machine: automaton.clone(),
            generators: (0..automaton.state_count() as u32).map(StateId).collect(),
            extended: false,
        }),
        Mode::Inverse => {
            let ext = automaton.extended()?;
            let generators = (0..ext.machine.state_count() as u32).map(StateId).collect();
            Ok(Generators {
                machine: ext.machine,
                generators,
                extended: true,
            })
        }
        Mode::Group => {
            if !automaton.properties().is_g {
                return Err(Error::ClassViolation(
                    "group mode requires a complete bi-deterministic automaton".into(),
                ));
            }
            let ext = automaton.extended()?;
            let generators = (0..ext.machine.state_count() as u32).map(StateId).collect();
            Ok(Generators {
                machine: ext.machine,
                generators,
                extended: true,
            })
        }
    }
}

struct Ball {
    /// Element -> index into `machines`/`witnesses`.
    index: HashMap<CanonicalMachine, usize>,
    machines: Vec<CanonicalMachine>,
    witnesses: Vec<Vec<StateId>>,
    /// Indices of the last level's new elements.
    frontier: Vec<usize>,
    growth: Vec<usize>,
    closed: bool,
}

/// Expands balls level by level, keeping one representative per element.
fn grow_ball(
    ctx: &Generators,
    radius: usize,
    include_identity: bool,
    mut on_new: impl FnMut(&CanonicalMachine, &[StateId]),
    mut on_collision: impl FnMut(&[StateId], &[StateId], &CanonicalMachine),
) -> Ball {
    let mut ball = Ball {
        index: HashMap::new(),
        machines: Vec::new(),
        witnesses: Vec::new(),
        frontier: Vec::new(),
        growth: Vec::new(),
        closed: false,
    };
    if include_identity {
        let id = CanonicalMachine::identity(ctx.machine.alphabet_arc());
        ball.index.insert(id.clone(), 0);
        ball.machines.push(id);
        ball.witnesses.push(Vec::new());
    }
    // Level 1: the generators themselves.
    let mut new_indices = Vec::new();
    for &g in &ctx.generators {
        let m = canonicalize(&ctx.machine, &[g]);
        let w = vec![g];
        match ball.index.get(&m) {
            Some(&i) => on_collision(&ball.witnesses[i], &w, &m),
            None => {
                on_new(&m, &w);
                let i = ball.machines.len();
                ball.index.insert(m.clone(), i);
                ball.machines.push(m);
                ball.witnesses.push(w);
                new_indices.push(i);
            }
        }
    }
    ball.growth.push(ball.machines.len());
    ball.frontier = new_indices;
    for _level in 2..=radius {
        if ball.frontier.is_empty() {
            ball.closed = true;
            break;
        }
        let mut new_indices = Vec::new();
        for &g in &ctx.generators {
            for &fi in &ball.frontier {
                let m = compose_state_machine(&ctx.machine, g, &ball.machines[fi]);
                let mut w = Vec::with_capacity(ball.witnesses[fi].len() + 1);
                w.push(g);
                w.extend_from_slice(&ball.witnesses[fi]);
                match ball.index.get(&m) {
                    Some(&i) => on_collision(&ball.witnesses[i], &w, &m),
                    None => {
                        on_new(&m, &w);
                        let i = ball.machines.len();
                        ball.index.insert(m.clone(), i);
                        ball.machines.push(m);
                        ball.witnesses.push(w);
                        new_indices.push(i);
                    }
                }
            }
        }
        ball.growth.push(ball.machines.len());
        ball.frontier = new_indices;
    }
    if !ball.closed {
        if ball.frontier.is_empty() {
            // The last expansion added nothing; one more would not either.
            ball.closed = true;
        } else {
            // Trial expansion: the ball is closed when one more step only
            // reproduces known elements. Nothing is recorded; sequences
            // beyond the radius are outside the search bound.
            ball.closed = ctx.generators.iter().all(|&g| {
                ball.frontier.iter().all(|&fi| {
                    let m = compose_state_machine(&ctx.machine, g, &ball.machines[fi]);
                    ball.index.contains_key(&m)
                })
            });
        }
    }
    ball
}

/// Enumerates the ball of the given radius. In group mode the identity
/// belongs to the ball; semigroup and inverse mode count sequences of
/// length at least one.
pub fn enumerate_ball(automaton: &SAutomaton, radius: usize, mode: Mode) -> Result<BallReport> {
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be >= 1".into()));
    }
    let ctx = generators_for(automaton, mode)?;
    let ball = grow_ball(
        &ctx,
        radius,
        matches!(mode, Mode::Group),
        |_, _| {},
        |_, _, _| {},
    );
    // Canonical order: sort elements structurally, witnesses alongside.
    let mut order: Vec<usize> = (0..ball.machines.len()).collect();
    order.sort_by(|&i, &j| {
        (ball.machines[i].state_count(), ball.machines[i].table())
            .cmp(&(ball.machines[j].state_count(), ball.machines[j].table()))
    });
    let elements = order.iter().map(|&i| ball.machines[i].clone()).collect();
    let witnesses = order
        .iter()
        .map(|&i| StateSeq {
            states: ball.witnesses[i].clone(),
            extended: ctx.extended,
        })
        .collect();
    Ok(BallReport {
        radius,
        mode,
        elements,
        witnesses,
        growth: ball.growth,
        closed: ball.closed,
    })
}

/// Semi-decides finiteness by enumerating balls of growing radius. Stops
/// as soon as a ball closes; `Unknown` carries the growth profile.
pub fn semigroup_order(automaton: &SAutomaton, budget: usize, mode: Mode) -> Result<OrderResult> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".into()));
    }
    let report = enumerate_ball(automaton, budget, mode)?;
    if report.closed {
        Ok(OrderResult::Finite(report.elements.len()))
    } else {
        Ok(OrderResult::Unknown(report.growth))
    }
}

/// Finds the least pair of distinct sequences with equal actions, ordered
/// by total length and then lexicographically, searching sequences of
/// length up to `maxlen`. `None` means the structure is free of relations
/// at this bound.
pub fn find_relation(
    automaton: &SAutomaton,
    maxlen: usize,
    mode: Mode,
) -> Result<Option<RelationWitness>> {
    if maxlen == 0 {
        return Err(Error::InvalidArgument("maxlen must be >= 1".into()));
    }
    let ctx = generators_for(automaton, mode)?;
    let mut best: Option<(usize, Vec<StateId>, Vec<StateId>)> = None;
    {
        let best = &mut best;
        let mut consider = |stored: &[StateId], new: &[StateId]| {
            let total = stored.len() + new.len();
            let candidate = (total, stored.to_vec(), new.to_vec());
            let better = match best {
                None => true,
                Some(b) => candidate < *b,
            };
            if better {
                *best = Some(candidate);
            }
        };
        grow_ball(
            &ctx,
            maxlen,
            false,
            |_, _| {},
            |stored, new, _| consider(stored, new),
        );
    }
    Ok(best.map(|(_, left, right)| RelationWitness {
        left: StateSeq {
            states: left,
            extended: ctx.extended,
        },
        right: StateSeq {
            states: right,
            extended: ctx.extended,
        },
    }))
}

/// Finds a shortest (then lexicographically least) sequence of positive
/// generators acting as the identity, up to `maxlen`. Requires a group
/// automaton. `None` means no positive relation exists at this bound.
///
/// Uses a meet-in-the-middle split: a positive relation of length `k`
/// factors at `ceil(k/2)` into two elements that are mutually inverse, so
/// a ball of radius `ceil(maxlen/2)` suffices.
pub fn find_positive_relation(
    automaton: &SAutomaton,
    maxlen: usize,
) -> Result<Option<RelationWitness>> {
    if maxlen == 0 {
        return Err(Error::InvalidArgument("maxlen must be >= 1".into()));
    }
    if !automaton.properties().is_g {
        return Err(Error::ClassViolation(
            "positive-relation search requires a group automaton".into(),
        ));
    }
    let witness = |states: Vec<StateId>| {
        Some(RelationWitness {
            left: StateSeq::new(states),
            right: StateSeq::new(Vec::new()),
        })
    };
    let n = automaton.state_count();
    // Singles first: the scan order makes the first hit lexicographically
    // least among the shortest witnesses.
    for q in (0..n as u32).map(StateId) {
        if canonicalize(automaton, &[q]).is_identity() {
            return Ok(witness(vec![q]));
        }
    }
    if maxlen == 1 {
        return Ok(None);
    }
    let mut best: Option<(usize, Vec<StateId>)> = None;
    let mut offer = |total: usize, seq: Vec<StateId>| {
        let candidate = (total, seq);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    };
    if maxlen == 2 {
        // Streamed pairing of mutually inverse single states. Machines are
        // recomputed on demand instead of stored, which keeps memory flat
        // for large generator sets; hash buckets are confirmed
        // structurally.
        let mut by_hash: HashMap<u128, Vec<StateId>> = HashMap::new();
        for q in (0..n as u32).map(StateId) {
            let m = canonicalize(automaton, &[q]);
            let bucket = by_hash.entry(m.structural_hash()).or_default();
            if !bucket
                .iter()
                .any(|&r| canonicalize(automaton, &[r]) == m)
            {
                bucket.push(q);
            }
        }
        for q in (0..n as u32).map(StateId) {
            let inv = match canonicalize(automaton, &[q]).inverse() {
                Some(inv) => inv,
                None => continue,
            };
            if let Some(bucket) = by_hash.get(&inv.structural_hash()) {
                for &r in bucket {
                    if canonicalize(automaton, &[r]) == inv {
                        offer(2, vec![q, r]);
                        break;
                    }
                }
            }
        }
    } else {
        // Meet in the middle over the ball of half the bound: every
        // positive relation of length k factors at ceil(k/2) into two
        // mutually inverse elements with witnesses inside this ball.
        let radius = maxlen.div_ceil(2);
        let ctx = generators_for(automaton, Mode::Semigroup)?;
        let ball = grow_ball(&ctx, radius, false, |_, _| {}, |_, _, _| {});
        let mut by_hash: HashMap<u128, Vec<usize>> = HashMap::new();
        for (i, m) in ball.machines.iter().enumerate() {
            by_hash.entry(m.structural_hash()).or_default().push(i);
        }
        for (i, m) in ball.machines.iter().enumerate() {
            if m.is_identity() {
                if ball.witnesses[i].len() <= maxlen {
                    offer(ball.witnesses[i].len(), ball.witnesses[i].clone());
                }
                continue;
            }
            let inv = match m.inverse() {
                Some(inv) => inv,
                None => continue,
            };
            if let Some(bucket) = by_hash.get(&inv.structural_hash()) {
                for &j in bucket {
                    if ball.machines[j] != inv {
                        continue;
                    }
                    let total = ball.witnesses[i].len() + ball.witnesses[j].len();
                    if total <= maxlen {
                        let mut w = ball.witnesses[i].clone();
                        w.extend_from_slice(&ball.witnesses[j]);
                        offer(total, w);
                    }
                    break;
                }
            }
        }
    }
    Ok(best.map(|(_, states)| RelationWitness {
        left: StateSeq::new(states),
        right: StateSeq::new(Vec::new()),
    }))
}
