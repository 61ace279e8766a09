//! Random generation of small automata and tile sets for the invariant
//! suites. All generators are driven by a caller-supplied RNG, so seeded
//! runs are reproducible.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automaton::Automaton;
use crate::tiles::{Tile, TileSet};

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// An arbitrary automaton: per (state, input) pair, zero, one or two
/// transitions with random outputs and targets.
pub fn automaton(rng: &mut impl Rng, max_states: usize, max_letters: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let mut quads = Vec::new();
    let states = names("q", n);
    let letters = names("a", k);
    for q in 0..n {
        for a in 0..k {
            let count = match rng.gen_range(0..6) {
                0 | 1 => 0,
                2..=4 => 1,
                _ => 2,
            };
            for _ in 0..count {
                quads.push((
                    states[q].clone(),
                    letters[a].clone(),
                    letters[rng.gen_range(0..k)].clone(),
                    states[rng.gen_range(0..n)].clone(),
                ));
            }
        }
    }
    Automaton::new(states, letters, &quads).expect("generated names are valid")
}

/// A deterministic (possibly partial) automaton.
pub fn deterministic_automaton(
    rng: &mut impl Rng,
    max_states: usize,
    max_letters: usize,
    density: f64,
) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let states = names("q", n);
    let letters = names("a", k);
    let mut quads = Vec::new();
    for q in 0..n {
        for a in 0..k {
            if rng.gen_bool(density) {
                quads.push((
                    states[q].clone(),
                    letters[a].clone(),
                    letters[rng.gen_range(0..k)].clone(),
                    states[rng.gen_range(0..n)].clone(),
                ));
            }
        }
    }
    Automaton::new(states, letters, &quads).expect("generated names are valid")
}

/// A complete deterministic automaton.
pub fn complete_automaton(rng: &mut impl Rng, max_states: usize, max_letters: usize) -> Automaton {
    loop {
        let a = deterministic_automaton(rng, max_states, max_letters, 1.0);
        if a.properties().complete {
            return a;
        }
    }
}

/// A reversible automaton: per letter, a partial matching of states with
/// injective targets, so no (input, target) pair repeats.
pub fn reversible_automaton(rng: &mut impl Rng, max_states: usize, max_letters: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let states = names("q", n);
    let letters = names("a", k);
    let mut quads = Vec::new();
    for a in 0..k {
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        for q in 0..n {
            if rng.gen_bool(0.7) {
                quads.push((
                    states[q].clone(),
                    letters[a].clone(),
                    letters[rng.gen_range(0..k)].clone(),
                    states[targets[q]].clone(),
                ));
            }
        }
    }
    Automaton::new(states, letters, &quads).expect("generated names are valid")
}

/// A bi-deterministic, possibly partial automaton: per state, a partial
/// injection on letters (distinct inputs, distinct outputs).
pub fn sbar_automaton(rng: &mut impl Rng, max_states: usize, max_letters: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let states = names("q", n);
    let letters = names("a", k);
    let mut quads = Vec::new();
    for q in 0..n {
        let mut outputs: Vec<usize> = (0..k).collect();
        outputs.shuffle(rng);
        for a in 0..k {
            if rng.gen_bool(0.7) {
                quads.push((
                    states[q].clone(),
                    letters[a].clone(),
                    letters[outputs[a]].clone(),
                    states[rng.gen_range(0..n)].clone(),
                ));
            }
        }
    }
    Automaton::new(states, letters, &quads).expect("generated names are valid")
}

/// A group automaton: complete, deterministic and inverse-deterministic.
/// Per state, the outputs form a permutation of the alphabet.
pub fn g_automaton(rng: &mut impl Rng, max_states: usize, max_letters: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let states = names("q", n);
    let letters = names("a", k);
    let mut quads = Vec::new();
    for q in 0..n {
        let mut outputs: Vec<usize> = (0..k).collect();
        outputs.shuffle(rng);
        for a in 0..k {
            quads.push((
                states[q].clone(),
                letters[a].clone(),
                letters[outputs[a]].clone(),
                states[rng.gen_range(0..n)].clone(),
            ));
        }
    }
    Automaton::new(states, letters, &quads).expect("generated names are valid")
}

/// A random tile set over at most `max_colors` colors with at most
/// `max_tiles` distinct tiles.
pub fn tile_set(rng: &mut impl Rng, max_colors: usize, max_tiles: usize) -> TileSet {
    let c = rng.gen_range(1..=max_colors);
    let colors = names("c", c);
    let count = rng.gen_range(1..=max_tiles);
    let mut tiles = Vec::new();
    for _ in 0..count {
        let tile = Tile {
            west: rng.gen_range(0..c) as u32,
            south: rng.gen_range(0..c) as u32,
            east: rng.gen_range(0..c) as u32,
            north: rng.gen_range(0..c) as u32,
        };
        if !tiles.contains(&tile) {
            tiles.push(tile);
        }
    }
    TileSet::from_parts(colors, tiles).expect("generated tiles are valid")
}
