//! Partial synchronous letter-to-letter transducers ("Mealy automata")
//! and the semigroups, inverse semigroups and groups they generate.

pub mod affine;
pub mod automaton;
pub mod elements;
pub mod enumeration;
pub mod error;
pub mod orbits;
pub mod random;
pub mod samples;
pub mod semantics;
pub mod tiles;

pub use automaton::{
    compose, disjoint_union, Automaton, LetterId, PropertyReport, StateId, Transition,
    UnionAutomaton, Word,
};
pub use elements::{acts_as_identity, canonicalize, equal_actions, CanonicalMachine};
pub use enumeration::{
    enumerate_ball, find_positive_relation, find_relation, semigroup_order, BallReport, Mode,
    OrderResult, RelationWitness,
};
pub use error::{Error, Result};
pub use orbits::{check_orbit_coincidence, orbit, orbital_graph, stabilizer_elements, OrbitalGraph};
pub use semantics::{act, act_omega_prefix, next_state, ExtendedAutomaton, SAutomaton, StateSeq};

// The guide's code blocks run as doctests, so the book cannot drift from
// the library.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/automata.md")]
    pub mod automata {}
    #[doc = include_str!("../../../book/src/actions.md")]
    pub mod actions {}
    #[doc = include_str!("../../../book/src/word-problem.md")]
    pub mod word_problem {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    pub mod enumeration {}
    #[doc = include_str!("../../../book/src/orbits.md")]
    pub mod orbits {}
    #[doc = include_str!("../../../book/src/affine.md")]
    pub mod affine {}
    #[doc = include_str!("../../../book/src/tilings.md")]
    pub mod tilings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
