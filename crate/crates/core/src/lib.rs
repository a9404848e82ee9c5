//! Exact learning of d-monotone Boolean functions over finite lattices.
//!
//! A function is d-monotone when it changes value at most `d` times along
//! any chain starting at the implicit bottom `⊥` (where it is 0). Every such
//! function has a unique strict representation
//! `f = M(f_1) ⊕ … ⊕ M(f_d)` as an XOR of monotone closures, and targets of
//! the form `F(g_1, …, g_d)` with monotone `g_i` are learnable from
//! membership and equivalence queries with a number of queries polynomial in
//! `Σ size(g_i)` for fixed `d`.
//!
//! Modules:
//! - [`lattice`]: the Boolean cube and explicit lattices.
//! - [`boolfn`]: function representations, minimal elements, closures and
//!   strict decomposition.
//! - [`consistent`]: hypotheses consistent with a labeled sample.
//! - [`learner`]: the query learner and its oracles.
//! - [`families`]: structured and random targets.
//! - [`format`]: JSON function files.

pub mod boolfn;
pub mod bounds;
pub mod consistent;
pub mod families;
pub mod format;
pub mod lattice;
pub mod learner;

pub use boolfn::{
    chain_alternations, global_min, join_products, local_min, monotone_closure, monotone_degree,
    strict_decompose, BoolFn, BoolFnError, ComposedTarget, DenseFunction, Function, MonotoneDnf,
    XorHypothesis,
};
pub use consistent::{consistent, ConsistentError, LabeledSample};
pub use lattice::{Elem, Lattice, LatticeError};
pub use learner::{
    descend_to_local_min, learn, EquivalenceOracle, ExhaustiveEq, LearnError, LearnOutcome,
    MembershipOracle, QueryStats, SamplingEq,
};
