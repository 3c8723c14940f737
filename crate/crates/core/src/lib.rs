//! Pancake-flipping breakpoint calculus, efficient-flip search, and a
//! 3-SAT-to-pancake reduction with machine-checked gadget properties.
//!
//! The crate is organised in four layers:
//!
//! - [`perm`]: permutations of `1..=n`, prefix reversals (*flips*),
//!   breakpoints, and efficient flips (flips removing exactly one
//!   breakpoint).
//! - [`search`]: efficient-sortability decision, the funnel relation
//!   `S ==> T` checked by exhaustive efficient-path enumeration, exact
//!   sorting distance, pancake-network diameter, and a greedy sorter.
//! - [`gadgets`] / [`embed`]: the dock/lock/hook/fork and
//!   literals/variable/clause building blocks, plus concrete embeddings
//!   of every gadget property for machine verification.
//! - [`reduction`]: DIMACS ingestion, the formula-to-permutation
//!   construction (`31l + 98k` elements, `16l + 50k` breakpoints),
//!   certificates, a brute-force satisfiability oracle, and the
//!   sortable-iff-satisfiable equivalence checker.

pub mod embed;
pub mod gadgets;
pub mod perm;
pub mod reduction;
pub mod search;

pub use embed::{
    canonical_embedding, check_embedding, randomized_embedding, Embedding, EmbeddingKind,
};
pub use perm::{BreakpointProfile, FlipPath, PermError, Sequence};
pub use reduction::{
    build_instance, certify, check_theorem, parse_dimacs, sat_brute_force, Assignment, Cnf,
    ReductionError, ReductionInstance, Selection,
};
pub use search::{
    decide_efficiently_sortable, diameter, exact_distance, greedy_sort, verify_funnel,
    DistanceResult, FunnelReport, SearchError, SearchLimits,
};
