//! Finite descriptors and exact decision procedures for block-rigid almost
//! completely decomposable groups of ring type with cyclic regulator
//! quotient, and for their multiplication groups.
//!
//! A group in this class is pinned up to isomorphism by finitely many
//! invariants: its critical types (finite prime sets), the ranks of the
//! homogeneous regulator pieces, the invariants `m` of the regulator
//! quotient, and the numerators `s` of the standard representation. All
//! arithmetic is exact; every decider either proves or refutes, and most
//! return a checkable certificate.
//!
//! Module map:
//! - [`arith`]: rationals, valuations, CRT, totients, primes in progressions.
//! - [`group`]: descriptors, validation, canonical forms, the main
//!   decomposition, and membership of hull elements.
//! - [`units`]: the finite unit-group arena of the isomorphism criterion.
//! - [`mult`]: the multiplication group, its members, the scalar ring, and
//!   ring isomorphism on rigid groups.
//! - [`decide`]: near-isomorphism, isomorphism, realization,
//!   self-Mult-isomorphism.
//! - [`generate`]: seeded random descriptors and the explicit
//!   counterexample family.

pub mod arith;
pub mod decide;
pub mod error;
pub mod generate;
pub mod group;
pub mod mult;
pub mod units;

pub use arith::{CrtOutcome, Rational};
pub use decide::{iso, near_iso, realizable, realize, self_mult_iso};
pub use error::{Error, Result, Violation};
pub use generate::{example_4_9, random_descriptor, GenConfig, Provenance};
pub use group::{
    condition_m, GroupDescriptor, GroupElement, IdempotentType, Structure, TypeComponent,
};
pub use mult::{
    in_kg, in_kg_star, mult_contains, mult_of, ring_iso, scalar_action, KgWitness, MemberWitness,
    MultElement, RingIsoWitness, ScalarTuple,
};
pub use units::{
    coset_decompose, gamma_subgroup, gamma_vinf_subgroup, in_gamma_vinf, s_tuple,
    subgroup_closure, vinf_subgroup, CosetWitness, ResidueTuple, UnitConfig, UnitSubgroup,
    DEFAULT_CAP,
};
