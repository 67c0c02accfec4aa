//! Exhaustive, exact-arithmetic searches for hamiltonian cycles in Cayley
//! graphs whose quotient by a cyclic normal subgroup has order 8.
//!
//! The library is organised around the lifting argument it certifies: a
//! hamiltonian cycle in an 8-vertex quotient graph whose *voltage* (the
//! product of its steps) generates the kernel lifts to a hamiltonian cycle of
//! the full graph. Voltages are computed once and for all in a twisted
//! product over the ring of cyclotomic integers, so a single certificate
//! covers every admissible pair of primes at once; concrete groups are then
//! instantiated to re-verify sampled certificates by direct traversal.
//!
//! Module map:
//!
//! - [`group`] — exact multiplication tables for the five groups of order 8
//!   (plus the order-56 group), characters, ranks, automorphisms.
//! - [`cyclotomic`] — arithmetic in `Z[zeta_m]`, field norms (two independent
//!   algorithms), and the 5-smoothness predicate.
//! - [`hamsearch`] — exhaustive coded-cycle enumeration on 8 vertices, walk
//!   verification, and a budgeted hamiltonian-path search up to order 56.
//! - [`voltage`] — coded-cycle voltages in the twisted product and the three
//!   certification strategies (plain, "single", determinant pair).
//! - [`concrete`] — explicit groups of order `8pq`, the cyclotomic-to-modular
//!   reduction bridge, factor-group lifts, hand-case verifiers, and the two
//!   elementary number-theory lemmas.
//! - [`casework`] — the four case drivers with exception catalogs and the
//!   deterministic certificate stream, plus the order-56 spot check.

pub mod casework;
pub mod concrete;
pub mod cyclotomic;
pub mod group;
pub mod hamsearch;
pub mod voltage;

pub use casework::{run_driver, CaseReport, DriverRun, PropId};
pub use concrete::ExplicitGroup;
pub use cyclotomic::CycInt;
pub use group::{Character, GroupTable, GroupTag};
