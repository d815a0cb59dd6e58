//! Construction and verification toolkit for unitary graphs: arc-transitive
//! graphs on the flags of Hermitian unitals, the unitary groups acting on
//! them, and the generic flag-graph machinery behind both, at desk scale
//! (q in {3, 4, 5} and the A7 action on PG(3,2)).
//!
//! The crate is organised along the pipeline:
//!
//! - [`field`]: exact GF(p^(2e)) arithmetic with conjugation and the
//!   norm/trace fiber solvers;
//! - [`unital`]: the Hermitian form, absolute points, and the unital with
//!   its lines and flags;
//! - [`group`]: PGU(3,q) and its Frobenius extensions as explicit
//!   permutation groups, with orbit and stabilizer machinery;
//! - [`unitary`]: parameter validation and three independent constructions
//!   of the graphs, plus the two natural vertex partitions;
//! - [`flag_graph`]: feasibility conditions, orbitals, generic flag graphs,
//!   and the PG(3,2)/A7 instance;
//! - [`graph`], [`graph6`], [`canon`]: invariants, quotients, cover
//!   classification, the graph6 codec, and canonical forms;
//! - [`verify`]: named verification targets producing machine-readable
//!   reports, shared by the CLI and tests.

pub mod canon;
pub mod field;
pub mod flag_graph;
pub mod graph;
pub mod graph6;
pub mod group;
pub mod unital;
pub mod unitary;
pub mod verify;

pub use field::{Fe, FieldCtx, FieldError};
pub use graph::{Graph, Partition};
pub use unital::Unital;
