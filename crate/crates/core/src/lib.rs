//! Exact arithmetic for the lattice theory of K3 double planes branched
//! along six lines: integer lattices and discriminant forms, orbit
//! classification in `U^2 + <-1>^2`, the `SU(2,2; Z[i])` to `SO(T)` map,
//! elliptic-fibration bookkeeping, quaternion algebras and polynomial
//! identity checks.

#![allow(clippy::needless_range_loop)]

pub mod clifford_ks;
pub mod disc_form;
pub mod elliptic_fib;
pub mod error;
pub mod gaussian;
pub mod group_iso;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod selftest;
pub mod symbolic;
pub mod wall_orbits;

pub use error::{Error, Result};
pub use lattice::{IntLattice, LatticeVector, SignaturePair, StandardLattice};
