//! Numerical laboratory for Toeplitz index theory and the bulk-edge
//! correspondence.
//!
//! The crate is organised by subject:
//!
//! - [`circle_symbols`]: Laurent-polynomial symbols on the unit circle and two
//!   independent winding-number algorithms.
//! - [`toeplitz_index`]: rectangular finite sections of Toeplitz operators and
//!   their Fredholm index, computed by singular-value counting and by a
//!   defect-trace formula, checked against `Ind(T_f) = -w(f)`.
//! - [`ssh_bulk_edge`]: the Su–Schrieffer–Heeger chain, its Fermi unitary and
//!   Chern number, the Dirichlet half-space Hamiltonian and its chiral edge
//!   index.
//! - [`fock_pimsner`]: truncated full Fock spaces, creation operators and the
//!   Toeplitz/Cuntz relations, plus the automorphism correspondence over
//!   functions on finitely many points.
//! - [`pseudoconvex`]: Levi forms of polynomial defining functions and sampled
//!   strong-pseudoconvexity verdicts.
//!
//! All computations are pure and deterministic for a fixed seed.

pub mod circle_symbols;
pub mod error;
pub mod fock_pimsner;
pub mod linalg;
pub mod pseudoconvex;
pub mod ssh_bulk_edge;
pub mod toeplitz_index;

pub use error::{Error, ErrorKind, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;
