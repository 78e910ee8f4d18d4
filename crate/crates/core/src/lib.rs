#![no_std]

//! Exact Lie-algebraic and numerical limit-cycle computations for planar
//! polynomial vector fields.
//!
//! The symbolic side works over unbounded rationals: sparse polynomials,
//! Lie brackets, degree-truncated centralizers, first integrals and the
//! Hamiltonian lift `H = zP + wQ` on R^4. The numerical side integrates
//! fields with an adaptive Dormand-Prince pair and builds Poincaré return
//! maps, cycle scans and characteristic multipliers on top of it.
//!
//! The crate only needs `alloc`; parsing, JSON and the command-line driver
//! live in the `lievf` crate.

extern crate alloc;

pub mod cycles;
pub mod exactla;
pub mod field;
pub mod flow;
pub mod linops;
pub mod poly;
pub mod symplectic;

pub use exactla::{ExactMatrix, SubspaceBasis};
pub use field::VectorField2;
pub use poly::{Monomial, Poly1, Poly2, Poly4, Rat, SparsePoly};
