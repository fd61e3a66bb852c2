//! Numerical toolkit for SU(3) representation varieties of finitely presented
//! groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`presentation`] parses group presentations and computes Fox derivatives.
//! * [`su3`] is the matrix kernel: projection onto SU(3), conjugacy tests,
//!   the block splitting `su(3) = h + h_perp` and the `G_eta` subgroups.
//! * [`repvariety`] solves for representations, classifies stabilizers and
//!   deduplicates conjugacy classes.
//! * [`foxcoh`] computes twisted cohomology from the Fox matrices.
//! * [`holcalc`] is holonomy calculus for connections on a circle.
//! * [`detect`] contains constructive searches for detecting words and the
//!   Hessian spanning checks.
//! * [`bifurcation`] is a finite-dimensional U(1)-equivariant wall-crossing
//!   model with spectral flow bookkeeping.

pub mod bifurcation;
pub mod detect;
pub mod foxcoh;
pub mod holcalc;
pub mod linalg;
pub mod presentation;
pub mod repvariety;
pub mod serde_mat;
pub mod su3;

pub use num_complex::Complex64 as C64;
