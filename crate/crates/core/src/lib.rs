//! Numerical laboratory for the Benjamin-Ono equation
//! `u_t + H u_xx + 2 u u_x = 0` on a large periodic domain.
//!
//! The crate constructs exact one- and N-soliton solutions, evaluates the
//! integrable hierarchy of conserved functionals and the variational
//! principle the multi-solitons satisfy, discretizes the linearized
//! Hamiltonian operators and counts their negative/zero eigenvalues, and
//! integrates the equation pseudo-spectrally to test orbital stability
//! directly.

pub mod conserved;
pub mod error;
pub mod evolution;
pub mod fft;
pub mod field;
pub mod grid;
pub mod operators;
pub mod optimize;
pub mod soliton;
pub mod spectral;
pub mod variational;
pub mod verification;

pub use error::{Error, Result};
pub use field::{ComplexField, RealField};
pub use grid::Grid;
