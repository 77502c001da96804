//! Independent reference computations for testing the wavelet solver.
//!
//! Nothing here shares code with `fraclane`: integrals are computed by
//! adaptive quadrature and classical problems by explicit time stepping.

pub mod classical;
pub mod ode;
pub mod quadrature;
pub mod reference;
