//! Ellipsoidal harmonic expansions with tanh-sinh quadrature.
//!
//! This crate computes interior and exterior Lamé functions on a triaxial
//! reference ellipsoid, their normalization constants via double-exponential
//! quadrature of the singular surface integral, and the closed-form solution
//! of the mixed-dielectric Poisson (solvation) problem for an ellipsoidal
//! cavity. A spherical multipole expansion is included as a comparator.
//!
//! Modules mirror the layers of the computation:
//!
//! * [`quad`] — change-of-variable quadratures (tanh-sinh, tanh, erf) with
//!   nested node tables, adaptive refinement and evaluation counting.
//! * [`ellipsoid`] — the confocal coordinate system and Cartesian transforms.
//! * [`lame`] — Lamé functions `E_n^p`, exterior functions `F_n^p`, and the
//!   solid harmonics built from them.
//! * [`normconst`] — normalization constants via the four-integral
//!   decomposition, plus a direct 2-D quadrature oracle.
//! * [`pcm`] — expansion coefficients, potentials and solvation free energy
//!   for the dielectric jump problem.

pub mod ellipsoid;
pub mod error;
pub mod kahan;
pub mod lame;
pub mod normconst;
pub mod pcm;
pub mod quad;
pub(crate) mod tridiag;

pub use error::{Error, Result};
