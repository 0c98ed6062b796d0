//! Near-field continuation of radiating Helmholtz solutions from far-field
//! spectra.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: spherical Hankel functions through the finite closed-form
//!   sum, evaluated in double-double arithmetic, plus an independent
//!   recurrence oracle.
//! - [`harmonics`]: orthonormal complex spherical harmonics and a
//!   Gauss-Legendre product quadrature on the unit sphere.
//! - [`field`]: near-field traces on the sphere `|x| = R`, Sobolev norms and
//!   the low/high frequency split of the far-field energy.
//! - [`bounds`]: explicit Hankel envelopes and their applicability regions.
//! - [`stability`]: right-hand sides of the near-field stability estimates and
//!   their verification on synthesized fields.
//! - [`obstacle`]: linearized soft/hard inverse obstacle scattering about a
//!   sphere.
//! - [`lab`]: seeded ensembles, noise models and wavenumber sweeps.
//! - [`io`]: spectrum files and sweep CSV output.
//! - [`cli`]: the `helios` command line front end.

pub mod bounds;
pub mod cli;
mod dd;
pub mod error;
pub mod field;
pub mod harmonics;
pub mod io;
pub mod lab;
pub mod obstacle;
pub mod specfun;
pub mod stability;

pub use error::{Error, Result};
pub use num_complex::Complex64;
