//! Exact finite-N law of the maximal height of non-intersecting Brownian
//! bridges, its Laguerre Orthogonal Ensemble (LOE) representation, and the
//! numerical machinery used to cross-check it.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] evaluates Hermite and Laguerre functions, the Airy function
//!   and Gaussian quadrature rules.
//! * [`kernelmat`] builds the finite matrices whose determinants give the
//!   exact distribution functions.
//! * [`fredholm`] evaluates the Tracy–Widom GOE law by Nyström discretisation
//!   and compares it with the finite-N law.
//! * [`montecarlo`] samples LOE matrices and Hermitian Brownian bridges.
//! * [`verify`] turns every matrix and polynomial identity into a named,
//!   tolerance-checked report entry.

pub mod error;
pub mod exec;
pub mod fredholm;
pub mod kernelmat;
pub mod linalg;
pub mod montecarlo;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
