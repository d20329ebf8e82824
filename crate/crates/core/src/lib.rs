//! Exact symbolic verification of higher-order integrals of motion for the
//! Holt-type planar potentials and their two-parameter limit
//! `U = (k2 x + k3) / y^(2/3)`, plus symplectic integration to check the
//! same conservation laws numerically.
//!
//! Phase-space functions are Laurent polynomials in `u = y^(1/3)` with
//! polynomial coefficients in `x, px, py` and in the parameters
//! `k1, k2, k3` over the rationals; see [`phasepoly`].

pub mod catalog;
pub mod cli;
pub mod dynamics;
pub mod phasepoly;
pub mod ring;
pub mod verify;

pub use catalog::{CatalogEntry, Kind};
pub use phasepoly::{hamiltonian_vf, poisson_bracket, vf_commutator, PhasePoint, PhasePoly, VectorField};
pub use ring::{ParamPoly, Rational};
pub use verify::{full_suite, VerificationReport};
