//! Covariant Lax tensors for particle motion on curved manifolds.
//!
//! A Lax tensor is a phase-space dependent mixed tensor `L^a_b(x, p)` that is
//! covariantly conserved along the Hamiltonian flow; its components form an
//! ordinary Lax matrix whose partner `M` is built from the connection, and
//! traces of its powers are constants of motion. This crate builds such
//! tensors from Killing-Yano and closed conformal Killing-Yano structures,
//! lifts them to Clifford (gamma-matrix) elements, integrates geodesic and
//! charged-particle trajectories, and verifies every conservation law and
//! algebraic identity along the way.
//!
//! The modules mirror that pipeline:
//!
//! - [`dual`], [`linalg`]: forward-mode dual numbers and small generic dense
//!   matrices -- the numerical substrate.
//! - [`manifold`]: metrics, Christoffel symbols, orthonormal frames, Ricci
//!   rotation coefficients.
//! - [`forms`]: wedge, last-slot contraction, Hodge duality.
//! - [`phasespace`]: Poisson brackets, the `(u, f)` flow splitting, and the
//!   covariant time derivative of tensor observables.
//! - [`symmetry`]: Killing-Yano / CCKY verification gates and the conserved
//!   forms `kappa`, `mu`, `Phi`, `F`.
//! - [`lax`]: the Lax operator catalog, Lax-pair extraction, residual tests,
//!   trace invariants, and the determinant identity for quadratic constants.
//! - [`clifford`]: gamma bases in any dimension/signature, spin connections,
//!   Clifford Lax pairs.
//! - [`dynamics`]: adaptive/fixed-step integration with invariant monitoring
//!   and CSV export.
//! - [`spacetimes`]: the validated catalog (Minkowski, flat 3-space,
//!   Schwarzschild, Kerr, weakly charged Kerr).
//! - [`cli`]: config-driven commands producing machine-readable reports; see
//!   the `covlax` binary.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability.

pub mod cli;
pub mod clifford;
pub mod dual;
pub mod dynamics;
pub mod error;
pub mod forms;
pub mod lax;
pub mod linalg;
pub mod manifold;
pub mod phasespace;
pub mod spacetimes;
pub mod symmetry;

pub use error::{Error, Result};
