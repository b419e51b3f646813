//! Exact simulator of a small entangled network built from Bell pairs whose
//! nodes are coupled by the Dzyaloshinskii-Moriya (DM) interaction.
//!
//! The crate is organised in layers:
//!
//! - [`linalg`]: a self-contained dense complex matrix kernel (products,
//!   Kronecker composition, partial trace, Hermitian Jacobi eigensolver,
//!   matrix exponential and square root).
//! - [`qstate`]: Bell pairs, Pauli operators, multi-qubit operator embedding,
//!   pure-state/density conversions.
//! - [`dmnet`]: DM Hamiltonians, analytic and eigensolver-based unitaries,
//!   network evolution and six-node growth.
//! - [`entmeas`]: Wootters concurrence and the pure-state minimum network
//!   concurrence.
//! - [`teleport`]: the standard teleportation protocol over two-node channels
//!   with per-outcome and averaged fidelities.
//! - [`runner`]: figure presets, parameter sweeps, CSV emission with a
//!   replayable manifest header.
//!
//! Evolution is always exact: each requested time gets its own closed-form or
//! eigensolver-derived unitary, so there is no integrator error to manage.
//! All states are carried as pure global state vectors; density operators
//! appear only for reduced subsystems.

pub mod dmnet;
pub mod entmeas;
pub mod linalg;
pub mod qstate;
pub mod runner;
pub mod teleport;
pub mod tol;

mod error;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Complex};
pub use qstate::{Axis, BellKind, DensityOperator, StateVector};
