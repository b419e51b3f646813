//! Centralized numerical tolerances.
//!
//! Every threshold used by the library and its acceptance checks lives here,
//! so acceptance runs have a single point of tuning. Values below the
//! clamping floors are treated as roundoff; anything past them is a hard
//! error, not noise.

/// Maximum admissible |a_ij - conj(a_ji)| for a matrix fed to the Hermitian
/// eigensolver or accepted as a density operator.
pub const HERMITICITY: f64 = 1e-10;

/// Eigenvalues of nominally PSD matrices may dip this far below zero before
/// the state is considered broken; anything in (PSD_FLOOR, 0) is clamped.
pub const PSD_FLOOR: f64 = -1e-10;

/// Jacobi sweep convergence: off-diagonal Frobenius norm threshold.
pub const JACOBI_OFFDIAG: f64 = 1e-13;

/// Hard cap on Jacobi sweeps before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// ||V L V' - A||_max allowed for an eigendecomposition, and the matching
/// orthonormality budget for the eigenvector Gram matrix.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// ||U U' - I||_max allowed for any unitary produced by the library.
pub const UNITARITY: f64 = 1e-10;

/// (sqrtm(a))^2 must reconstruct a within this bound.
pub const SQRTM_RECONSTRUCTION: f64 = 1e-9;

/// |  ||psi||_2 - 1 | allowed for a state vector.
pub const STATE_NORM: f64 = 1e-12;

/// |tr(rho) - 1| allowed for a density operator.
pub const TRACE_ONE: f64 = 1e-10;

/// Trace preservation budget for the partial trace.
pub const TRACE_PRESERVATION: f64 = 1e-12;

/// Square-root eigenvalues below this are clamped to zero before the
/// concurrence max{.., 0) step, so -0 noise cannot flip near-separable
/// verdicts.
pub const SQRT_CLAMP: f64 = 1e-12;

/// Density-operator eigenvalues below this floor are treated as exact
/// zeros when a state is factored (they are roundoff, and their square
/// roots would otherwise enter as sqrt(eps)-sized ghosts).
pub const EIGENWEIGHT_FLOOR: f64 = 1e-14;

/// Concurrence and fidelity values may exceed their exact range by this much.
pub const RANGE_SLACK: f64 = 1e-10;

/// Elementwise agreement required between the closed-form unitaries and the
/// eigensolver exponential exp(-iHt).
pub const ANALYTIC_VS_ORACLE: f64 = 1e-10;

/// Cellwise agreement required between analytic-method and oracle-method
/// sweeps.
pub const METHOD_AGREEMENT: f64 = 1e-9;

/// state(t) vs state(t + pi/D) agreement for single-axis couplings.
pub const PERIODICITY: f64 = 1e-9;

/// Concurrence symmetry identities checked across whole sweeps.
pub const SYMMETRY_IDENTITY: f64 = 1e-9;

/// Global purity may deviate from 1 by at most this much.
pub const PURITY_DEVIATION: f64 = 1e-10;

/// Minimum global purity before the network minimum concurrence is computed.
pub const MIN_CONCURRENCE_PURITY: f64 = 1e-8;

/// Agreement between the Hermitian concurrence route and the
/// characteristic-polynomial route on random states.
pub const CONCURRENCE_ORACLE: f64 = 1e-8;

/// Werner-state closed form reproduction.
pub const WERNER_CLOSED_FORM: f64 = 1e-10;

/// Exact teleportation checks (perfect and useless channels).
pub const TELEPORT_EXACT: f64 = 1e-12;

/// Teleportation outcome probabilities must sum to 1 within this bound.
pub const PROBABILITY_SUM: f64 = 1e-10;

/// Outcome branches with probability below this floor get the maximally
/// mixed output state instead of a 0/0 division.
pub const PROBABILITY_FLOOR: f64 = 1e-14;

/// Monte-Carlo averaged fidelity vs the Werner closed form (2f+1)/3.
pub const MC_FIDELITY: f64 = 2e-3;

/// Repetition of per-period extrema of the network minimum concurrence.
pub const CMIN_BOUNDS_REPEAT: f64 = 1e-8;

/// Grid-location slack (in time units) for feature-position checks.
pub const GRID_LOCATION: f64 = 0.1;

/// Round-trip error admitted by the 12-significant-digit CSV format.
pub const CSV_ROUNDTRIP: f64 = 1e-11;
