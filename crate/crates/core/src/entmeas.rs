//! Entanglement quantification: Wootters concurrence for two-qubit reduced
//! states and the pure-state minimum concurrence of the whole network.
//!
//! The concurrence is computed through the Hermitian route only: with
//! s = sqrt(rho) and the spin-flipped state rb = (YY) rho* (YY), the
//! eigenvalues of R = sqrt(s rb s) are obtained as the square roots of the
//! (clamped) eigenvalues of the Hermitian product s rb s, so no general
//! complex eigensolver is ever needed. The non-Hermitian product rho rb is
//! reserved for test oracles via characteristic-polynomial roots.

use crate::dmnet::{DMCoupling, NetworkState};
use crate::linalg::{self, CMatrix};
use crate::qstate::{density_from, pauli, purity, Axis, DensityOperator};
use crate::runner::{Manifest, SweepResult};
use crate::{tol, Error, Result};

/// One concurrence sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub pair: (usize, usize),
    pub t: f64,
}

impl ConcurrenceValue {
    fn checked(value: f64, pair: (usize, usize), t: f64) -> Result<Self> {
        if !(0.0..=1.0 + tol::RANGE_SLACK).contains(&value) {
            return Err(Error::InvariantViolation(format!(
                "concurrence {value} for pair {pair:?} at t = {t} outside [0, 1]"
            )));
        }
        Ok(Self { value, pair, t })
    }
}

/// The spin-flipped state (Y (x) Y) rho* (Y (x) Y) of a two-qubit density
/// operator; Hermitian and PSD.
pub fn spin_flip(rho: &DensityOperator) -> Result<CMatrix> {
    if rho.qubit_count() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "spin flip is defined for 2 qubits, got {}",
            rho.qubit_count()
        )));
    }
    let yy = pauli(Axis::Y).kron(&pauli(Axis::Y));
    yy.matmul(&rho.matrix().conj())?.matmul(&yy)
}

/// Wootters concurrence of a two-qubit density operator, in [0, 1].
///
/// The eigenvalues of R = sqrt(sqrt(rho) rb sqrt(rho)) are evaluated as the
/// singular values of tau = X^T (YY) X with rho = X X': the same Hermitian
/// route, but factored so that a state's roundoff-level eigenvalues enter
/// quadratically instead of as sqrt(eps) ghosts. Rank-deficient states
/// (every pure state) then get exact zero roots, which the unfactored
/// product form cannot deliver in floating point.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.qubit_count() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence is defined for 2 qubits, got {}",
            rho.qubit_count()
        )));
    }
    let eig = linalg::eig_hermitian(rho.matrix())?;
    if let Some(&l) = eig.eigenvalues.iter().find(|&&l| l < tol::PSD_FLOOR) {
        return Err(Error::NotPositive(l));
    }
    // Columns x_i = sqrt(l_i) v_i; weights at the roundoff floor are exact
    // zeros of the state, not data.
    let v = &eig.eigenvectors;
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if l < tol::EIGENWEIGHT_FLOOR {
                0.0
            } else {
                l.sqrt()
            }
        })
        .collect();
    let x = CMatrix::from_fn(4, 4, |i, j| {
        v[(i, j)] * linalg::Complex::new(weights[j], 0.0)
    });

    let yy = pauli(Axis::Y).kron(&pauli(Axis::Y));
    let mut xt = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            xt[(i, j)] = x[(j, i)];
        }
    }
    let tau = xt.matmul(&yy)?.matmul(&x)?;
    let gram = tau.adjoint().matmul(&tau)?;
    let eig = linalg::eig_hermitian(&gram)?;

    // Descending singular values of tau substitute for the sqrt(l_i),
    // clamped so -0 noise cannot flip near-separable verdicts.
    let mut roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let r = l.max(0.0).sqrt();
            if r < tol::SQRT_CLAMP {
                0.0
            } else {
                r
            }
        })
        .collect();
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Minimum N-qubit concurrence of the pure global state:
/// sqrt(1 - (1/N) sum_i tr(rho_i^2)) over the single-node marginals.
pub fn min_concurrence(net: &NetworkState) -> Result<f64> {
    let rho = density_from(net.psi())?;
    let global_purity = purity(&rho);
    if (global_purity - 1.0).abs() > tol::MIN_CONCURRENCE_PURITY {
        return Err(Error::InvariantViolation(format!(
            "minimum concurrence needs a pure global state; purity is {global_purity}"
        )));
    }
    let n = net.node_count();
    let mut acc = 0.0;
    for q in 1..=n {
        let m = linalg::partial_trace(rho.matrix(), n, &[q])?;
        let marginal = DensityOperator::new(1, m)?;
        acc += purity(&marginal);
    }
    Ok((1.0 - acc / n as f64).max(0.0).sqrt())
}

/// Concurrence of selected node pairs over a time grid, via the oracle
/// evolution route.
///
/// The grid must start at 0 and increase strictly. Each time point gets an
/// exact propagator state; the t = 0 column therefore reproduces the
/// initial network exactly.
pub fn concurrence_series(
    net0: &NetworkState,
    c: &DMCoupling,
    t_grid: &[f64],
    pairs: &[(usize, usize)],
) -> Result<SweepResult> {
    concurrence_table(
        net0,
        c,
        t_grid,
        pairs,
        crate::dmnet::EvolutionMethod::Oracle,
    )
}

pub(crate) fn concurrence_table(
    net0: &NetworkState,
    c: &DMCoupling,
    t_grid: &[f64],
    pairs: &[(usize, usize)],
    method: crate::dmnet::EvolutionMethod,
) -> Result<SweepResult> {
    validate_grid(t_grid)?;
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("no pairs requested".into()));
    }
    let axis_suffix = c
        .single_axis()
        .map(|(a, _)| a.label().to_string())
        .unwrap_or_default();
    let mut columns = vec!["t".to_string()];
    columns.extend(pairs.iter().map(|(i, j)| format!("C_{i}{j}{axis_suffix}")));

    let states = crate::dmnet::states_on_grid(net0, c, t_grid, method)?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for (&t, psi) in t_grid.iter().zip(&states) {
        let rho = density_from(psi)?;
        let mut row = Vec::with_capacity(pairs.len() + 1);
        row.push(t);
        for &(i, j) in pairs {
            let m = linalg::partial_trace(rho.matrix(), net0.node_count(), &[i, j])?;
            let channel = DensityOperator::new(2, m)?;
            let value = concurrence(&channel)?;
            row.push(ConcurrenceValue::checked(value, (i, j), t)?.value);
        }
        rows.push(row);
    }
    Ok(SweepResult::new(columns, rows, Manifest::new()))
}

pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidArgument("time grid must start at 0".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "time grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}
