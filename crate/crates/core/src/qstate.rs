//! Quantum-state and gate constructors: Bell pairs, Pauli operators,
//! multi-qubit operator embedding, pure-state/density conversions.
//!
//! Conventions, used everywhere in the crate: qubit 1 is the most
//! significant bit of the basis index, so the basis state |q1 q2 .. qN>
//! corresponds to the integer q1*2^(N-1) + .. + qN, and two-qubit bases are
//! ordered (|00>, |01>, |10>, |11>).

use crate::linalg::{self, CMatrix, Complex, ONE, ZERO};
use crate::{tol, Error, Result};

/// One of the three Pauli axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// The other two axes in cyclic order: x -> (y, z), y -> (z, x),
    /// z -> (x, y).
    pub fn cyclic(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn label(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

/// Standard 2x2 Pauli matrix.
pub fn pauli(axis: Axis) -> CMatrix {
    let (a, b, c, d) = match axis {
        Axis::X => (ZERO, ONE, ONE, ZERO),
        Axis::Y => (ZERO, -linalg::I, linalg::I, ZERO),
        Axis::Z => (ONE, ZERO, ZERO, -ONE),
    };
    CMatrix::new(2, 2, vec![a, b, c, d]).unwrap()
}

/// The four maximally entangled two-qubit basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
        }
    }
}

impl std::str::FromStr for BellKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi_plus" | "phi+" => Ok(BellKind::PhiPlus),
            "phi_minus" | "phi-" => Ok(BellKind::PhiMinus),
            "psi_plus" | "psi+" => Ok(BellKind::PsiPlus),
            "psi_minus" | "psi-" => Ok(BellKind::PsiMinus),
            other => Err(Error::InvalidArgument(format!(
                "unknown Bell state '{other}'"
            ))),
        }
    }
}

/// Pure global state over N qubits, stored as 2^N amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    /// Checked constructor; the amplitude vector must have length
    /// 2^`qubit_count` and unit norm within [`tol::STATE_NORM`].
    pub fn new(qubit_count: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        if qubit_count == 0 || amplitudes.len() != 1 << qubit_count {
            return Err(Error::DimensionMismatch(format!(
                "{} qubits require {} amplitudes, got {}",
                qubit_count,
                1usize << qubit_count,
                amplitudes.len()
            )));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self {
            qubit_count,
            amplitudes,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Tensor product, `self`'s qubits first (most significant).
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector {
            qubit_count: self.qubit_count + other.qubit_count,
            amplitudes,
        }
    }

    /// |<self|other>|^2.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex>()
            .norm_sqr()
    }
}

/// Bell state per the network's sign convention.
pub fn bell_state(kind: BellKind) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match kind {
        // (|11> + |00>)/sqrt2 and (|11> - |00>)/sqrt2
        BellKind::PhiPlus => [s, 0.0, 0.0, s],
        BellKind::PhiMinus => [-s, 0.0, 0.0, s],
        // (|01> +- |10>)/sqrt2
        BellKind::PsiPlus => [0.0, s, s, 0.0],
        BellKind::PsiMinus => [0.0, s, -s, 0.0],
    };
    StateVector::new(2, amps.iter().map(|&re| Complex::new(re, 0.0)).collect()).unwrap()
}

/// Hermitian, unit-trace, PSD operator for a (reduced) subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    qubit_count: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Checked constructor: validates Hermiticity within
    /// [`tol::HERMITICITY`], unit trace within [`tol::TRACE_ONE`] and
    /// eigenvalues above [`tol::PSD_FLOOR`].
    pub fn new(qubit_count: usize, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << qubit_count;
        if !matrix.is_square() || matrix.rows() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} qubits require a {}x{} matrix, got {}x{}",
                qubit_count,
                dim,
                dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: tol::HERMITICITY,
            });
        }
        let tr = matrix.trace()?;
        if (tr.re - 1.0).abs() > tol::TRACE_ONE || tr.im.abs() > tol::TRACE_ONE {
            return Err(Error::InvariantViolation(format!(
                "density operator trace is {:.12} + {:.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eig = linalg::eig_hermitian(&matrix)?;
        if let Some(&l) = eig.eigenvalues.iter().find(|&&l| l < tol::PSD_FLOOR) {
            return Err(Error::NotPositive(l));
        }
        Ok(Self {
            qubit_count,
            matrix,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The maximally mixed state I/2^n.
    pub fn maximally_mixed(qubit_count: usize) -> Self {
        let dim = 1usize << qubit_count;
        let m = CMatrix::identity(dim).scale(Complex::new(1.0 / dim as f64, 0.0));
        Self {
            qubit_count,
            matrix: m,
        }
    }
}

/// Rank-one projector |psi><psi| of a pure state.
pub fn density_from(psi: &StateVector) -> Result<DensityOperator> {
    let n = psi.amplitudes.len();
    let norm = psi.norm();
    if (norm - 1.0).abs() > tol::STATE_NORM {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    let m = CMatrix::from_fn(n, n, |i, j| psi.amplitudes[i] * psi.amplitudes[j].conj());
    // Hermitian, trace 1 and PSD hold by construction for a normalized psi.
    Ok(DensityOperator {
        qubit_count: psi.qubit_count,
        matrix: m,
    })
}

/// Tr(rho^2), in [1/2^n, 1] up to roundoff.
pub fn purity(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    let mut acc = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            // tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 (Hermitian)
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc
}

/// Embed an operator on `targets` into a `qubit_count`-qubit register,
/// acting as the identity elsewhere.
///
/// `op` must have dimension 2^k for k targets; `targets` are 1-based,
/// distinct, and may come in any order: the i-th qubit of `op` (most
/// significant first) acts on network qubit `targets[i]`, so non-adjacent
/// and order-reversed placements work by index permutation.
pub fn embed(op: &CMatrix, targets: &[usize], qubit_count: usize) -> Result<CMatrix> {
    let k = targets.len();
    if k == 0 || !op.is_square() || op.rows() != 1 << k {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, but {} targets require {}x{}",
            op.rows(),
            op.cols(),
            k,
            1usize << k,
            1usize << k
        )));
    }
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k || sorted.iter().any(|&q| q == 0 || q > qubit_count) {
        return Err(Error::InvalidArgument(format!(
            "targets {:?} must be distinct and within 1..={}",
            targets, qubit_count
        )));
    }

    let dim = 1usize << qubit_count;
    let pos = |q: usize| qubit_count - q; // bit position from the LSB
    let target_mask: usize = targets.iter().map(|&q| 1usize << pos(q)).sum();

    let gather = |idx: usize| -> usize {
        let mut sub = 0usize;
        for (bi, &q) in targets.iter().enumerate() {
            sub |= ((idx >> pos(q)) & 1) << (k - 1 - bi);
        }
        sub
    };

    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            if r & !target_mask != c & !target_mask {
                continue;
            }
            out[(r, c)] = op[(gather(r), gather(c))];
        }
    }
    Ok(out)
}
