use std::fmt;
use std::ops::{Index, IndexMut};

use super::{Complex, ONE, ZERO};
use crate::{Error, Result};

/// Dense complex matrix, row-major.
///
/// The universal numeric carrier: operators, unitaries and density matrices
/// are all `CMatrix` values. Entries are required to be finite; the checked
/// constructors reject NaN/Inf so no matrix in the system ever holds one.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    /// Checked constructor from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Constructor for internal arithmetic whose inputs are already finite.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    /// Diagonal matrix from complex entries.
    pub fn diag(entries: &[Complex]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    /// Standard matrix product; dimensions must chain.
    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)] * v[k];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Kronecker product with `self`'s indices most significant.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = CMatrix::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a == ZERO {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> CMatrix {
        CMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z.conj()).collect(),
        )
    }

    /// Sum of the diagonal; errors on non-square input.
    pub fn trace(&self) -> Result<Complex> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn scale(&self, factor: Complex) -> CMatrix {
        CMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * factor).collect(),
        )
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &CMatrix,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(CMatrix::from_raw(self.rows, self.cols, data))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |a_ij - conj(a_ji)| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// ||self * self' - I||_max, the unitarity defect.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = match self.matmul(&self.adjoint()) {
            Ok(g) => g,
            Err(_) => return f64::INFINITY,
        };
        gram.sub(&CMatrix::identity(self.rows))
            .map(|d| d.max_abs())
            .unwrap_or(f64::INFINITY)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Partial trace of a multi-qubit operator.
///
/// `rho` must be square of dimension 2^`qubit_count`; `keep` lists the
/// 1-based qubit indices of the subsystem to retain (qubit 1 is the most
/// significant bit of the basis index). The result is ordered by ascending
/// kept index and has dimension 2^|keep|.
pub fn partial_trace(rho: &CMatrix, qubit_count: usize, keep: &[usize]) -> Result<CMatrix> {
    let dim = 1usize << qubit_count;
    if !rho.is_square() {
        return Err(Error::NotSquare {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    if rho.rows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, but {} qubits require {}x{}",
            rho.rows(),
            rho.cols(),
            qubit_count,
            dim,
            dim
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidArgument(
            "duplicate qubit index in keep set".into(),
        ));
    }
    if kept.is_empty() {
        return Err(Error::InvalidArgument("keep set is empty".into()));
    }
    if kept.iter().any(|&q| q == 0 || q > qubit_count) {
        return Err(Error::InvalidArgument(format!(
            "keep set {:?} out of range for {} qubits",
            keep, qubit_count
        )));
    }

    let dropped: Vec<usize> = (1..=qubit_count).filter(|q| !kept.contains(q)).collect();
    let k = kept.len();
    let out_dim = 1usize << k;

    // Bit position (from the LSB) of network qubit q in a full index.
    let pos = |q: usize| qubit_count - q;

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for r in 0..out_dim {
        for c in 0..out_dim {
            let mut base_r = 0usize;
            let mut base_c = 0usize;
            for (bi, &q) in kept.iter().enumerate() {
                base_r |= ((r >> (k - 1 - bi)) & 1) << pos(q);
                base_c |= ((c >> (k - 1 - bi)) & 1) << pos(q);
            }
            let mut acc = ZERO;
            for e in 0..(1usize << dropped.len()) {
                let mut offs = 0usize;
                for (bi, &q) in dropped.iter().enumerate() {
                    offs |= ((e >> (dropped.len() - 1 - bi)) & 1) << pos(q);
                }
                acc += rho[(base_r | offs, base_c | offs)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, density_from, pauli, Axis, BellKind};
    use crate::tol;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        let d = a.sub(b).unwrap().max_abs();
        assert!(
            d <= tol,
            "matrices differ by {d:.3e} > {tol:.1e}\n{a:?}\n{b:?}"
        );
    }

    #[test]
    fn new_rejects_bad_length_and_nonfinite() {
        assert!(CMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(CMatrix::new(1, 2, vec![c(f64::NAN, 0.0), ZERO]).is_err());
        assert!(CMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn matmul_identity_and_pauli_involution() {
        let x = pauli(Axis::X);
        assert_close(&CMatrix::identity(2).matmul(&x).unwrap(), &x, 0.0);
        assert_close(&x.matmul(&x).unwrap(), &CMatrix::identity(2), 0.0);
    }

    #[test]
    fn matmul_x_times_y_is_i_z() {
        // direct 2x2 hand computation: sigma_x sigma_y = i sigma_z
        let xy = pauli(Axis::X).matmul(&pauli(Axis::Y)).unwrap();
        let iz = pauli(Axis::Z).scale(super::super::I);
        assert_close(&xy, &iz, 0.0);
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn kron_identities_and_dimensions() {
        let i2 = CMatrix::identity(2);
        assert_close(&i2.kron(&i2), &CMatrix::identity(4), 0.0);

        let zz = pauli(Axis::Z).kron(&pauli(Axis::Z));
        let expect = CMatrix::diag(&[ONE, -ONE, -ONE, ONE]);
        assert_close(&zz, &expect, 0.0);

        // |0><0| (x) sigma_x: sigma_x sits in the upper-left 2x2 block.
        let p0 = CMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 0 { ONE } else { ZERO });
        let k = p0.kron(&pauli(Axis::X));
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 1)] = ONE;
        expect[(1, 0)] = ONE;
        assert_close(&k, &expect, 0.0);

        let a = CMatrix::zeros(3, 2);
        let b = CMatrix::zeros(4, 5);
        let ab = a.kron(&b);
        assert_eq!((ab.rows(), ab.cols()), (12, 10));
    }

    #[test]
    fn adjoint_cases() {
        let i4 = CMatrix::identity(4);
        assert_close(&i4.adjoint(), &i4, 0.0);
        let y = pauli(Axis::Y);
        assert_close(&y.adjoint(), &y, 0.0);
        let d = CMatrix::diag(&[super::super::I, -super::super::I]);
        assert_close(
            &d.adjoint(),
            &CMatrix::diag(&[-super::super::I, super::super::I]),
            0.0,
        );
    }

    #[test]
    fn trace_cases() {
        assert_eq!(CMatrix::identity(4).trace().unwrap(), c(4.0, 0.0));
        assert_eq!(pauli(Axis::Z).trace().unwrap(), ZERO);
        let rho = density_from(&bell_state(BellKind::PhiPlus)).unwrap();
        assert!((rho.matrix().trace().unwrap() - ONE).norm() < 1e-15);
        assert!(CMatrix::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn partial_trace_bell_marginal_is_maximally_mixed() {
        let rho = density_from(&bell_state(BellKind::PhiPlus)).unwrap();
        let r1 = partial_trace(rho.matrix(), 2, &[1]).unwrap();
        assert_close(&r1, &CMatrix::identity(2).scale(c(0.5, 0.0)), 1e-15);
    }

    #[test]
    fn partial_trace_factorizes_product_states() {
        // rho_a (x) rho_b traced down to qubit 1 returns rho_a.
        let a = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.7, 0.0),
            (0, 1) => c(0.1, 0.2),
            (1, 0) => c(0.1, -0.2),
            _ => c(0.3, 0.0),
        });
        let b = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.4, 0.0),
            (0, 1) => c(-0.1, 0.05),
            (1, 0) => c(-0.1, -0.05),
            _ => c(0.6, 0.0),
        });
        let prod = a.kron(&b);
        assert_close(&partial_trace(&prod, 2, &[1]).unwrap(), &a, 1e-15);
        assert_close(&partial_trace(&prod, 2, &[2]).unwrap(), &b, 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace_and_commutes_over_disjoint_subsets() {
        // Random-ish Hermitian 4-qubit operator via outer products.
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let m = CMatrix::from_fn(16, 16, |_, _| c(next(), next()));
        let h = m.add(&m.adjoint()).unwrap().scale(c(0.5, 0.0));

        let t_full = h.trace().unwrap();
        for keep in [vec![1], vec![2, 4], vec![1, 2, 3], vec![4]] {
            let r = partial_trace(&h, 4, &keep).unwrap();
            assert!((r.trace().unwrap() - t_full).norm() <= tol::TRACE_PRESERVATION);
        }

        // Tracing out qubit 4 then qubit 3 equals tracing out {3,4} at once.
        let step1 = partial_trace(&h, 4, &[1, 2, 3]).unwrap();
        let step2 = partial_trace(&step1, 3, &[1, 2]).unwrap();
        let once = partial_trace(&h, 4, &[1, 2]).unwrap();
        assert_close(&step2, &once, tol::TRACE_PRESERVATION);
    }

    #[test]
    fn partial_trace_rejects_bad_inputs() {
        let rho = CMatrix::identity(4);
        assert!(partial_trace(&rho, 2, &[]).is_err());
        assert!(partial_trace(&rho, 2, &[3]).is_err());
        assert!(partial_trace(&rho, 2, &[0]).is_err());
        assert!(partial_trace(&rho, 2, &[1, 1]).is_err());
        assert!(partial_trace(&rho, 3, &[1]).is_err());
        assert!(partial_trace(&CMatrix::zeros(4, 2), 2, &[1]).is_err());
    }
}
