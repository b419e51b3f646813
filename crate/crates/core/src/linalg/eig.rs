use super::{CMatrix, Complex, ZERO};
use crate::{tol, Error, Result};

/// Result of a Hermitian eigendecomposition: `a = V diag(L) V'` with real
/// eigenvalues sorted descending and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// V f(L) V' for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> Complex) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<Complex> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// The input must be Hermitian within [`tol::HERMITICITY`]; it is
/// symmetrized before iterating so roundoff-level asymmetry cannot leak
/// into the result. Convergence is declared when the off-diagonal Frobenius
/// norm drops below [`tol::JACOBI_OFFDIAG`], with a hard cap of
/// [`tol::JACOBI_MAX_SWEEPS`] sweeps.
pub fn eig_hermitian(a: &CMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let dev = a.hermiticity_deviation();
    if dev > tol::HERMITICITY {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol::HERMITICITY,
        });
    }

    let n = a.rows();
    let mut m = a.add(&a.adjoint()).unwrap().scale(Complex::new(0.5, 0.0));
    let mut v = CMatrix::identity(n);

    let off_norm = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n < 2 || off_norm(&m) <= tol::JACOBI_OFFDIAG;
    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Phase factor turning the (p,q) block real, then a plane
                // rotation annihilating the off-diagonal entry.
                let phase = apq / abs; // e^{i phi}
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                let theta = 0.5 * (2.0 * abs).atan2(alpha - gamma);
                let cs = Complex::new(theta.cos(), 0.0);
                let sn = Complex::new(theta.sin(), 0.0);
                // J columns: p -> (c, s e^{-i phi}), q -> (-s, c e^{-i phi})
                let jpp = cs;
                let jpq = -sn;
                let jqp = sn * phase.conj();
                let jqq = cs * phase.conj();

                // m <- J' m J, touching only rows/columns p and q.
                for r in 0..n {
                    let mp = m[(r, p)];
                    let mq = m[(r, q)];
                    m[(r, p)] = mp * jpp + mq * jqp;
                    m[(r, q)] = mp * jpq + mq * jqq;
                }
                for cidx in 0..n {
                    let mp = m[(p, cidx)];
                    let mq = m[(q, cidx)];
                    m[(p, cidx)] = jpp.conj() * mp + jqp.conj() * mq;
                    m[(q, cidx)] = jpq.conj() * mp + jqq.conj() * mq;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex::new(m[(q, q)].re, 0.0);

                for r in 0..n {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp * jpp + vq * jqp;
                    v[(r, q)] = vp * jpq + vq * jqq;
                }
            }
        }
        converged = off_norm(&m) <= tol::JACOBI_OFFDIAG;
    }
    if !converged {
        return Err(Error::NoConvergence(tol::JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// exp(-i h t) for Hermitian `h`, via eigendecomposition.
pub fn expm_hermitian_scaled(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(eig.apply(|l| Complex::from_polar(1.0, -l * t)))
}

/// Hermitian PSD square root.
///
/// Eigenvalues in ([`tol::PSD_FLOOR`], 0) are treated as roundoff and
/// clamped to zero; anything below the floor signals a genuinely broken
/// state upstream and is an error.
pub fn sqrtm_psd(a: &CMatrix) -> Result<CMatrix> {
    let eig = eig_hermitian(a)?;
    if let Some(&l) = eig.eigenvalues.iter().find(|&&l| l < tol::PSD_FLOOR) {
        return Err(Error::NotPositive(l));
    }
    Ok(eig.apply(|l| Complex::new(l.max(0.0).sqrt(), 0.0)))
}
