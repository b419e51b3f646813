//! Self-contained dense complex matrix kernel.
//!
//! Everything the simulator needs from linear algebra lives here: matrix
//! products, Kronecker composition, the partial trace, a cyclic complex
//! Jacobi eigensolver for Hermitian matrices, and the matrix functions built
//! on it (exp(-iHt), PSD square root). Matrices are small (dimension at most
//! 64 for a six-node network), so clarity and exactness win over performance
//! engineering.
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

mod eig;
mod matrix;

pub use eig::{eig_hermitian, expm_hermitian_scaled, sqrtm_psd, EigenDecomposition};
pub use matrix::{partial_trace, CMatrix};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// 0 + 0i.
pub const ZERO: Complex = Complex::new(0.0, 0.0);
/// 1 + 0i.
pub const ONE: Complex = Complex::new(1.0, 0.0);
/// 0 + 1i.
pub const I: Complex = Complex::new(0.0, 1.0);
