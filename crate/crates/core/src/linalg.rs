//! Dense complex-matrix primitives for the small (2x2 .. 4x4) problems this
//! crate needs: Hermitian eigendecomposition via cyclic Jacobi rotations,
//! principal square root of PSD matrices, partial transpose, Kronecker
//! products and trace forms.
//!
//! Everything here is exact-shape, heap-backed and unapologetically O(n^3);
//! at these dimensions a robust dependency-free Jacobi sweep beats pulling in
//! a LAPACK binding.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Inputs to `hermitian_eig` may deviate from exact Hermiticity by this much.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues in [PSD_FLOOR, 0) are clamped to 0; below it is an error.
pub const PSD_FLOOR: f64 = -1e-10;
/// Eigenvalues below this are round-off noise on an exact zero (the family
/// states are rank deficient); the square root treats them as 0 so the noise
/// is not amplified from ~1e-16 to its square root.
pub const ZERO_EIG_CLAMP: f64 = 1e-14;
/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
const JACOBI_OFF_TOL: f64 = 1e-14;
const MAX_JACOBI_SWEEPS: usize = 64;
/// Smallest eigenvector component considered nonzero by the phase convention.
const PHASE_PIVOT_TOL: f64 = 1e-8;

/// Dense row-major complex matrix of side `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major real/imag pairs; length must be dim^2.
    pub fn from_pairs(dim: usize, pairs: &[[f64; 2]]) -> Self {
        assert_eq!(pairs.len(), dim * dim, "expected {} entries", dim * dim);
        Self::from_fn(dim, |i, j| {
            let [re, im] = pairs[i * dim + j];
            Complex64::new(re, im)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in mul");
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        Self::from_fn(self.dim, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        Self::from_fn(self.dim, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] * factor)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |A_ij - conj(A_ji)| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// (A + A†)/2 — kills sub-tolerance asymmetry before eigensolves.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// 2x2 Pauli x.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_pairs(2, &[[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
}

/// 2x2 Pauli y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_pairs(2, &[[0.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]])
}

/// 2x2 Pauli z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_pairs(2, &[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]])
}

/// Kronecker product; for 2x2 inputs this is the two-qubit operator A (x) B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Which tensor factor the partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Block-wise transpose of a 4x4 two-qubit matrix on the chosen subsystem.
///
/// A pure entry permutation: exactly involutive, preserves the diagonal
/// (hence the trace) and Hermiticity bit-for-bit.
pub fn partial_transpose(m: &ComplexMatrix, subsystem: Subsystem) -> ComplexMatrix {
    assert_eq!(m.dim(), 4, "partial transpose is defined on 4x4 matrices");
    ComplexMatrix::from_fn(4, |row, col| {
        let (i, k) = (row / 2, row % 2);
        let (j, l) = (col / 2, col % 2);
        match subsystem {
            Subsystem::A => m[(2 * j + k, 2 * i + l)],
            Subsystem::B => m[(2 * i + l, 2 * j + k)],
        }
    })
}

/// Spectrum (ascending) plus orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V diag(λ) V† — used by reconstruction tests.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

fn off_diagonal_frobenius(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations, iterating until the off-diagonal Frobenius norm is below 1e-14.
///
/// Eigenvalues come back ascending; each eigenvector is phase-fixed so that
/// its first component of magnitude > 1e-8 is real positive, which makes
/// serialized output byte-stable across runs.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_finite() {
        return Err(Error::InvalidParams(
            "matrix entries must be finite".to_string(),
        ));
    }
    let dev = a.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let n = a.dim();
    let mut m = a.hermitized();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_frobenius(&m) < JACOBI_OFF_TOL {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let beta = m[(p, q)];
                let b = beta.norm();
                if b == 0.0 {
                    continue;
                }
                // Strip the phase so the (p,q) block becomes real symmetric,
                // then a standard real rotation annihilates it.
                let phase_conj = beta.conj() / b;
                let alpha = m[(p, p)].re;
                let delta = m[(q, q)].re;
                let theta = (delta - alpha) / (2.0 * b);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let mut j_rot = ComplexMatrix::identity(n);
                j_rot[(p, p)] = Complex64::new(c, 0.0);
                j_rot[(p, q)] = Complex64::new(s, 0.0);
                j_rot[(q, p)] = -phase_conj * s;
                j_rot[(q, q)] = phase_conj * c;

                m = j_rot.adjoint().mul(&m).mul(&j_rot);
                v = v.mul(&j_rot);
            }
        }
    }
    if !converged && off_diagonal_frobenius(&m) >= JACOBI_OFF_TOL {
        return Err(Error::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    for col in 0..n {
        let pivot = (0..n).find(|&i| eigenvectors[(i, col)].norm() > PHASE_PIVOT_TOL);
        if let Some(i) = pivot {
            let z = eigenvectors[(i, col)];
            let u = z.conj() / z.norm();
            for row in 0..n {
                eigenvectors[(row, col)] *= u;
            }
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues between -1e-10 and the round-off floor are clamped to 0 (the
/// X-state family is rank deficient, so exact zeros routinely round to noise
/// of either sign); anything below -1e-10 is an error.
pub fn matrix_sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let mut roots = Vec::with_capacity(eig.eigenvalues.len());
    for &lambda in &eig.eigenvalues {
        if lambda < PSD_FLOOR {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: lambda,
            });
        }
        roots.push(if lambda < ZERO_EIG_CLAMP {
            0.0
        } else {
            lambda.sqrt()
        });
    }
    let n = a.dim();
    let v = &eig.eigenvectors;
    let s = ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| v[(i, k)] * roots[k] * v[(j, k)].conj())
            .sum()
    });
    Ok(s.hermitized())
}
