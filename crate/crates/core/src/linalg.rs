//! Dense complex linear algebra shared by the spectral modules.
//!
//! Storage and products use nalgebra. Eigendecompositions and SVDs go through faer,
//! whose QR iteration converges on the permutation-like shifts that are common here.

use crate::error::{GspError, Result};
use faer::Side;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Lifts a real slice into a complex vector.
pub fn real_vector(values: &[f64]) -> CVector {
    CVector::from_iterator(values.len(), values.iter().map(|&v| c64(v, 0.0)))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn max_abs_diff_vec(a: &CVector, b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(GspError::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    if n != m.ncols() {
        return false;
    }
    let scale = max_abs(m).max(1.0);
    (0..n).all(|i| (i..n).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol * scale))
}

pub fn is_normal(m: &CMatrix, tol: f64) -> bool {
    let mh = m.adjoint();
    let scale = max_abs(m).max(1.0);
    max_abs_diff(&(m * &mh), &(&mh * m)) <= tol * scale * scale
}

/// `e^{-j 2 pi num / den}` with the exponent reduced modulo `den` first.
pub fn unit_root(num: usize, den: usize) -> C64 {
    let r = (num % den) as f64 / den as f64;
    C64::from_polar(1.0, -2.0 * PI * r)
}

/// Unitary DFT matrix with entries `e^{-j 2 pi k n / N} / sqrt(N)`.
pub fn dft(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |k, m| unit_root(k * m, n) * s)
}

/// Directed cycle with `A[(i + 1) % n, i] = 1`, so `(A s)_i = s_{i-1}`.
pub fn cycle_adjacency(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO })
}

/// Matrix `P` with `P[perm[i], i] = 1`; it sends coordinate `i` to position `perm[i]`.
pub fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut p = CMatrix::zeros(n, n);
    for (i, &pi) in perm.iter().enumerate() {
        p[(pi, i)] = ONE;
    }
    p
}

pub fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(GspError::InvalidPermutation(format!(
            "length {} does not match {} vertices",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GspError::InvalidPermutation(format!(
                "{perm:?} is not a bijection on 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn submatrix(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn diag(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(values))
}

/// `left * diag(d) * right` without forming the diagonal matrix.
pub fn sandwich(left: &CMatrix, d: &[C64], right: &CMatrix) -> CMatrix {
    let mut scaled = left.clone();
    for (j, &dj) in d.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= dj;
        }
    }
    scaled * right
}

fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues and right eigenvectors (columns) of a general square matrix.
pub fn eigen_general(m: &CMatrix) -> Result<(Vec<C64>, CMatrix)> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let evd = to_faer(m)
        .eigen()
        .map_err(|e| GspError::Eigensolver(format!("{e:?}")))?;
    let s = evd.S();
    let values = (0..n).map(|k| s[k]).collect();
    Ok((values, from_faer(evd.U())))
}

/// Real eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
pub fn eigen_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let evd = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| GspError::Eigensolver(format!("{e:?}")))?;
    let s = evd.S();
    let values = (0..n).map(|k| s[k].re).collect();
    Ok((values, from_faer(evd.U())))
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    to_faer(m)
        .singular_values()
        .map_err(|e| GspError::Eigensolver(format!("{e:?}")))
}

/// 2-norm condition number; infinite when the smallest singular value vanishes.
pub fn condition_number(m: &CMatrix) -> Result<f64> {
    let s = singular_values(m)?;
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}

/// Rank under the threshold `k * eps * sigma_max * 1e3`, with `k` the smaller dimension.
pub fn numerical_rank(singular: &[f64]) -> usize {
    let Some(&smax) = singular.first() else {
        return 0;
    };
    let thr = singular.len() as f64 * f64::EPSILON * smax * 1e3;
    singular.iter().filter(|&&s| s > thr).count()
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    require_square(m)?;
    m.clone()
        .try_inverse()
        .ok_or_else(|| GspError::Singular(format!("{} x {} matrix has no inverse", m.nrows(), m.ncols())))
}

/// Moore-Penrose pseudoinverse from a thin SVD, dropping singular values under the rank threshold.
pub fn pseudoinverse(m: &CMatrix) -> Result<CMatrix> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(CMatrix::zeros(c, r));
    }
    let svd = to_faer(m)
        .thin_svd()
        .map_err(|e| GspError::Eigensolver(format!("{e:?}")))?;
    let u = from_faer(svd.U());
    let v = from_faer(svd.V());
    let s = svd.S();
    let k = u.ncols();
    let sv: Vec<f64> = (0..k).map(|i| s[i].re).collect();
    let rank = numerical_rank(&sv);
    let inv: Vec<C64> = sv
        .iter()
        .enumerate()
        .map(|(i, &x)| if i < rank { c64(1.0 / x, 0.0) } else { ZERO })
        .collect();
    Ok(sandwich(&v, &inv, &u.adjoint()))
}

/// `sum_k coeffs[k] * z^k` by Horner's rule.
pub fn horner_scalar(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// `sum_k coeffs[k] * S^k x` by Horner's rule: `len - 1` matrix-vector products.
pub fn horner_matrix(shift: &CMatrix, coeffs: &[C64], x: &CVector) -> CVector {
    let mut it = coeffs.iter().rev();
    let Some(&lead) = it.next() else {
        return CVector::zeros(x.len());
    };
    let mut acc = x * lead;
    for &c in it {
        acc = shift * acc + x * c;
    }
    acc
}

/// `sum_k coeffs[k] * S^k` as a dense matrix.
pub fn polynomial_matrix(shift: &CMatrix, coeffs: &[C64]) -> CMatrix {
    let n = shift.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = shift * acc;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}

/// Solution of `V p = rhs` with `V[k, m] = nodes[k]^m`.
#[derive(Debug, Clone)]
pub struct VandermondeSolution {
    pub coeffs: CVector,
    /// Condition number of the column-scaled system.
    pub condition: f64,
    /// `max |V p - rhs|`.
    pub residual: f64,
}

impl VandermondeSolution {
    pub fn is_ill_conditioned(&self, rhs_scale: f64) -> bool {
        self.condition > 1e10 || self.residual > 1e-8 * rhs_scale.max(1.0)
    }
}

pub fn vandermonde(nodes: &[C64]) -> CMatrix {
    let n = nodes.len();
    let mut v = CMatrix::zeros(n, n);
    for (k, &z) in nodes.iter().enumerate() {
        let mut p = ONE;
        for m in 0..n {
            v[(k, m)] = p;
            p *= z;
        }
    }
    v
}

/// Column-scaled LU solve of a square Vandermonde system with one step of refinement.
pub fn solve_vandermonde(nodes: &[C64], rhs: &CVector) -> Result<VandermondeSolution> {
    let n = nodes.len();
    if rhs.len() != n {
        return Err(GspError::LengthMismatch { expected: n, found: rhs.len() });
    }
    let v = vandermonde(nodes);
    let scale: Vec<f64> = (0..n)
        .map(|m| {
            let s = (0..n).fold(0.0f64, |acc, k| acc.max(v[(k, m)].norm()));
            if s > 0.0 { 1.0 / s } else { 1.0 }
        })
        .collect();
    let mut vs = v.clone();
    for (m, &s) in scale.iter().enumerate() {
        for z in vs.column_mut(m).iter_mut() {
            *z *= s;
        }
    }
    let lu = vs.clone().lu();
    let mut y = lu
        .solve(rhs)
        .ok_or_else(|| GspError::Singular("Vandermonde matrix".into()))?;
    let r = rhs - &vs * &y;
    if let Some(dy) = lu.solve(&r) {
        y += dy;
    }
    let coeffs = CVector::from_iterator(n, y.iter().zip(&scale).map(|(z, &s)| z * s));
    let residual = max_abs_vec(&(&v * &coeffs - rhs));
    let condition = condition_number(&vs)?;
    Ok(VandermondeSolution { coeffs, condition, residual })
}
