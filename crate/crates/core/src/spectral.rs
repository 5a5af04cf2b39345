//! Spectral bases, graph Fourier transforms and the spectral shift `M = GFT Λ* GFT⁻¹`.

use std::sync::OnceLock;

use crate::error::{GspError, Result};
use crate::graphs::Graph;
use crate::linalg::{
    condition_number, eigen_general, eigen_hermitian, inverse, is_hermitian, max_abs, max_abs_diff,
    require_square, sandwich, CMatrix, CVector, C64,
};

pub const NUMERIC_ORDERING_TAG: &str = "numeric:desc-re-then-im;unit-norm;max-entry-real-positive";

macro_rules! signal_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(CVector);

        impl $name {
            pub fn new(values: CVector) -> Self {
                Self(values)
            }

            pub fn from_real(values: &[f64]) -> Self {
                Self(crate::linalg::real_vector(values))
            }

            pub fn from_complex(values: &[C64]) -> Self {
                Self(CVector::from_column_slice(values))
            }

            pub fn zeros(n: usize) -> Self {
                Self(CVector::zeros(n))
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn values(&self) -> &CVector {
                &self.0
            }

            pub fn into_inner(self) -> CVector {
                self.0
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                crate::linalg::max_abs_diff_vec(&self.0, &other.0)
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = C64;
            fn index(&self, i: usize) -> &C64 {
                &self.0[i]
            }
        }
    };
}

signal_type!(
    /// Signal indexed by graph vertices.
    GraphSignal
);
signal_type!(
    /// Signal indexed by graph frequencies.
    Spectrum
);

/// Outcome of the pairwise eigenvalue separation test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distinctness {
    pub distinct: bool,
    /// `1e-8 * max |λ|`.
    pub tol: f64,
    /// Smallest pairwise gap; infinite for a single eigenvalue.
    pub min_gap: f64,
}

impl Distinctness {
    pub fn of(lambda: &[C64]) -> Self {
        let scale = lambda.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let tol = 1e-8 * scale;
        let mut min_gap = f64::INFINITY;
        for i in 0..lambda.len() {
            for j in i + 1..lambda.len() {
                min_gap = min_gap.min((lambda[i] - lambda[j]).norm());
            }
        }
        Self { distinct: min_gap > tol, tol, min_gap }
    }
}

/// Frozen eigendecomposition `A = GFT⁻¹ Λ GFT`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    gft: CMatrix,
    igft: CMatrix,
    lambda: CVector,
    ordering_tag: String,
    distinctness: Distinctness,
    shift: OnceLock<CMatrix>,
    spectral_shift: OnceLock<CMatrix>,
}

impl SpectralBasis {
    /// Validates shapes and `GFT GFT⁻¹ = I` within 1e-9.
    pub fn new(gft: CMatrix, igft: CMatrix, lambda: CVector, ordering_tag: impl Into<String>) -> Result<Self> {
        let n = require_square(&gft)?;
        if igft.shape() != (n, n) {
            return Err(GspError::NotSquare(igft.nrows(), igft.ncols()));
        }
        if lambda.len() != n {
            return Err(GspError::LengthMismatch { expected: n, found: lambda.len() });
        }
        let err = max_abs_diff(&(&gft * &igft), &CMatrix::identity(n, n));
        if err > 1e-9 {
            return Err(GspError::Singular(format!("GFT and GFT⁻¹ are not inverse (error {err:e})")));
        }
        let distinctness = Distinctness::of(lambda.as_slice());
        Ok(Self {
            gft,
            igft,
            lambda,
            ordering_tag: ordering_tag.into(),
            distinctness,
            shift: OnceLock::new(),
            spectral_shift: OnceLock::new(),
        })
    }

    /// Skips the inverse check; callers report conditioning themselves.
    pub(crate) fn from_parts(gft: CMatrix, igft: CMatrix, lambda: CVector, ordering_tag: String) -> Self {
        let distinctness = Distinctness::of(lambda.as_slice());
        Self {
            gft,
            igft,
            lambda,
            ordering_tag,
            distinctness,
            shift: OnceLock::new(),
            spectral_shift: OnceLock::new(),
        }
    }

    /// Builds the basis from eigenvalues and eigenvector columns, inverting the latter.
    pub fn from_eigenvectors(lambda: CVector, igft: CMatrix, ordering_tag: impl Into<String>) -> Result<Self> {
        let gft = inverse(&igft)?;
        Self::new(gft, igft, lambda, ordering_tag)
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn gft(&self) -> &CMatrix {
        &self.gft
    }

    pub fn igft(&self) -> &CMatrix {
        &self.igft
    }

    pub fn lambda(&self) -> &CVector {
        &self.lambda
    }

    pub fn ordering_tag(&self) -> &str {
        &self.ordering_tag
    }

    pub fn distinctness(&self) -> Distinctness {
        self.distinctness
    }

    pub fn has_distinct_eigenvalues(&self) -> bool {
        self.distinctness.distinct
    }

    /// The shift this basis diagonalizes, `GFT⁻¹ Λ GFT`.
    pub fn shift(&self) -> &CMatrix {
        self.shift.get_or_init(|| sandwich(&self.igft, self.lambda.as_slice(), &self.gft))
    }

    /// `M = GFT Λ* GFT⁻¹`.
    pub fn spectral_shift(&self) -> &CMatrix {
        self.spectral_shift.get_or_init(|| {
            let conj: Vec<C64> = self.lambda.iter().map(|z| z.conj()).collect();
            sandwich(&self.gft, &conj, &self.igft)
        })
    }

    /// Relabels vertices and frequencies with the same permutation: `GFT' = Π GFT Πᵀ`, `λ' = Π λ`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::linalg::validate_permutation(perm, self.n())?;
        let n = self.n();
        let mut gft = CMatrix::zeros(n, n);
        let mut igft = CMatrix::zeros(n, n);
        let mut lambda = CVector::zeros(n);
        for i in 0..n {
            lambda[perm[i]] = self.lambda[i];
            for j in 0..n {
                gft[(perm[i], perm[j])] = self.gft[(i, j)];
                igft[(perm[i], perm[j])] = self.igft[(i, j)];
            }
        }
        Ok(Self {
            gft,
            igft,
            lambda,
            ordering_tag: format!("{}+permuted", self.ordering_tag),
            distinctness: self.distinctness,
            shift: OnceLock::new(),
            spectral_shift: OnceLock::new(),
        })
    }

    /// Max-norm error of `GFT⁻¹ Λ GFT` against `a`, relative to `1 + ‖a‖_max`.
    pub fn reconstruction_error(&self, a: &CMatrix) -> f64 {
        max_abs_diff(self.shift(), a) / (1.0 + max_abs(a))
    }
}

/// Returns the graph's own basis when it carries one, else a numeric eigendecomposition.
pub fn spectral_basis(g: &Graph) -> Result<SpectralBasis> {
    match g.analytic_basis() {
        Some(b) => Ok(b.clone()),
        None => numeric_basis(g.adjacency()),
    }
}

/// Eigendecomposition in canonical order: descending real part, then descending imaginary part.
/// Eigenvectors have unit 2-norm and their first largest-magnitude entry is real and positive.
pub fn numeric_basis(a: &CMatrix) -> Result<SpectralBasis> {
    let n = require_square(a)?;
    if n == 0 {
        return SpectralBasis::new(CMatrix::zeros(0, 0), CMatrix::zeros(0, 0), CVector::zeros(0), NUMERIC_ORDERING_TAG);
    }
    let hermitian = is_hermitian(a, 1e-13);
    let (values, mut vectors) = if hermitian {
        let (vals, vecs) = eigen_hermitian(a)?;
        (vals.into_iter().map(|x| C64::new(x, 0.0)).collect::<Vec<_>>(), vecs)
    } else {
        eigen_general(a)?
    };

    for k in 0..n {
        let mut col = vectors.column_mut(k);
        let norm = col.norm();
        if norm > 0.0 {
            col.unscale_mut(norm);
        }
        let peak = col.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if let Some(z) = col.iter().find(|z| z.norm() >= peak * (1.0 - 1e-9)).copied() {
            if z.norm() > 0.0 {
                let phase = z.conj() / z.norm();
                for x in col.iter_mut() {
                    *x *= phase;
                }
            }
        }
    }

    let order = canonical_order(&values);
    let lambda = CVector::from_iterator(n, order.iter().map(|&k| values[k]));
    let igft = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);

    let condition = condition_number(&igft)?;
    let limit = 1.0 / (n as f64 * f64::EPSILON * 1e3);
    if !(condition < limit) {
        return Err(GspError::NotDiagonalizable { condition });
    }
    let gft = if hermitian { igft.adjoint() } else { inverse(&igft)? };
    SpectralBasis::new(gft, igft, lambda, NUMERIC_ORDERING_TAG)
}

/// Indices sorting eigenvalues by descending real part; real parts within
/// `1e-9 * max(1, max|λ|)` of a cluster's leader are ordered by descending imaginary part.
fn canonical_order(values: &[C64]) -> Vec<usize> {
    let scale = values.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    let tol = 1e-9 * scale;
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].re.total_cmp(&values[a].re).then(a.cmp(&b)));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let lead = values[idx[start]].re;
        let mut end = start + 1;
        while end < idx.len() && (lead - values[idx[end]].re).abs() <= tol {
            end += 1;
        }
        let mut group = idx[start..end].to_vec();
        group.sort_by(|&a, &b| values[b].im.total_cmp(&values[a].im).then(a.cmp(&b)));
        out.extend(group);
        start = end;
    }
    out
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(GspError::LengthMismatch { expected, found });
    }
    Ok(())
}

/// `ŝ = GFT s`.
pub fn gft(basis: &SpectralBasis, s: &GraphSignal) -> Result<Spectrum> {
    check_len(basis.n(), s.len())?;
    Ok(Spectrum::new(basis.gft() * s.values()))
}

/// `s = GFT⁻¹ ŝ`.
pub fn igft(basis: &SpectralBasis, s_hat: &Spectrum) -> Result<GraphSignal> {
    check_len(basis.n(), s_hat.len())?;
    Ok(GraphSignal::new(basis.igft() * s_hat.values()))
}

/// `δ₀ = GFT⁻¹ (1/√N) 1`, the signal whose spectrum is flat.
pub fn flat_impulse(basis: &SpectralBasis) -> GraphSignal {
    let n = basis.n();
    let flat = CVector::from_element(n, C64::new(1.0 / (n as f64).sqrt(), 0.0));
    GraphSignal::new(basis.igft() * flat)
}

pub fn spectral_shift(basis: &SpectralBasis) -> CMatrix {
    basis.spectral_shift().clone()
}

/// Comparison of `A` against `M` for one graph.
#[derive(Debug, Clone, Copy)]
pub struct ShiftComparison {
    pub coincide: bool,
    pub max_difference: f64,
    pub gft_symmetric: bool,
    pub eigenvalues_nonzero: bool,
}

pub fn shifts_coincide(g: &Graph) -> Result<ShiftComparison> {
    let basis = spectral_basis(g)?;
    let a = g.adjacency();
    let m = basis.spectral_shift();
    let scale = 1.0 + max_abs(a);
    let max_difference = max_abs_diff(a, m);
    let gft = basis.gft();
    let gft_symmetric = max_abs_diff(gft, &gft.transpose()) <= 1e-9 * (1.0 + max_abs(gft));
    let lscale = basis.lambda().iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let eigenvalues_nonzero = basis.lambda().iter().all(|z| z.norm() > 1e-12 * lscale.max(1.0));
    Ok(ShiftComparison {
        coincide: max_difference <= 1e-9 * scale,
        max_difference,
        gft_symmetric,
        eigenvalues_nonzero,
    })
}

/// The spectral graph: adjacency `M`, basis `GFT_sp = GFT⁻¹` with eigenvalues `λ*`.
pub fn spectral_graph(basis: &SpectralBasis) -> Result<Graph> {
    let lambda = basis.lambda().map(|z| z.conj());
    let sp = SpectralBasis::new(
        basis.igft().clone(),
        basis.gft().clone(),
        lambda,
        format!("spectral({})", basis.ordering_tag()),
    )?;
    Graph::with_analytic_basis(basis.spectral_shift().clone(), sp, Some("spectral".into()), None)
}
