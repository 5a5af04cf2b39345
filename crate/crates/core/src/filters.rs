//! Polynomial shift-invariant filters in the vertex shift `A` and the spectral shift `M`.
//!
//! Responses follow the absorbed-normalization convention: the frequency response of
//! `P(A)` is `P(λ_k)` and the vertex response of `P(M)` is `P(λ_k*)`, with no `1/√N`.
//! Only [`flat_spectral_impulse`] carries an explicit `1/√N`.

use crate::error::{GspError, Result};
use crate::linalg::{
    horner_matrix, horner_scalar, max_abs, max_abs_vec, sandwich, solve_vandermonde, CMatrix, CVector, C64, ZERO,
};
use crate::spectral::{gft, GraphSignal, SpectralBasis, Spectrum};

/// Which shift a polynomial filter is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDomain {
    /// Polynomials in the vertex shift `A`.
    Vertex,
    /// Polynomials in the spectral shift `M`.
    Spectral,
}

impl ShiftDomain {
    pub fn symbol(self) -> &'static str {
        match self {
            ShiftDomain::Vertex => "A",
            ShiftDomain::Spectral => "M",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(ShiftDomain::Vertex),
            "M" => Ok(ShiftDomain::Spectral),
            other => Err(GspError::Format(format!("unknown filter domain {other:?}, expected \"A\" or \"M\""))),
        }
    }
}

/// `P(S) = Σ_k p_k S^k` with `S` the shift named by `domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFilter {
    pub coeffs: CVector,
    pub domain: ShiftDomain,
}

impl PolyFilter {
    pub fn new(coeffs: CVector, domain: ShiftDomain) -> Self {
        Self { coeffs, domain }
    }

    pub fn from_real(coeffs: &[f64], domain: ShiftDomain) -> Self {
        Self::new(crate::linalg::real_vector(coeffs), domain)
    }

    /// `p_0 = 1`, all other coefficients zero.
    pub fn identity(n: usize, domain: ShiftDomain) -> Self {
        let mut c = CVector::zeros(n);
        if n > 0 {
            c[0] = C64::new(1.0, 0.0);
        }
        Self::new(c, domain)
    }

    /// Dense `P(shift)`; intended for oracles and reports.
    pub fn matrix(&self, shift: &CMatrix) -> CMatrix {
        crate::linalg::polynomial_matrix(shift, self.coeffs.as_slice())
    }
}

fn expect_domain(f: &PolyFilter, expected: ShiftDomain) -> Result<()> {
    if f.domain != expected {
        return Err(GspError::DomainMismatch { expected: expected.symbol(), found: f.domain.symbol() });
    }
    Ok(())
}

fn expect_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(GspError::LengthMismatch { expected, found });
    }
    Ok(())
}

/// `t = P(A) s` by Horner's rule.
pub fn apply_vertex_filter(basis: &SpectralBasis, f: &PolyFilter, s: &GraphSignal) -> Result<GraphSignal> {
    expect_domain(f, ShiftDomain::Vertex)?;
    expect_len(basis.n(), f.coeffs.len())?;
    expect_len(basis.n(), s.len())?;
    Ok(GraphSignal::new(horner_matrix(basis.shift(), f.coeffs.as_slice(), s.values())))
}

/// `t̂ = P(M) ŝ` by Horner's rule.
pub fn apply_spectral_filter(basis: &SpectralBasis, f: &PolyFilter, s_hat: &Spectrum) -> Result<Spectrum> {
    expect_domain(f, ShiftDomain::Spectral)?;
    expect_len(basis.n(), f.coeffs.len())?;
    expect_len(basis.n(), s_hat.len())?;
    Ok(Spectrum::new(horner_matrix(basis.spectral_shift(), f.coeffs.as_slice(), s_hat.values())))
}

/// Entry `k` is `P(λ_k)`.
pub fn frequency_response(basis: &SpectralBasis, f: &PolyFilter) -> Result<CVector> {
    expect_domain(f, ShiftDomain::Vertex)?;
    expect_len(basis.n(), f.coeffs.len())?;
    Ok(basis.lambda().map(|z| horner_scalar(f.coeffs.as_slice(), z)))
}

/// Entry `k` is `P(λ_k*)`.
pub fn vertex_response(basis: &SpectralBasis, f: &PolyFilter) -> Result<CVector> {
    expect_domain(f, ShiftDomain::Spectral)?;
    expect_len(basis.n(), f.coeffs.len())?;
    Ok(basis.lambda().map(|z| horner_scalar(f.coeffs.as_slice(), z.conj())))
}

/// A filter recovered from a response, with the conditioning of the Vandermonde solve.
#[derive(Debug, Clone)]
pub struct FilterSynthesis {
    pub filter: PolyFilter,
    pub condition: f64,
    /// `‖V p − response‖_∞`.
    pub residual: f64,
    /// Set when the condition number exceeds 1e12 or the residual exceeds `1e-6 ‖response‖_∞`.
    pub warning: Option<String>,
}

fn synthesize(nodes: &[C64], response: &CVector, domain: ShiftDomain) -> Result<FilterSynthesis> {
    let sol = solve_vandermonde(nodes, response)?;
    let scale = max_abs_vec(response).max(f64::MIN_POSITIVE);
    let warning = if sol.condition > 1e12 || sol.residual > 1e-6 * scale {
        Some(format!(
            "ill-conditioned Vandermonde system: condition {:e}, residual {:e}",
            sol.condition, sol.residual
        ))
    } else {
        None
    };
    Ok(FilterSynthesis {
        filter: PolyFilter::new(sol.coeffs, domain),
        condition: sol.condition,
        residual: sol.residual,
        warning,
    })
}

/// Errors that leave a filter matrix well defined but its coefficients unavailable.
pub(crate) fn coefficients_unavailable(e: &GspError) -> bool {
    matches!(e, GspError::RepeatedEigenvalues { .. } | GspError::Singular(_))
}

fn require_distinct(basis: &SpectralBasis) -> Result<()> {
    let d = basis.distinctness();
    if !d.distinct {
        return Err(GspError::RepeatedEigenvalues { min_gap: d.min_gap, tol: d.tol });
    }
    Ok(())
}

/// Solves `V_λ p = ĥ` for the vertex filter with frequency response `ĥ`.
pub fn lsi_from_frequency_response(basis: &SpectralBasis, h_hat: &CVector) -> Result<FilterSynthesis> {
    expect_len(basis.n(), h_hat.len())?;
    require_distinct(basis)?;
    synthesize(basis.lambda().as_slice(), h_hat, ShiftDomain::Vertex)
}

/// Solves `V*_λ p = s` for the spectral filter with vertex response `s`.
pub fn lsi_from_vertex_response(basis: &SpectralBasis, s: &CVector) -> Result<FilterSynthesis> {
    expect_len(basis.n(), s.len())?;
    require_distinct(basis)?;
    let nodes: Vec<C64> = basis.lambda().iter().map(|z| z.conj()).collect();
    synthesize(&nodes, s, ShiftDomain::Spectral)
}

/// `GFT diag(s) GFT⁻¹`; defined for repeated eigenvalues too.
pub fn filter_matrix_from_vertex_response(basis: &SpectralBasis, s: &CVector) -> Result<CMatrix> {
    expect_len(basis.n(), s.len())?;
    Ok(sandwich(basis.gft(), s.as_slice(), basis.igft()))
}

/// `GFT⁻¹ diag(ĥ) GFT`; defined for repeated eigenvalues too.
pub fn filter_matrix_from_frequency_response(basis: &SpectralBasis, h_hat: &CVector) -> Result<CMatrix> {
    expect_len(basis.n(), h_hat.len())?;
    Ok(sandwich(basis.igft(), h_hat.as_slice(), basis.gft()))
}

/// `û = GFT (GFT⁻¹ŝ ⊙ GFT⁻¹t̂)`: the spectrum of the pointwise product of the two signals.
pub fn spectral_convolution(basis: &SpectralBasis, s_hat: &Spectrum, t_hat: &Spectrum) -> Result<Spectrum> {
    expect_len(basis.n(), s_hat.len())?;
    expect_len(basis.n(), t_hat.len())?;
    let s = basis.igft() * s_hat.values();
    let t = basis.igft() * t_hat.values();
    Ok(Spectrum::new(basis.gft() * s.component_mul(&t)))
}

/// Spectrum of the vertex-flat signal `(1/√N) 1`. Convolving with it scales a spectrum by `1/√N`.
pub fn flat_spectral_impulse(basis: &SpectralBasis) -> Spectrum {
    let n = basis.n();
    let flat = GraphSignal::new(CVector::from_element(n, C64::new(1.0 / (n as f64).sqrt(), 0.0)));
    gft(basis, &flat).expect("length matches by construction")
}

/// Verdict on whether a matrix is a polynomial in `M`.
#[derive(Debug, Clone)]
pub struct LsiVerdict {
    pub is_lsi: bool,
    /// Largest off-diagonal magnitude of `GFT⁻¹ Q GFT`.
    pub off_diagonal: f64,
    /// Diagonal of `GFT⁻¹ Q GFT`, i.e. the vertex response when `Q` is LSI.
    pub response: CVector,
    pub filter: Option<PolyFilter>,
    pub note: Option<String>,
}

/// `Q` is LSI in `M` iff `GFT⁻¹ Q GFT` is diagonal within `1e-8 ‖Q‖_max` and its diagonal
/// agrees on every cluster of repeated eigenvalues. Coefficients interpolate the response on the
/// distinct eigenvalues and are zero-padded to length `n`.
pub fn is_lsi_in_m(basis: &SpectralBasis, q: &CMatrix) -> Result<LsiVerdict> {
    let n = basis.n();
    if q.shape() != (n, n) {
        return Err(GspError::NotSquare(q.nrows(), q.ncols()));
    }
    let d = basis.igft() * q * basis.gft();
    let scale = max_abs(q);
    let tol = 1e-8 * scale;
    let mut off_diagonal = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off_diagonal = off_diagonal.max(d[(i, j)].norm());
            }
        }
    }
    let response = CVector::from_iterator(n, (0..n).map(|i| d[(i, i)]));
    if off_diagonal > tol {
        return Ok(LsiVerdict { is_lsi: false, off_diagonal, response, filter: None, note: None });
    }

    let clusters = eigenvalue_clusters(basis);
    for c in &clusters {
        let r0 = response[c[0]];
        if c.iter().any(|&i| (response[i] - r0).norm() > tol) {
            return Ok(LsiVerdict {
                is_lsi: false,
                off_diagonal,
                response,
                filter: None,
                note: Some("diagonal in the spectral basis but the response differs within a repeated eigenvalue".into()),
            });
        }
    }

    let nodes: Vec<C64> = clusters.iter().map(|c| basis.lambda()[c[0]].conj()).collect();
    let values = CVector::from_iterator(clusters.len(), clusters.iter().map(|c| response[c[0]]));
    let (filter, note) = match solve_vandermonde(&nodes, &values) {
        Ok(sol) => {
            let mut coeffs = CVector::from_element(n, ZERO);
            coeffs.rows_mut(0, nodes.len()).copy_from(&sol.coeffs);
            let note = if clusters.len() < n {
                Some(format!("minimal-degree interpolation on {} distinct eigenvalues", nodes.len()))
            } else if sol.condition > 1e12 {
                Some(format!("ill-conditioned Vandermonde system: condition {:e}", sol.condition))
            } else {
                None
            };
            (Some(PolyFilter::new(coeffs, ShiftDomain::Spectral)), note)
        }
        Err(e) if coefficients_unavailable(&e) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(LsiVerdict { is_lsi: true, off_diagonal, response, filter, note })
}

/// Groups eigenvalue indices whose pairwise distance is within the distinctness tolerance.
pub fn eigenvalue_clusters(basis: &SpectralBasis) -> Vec<Vec<usize>> {
    let tol = basis.distinctness().tol;
    let lambda = basis.lambda();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    'outer: for i in 0..lambda.len() {
        for c in clusters.iter_mut() {
            if c.iter().any(|&j| (lambda[i] - lambda[j]).norm() <= tol) {
                c.push(i);
                continue 'outer;
            }
        }
        clusters.push(vec![i]);
    }
    clusters
}
