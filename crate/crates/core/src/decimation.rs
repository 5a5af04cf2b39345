//! Decimation: dropping the zeros of a subsampled signal and the induced decimated graph.
//!
//! The decimated GFT is `(GFT⁻¹_KK)⁻¹`, so that `GFT_d s_d` is exactly the band spectrum `ŝ_K`
//! of the signal the samples came from. The decimated eigenvalues are `λ` read at the sampled
//! vertex positions, and `A_d = GFT_d⁻¹ Λ_d GFT_d`.

use serde_json::json;

use crate::error::{GspError, Result};
use crate::graphs::Graph;
use crate::linalg::{inverse, max_abs_vec, CMatrix, CVector};
use crate::reconstruction::can_perfectly_reconstruct;
use crate::sampling::SamplingScheme;
use crate::spectral::{Distinctness, GraphSignal, SpectralBasis, Spectrum};

pub const DECIMATED_ORDERING_TAG: &str = "decimated:lambda-at-sampled-vertices";

/// Keeps the entries at `S` (ascending) after checking that every other entry vanishes.
pub fn decimate(s_delta: &GraphSignal, scheme: &SamplingScheme) -> Result<GraphSignal> {
    if s_delta.len() != scheme.n() {
        return Err(GspError::LengthMismatch { expected: scheme.n(), found: s_delta.len() });
    }
    let tol = 1e-10 * max_abs_vec(s_delta.values()).max(1.0);
    for i in 0..s_delta.len() {
        if !scheme.contains(i) && s_delta[i].norm() > tol {
            return Err(GspError::NotSubsampled { index: i, value: s_delta[i].norm() });
        }
    }
    Ok(GraphSignal::new(CVector::from_iterator(scheme.k(), scheme.set().iter().map(|&i| s_delta[i]))))
}

/// Spectral basis and graph on the `K` sampled vertices.
#[derive(Debug, Clone)]
pub struct DecimatedSystem {
    pub k: usize,
    /// Basis with `gft = (GFT⁻¹_KK)⁻¹`, `igft = GFT⁻¹_KK` and the sampled eigenvalues.
    pub basis: SpectralBasis,
    /// The raw `GFT_KK` block (kept frequencies by sampled vertices).
    pub gft_kk: CMatrix,
    pub graph: Graph,
    /// Condition number of `GFT⁻¹_KK`.
    pub condition: f64,
    /// Set when two sampled eigenvalues coincide.
    pub repeated_eigenvalues: bool,
    pub scheme: SamplingScheme,
}

impl DecimatedSystem {
    pub fn gft_d(&self) -> &CMatrix {
        self.basis.gft()
    }

    pub fn lambda_d(&self) -> &CVector {
        self.basis.lambda()
    }

    pub fn adjacency(&self) -> &CMatrix {
        self.graph.adjacency()
    }
}

pub fn decimated_system(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<DecimatedSystem> {
    let report = can_perfectly_reconstruct(basis, scheme)?;
    if !report.reconstructible {
        return Err(GspError::NoPerfectReconstruction(format!(
            "GFT⁻¹_KK has rank {} < {} (condition {:e})",
            report.rank,
            scheme.k(),
            report.condition
        )));
    }
    let igft_d = scheme.igft_kk(basis);
    let gft_d = inverse(&igft_d)?;
    let lambda_d = CVector::from_iterator(scheme.k(), scheme.set().iter().map(|&v| basis.lambda()[v]));
    let repeated_eigenvalues = !Distinctness::of(lambda_d.as_slice()).distinct;
    let basis_d = SpectralBasis::from_parts(gft_d, igft_d, lambda_d, DECIMATED_ORDERING_TAG.to_string());
    let a_d = basis_d.shift().clone();
    let params = json!({ "k": scheme.k(), "S": scheme.set(), "band": scheme.band() });
    let graph = Graph::with_analytic_basis(a_d, basis_d.clone(), Some("decimated".into()), Some(params))?;
    Ok(DecimatedSystem {
        k: scheme.k(),
        basis: basis_d,
        gft_kk: scheme.gft_kk(basis),
        graph,
        condition: report.condition,
        repeated_eigenvalues,
        scheme: scheme.clone(),
    })
}

/// `ŝ_d = GFT_d s_d`.
pub fn decimated_spectrum(system: &DecimatedSystem, s_d: &GraphSignal) -> Result<Spectrum> {
    if s_d.len() != system.k {
        return Err(GspError::LengthMismatch { expected: system.k, found: s_d.len() });
    }
    Ok(Spectrum::new(system.gft_d() * s_d.values()))
}
