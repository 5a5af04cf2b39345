//! Upsampling, perfect-reconstruction tests, spectral reconstruction and reconstruction by filtering.

use crate::error::{GspError, Result};
use crate::filters::{
    eigenvalue_clusters, filter_matrix_from_frequency_response, is_lsi_in_m, lsi_from_frequency_response,
    FilterSynthesis, LsiVerdict, PolyFilter,
};
use crate::linalg::{
    dft, frobenius, inverse, max_abs, max_abs_diff, max_abs_vec, numerical_rank, pseudoinverse, sandwich,
    singular_values, submatrix, CMatrix, CVector, C64, ONE, ZERO,
};
use crate::sampling::{subsampling_spectral_filter, validate_band, SamplingScheme};
use crate::spectral::{GraphSignal, SpectralBasis};

/// Reinserts zeros outside `S`.
pub fn upsample(s_d: &GraphSignal, scheme: &SamplingScheme) -> Result<GraphSignal> {
    if s_d.len() != scheme.k() {
        return Err(GspError::LengthMismatch { expected: scheme.k(), found: s_d.len() });
    }
    let mut out = CVector::zeros(scheme.n());
    for (j, &v) in scheme.set().iter().enumerate() {
        out[v] = s_d[j];
    }
    Ok(GraphSignal::new(out))
}

/// Rank test on `GFT⁻¹_KK`.
#[derive(Debug, Clone)]
pub struct Reconstructibility {
    pub reconstructible: bool,
    pub rank: usize,
    /// `σ_max / σ_min` of `GFT⁻¹_KK`.
    pub condition: f64,
    pub singular_values: Vec<f64>,
}

/// Perfect reconstruction is possible iff `GFT⁻¹_KK` has rank `K` under the threshold `K ε σ_max 1e3`.
pub fn can_perfectly_reconstruct(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<Reconstructibility> {
    if basis.n() != scheme.n() {
        return Err(GspError::LengthMismatch { expected: scheme.n(), found: basis.n() });
    }
    let sv = singular_values(&scheme.igft_kk(basis))?;
    let rank = numerical_rank(&sv);
    let condition = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    Ok(Reconstructibility { reconstructible: rank == scheme.k(), rank, condition, singular_values: sv })
}

fn require_reconstructible(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<Reconstructibility> {
    let r = can_perfectly_reconstruct(basis, scheme)?;
    if !r.reconstructible {
        return Err(GspError::NoPerfectReconstruction(format!(
            "GFT⁻¹_KK for S = {:?}, band = {:?} has rank {} < {} (condition {:e})",
            scheme.set(),
            scheme.band(),
            r.rank,
            scheme.k(),
            r.condition
        )));
    }
    Ok(r)
}

/// `[I_K; GFT⁻¹_{(N−K)K} (GFT⁻¹_KK)⁻¹]` with rows in canonical vertex order.
pub fn interpolation_matrix(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<CMatrix> {
    require_reconstructible(basis, scheme)?;
    let (n, k) = (scheme.n(), scheme.k());
    let inv = inverse(&scheme.igft_kk(basis))?;
    let rest: Vec<usize> = scheme.vertex_perm()[k..].to_vec();
    let lower = submatrix(basis.igft(), &rest, scheme.band()) * inv;
    let mut out = CMatrix::zeros(n, k);
    for i in 0..k {
        out[(i, i)] = ONE;
    }
    out.view_mut((k, 0), (n - k, k)).copy_from(&lower);
    Ok(out)
}

/// `ŝ_K = (GFT⁻¹_KK)⁻¹ s_d`, then `s = GFT⁻¹ [ŝ_K; 0]`.
pub fn reconstruct_spectral(basis: &SpectralBasis, scheme: &SamplingScheme, s_d: &GraphSignal) -> Result<GraphSignal> {
    require_reconstructible(basis, scheme)?;
    if s_d.len() != scheme.k() {
        return Err(GspError::LengthMismatch { expected: scheme.k(), found: s_d.len() });
    }
    let s_hat_k = scheme
        .igft_kk(basis)
        .lu()
        .solve(s_d.values())
        .ok_or_else(|| GspError::NoPerfectReconstruction("GFT⁻¹_KK is singular".into()))?;
    let cols = submatrix(basis.igft(), &(0..scheme.n()).collect::<Vec<_>>(), scheme.band());
    Ok(GraphSignal::new(cols * s_hat_k))
}

/// How the spectral reconstruction filter `Q` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QStrategy {
    /// Row operations reducing `P_δ(M)` to reduced row echelon form.
    GaussJordan,
    /// `Q = [[P_KK⁻¹, 0], [0, 0]]` in canonical order.
    BlockInverse,
    /// Pseudoinverse of the first `K` canonical columns of `P_δ(M)` in the top rows.
    Pseudoinverse,
    /// Supplied by the caller.
    User,
}

impl QStrategy {
    pub fn name(self) -> &'static str {
        match self {
            QStrategy::GaussJordan => "gauss_jordan",
            QStrategy::BlockInverse => "block_inverse",
            QStrategy::Pseudoinverse => "pseudoinverse",
            QStrategy::User => "user",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "gauss_jordan" => Ok(QStrategy::GaussJordan),
            "block_inverse" => Ok(QStrategy::BlockInverse),
            "pseudoinverse" => Ok(QStrategy::Pseudoinverse),
            "user" => Ok(QStrategy::User),
            other => Err(GspError::Format(format!("unknown strategy {other:?}"))),
        }
    }
}

/// An LSI matrix agreeing with `Q` on its band rows.
#[derive(Debug, Clone)]
pub struct LsiCompletion {
    pub q: CMatrix,
    /// Vertex response of the completed `Q`.
    pub response: CVector,
    pub residual: f64,
    pub verdict: LsiVerdict,
}

/// `Q`, the vertex-domain `F = GFT⁻¹ Q GFT` and the ideal lowpass, all in original indexing.
#[derive(Debug, Clone)]
pub struct ReconstructionPlan {
    pub strategy: QStrategy,
    pub q: CMatrix,
    pub f: CMatrix,
    pub lowpass_vertex: CMatrix,
    /// Whether the band rows of `Q` extend to a polynomial in `M`. Rows outside the band are
    /// discarded by the lowpass, so this is the verdict that matters for the reconstruction.
    pub is_q_lsi: bool,
    /// Verdict on `Q` exactly as designed, free rows included.
    pub raw_lsi: LsiVerdict,
    pub completion: Option<LsiCompletion>,
    /// `‖(Q P_δ(M))_KK − I_K‖_max` in canonical order.
    pub contract_error: f64,
    pub band_indicator: CVector,
}

impl ReconstructionPlan {
    /// Coefficients in `M` of the LSI completion, or of `Q` itself.
    pub fn coeffs(&self) -> Option<&PolyFilter> {
        self.completion.as_ref().and_then(|c| c.verdict.filter.as_ref()).or(self.raw_lsi.filter.as_ref())
    }
}

fn infeasible(strategy: QStrategy, reason: impl Into<String>) -> GspError {
    GspError::StrategyInfeasible { strategy: strategy.name(), reason: reason.into() }
}

/// Row operations `E` with `E P = [[I_K, *], [0, *]]`, pivoting rows by magnitude (lowest index on ties).
fn gauss_jordan_multiplier(p: &CMatrix, k: usize) -> Result<CMatrix> {
    let n = p.nrows();
    let mut a = p.clone();
    let mut e = CMatrix::identity(n, n);
    let tol = 1e-10 * max_abs(p).max(f64::MIN_POSITIVE);
    for col in 0..k {
        let peak = (col..n).fold(0.0f64, |acc, i| acc.max(a[(i, col)].norm()));
        if peak <= tol {
            return Err(infeasible(
                QStrategy::GaussJordan,
                format!("no pivot in column {col} of P_δ(M); the band block is rank deficient"),
            ));
        }
        let r = (col..n).find(|&i| a[(i, col)].norm() >= peak * (1.0 - 1e-9)).expect("peak row exists");
        a.swap_rows(col, r);
        e.swap_rows(col, r);
        let inv = ONE / a[(col, col)];
        for z in a.row_mut(col).iter_mut() {
            *z *= inv;
        }
        for z in e.row_mut(col).iter_mut() {
            *z *= inv;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let (av, ev) = (a[(col, j)], e[(col, j)]);
                a[(i, j)] -= f * av;
                e[(i, j)] -= f * ev;
            }
        }
    }
    Ok(e)
}

/// Designs `Q` with `(Q P_δ(M))_KK = I_K` in canonical order.
pub fn design_q(basis: &SpectralBasis, scheme: &SamplingScheme, strategy: QStrategy) -> Result<ReconstructionPlan> {
    require_reconstructible(basis, scheme)?;
    let (n, k) = (scheme.n(), scheme.k());
    let p_c = scheme.to_canonical_freq(&subsampling_spectral_filter(basis, scheme)?.matrix);
    let q_c = match strategy {
        QStrategy::GaussJordan => gauss_jordan_multiplier(&p_c, k)?,
        QStrategy::BlockInverse => {
            let p_kk = p_c.view((0, 0), (k, k)).into_owned();
            let cond = crate::linalg::condition_number(&p_kk)?;
            if !(cond < 1e12) {
                return Err(infeasible(strategy, format!("P_δ(M)_KK is singular (condition {cond:e})")));
            }
            let inv = inverse(&p_kk).map_err(|_| infeasible(strategy, "P_δ(M)_KK is singular"))?;
            let mut q = CMatrix::zeros(n, n);
            q.view_mut((0, 0), (k, k)).copy_from(&inv);
            q
        }
        QStrategy::Pseudoinverse => {
            let p_k = p_c.view((0, 0), (n, k)).into_owned();
            let pinv = pseudoinverse(&p_k)?;
            let mut q = CMatrix::zeros(n, n);
            q.view_mut((0, 0), (k, n)).copy_from(&pinv);
            q
        }
        QStrategy::User => {
            return Err(infeasible(strategy, "a user Q must be supplied through plan_from_q"));
        }
    };
    finish_plan(basis, scheme, strategy, scheme.from_canonical_freq(&q_c), &p_c)
}

/// Wraps a caller-supplied `Q` (original frequency indexing) after checking the leading-block contract.
pub fn plan_from_q(basis: &SpectralBasis, scheme: &SamplingScheme, q: CMatrix) -> Result<ReconstructionPlan> {
    require_reconstructible(basis, scheme)?;
    if q.shape() != (scheme.n(), scheme.n()) {
        return Err(GspError::NotSquare(q.nrows(), q.ncols()));
    }
    let p_c = scheme.to_canonical_freq(&subsampling_spectral_filter(basis, scheme)?.matrix);
    finish_plan(basis, scheme, QStrategy::User, q, &p_c)
}

fn finish_plan(
    basis: &SpectralBasis,
    scheme: &SamplingScheme,
    strategy: QStrategy,
    q: CMatrix,
    p_c: &CMatrix,
) -> Result<ReconstructionPlan> {
    let k = scheme.k();
    let q_c = scheme.to_canonical_freq(&q);
    let lead = (q_c * p_c).view((0, 0), (k, k)).into_owned();
    let contract_error = max_abs_diff(&lead, &CMatrix::identity(k, k));
    if !(contract_error <= 1e-8) {
        return Err(infeasible(
            strategy,
            format!("leading block of Q P_δ(M) differs from the identity by {contract_error:e}"),
        ));
    }
    let f = basis.igft() * &q * basis.gft();
    let band_indicator = scheme.band_indicator();
    let lowpass_vertex = filter_matrix_from_frequency_response(basis, &band_indicator)?;
    let raw_lsi = is_lsi_in_m(basis, &q)?;
    let completion = lsi_completion(basis, scheme, &q)?;
    Ok(ReconstructionPlan {
        strategy,
        q,
        f,
        lowpass_vertex,
        is_q_lsi: completion.is_some(),
        raw_lsi,
        completion,
        contract_error,
        band_indicator,
    })
}

/// Looks for a polynomial in `M` whose band rows equal those of `q`.
///
/// The unknown is one vertex-response value per distinct eigenvalue, fitted by least squares
/// against `(GFT diag(v) GFT⁻¹)[band, :] = q[band, :]`; a residual within `1e-8 (1 + ‖q‖_max)`
/// means the completion exists.
pub fn lsi_completion(basis: &SpectralBasis, scheme: &SamplingScheme, q: &CMatrix) -> Result<Option<LsiCompletion>> {
    let n = basis.n();
    let clusters = eigenvalue_clusters(basis);
    let band = scheme.band();
    let rows = band.len() * n;
    let mut system = CMatrix::zeros(rows, clusters.len());
    let mut target = CVector::zeros(rows);
    for (bi, &i) in band.iter().enumerate() {
        for j in 0..n {
            let r = bi * n + j;
            target[r] = q[(i, j)];
            for (c, members) in clusters.iter().enumerate() {
                system[(r, c)] = members.iter().map(|&m| basis.gft()[(i, m)] * basis.igft()[(m, j)]).sum::<C64>();
            }
        }
    }
    let w = pseudoinverse(&system)? * &target;
    let residual = max_abs_vec(&(&system * &w - &target));
    if residual > 1e-8 * (1.0 + max_abs(q)) {
        return Ok(None);
    }
    let mut response = CVector::zeros(n);
    for (c, members) in clusters.iter().enumerate() {
        for &m in members {
            response[m] = w[c];
        }
    }
    let completed = sandwich(basis.gft(), response.as_slice(), basis.igft());
    let verdict = is_lsi_in_m(basis, &completed)?;
    Ok(Some(LsiCompletion { q: completed, response, residual, verdict }))
}

/// Runs `P(A) F s_δ` and `GFT⁻¹([1_K; 0] ⊙ Q GFT s_δ)`, checks they agree within
/// `1e-7 (1 + ‖result‖_∞)`, and returns the vertex-path result.
pub fn reconstruct_by_filtering(
    basis: &SpectralBasis,
    plan: &ReconstructionPlan,
    s_delta: &GraphSignal,
) -> Result<GraphSignal> {
    if s_delta.len() != basis.n() {
        return Err(GspError::LengthMismatch { expected: basis.n(), found: s_delta.len() });
    }
    let vertex = &plan.lowpass_vertex * (&plan.f * s_delta.values());
    let spectral_hat = (&plan.q * (basis.gft() * s_delta.values())).component_mul(&plan.band_indicator);
    let spectral = basis.igft() * spectral_hat;
    let max_diff = crate::linalg::max_abs_diff_vec(&vertex, &spectral);
    if max_diff > 1e-7 * (1.0 + max_abs_vec(&vertex)) {
        return Err(GspError::PathDisagreement { max_diff });
    }
    Ok(GraphSignal::new(vertex))
}

/// `P(A) = GFT⁻¹ diag([1_K; 0]) GFT`, with coefficients when the eigenvalues are distinct.
#[derive(Debug, Clone)]
pub struct IdealLowpass {
    pub matrix: CMatrix,
    pub synthesis: Option<FilterSynthesis>,
    pub reason: Option<String>,
}

pub fn ideal_lowpass(basis: &SpectralBasis, band: &[usize]) -> Result<IdealLowpass> {
    let band = validate_band(band, basis.n())?;
    let mut h = CVector::zeros(basis.n());
    for &b in &band {
        h[b] = ONE;
    }
    let matrix = filter_matrix_from_frequency_response(basis, &h)?;
    let (synthesis, reason) = match lsi_from_frequency_response(basis, &h) {
        Ok(s) => (Some(s), None),
        Err(e) if crate::filters::coefficients_unavailable(&e) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(IdealLowpass { matrix, synthesis, reason })
}

/// Whether periodic frequency-domain sampling acts diagonally in the vertex domain.
#[derive(Debug, Clone)]
pub struct FrequencySamplingDiagnostic {
    /// `K` stacked copies of `[I_{N/K} … I_{N/K}]`.
    pub q: CMatrix,
    /// Eigenvalues of `Q` in DFT order: `DFTᴴ Q DFT`'s diagonal.
    pub q_lambda: CVector,
    /// `GFT⁻¹ Q GFT`.
    pub q_tilde: CMatrix,
    /// Frobenius norm of the off-diagonal part of `q_tilde`.
    pub off_diagonal_mass: f64,
    pub frobenius: f64,
    pub is_diagonal: bool,
}

pub fn frequency_domain_sampling_diagnostic(basis: &SpectralBasis, band: &[usize]) -> Result<FrequencySamplingDiagnostic> {
    let n = basis.n();
    let k = validate_band(band, n)?.len();
    if n % k != 0 {
        return Err(GspError::NotDivisible { n, k });
    }
    let period = n / k;
    let q = CMatrix::from_fn(n, n, |i, j| if i % period == j % period { ONE } else { ZERO });
    let f = dft(n);
    let lam = f.adjoint() * &q * &f;
    let q_lambda = CVector::from_iterator(n, (0..n).map(|i| lam[(i, i)]));
    let q_tilde = basis.igft() * sandwich(&f, q_lambda.as_slice(), &f.adjoint()) * basis.gft();
    let mut off = q_tilde.clone();
    for i in 0..n {
        off[(i, i)] = ZERO;
    }
    let off_diagonal_mass = frobenius(&off);
    let total = frobenius(&q_tilde);
    Ok(FrequencySamplingDiagnostic {
        q,
        q_lambda,
        q_tilde,
        off_diagonal_mass,
        frobenius: total,
        is_diagonal: off_diagonal_mass <= 1e-9 * total.max(1.0),
    })
}
