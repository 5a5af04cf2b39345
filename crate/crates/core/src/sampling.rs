//! Sampling sets, subsampling as spectral filtering, and spectral replication.
//!
//! Internally every block formula works in the canonical layout where the sampled vertices
//! come first (`δ = [1_K 0]`) and the kept frequencies come first (`ŝ = [ŝ_K; 0]`).
//! `vertex_perm[i]` is the original vertex at canonical position `i`; `freq_perm` likewise.

use crate::error::{GspError, Result};
use crate::filters::{is_lsi_in_m, lsi_from_vertex_response, FilterSynthesis, LsiVerdict, PolyFilter};
use crate::linalg::{c64, max_abs, max_abs_diff, sandwich, submatrix, CMatrix, CVector, C64, ONE, ZERO};
use crate::spectral::{GraphSignal, SpectralBasis, Spectrum};

/// Column choice among equally large pivots during sampling-set selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotTieBreak {
    #[default]
    LowestIndex,
    HighestIndex,
}

/// A sampling set `S` paired with the band it is meant to recover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingScheme {
    n: usize,
    set: Vec<usize>,
    band: Vec<usize>,
    vertex_perm: Vec<usize>,
    freq_perm: Vec<usize>,
}

fn sorted_unique(indices: &[usize], n: usize, what: &str) -> std::result::Result<Vec<usize>, String> {
    let mut v = indices.to_vec();
    v.sort_unstable();
    if let Some(&bad) = v.iter().find(|&&i| i >= n) {
        return Err(format!("{what} index {bad} is out of range for {n} vertices"));
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(format!("{what} contains duplicate indices"));
    }
    Ok(v)
}

/// `leading` followed by the remaining indices of `0..n` in ascending order.
fn leading_order(leading: &[usize], n: usize) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &i in leading {
        mark[i] = true;
    }
    leading.iter().copied().chain((0..n).filter(|&i| !mark[i])).collect()
}

/// Sorted, duplicate-free, non-empty band within `0..n`.
pub fn validate_band(band: &[usize], n: usize) -> Result<Vec<usize>> {
    if band.is_empty() {
        return Err(GspError::InvalidBand("band is empty".into()));
    }
    if band.len() > n {
        return Err(GspError::InvalidBand(format!("{} frequencies requested on {n} vertices", band.len())));
    }
    sorted_unique(band, n, "band").map_err(GspError::InvalidBand)
}

impl SamplingScheme {
    /// Structural validation only: `|S| = |band|`, indices in range, no duplicates.
    pub fn new(n: usize, set: &[usize], band: &[usize]) -> Result<Self> {
        let band = validate_band(band, n)?;
        let set = sorted_unique(set, n, "sampling set").map_err(GspError::InvalidSamplingSet)?;
        if set.len() != band.len() {
            return Err(GspError::InvalidSamplingSet(format!(
                "|S| = {} but the band keeps {} frequencies",
                set.len(),
                band.len()
            )));
        }
        let vertex_perm = leading_order(&set, n);
        let freq_perm = leading_order(&band, n);
        Ok(Self { n, set, band, vertex_perm, freq_perm })
    }

    /// A user-supplied sampling set, accepted only if `GFT⁻¹_KK` is invertible.
    pub fn from_set(basis: &SpectralBasis, set: &[usize], band: &[usize]) -> Result<Self> {
        let scheme = Self::new(basis.n(), set, band)?;
        let report = crate::reconstruction::can_perfectly_reconstruct(basis, &scheme)?;
        if !report.reconstructible {
            return Err(GspError::NoPerfectReconstruction(format!(
                "GFT⁻¹ restricted to S = {:?} and band {:?} has rank {} < {} (condition {:e})",
                scheme.set,
                scheme.band,
                report.rank,
                scheme.k(),
                report.condition
            )));
        }
        Ok(scheme)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.set.len()
    }

    /// Sorted sampling set.
    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// Sorted kept frequencies.
    pub fn band(&self) -> &[usize] {
        &self.band
    }

    pub fn vertex_perm(&self) -> &[usize] {
        &self.vertex_perm
    }

    pub fn freq_perm(&self) -> &[usize] {
        &self.freq_perm
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.set.binary_search(&vertex).is_ok()
    }

    /// The 0/1 indicator `δ`.
    pub fn delta(&self) -> Vec<u8> {
        (0..self.n).map(|i| u8::from(self.contains(i))).collect()
    }

    pub fn delta_signal(&self) -> GraphSignal {
        GraphSignal::new(CVector::from_iterator(self.n, (0..self.n).map(|i| if self.contains(i) { ONE } else { ZERO })))
    }

    /// `[1_K; 0]` placed on the band in original frequency order.
    pub fn band_indicator(&self) -> CVector {
        let mut v = CVector::zeros(self.n);
        for &b in &self.band {
            v[b] = ONE;
        }
        v
    }

    /// `GFT` with rows in canonical frequency order and columns in canonical vertex order.
    pub fn canonical_gft(&self, basis: &SpectralBasis) -> CMatrix {
        submatrix(basis.gft(), &self.freq_perm, &self.vertex_perm)
    }

    /// `GFT⁻¹` with rows in canonical vertex order and columns in canonical frequency order.
    pub fn canonical_igft(&self, basis: &SpectralBasis) -> CMatrix {
        submatrix(basis.igft(), &self.vertex_perm, &self.freq_perm)
    }

    /// `GFT_KK`: kept frequencies by sampled vertices.
    pub fn gft_kk(&self, basis: &SpectralBasis) -> CMatrix {
        submatrix(basis.gft(), &self.band, &self.set)
    }

    /// `GFT⁻¹_KK`: sampled vertices by kept frequencies.
    pub fn igft_kk(&self, basis: &SpectralBasis) -> CMatrix {
        submatrix(basis.igft(), &self.set, &self.band)
    }

    /// Reorders an original-frequency-indexed matrix into canonical order.
    pub fn to_canonical_freq(&self, m: &CMatrix) -> CMatrix {
        submatrix(m, &self.freq_perm, &self.freq_perm)
    }

    /// Inverse of [`Self::to_canonical_freq`].
    pub fn from_canonical_freq(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, self.n);
        for (i, &fi) in self.freq_perm.iter().enumerate() {
            for (j, &fj) in self.freq_perm.iter().enumerate() {
                out[(fi, fj)] = m[(i, j)];
            }
        }
        out
    }

    fn check_basis(&self, basis: &SpectralBasis) -> Result<()> {
        if basis.n() != self.n {
            return Err(GspError::LengthMismatch { expected: self.n, found: basis.n() });
        }
        Ok(())
    }
}

/// Details of a sampling set found by elimination on the out-of-band rows of `GFT`.
#[derive(Debug, Clone)]
pub struct SamplingSelection {
    pub scheme: SamplingScheme,
    /// Pivot columns in elimination order; the sampling set is their complement.
    pub pivot_columns: Vec<usize>,
    /// `N × K` matrix `R` with `s = R s_S` for every signal bandlimited to the band.
    pub interpolation: CMatrix,
}

/// Gaussian elimination with column pivoting on the out-of-band rows of `GFT`; the free
/// columns form `S`. Each step takes the remaining column holding the largest entry of the
/// active rows, lowest column index on ties.
pub fn select_sampling_set(basis: &SpectralBasis, band: &[usize]) -> Result<SamplingScheme> {
    Ok(select_sampling_set_with(basis, band, PivotTieBreak::LowestIndex)?.scheme)
}

pub fn select_sampling_set_with(
    basis: &SpectralBasis,
    band: &[usize],
    tie_break: PivotTieBreak,
) -> Result<SamplingSelection> {
    let n = basis.n();
    let band = validate_band(band, n)?;
    let k = band.len();
    let rows: Vec<usize> = leading_order(&band, n).split_off(k);
    let m = rows.len();
    let all: Vec<usize> = (0..n).collect();
    let mut e = submatrix(basis.gft(), &rows, &all);
    let tol = 1e-10 * max_abs(&e).max(f64::MIN_POSITIVE);

    let mut remaining: Vec<usize> = all.clone();
    let mut pivots = Vec::with_capacity(m);
    for r in 0..m {
        let col_peak = |c: usize, e: &CMatrix| (r..m).fold(0.0f64, |acc, i| acc.max(e[(i, c)].norm()));
        let best = remaining.iter().fold(0.0f64, |acc, &c| acc.max(col_peak(c, &e)));
        if best <= tol {
            return Err(GspError::DegenerateBand { rank: r, needed: m });
        }
        let mut ties = remaining.iter().copied().filter(|&c| col_peak(c, &e) >= best * (1.0 - 1e-9));
        let c = match tie_break {
            PivotTieBreak::LowestIndex => ties.next(),
            PivotTieBreak::HighestIndex => ties.next_back(),
        }
        .expect("the maximum is attained");
        let peak = col_peak(c, &e);
        let i = (r..m).find(|&i| e[(i, c)].norm() >= peak * (1.0 - 1e-9)).expect("peak row exists");
        e.swap_rows(r, i);
        let p = e[(r, c)];
        for j in 0..n {
            e[(r, j)] /= p;
        }
        for i in r + 1..m {
            let f = e[(i, c)];
            if f != ZERO {
                for j in 0..n {
                    let v = e[(r, j)];
                    e[(i, j)] -= f * v;
                }
            }
        }
        pivots.push(c);
        remaining.retain(|&x| x != c);
    }

    let set = remaining;
    let scheme = SamplingScheme::new(n, &set, &band)?;
    let rows_r: Vec<usize> = (0..m).collect();
    let ep = submatrix(&e, &rows_r, &pivots);
    let ef = submatrix(&e, &rows_r, &set);
    let mut interpolation = CMatrix::zeros(n, k);
    for (j, &v) in set.iter().enumerate() {
        interpolation[(v, j)] = ONE;
    }
    if m > 0 {
        let sp = ep
            .solve_upper_triangular(&(-ef))
            .ok_or_else(|| GspError::Singular("echelon pivot block".into()))?;
        for (r, &v) in pivots.iter().enumerate() {
            for j in 0..k {
                interpolation[(v, j)] = sp[(r, j)];
            }
        }
    }
    Ok(SamplingSelection { scheme, pivot_columns: pivots, interpolation })
}

/// `s_δ = δ ⊙ s`.
pub fn subsample(s: &GraphSignal, scheme: &SamplingScheme) -> Result<GraphSignal> {
    if s.len() != scheme.n() {
        return Err(GspError::LengthMismatch { expected: scheme.n(), found: s.len() });
    }
    Ok(GraphSignal::new(CVector::from_iterator(
        s.len(),
        (0..s.len()).map(|i| if scheme.contains(i) { s[i] } else { ZERO }),
    )))
}

/// `P_δ(M) = GFT diag(δ) GFT⁻¹`, with its coefficients when the eigenvalues are distinct.
#[derive(Debug, Clone)]
pub struct SubsamplingFilter {
    pub matrix: CMatrix,
    pub synthesis: Option<FilterSynthesis>,
    /// Why `synthesis` is empty.
    pub reason: Option<String>,
}

impl SubsamplingFilter {
    pub fn filter(&self) -> Option<&PolyFilter> {
        self.synthesis.as_ref().map(|s| &s.filter)
    }
}

pub fn subsampling_spectral_filter(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<SubsamplingFilter> {
    scheme.check_basis(basis)?;
    let delta: Vec<C64> = scheme.delta().iter().map(|&d| c64(f64::from(d), 0.0)).collect();
    let matrix = sandwich(basis.gft(), &delta, basis.igft());
    let (synthesis, reason) = match lsi_from_vertex_response(basis, &CVector::from_vec(delta)) {
        Ok(s) => (Some(s), None),
        Err(e) if crate::filters::coefficients_unavailable(&e) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(SubsamplingFilter { matrix, synthesis, reason })
}

fn require_divisible(n: usize, k: usize) -> Result<()> {
    if k == 0 || n % k != 0 {
        return Err(GspError::NotDivisible { n, k });
    }
    Ok(())
}

/// The `N/K` replica blocks of a subsampled bandlimited spectrum.
///
/// The raw block `i` is `[GFT_K]_i GFT⁻¹_KK`; `blocks` holds it multiplied by `N/K`, so that
/// uniform sampling of a cycle gives identity blocks and `ŝ_δ = (K/N) [B_0 ŝ_K; …; B_{N/K−1} ŝ_K]`.
#[derive(Debug, Clone)]
pub struct ReplicationBlocks {
    /// `K/N`.
    pub gain: f64,
    pub blocks: Vec<CMatrix>,
    freq_perm: Vec<usize>,
}

impl ReplicationBlocks {
    /// `[GFT_K]_i GFT⁻¹_KK` without the `N/K` normalization.
    pub fn raw_block(&self, i: usize) -> CMatrix {
        &self.blocks[i] * c64(self.gain, 0.0)
    }

    /// Subsampled spectrum, in original frequency order, of the signal whose band spectrum is `s_hat_k`.
    pub fn stack(&self, s_hat_k: &CVector) -> Spectrum {
        let k = s_hat_k.len();
        let n = k * self.blocks.len();
        let mut out = CVector::zeros(n);
        for (i, b) in self.blocks.iter().enumerate() {
            let part = b * s_hat_k * c64(self.gain, 0.0);
            for r in 0..k {
                out[self.freq_perm[i * k + r]] = part[r];
            }
        }
        Spectrum::new(out)
    }

    /// Largest `‖B_i − I_K‖_max` over all blocks.
    pub fn max_identity_deviation(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| max_abs_diff(b, &CMatrix::identity(b.nrows(), b.ncols())))
            .fold(0.0, f64::max)
    }
}

pub fn replication_blocks(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<ReplicationBlocks> {
    scheme.check_basis(basis)?;
    let (n, k) = (scheme.n(), scheme.k());
    require_divisible(n, k)?;
    let gft_c = scheme.canonical_gft(basis);
    let igft_kk = scheme.igft_kk(basis);
    let scale = c64(n as f64 / k as f64, 0.0);
    let blocks = (0..n / k)
        .map(|i| gft_c.view((i * k, 0), (k, k)) * &igft_kk * scale)
        .collect();
    Ok(ReplicationBlocks { gain: k as f64 / n as f64, blocks, freq_perm: scheme.freq_perm().to_vec() })
}

/// `(K/N) · (1 1ᵀ ⊗ I_K)`, the subsampling filter of period-`N/K` sampling on the cycle.
pub fn dsp_replicating_filter(n: usize, k: usize) -> Result<CMatrix> {
    require_divisible(n, k)?;
    let g = k as f64 / n as f64;
    Ok(CMatrix::from_fn(n, n, |i, j| if i % k == j % k { c64(g, 0.0) } else { ZERO }))
}

#[derive(Debug, Clone)]
pub struct ReplicationReport {
    pub is_lsi: bool,
    pub replicas_exact: bool,
    pub max_block_deviation: f64,
    pub verdict: LsiVerdict,
}

impl ReplicationReport {
    pub fn coeffs(&self) -> Option<&PolyFilter> {
        self.verdict.filter.as_ref()
    }
}

/// Whether subsampling is a polynomial in `M` and whether every replica block is `I_K` within 1e-8.
pub fn exact_replication_check(basis: &SpectralBasis, scheme: &SamplingScheme) -> Result<ReplicationReport> {
    let blocks = replication_blocks(basis, scheme)?;
    let p = subsampling_spectral_filter(basis, scheme)?;
    let verdict = is_lsi_in_m(basis, &p.matrix)?;
    let max_block_deviation = blocks.max_identity_deviation();
    Ok(ReplicationReport {
        is_lsi: verdict.is_lsi,
        replicas_exact: max_block_deviation <= 1e-8,
        max_block_deviation,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{circulant_graph, cycle_graph, star_graph};
    use crate::spectral::spectral_basis;

    #[test]
    fn singular_vandermonde_leaves_matrix_defined() {
        let taps = [1, 3, 4, 6, 7, 8, 9, 10, 11, 12, 13, 16, 19, 20, 24, 25, 26, 30];
        let b = spectral_basis(&circulant_graph(31, &taps).unwrap()).unwrap();
        let scheme = select_sampling_set(&b, &[0, 1, 2]).unwrap();
        let p = subsampling_spectral_filter(&b, &scheme).unwrap();
        let delta: Vec<C64> = scheme.delta().iter().map(|&d| c64(f64::from(d), 0.0)).collect();
        let direct = sandwich(b.gft(), &delta, b.igft());
        assert!(crate::linalg::max_abs_diff(&p.matrix, &direct) < 1e-12);
        assert_eq!(p.synthesis.is_none(), p.reason.is_some());
    }

    #[test]
    fn scheme_validation() {
        assert!(matches!(SamplingScheme::new(4, &[0, 0], &[0, 1]), Err(GspError::InvalidSamplingSet(_))));
        assert!(matches!(SamplingScheme::new(4, &[0, 1], &[0, 4]), Err(GspError::InvalidBand(_))));
        assert!(matches!(SamplingScheme::new(4, &[0], &[0, 1]), Err(GspError::InvalidSamplingSet(_))));
        assert!(matches!(SamplingScheme::new(4, &[], &[]), Err(GspError::InvalidBand(_))));
        let s = SamplingScheme::new(5, &[3, 0], &[1, 4]).unwrap();
        assert_eq!(s.set(), &[0, 3]);
        assert_eq!(s.vertex_perm(), &[0, 3, 1, 2, 4]);
        assert_eq!(s.freq_perm(), &[1, 4, 0, 2, 3]);
        assert_eq!(s.delta(), vec![1, 0, 0, 1, 0]);
    }

    #[test]
    fn full_band_samples_everything() {
        let b = spectral_basis(&star_graph(4).unwrap()).unwrap();
        let s = select_sampling_set(&b, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.set(), &[0, 1, 2, 3]);
        assert_eq!(s.delta(), vec![1; 4]);
    }

    #[test]
    fn cycle_tie_breaks() {
        let b = spectral_basis(&cycle_graph(4).unwrap()).unwrap();
        assert_eq!(select_sampling_set(&b, &[0, 1]).unwrap().set(), &[1, 3]);
        let hi = select_sampling_set_with(&b, &[0, 1], PivotTieBreak::HighestIndex).unwrap();
        assert_eq!(hi.scheme.set(), &[0, 2]);
        assert_eq!(hi.pivot_columns, vec![3, 1]);
    }

    #[test]
    fn divisibility_is_required_for_replication() {
        let b = spectral_basis(&star_graph(5).unwrap()).unwrap();
        let s = SamplingScheme::new(5, &[0, 1], &[0, 1]).unwrap();
        assert!(matches!(replication_blocks(&b, &s), Err(GspError::NotDivisible { n: 5, k: 2 })));
        assert!(exact_replication_check(&b, &s).is_err());
        assert!(dsp_replicating_filter(6, 4).is_err());
    }

    #[test]
    fn star_subsampling_has_no_coefficients() {
        let b = spectral_basis(&star_graph(5).unwrap()).unwrap();
        let s = SamplingScheme::new(5, &[0, 1], &[0, 1]).unwrap();
        let p = subsampling_spectral_filter(&b, &s).unwrap();
        assert!(p.synthesis.is_none());
        assert!(p.reason.unwrap().contains("not distinct"));
    }
}
