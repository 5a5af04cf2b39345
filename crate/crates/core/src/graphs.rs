//! Graph shifts and the named families with closed-form spectral bases.

use crate::error::{GspError, Result};
use crate::linalg::{
    c64, cycle_adjacency, dft, require_square, unit_root, validate_permutation, CMatrix, CVector, C64, ONE,
    ZERO,
};
use crate::spectral::{spectral_basis, Distinctness, SpectralBasis};
use serde_json::{json, Value};

pub const DFT_ORDERING_TAG: &str = "dft:k=0..N-1";
pub const STAR_ORDERING_TAG: &str = "star:+sqrt(N-1),-sqrt(N-1),0..;unitary";

/// A shift matrix `A` on `n` vertices, optionally with a fixed spectral basis.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: CMatrix,
    basis: Option<SpectralBasis>,
    family: Option<String>,
    family_params: Option<Value>,
    warnings: Vec<String>,
}

impl Graph {
    /// Attaches `basis` after checking `‖GFT⁻¹ Λ GFT − A‖_max ≤ 1e-9 (1 + ‖A‖_max)`.
    pub fn with_analytic_basis(
        adjacency: CMatrix,
        basis: SpectralBasis,
        family: Option<String>,
        family_params: Option<Value>,
    ) -> Result<Self> {
        let n = require_square(&adjacency)?;
        if basis.n() != n {
            return Err(GspError::LengthMismatch { expected: n, found: basis.n() });
        }
        let err = basis.reconstruction_error(&adjacency);
        if !(err <= 1e-9) {
            return Err(GspError::Singular(format!(
                "basis does not diagonalize the adjacency (relative error {err:e})"
            )));
        }
        let mut warnings = Vec::new();
        let d = basis.distinctness();
        if !d.distinct {
            warnings.push(repeated_warning(d));
        }
        Ok(Self { adjacency, basis: Some(basis), family, family_params, warnings })
    }

    /// Pins `basis` as this graph's spectral basis.
    pub fn with_basis(self, basis: SpectralBasis) -> Result<Self> {
        Self::with_analytic_basis(self.adjacency, basis, self.family, self.family_params)
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &CMatrix {
        &self.adjacency
    }

    pub fn analytic_basis(&self) -> Option<&SpectralBasis> {
        self.basis.as_ref()
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn family_params(&self) -> Option<&Value> {
        self.family_params.as_ref()
    }

    /// Non-fatal findings, e.g. repeated eigenvalues in a product graph.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

fn repeated_warning(d: Distinctness) -> String {
    format!(
        "eigenvalues are not distinct (smallest gap {:e}, tolerance {:e}); polynomial filter synthesis is unavailable",
        d.min_gap, d.tol
    )
}

/// Directed `n`-cycle with the DFT as its basis and `λ_k = e^{-j2πk/n}`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(GspError::InvalidFamily("cycle needs n >= 1".into()));
    }
    let f = dft(n);
    let lambda = CVector::from_iterator(n, (0..n).map(|k| unit_root(k, n)));
    let basis = SpectralBasis::new(f.clone(), f.adjoint(), lambda, DFT_ORDERING_TAG)?;
    Graph::with_analytic_basis(cycle_adjacency(n), basis, Some("cycle".into()), Some(json!({ "n": n })))
}

/// Undirected star with hub 0. Eigenvalues `+√(n−1), −√(n−1), 0, …, 0`; the
/// zero eigenspace is spanned by DFT rows `1..n−2` of the leaves.
pub fn star_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(GspError::InvalidFamily(format!("star needs n >= 3, got {n}")));
    }
    let leaves = n - 1;
    let mut a = CMatrix::zeros(n, n);
    for i in 1..n {
        a[(0, i)] = ONE;
        a[(i, 0)] = ONE;
    }
    let h = 1.0 / 2f64.sqrt();
    let l = 1.0 / (2.0 * leaves as f64).sqrt();
    let d = 1.0 / (leaves as f64).sqrt();
    let mut g = CMatrix::zeros(n, n);
    g[(0, 0)] = c64(h, 0.0);
    g[(1, 0)] = c64(-h, 0.0);
    for j in 1..n {
        g[(0, j)] = c64(l, 0.0);
        g[(1, j)] = c64(l, 0.0);
    }
    for k in 1..leaves {
        for m in 0..leaves {
            g[(k + 1, m + 1)] = unit_root(k * m, leaves) * d;
        }
    }
    let r = (leaves as f64).sqrt();
    let mut lambda = CVector::zeros(n);
    lambda[0] = c64(r, 0.0);
    lambda[1] = c64(-r, 0.0);
    let basis = SpectralBasis::new(g.clone(), g.adjoint(), lambda, STAR_ORDERING_TAG)?;
    Graph::with_analytic_basis(a, basis, Some("star".into()), Some(json!({ "n": n })))
}

/// `A = Σ_{t ∈ taps} A_cᵗ` with `A_c` the directed `n`-cycle; basis is the DFT.
pub fn circulant_graph(n: usize, taps: &[usize]) -> Result<Graph> {
    if taps.is_empty() {
        return Err(GspError::InvalidFamily("circulant needs at least one tap".into()));
    }
    let mut seen = vec![false; n];
    for &t in taps {
        if t == 0 || t >= n {
            return Err(GspError::InvalidFamily(format!("tap {t} is outside 1..{}", n.saturating_sub(1))));
        }
        if seen[t] {
            return Err(GspError::InvalidFamily(format!("duplicate tap {t}")));
        }
        seen[t] = true;
    }
    let mut sorted = taps.to_vec();
    sorted.sort_unstable();
    let mut a = CMatrix::zeros(n, n);
    for &t in &sorted {
        for j in 0..n {
            a[((j + t) % n, j)] += ONE;
        }
    }
    // Eigenvalues are the unnormalized DFT of the first column.
    let lambda = CVector::from_iterator(n, (0..n).map(|k| sorted.iter().map(|&t| unit_root(k * t, n)).sum::<C64>()));
    let f = dft(n);
    let basis = SpectralBasis::new(f.clone(), f.adjoint(), lambda, DFT_ORDERING_TAG)?;
    Graph::with_analytic_basis(a, basis, Some("circulant".into()), Some(json!({ "n": n, "taps": sorted })))
}

/// `A = A_m ⊗ B` with `GFT = DFT_m ⊗ GFT_B`; eigenvalues ordered cycle index outer, `B` index inner.
pub fn kronecker_graph(m: usize, b: &Graph) -> Result<Graph> {
    if m == 0 {
        return Err(GspError::InvalidFamily("kronecker needs m >= 1".into()));
    }
    let bb = spectral_basis(b)?;
    let nb = bb.n();
    let f = dft(m);
    let gft = f.kronecker(bb.gft());
    let igft = f.adjoint().kronecker(bb.igft());
    let lambda = CVector::from_iterator(
        m * nb,
        (0..m).flat_map(|i| bb.lambda().iter().map(move |&lb| unit_root(i, m) * lb)),
    );
    let basis = SpectralBasis::new(gft, igft, lambda, format!("kronecker(dft-outer,{})", bb.ordering_tag()))?;
    let a = cycle_adjacency(m).kronecker(b.adjacency());
    let params = json!({ "m": m, "inner": crate::io::graph_to_value(b) });
    let mut g = Graph::with_analytic_basis(a, basis, Some("kronecker".into()), Some(params))?;
    if !bb.has_distinct_eigenvalues() {
        g.warnings.push(format!("inner graph: {}", repeated_warning(bb.distinctness())));
    }
    Ok(g)
}

/// Plain graph without a fixed basis.
pub fn graph_from_adjacency(matrix: CMatrix) -> Result<Graph> {
    require_square(&matrix)?;
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(GspError::Format("adjacency has non-finite entries".into()));
    }
    Ok(Graph { adjacency: matrix, basis: None, family: None, family_params: None, warnings: Vec::new() })
}

/// Relabels vertex `i` as `perm[i]`: `A' = Π A Πᵀ`. A fixed basis is carried along with
/// `GFT' = Π GFT Πᵀ` and `λ' = Π λ`.
pub fn permute_vertices(g: &Graph, perm: &[usize]) -> Result<Graph> {
    let n = g.n();
    validate_permutation(perm, n)?;
    let mut a = CMatrix::from_element(n, n, ZERO);
    for i in 0..n {
        for j in 0..n {
            a[(perm[i], perm[j])] = g.adjacency[(i, j)];
        }
    }
    let basis = g.basis.as_ref().map(|b| b.permuted(perm)).transpose()?;
    Ok(Graph { adjacency: a, basis, family: None, family_params: None, warnings: g.warnings.clone() })
}

/// `(q ∘ p)[i] = q[p[i]]`: permuting by `p` then by `q`.
pub fn compose_permutations(q: &[usize], p: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

/// Rebuilds a family graph from its JSON name and parameters.
pub fn graph_from_family(family: &str, params: &Value) -> Result<Graph> {
    let n = || {
        params
            .get("n")
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| GspError::InvalidFamily(format!("{family} needs integer parameter n")))
    };
    match family {
        "cycle" => cycle_graph(n()?),
        "star" => star_graph(n()?),
        "circulant" => {
            let taps = params
                .get("taps")
                .and_then(Value::as_array)
                .ok_or_else(|| GspError::InvalidFamily("circulant needs a taps array".into()))?
                .iter()
                .map(|t| t.as_u64().map(|v| v as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| GspError::InvalidFamily("taps must be non-negative integers".into()))?;
            circulant_graph(n()?, &taps)
        }
        "kronecker" => {
            let m = params
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| GspError::InvalidFamily("kronecker needs integer parameter m".into()))?;
            let inner = params
                .get("inner")
                .ok_or_else(|| GspError::InvalidFamily("kronecker needs an inner graph".into()))?;
            let b = crate::io::graph_from_value(inner)?;
            kronecker_graph(m as usize, &b)
        }
        other => Err(GspError::InvalidFamily(format!("unknown family {other:?}"))),
    }
}

pub(crate) fn attach_metadata(mut g: Graph, family: Option<String>, family_params: Option<Value>) -> Graph {
    g.family = family;
    g.family_params = family_params;
    g
}
