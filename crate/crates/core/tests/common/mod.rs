//! Oracles shared by the integration tests. They avoid the library's own solvers where possible.

#![allow(dead_code)]

use gsp_sampling::graphs::{
    circulant_graph, cycle_graph, graph_from_adjacency, kronecker_graph, permute_vertices, star_graph, Graph,
};
use gsp_sampling::linalg::{c64, CMatrix, CVector, C64};
use gsp_sampling::sampling::{select_sampling_set_with, PivotTieBreak, SamplingScheme};
use gsp_sampling::spectral::SpectralBasis;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_cvector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_cmatrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| random_complex(rng))
}

/// Least-squares fit of `target = Σ p_k shift^k` over `deg` powers, by flattening the powers into
/// columns of a real system and solving it with an SVD. Returns the coefficients and the residual.
pub fn fit_polynomial(shift: &CMatrix, target: &CMatrix, deg: usize) -> (CVector, f64) {
    let n = shift.nrows();
    let mut powers = vec![CMatrix::identity(n, n)];
    for _ in 1..deg {
        let next = powers.last().unwrap() * shift;
        powers.push(next);
    }
    // Real embedding: unknowns are (re p_k, im p_k).
    let rows = 2 * n * n;
    let mut a = DMatrix::<f64>::zeros(rows, 2 * deg);
    let mut b = nalgebra::DVector::<f64>::zeros(rows);
    for i in 0..n {
        for j in 0..n {
            let r = 2 * (i * n + j);
            b[r] = target[(i, j)].re;
            b[r + 1] = target[(i, j)].im;
            for (k, pk) in powers.iter().enumerate() {
                let z = pk[(i, j)];
                a[(r, 2 * k)] = z.re;
                a[(r, 2 * k + 1)] = -z.im;
                a[(r + 1, 2 * k)] = z.im;
                a[(r + 1, 2 * k + 1)] = z.re;
            }
        }
    }
    let x = a.clone().svd(true, true).solve(&b, 1e-12).expect("svd solve");
    let residual = (&a * &x - &b).amax();
    (CVector::from_fn(deg, |k, _| c64(x[2 * k], x[2 * k + 1])), residual)
}

/// Determinant by cofactor-free Gaussian elimination with partial pivoting.
pub fn determinant(m: &CMatrix) -> C64 {
    let mut a = m.clone();
    let n = a.nrows();
    let mut det = c64(1.0, 0.0);
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[(x, c)].norm().total_cmp(&a[(y, c)].norm())).unwrap();
        if a[(p, c)].norm() == 0.0 {
            return c64(0.0, 0.0);
        }
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        det *= a[(c, c)];
        for r in c + 1..n {
            let f = a[(r, c)] / a[(c, c)];
            for k in c..n {
                let v = a[(c, k)];
                a[(r, k)] -= f * v;
            }
        }
    }
    det
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn real(values: &[f64]) -> CVector {
    CVector::from_iterator(values.len(), values.iter().map(|&v| c64(v, 0.0)))
}

/// `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A graph with a usable spectral basis, drawn from one of several families.
pub fn build_graph(kind: u8, n: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    match kind % 6 {
        0 => cycle_graph(n).unwrap(),
        1 => {
            let mut taps: Vec<usize> = (1..n).filter(|_| r.random_bool(0.4)).collect();
            if taps.is_empty() {
                taps.push(1);
            }
            circulant_graph(n, &taps).unwrap()
        }
        2 => star_graph(n.max(3)).unwrap(),
        3 => {
            let inner = random_dense(&mut r, 3);
            kronecker_graph(2 + n % 3, &inner).unwrap()
        }
        4 => {
            let base = circulant_graph(n, &[1, 2]).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut r);
            permute_vertices(&base, &perm).unwrap()
        }
        _ => random_dense(&mut r, n.min(12)),
    }
}

pub fn random_dense(r: &mut ChaCha8Rng, n: usize) -> Graph {
    let m = CMatrix::from_fn(n, n, |_, _| c64(r.random_range(-1.0..1.0), 0.0));
    graph_from_adjacency(m).unwrap()
}

/// A random band and a well-posed scheme picked by elimination.
pub fn random_scheme(
    basis: &SpectralBasis,
    r: &mut ChaCha8Rng,
) -> SamplingScheme {
    let n = basis.n();
    let k = r.random_range(1..=n);
    let mut freqs: Vec<usize> = (0..n).collect();
    freqs.shuffle(r);
    let tie = if r.random_bool(0.5) { PivotTieBreak::LowestIndex } else { PivotTieBreak::HighestIndex };
    select_sampling_set_with(basis, &freqs[..k], tie).unwrap().scheme
}
