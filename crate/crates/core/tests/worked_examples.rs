mod common;

use common::{determinant, fit_polynomial, max_abs, real};
use gsp_sampling::decimation::{decimate, decimated_spectrum, decimated_system};
use gsp_sampling::filters::{vertex_response, ShiftDomain};
use gsp_sampling::graphs::{circulant_graph, cycle_graph, graph_from_adjacency, kronecker_graph, star_graph, Graph};
use gsp_sampling::linalg::{c64, max_abs_diff, max_abs_diff_vec, CMatrix, C64};
use gsp_sampling::reconstruction::{
    design_q, ideal_lowpass, plan_from_q, reconstruct_by_filtering, reconstruct_spectral, upsample, QStrategy,
};
use gsp_sampling::sampling::{
    exact_replication_check, select_sampling_set_with, subsample, subsampling_spectral_filter, PivotTieBreak,
    SamplingScheme,
};
use gsp_sampling::spectral::{gft, spectral_basis, GraphSignal, SpectralBasis};

const CIRCULANT_COEFFS: [f64; 8] = [-0.00852, -0.08110, -0.09813, 0.17518, 0.88037, 0.20925, -0.03001, -0.04704];
const KRONECKER_COEFFS: [f64; 12] =
    [0.25, -0.5, 0.3125, 0.4375, 0.0, -1.375, 2.125, -0.75, 0.0, 0.125, -0.1875, 0.0625];

fn inner_three() -> Graph {
    let b = [[0.0, 1.0, 1.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
    graph_from_adjacency(CMatrix::from_fn(3, 3, |i, j| c64(b[i][j], 0.0))).unwrap()
}

fn star5() -> (SpectralBasis, SamplingScheme) {
    let b = spectral_basis(&star_graph(5).unwrap()).unwrap();
    (b, SamplingScheme::new(5, &[0, 1], &[0, 1]).unwrap())
}

#[test]
fn star_spectrum_and_subsampling_filter() {
    let (b, scheme) = star5();
    let s = GraphSignal::from_real(&[-2.0, 3.0, 3.0, 3.0, 3.0]);
    let r8 = 8f64.sqrt();
    assert!(max_abs_diff_vec(gft(&b, &s).unwrap().values(), &real(&[r8, 2.0 * r8, 0.0, 0.0, 0.0])) < 1e-12);

    let p = subsampling_spectral_filter(&b, &scheme).unwrap();
    let m = b.spectral_shift();
    assert!(max_abs_diff(&p.matrix, &(m * m * c64(0.25, 0.0))) < 1e-12);
    // Band block in the closed form worked out by hand.
    let b11 = p.matrix.view((0, 0), (2, 2)).into_owned();
    assert!(max_abs_diff(&b11, &CMatrix::from_fn(2, 2, |i, j| c64(if i == j { 0.625 } else { -0.375 }, 0.0))) < 1e-12);
    // Repeated zero eigenvalue: no unique coefficients.
    assert!(p.synthesis.is_none() && p.reason.is_some());
}

#[test]
fn star_block_inverse_extends_to_lsi() {
    let (b, scheme) = star5();
    let plan = design_q(&b, &scheme, QStrategy::BlockInverse).unwrap();
    let q11 = plan.q.view((0, 0), (2, 2)).into_owned();
    assert!(max_abs_diff(&q11, &CMatrix::from_fn(2, 2, |i, j| c64(if i == j { 2.5 } else { 1.5 }, 0.0))) < 1e-9);
    assert!(!plan.raw_lsi.is_lsi);
    assert!(plan.is_q_lsi);

    let coeffs = plan.coeffs().unwrap();
    assert_eq!(coeffs.domain, ShiftDomain::Spectral);
    assert!(max_abs_diff_vec(&coeffs.coeffs, &real(&[4.0, -0.75, -0.375, 0.0, 0.0])) < 1e-9);
    let resp = vertex_response(&b, coeffs).unwrap();
    assert!(max_abs_diff_vec(&resp, &real(&[1.0, 4.0, 4.0, 4.0, 4.0])) < 1e-9);

    // The completion written as a polynomial matches an independent power-basis fit.
    let completed = &plan.completion.as_ref().unwrap().q;
    let (fit, res) = fit_polynomial(b.spectral_shift(), completed, 3);
    assert!(res < 1e-10);
    assert!(max_abs_diff_vec(&fit, &real(&[4.0, -0.75, -0.375])) < 1e-9);
}

#[test]
fn star_end_to_end() {
    let (b, scheme) = star5();
    let s = GraphSignal::from_real(&[-2.0, 3.0, 3.0, 3.0, 3.0]);
    let s_d = decimate(&subsample(&s, &scheme).unwrap(), &scheme).unwrap();
    assert_eq!(s_d, GraphSignal::from_real(&[-2.0, 3.0]));
    let up = upsample(&s_d, &scheme).unwrap();
    assert_eq!(up, GraphSignal::from_real(&[-2.0, 3.0, 0.0, 0.0, 0.0]));

    assert!(reconstruct_spectral(&b, &scheme, &s_d).unwrap().max_abs_diff(&s) < 1e-12);
    for strategy in [QStrategy::GaussJordan, QStrategy::BlockInverse, QStrategy::Pseudoinverse] {
        let plan = design_q(&b, &scheme, strategy).unwrap();
        let out = reconstruct_by_filtering(&b, &plan, &up).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-9, "{strategy:?}");
    }

    // Lowpass is A²/4 and the vertex form of the completed Q multiplies by [1,4,4,4,4].
    let a = b.shift();
    let lp = ideal_lowpass(&b, &[0, 1]).unwrap();
    assert!(max_abs_diff(&lp.matrix, &(a * a * c64(0.25, 0.0))) < 1e-12);
    let weighted = GraphSignal::from_real(&[-2.0, 12.0, 0.0, 0.0, 0.0]);
    let out = GraphSignal::new(&lp.matrix * weighted.values());
    assert!(out.max_abs_diff(&s) < 1e-12);
}

#[test]
fn star_basis_is_unitary_and_exact() {
    let g = star_graph(5).unwrap();
    let (b, _) = star5();
    assert!(max_abs_diff(&(b.gft() * b.gft().adjoint()), &CMatrix::identity(5, 5)) < 1e-12);
    assert!(max_abs_diff(b.shift(), g.adjacency()) < 1e-12);
    assert!(max_abs_diff_vec(b.lambda(), &real(&[2.0, -2.0, 0.0, 0.0, 0.0])) < 1e-12);
}

#[test]
fn star_decimated_system() {
    let (b, scheme) = star5();
    let sys = decimated_system(&b, &scheme).unwrap();
    assert!(max_abs_diff_vec(sys.lambda_d(), &real(&[2.0, -2.0])) < 1e-12);
    let s_d = GraphSignal::from_real(&[-2.0, 3.0]);
    let r8 = 8f64.sqrt();
    let s_hat_d = decimated_spectrum(&sys, &s_d).unwrap();
    assert!(max_abs_diff_vec(s_hat_d.values(), &real(&[r8, 2.0 * r8])) < 1e-12);
    // A_d = GFT_d⁻¹ Λ_d GFT_d.
    let a_d = sys.basis.igft() * CMatrix::from_diagonal(sys.lambda_d()) * sys.gft_d();
    assert!(max_abs_diff(sys.adjacency(), &a_d) < 1e-12);
}

#[test]
fn circulant_replicating_filter_coefficients() {
    let b = spectral_basis(&circulant_graph(8, &[1, 4, 6]).unwrap()).unwrap();
    let lam = b.lambda();
    assert!((lam[0] - c64(3.0, 0.0)).norm() < 1e-12);
    assert!((lam[4] - c64(1.0, 0.0)).norm() < 1e-12);
    assert!((lam[5].re + 1.7).abs() < 0.05);

    let scheme = SamplingScheme::new(8, &[0, 2, 4, 6], &[0, 1, 2, 3]).unwrap();
    let report = exact_replication_check(&b, &scheme).unwrap();
    assert!(report.is_lsi && report.replicas_exact);
    let coeffs = &report.coeffs().unwrap().coeffs;
    assert!(max_abs_diff_vec(coeffs, &real(&CIRCULANT_COEFFS)) < 1e-5);

    let p = subsampling_spectral_filter(&b, &scheme).unwrap();
    let (fit, res) = fit_polynomial(b.spectral_shift(), &p.matrix, 8);
    assert!(res < 1e-10);
    assert!(max_abs_diff_vec(&fit, coeffs) < 1e-8);
}

#[test]
fn kronecker_spectrum_and_coefficients() {
    let inner = inner_three();
    let g = kronecker_graph(4, &inner).unwrap();
    let b = spectral_basis(&g).unwrap();
    let lb = spectral_basis(&inner).unwrap().lambda().clone();
    assert!((lb[0].re - 1.8393).abs() < 1e-4 && lb[0].im.abs() < 1e-12);
    assert!((lb[1] - c64(-0.4196, 0.6063)).norm() < 1e-4);
    // Independent of the eigensolver: each λ is a root of det(λI − B) = λ³ − λ² − λ − 1.
    for &l in lb.iter() {
        let shifted = CMatrix::identity(3, 3) * l - inner.adjacency();
        assert!(determinant(&shifted).norm() < 1e-12);
        assert!((l * l * l - l * l - l - c64(1.0, 0.0)).norm() < 1e-12);
    }
    // 1.893 is not a root.
    let p = |x: f64| x * x * x - x * x - x - 1.0;
    assert!(p(1.893).abs() > 0.3 && p(1.8393).abs() < 1e-3);
    let rot = [c64(1.0, 0.0), c64(0.0, -1.0), c64(-1.0, 0.0), c64(0.0, 1.0)];
    for (blk, r) in rot.iter().enumerate() {
        for j in 0..3 {
            assert!((b.lambda()[3 * blk + j] - r * lb[j]).norm() < 1e-12);
        }
    }

    let scheme = SamplingScheme::new(12, &[0, 1, 2], &[0, 1, 2]).unwrap();
    let report = exact_replication_check(&b, &scheme).unwrap();
    assert!(report.is_lsi);
    let coeffs = &report.coeffs().unwrap().coeffs;
    assert!(max_abs_diff_vec(coeffs, &real(&KRONECKER_COEFFS)) < 1e-9);
    let p = subsampling_spectral_filter(&b, &scheme).unwrap();
    let (fit, _) = fit_polynomial(b.spectral_shift(), &p.matrix, 12);
    assert!(max_abs_diff_vec(&fit, coeffs) < 1e-8);
}

fn dsp_scheme() -> (SpectralBasis, SamplingScheme) {
    let b = spectral_basis(&cycle_graph(4).unwrap()).unwrap();
    let scheme = select_sampling_set_with(&b, &[0, 1], PivotTieBreak::HighestIndex).unwrap().scheme;
    (b, scheme)
}

#[test]
fn dsp_uniform_sampling_set() {
    let (_, scheme) = dsp_scheme();
    assert_eq!(scheme.set(), &[0, 2]);
    assert_eq!(scheme.delta(), vec![1, 0, 1, 0]);
}

#[test]
fn dsp_three_upper_blocks() {
    let (b, scheme) = dsp_scheme();
    let half_tiled = CMatrix::from_fn(4, 4, |i, j| c64(if i % 2 == j % 2 { 0.5 } else { 0.0 }, 0.0));
    assert!(max_abs_diff(&subsampling_spectral_filter(&b, &scheme).unwrap().matrix, &half_tiled) < 1e-12);

    let bi = design_q(&b, &scheme, QStrategy::BlockInverse).unwrap();
    let two_eye = CMatrix::from_fn(2, 4, |i, j| c64(if i == j { 2.0 } else { 0.0 }, 0.0));
    assert!(max_abs_diff(&bi.q.rows(0, 2).into_owned(), &two_eye) < 1e-12);
    assert!(max_abs_diff(&bi.completion.as_ref().unwrap().q, &(CMatrix::identity(4, 4) * c64(2.0, 0.0))) < 1e-9);

    let pi = design_q(&b, &scheme, QStrategy::Pseudoinverse).unwrap();
    let tiled = CMatrix::from_fn(2, 4, |i, j| c64(if i % 2 == j % 2 { 1.0 } else { 0.0 }, 0.0));
    assert!(max_abs_diff(&pi.q.rows(0, 2).into_owned(), &tiled) < 1e-12);
    assert!(pi.is_q_lsi);

    let mut q3 = CMatrix::zeros(4, 4);
    q3[(0, 0)] = c64(2.0, 0.0);
    q3[(1, 3)] = c64(2.0, 0.0);
    let user = plan_from_q(&b, &scheme, q3).unwrap();
    assert!(!user.is_q_lsi);

    let s = GraphSignal::new(b.igft().columns(0, 2) * common::real(&[1.5, -0.25]));
    let up = subsample(&s, &scheme).unwrap();
    for plan in [&bi, &pi, &user] {
        assert!(reconstruct_by_filtering(&b, plan, &up).unwrap().max_abs_diff(&s) < 1e-12);
    }
}

#[test]
fn dsp_lowpass_is_projection() {
    let (b, _) = dsp_scheme();
    let lp = ideal_lowpass(&b, &[0, 1]).unwrap().matrix;
    assert!(max_abs_diff(&(&lp * &lp), &lp) < 1e-12);
    // First row is the two-term Dirichlet kernel (1/4) Σ_{k∈{0,1}} e^{-j2πkn/4}.
    for n in 0..4 {
        let v = (c64(1.0, 0.0) + C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * n as f64)) * 0.25;
        assert!((lp[(0, n)] - v).norm() < 1e-12);
    }
    assert!(max_abs(&lp) <= 0.5 + 1e-12);
}
