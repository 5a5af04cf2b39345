//! The worked examples, printed as reference value against computed value.

use std::fmt::Write as _;

use gsp_sampling::graphs::{circulant_graph, cycle_graph, graph_from_adjacency, kronecker_graph, star_graph};
use gsp_sampling::linalg::{c64, max_abs_diff_vec, CMatrix, CVector, C64};
use gsp_sampling::pipeline::bandlimited_signal;
use gsp_sampling::reconstruction::{design_q, plan_from_q, reconstruct_by_filtering, ReconstructionPlan, QStrategy};
use gsp_sampling::sampling::{
    exact_replication_check, select_sampling_set_with, subsample, subsampling_spectral_filter, PivotTieBreak,
    SamplingScheme,
};
use gsp_sampling::spectral::{gft, spectral_basis, GraphSignal};
use gsp_sampling::{io, pipeline};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{usage, CliResult};
use crate::output::{complex6, sig6, to_json_line, Sink};

/// Agreement threshold against values printed to two or three decimals.
pub const TOL_PRINTED: f64 = 1e-2;

pub const NAMES: [&str; 4] = ["star", "dsp-nyquist", "circulant", "kronecker"];

#[derive(Debug, Serialize)]
pub struct Row {
    pub quantity: String,
    pub reference: String,
    pub computed: String,
    pub delta: Option<f64>,
    pub matches: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub name: String,
    pub rows: Vec<Row>,
    pub notes: Vec<String>,
}

impl DemoReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), rows: Vec::new(), notes: Vec::new() }
    }

    fn compare(&mut self, quantity: impl Into<String>, reference: C64, computed: C64) {
        let delta = (reference - computed).norm();
        self.rows.push(Row {
            quantity: quantity.into(),
            reference: complex6(reference),
            computed: complex6(computed),
            delta: Some(delta),
            matches: Some(delta <= TOL_PRINTED),
        });
    }

    fn compare_real(&mut self, quantity: impl Into<String>, reference: f64, computed: C64) {
        self.compare(quantity, c64(reference, 0.0), computed);
    }

    fn compare_all(&mut self, prefix: &str, reference: &[f64], computed: &CVector) {
        for (i, (&p, &c)) in reference.iter().zip(computed.iter()).enumerate() {
            self.compare_real(format!("{prefix}[{i}]"), p, c);
        }
    }

    /// A reference claim with no number attached, such as an LSI verdict.
    fn claim(&mut self, quantity: impl Into<String>, reference: impl ToString, computed: impl ToString) {
        let (reference, computed) = (reference.to_string(), computed.to_string());
        let matches = reference == computed;
        self.rows.push(Row { quantity: quantity.into(), reference, computed, delta: None, matches: Some(matches) });
    }

    fn info(&mut self, quantity: impl Into<String>, computed: impl Into<String>) {
        self.rows.push(Row {
            quantity: quantity.into(),
            reference: "-".into(),
            computed: computed.into(),
            delta: None,
            matches: None,
        });
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| r.matches == Some(false)).count()
    }

    pub fn render(&self) -> String {
        let width = |f: &dyn Fn(&Row) -> usize, title: &str| self.rows.iter().map(f).max().unwrap_or(0).max(title.len());
        let wq = width(&|r| r.quantity.chars().count(), "quantity");
        let wp = width(&|r| r.reference.chars().count(), "reference");
        let wc = width(&|r| r.computed.chars().count(), "computed");
        let mut out = String::new();
        writeln!(out, "demo {}", self.name).unwrap();
        writeln!(out, "{:wq$}  {:wp$}  {:wc$}  {:11}  status", "quantity", "reference", "computed", "delta").unwrap();
        for r in &self.rows {
            let delta = r.delta.map(sig6).unwrap_or_else(|| "-".into());
            let status = match r.matches {
                Some(true) => "ok",
                Some(false) => "DIFFERS",
                None => "",
            };
            let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
            writeln!(
                out,
                "{}  {}  {}  {:11}  {status}",
                pad(&r.quantity, wq),
                pad(&r.reference, wp),
                pad(&r.computed, wc),
                delta
            )
            .unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        writeln!(out, "{} of {} compared rows differ by more than {}", self.mismatches(), self.compared(), TOL_PRINTED)
            .unwrap();
        out
    }

    fn compared(&self) -> usize {
        self.rows.iter().filter(|r| r.matches.is_some()).count()
    }
}

pub fn run(name: &str, seed: u64, sink: &Sink) -> CliResult<DemoReport> {
    let report = match name {
        "star" => star(sink)?,
        "dsp-nyquist" => dsp_nyquist(seed)?,
        "circulant" => circulant()?,
        "kronecker" => kronecker()?,
        other => return Err(usage(format!("unknown demo {other:?}; choose one of {}", NAMES.join(", ")))),
    };
    sink.emit_file_only(&format!("demo-{name}.json"), &to_json_line(&report))?;
    Ok(report)
}

fn star(sink: &Sink) -> CliResult<DemoReport> {
    let mut r = DemoReport::new("star");
    let g = star_graph(5)?;
    let b = spectral_basis(&g)?;
    let scheme = SamplingScheme::from_set(&b, &[0, 1], &[0, 1])?;
    let s = GraphSignal::from_real(&[-2.0, 3.0, 3.0, 3.0, 3.0]);

    // Printed spectra leave out the 2√2 of a unitary transform.
    let scale = 8f64.sqrt();
    let s_hat = gft(&b, &s)?;
    r.compare_all("ŝ/(2√2)", &[1.0, 2.0, 0.0, 0.0, 0.0], &(s_hat.values() / c64(scale, 0.0)));

    let p = subsampling_spectral_filter(&b, &scheme)?;
    let printed_b11 = [[0.625, -0.375], [-0.375, 0.675]];
    for (i, row) in printed_b11.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            r.compare_real(format!("B11[{i},{j}]"), v, p.matrix[(i, j)]);
        }
    }
    for i in 0..2 {
        for j in 2..5 {
            r.compare_real(format!("|B12[{i},{}]|", j - 2), 0.177, c64(p.matrix[(i, j)].norm(), 0.0));
        }
    }
    for i in 2..5 {
        for j in 2..5 {
            let printed = if i == j { 0.25 } else { 0.0 };
            r.compare_real(format!("B22[{},{}]", i - 2, j - 2), printed, p.matrix[(i, j)]);
        }
    }
    r.notes.push("P_δ(M) = M²/4 is symmetric with equal diagonal in its band block, so B11[1,1] = B11[0,0]".into());
    r.notes.push("the leaf block of M²/4 is 0.25 times the all-ones matrix, not 0.25 I".into());

    let plan = design_q(&b, &scheme, QStrategy::BlockInverse)?;
    let printed_q11 = [[2.5, 1.5], [1.5, 2.5]];
    for (i, row) in printed_q11.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            r.compare_real(format!("Q11[{i},{j}]"), v, plan.q[(i, j)]);
        }
    }
    r.claim("Q is LSI", true, plan.is_q_lsi);
    match plan.coeffs() {
        Some(f) => {
            let printed = [4.0, -0.75, -0.375];
            r.compare_all("Q coeff", &printed, &f.coeffs);
            let response = gsp_sampling::filters::vertex_response(&b, f)?;
            r.compare_all("Q response", &[1.0, 4.0, 4.0, 4.0, 4.0], &response);
        }
        None => r.notes.push("the designed Q has no LSI completion".into()),
    }
    if !plan.raw_lsi.is_lsi {
        r.notes.push("Q as designed differs from its LSI completion outside the band rows; both filter identically".into());
    }

    let run = pipeline::run_pipeline(&b, &scheme, QStrategy::BlockInverse, &s, 1e-7)?;
    r.compare_all("recovered s", &[-2.0, 3.0, 3.0, 3.0, 3.0], run.filtered.values());
    r.info("max reconstruction error", sig6(run.report.max_error));
    sink.emit_file_only("demo-star-plan.json", &io::plan_to_json(&plan, true))?;
    Ok(r)
}

fn random_band_signal(b: &gsp_sampling::SpectralBasis, band: &[usize], seed: u64) -> CliResult<GraphSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<C64> =
        band.iter().map(|_| c64(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).collect();
    Ok(bandlimited_signal(b, band, &coeffs)?)
}

fn top_rows(plan: &ReconstructionPlan, k: usize) -> String {
    let rows: Vec<String> = (0..k)
        .map(|i| {
            let v: Vec<C64> = plan.q.row(i).iter().copied().collect();
            crate::output::vector6(&v)
        })
        .collect();
    rows.join("; ")
}

fn dsp_nyquist(seed: u64) -> CliResult<DemoReport> {
    let mut r = DemoReport::new("dsp-nyquist");
    let b = spectral_basis(&cycle_graph(4)?)?;
    let band = [0, 1];
    let scheme = select_sampling_set_with(&b, &band, PivotTieBreak::HighestIndex)?.scheme;
    r.claim("S", "[0, 2]", format!("{:?}", scheme.set()));

    let mut user = CMatrix::zeros(4, 4);
    user[(0, 0)] = c64(2.0, 0.0);
    user[(1, 3)] = c64(2.0, 0.0);
    let variants = [
        ("block_inverse", design_q(&b, &scheme, QStrategy::BlockInverse)?, true),
        ("pseudoinverse", design_q(&b, &scheme, QStrategy::Pseudoinverse)?, true),
        ("user", plan_from_q(&b, &scheme, user)?, false),
    ];
    let s = random_band_signal(&b, &band, seed)?;
    let up = subsample(&s, &scheme)?;
    for (name, plan, printed_lsi) in &variants {
        r.info(format!("{name} top rows"), top_rows(plan, scheme.k()));
        r.claim(format!("{name} LSI"), printed_lsi, plan.is_q_lsi);
        let out = reconstruct_by_filtering(&b, plan, &up)?;
        r.info(format!("{name} max error"), sig6(max_abs_diff_vec(out.values(), s.values())));
    }
    r.notes.push(format!("test signal drawn from seed {seed}"));
    Ok(r)
}

fn circulant() -> CliResult<DemoReport> {
    let mut r = DemoReport::new("circulant");
    let b = spectral_basis(&circulant_graph(8, &[1, 4, 6])?)?;
    let scheme = SamplingScheme::from_set(&b, &[0, 2, 4, 6], &[0, 1, 2, 3])?;
    let report = exact_replication_check(&b, &scheme)?;
    r.claim("P_repl LSI", true, report.is_lsi);
    r.info("max replica deviation", sig6(report.max_block_deviation));
    match report.coeffs() {
        Some(f) => r.compare_all("p", &[-0.01, -0.08, -0.1, 0.18, 0.88, 0.21, -0.03, -0.05], &f.coeffs),
        None => r.notes.push("no coefficients: repeated eigenvalues".into()),
    }
    Ok(r)
}

fn kronecker() -> CliResult<DemoReport> {
    let mut r = DemoReport::new("kronecker");
    let inner = [[0.0, 1.0, 1.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
    let bg = graph_from_adjacency(CMatrix::from_fn(3, 3, |i, j| c64(inner[i][j], 0.0)))?;
    let lb = spectral_basis(&bg)?.lambda().clone();
    let printed_lb = [c64(1.893, 0.0), c64(-0.419, 0.606), c64(-0.419, -0.606)];
    for (i, (&p, &c)) in printed_lb.iter().zip(lb.iter()).enumerate() {
        r.compare(format!("λ_B[{i}]"), p, c);
    }

    let b = spectral_basis(&kronecker_graph(4, &bg)?)?;
    let scheme = SamplingScheme::from_set(&b, &[0, 1, 2], &[0, 1, 2])?;
    let report = exact_replication_check(&b, &scheme)?;
    r.claim("P_repl LSI", true, report.is_lsi);
    match report.coeffs() {
        Some(f) => r.compare_all(
            "p",
            &[0.25, -0.5, 0.31, 0.46, 0.0, -1.38, 2.13, -0.75, 0.0, 0.13, -0.19, 0.06],
            &f.coeffs,
        ),
        None => r.notes.push("no coefficients: repeated eigenvalues".into()),
    }
    r.notes.push("B has characteristic polynomial λ³ − λ² − λ − 1, whose real root is 1.8393".into());
    Ok(r)
}
