//! `gsp`: build graphs, sample and reconstruct graph signals, and replay the worked examples.

mod config;
mod demos;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsp_sampling::decimation::decimated_system;
use gsp_sampling::filters::{lsi_from_frequency_response, lsi_from_vertex_response};
use gsp_sampling::graphs::{circulant_graph, cycle_graph, kronecker_graph, star_graph, Graph};
use gsp_sampling::io;
use gsp_sampling::linalg::{c64, CVector};
use gsp_sampling::pipeline::{bandlimited_signal, run_pipeline};
use gsp_sampling::reconstruction::{
    can_perfectly_reconstruct, design_q, reconstruct_by_filtering, upsample, Reconstructibility,
};
use gsp_sampling::sampling::{select_sampling_set_with, PivotTieBreak, SamplingScheme};
use gsp_sampling::spectral::{spectral_basis, GraphSignal, SpectralBasis};
use gsp_sampling::{GspError, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use config::{load_graph, parse_indices, parse_strategy, parse_values, PipelineConfig, SchemeSpec};
use error::{usage, CliError, CliResult};
use output::{sig6, spectrum_csv, to_json_line, Sink};

#[derive(Debug, Parser)]
#[command(name = "gsp", version, about = "Sampling and reconstruction of graph signals")]
struct Cli {
    /// Seed for any randomly drawn test signal.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for artifacts; without it results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph and write its JSON.
    Graph(GraphArgs),
    /// Eigendecomposition of a graph's shift.
    Basis(GraphOnly),
    /// Synthesize polynomial filter coefficients from a response.
    Filter(FilterArgs),
    /// Choose or validate a sampling set for a band.
    Sample(SchemeArgs),
    /// The decimated graph on the sampling set.
    Decimate(SchemeArgs),
    /// Design the reconstruction filter, optionally applying it to samples.
    Reconstruct(ReconstructArgs),
    /// Subsample, decimate, upsample and reconstruct a bandlimited signal.
    Pipeline(PipelineArgs),
    /// Replay a worked example: star, dsp-nyquist, circulant or kronecker.
    Demo { name: String },
    /// Diagnostics for a basis and, given a band, a sampling scheme.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long, conflicts_with = "from", required_unless_present = "from")]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Circulant offsets, e.g. `1,4,6`.
    #[arg(long)]
    taps: Option<String>,
    /// Kronecker cycle length.
    #[arg(long)]
    m: Option<usize>,
    /// Kronecker inner graph source.
    #[arg(long)]
    inner: Option<String>,
    /// Re-emit an existing graph JSON in canonical form.
    #[arg(long)]
    from: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GraphOnly {
    /// `star:5`, `cycle:8`, `circulant:8:1,4,6`, `kronecker:4:<source>` or a graph JSON path.
    #[arg(long)]
    graph: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ResponseKind {
    /// Values on the eigenvalues; yields a vertex-domain filter.
    Frequency,
    /// Values on the vertices; yields a spectral-domain filter.
    Vertex,
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long)]
    graph: String,
    /// Comma-separated response values, complex allowed (`1+0.5i`).
    #[arg(long, allow_hyphen_values = true)]
    response: String,
    #[arg(long, value_enum, default_value = "frequency")]
    kind: ResponseKind,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Tie {
    Lowest,
    Highest,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long)]
    graph: String,
    /// Frequency indices to keep, e.g. `0,1` or `0-3`.
    #[arg(long)]
    band: String,
    /// Sampling set, or `auto` for elimination-based selection.
    #[arg(long, default_value = "auto")]
    set: String,
    /// Pivot tie-break for `--set auto`.
    #[arg(long, value_enum, default_value = "lowest")]
    tie: Tie,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value = "block_inverse")]
    strategy: String,
    /// The K decimated samples, in sampling-set order.
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// JSON configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    band: Option<String>,
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated signal values; a random bandlimited signal is drawn otherwise.
    #[arg(long, allow_hyphen_values = true)]
    signal: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    band: Option<String>,
    #[arg(long, default_value = "auto")]
    set: String,
    #[arg(long, value_enum, default_value = "lowest")]
    tie: Tie,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(error::EXIT_USAGE as u8) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let sink = Sink::new(cli.out.clone());
    match cli.command {
        Command::Graph(a) => cmd_graph(a, &sink),
        Command::Basis(a) => {
            let b = spectral_basis(&load_graph(&a.graph)?)?;
            sink.emit("basis.json", &io::basis_to_json(&b))
        }
        Command::Filter(a) => cmd_filter(a, &sink),
        Command::Sample(a) => {
            let (_, b, scheme) = resolve_scheme(&a)?;
            let r = can_perfectly_reconstruct(&b, &scheme)?;
            eprintln!("S = {:?}, rank {} of {}, condition {}", scheme.set(), r.rank, scheme.k(), sig6(r.condition));
            sink.emit("scheme.json", &io::scheme_to_json(&scheme))
        }
        Command::Decimate(a) => {
            let (g, b, scheme) = resolve_scheme(&a)?;
            let sys = decimated_system(&b, &scheme)?;
            if sys.repeated_eigenvalues {
                eprintln!("warning: the decimated graph has repeated eigenvalues");
            }
            sink.emit("decimated.json", &io::decimated_to_json(&sys, &g))
        }
        Command::Reconstruct(a) => cmd_reconstruct(a, &sink),
        Command::Pipeline(a) => cmd_pipeline(a, cli.seed, &sink),
        Command::Demo { name } => {
            let report = demos::run(&name, cli.seed, &sink)?;
            print!("{}", report.render());
            Ok(())
        }
        Command::Verify(a) => cmd_verify(a),
    }
}

fn cmd_graph(a: GraphArgs, sink: &Sink) -> CliResult<()> {
    let g = match (&a.from, a.family.as_deref()) {
        (Some(path), _) => config::load_graph_file(path)?,
        (None, Some(family)) => build_family(family, &a)?,
        (None, None) => return Err(usage("graph needs --family or --from")),
    };
    sink.emit("graph.json", &io::graph_to_json(&g))
}

fn build_family(family: &str, a: &GraphArgs) -> CliResult<Graph> {
    let n = || a.n.ok_or_else(|| usage(format!("--family {family} needs --n")));
    Ok(match family {
        "star" => star_graph(n()?)?,
        "cycle" => cycle_graph(n()?)?,
        "circulant" => {
            let taps = a.taps.as_deref().ok_or_else(|| usage("--family circulant needs --taps"))?;
            circulant_graph(n()?, &parse_indices(taps)?)?
        }
        "kronecker" => {
            let m = a.m.ok_or_else(|| usage("--family kronecker needs --m"))?;
            let inner = a.inner.as_deref().ok_or_else(|| usage("--family kronecker needs --inner"))?;
            kronecker_graph(m, &load_graph(inner)?)?
        }
        other => return Err(usage(format!("unknown family {other:?}; use star, cycle, circulant or kronecker"))),
    })
}

fn cmd_filter(a: FilterArgs, sink: &Sink) -> CliResult<()> {
    let b = spectral_basis(&load_graph(&a.graph)?)?;
    let response = CVector::from_vec(parse_values(&a.response)?);
    let synthesis = match a.kind {
        ResponseKind::Frequency => lsi_from_frequency_response(&b, &response)?,
        ResponseKind::Vertex => lsi_from_vertex_response(&b, &response)?,
    };
    eprintln!("condition {}, residual {}", sig6(synthesis.condition), sig6(synthesis.residual));
    if let Some(w) = &synthesis.warning {
        eprintln!("warning: {w}");
    }
    sink.emit("filter.json", &io::filter_to_json(&synthesis.filter))
}

fn tie_break(t: Tie) -> PivotTieBreak {
    match t {
        Tie::Lowest => PivotTieBreak::LowestIndex,
        Tie::Highest => PivotTieBreak::HighestIndex,
    }
}

fn build_scheme(b: &SpectralBasis, band: &[usize], set: &SchemeSpec, tie: PivotTieBreak) -> CliResult<SamplingScheme> {
    match set {
        SchemeSpec::Auto(_) => Ok(select_sampling_set_with(b, band, tie)?.scheme),
        SchemeSpec::Explicit { set } => {
            let scheme = SamplingScheme::new(b.n(), set, band)?;
            require_reconstructible(b, &scheme)?;
            Ok(scheme)
        }
    }
}

fn parse_set(s: &str) -> CliResult<SchemeSpec> {
    if s == "auto" {
        Ok(SchemeSpec::Auto(s.into()))
    } else {
        Ok(SchemeSpec::Explicit { set: parse_indices(s)? })
    }
}

fn resolve_scheme(a: &SchemeArgs) -> CliResult<(Graph, SpectralBasis, SamplingScheme)> {
    let g = load_graph(&a.graph)?;
    let b = spectral_basis(&g)?;
    let band = parse_indices(&a.band)?;
    let scheme = build_scheme(&b, &band, &parse_set(&a.set)?, tie_break(a.tie))?;
    Ok((g, b, scheme))
}

/// Rank test on `GFT⁻¹_KK`; failure carries the singular values.
fn require_reconstructible(b: &SpectralBasis, scheme: &SamplingScheme) -> CliResult<Reconstructibility> {
    let r = can_perfectly_reconstruct(b, scheme)?;
    if !r.reconstructible {
        let sv: Vec<String> = r.singular_values.iter().map(|&x| sig6(x)).collect();
        return Err(GspError::NoPerfectReconstruction(format!(
            "GFT⁻¹ restricted to S = {:?} and band {:?} has rank {} < {}; singular values [{}]",
            scheme.set(),
            scheme.band(),
            r.rank,
            scheme.k(),
            sv.join(", ")
        ))
        .into());
    }
    Ok(r)
}

fn cmd_reconstruct(a: ReconstructArgs, sink: &Sink) -> CliResult<()> {
    let (_, b, scheme) = resolve_scheme(&a.scheme)?;
    let plan = design_q(&b, &scheme, parse_strategy(&a.strategy)?)?;
    eprintln!("contract error {}, Q extends to LSI: {}", sig6(plan.contract_error), plan.is_q_lsi);
    sink.emit("plan.json", &io::plan_to_json(&plan, false))?;
    if let Some(samples) = &a.samples {
        let s_d = GraphSignal::from_complex(&parse_values(samples)?);
        let out = reconstruct_by_filtering(&b, &plan, &upsample(&s_d, &scheme)?)?;
        sink.emit("reconstructed.csv", &spectrum_csv(out.values()))?;
    }
    Ok(())
}

fn random_signal(b: &SpectralBasis, band: &[usize], seed: u64) -> CliResult<GraphSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<C64> =
        band.iter().map(|_| c64(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).collect();
    Ok(bandlimited_signal(b, band, &coeffs)?)
}

fn pipeline_config(a: &PipelineArgs) -> CliResult<PipelineConfig> {
    let mut cfg = match &a.config {
        Some(path) => PipelineConfig::from_file(path)?,
        None => {
            let graph = a.graph.as_ref().ok_or_else(|| usage("pipeline needs --config or --graph"))?;
            let band = a.band.as_ref().ok_or_else(|| usage("pipeline needs --config or --band"))?;
            let value = serde_json::json!({ "graph": { "path": graph }, "band": parse_indices(band)? });
            serde_json::from_value(value).map_err(|e| usage(e.to_string()))?
        }
    };
    if let Some(band) = &a.band {
        cfg.band = parse_indices(band)?;
    }
    if let Some(set) = &a.set {
        cfg.scheme = parse_set(set)?;
    }
    if let Some(s) = &a.strategy {
        cfg.q_strategy = s.clone();
    }
    if let Some(tol) = a.tol {
        if !(tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        cfg.tol = tol;
    }
    if let Some(signal) = &a.signal {
        let values = parse_values(signal)?;
        if values.iter().any(|z| z.im != 0.0) {
            return Err(usage("--signal takes real values"));
        }
        cfg.signal = Some(values.iter().map(|z| z.re).collect());
    }
    Ok(cfg)
}

fn cmd_pipeline(a: PipelineArgs, seed: u64, sink: &Sink) -> CliResult<()> {
    let cfg = pipeline_config(&a)?;
    let g = match &a.graph {
        Some(src) => load_graph(src)?,
        None => cfg.load_graph()?,
    };
    cfg.check_band(g.n())?;
    let b = spectral_basis(&g)?;
    let strategy = parse_strategy(&cfg.q_strategy)?;
    let scheme = build_scheme(&b, &cfg.band, &cfg.scheme, PivotTieBreak::LowestIndex)?;
    let s = match &cfg.signal {
        Some(v) if v.len() != g.n() => {
            return Err(usage(format!("signal has {} values for a graph on {} vertices", v.len(), g.n())))
        }
        Some(v) => GraphSignal::from_real(v),
        None => random_signal(&b, scheme.band(), cfg.seed.unwrap_or(seed))?,
    };

    let run = run_pipeline(&b, &scheme, strategy, &s, cfg.tol)?;
    let out_sink;
    let sink = match (sink.dir(), &cfg.out) {
        (None, Some(dir)) => {
            out_sink = Sink::new(Some(dir.clone()));
            &out_sink
        }
        _ => sink,
    };
    sink.emit("report.json", &to_json_line(&run.report))?;
    sink.emit_file_only("signal.csv", &spectrum_csv(s.values()))?;
    sink.emit_file_only("spectrum.csv", &spectrum_csv(run.s_hat.values()))?;
    sink.emit_file_only("spectrum_subsampled.csv", &spectrum_csv(run.s_hat_delta.values()))?;
    sink.emit_file_only("spectrum_decimated.csv", &spectrum_csv(run.s_hat_d.values()))?;
    sink.emit_file_only("reconstructed.csv", &spectrum_csv(run.filtered.values()))?;

    if !run.report.passed {
        return Err(CliError::Tolerance { error: run.report.max_error, tol: run.report.tol });
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let b = spectral_basis(&g)?;
    let d = b.distinctness();
    println!("n {}", g.n());
    println!("basis {}", b.ordering_tag());
    println!("shift reconstruction error {}", sig6(b.reconstruction_error(g.adjacency())));
    println!("distinct eigenvalues {} (smallest gap {}, tolerance {})", d.distinct, sig6(d.min_gap), sig6(d.tol));
    for w in g.warnings() {
        println!("warning: {w}");
    }
    let Some(band) = &a.band else {
        return Ok(());
    };
    let band = parse_indices(band)?;
    let scheme = match parse_set(&a.set)? {
        SchemeSpec::Explicit { set } => SamplingScheme::new(b.n(), &set, &band)?,
        auto => build_scheme(&b, &band, &auto, tie_break(a.tie))?,
    };
    let r = can_perfectly_reconstruct(&b, &scheme)?;
    println!("S {:?}", scheme.set());
    println!("band {:?}", scheme.band());
    println!("rank {} of {}, condition {}", r.rank, scheme.k(), sig6(r.condition));
    println!("reconstructible {}", r.reconstructible);
    require_reconstructible(&b, &scheme)?;
    Ok(())
}
