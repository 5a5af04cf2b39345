//! Graph sources, index lists and the pipeline configuration file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use gsp_sampling::graphs::{circulant_graph, cycle_graph, graph_from_family, kronecker_graph, star_graph, Graph};
use gsp_sampling::io::graph_from_json;
use gsp_sampling::{QStrategy, C64};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{usage, CliError, CliResult};
use crate::output::read_text;

/// `star:5`, `cycle:8`, `circulant:8:1,4,6`, `kronecker:4:<source>`, or a path to a graph JSON file.
pub fn load_graph(source: &str) -> CliResult<Graph> {
    let (head, rest) = source.split_once(':').unwrap_or((source, ""));
    let parse_n = |s: &str| s.parse::<usize>().map_err(|_| usage(format!("bad vertex count {s:?} in {source:?}")));
    match head {
        "star" => Ok(star_graph(parse_n(rest)?)?),
        "cycle" => Ok(cycle_graph(parse_n(rest)?)?),
        "circulant" => {
            let (n, taps) = rest.split_once(':').ok_or_else(|| usage("circulant needs circulant:N:t1,t2,…"))?;
            Ok(circulant_graph(parse_n(n)?, &parse_indices(taps)?)?)
        }
        "kronecker" => {
            let (m, inner) = rest.split_once(':').ok_or_else(|| usage("kronecker needs kronecker:M:<inner source>"))?;
            Ok(kronecker_graph(parse_n(m)?, &load_graph(inner)?)?)
        }
        _ => load_graph_file(Path::new(source)),
    }
}

pub fn load_graph_file(path: &Path) -> CliResult<Graph> {
    let text = read_text(path)?;
    graph_from_json(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

/// Comma-separated indices; `a-b` expands to the inclusive range.
pub fn parse_indices(spec: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || usage(format!("bad index {part:?}"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

/// Comma-separated complex values such as `-2,3,1+0.5i`.
pub fn parse_values(spec: &str) -> CliResult<Vec<C64>> {
    spec.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| C64::from_str(p).map_err(|_| usage(format!("bad value {p:?}"))))
        .collect()
}

pub fn parse_strategy(name: &str) -> CliResult<QStrategy> {
    match QStrategy::from_name(name) {
        Ok(QStrategy::User) | Err(_) => {
            Err(usage(format!("unknown strategy {name:?}; use gauss_jordan, block_inverse or pseudoinverse")))
        }
        Ok(s) => Ok(s),
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilySource {
    pub family: String,
    pub params: Value,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PathSource {
    pub path: PathBuf,
}

/// Exactly one of a family with parameters or a graph JSON path.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GraphSource {
    Family(FamilySource),
    Path(PathSource),
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SchemeSpec {
    Auto(String),
    Explicit {
        #[serde(rename = "S")]
        set: Vec<usize>,
    },
}

/// Everything `gsp pipeline` needs; flags override the file.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub graph: GraphSource,
    pub band: Vec<usize>,
    #[serde(default = "auto_scheme")]
    pub scheme: SchemeSpec,
    #[serde(default = "default_strategy")]
    pub q_strategy: String,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Real signal values; a seeded random bandlimited signal is used when absent.
    #[serde(default)]
    pub signal: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn auto_scheme() -> SchemeSpec {
    SchemeSpec::Auto("auto".into())
}

fn default_strategy() -> String {
    QStrategy::BlockInverse.name().into()
}

pub fn default_tol() -> f64 {
    1e-7
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse { path: path.to_path_buf(), source: e.into() })?;
        cfg.validate_shape()?;
        Ok(cfg)
    }

    fn validate_shape(&self) -> CliResult<()> {
        if let SchemeSpec::Auto(s) = &self.scheme {
            if s != "auto" {
                return Err(usage(format!("scheme must be \"auto\" or {{\"S\": [...]}}, got {s:?}")));
            }
        }
        if !(self.tol > 0.0) {
            return Err(usage("tol must be positive"));
        }
        Ok(())
    }

    pub fn load_graph(&self) -> CliResult<Graph> {
        match &self.graph {
            GraphSource::Family(f) => Ok(graph_from_family(&f.family, &f.params)?),
            GraphSource::Path(p) => load_graph_file(&p.path),
        }
    }

    /// Band indices must lie in `0..n`.
    pub fn check_band(&self, n: usize) -> CliResult<()> {
        match self.band.iter().find(|&&b| b >= n) {
            Some(b) => Err(usage(format!("band index {b} out of range for n = {n}"))),
            None => Ok(()),
        }
    }
}
