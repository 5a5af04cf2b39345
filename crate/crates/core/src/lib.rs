//! Sampling, decimation and perfect reconstruction of bandlimited signals on directed graphs.
//!
//! A graph's shift `A = GFT⁻¹ Λ GFT` has a spectral counterpart `M = GFT Λ* GFT⁻¹`. Sampling a
//! signal with the vertex indicator `δ` acts in frequency as a filter `P_δ(M)`, and a bandlimited
//! signal is recovered from its samples by a reconstruction filter `Q` followed by an ideal lowpass.
//!
//! ```
//! use gsp_sampling::{graphs, pipeline, reconstruction::QStrategy, sampling::SamplingScheme, spectral};
//!
//! let g = graphs::star_graph(5).unwrap();
//! let basis = spectral::spectral_basis(&g).unwrap();
//! let scheme = SamplingScheme::new(5, &[0, 1], &[0, 1]).unwrap();
//! let s = spectral::GraphSignal::from_real(&[-2.0, 3.0, 3.0, 3.0, 3.0]);
//! let run = pipeline::run_pipeline(&basis, &scheme, QStrategy::BlockInverse, &s, 1e-7).unwrap();
//! assert!(run.report.passed);
//! ```

pub mod decimation;
pub mod error;
pub mod filters;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod reconstruction;
pub mod sampling;
pub mod spectral;

pub use error::{GspError, Result};
pub use filters::{PolyFilter, ShiftDomain};
pub use graphs::Graph;
pub use linalg::{CMatrix, CVector, C64};
pub use reconstruction::{QStrategy, ReconstructionPlan};
pub use sampling::SamplingScheme;
pub use spectral::{GraphSignal, SpectralBasis, Spectrum};
