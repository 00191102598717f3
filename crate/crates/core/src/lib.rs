//! Random block hypergraphs over finite fields, built from polarity-type
//! bipartite graphs, with the tools to certify that their induced
//! subhypergraphs avoid a forbidden pattern and have small independence number.

pub mod blocks;
pub mod containers;
pub mod error;
pub mod ffield;
pub mod hypergraph;
pub mod independence;
pub mod mask;
pub mod patterns;
pub mod pipeline;
pub mod polarity;
pub mod saturation;
pub mod spectral;

pub use blocks::{binomial, BlockHypergraph};
pub use error::{Error, Result};
pub use ffield::{FieldElement, PrimeModulus};
pub use hypergraph::Hypergraph;
pub use patterns::{make_family, EmbedOutcome, Family, Pattern, PatternAnalysis};
pub use polarity::{GammaReport, PolarityGraph};
pub use spectral::{CubeReport, SpectralCertificate};

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
