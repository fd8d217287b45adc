//! Copula graphons: Archimedean copulas as random-graph kernels, W-random
//! graph sampling, motif counts and degree assortativity, homomorphism
//! densities by quadrature, and calibration of copula parameters to a target
//! assortativity or motif density.

pub mod calibration;
pub mod copula;
pub mod density;
pub mod edgelist;
pub mod error;
pub mod graph;
pub mod graphon;
pub mod metrics;
pub mod quadrature;
pub mod report;
pub mod sampler;
pub mod sweep;

pub use copula::{Copula, CopulaFamily, CopulaSpec};
pub use density::{density_report, theoretical_assortativity, DensityReport};
pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use graphon::{Graphon, GraphonTemplate, KernelKind};
pub use metrics::{MetricsReport, Motif, SubgraphCounts};
pub use sampler::{derive_seed, sample, sample_batch, SampledGraph};
