//! Multi-view clustering through transition probabilities.
//!
//! Each view's anchor graph is a sample-to-anchor transition matrix `S_v`.
//! The solver learns anchor-to-category transitions `H_v` and sample soft
//! labels `G_v`, couples the views through a tensor Schatten p-norm on the
//! stacked `G` and `H`, and fuses the views into hard labels.
//!
//! ```
//! use osmvc_core::pipeline::{cluster_views, PipelineConfig};
//! use osmvc_core::synth::{gaussian_blobs, BlobSpec};
//!
//! let (views, truth) = gaussian_blobs(&BlobSpec { samples: 150, ..BlobSpec::default() });
//! let mut cfg = PipelineConfig::default();
//! // small data sets want a much lighter tensor penalty than the default 100
//! cfg.problem.lambda1 = 3.0;
//! cfg.problem.lambda2 = 3.0;
//! let out = cluster_views(&views, 3, &cfg).unwrap();
//! let acc = osmvc_core::metrics::acc(&out.result.labels, &truth).unwrap();
//! assert!(acc > 0.9);
//! ```

pub mod error;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod solver;
pub mod synth;
pub mod tensor;

pub use error::{Error, Result};
