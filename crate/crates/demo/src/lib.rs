//! WebAssembly bindings for the static page in `www/`.
//!
//! The page offers three operations: the scalar shrinkage curve behind the
//! Schatten-p prox, the simplex weights one sample gives its nearest anchors,
//! and a full clustering run on synthetic blobs.

use nalgebra::DMatrix;
use osmvc_core::graph::knn_simplex_graph;
use osmvc_core::metrics::evaluate;
use osmvc_core::pipeline::{cluster_views, PipelineConfig};
use osmvc_core::solver::ProblemConfig;
use osmvc_core::synth::{gaussian_blobs, BlobSpec};
use osmvc_core::tensor::gst_scalar;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// `points` values of the shrunk magnitude for sigma evenly spaced on
/// `[0, sigma_max]`.
pub fn shrinkage_curve(tau: f64, p: f64, sigma_max: f64, points: usize) -> osmvc_core::Result<Vec<f64>> {
    let step = if points > 1 { sigma_max / (points - 1) as f64 } else { 0.0 };
    (0..points).map(|i| gst_scalar(i as f64 * step, tau, p)).collect()
}

#[wasm_bindgen(js_name = shrinkageCurve)]
pub fn shrinkage_curve_js(tau: f64, p: f64, sigma_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    shrinkage_curve(tau, p, sigma_max, points).map_err(js_err)
}

/// Weights one sample assigns to anchors at the given squared distances.
pub fn anchor_weights(sq_distances: &[f64], k: usize) -> osmvc_core::Result<Vec<f64>> {
    let dist = DMatrix::from_row_slice(1, sq_distances.len(), sq_distances);
    Ok(knn_simplex_graph(&dist, k)?.to_dense().row(0).iter().copied().collect())
}

#[wasm_bindgen(js_name = anchorWeights)]
pub fn anchor_weights_js(sq_distances: Vec<f64>, k: usize) -> Result<Vec<f64>, JsError> {
    anchor_weights(&sq_distances, k).map_err(js_err)
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct BlobRun {
    xy: Vec<f64>,
    labels: Vec<u32>,
    truth: Vec<u32>,
    residuals: Vec<f64>,
    pub acc: f64,
    pub nmi: f64,
    pub purity: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[wasm_bindgen]
impl BlobRun {
    /// First view projected on its two leading principal axes, interleaved x, y.
    #[wasm_bindgen(getter)]
    pub fn xy(&self) -> Vec<f64> {
        self.xy.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn labels(&self) -> Vec<u32> {
        self.labels.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn truth(&self) -> Vec<u32> {
        self.truth.clone()
    }

    /// Largest of the four residuals per iteration.
    #[wasm_bindgen(getter)]
    pub fn residuals(&self) -> Vec<f64> {
        self.residuals.clone()
    }
}

fn principal_plane(x: &DMatrix<f64>) -> Vec<f64> {
    let mean = x.row_mean();
    let centred = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] - mean[j]);
    let svd = centred.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let axes: Vec<usize> = order.into_iter().take(2).collect();
    let mut xy = Vec::with_capacity(2 * x.nrows());
    for row in centred.row_iter() {
        for &a in &axes {
            xy.push(row.dot(&vt.row(a)));
        }
        if axes.len() < 2 {
            xy.push(0.0);
        }
    }
    xy
}

#[allow(clippy::too_many_arguments)]
pub fn cluster_blobs(
    samples: usize,
    separation: f64,
    bridge: f64,
    lambda: f64,
    p: f64,
    max_iter: usize,
    seed: u64,
) -> osmvc_core::Result<BlobRun> {
    if samples < 30 || !(0.0..=1.0).contains(&bridge) || separation.is_nan() || separation < 0.0 {
        return Err(osmvc_core::Error::InvalidConfig(
            "need at least 30 samples, bridge in [0, 1] and a non-negative separation".into(),
        ));
    }
    let (views, truth) = gaussian_blobs(&BlobSpec {
        samples,
        separation,
        bridge_fraction: bridge,
        seed,
        ..BlobSpec::default()
    });
    let cfg = PipelineConfig {
        problem: ProblemConfig {
            lambda1: lambda,
            lambda2: lambda,
            p,
            max_iter,
            seed,
            ..ProblemConfig::default()
        },
        ..PipelineConfig::default()
    };
    let out = cluster_views(&views, 3, &cfg)?;
    let scores = evaluate(&out.result.labels, &truth)?;
    Ok(BlobRun {
        xy: principal_plane(views[0].matrix()),
        labels: out.result.labels.iter().map(|&l| l as u32).collect(),
        truth: truth.iter().map(|&l| l as u32).collect(),
        residuals: out.result.trace.iter().map(|r| r.residuals.max()).collect(),
        acc: scores.acc,
        nmi: scores.nmi,
        purity: scores.purity,
        iterations: out.result.iterations,
        converged: out.result.converged,
    })
}

#[wasm_bindgen(js_name = clusterBlobs)]
pub fn cluster_blobs_js(
    samples: usize,
    separation: f64,
    bridge: f64,
    lambda: f64,
    p: f64,
    max_iter: usize,
    seed: u32,
) -> Result<BlobRun, JsError> {
    cluster_blobs(samples, separation, bridge, lambda, p, max_iter, seed as u64).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_matches_soft_threshold_at_p_one() {
        let c = shrinkage_curve(1.0, 1.0, 4.0, 5).unwrap();
        assert_eq!(c, vec![0.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(shrinkage_curve(1.0, 1.5, 4.0, 5).is_err());
        assert!(shrinkage_curve(1.0, 0.5, 4.0, 0).unwrap().is_empty());
    }

    #[test]
    fn weights_for_three_anchors() {
        let w = anchor_weights(&[1.0, 2.0, 4.0], 2).unwrap();
        assert!((w[0] - 0.6).abs() < 1e-12 && (w[1] - 0.4).abs() < 1e-12 && w[2] == 0.0);
        assert!(anchor_weights(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn blob_run_shapes() {
        let run = cluster_blobs(60, 6.0, 0.0, 3.0, 0.8, 40, 1).unwrap();
        assert_eq!(run.xy.len(), 120);
        assert_eq!(run.labels.len(), 60);
        assert_eq!(run.residuals.len(), run.iterations);
        assert!(run.labels.iter().all(|l| (1..=3).contains(l)));
        assert!(cluster_blobs(10, 6.0, 0.0, 3.0, 0.8, 5, 1).is_err());
    }
}
