//! Seeded synthetic multi-view Gaussian blobs.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::graph::ViewMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub samples: usize,
    pub clusters: usize,
    pub views: usize,
    pub dim: usize,
    /// Distance between any two cluster centres, in units of the noise
    /// standard deviation.
    pub separation: f64,
    /// Fraction of samples, drawn independently per view, that are moved to
    /// the midpoint between their own centre and another cluster's centre.
    pub bridge_fraction: f64,
    pub seed: u64,
}

impl Default for BlobSpec {
    fn default() -> Self {
        Self {
            samples: 300,
            clusters: 3,
            views: 3,
            dim: 10,
            separation: 6.0,
            bridge_fraction: 0.0,
            seed: 0,
        }
    }
}

/// Views and 1-based ground-truth labels. Sample `i` belongs to cluster
/// `i % clusters`. Centres sit on scaled coordinate axes (pairwise distance
/// `separation`), with a per-view random choice of axes.
pub fn gaussian_blobs(spec: &BlobSpec) -> (Vec<ViewMatrix>, Vec<usize>) {
    assert!(spec.dim >= spec.clusters, "need at least one axis per cluster");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let truth: Vec<usize> = (0..spec.samples).map(|i| i % spec.clusters + 1).collect();
    let scale = spec.separation / std::f64::consts::SQRT_2;
    let views = (0..spec.views)
        .map(|_| {
            let mut axes: Vec<usize> = (0..spec.dim).collect();
            axes.shuffle(&mut rng);
            let centre = |k: usize| {
                let mut c = vec![0.0; spec.dim];
                c[axes[k]] = scale;
                c
            };
            let bridged = (spec.bridge_fraction * spec.samples as f64).round() as usize;
            let mut order: Vec<usize> = (0..spec.samples).collect();
            order.shuffle(&mut rng);
            let mut partner = vec![None; spec.samples];
            for &i in order.iter().take(bridged) {
                if spec.clusters > 1 {
                    let own = truth[i] - 1;
                    let other = (own + rng.gen_range(1..spec.clusters)) % spec.clusters;
                    partner[i] = Some(other);
                }
            }
            let mut data = DMatrix::zeros(spec.samples, spec.dim);
            for i in 0..spec.samples {
                let own = centre(truth[i] - 1);
                let mean: Vec<f64> = match partner[i] {
                    Some(o) => own.iter().zip(centre(o)).map(|(a, b)| 0.5 * (a + b)).collect(),
                    None => own,
                };
                for (f, mu) in mean.iter().enumerate() {
                    let z: f64 = rng.sample(StandardNormal);
                    data[(i, f)] = mu + z;
                }
            }
            ViewMatrix::new(data).expect("finite samples")
        })
        .collect();
    (views, truth)
}
