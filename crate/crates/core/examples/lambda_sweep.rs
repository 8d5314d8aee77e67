//! Median ACC/NMI and converged-run count on the blob suite across a grid of
//! regularizer weights.
//!
//! cargo run --release -p osmvc-core --example lambda_sweep -- [p] [bridge]

use osmvc_core::metrics::evaluate;
use osmvc_core::pipeline::{cluster_views, PipelineConfig};
use osmvc_core::synth::{gaussian_blobs, BlobSpec};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    (v[(v.len() - 1) / 2] + v[v.len() / 2]) / 2.0
}

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("number"));
    let p = args.next().unwrap_or(0.8);
    let bridge = args.next().unwrap_or(0.0);
    println!("p = {p}, bridge = {bridge}");
    println!("{:>8} {:>8} {:>8} {:>10}", "lambda", "acc", "nmi", "converged");
    for lambda in [0.1, 1.0, 3.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let (mut accs, mut nmis, mut converged) = (vec![], vec![], 0);
        for seed in 0..10 {
            let (views, truth) = gaussian_blobs(&BlobSpec {
                bridge_fraction: bridge,
                seed,
                ..BlobSpec::default()
            });
            let mut cfg = PipelineConfig {
                anchors: Some(30),
                ..PipelineConfig::default()
            };
            cfg.problem.lambda1 = lambda;
            cfg.problem.lambda2 = lambda;
            cfg.problem.p = p;
            cfg.problem.seed = seed;
            let out = cluster_views(&views, 3, &cfg).expect("valid config");
            let s = evaluate(&out.result.labels, &truth).expect("same length");
            accs.push(s.acc);
            nmis.push(s.nmi);
            converged += out.result.converged as usize;
        }
        println!("{lambda:>8} {:>8.3} {:>8.3} {:>7}/10", median(accs), median(nmis), converged);
    }
}
