use osmvc_core::metrics::evaluate;
use osmvc_core::pipeline::{cluster_views, PipelineConfig};
use osmvc_core::synth::{gaussian_blobs, BlobSpec};

#[test]
fn residuals_shrink_over_the_run() {
    for seed in 0..3 {
        let (views, _) = gaussian_blobs(&BlobSpec {
            seed,
            ..BlobSpec::default()
        });
        let cfg = PipelineConfig {
            anchors: Some(30),
            ..PipelineConfig::default()
        };
        let out = cluster_views(&views, 3, &cfg).unwrap();
        let trace = &out.result.trace;
        assert!(trace.last().unwrap().residuals.max() < trace[9].residuals.max());
    }
}

#[test]
fn light_penalty_recovers_blobs() {
    let (views, truth) = gaussian_blobs(&BlobSpec {
        seed: 4,
        ..BlobSpec::default()
    });
    let mut cfg = PipelineConfig {
        anchors: Some(30),
        ..PipelineConfig::default()
    };
    cfg.problem.lambda1 = 3.0;
    cfg.problem.lambda2 = 3.0;
    cfg.problem.seed = 4;
    let out = cluster_views(&views, 3, &cfg).unwrap();
    let s = evaluate(&out.result.labels, &truth).unwrap();
    assert!(s.acc > 0.95, "acc {}", s.acc);
    assert!(out.result.anchor_labels.iter().all(|l| l.len() == 30));
}
