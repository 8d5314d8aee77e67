//! Views in, labels out: normalize, pick anchors, build graphs, solve.

use crate::error::{Error, Result};
use crate::graph::{
    default_anchor_count, knn_simplex_graph, pairwise_sqdist, select_anchors, AnchorGraph,
    ViewMatrix,
};
use crate::solver::{self, ClusteringResult, ProblemConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub problem: ProblemConfig,
    /// Anchors as a fraction of the sample count (ignored when `anchors` is set).
    pub anchor_rate: f64,
    pub anchors: Option<usize>,
    pub knn: usize,
    pub normalize: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig::default(),
            anchor_rate: 0.1,
            anchors: None,
            knn: 5,
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub anchors: usize,
    pub graphs: Vec<AnchorGraph>,
    pub result: ClusteringResult,
}

/// Builds the per-view anchor graphs.
pub fn build_graphs(views: &[ViewMatrix], c: usize, cfg: &PipelineConfig) -> Result<Vec<AnchorGraph>> {
    let n = views
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no views".into()))?
        .samples();
    if !(cfg.anchor_rate > 0.0 && cfg.anchor_rate <= 1.0) && cfg.anchors.is_none() {
        return Err(Error::InvalidConfig(format!(
            "anchor rate must lie in (0, 1], got {}",
            cfg.anchor_rate
        )));
    }
    let m = cfg
        .anchors
        .unwrap_or_else(|| default_anchor_count(n, c, cfg.anchor_rate));
    let prepared: Vec<ViewMatrix> = if cfg.normalize {
        views.iter().map(ViewMatrix::min_max_normalized).collect()
    } else {
        views.to_vec()
    };
    let anchors = select_anchors(&prepared, m, cfg.problem.seed)?;
    prepared
        .iter()
        .zip(&anchors)
        .map(|(view, a)| knn_simplex_graph(&pairwise_sqdist(view, a)?, cfg.knn))
        .collect()
}

pub fn cluster_views(views: &[ViewMatrix], c: usize, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let graphs = build_graphs(views, c, cfg)?;
    let result = solver::run(&graphs, c, &cfg.problem)?;
    Ok(PipelineOutput {
        anchors: graphs[0].anchors(),
        graphs,
        result,
    })
}
