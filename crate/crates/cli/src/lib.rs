//! Dataset manifests, pipeline runs and report files for the `osmvc` binary.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use osmvc_core::graph::ViewMatrix;
use osmvc_core::metrics::{evaluate, Scores};
use osmvc_core::pipeline::{cluster_views, PipelineConfig};
use osmvc_core::solver::ClusteringResult;
use osmvc_core::synth::{gaussian_blobs, BlobSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: file not found")]
    MissingFile { path: PathBuf },
    #[error("{path}: parse error at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: expected {expected} rows, found {got}")]
    RowCountMismatch {
        path: PathBuf,
        expected: usize,
        got: usize,
    },
    #[error("{path}: invalid manifest: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] osmvc_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// JSON manifest. Relative paths resolve against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub views: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
    pub clusters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub views: Vec<ViewMatrix>,
    pub labels: Option<Vec<usize>>,
    pub clusters: usize,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| {
        if source.kind() == io::ErrorKind::NotFound {
            CliError::MissingFile {
                path: path.to_path_buf(),
            }
        } else {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a headerless CSV of floats, one sample per row.
pub fn read_matrix(path: &Path) -> Result<ViewMatrix> {
    let mut data = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for (idx, record) in csv_reader(path)?.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| parse_err(path, line, e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected {c} fields, found {}", record.len()),
                ))
            }
            _ => {}
        }
        for field in record.iter() {
            let x: f64 = field
                .parse()
                .map_err(|_| parse_err(path, line, format!("not a number: {field:?}")))?;
            if !x.is_finite() {
                return Err(parse_err(path, line, format!("non-finite value {field:?}")));
            }
            data.push(x);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(path, 0, "no rows"))?;
    Ok(ViewMatrix::from_rows(rows, cols, &data)?)
}

/// Reads one integer label per line.
pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let mut labels = Vec::new();
    for (idx, record) in csv_reader(path)?.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| parse_err(path, line, e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 1 {
            return Err(parse_err(path, line, "expected one label per line"));
        }
        let label = record[0]
            .parse()
            .map_err(|_| parse_err(path, line, format!("not a label: {:?}", &record[0])))?;
        labels.push(label);
    }
    Ok(labels)
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let manifest: DatasetManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    if manifest.views.is_empty() || manifest.clusters == 0 {
        return Err(CliError::Manifest {
            path: path.to_path_buf(),
            message: "need at least one view and a positive cluster count".into(),
        });
    }
    Ok(manifest)
}

/// Loads every view (and the labels, if listed) named by the manifest.
pub fn load_dataset(manifest_path: &Path) -> Result<Dataset> {
    let manifest = read_manifest(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut views = Vec::with_capacity(manifest.views.len());
    let mut expected = None;
    for rel in &manifest.views {
        let path = base.join(rel);
        let view = read_matrix(&path)?;
        let n = *expected.get_or_insert(view.samples());
        if view.samples() != n {
            return Err(CliError::RowCountMismatch {
                path,
                expected: n,
                got: view.samples(),
            });
        }
        views.push(view);
    }
    let n = views[0].samples();
    let labels = match &manifest.labels {
        Some(rel) => {
            let path = base.join(rel);
            let labels = read_labels(&path)?;
            if labels.len() != n {
                return Err(CliError::RowCountMismatch {
                    path,
                    expected: n,
                    got: labels.len(),
                });
            }
            Some(labels)
        }
        None => None,
    };
    Ok(Dataset {
        name: manifest.name,
        views,
        labels,
        clusters: manifest.clusters,
    })
}

/// The run parameters as they appear in `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub clusters: usize,
    pub anchor_rate: f64,
    pub anchors: Option<usize>,
    pub knn: usize,
    pub normalize: bool,
    pub lambda1: f64,
    pub lambda2: f64,
    pub p: f64,
    pub mu_init: f64,
    pub mu_max: f64,
    pub eta: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl ConfigEcho {
    pub fn new(clusters: usize, cfg: &PipelineConfig) -> Self {
        let p = &cfg.problem;
        Self {
            clusters,
            anchor_rate: cfg.anchor_rate,
            anchors: cfg.anchors,
            knn: cfg.knn,
            normalize: cfg.normalize,
            lambda1: p.lambda1,
            lambda2: p.lambda2,
            p: p.p,
            mu_init: p.mu_init,
            mu_max: p.mu_max,
            eta: p.eta,
            tol: p.tol,
            max_iter: p.max_iter,
            seed: p.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub acc: f64,
    pub nmi: f64,
    pub purity: f64,
}

impl From<Scores> for MetricsReport {
    fn from(s: Scores) -> Self {
        Self {
            acc: s.acc,
            nmi: s.nmi,
            purity: s.purity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub config: ConfigEcho,
    pub samples: usize,
    pub views: usize,
    pub anchors: usize,
    pub iterations: usize,
    pub converged: bool,
    pub degenerate_g_updates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    pub wall_time_secs: f64,
}

/// Runs the pipeline on a loaded dataset. `clusters` overrides the manifest.
pub fn run_pipeline(
    data: &Dataset,
    clusters: Option<usize>,
    cfg: &PipelineConfig,
) -> Result<(RunReport, ClusteringResult)> {
    let c = clusters.unwrap_or(data.clusters);
    let start = Instant::now();
    let out = cluster_views(&data.views, c, cfg)?;
    let metrics = match &data.labels {
        Some(truth) => Some(evaluate(&out.result.labels, truth)?.into()),
        None => None,
    };
    let report = RunReport {
        dataset: data.name.clone(),
        config: ConfigEcho::new(c, cfg),
        samples: data.views[0].samples(),
        views: data.views.len(),
        anchors: out.anchors,
        iterations: out.result.iterations,
        converged: out.result.converged,
        degenerate_g_updates: out.result.degenerate_g_updates,
        metrics,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    Ok((report, out.result))
}

fn create(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_io(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: path.to_path_buf(),
        source: io::Error::other(e),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Writes `labels.csv`, `anchors_labels.csv`, `metrics.json`, `trace.csv`
/// and `report.json` into `out_dir`, creating it if needed.
///
/// Floats use Rust's shortest round-trip formatting, so every value re-parses
/// to the same `f64`. `metrics.json` holds `{}` when no truth labels were given
/// and never includes wall time, so it is byte-stable across runs.
pub fn write_outputs(out_dir: &Path, result: &ClusteringResult, report: &RunReport) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let path = out_dir.join("labels.csv");
    let mut w = create(&path)?;
    let err = csv_io(&path);
    w.write_record(["sample_index", "label"]).map_err(&err)?;
    for (i, label) in result.labels.iter().enumerate() {
        w.write_record([i.to_string(), label.to_string()]).map_err(&err)?;
    }
    w.flush().map_err(io_err(&path))?;

    let path = out_dir.join("anchors_labels.csv");
    let mut w = create(&path)?;
    let err = csv_io(&path);
    w.write_record(["view", "anchor_index", "label"]).map_err(&err)?;
    for (v, labels) in result.anchor_labels.iter().enumerate() {
        for (j, label) in labels.iter().enumerate() {
            w.write_record([(v + 1).to_string(), j.to_string(), label.to_string()])
                .map_err(&err)?;
        }
    }
    w.flush().map_err(io_err(&path))?;

    let path = out_dir.join("trace.csv");
    let mut w = create(&path)?;
    let err = csv_io(&path);
    let mut header: Vec<String> = ["iter", "r1", "r2", "r3", "r4", "objective"]
        .map(String::from)
        .to_vec();
    header.extend((1..=report.views).map(|v| format!("alpha_{v}")));
    w.write_record(&header).map_err(&err)?;
    for rec in &result.trace {
        let mut row = vec![rec.iteration.to_string()];
        row.extend(rec.residuals.0.iter().map(f64::to_string));
        row.push(rec.objective.to_string());
        row.extend(rec.alpha.iter().map(f64::to_string));
        w.write_record(&row).map_err(&err)?;
    }
    w.flush().map_err(io_err(&path))?;

    let metrics = match &report.metrics {
        Some(m) => serde_json::to_value(m).expect("plain struct"),
        None => serde_json::json!({}),
    };
    write_json(&out_dir.join("metrics.json"), &metrics)?;
    write_json(&out_dir.join("report.json"), report)
}

/// Writes a headerless CSV with full round-trip precision.
pub fn write_matrix(path: &Path, view: &ViewMatrix) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(fs::File::create(path).map_err(io_err(path))?);
    let m = view.matrix();
    for row in m.row_iter() {
        w.write_record(row.iter().map(f64::to_string))
            .map_err(csv_io(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes a synthetic blob dataset (`view_<v>.csv`, `labels.csv`,
/// `manifest.json`) into `dir` and returns the manifest path.
pub fn write_blob_dataset(dir: &Path, spec: &BlobSpec) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let (views, truth) = gaussian_blobs(spec);
    let mut names = Vec::new();
    for (v, view) in views.iter().enumerate() {
        let name = PathBuf::from(format!("view_{}.csv", v + 1));
        write_matrix(&dir.join(&name), view)?;
        names.push(name);
    }
    let labels = dir.join("labels.csv");
    let text: String = truth.iter().map(|l| format!("{l}\n")).collect();
    fs::write(&labels, text).map_err(io_err(&labels))?;
    let manifest = DatasetManifest {
        name: format!("blobs-seed{}", spec.seed),
        views: names,
        labels: Some("labels.csv".into()),
        clusters: spec.clusters,
    };
    let path = dir.join("manifest.json");
    write_json(&path, &manifest)?;
    Ok(path)
}
