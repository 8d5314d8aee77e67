//! Augmented-Lagrangian solver for the transition-probability clustering model.
//!
//! Per view `v` the model couples a sample soft-label matrix `G_v` (`n x c`,
//! orthonormal columns) with an anchor-to-category matrix `H_v` (`m x c`)
//! through `||S_v H_v - G_v||_F^2 / alpha_v`. Splits `F_v = G_v` (non-negative)
//! and `Q_v = H_v` (row-stochastic) carry the constraints, and the stacked
//! tensors `G` (`n x V x c`) and `H` (`m x V x c`) are tied to low-Schatten-p
//! copies `J` and `A`.
//!
//! One iteration updates, in order: G, H, F, Q, J, A, alpha, the four
//! multipliers, and the four penalties.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::AnchorGraph;
use crate::tensor::{schatten_p_norm_pow, schatten_prox, Tensor3};

/// Reciprocal view weights use `max(alpha, ALPHA_FLOOR)`.
pub const ALPHA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
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

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            lambda1: 100.0,
            lambda2: 100.0,
            p: 0.8,
            mu_init: 1e-3,
            mu_max: 1e9,
            eta: 1.1,
            tol: 1e-6,
            max_iter: 200,
            seed: 0,
        }
    }
}

impl ProblemConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.lambda1) || !positive(self.lambda2) {
            return Err(Error::InvalidConfig(format!(
                "lambda1 and lambda2 must be positive, got {} and {}",
                self.lambda1, self.lambda2
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidP(self.p));
        }
        if !positive(self.tol) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if !positive(self.mu_init) || self.mu_max.is_nan() || self.mu_max < self.mu_init || self.eta.is_nan() || self.eta < 1.0 {
            return Err(Error::InvalidConfig(
                "penalty schedule needs 0 < mu_init <= mu_max and eta >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// The four consensus residuals `max|G-F|`, `max|H-Q|`, `max|G-J|`, `max|H-A|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals(pub [f64; 4]);

impl Residuals {
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub residuals: Residuals,
    pub objective: f64,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// Weighted fusion of the per-view `G_v`, `n x c`.
    pub fused: DMatrix<f64>,
    /// Hard labels in `1..=c`.
    pub labels: Vec<usize>,
    /// Per view, the argmax label (in `1..=c`) of every anchor row of `H_v`.
    pub anchor_labels: Vec<Vec<usize>>,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub iterations: usize,
    /// Number of G updates where some `B_v` had rank below `c`.
    pub degenerate_g_updates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub g: Vec<DMatrix<f64>>,
    pub h: Vec<DMatrix<f64>>,
    pub f: Vec<DMatrix<f64>>,
    pub q: Vec<DMatrix<f64>>,
    pub y1: Vec<DMatrix<f64>>,
    pub y2: Vec<DMatrix<f64>>,
    /// `n x V x c`
    pub j: Tensor3,
    /// `n x V x c`
    pub y3: Tensor3,
    /// `m x V x c`
    pub a: Tensor3,
    /// `m x V x c`
    pub y4: Tensor3,
    pub alpha: Vec<f64>,
    pub mu: [f64; 4],
    pub iteration: usize,
}

fn inv_weight(alpha: f64) -> f64 {
    1.0 / alpha.max(ALPHA_FLOOR)
}

fn check_graphs(graphs: &[AnchorGraph]) -> Result<(usize, usize)> {
    let first = graphs
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no anchor graphs".into()))?;
    let (n, m) = (first.samples(), first.anchors());
    for (v, s) in graphs.iter().enumerate() {
        if (s.samples(), s.anchors()) != (n, m) {
            return Err(Error::ShapeMismatch(format!(
                "graph {v} is {}x{}, expected {n}x{m}",
                s.samples(),
                s.anchors()
            )));
        }
    }
    Ok((n, m))
}

/// Seeded random row-stochastic `m x c` matrix with strictly positive entries.
pub fn random_row_stochastic(m: usize, c: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut h = DMatrix::from_fn(m, c, |_, _| rng.gen_range(f64::EPSILON..1.0));
    for mut row in h.row_iter_mut() {
        let s = row.sum();
        row /= s;
    }
    h
}

/// Maximizer of `tr(G^T B)` over matrices with orthonormal columns: `U V^T`
/// from the thin SVD of `B`. The flag reports a rank-deficient `B`.
pub fn procrustes(b: &DMatrix<f64>) -> (DMatrix<f64>, bool) {
    let svd = b.clone().svd(true, true);
    let sv = &svd.singular_values;
    let top = sv.max();
    let degenerate = sv.len() < b.ncols() || sv.min() <= 1e-12 * top.max(f64::MIN_POSITIVE);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    (u * v_t, degenerate)
}

/// Euclidean projection onto `{q : q >= 0, sum q = 1}` by the sort-based
/// pivot rule: `q = (v - theta)_+`.
pub fn project_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (idx, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (idx + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    Ok(v.iter().map(|x| (x - theta).max(0.0)).collect())
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Index of the row maximum; ties go to the lowest index.
fn argmax(row: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (idx, x) in row.enumerate() {
        if x > best_val {
            best_val = x;
            best = idx;
        }
    }
    best
}

impl SolverState {
    /// Zeroed splits and multipliers, uniform view weights, `mu_i = mu_init`,
    /// and a seeded random row-stochastic `H_v`. `G_v` starts at zero and is
    /// set by the first G update.
    pub fn init(graphs: &[AnchorGraph], c: usize, cfg: &ProblemConfig) -> Result<Self> {
        let (_, m) = check_graphs(graphs)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let h = (0..graphs.len())
            .map(|_| random_row_stochastic(m, c, &mut rng))
            .collect();
        Self::with_initial_h(graphs, c, cfg, h)
    }

    /// Like [`SolverState::init`] but with caller-supplied `H_v`.
    pub fn with_initial_h(
        graphs: &[AnchorGraph],
        c: usize,
        cfg: &ProblemConfig,
        h: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        cfg.validate()?;
        let (n, m) = check_graphs(graphs)?;
        if c == 0 {
            return Err(Error::InvalidConfig("cluster count must be positive".into()));
        }
        if m < c {
            return Err(Error::TooFewAnchors { m, c });
        }
        let views = graphs.len();
        if h.len() != views || h.iter().any(|x| x.shape() != (m, c)) {
            return Err(Error::ShapeMismatch(format!(
                "initial H must be {views} matrices of {m}x{c}"
            )));
        }
        let zeros = |rows: usize| vec![DMatrix::zeros(rows, c); views];
        Ok(Self {
            g: zeros(n),
            h,
            f: zeros(n),
            q: zeros(m),
            y1: zeros(n),
            y2: zeros(m),
            j: Tensor3::zeros(n, views, c),
            y3: Tensor3::zeros(n, views, c),
            a: Tensor3::zeros(m, views, c),
            y4: Tensor3::zeros(m, views, c),
            alpha: vec![1.0 / views as f64; views],
            mu: [cfg.mu_init; 4],
            iteration: 0,
        })
    }

    pub fn views(&self) -> usize {
        self.g.len()
    }

    pub fn clusters(&self) -> usize {
        self.g[0].ncols()
    }

    /// `G` stacked as the `n x V x c` tensor (view `v` = lateral slice `v`).
    pub fn sample_tensor(&self) -> Tensor3 {
        Tensor3::from_lateral_slices(&self.g).expect("views share shape")
    }

    /// `H` stacked as the `m x V x c` tensor.
    pub fn anchor_tensor(&self) -> Tensor3 {
        Tensor3::from_lateral_slices(&self.h).expect("views share shape")
    }

    /// `B_v = (2/alpha_v) S_v H_v + mu1 (F_v - Y1_v/mu1) + mu3 (J_v - Y3_v/mu3)`.
    pub fn g_target(&self, graphs: &[AnchorGraph], v: usize) -> DMatrix<f64> {
        let [mu1, _, mu3, _] = self.mu;
        let sh = graphs[v].mul(&self.h[v]);
        let j_v = self.j.lateral_slice(v);
        let y3_v = self.y3.lateral_slice(v);
        sh * (2.0 * inv_weight(self.alpha[v])) + (&self.f[v] * mu1 - &self.y1[v])
            + (j_v * mu3 - y3_v)
    }

    /// Orthogonal Procrustes step per view. Returns the views whose `B_v` was
    /// rank-deficient; their `G_v` is still a valid orthonormal factor.
    pub fn update_g(&mut self, graphs: &[AnchorGraph]) -> Vec<usize> {
        let mut degenerate = Vec::new();
        for v in 0..self.views() {
            let b = self.g_target(graphs, v);
            let (g, flag) = procrustes(&b);
            if flag {
                degenerate.push(v);
            }
            self.g[v] = g;
        }
        degenerate
    }

    /// The normal equations `C_v H_v = D_v` of the H subproblem.
    pub fn h_system(&self, graphs: &[AnchorGraph], v: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        let [_, mu2, _, mu4] = self.mu;
        let w = inv_weight(self.alpha[v]);
        let m = graphs[v].anchors();
        let c = graphs[v].gram() * w + DMatrix::identity(m, m) * ((mu2 + mu4) / 2.0);
        let a_v = self.a.lateral_slice(v);
        let y4_v = self.y4.lateral_slice(v);
        let d = graphs[v].transpose_mul(&self.g[v]) * w
            + (&self.q[v] * mu2 - &self.y2[v]) * 0.5
            + (a_v * mu4 - y4_v) * 0.5;
        (c, d)
    }

    /// Solves the SPD system for every view by Cholesky.
    pub fn update_h(&mut self, graphs: &[AnchorGraph]) -> Result<()> {
        for v in 0..self.views() {
            let (c, d) = self.h_system(graphs, v);
            let chol = c.cholesky().ok_or(Error::SingularSystem { view: v })?;
            self.h[v] = chol.solve(&d);
        }
        Ok(())
    }

    /// `F_v = max(G_v + Y1_v / mu1, 0)`.
    pub fn update_f(&mut self) {
        let mu1 = self.mu[0];
        for v in 0..self.views() {
            self.f[v] = (&self.g[v] + &self.y1[v] / mu1).map(|x| x.max(0.0));
        }
    }

    /// Each row of `Q_v` is the simplex projection of the matching row of
    /// `H_v + Y2_v / mu2`.
    pub fn update_q(&mut self) {
        let mu2 = self.mu[1];
        for v in 0..self.views() {
            let target = &self.h[v] + &self.y2[v] / mu2;
            let mut q = DMatrix::zeros(target.nrows(), target.ncols());
            for (i, row) in target.row_iter().enumerate() {
                let values: Vec<f64> = row.iter().copied().collect();
                let projected = project_simplex(&values).expect("c >= 1");
                for (k, x) in projected.into_iter().enumerate() {
                    q[(i, k)] = x;
                }
            }
            self.q[v] = q;
        }
    }

    /// `J = prox_{(lambda1/mu3) ||.||_Sp^p}(G + Y3/mu3)`.
    pub fn update_j(&mut self, cfg: &ProblemConfig) -> Result<()> {
        let mu3 = self.mu[2];
        let z = self.sample_tensor().add_scaled(1.0 / mu3, &self.y3);
        self.j = schatten_prox(&z, cfg.lambda1 / mu3, cfg.p)?;
        Ok(())
    }

    /// `A = prox_{(lambda2/mu4) ||.||_Sp^p}(H + Y4/mu4)`.
    pub fn update_a(&mut self, cfg: &ProblemConfig) -> Result<()> {
        let mu4 = self.mu[3];
        let z = self.anchor_tensor().add_scaled(1.0 / mu4, &self.y4);
        self.a = schatten_prox(&z, cfg.lambda2 / mu4, cfg.p)?;
        Ok(())
    }

    /// Per-view reconstruction errors `T_v = ||S_v H_v - G_v||_F^2`.
    pub fn reconstruction_errors(&self, graphs: &[AnchorGraph]) -> Vec<f64> {
        (0..self.views())
            .map(|v| (graphs[v].mul(&self.h[v]) - &self.g[v]).norm_squared())
            .collect()
    }

    /// `alpha_v = sqrt(T_v) / sum_u sqrt(T_u)`; uniform when every `T_v`
    /// vanishes.
    pub fn update_alpha(&mut self, graphs: &[AnchorGraph]) {
        self.alpha = alpha_from_errors(&self.reconstruction_errors(graphs));
    }

    pub fn update_multipliers(&mut self) {
        let [mu1, mu2, mu3, mu4] = self.mu;
        for v in 0..self.views() {
            self.y1[v] += (&self.g[v] - &self.f[v]) * mu1;
            self.y2[v] += (&self.h[v] - &self.q[v]) * mu2;
        }
        let g = self.sample_tensor();
        let h = self.anchor_tensor();
        self.y3.axpy(mu3, &g.add_scaled(-1.0, &self.j));
        self.y4.axpy(mu4, &h.add_scaled(-1.0, &self.a));
    }

    /// `mu_i = min(eta mu_i, mu_max)`.
    pub fn update_penalties(&mut self, cfg: &ProblemConfig) {
        for mu in self.mu.iter_mut() {
            *mu = (*mu * cfg.eta).min(cfg.mu_max);
        }
    }

    pub fn residuals(&self) -> Residuals {
        let r1 = (0..self.views())
            .map(|v| max_abs_diff(&self.g[v], &self.f[v]))
            .fold(0.0, f64::max);
        let r2 = (0..self.views())
            .map(|v| max_abs_diff(&self.h[v], &self.q[v]))
            .fold(0.0, f64::max);
        let r3 = self.sample_tensor().max_abs_diff(&self.j);
        let r4 = self.anchor_tensor().max_abs_diff(&self.a);
        Residuals([r1, r2, r3, r4])
    }

    /// `sum_v T_v / alpha_v + lambda1 ||G||_Sp^p + lambda2 ||H||_Sp^p`.
    pub fn objective(&self, graphs: &[AnchorGraph], cfg: &ProblemConfig) -> Result<f64> {
        let fit: f64 = self
            .reconstruction_errors(graphs)
            .iter()
            .zip(&self.alpha)
            .map(|(t, &a)| t * inv_weight(a))
            .sum();
        let g_norm = schatten_p_norm_pow(&self.sample_tensor(), cfg.p)?;
        let h_norm = schatten_p_norm_pow(&self.anchor_tensor(), cfg.p)?;
        Ok(fit + cfg.lambda1 * g_norm + cfg.lambda2 * h_norm)
    }

    /// `G = (sum_v G_v / alpha_v) / (sum_v 1 / alpha_v)`.
    pub fn fused_labels(&self) -> DMatrix<f64> {
        let weights: Vec<f64> = self.alpha.iter().map(|&a| inv_weight(a)).collect();
        let total: f64 = weights.iter().sum();
        let mut fused = DMatrix::zeros(self.g[0].nrows(), self.g[0].ncols());
        for (g, w) in self.g.iter().zip(&weights) {
            fused += g * (w / total);
        }
        fused
    }

    /// Fuses the views and takes row argmaxes (1-based, lowest index on ties).
    pub fn fuse_and_label(&self) -> (DMatrix<f64>, Vec<usize>, Vec<Vec<usize>>) {
        let fused = self.fused_labels();
        let labels = fused
            .row_iter()
            .map(|row| argmax(row.iter().copied()) + 1)
            .collect();
        let anchor_labels = self
            .h
            .iter()
            .map(|h| h.row_iter().map(|row| argmax(row.iter().copied()) + 1).collect())
            .collect();
        (fused, labels, anchor_labels)
    }

    /// One full sweep of the update rules. Returns the number of views with a
    /// rank-deficient Procrustes target.
    pub fn step(&mut self, graphs: &[AnchorGraph], cfg: &ProblemConfig) -> Result<usize> {
        let degenerate = self.update_g(graphs).len();
        self.update_h(graphs)?;
        self.update_f();
        self.update_q();
        self.update_j(cfg)?;
        self.update_a(cfg)?;
        self.update_alpha(graphs);
        self.update_multipliers();
        self.update_penalties(cfg);
        self.iteration += 1;
        Ok(degenerate)
    }
}

/// Closed-form view weights from reconstruction errors.
pub fn alpha_from_errors(errors: &[f64]) -> Vec<f64> {
    if errors.iter().all(|&t| t <= 1e-24) {
        return vec![1.0 / errors.len() as f64; errors.len()];
    }
    let roots: Vec<f64> = errors.iter().map(|t| t.max(0.0).sqrt()).collect();
    let total: f64 = roots.iter().sum();
    roots.iter().map(|r| r / total).collect()
}

/// Runs the solver from a prepared state until the largest residual drops
/// below `cfg.tol` or `cfg.max_iter` sweeps are done.
pub fn run_from(
    mut state: SolverState,
    graphs: &[AnchorGraph],
    cfg: &ProblemConfig,
) -> Result<ClusteringResult> {
    cfg.validate()?;
    let mut trace = Vec::with_capacity(cfg.max_iter);
    let mut converged = false;
    let mut degenerate_g_updates = 0;
    while state.iteration < cfg.max_iter {
        if state.step(graphs, cfg)? > 0 {
            degenerate_g_updates += 1;
        }
        let residuals = state.residuals();
        trace.push(IterationRecord {
            iteration: state.iteration,
            residuals,
            objective: state.objective(graphs, cfg)?,
            alpha: state.alpha.clone(),
        });
        if residuals.max() < cfg.tol {
            converged = true;
            break;
        }
    }
    let (fused, labels, anchor_labels) = state.fuse_and_label();
    Ok(ClusteringResult {
        fused,
        labels,
        anchor_labels,
        trace,
        converged,
        iterations: state.iteration,
        degenerate_g_updates,
    })
}

/// Initializes and runs the solver on per-view anchor graphs.
pub fn run(graphs: &[AnchorGraph], c: usize, cfg: &ProblemConfig) -> Result<ClusteringResult> {
    let state = SolverState::init(graphs, c, cfg)?;
    run_from(state, graphs, cfg)
}
