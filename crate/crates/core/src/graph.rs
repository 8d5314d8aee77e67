//! Anchor selection and per-view anchor graphs.
//!
//! Each view yields an `n x m` non-negative, row-stochastic matrix `S` whose
//! row `i` is the probability of sample `i` stepping to each anchor. Rows
//! are k-sparse: only the `k` nearest anchors receive mass.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Samples-by-features data for one view.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewMatrix(DMatrix<f64>);

impl ViewMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(idx));
        }
        Ok(Self(data))
    }

    /// Builds a view from row-major data.
    pub fn from_rows(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn samples(&self) -> usize {
        self.0.nrows()
    }

    pub fn features(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Per-feature min-max scaling to `[0, 1]`. Constant features map to 0.
    pub fn min_max_normalized(&self) -> ViewMatrix {
        let mut out = self.0.clone();
        for mut col in out.column_iter_mut() {
            let lo = col.min();
            let hi = col.max();
            let span = hi - lo;
            if span > 0.0 {
                col.apply(|x| *x = (*x - lo) / span);
            } else {
                col.fill(0.0);
            }
        }
        ViewMatrix(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorSource {
    KMeans,
    Sampled,
}

/// Anchor coordinates in one view's feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    coordinates: DMatrix<f64>,
    source: AnchorSource,
}

impl AnchorSet {
    pub fn new(coordinates: DMatrix<f64>, source: AnchorSource) -> Self {
        Self {
            coordinates,
            source,
        }
    }

    pub fn count(&self) -> usize {
        self.coordinates.nrows()
    }

    pub fn coordinates(&self) -> &DMatrix<f64> {
        &self.coordinates
    }

    pub fn source(&self) -> AnchorSource {
        self.source
    }
}

/// Squared Euclidean distances between every sample and every anchor.
pub fn pairwise_sqdist(x: &ViewMatrix, anchors: &AnchorSet) -> Result<DMatrix<f64>> {
    let a = anchors.coordinates();
    if x.features() != a.ncols() {
        return Err(Error::DimMismatch {
            left: x.features(),
            right: a.ncols(),
        });
    }
    // columns of the transposes are contiguous points
    let xt = x.matrix().transpose();
    let at = a.transpose();
    Ok(DMatrix::from_fn(x.samples(), a.nrows(), |i, j| {
        xt.column(i)
            .iter()
            .zip(at.column(j).iter())
            .map(|(p, q)| (p - q) * (p - q))
            .sum()
    }))
}

/// Default anchor count: `max(c, ceil(rate * n))`, capped at 1024 and at `n`.
pub fn default_anchor_count(n: usize, c: usize, rate: f64) -> usize {
    let by_rate = (rate * n as f64).ceil() as usize;
    by_rate.max(c).min(1024).min(n)
}

/// k-means (seeded k-means++, at most 50 Lloyd iterations) on the
/// concatenated features of all views. Each view's anchors are the matching
/// column block of the centroids.
pub fn select_anchors(views: &[ViewMatrix], m: usize, seed: u64) -> Result<Vec<AnchorSet>> {
    let first = views
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no views".into()))?;
    let n = first.samples();
    if let Some(bad) = views.iter().find(|v| v.samples() != n) {
        return Err(Error::ShapeMismatch(format!(
            "views disagree on sample count: {n} vs {}",
            bad.samples()
        )));
    }
    if m == 0 || m > n {
        return Err(Error::InvalidM { m, n });
    }
    let widths: Vec<usize> = views.iter().map(ViewMatrix::features).collect();
    let dim: usize = widths.iter().sum();
    // points as columns of a dim x n matrix
    let mut points = DMatrix::<f64>::zeros(dim, n);
    let mut offset = 0;
    for v in views {
        let d = v.features();
        points
            .view_mut((offset, 0), (d, n))
            .copy_from(&v.matrix().transpose());
        offset += d;
    }
    let centroids = kmeans(&points, m, seed, 50);
    let mut out = Vec::with_capacity(views.len());
    let mut offset = 0;
    for d in widths {
        let block = centroids.view((offset, 0), (d, m)).transpose();
        out.push(AnchorSet::new(block, AnchorSource::KMeans));
        offset += d;
    }
    Ok(out)
}

fn sqdist(a: nalgebra::DVectorView<f64>, b: nalgebra::DVectorView<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Returns centroids as columns of a `dim x k` matrix.
fn kmeans(points: &DMatrix<f64>, k: usize, seed: u64, max_iter: usize) -> DMatrix<f64> {
    let (dim, n) = points.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = DMatrix::<f64>::zeros(dim, k);
    let mut chosen = vec![false; n];

    let first = rng.gen_range(0..n);
    chosen[first] = true;
    centroids.set_column(0, &points.column(first));
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sqdist(points.column(i), centroids.column(0)))
        .collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &w) in nearest.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // every point coincides with a centroid already
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.gen_range(0..free.len())]
        };
        chosen[pick] = true;
        centroids.set_column(c, &points.column(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sqdist(points.column(i), centroids.column(c)));
        }
    }

    let mut assignment = vec![usize::MAX; n];
    for _ in 0..max_iter {
        let mut changed = false;
        for (i, slot) in assignment.iter_mut().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for c in 0..k {
                let d = sqdist(points.column(i), centroids.column(c));
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if *slot != best {
                *slot = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = DMatrix::<f64>::zeros(dim, k);
        let mut counts = vec![0usize; k];
        for (i, &c) in assignment.iter().enumerate() {
            let mut col = sums.column_mut(c);
            col += points.column(i);
            counts[c] += 1;
        }
        for c in 0..k {
            // empty clusters keep their previous centroid
            if counts[c] > 0 {
                centroids.set_column(c, &(sums.column(c) / counts[c] as f64));
            }
        }
    }
    centroids
}

/// Row-stochastic sparse `n x m` matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorGraph {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Largest tolerated deviation of a row sum from 1.
pub const ROW_SUM_TOL: f64 = 1e-10;

impl AnchorGraph {
    /// Builds a graph from a dense matrix, keeping non-zero entries. Rows must
    /// be non-negative and sum to one.
    pub fn from_dense(s: &DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = s.shape();
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..rows {
            let mut sum = 0.0;
            for j in 0..cols {
                let x = s[(i, j)];
                if !(x >= 0.0 && x.is_finite()) {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({i}, {j}) = {x} is not a probability"
                    )));
                }
                if x > 0.0 {
                    col_idx.push(j);
                    values.push(x);
                    sum += x;
                }
            }
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::ShapeMismatch(format!("row {i} sums to {sum}")));
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn samples(&self) -> usize {
        self.rows
    }

    pub fn anchors(&self) -> usize {
        self.cols
    }

    /// `(anchor, weight)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, w) in self.row(i) {
                out[(i, j)] += w;
            }
        }
        out
    }

    /// `S * h` for an `m x c` matrix `h`.
    pub fn mul(&self, h: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(h.nrows(), self.cols, "S * H inner dimension");
        let mut out = DMatrix::zeros(self.rows, h.ncols());
        for i in 0..self.rows {
            for (j, w) in self.row(i) {
                for c in 0..h.ncols() {
                    out[(i, c)] += w * h[(j, c)];
                }
            }
        }
        out
    }

    /// `S^T * g` for an `n x c` matrix `g`.
    pub fn transpose_mul(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(g.nrows(), self.rows, "S^T * G inner dimension");
        let mut out = DMatrix::zeros(self.cols, g.ncols());
        for i in 0..self.rows {
            for (j, w) in self.row(i) {
                for c in 0..g.ncols() {
                    out[(j, c)] += w * g[(i, c)];
                }
            }
        }
        out
    }

    /// `S^T * S`, dense `m x m`.
    pub fn gram(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            for (a, wa) in self.row(i) {
                for (b, wb) in self.row(i) {
                    out[(a, b)] += wa * wb;
                }
            }
        }
        out
    }

    /// Reorders anchors: new column `j` is old column `perm[j]`.
    pub fn permute_anchors(&self, perm: &[usize]) -> AnchorGraph {
        assert_eq!(perm.len(), self.cols);
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mut out = self.clone();
        for idx in out.col_idx.iter_mut() {
            *idx = inverse[*idx];
        }
        out
    }
}

/// Threshold on the closed-form denominator below which the `k + 1` nearest
/// anchors count as equidistant.
const DEGENERATE_DENOM: f64 = 1e-12;

/// k-nearest-anchor graph with closed-form simplex weights.
///
/// For row `i` with sorted distances `d_1 <= ... <= d_{k+1}`, the `k` nearest
/// anchors get `(d_{k+1} - d_j) / (k d_{k+1} - sum_{l<=k} d_l)`. If the
/// denominator vanishes the row is uniform over the `k` nearest.
pub fn knn_simplex_graph(dist: &DMatrix<f64>, k: usize) -> Result<AnchorGraph> {
    let (n, m) = dist.shape();
    if k == 0 || k >= m {
        return Err(Error::InvalidK { k, m });
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(n * k);
    let mut values = Vec::with_capacity(n * k);
    row_ptr.push(0);
    let mut order: Vec<usize> = Vec::with_capacity(m);
    for i in 0..n {
        order.clear();
        order.extend(0..m);
        // stable: ties go to the lower anchor index
        order.sort_by(|&a, &b| dist[(i, a)].total_cmp(&dist[(i, b)]));
        let far = dist[(i, order[k])];
        let near_sum: f64 = order[..k].iter().map(|&j| dist[(i, j)]).sum();
        let denom = k as f64 * far - near_sum;
        for &j in &order[..k] {
            let w = if denom > DEGENERATE_DENOM {
                (far - dist[(i, j)]) / denom
            } else {
                1.0 / k as f64
            };
            if w > 0.0 {
                col_idx.push(j);
                values.push(w);
            }
        }
        row_ptr.push(col_idx.len());
    }
    Ok(AnchorGraph {
        rows: n,
        cols: m,
        row_ptr,
        col_idx,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use osmvc_oracle as oracle;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_view(rng: &mut ChaCha8Rng, n: usize, d: usize) -> ViewMatrix {
        ViewMatrix::new(DMatrix::from_fn(n, d, |_, _| rng.gen_range(-2.0..2.0))).unwrap()
    }

    #[test]
    fn view_rejects_nan() {
        let m = DMatrix::from_row_slice(1, 2, &[1.0, f64::INFINITY]);
        assert_eq!(ViewMatrix::new(m), Err(Error::NonFinite(1)));
    }

    #[test]
    fn min_max_scales_each_feature() {
        let v = ViewMatrix::from_rows(3, 2, &[0.0, 5.0, 2.0, 5.0, 4.0, 5.0]).unwrap();
        let n = v.min_max_normalized();
        assert_eq!(n.matrix().column(0).as_slice(), &[0.0, 0.5, 1.0]);
        assert_eq!(n.matrix().column(1).as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn sqdist_examples() {
        let x = ViewMatrix::from_rows(2, 2, &[0.0, 0.0, 3.0, 4.0]).unwrap();
        let a = AnchorSet::new(DMatrix::from_row_slice(1, 2, &[3.0, 4.0]), AnchorSource::Sampled);
        let d = pairwise_sqdist(&x, &a).unwrap();
        assert_eq!(d[(0, 0)], 25.0);
        assert_eq!(d[(1, 0)], 0.0);

        let bad = AnchorSet::new(DMatrix::zeros(1, 3), AnchorSource::Sampled);
        assert_eq!(
            pairwise_sqdist(&x, &bad),
            Err(Error::DimMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn sqdist_matches_naive_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_view(&mut rng, 10, 4);
        let a = AnchorSet::new(random_view(&mut rng, 3, 4).0, AnchorSource::Sampled);
        let d = pairwise_sqdist(&x, &a).unwrap();
        for i in 0..10 {
            for j in 0..3 {
                let mut naive = 0.0;
                for f in 0..4 {
                    let diff = x.matrix()[(i, f)] - a.coordinates()[(j, f)];
                    naive += diff * diff;
                }
                assert!((d[(i, j)] - naive).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn anchors_recover_duplicated_points() {
        let base = [[0.0, 0.0], [5.0, 1.0], [-3.0, 4.0], [2.0, -6.0]];
        let data: Vec<f64> = (0..40).flat_map(|i| base[i % 4]).collect();
        let view = ViewMatrix::from_rows(40, 2, &data).unwrap();
        let anchors = select_anchors(&[view], 4, 3).unwrap();
        let coords = anchors[0].coordinates();
        let mut found: Vec<[f64; 2]> = (0..4).map(|r| [coords[(r, 0)], coords[(r, 1)]]).collect();
        found.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut want = base.to_vec();
        want.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(found, want);
        assert_eq!(anchors[0].source(), AnchorSource::KMeans);
    }

    #[test]
    fn anchors_with_m_equal_n_are_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let view = random_view(&mut rng, 12, 3);
        let anchors = select_anchors(&[view.clone()], 12, 9).unwrap();
        let d = pairwise_sqdist(&view, &anchors[0]).unwrap();
        // every sample sits exactly on one anchor
        for i in 0..12 {
            assert_eq!(d.row(i).min(), 0.0);
        }
    }

    #[test]
    fn anchors_split_per_view_and_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let views = vec![random_view(&mut rng, 50, 3), random_view(&mut rng, 50, 5)];
        let a = select_anchors(&views, 7, 42).unwrap();
        let b = select_anchors(&views, 7, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].coordinates().shape(), (7, 3));
        assert_eq!(a[1].coordinates().shape(), (7, 5));
    }

    #[test]
    fn anchor_count_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = random_view(&mut rng, 5, 2);
        assert_eq!(
            select_anchors(&[v.clone()], 0, 1),
            Err(Error::InvalidM { m: 0, n: 5 })
        );
        assert_eq!(select_anchors(&[v], 6, 1), Err(Error::InvalidM { m: 6, n: 5 }));
        assert_eq!(default_anchor_count(300, 3, 0.1), 30);
        assert_eq!(default_anchor_count(20, 7, 0.1), 7);
        assert_eq!(default_anchor_count(50_000, 10, 0.1), 1024);
    }

    #[test]
    fn knn_weights_closed_form() {
        let d = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 4.0]);
        let s = knn_simplex_graph(&d, 2).unwrap().to_dense();
        assert!((s[(0, 0)] - 0.6).abs() < 1e-15);
        assert!((s[(0, 1)] - 0.4).abs() < 1e-15);
        assert_eq!(s[(0, 2)], 0.0);

        // regularized simplex QP at the induced theta = (k d_{k+1} - sum d) / 2
        let theta = (2.0 * 4.0 - 3.0) / 2.0;
        let target: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|x| -x / (2.0 * theta)).collect();
        let qp = oracle::brute_simplex(&target);
        for j in 0..3 {
            assert!((s[(0, j)] - qp[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn knn_equidistant_is_uniform() {
        let d = DMatrix::from_row_slice(1, 4, &[2.0, 2.0, 2.0, 2.0]);
        let s = knn_simplex_graph(&d, 3).unwrap().to_dense();
        for j in 0..3 {
            assert!((s[(0, j)] - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(s[(0, 3)], 0.0);
    }

    #[test]
    fn knn_rejects_bad_k() {
        let d = DMatrix::zeros(2, 3);
        assert_eq!(knn_simplex_graph(&d, 0), Err(Error::InvalidK { k: 0, m: 3 }));
        assert_eq!(knn_simplex_graph(&d, 3), Err(Error::InvalidK { k: 3, m: 3 }));
    }

    #[test]
    fn sparse_products_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let d = DMatrix::from_fn(9, 6, |_, _| rng.gen_range(0.0..5.0));
        let s = knn_simplex_graph(&d, 3).unwrap();
        let dense = s.to_dense();
        let h = DMatrix::from_fn(6, 2, |_, _| rng.gen_range(-1.0..1.0));
        let g = DMatrix::from_fn(9, 2, |_, _| rng.gen_range(-1.0..1.0));
        assert!((s.mul(&h) - &dense * &h).amax() < 1e-14);
        assert!((s.transpose_mul(&g) - dense.transpose() * &g).amax() < 1e-14);
        assert!((s.gram() - dense.transpose() * &dense).amax() < 1e-14);
        assert_eq!(AnchorGraph::from_dense(&dense).unwrap().to_dense(), dense);
    }

    #[test]
    fn from_dense_rejects_non_stochastic() {
        let bad = DMatrix::from_row_slice(1, 2, &[0.5, 0.4]);
        assert!(AnchorGraph::from_dense(&bad).is_err());
        let neg = DMatrix::from_row_slice(1, 2, &[1.5, -0.5]);
        assert!(AnchorGraph::from_dense(&neg).is_err());
    }

    proptest! {
        #[test]
        fn knn_rows_are_distributions(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..100.0, 8), 1..6),
            k in 1usize..8,
            gamma in 0.01f64..100.0,
        ) {
            let n = rows.len();
            let flat: Vec<f64> = rows.concat();
            let d = DMatrix::from_row_slice(n, 8, &flat);
            let s = knn_simplex_graph(&d, k).unwrap();
            let scaled = knn_simplex_graph(&(&d * gamma), k).unwrap().to_dense();
            let dense = s.to_dense();
            for i in 0..n {
                let row = dense.row(i);
                prop_assert!(row.min() >= 0.0);
                prop_assert!((row.sum() - 1.0).abs() <= ROW_SUM_TOL);
                prop_assert!(s.row(i).count() <= k);
                // nearer anchors never get less weight
                for a in 0..8 {
                    for b in 0..8 {
                        if d[(i, a)] < d[(i, b)] {
                            prop_assert!(row[a] >= row[b] - 1e-15);
                        }
                    }
                }
                for j in 0..8 {
                    prop_assert!((row[j] - scaled[(i, j)]).abs() < 1e-12);
                }
            }
        }
    }
}
