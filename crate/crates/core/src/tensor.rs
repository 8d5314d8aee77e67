//! Third-order tensors and the Fourier-domain Schatten p-norm machinery.
//!
//! A [`Tensor3`] of shape `n1 x n2 x n3` is stored as a stack of `n3` frontal
//! slices, each an `n1 x n2` column-major matrix. Per-view matrices live in
//! the lateral slices: for the `n x V x c` sample tensor, lateral slice `v` is
//! the `n x c` matrix of view `v`, and frontal slice `k` is the `n x V`
//! matrix collecting column `k` of every view.
//!
//! The DFT along the third mode is unnormalized in the forward direction and
//! carries `1/n3` on the inverse. With that convention
//! `||X||_F^2 = (1/n3) sum_k ||Xbar_k||_F^2`, so the proximal operator of
//! `tau * ||X||_Sp^p` thresholds each frequency slice at `tau * n3`.

use nalgebra::{Complex, DMatrix};
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Largest tolerated imaginary residue, relative to `max(1, max |re|)`, when
/// returning from the frequency domain.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        Self {
            dims: (n1, n2, n3),
            data: vec![0.0; n1 * n2 * n3],
        }
    }

    /// Builds a tensor from frontal-slice-major data, rejecting wrong lengths
    /// and non-finite entries.
    pub fn from_vec(n1: usize, n2: usize, n3: usize, data: Vec<f64>) -> Result<Self> {
        let expected = n1 * n2 * n3;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(idx));
        }
        Ok(Self {
            dims: (n1, n2, n3),
            data,
        })
    }

    /// Stacks `n1 x n3` matrices as lateral slices `0..n2`.
    pub fn from_lateral_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::ShapeMismatch("no lateral slices".into()))?;
        let (n1, n3) = first.shape();
        let mut t = Self::zeros(n1, slices.len(), n3);
        for (j, s) in slices.iter().enumerate() {
            if s.shape() != (n1, n3) {
                return Err(Error::ShapeMismatch(format!(
                    "lateral slice {j} is {:?}, expected {:?}",
                    s.shape(),
                    (n1, n3)
                )));
            }
            t.set_lateral_slice(j, s);
        }
        Ok(t)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        let (n1, n2, _) = self.dims;
        k * n1 * n2 + j * n1 + i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.offset(i, j, k);
        self.data[idx] = value;
    }

    pub fn frontal_slice(&self, k: usize) -> DMatrix<f64> {
        let (n1, n2, _) = self.dims;
        DMatrix::from_column_slice(n1, n2, &self.data[k * n1 * n2..(k + 1) * n1 * n2])
    }

    /// The `n1 x n3` matrix with entries `(i, k) = T[i, j, k]`.
    pub fn lateral_slice(&self, j: usize) -> DMatrix<f64> {
        let (n1, _, n3) = self.dims;
        DMatrix::from_fn(n1, n3, |i, k| self.get(i, j, k))
    }

    pub fn set_lateral_slice(&mut self, j: usize, m: &DMatrix<f64>) {
        let (n1, _, n3) = self.dims;
        assert_eq!(m.shape(), (n1, n3), "lateral slice shape");
        for k in 0..n3 {
            for i in 0..n1 {
                self.set(i, j, k, m[(i, k)]);
            }
        }
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, scale: f64, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims, other.dims, "tensor dims");
        Tensor3 {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    /// In-place `self += scale * other`.
    pub fn axpy(&mut self, scale: f64, other: &Tensor3) {
        assert_eq!(self.dims, other.dims, "tensor dims");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Elementwise max-abs difference.
    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims, other.dims, "tensor dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor3 {
    dims: (usize, usize, usize),
    data: Vec<C64>,
}

impl ComplexTensor3 {
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        Self {
            dims: (n1, n2, n3),
            data: vec![C64::new(0.0, 0.0); n1 * n2 * n3],
        }
    }

    pub fn from_vec(n1: usize, n2: usize, n3: usize, data: Vec<C64>) -> Result<Self> {
        let expected = n1 * n2 * n3;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: data.len(),
            });
        }
        Ok(Self {
            dims: (n1, n2, n3),
            data,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        let (n1, n2, _) = self.dims;
        self.data[k * n1 * n2 + j * n1 + i]
    }

    pub fn frontal_slice(&self, k: usize) -> DMatrix<C64> {
        let (n1, n2, _) = self.dims;
        DMatrix::from_column_slice(n1, n2, &self.data[k * n1 * n2..(k + 1) * n1 * n2])
    }

    pub fn set_frontal_slice(&mut self, k: usize, m: &DMatrix<C64>) {
        let (n1, n2, _) = self.dims;
        assert_eq!(m.shape(), (n1, n2), "frontal slice shape");
        self.data[k * n1 * n2..(k + 1) * n1 * n2].copy_from_slice(m.as_slice());
    }
}

/// Singular values of one matrix, in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Applies a length-`n3` transform to every mode-3 fiber.
fn transform_fibers(dims: (usize, usize, usize), data: &mut [C64], inverse: bool) {
    let (n1, n2, n3) = dims;
    let plane = n1 * n2;
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n3)
    } else {
        planner.plan_fft_forward(n3)
    };
    let mut fiber = vec![C64::new(0.0, 0.0); n3];
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for idx in 0..plane {
        for (k, f) in fiber.iter_mut().enumerate() {
            *f = data[k * plane + idx];
        }
        fft.process_with_scratch(&mut fiber, &mut scratch);
        for (k, f) in fiber.iter().enumerate() {
            data[k * plane + idx] = *f;
        }
    }
}

/// Unnormalized forward DFT along the third mode.
pub fn dft_dim3(t: &Tensor3) -> ComplexTensor3 {
    let (n1, n2, n3) = t.dims;
    let mut data: Vec<C64> = t.data.iter().map(|&x| C64::new(x, 0.0)).collect();
    if n3 > 1 {
        transform_fibers(t.dims, &mut data, false);
    }
    ComplexTensor3 {
        dims: (n1, n2, n3),
        data,
    }
}

/// Inverse DFT along the third mode (with the `1/n3` factor). Fails when the
/// result carries a non-negligible imaginary part.
pub fn idft_dim3(t: &ComplexTensor3) -> Result<Tensor3> {
    let (n1, n2, n3) = t.dims;
    let mut data = t.data.clone();
    if n3 > 1 {
        transform_fibers(t.dims, &mut data, true);
    }
    let scale = 1.0 / n3 as f64;
    let mut residue = 0.0f64;
    let mut magnitude = 1.0f64;
    let real: Vec<f64> = data
        .iter()
        .map(|z| {
            residue = residue.max((z.im * scale).abs());
            magnitude = magnitude.max((z.re * scale).abs());
            z.re * scale
        })
        .collect();
    if residue > IMAG_RESIDUE_TOL * magnitude {
        return Err(Error::ConjugateSymmetryViolation { residue });
    }
    Ok(Tensor3 {
        dims: (n1, n2, n3),
        data: real,
    })
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidP(p))
    }
}

/// Number of frequency slices that must be computed explicitly; the rest are
/// conjugates of these for real input.
fn independent_slices(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Singular spectra of every DFT-domain frontal slice.
pub fn frequency_spectra(t: &Tensor3) -> Vec<SingularSpectrum> {
    let freq = dft_dim3(t);
    let n3 = t.dims.2;
    let half = independent_slices(n3);
    let mut spectra: Vec<SingularSpectrum> = (0..half.min(n3))
        .map(|k| {
            let sv = freq.frontal_slice(k).singular_values();
            SingularSpectrum::from_unsorted(sv.iter().copied().collect())
        })
        .collect();
    // conjugate slices share singular values
    for k in half..n3 {
        spectra.push(spectra[n3 - k].clone());
    }
    spectra
}

/// `sum_k sum_j sigma_j(Xbar_k)^p`, the p-th power of the tensor Schatten
/// p-norm. This is the quantity that enters the clustering objective.
pub fn schatten_p_norm_pow(t: &Tensor3, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(frequency_spectra(t)
        .iter()
        .flat_map(|s| s.values.iter())
        .map(|&sigma| if sigma == 0.0 { 0.0 } else { sigma.powf(p) })
        .sum())
}

/// Tensor Schatten p-norm, `(sum_k sum_j sigma_j(Xbar_k)^p)^(1/p)`.
pub fn schatten_p_norm(t: &Tensor3, p: f64) -> Result<f64> {
    Ok(schatten_p_norm_pow(t, p)?.powf(1.0 / p))
}

/// Global minimizer of `0.5 (d - sigma)^2 + tau d^p` over `d >= 0`
/// (generalized soft-thresholding).
pub fn gst_scalar(sigma: f64, tau: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidTau(tau));
    }
    Ok(gst_unchecked(sigma, tau, p))
}

fn gst_unchecked(sigma: f64, tau: f64, p: f64) -> f64 {
    if p == 1.0 {
        return (sigma - tau).max(0.0);
    }
    let base = 2.0 * tau * (1.0 - p);
    let threshold = base.powf(1.0 / (2.0 - p)) + tau * p * base.powf((p - 1.0) / (2.0 - p));
    if sigma <= threshold {
        return 0.0;
    }
    let mut delta = sigma;
    for _ in 0..100 {
        let next = sigma - tau * p * delta.powf(p - 1.0);
        let step = (next - delta).abs();
        delta = next;
        if step < 1e-12 {
            break;
        }
    }
    delta
}

/// Proximal operator of `tau * ||X||_Sp^p`:
/// `argmin_X 0.5 ||X - Z||_F^2 + tau ||X||_Sp^p`.
///
/// `tau` is the raw coefficient; the `n3` scaling that comes from the
/// unnormalized DFT is applied here.
pub fn schatten_prox(z: &Tensor3, tau: f64, p: f64) -> Result<Tensor3> {
    check_p(p)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidTau(tau));
    }
    let (n1, n2, n3) = z.dims;
    let threshold = tau * n3 as f64;
    let freq = dft_dim3(z);
    let mut shrunk = ComplexTensor3::zeros(n1, n2, n3);
    for k in 0..independent_slices(n3).min(n3) {
        let slice = freq.frontal_slice(k);
        let svd = slice.svd(true, true);
        let u = svd.u.expect("left singular vectors requested");
        let v_t = svd.v_t.expect("right singular vectors requested");
        let mut rebuilt = DMatrix::<C64>::zeros(n1, n2);
        for (r, &sigma) in svd.singular_values.iter().enumerate() {
            let kept = gst_unchecked(sigma, threshold, p);
            if kept == 0.0 {
                continue;
            }
            let col = u.column(r) * C64::new(kept, 0.0);
            rebuilt += col * v_t.row(r);
        }
        shrunk.set_frontal_slice(k, &rebuilt);
        let mirror = (n3 - k) % n3;
        if mirror != k {
            shrunk.set_frontal_slice(mirror, &rebuilt.map(|c| c.conj()));
        }
    }
    idft_dim3(&shrunk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use osmvc_oracle as oracle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut ChaCha8Rng, n1: usize, n2: usize, n3: usize) -> Tensor3 {
        let data = (0..n1 * n2 * n3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Tensor3::from_vec(n1, n2, n3, data).unwrap()
    }

    #[test]
    fn from_vec_validates() {
        assert!(matches!(
            Tensor3::from_vec(2, 2, 2, vec![0.0; 7]),
            Err(Error::LengthMismatch { expected: 8, got: 7 })
        ));
        let mut data = vec![0.0; 8];
        data[3] = f64::NAN;
        assert_eq!(Tensor3::from_vec(2, 2, 2, data), Err(Error::NonFinite(3)));
    }

    #[test]
    fn slices_follow_layout() {
        let t = Tensor3::from_vec(2, 3, 2, (0..12).map(f64::from).collect()).unwrap();
        assert_eq!(t.frontal_slice(1)[(1, 2)], 11.0);
        let lat = t.lateral_slice(1);
        assert_eq!(lat.shape(), (2, 2));
        assert_eq!(lat[(0, 0)], 2.0);
        assert_eq!(lat[(1, 1)], 9.0);
        let rebuilt =
            Tensor3::from_lateral_slices(&(0..3).map(|j| t.lateral_slice(j)).collect::<Vec<_>>())
                .unwrap();
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn dft_single_slice_is_identity() {
        let t = Tensor3::from_vec(2, 2, 1, vec![1.0, -2.0, 3.5, 4.0]).unwrap();
        let f = dft_dim3(&t);
        for (z, x) in f.as_slice().iter().zip(t.as_slice()) {
            assert_eq!(z.re, *x);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn dft_of_constant_fiber() {
        let m = [1.5, -0.5, 2.0, 3.0, 0.25, -1.0];
        let data: Vec<f64> = (0..4).flat_map(|_| m).collect();
        let t = Tensor3::from_vec(3, 2, 4, data).unwrap();
        let f = dft_dim3(&t);
        for idx in 0..6 {
            assert!((f.as_slice()[idx] - C64::new(4.0 * m[idx], 0.0)).norm() < 1e-12);
        }
        assert!(f.as_slice()[6..].iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn dft_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random_tensor(&mut rng, 3, 2, 5);
        let fast = dft_dim3(&t);
        let slow = oracle::brute_dft_tensor(t.as_slice(), t.dims());
        for (a, b) in fast.as_slice().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn idft_of_zero_and_single_slice() {
        let z = ComplexTensor3::zeros(2, 3, 4);
        assert_eq!(idft_dim3(&z).unwrap(), Tensor3::zeros(2, 3, 4));
        let one = ComplexTensor3::from_vec(1, 2, 1, vec![C64::new(2.0, 0.0), C64::new(-3.0, 0.0)])
            .unwrap();
        assert_eq!(idft_dim3(&one).unwrap().as_slice(), &[2.0, -3.0]);
    }

    #[test]
    fn idft_rejects_asymmetric_input() {
        let mut data = vec![C64::new(0.0, 0.0); 4];
        data[1] = C64::new(0.0, 1.0);
        let t = ComplexTensor3::from_vec(1, 1, 4, data).unwrap();
        assert!(matches!(
            idft_dim3(&t),
            Err(Error::ConjugateSymmetryViolation { .. })
        ));
    }

    #[test]
    fn dft_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_tensor(&mut rng, 4, 3, 6);
        let back = idft_dim3(&dft_dim3(&t)).unwrap();
        assert!(back.max_abs_diff(&t) <= 1e-10);
    }

    #[test]
    fn schatten_norm_examples() {
        assert_eq!(schatten_p_norm(&Tensor3::zeros(3, 2, 4), 0.5).unwrap(), 0.0);
        let diag = Tensor3::from_vec(2, 2, 1, vec![2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((schatten_p_norm(&diag, 1.0).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(schatten_p_norm(&diag, 0.0), Err(Error::InvalidP(0.0)));
        assert_eq!(schatten_p_norm(&diag, 1.5), Err(Error::InvalidP(1.5)));
    }

    #[test]
    fn schatten_norm_matches_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let t = random_tensor(&mut rng, 4, 3, 5);
            let expected = oracle::brute_tensor_nuclear_norm(t.as_slice(), t.dims());
            assert!((schatten_p_norm(&t, 1.0).unwrap() - expected).abs() < 1e-8);
        }
    }

    #[test]
    fn spectra_are_descending() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = random_tensor(&mut rng, 5, 3, 4);
        let spectra = frequency_spectra(&t);
        assert_eq!(spectra.len(), 4);
        for s in &spectra {
            assert_eq!(s.count(), 3);
            assert!(s.values().windows(2).all(|w| w[0] >= w[1] && w[1] >= 0.0));
        }
    }

    #[test]
    fn gst_examples() {
        assert_eq!(gst_scalar(3.0, 1.0, 1.0).unwrap(), 2.0);
        assert_eq!(gst_scalar(0.1, 1.0, 0.5).unwrap(), 0.0);
        let expected = oracle::brute_gst(3.0, 1.0, 0.5, 1e-5);
        assert!((gst_scalar(3.0, 1.0, 0.5).unwrap() - expected).abs() < 1e-5);
        assert_eq!(gst_scalar(1.0, 0.0, 0.5), Err(Error::InvalidTau(0.0)));
        assert_eq!(gst_scalar(1.0, 1.0, -0.1), Err(Error::InvalidP(-0.1)));
    }

    #[test]
    fn gst_small_sigma_is_zero_by_grid() {
        // fine grid over [0, sigma] confirms zero wins
        let (sigma, tau, p) = (0.1f64, 1.0f64, 0.5f64);
        let obj = |d: f64| 0.5 * (d - sigma).powi(2) + tau * d.powf(p);
        let best = (0..=100_000)
            .map(|s| s as f64 * 1e-6)
            .min_by(|a, b| obj(*a).total_cmp(&obj(*b)))
            .unwrap();
        assert_eq!(best, 0.0);
        assert_eq!(gst_scalar(sigma, tau, p).unwrap(), best);
    }

    #[test]
    fn prox_examples() {
        let z = Tensor3::zeros(4, 3, 5);
        assert_eq!(schatten_prox(&z, 0.3, 0.5).unwrap().frobenius_norm(), 0.0);

        let d = Tensor3::from_vec(2, 2, 1, vec![3.0, 0.0, 0.0, 1.0]).unwrap();
        let out = schatten_prox(&d, 1.0, 1.0).unwrap();
        let expected = [2.0, 0.0, 0.0, 0.0];
        for (a, b) in out.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    fn prox_objective(x: &Tensor3, z: &Tensor3, tau: f64, p: f64) -> f64 {
        let diff = x.add_scaled(-1.0, z).frobenius_norm();
        0.5 * diff * diff + tau * schatten_p_norm_pow(x, p).unwrap()
    }

    #[test]
    fn prox_beats_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let z = random_tensor(&mut rng, 4, 3, 5);
        let (tau, p) = (0.3, 0.5);
        let x = schatten_prox(&z, tau, p).unwrap();
        let best = prox_objective(&x, &z, tau, p);
        assert!(best <= prox_objective(&z, &z, tau, p));
        assert!(best <= prox_objective(&Tensor3::zeros(4, 3, 5), &z, tau, p));
        for _ in 0..200 {
            let eps = random_tensor(&mut rng, 4, 3, 5);
            let scale = rng.gen_range(1e-3..0.2);
            let candidate = x.add_scaled(scale, &eps);
            assert!(best <= prox_objective(&candidate, &z, tau, p) + 1e-12);
        }
    }

    #[test]
    fn prox_p1_matches_svt_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let z = random_tensor(&mut rng, 4, 3, 5);
            let tau = rng.gen_range(0.01..0.5);
            let got = schatten_prox(&z, tau, 1.0).unwrap();
            let want = oracle::brute_tensor_svt(z.as_slice(), z.dims(), tau);
            let dev = got
                .as_slice()
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(dev <= 1e-8, "deviation {dev}");
        }
    }

    #[test]
    fn prox_even_and_odd_depths() {
        // conjugate mirroring must hold for both parities of n3
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n3 in 1..=6 {
            let z = random_tensor(&mut rng, 3, 4, n3);
            let got = schatten_prox(&z, 0.2, 1.0).unwrap();
            let want = oracle::brute_tensor_svt(z.as_slice(), z.dims(), 0.2);
            for (a, b) in got.as_slice().iter().zip(&want) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    fn tensor_strategy() -> impl Strategy<Value = Tensor3> {
        (1usize..5, 1usize..4, 1usize..6).prop_flat_map(|(n1, n2, n3)| {
            prop::collection::vec(-10.0f64..10.0, n1 * n2 * n3)
                .prop_map(move |data| Tensor3::from_vec(n1, n2, n3, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_conjugate_symmetry(t in tensor_strategy()) {
            let f = dft_dim3(&t);
            let (n1, n2, n3) = t.dims();
            for k in 0..n3 {
                let mirror = (n3 - k) % n3;
                for j in 0..n2 {
                    for i in 0..n1 {
                        prop_assert!((f.get(i, j, k) - f.get(i, j, mirror).conj()).norm() <= 1e-10);
                    }
                }
            }
            let back = idft_dim3(&f).unwrap();
            prop_assert!(back.max_abs_diff(&t) <= 1e-10 * (1.0 + t.frobenius_norm()));
        }

        #[test]
        fn gst_monotone_in_sigma(a in 0.0f64..10.0, b in 0.0f64..10.0,
                                 tau in 0.01f64..5.0, p in 0.1f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(gst_scalar(lo, tau, p).unwrap() <= gst_scalar(hi, tau, p).unwrap() + 1e-12);
        }

        #[test]
        fn gst_p1_is_soft_threshold(sigma in 0.0f64..10.0, tau in 0.01f64..5.0) {
            prop_assert_eq!(gst_scalar(sigma, tau, 1.0).unwrap(), (sigma - tau).max(0.0));
        }

        #[test]
        fn prox_p1_nonexpansive(seed in any::<u64>(), tau in 0.01f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_tensor(&mut rng, 4, 3, 5);
            let b = random_tensor(&mut rng, 4, 3, 5);
            let pa = schatten_prox(&a, tau, 1.0).unwrap();
            let pb = schatten_prox(&b, tau, 1.0).unwrap();
            prop_assert!(pa.add_scaled(-1.0, &pb).frobenius_norm()
                <= a.add_scaled(-1.0, &b).frobenius_norm() + 1e-10);
        }
    }
}
