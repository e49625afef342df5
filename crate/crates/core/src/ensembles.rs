//! Seeded random-matrix and random-state samplers.
//!
//! Every sampler takes a [`SampleStream`]. The same stream always yields the
//! same draw, and different stream indices under one master seed select
//! independent ChaCha streams, so Monte Carlo trials can run on any number of
//! threads and still reproduce bit for bit.

use faer::linalg::matmul::triangular::{matmul, BlockStructure};
use faer::{Accum, Mat, Par};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{BipartiteShape, Field, HermitianMatrix};
use crate::{Error, Result};

/// One reproducible random stream: `(master_seed, stream_index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SampleStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(self.master_seed));
        rng.set_stream(self.stream_index);
        rng
    }
}

// SplitMix64 finaliser, so that nearby master seeds give unrelated keys.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Size parameters of an `(n, p)`-Wishart matrix `W = G G† / p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WishartParams {
    pub n: usize,
    pub p: usize,
    pub field: Field,
    /// Aspect ratio the column count was derived from, if any.
    pub alpha: Option<f64>,
}

impl WishartParams {
    pub fn new(n: usize, p: usize, field: Field) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::Parameter(format!(
                "Wishart sizes must be positive, got n = {n}, p = {p}"
            )));
        }
        Ok(Self {
            n,
            p,
            field,
            alpha: None,
        })
    }

    /// `p = ⌊alpha · n⌋`.
    pub fn with_alpha(n: usize, alpha: f64, field: Field) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Parameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        let p = columns_for_alpha(n, alpha);
        let mut params = Self::new(n, p, field)?;
        params.alpha = Some(alpha);
        Ok(params)
    }
}

/// `⌊alpha · n⌋`, the column count used throughout for a given aspect ratio.
pub fn columns_for_alpha(n: usize, alpha: f64) -> usize {
    (alpha * n as f64).floor() as usize
}

/// Rectangular matrix of i.i.d. standard normal entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Ginibre {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Complex64>,
}

impl Ginibre {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Rescales every column to unit Euclidean norm.
    fn normalize_columns(&mut self) {
        for c in 0..self.cols {
            let norm = (0..self.rows)
                .map(|r| self.get(r, c).norm_sqr())
                .sum::<f64>()
                .sqrt();
            for r in 0..self.rows {
                self.data[r * self.cols + c] /= norm;
            }
        }
    }

    /// `scale · G G†` computed on the lower triangle and mirrored.
    fn gram(&self, scale: f64) -> HermitianMatrix {
        let (n, p) = (self.rows, self.cols);
        match self.field {
            Field::Real => {
                let g = Mat::from_fn(n, p, |r, c| self.get(r, c).re);
                let mut w = Mat::<f64>::zeros(n, n);
                matmul(
                    w.as_mut(),
                    BlockStructure::TriangularLower,
                    Accum::Replace,
                    g.as_ref(),
                    BlockStructure::Rectangular,
                    g.transpose(),
                    BlockStructure::Rectangular,
                    scale,
                    Par::Seq,
                );
                HermitianMatrix::from_lower_fn(n, Field::Real, |r, c| {
                    Complex64::new(w[(r, c)], 0.0)
                })
            }
            Field::Complex => {
                let g = Mat::from_fn(n, p, |r, c| self.get(r, c));
                let mut w = Mat::<Complex64>::zeros(n, n);
                matmul(
                    w.as_mut(),
                    BlockStructure::TriangularLower,
                    Accum::Replace,
                    g.as_ref(),
                    BlockStructure::Rectangular,
                    g.adjoint(),
                    BlockStructure::Rectangular,
                    Complex64::new(scale, 0.0),
                    Par::Seq,
                );
                HermitianMatrix::from_lower_fn(n, Field::Complex, |r, c| w[(r, c)])
            }
        }
    }
}

/// One standard normal of the given field; complex draws have `N(0, 1/2)`
/// real and imaginary parts so that `E|z|² = 1`.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Complex64 {
    match field {
        Field::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

pub fn sample_ginibre_with<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    field: Field,
    rng: &mut R,
) -> Result<Ginibre> {
    if rows == 0 || cols == 0 {
        return Err(Error::Parameter(format!(
            "Ginibre dimensions must be positive, got {rows}x{cols}"
        )));
    }
    let data = (0..rows * cols)
        .map(|_| standard_normal(rng, field))
        .collect();
    Ok(Ginibre {
        rows,
        cols,
        field,
        data,
    })
}

/// `rows × cols` matrix of i.i.d. standard normals, filled row by row.
pub fn sample_ginibre(
    rows: usize,
    cols: usize,
    field: Field,
    stream: &SampleStream,
) -> Result<Ginibre> {
    sample_ginibre_with(rows, cols, field, &mut stream.rng())
}

/// `W = G G† / p` for a fresh `n × p` Ginibre matrix `G`.
pub fn sample_wishart(params: &WishartParams, stream: &SampleStream) -> Result<HermitianMatrix> {
    let g = sample_ginibre(params.n, params.p, params.field, stream)?;
    Ok(wishart_from_ginibre(&g))
}

/// `G G† / p` where `p` is the column count of `g`.
pub fn wishart_from_ginibre(g: &Ginibre) -> HermitianMatrix {
    g.gram(1.0 / g.cols as f64)
}

/// Induced state `ρ = W / tr W` for a complex `(n, p)`-Wishart `W`, i.e. the
/// partial trace of a uniform pure state on `C^n ⊗ C^p`.
pub fn sample_induced_state(n: usize, p: usize, stream: &SampleStream) -> Result<HermitianMatrix> {
    let w = sample_wishart(&WishartParams::new(n, p, Field::Complex)?, stream)?;
    Ok(normalize_trace(&w))
}

/// `ρ = (1/p) Σ |ψ_i⟩⟨ψ_i|` for `p` independent uniform unit vectors in `C^n`.
pub fn sample_mixture_state(n: usize, p: usize, stream: &SampleStream) -> Result<HermitianMatrix> {
    let mut g = sample_ginibre(n, p, Field::Complex, stream)?;
    g.normalize_columns();
    let rho = g.gram(1.0 / p as f64);
    // Column normalisation leaves the trace one up to rounding; renormalise exactly.
    Ok(normalize_trace(&rho))
}

/// Haar-uniform unit vector in `C^{d1} ⊗ C^{d2}`.
pub fn sample_pure_state(shape: &BipartiteShape, stream: &SampleStream) -> Vec<Complex64> {
    let mut rng = stream.rng();
    let mut v: Vec<Complex64> = (0..shape.dim())
        .map(|_| standard_normal(&mut rng, Field::Complex))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

fn normalize_trace(a: &HermitianMatrix) -> HermitianMatrix {
    a.scaled(1.0 / a.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use approx::assert_abs_diff_eq;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let s = SampleStream::new(7, 3);
        let a = sample_ginibre(3, 5, Field::Complex, &s).unwrap();
        let b = sample_ginibre(3, 5, Field::Complex, &s).unwrap();
        assert_eq!(a, b);
        let c = sample_ginibre(3, 5, Field::Complex, &SampleStream::new(7, 4)).unwrap();
        assert_ne!(a, c);
        let d = sample_ginibre(3, 5, Field::Complex, &SampleStream::new(8, 3)).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn real_ginibre_entries_are_centered() {
        let g = sample_ginibre(300, 334, Field::Real, &SampleStream::new(1, 0)).unwrap();
        let xs: Vec<f64> = g.entries().iter().map(|z| z.re).collect();
        assert!(g.entries().iter().all(|z| z.im == 0.0));
        let (mean, se) = mean_and_se(&xs);
        assert!(mean.abs() <= 4.0 * se, "mean {mean}, se {se}");
        let (second, se2) = mean_and_se(&xs.iter().map(|x| x * x).collect::<Vec<_>>());
        assert!((second - 1.0).abs() <= 4.0 * se2);
    }

    #[test]
    fn complex_ginibre_has_unit_second_moment() {
        let g = sample_ginibre(300, 334, Field::Complex, &SampleStream::new(2, 0)).unwrap();
        let sq: Vec<f64> = g.entries().iter().map(|z| z.norm_sqr()).collect();
        let (mean, se) = mean_and_se(&sq);
        assert!((mean - 1.0).abs() <= 4.0 * se, "mean {mean}, se {se}");
        let re: Vec<f64> = g.entries().iter().map(|z| z.re * z.re).collect();
        let (half, se) = mean_and_se(&re);
        assert!((half - 0.5).abs() <= 4.0 * se);
    }

    #[test]
    fn wishart_matches_scalar_outer_product() {
        let stream = SampleStream::new(42, 9);
        let params = WishartParams::new(2, 1, Field::Complex).unwrap();
        let g = sample_ginibre(2, 1, Field::Complex, &stream).unwrap();
        let w = sample_wishart(&params, &stream).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let mut expected = Complex64::new(0.0, 0.0);
                for k in 0..1 {
                    expected += g.get(r, k) * g.get(c, k).conj();
                }
                assert_abs_diff_eq!(w.get(r, c).re, expected.re, epsilon = 1e-14);
                assert_abs_diff_eq!(w.get(r, c).im, expected.im, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn wishart_matches_scalar_loop_for_rectangular_draws() {
        for field in [Field::Real, Field::Complex] {
            let stream = SampleStream::new(5, 1);
            let params = WishartParams::new(7, 13, field).unwrap();
            let g = sample_ginibre(7, 13, field, &stream).unwrap();
            let w = sample_wishart(&params, &stream).unwrap();
            assert_eq!(w.field(), field);
            for r in 0..7 {
                for c in 0..7 {
                    let expected: Complex64 = (0..13)
                        .map(|k| g.get(r, k) * g.get(c, k).conj())
                        .sum::<Complex64>()
                        / 13.0;
                    assert!((w.get(r, c) - expected).norm() <= 1e-13);
                }
            }
        }
    }

    #[test]
    fn wishart_diagonal_concentrates_for_large_p() {
        let params = WishartParams::new(4, 10_000, Field::Complex).unwrap();
        let w = sample_wishart(&params, &SampleStream::new(3, 0)).unwrap();
        for d in w.diagonal_values() {
            assert!((d - 1.0).abs() < 0.1, "diagonal {d}");
        }
    }

    #[test]
    fn wishart_is_positive_semidefinite() {
        for (n, p, seed) in [(6, 2, 0), (10, 10, 1), (12, 40, 2)] {
            for field in [Field::Real, Field::Complex] {
                let params = WishartParams::new(n, p, field).unwrap();
                let w = sample_wishart(&params, &SampleStream::new(seed, 0)).unwrap();
                let ev = hermitian_eigenvalues(&w).unwrap();
                let norm = ev.last().copied().unwrap().abs();
                assert!(ev[0] >= -1e-10 * norm, "λ_min = {}", ev[0]);
            }
        }
    }

    #[test]
    fn alpha_sets_column_count_by_floor() {
        let params = WishartParams::with_alpha(10, 2.55, Field::Complex).unwrap();
        assert_eq!(params.p, 25);
        assert_eq!(columns_for_alpha(900, 4.0), 3600);
        assert!(WishartParams::with_alpha(10, 0.05, Field::Real).is_err());
        assert!(WishartParams::with_alpha(10, -1.0, Field::Real).is_err());
    }

    #[test]
    fn induced_state_has_unit_trace() {
        for (n, p) in [(4, 1), (9, 9), (16, 50)] {
            let rho = sample_induced_state(n, p, &SampleStream::new(11, 2)).unwrap();
            assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
            let ev = hermitian_eigenvalues(&rho).unwrap();
            assert!(ev[0] >= -1e-12);
        }
    }

    #[test]
    fn induced_state_is_normalized_wishart() {
        let stream = SampleStream::new(13, 0);
        let w =
            sample_wishart(&WishartParams::new(6, 8, Field::Complex).unwrap(), &stream).unwrap();
        let rho = sample_induced_state(6, 8, &stream).unwrap();
        assert_eq!(rho, w.scaled(1.0 / w.trace()));
    }

    #[test]
    fn flat_measure_has_maximally_mixed_mean() {
        let n = 3;
        let trials = 10_000;
        let mut diag: Vec<Vec<f64>> = (0..n).map(|_| Vec::with_capacity(trials)).collect();
        let mut offdiag = Vec::with_capacity(trials);
        for t in 0..trials {
            let rho = sample_induced_state(n, n, &SampleStream::new(17, t as u64)).unwrap();
            for (i, d) in diag.iter_mut().enumerate() {
                d.push(rho.get(i, i).re);
            }
            offdiag.push(rho.get(1, 0).re);
        }
        for d in &diag {
            let (mean, se) = mean_and_se(d);
            assert!((mean - 1.0 / n as f64).abs() <= 4.0 * se, "mean {mean}");
        }
        let (mean, se) = mean_and_se(&offdiag);
        assert!(mean.abs() <= 4.0 * se);
    }

    #[test]
    fn induced_state_concentrates_for_large_ancilla() {
        let rho = sample_induced_state(4, 100_000, &SampleStream::new(19, 0)).unwrap();
        let diff = rho.shifted(-0.25);
        let ev = hermitian_eigenvalues(&diff).unwrap();
        let op = ev[0].abs().max(ev[3].abs());
        assert!(op <= 0.05, "‖ρ - Id/4‖ = {op}");
    }

    #[test]
    fn mixture_state_properties() {
        let rho = sample_mixture_state(6, 3, &SampleStream::new(23, 0)).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        let ev = hermitian_eigenvalues(&rho).unwrap();
        assert!(ev[0] >= -1e-12);
        // rank ≤ min(n, p) = 3
        assert!(ev.iter().filter(|&&x| x > 1e-10).count() <= 3);

        let pure = sample_mixture_state(5, 1, &SampleStream::new(29, 0)).unwrap();
        let ev = hermitian_eigenvalues(&pure).unwrap();
        assert_abs_diff_eq!(ev[4], 1.0, epsilon = 1e-12);
        assert!(ev[..4].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn mixture_state_concentrates_for_large_p() {
        let rho = sample_mixture_state(4, 100_000, &SampleStream::new(31, 0)).unwrap();
        let ev = hermitian_eigenvalues(&rho.shifted(-0.25)).unwrap();
        assert!(ev[0].abs().max(ev[3].abs()) <= 0.05);
    }

    #[test]
    fn pure_state_is_unit_and_exchangeable() {
        let one = BipartiteShape::new(1, 1).unwrap();
        let v = sample_pure_state(&one, &SampleStream::new(1, 1));
        assert_eq!(v.len(), 1);
        assert_abs_diff_eq!(v[0].norm(), 1.0, epsilon = 1e-12);

        let shape = BipartiteShape::square(2).unwrap();
        let trials = 100_000;
        let mut first = Vec::with_capacity(trials);
        for t in 0..trials {
            let v = sample_pure_state(&shape, &SampleStream::new(37, t as u64));
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() <= 1e-12);
            first.push(v[0].norm_sqr());
        }
        let (mean, se) = mean_and_se(&first);
        assert!((mean - 0.25).abs() <= 4.0 * se, "mean {mean}");
    }

    #[test]
    fn wishart_trace_concentrates() {
        // n·p = 10^5: |tr W / n - 1| ≤ 0.05 in at least 99% of trials.
        let params = WishartParams::new(20, 5_000, Field::Complex).unwrap();
        let trials = 200;
        let hits = (0..trials)
            .filter(|&t| {
                let w = sample_wishart(&params, &SampleStream::new(41, t)).unwrap();
                (w.trace() / 20.0 - 1.0).abs() <= 0.05
            })
            .count();
        assert!(hits as f64 >= 0.99 * trials as f64, "{hits}/{trials}");
    }

    #[test]
    fn trace_and_normalized_spectrum_are_weakly_correlated() {
        // tr W and W / tr W are independent; check the sample correlation of
        // tr W with λ_max(W / tr W) is small.
        let params = WishartParams::new(8, 12, Field::Complex).unwrap();
        let trials = 2_000;
        let mut tr = Vec::with_capacity(trials);
        let mut top = Vec::with_capacity(trials);
        for t in 0..trials {
            let w = sample_wishart(&params, &SampleStream::new(43, t as u64)).unwrap();
            let trace = w.trace();
            let ev = hermitian_eigenvalues(&w).unwrap();
            tr.push(trace);
            top.push(ev[7] / trace);
        }
        let (mt, _) = mean_and_se(&tr);
        let (mu, _) = mean_and_se(&top);
        let cov: f64 = tr.iter().zip(&top).map(|(a, b)| (a - mt) * (b - mu)).sum();
        let va: f64 = tr.iter().map(|a| (a - mt).powi(2)).sum();
        let vb: f64 = top.iter().map(|b| (b - mu).powi(2)).sum();
        let corr = cov / (va * vb).sqrt();
        // 4 standard errors of a null correlation.
        assert!(
            corr.abs() <= 4.0 / (trials as f64).sqrt(),
            "correlation {corr}"
        );
    }
}
