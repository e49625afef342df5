//! Empirical spectral statistics.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::laws::LimitLaw;
use crate::linalg::{
    hermitian_eigenvalues, partial_transpose, BipartiteShape, Field, HermitianMatrix,
};
use crate::{Error, Result};

/// Default number of histogram bins.
pub const DEFAULT_BINS: usize = 100;
/// Relative padding of the histogram range on each side.
pub const HISTOGRAM_PAD: f64 = 0.01;
/// Relative tolerance `ε_num / ‖ρ^Γ‖` of the PPT test.
pub const PPT_TOLERANCE: f64 = 1e-10;
/// Allowed deviation of a state's trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-8;

/// Random-matrix ensemble a sample was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    #[default]
    Wishart,
    Induced,
    Mixture,
    Pure,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EnsembleKind::Wishart => "wishart",
            EnsembleKind::Induced => "induced",
            EnsembleKind::Mixture => "mixture",
            EnsembleKind::Pure => "pure",
        })
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wishart" => Ok(EnsembleKind::Wishart),
            "induced" => Ok(EnsembleKind::Induced),
            "mixture" => Ok(EnsembleKind::Mixture),
            "pure" => Ok(EnsembleKind::Pure),
            _ => Err(Error::Parameter(format!("unknown ensemble {s:?}"))),
        }
    }
}

/// Where a spectrum came from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SampleMeta {
    pub ensemble: EnsembleKind,
    pub d1: usize,
    pub d2: usize,
    pub p: usize,
    pub field: Field,
    pub master_seed: u64,
    pub stream_index: u64,
}

/// A non-empty ascending list of eigenvalues with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    eigenvalues: Vec<f64>,
    meta: SampleMeta,
}

impl SpectralSample {
    /// Sorts the values; rejects empty or non-finite input.
    pub fn new(mut eigenvalues: Vec<f64>, meta: SampleMeta) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Parameter(
                "a spectral sample needs at least one eigenvalue".into(),
            ));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite eigenvalue".into()));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self { eigenvalues, meta })
    }

    /// Spectrum of a Hermitian matrix.
    pub fn from_matrix(a: &HermitianMatrix, meta: SampleMeta) -> Result<Self> {
        Self::new(hermitian_eigenvalues(a)?, meta)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The sample with every eigenvalue multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::Parameter(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(Self {
            eigenvalues: self.eigenvalues.iter().map(|x| x * factor).collect(),
            meta: self.meta.clone(),
        })
    }
}

/// Equal-width histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    /// `bins` equal bins over `[min, max]` padded by 1% of the range on each side.
    pub fn of(values: &[f64], bins: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("cannot bin an empty sample".into()));
        }
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
                (l.min(x), h.max(x))
            });
        let range = if hi > lo { hi - lo } else { hi.abs().max(1.0) };
        let pad = HISTOGRAM_PAD * range;
        Self::with_range(values, bins, lo - pad, hi + pad)
    }

    /// `bins` equal bins over `[lo, hi]`; values outside are clamped into the end bins.
    pub fn with_range(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Parameter("histograms need at least one bin".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Parameter(format!(
                "invalid histogram range [{lo}, {hi}]"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins)
            .map(|b| if b == bins { hi } else { lo + width * b as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        for &x in values {
            let b = ((x - lo) / width).floor();
            let b = if b < 0.0 {
                0
            } else {
                (b as usize).min(bins - 1)
            };
            counts[b] += 1;
        }
        Ok(Self {
            bin_edges,
            counts,
            total: values.len() as u64,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

/// Fraction of eigenvalues in the closed interval `[a, b]`.
pub fn esd_fraction(s: &SpectralSample, a: f64, b: f64) -> Result<f64> {
    if a > b || a.is_nan() || b.is_nan() {
        return Err(Error::Parameter(format!("empty interval [{a}, {b}]")));
    }
    let ev = &s.eigenvalues;
    let lo = ev.partition_point(|&x| x < a);
    let hi = ev.partition_point(|&x| x <= b);
    Ok((hi - lo) as f64 / ev.len() as f64)
}

/// `(1/n) Σ λ_i^k`.
pub fn empirical_moment(s: &SpectralSample, k: usize) -> f64 {
    let n = s.eigenvalues.len() as f64;
    s.eigenvalues.iter().map(|x| x.powi(k as i32)).sum::<f64>() / n
}

/// `(λ_min, λ_max)`.
pub fn extremes(s: &SpectralSample) -> (f64, f64) {
    (s.eigenvalues[0], *s.eigenvalues.last().unwrap())
}

/// `(λ_min, λ_max)` of a raw eigenvalue list.
pub fn extremes_of(eigenvalues: &[f64]) -> Result<(f64, f64)> {
    match (eigenvalues.first(), eigenvalues.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Err(Error::Parameter("extremes of an empty sample".into())),
    }
}

/// Kolmogorov–Smirnov distance between the ESD of `(λ − shift) / scale` and `law`.
pub fn ks_distance(s: &SpectralSample, law: &LimitLaw, shift: f64, scale: f64) -> Result<f64> {
    if !(scale.is_finite() && scale > 0.0) || !shift.is_finite() {
        return Err(Error::Parameter(format!(
            "ks_distance needs finite shift and positive scale, got ({shift}, {scale})"
        )));
    }
    let n = s.eigenvalues.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.eigenvalues.iter().enumerate() {
        let f = law.cdf((x - shift) / scale)?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// `max_i |W_ii − 1|`.
pub fn diag_deviation(w: &HermitianMatrix) -> f64 {
    w.diagonal_values()
        .iter()
        .map(|x| (x - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Outcome of the PPT test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptGauge {
    /// `1 − d² λ_min(ρ^Γ)`; only defined for balanced shapes.
    pub gauge: Option<f64>,
    pub is_ppt: bool,
    pub lambda_min: f64,
}

/// PPT test of a unit-trace state on `C^d1 ⊗ C^d2`.
pub fn ppt_gauge(rho: &HermitianMatrix, shape: &BipartiteShape) -> Result<PptGauge> {
    let tr = rho.trace();
    if !tr.is_finite() || (tr - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::Parameter(format!("state trace is {tr}, expected 1")));
    }
    let pt = partial_transpose(rho, shape)?;
    let ev = hermitian_eigenvalues(&pt)?;
    let lambda_min = ev[0];
    let eps = PPT_TOLERANCE * pt.frobenius_norm();
    let gauge = shape
        .is_square()
        .then(|| 1.0 - (shape.dim() as f64) * lambda_min);
    Ok(PptGauge {
        gauge,
        is_ppt: lambda_min >= -eps,
        lambda_min,
    })
}

/// Spectrum of `|ψ⟩⟨ψ|^Γ` from the Schmidt coefficients of `ψ`:
/// `{λ_i} ∪ {±√(λ_i λ_j) : i < j}`, ascending.
pub fn pure_pt_spectrum(schmidt: &[f64]) -> Result<Vec<f64>> {
    if schmidt.is_empty() {
        return Err(Error::Parameter("empty Schmidt vector".into()));
    }
    if schmidt.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::Parameter(
            "Schmidt coefficients must be non-negative".into(),
        ));
    }
    let total: f64 = schmidt.iter().sum();
    if (total - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::Parameter(format!(
            "Schmidt coefficients sum to {total}, expected 1"
        )));
    }
    let d = schmidt.len();
    let mut out = Vec::with_capacity(d * d);
    out.extend_from_slice(schmidt);
    for i in 0..d {
        for j in i + 1..d {
            let r = (schmidt[i] * schmidt[j]).sqrt();
            out.push(r);
            out.push(-r);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
