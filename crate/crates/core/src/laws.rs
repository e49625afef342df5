//! Limit laws: semicircle, Marčenko–Pastur and the product of two
//! independent standard semicircles.
//!
//! `MP(α)` is the limiting spectral distribution of `W = (1/p) G G†` with
//! `p ≈ α n`. Its moments are `Σ_{π ∈ NC(k)} α^{|π| − k}`, so the mean is 1
//! and the second moment `1 + 1/α`. For `α ≥ 1` the law is absolutely
//! continuous with density `f_{1/α}`; for `α < 1` it carries an atom of mass
//! `1 − α` at zero and a continuous part of mass `α` on
//! `[(1/√α − 1)², (1/√α + 1)²]`.
//!
//! Here `f_β(y) = √((y − b₋)(b₊ − y)) / (2π β y)` on `[b₋, b₊]`, `b± = (1 ± √β)²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{catalan, mp_moment_via_nc};
use crate::quadrature::integrate;
use crate::{Error, Result};

/// Absolute accuracy targeted by [`law_cdf`].
pub const CDF_TOLERANCE: f64 = 1e-10;

/// A limit law with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    /// `SC(m, σ²)`.
    Semicircle { mean: f64, variance: f64 },
    /// `MP(α)`.
    MarchenkoPastur { alpha: f64 },
    /// Law of `XY` with `X, Y` independent `SC(0, 1)`; moments only.
    ProductSemicircle,
}

/// Continuous part and atom at zero of `MP(α)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpDensity {
    pub continuous: f64,
    pub atom: f64,
}

impl LimitLaw {
    pub fn semicircle(mean: f64, variance: f64) -> Result<Self> {
        let law = LimitLaw::Semicircle { mean, variance };
        law.validate()?;
        Ok(law)
    }

    pub fn marchenko_pastur(alpha: f64) -> Result<Self> {
        let law = LimitLaw::MarchenkoPastur { alpha };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LimitLaw::Semicircle { mean, variance } => {
                if !mean.is_finite() || !(variance.is_finite() && variance > 0.0) {
                    return Err(Error::Parameter(format!(
                        "semicircle needs finite mean and positive variance, got ({mean}, {variance})"
                    )));
                }
            }
            LimitLaw::MarchenkoPastur { alpha } => check_alpha(alpha)?,
            LimitLaw::ProductSemicircle => {}
        }
        Ok(())
    }

    /// Support of the continuous part (the atom, if any, sits at 0).
    pub fn support(&self) -> Result<(f64, f64)> {
        self.validate()?;
        Ok(match *self {
            LimitLaw::Semicircle { mean, variance } => {
                let s = variance.sqrt();
                (mean - 2.0 * s, mean + 2.0 * s)
            }
            LimitLaw::MarchenkoPastur { alpha } => {
                let mp = MpShape::new(alpha);
                (mp.s * mp.lo, mp.s * mp.hi)
            }
            LimitLaw::ProductSemicircle => (-4.0, 4.0),
        })
    }

    /// Mass of the atom at 0.
    pub fn atom_at_zero(&self) -> f64 {
        match *self {
            LimitLaw::MarchenkoPastur { alpha } if alpha < 1.0 => 1.0 - alpha,
            _ => 0.0,
        }
    }

    /// Density of the continuous part.
    pub fn density(&self, x: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            LimitLaw::Semicircle { mean, variance } => Ok(sc_raw(mean, variance, x)),
            LimitLaw::MarchenkoPastur { alpha } => Ok(MpShape::new(alpha).density(x)),
            LimitLaw::ProductSemicircle => Err(no_density()),
        }
    }

    /// Exact `k`-th moment.
    pub fn moment(&self, k: usize) -> Result<f64> {
        self.validate()?;
        match *self {
            LimitLaw::Semicircle { .. } => sc_moment(self, k),
            LimitLaw::MarchenkoPastur { alpha } => mp_moment(alpha, k),
            LimitLaw::ProductSemicircle => product_sc_moment(k),
        }
    }

    /// `∫ g dμ` by quadrature of the continuous part, plus `g(0)` times the atom.
    pub fn expectation<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let (a, b) = self.support()?;
        let density = |x: f64| self.density(x).unwrap_or(0.0);
        let scale = [a, 0.5 * (a + b), b]
            .iter()
            .map(|&x| g(x).abs())
            .fold(1.0, f64::max);
        let continuous = integrate_over_support(|x| g(x) * density(x), a, b, 1e-15 * scale);
        Ok(continuous + self.atom_at_zero() * g(0.0))
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let (a, b) = self.support()?;
        if matches!(self, LimitLaw::ProductSemicircle) {
            return Err(no_density());
        }
        let atom = if x >= 0.0 { self.atom_at_zero() } else { 0.0 };
        if x <= a {
            return Ok(atom);
        }
        if x >= b {
            return Ok(1.0);
        }
        let density = |t: f64| self.density(t).unwrap_or(0.0);
        let mass = integrate_over_support(density, a, x, 0.01 * CDF_TOLERANCE);
        Ok((atom + mass).clamp(0.0, 1.0))
    }
}

fn no_density() -> Error {
    Error::Parameter("the product-of-semicircles law is exposed through its moments only".into())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    Ok(())
}

/// `∫_a^b f` after `x = c − r cos θ`, which removes square-root edge
/// behaviour and the `1/√x` singularity of `MP(1)` at the origin.
fn integrate_over_support<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    integrate(|t| f(c - r * t.cos()) * r * t.sin(), 0.0, PI, tol)
}

fn sc_raw(mean: f64, variance: f64, x: f64) -> f64 {
    let u = 4.0 * variance - (x - mean).powi(2);
    if u <= 0.0 {
        0.0
    } else {
        u.sqrt() / (2.0 * PI * variance)
    }
}

/// `MP(α)` continuous part written as `(w / s) f_β(x / s)`.
struct MpShape {
    beta: f64,
    s: f64,
    w: f64,
    lo: f64,
    hi: f64,
}

impl MpShape {
    fn new(alpha: f64) -> Self {
        let (beta, s, w) = if alpha >= 1.0 {
            (1.0 / alpha, 1.0, 1.0)
        } else {
            (alpha, 1.0 / alpha, alpha)
        };
        let r = beta.sqrt();
        Self {
            beta,
            s,
            w,
            lo: (1.0 - r).powi(2),
            hi: (1.0 + r).powi(2),
        }
    }

    fn density(&self, x: f64) -> f64 {
        let y = x / self.s;
        if y <= self.lo || y >= self.hi || y <= 0.0 {
            return 0.0;
        }
        let f = ((y - self.lo) * (self.hi - y)).sqrt() / (2.0 * PI * self.beta * y);
        self.w / self.s * f
    }
}

/// Density of `SC(m, σ²)`.
pub fn sc_density(law: &LimitLaw, x: f64) -> Result<f64> {
    match *law {
        LimitLaw::Semicircle { .. } => law.density(x),
        _ => Err(Error::Parameter("sc_density needs a semicircle law".into())),
    }
}

/// Exact moment of `SC(m, σ²)`: `E (m + σX)^k` with `E X^{2j} = C_j`.
pub fn sc_moment(law: &LimitLaw, k: usize) -> Result<f64> {
    let LimitLaw::Semicircle { mean, variance } = *law else {
        return Err(Error::Parameter("sc_moment needs a semicircle law".into()));
    };
    law.validate()?;
    let sigma = variance.sqrt();
    let mut total = 0.0;
    let mut binom = 1.0f64;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k + 1 - j) as f64 / j as f64;
        }
        if j % 2 == 0 {
            let central = catalan(j / 2)? as f64 * sigma.powi(j as i32);
            total += binom * mean.powi((k - j) as i32) * central;
        }
    }
    Ok(total)
}

/// `MP(α)` density split into its continuous part at `x` and the atom at 0.
pub fn mp_density(alpha: f64, x: f64) -> Result<MpDensity> {
    check_alpha(alpha)?;
    let law = LimitLaw::MarchenkoPastur { alpha };
    Ok(MpDensity {
        continuous: MpShape::new(alpha).density(x),
        atom: law.atom_at_zero(),
    })
}

/// `Σ_{π ∈ NC(k)} α^{|π| − k}`, for `k ≤ 12`.
pub fn mp_moment(alpha: f64, k: usize) -> Result<f64> {
    mp_moment_via_nc(alpha, k)
}

/// Moments of the product of two independent `SC(0, 1)`: `C_{k/2}²` or 0.
pub fn product_sc_moment(k: usize) -> Result<f64> {
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let c = catalan(k / 2)? as f64;
    Ok(c * c)
}

pub fn law_cdf(law: &LimitLaw, x: f64) -> Result<f64> {
    law.cdf(x)
}
