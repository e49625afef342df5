use serde::{Deserialize, Serialize};

use ptw_core::ensembles::columns_for_alpha;
use ptw_core::{EnsembleKind, Field};

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Spectrum,
    Extremes,
    Ppt,
    Pure,
    Selftest,
    Laws,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Spectrum => "spectrum",
            Subcommand::Extremes => "extremes",
            Subcommand::Ppt => "ppt",
            Subcommand::Pure => "pure",
            Subcommand::Selftest => "selftest",
            Subcommand::Laws => "laws",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// How pure-state spectra are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PureMethod {
    /// From the Schmidt coefficients.
    #[default]
    Formula,
    /// Eigendecomposition of the partially transposed projector.
    Direct,
}

/// One `(α, p)` point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub alpha: f64,
    pub p: usize,
}

/// Everything that determines a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    pub d1: usize,
    pub d2: usize,
    /// Aspect ratios `p / (d1 d2)`; exclusive with `p`.
    pub alpha: Option<Vec<f64>>,
    /// Explicit column counts; exclusive with `alpha`.
    pub p: Option<Vec<usize>>,
    pub trials: u64,
    pub field: Field,
    pub ensemble: EnsembleKind,
    pub master_seed: u64,
    pub format: OutputFormat,
    pub output_path: Option<String>,
    pub bins: usize,
    pub method: PureMethod,
}

/// Run-time knobs that never change the numbers in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// Embed wall-clock seconds in the report.
    pub timing: bool,
    /// Exit with code 3 when a threshold check fails.
    pub check: bool,
}

/// An invalid configuration; maps to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl ExperimentConfig {
    /// Defaults for a subcommand: spectrum d=30 α=4, extremes d=40 α=4,
    /// ppt d=15 over α ∈ {2,3,4,5,6,8}, pure d=50.
    pub fn defaults(subcommand: Subcommand) -> Self {
        let (d, alpha, trials, ensemble) = match subcommand {
            Subcommand::Spectrum => (30, vec![4.0], 10, EnsembleKind::Wishart),
            Subcommand::Extremes => (40, vec![4.0], 10, EnsembleKind::Wishart),
            Subcommand::Ppt => (
                15,
                vec![2.0, 3.0, 4.0, 5.0, 6.0, 8.0],
                50,
                EnsembleKind::Induced,
            ),
            Subcommand::Pure => (50, vec![1.0], 20, EnsembleKind::Pure),
            Subcommand::Selftest => (1, vec![1.0], 1, EnsembleKind::Wishart),
            Subcommand::Laws => (1, vec![4.0], 1, EnsembleKind::Wishart),
        };
        Self {
            subcommand,
            d1: d,
            d2: d,
            alpha: Some(alpha),
            p: None,
            trials,
            field: Field::Complex,
            ensemble,
            master_seed: 0x5eed,
            format: OutputFormat::Json,
            output_path: None,
            bins: ptw_core::spectral::DEFAULT_BINS,
            method: PureMethod::Formula,
        }
    }

    pub fn n(&self) -> usize {
        self.d1 * self.d2
    }

    /// Checks the invariants and resolves the `(α, p)` grid.
    pub fn validate(&self) -> Result<Vec<GridPoint>, UsageError> {
        let err = |m: String| Err(UsageError(m));
        if self.d1 == 0 || self.d2 == 0 {
            return err("dimensions must be positive".into());
        }
        if self.trials == 0 {
            return err("--trials must be positive".into());
        }
        if self.bins == 0 {
            return err("--bins must be positive".into());
        }
        if self.trials > u32::MAX as u64 {
            return err("--trials is too large".into());
        }
        let n = self.n();
        let grid: Vec<GridPoint> = match (&self.alpha, &self.p) {
            (Some(_), Some(_)) => return err("give exactly one of --alpha and --p".into()),
            (None, None) => return err("one of --alpha or --p is required".into()),
            (Some(alphas), None) => {
                let mut out = Vec::new();
                for &alpha in alphas {
                    if !(alpha.is_finite() && alpha > 0.0) {
                        return err(format!("alpha must be positive, got {alpha}"));
                    }
                    let p = columns_for_alpha(n, alpha);
                    if p == 0 {
                        return err(format!("alpha = {alpha} gives p = 0 at n = {n}"));
                    }
                    out.push(GridPoint { alpha, p });
                }
                out
            }
            (None, Some(ps)) => {
                let mut out = Vec::new();
                for &p in ps {
                    if p == 0 {
                        return err("p must be positive".into());
                    }
                    out.push(GridPoint {
                        alpha: p as f64 / n as f64,
                        p,
                    });
                }
                out
            }
        };
        if grid.is_empty() {
            return err("empty --alpha/--p list".into());
        }
        let single = |what: &str| -> Result<(), UsageError> {
            if grid.len() != 1 {
                return Err(UsageError(format!(
                    "{what} takes a single --alpha/--p value"
                )));
            }
            Ok(())
        };
        match self.subcommand {
            Subcommand::Spectrum => {
                single("spectrum")?;
                if self.ensemble == EnsembleKind::Pure {
                    return err("spectrum supports wishart, induced and mixture ensembles".into());
                }
                if self.ensemble != EnsembleKind::Wishart && self.field == Field::Real {
                    return err("states are sampled over the complex field only".into());
                }
            }
            Subcommand::Extremes => {
                single("extremes")?;
                if self.ensemble != EnsembleKind::Wishart {
                    return err("extremes supports the wishart ensemble only".into());
                }
            }
            Subcommand::Ppt => {
                if !matches!(self.ensemble, EnsembleKind::Induced | EnsembleKind::Mixture) {
                    return err("ppt supports induced and mixture ensembles".into());
                }
                if self.field == Field::Real {
                    return err("states are sampled over the complex field only".into());
                }
            }
            Subcommand::Pure => {
                if self.ensemble != EnsembleKind::Pure {
                    return err("pure supports the pure ensemble only".into());
                }
                if self.d1 != self.d2 {
                    return err("pure needs a balanced shape d1 = d2".into());
                }
            }
            Subcommand::Selftest | Subcommand::Laws => {}
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for sub in [
            Subcommand::Spectrum,
            Subcommand::Extremes,
            Subcommand::Ppt,
            Subcommand::Pure,
            Subcommand::Selftest,
            Subcommand::Laws,
        ] {
            assert!(
                ExperimentConfig::defaults(sub).validate().is_ok(),
                "{sub:?}"
            );
        }
    }

    #[test]
    fn p_from_alpha_is_floored() {
        let mut c = ExperimentConfig::defaults(Subcommand::Spectrum);
        c.d1 = 3;
        c.d2 = 3;
        c.alpha = Some(vec![1.5]);
        assert_eq!(c.validate().unwrap()[0].p, 13);
    }

    #[test]
    fn alpha_and_p_are_exclusive() {
        let mut c = ExperimentConfig::defaults(Subcommand::Spectrum);
        c.p = Some(vec![10]);
        assert!(c.validate().is_err());
        c.alpha = None;
        assert_eq!(c.validate().unwrap()[0].p, 10);
        c.p = None;
        assert!(c.validate().is_err());
    }

    #[test]
    fn ensemble_restrictions() {
        let mut c = ExperimentConfig::defaults(Subcommand::Extremes);
        c.ensemble = EnsembleKind::Induced;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::defaults(Subcommand::Ppt);
        c.ensemble = EnsembleKind::Wishart;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::defaults(Subcommand::Spectrum);
        c.alpha = Some(vec![1.0, 2.0]);
        assert!(c.validate().is_err());
    }
}
