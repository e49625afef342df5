//! Command-line parsing for the `ptw` binary.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};

use ptw_core::{EnsembleKind, Field};

use crate::config::{ExperimentConfig, OutputFormat, PureMethod, RunOptions, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "ptw",
    version,
    about = "Spectra of partially transposed Wishart matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, ClapSubcommand)]
pub enum Command {
    /// Empirical spectrum of W^Γ or d²ρ^Γ against the semicircle SC(1, 1/α)
    Spectrum(ExperimentArgs),
    /// Extreme eigenvalues of W^Γ against 1 ± 2/√α
    Extremes(ExperimentArgs),
    /// PPT frequency of random states over a grid of α
    Ppt(ExperimentArgs),
    /// Partial-transpose spectra of uniform pure states
    Pure(ExperimentArgs),
    /// Exhaustive combinatorics and limit-law checks
    Selftest(ExperimentArgs),
    /// Theory tables: moments, supports and densities
    Laws(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleArg {
    Wishart,
    Induced,
    Mixture,
    Pure,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Formula,
    Direct,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Local dimension of a balanced C^d ⊗ C^d
    #[arg(long, conflicts_with_all = ["d1", "d2"])]
    pub d: Option<usize>,
    /// First factor dimension
    #[arg(long, requires = "d2")]
    pub d1: Option<usize>,
    /// Second factor dimension
    #[arg(long, requires = "d1")]
    pub d2: Option<usize>,
    /// Aspect ratio(s) p / (d1 d2); comma-separated for ppt sweeps
    #[arg(long, value_delimiter = ',', conflicts_with = "p")]
    pub alpha: Option<Vec<f64>>,
    /// Explicit column count(s) p
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<String>,
    /// Histogram bins (grid intervals for `laws`)
    #[arg(long)]
    pub bins: Option<usize>,
    /// Pure-state spectrum method
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Worker threads
    #[arg(long, env = "PTW_THREADS")]
    pub threads: Option<usize>,
    /// Exit with status 3 if an acceptance threshold is missed
    #[arg(long)]
    pub check: bool,
    /// Embed wall-clock time in the report (breaks byte-identical reruns)
    #[arg(long)]
    pub timing: bool,
}

impl Cli {
    /// Resolves the parsed arguments against the subcommand defaults.
    pub fn into_config(self) -> (ExperimentConfig, RunOptions) {
        let (sub, a) = match self.command {
            Command::Spectrum(a) => (Subcommand::Spectrum, a),
            Command::Extremes(a) => (Subcommand::Extremes, a),
            Command::Ppt(a) => (Subcommand::Ppt, a),
            Command::Pure(a) => (Subcommand::Pure, a),
            Command::Selftest(a) => (Subcommand::Selftest, a),
            Command::Laws(a) => (Subcommand::Laws, a),
        };
        let mut c = ExperimentConfig::defaults(sub);
        if let Some(d) = a.d {
            c.d1 = d;
            c.d2 = d;
        }
        if let (Some(d1), Some(d2)) = (a.d1, a.d2) {
            c.d1 = d1;
            c.d2 = d2;
        }
        if a.p.is_some() {
            c.alpha = None;
            c.p = a.p;
        }
        if a.alpha.is_some() {
            c.alpha = a.alpha;
        }
        if let Some(t) = a.trials {
            c.trials = t;
        }
        if let Some(f) = a.field {
            c.field = match f {
                FieldArg::Real => Field::Real,
                FieldArg::Complex => Field::Complex,
            };
        }
        if let Some(e) = a.ensemble {
            c.ensemble = match e {
                EnsembleArg::Wishart => EnsembleKind::Wishart,
                EnsembleArg::Induced => EnsembleKind::Induced,
                EnsembleArg::Mixture => EnsembleKind::Mixture,
                EnsembleArg::Pure => EnsembleKind::Pure,
            };
        }
        if let Some(s) = a.seed {
            c.master_seed = s;
        }
        c.format = match a.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
        c.output_path = a.out;
        if let Some(b) = a.bins {
            c.bins = b;
        }
        if let Some(m) = a.method {
            c.method = match m {
                MethodArg::Formula => PureMethod::Formula,
                MethodArg::Direct => PureMethod::Direct,
            };
        }
        let opts = RunOptions {
            threads: a.threads.filter(|&t| t > 0),
            timing: a.timing,
            check: a.check,
        };
        (c, opts)
    }
}

/// Parses a full argument list, program name first.
pub fn parse_from<I, T>(args: I) -> Result<(ExperimentConfig, RunOptions), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Ok(Cli::try_parse_from(args)?.into_config())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_per_subcommand() {
        let (c, o) = parse_from(["ptw", "spectrum"]).unwrap();
        assert_eq!((c.d1, c.d2, c.alpha.clone()), (30, 30, Some(vec![4.0])));
        assert_eq!(o, RunOptions::default());
        let (c, _) = parse_from(["ptw", "ppt"]).unwrap();
        assert_eq!(c.alpha.unwrap(), vec![2.0, 3.0, 4.0, 5.0, 6.0, 8.0]);
        assert_eq!(c.trials, 50);
        let (c, _) = parse_from(["ptw", "pure"]).unwrap();
        assert_eq!((c.d1, c.trials), (50, 20));
    }

    #[test]
    fn flags_override_defaults() {
        let (c, o) = parse_from([
            "ptw",
            "ppt",
            "--d1",
            "3",
            "--d2",
            "4",
            "--p",
            "10,20",
            "--ensemble",
            "mixture",
            "--seed",
            "9",
            "--format",
            "csv",
            "--threads",
            "2",
            "--check",
        ])
        .unwrap();
        assert_eq!((c.d1, c.d2), (3, 4));
        assert_eq!((c.alpha, c.p), (None, Some(vec![10, 20])));
        assert_eq!(c.ensemble, EnsembleKind::Mixture);
        assert_eq!((c.master_seed, c.format), (9, OutputFormat::Csv));
        assert_eq!((o.threads, o.check), (Some(2), true));
    }

    #[test]
    fn conflicting_flags_are_rejected() {
        assert!(parse_from(["ptw", "spectrum", "--alpha", "2", "--p", "5"]).is_err());
        assert!(parse_from(["ptw", "spectrum", "--d", "2", "--d1", "3", "--d2", "3"]).is_err());
        assert!(parse_from(["ptw", "spectrum", "--d1", "3"]).is_err());
        assert!(parse_from(["ptw", "spectrum", "--field", "quaternion"]).is_err());
        assert!(parse_from(["ptw", "nonsense"]).is_err());
    }
}
