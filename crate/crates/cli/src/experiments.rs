//! Monte Carlo runners behind the `spectrum`, `extremes`, `ppt` and `pure` subcommands.

use std::collections::BTreeMap;

use rayon::prelude::*;

use ptw_core::ensembles::{
    sample_induced_state, sample_mixture_state, sample_pure_state, sample_wishart,
};
use ptw_core::laws::product_sc_moment;
use ptw_core::linalg::{hermitian_eigenvalues, partial_transpose, schmidt_coefficients};
use ptw_core::spectral::{
    diag_deviation, empirical_moment, esd_fraction, extremes, ks_distance, ppt_gauge,
    pure_pt_spectrum,
};
use ptw_core::{
    BipartiteShape, EnsembleKind, HermitianMatrix, Histogram, LimitLaw, SampleMeta, SampleStream,
    SpectralSample, WishartParams,
};

use crate::config::{ExperimentConfig, GridPoint, PureMethod, RunOptions};
use crate::report::{Check, Monotonicity, Report, Scale, SweepPoint, Theory, TrialRecord};
use crate::stats::{wilson_interval, Z95};
use crate::thresholds as th;
use crate::RunError;

/// Largest `d` for which pure-state runs also compare against a direct eigensolve.
pub const PURE_CROSS_CHECK_MAX_D: usize = 8;

/// Stream index of trial `t` at grid point `point`.
pub fn stream_index(point: usize, t: u64) -> u64 {
    ((point as u64) << 32) | t
}

/// Maps `f` over `0..count` on a pool of `threads` workers, keeping index order.
pub fn map_trials<T, F>(count: u64, threads: Option<usize>, f: F) -> Result<Vec<T>, RunError>
where
    T: Send,
    F: Fn(u64) -> Result<T, RunError> + Sync + Send,
{
    let work = || {
        (0..count)
            .into_par_iter()
            .map(&f)
            .collect::<Result<Vec<T>, RunError>>()
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Usage(crate::UsageError(format!("thread pool: {e}"))))?
            .install(work),
        None => work(),
    }
}

fn meta(c: &ExperimentConfig, g: &GridPoint, stream: u64) -> SampleMeta {
    SampleMeta {
        ensemble: c.ensemble,
        d1: c.d1,
        d2: c.d2,
        p: g.p,
        field: c.field,
        master_seed: c.master_seed,
        stream_index: stream,
    }
}

fn sample_state(
    kind: EnsembleKind,
    n: usize,
    p: usize,
    stream: &SampleStream,
) -> ptw_core::Result<HermitianMatrix> {
    match kind {
        EnsembleKind::Mixture => sample_mixture_state(n, p, stream),
        _ => sample_induced_state(n, p, stream),
    }
}

fn moments(
    s: &SpectralSample,
    stats: &mut BTreeMap<String, f64>,
    prefix: &str,
    ks: impl Iterator<Item = usize>,
) {
    for k in ks {
        stats.insert(format!("{prefix}{k}"), empirical_moment(s, k));
    }
}

fn shifted_moment(s: &SpectralSample, shift: f64, k: usize) -> f64 {
    let ev = s.eigenvalues();
    ev.iter().map(|x| (x - shift).powi(k as i32)).sum::<f64>() / ev.len() as f64
}

/// Limit law of the rescaled partial transpose at aspect ratio `α`: `SC(1, 1/α)`.
pub fn spectrum_law(alpha: f64) -> ptw_core::Result<LimitLaw> {
    LimitLaw::semicircle(1.0, 1.0 / alpha)
}

/// ESD of `Y = W^Γ` (Wishart) or `d1 d2 · ρ^Γ` (states) against `SC(1, 1/α)`.
pub fn run_spectrum(
    c: &ExperimentConfig,
    grid: &[GridPoint],
    opts: &RunOptions,
) -> Result<Report, RunError> {
    let scale = if c.ensemble == EnsembleKind::Wishart {
        Scale::WishartRaw
    } else {
        Scale::StateTimesDim
    };
    let mut report = Report::new(c.clone(), scale);
    let shape = BipartiteShape::new(c.d1, c.d2)?;
    let n = c.n();
    let g = grid[0];
    let law = spectrum_law(g.alpha)?;
    let centred = LimitLaw::semicircle(0.0, 1.0 / g.alpha)?;
    let (lo, hi) = law.support()?;

    report.trials = map_trials(c.trials, opts.threads, |t| {
        let index = stream_index(0, t);
        let stream = SampleStream::new(c.master_seed, index);
        let y = match c.ensemble {
            EnsembleKind::Wishart => {
                let w = sample_wishart(&WishartParams::new(n, g.p, c.field)?, &stream)?;
                partial_transpose(&w, &shape)?
            }
            kind => {
                partial_transpose(&sample_state(kind, n, g.p, &stream)?, &shape)?.scaled(n as f64)
            }
        };
        let s = SpectralSample::from_matrix(&y, meta(c, &g, index))?;
        let mut stats = BTreeMap::new();
        moments(&s, &mut stats, "moment_", 1..=8);
        for k in 1..=4 {
            stats.insert(format!("central_moment_{k}"), shifted_moment(&s, 1.0, k));
        }
        let (l, h) = extremes(&s);
        stats.insert("lambda_min".into(), l);
        stats.insert("lambda_max".into(), h);
        stats.insert("ks_sc".into(), ks_distance(&s, &law, 0.0, 1.0)?);
        stats.insert(
            "support_mass".into(),
            esd_fraction(&s, lo - th::SUPPORT_PAD, hi + th::SUPPORT_PAD)?,
        );
        Ok(TrialRecord {
            point: 0,
            alpha: g.alpha,
            p: g.p,
            trial: t,
            stream_index: index,
            histogram: Some(Histogram::of(s.eigenvalues(), c.bins)?),
            spectrum: Some(s.eigenvalues().to_vec()),
            stats,
        })
    })?;
    report.aggregate_trials(grid);

    let mut values = BTreeMap::new();
    for k in 1..=8 {
        values.insert(format!("moment_{k}"), law.moment(k)?);
    }
    for k in 1..=4 {
        values.insert(format!("central_moment_{k}"), centred.moment(k)?);
    }
    values.insert("lambda_min".into(), lo);
    values.insert("lambda_max".into(), hi);
    report.checks.push(Check::within(
        "mean_moment_1",
        mean(&report, "moment_1"),
        1.0,
        th::STATE_FIRST_MOMENT,
    ));
    for k in 1..=4 {
        let name = format!("central_moment_{k}");
        report.checks.push(Check::within(
            format!("mean_{name}"),
            mean(&report, &name),
            values[&name],
            th::CENTRAL_MOMENTS[k - 1],
        ));
    }
    report.checks.push(Check::at_most(
        "mean_ks_sc",
        mean(&report, "ks_sc"),
        th::MEAN_KS,
    ));
    let ks_ok = report
        .trials
        .iter()
        .filter(|t| t.stats["ks_sc"] <= th::TRIAL_KS)
        .count() as f64
        / report.trials.len() as f64;
    report.checks.push(Check::at_least(
        "fraction_trials_ks_sc_ok",
        ks_ok,
        th::TRIAL_KS_FRACTION,
    ));
    let worst_mass = min_stat(&report, "support_mass");
    report.checks.push(Check::at_least(
        "min_support_mass",
        worst_mass,
        th::PADDED_SUPPORT_MASS,
    ));
    report.theory.push(Theory {
        point: 0,
        law: Some(law),
        values,
    });
    Ok(report)
}

fn mean(report: &Report, statistic: &str) -> f64 {
    report.aggregate(0, statistic).map_or(f64::NAN, |s| s.mean)
}

fn min_stat(report: &Report, statistic: &str) -> f64 {
    report.aggregate(0, statistic).map_or(f64::NAN, |s| s.min)
}

fn max_stat(report: &Report, statistic: &str) -> f64 {
    report.aggregate(0, statistic).map_or(f64::NAN, |s| s.max)
}

/// Extreme eigenvalues of `Y = W^Γ` and the diagonal deviation of `W`.
pub fn run_extremes(
    c: &ExperimentConfig,
    grid: &[GridPoint],
    opts: &RunOptions,
) -> Result<Report, RunError> {
    let mut report = Report::new(c.clone(), Scale::WishartRaw);
    let shape = BipartiteShape::new(c.d1, c.d2)?;
    let g = grid[0];
    let params = WishartParams::new(c.n(), g.p, c.field)?;
    report.trials = map_trials(c.trials, opts.threads, |t| {
        let index = stream_index(0, t);
        let w = sample_wishart(&params, &SampleStream::new(c.master_seed, index))?;
        let ev = hermitian_eigenvalues(&partial_transpose(&w, &shape)?)?;
        let mut stats = BTreeMap::new();
        stats.insert("lambda_min".into(), ev[0]);
        stats.insert("lambda_max".into(), ev[ev.len() - 1]);
        stats.insert("diag_deviation".into(), diag_deviation(&w));
        Ok(TrialRecord {
            point: 0,
            alpha: g.alpha,
            p: g.p,
            trial: t,
            stream_index: index,
            stats,
            spectrum: None,
            histogram: None,
        })
    })?;
    report.aggregate_trials(grid);

    let edge = 2.0 / g.alpha.sqrt();
    let (lo, hi) = (1.0 - edge, 1.0 + edge);
    let margin = th::edge_margin(g.alpha);
    let worst = |stat: &str, target: f64| {
        report
            .trials
            .iter()
            .map(|t| (t.stats[stat] - target).abs())
            .fold(0.0, f64::max)
    };
    let (gap_min, gap_max) = (worst("lambda_min", lo), worst("lambda_max", hi));
    report.checks.push(Check::within(
        "mean_lambda_min",
        mean(&report, "lambda_min"),
        lo,
        margin,
    ));
    report.checks.push(Check::within(
        "mean_lambda_max",
        mean(&report, "lambda_max"),
        hi,
        margin,
    ));
    report
        .checks
        .push(Check::at_most("worst_lambda_min_gap", gap_min, margin));
    report
        .checks
        .push(Check::at_most("worst_lambda_max_gap", gap_max, margin));
    report.checks.push(Check::at_most(
        "mean_diag_deviation",
        mean(&report, "diag_deviation"),
        th::DIAG_DEVIATION,
    ));
    let mut values = BTreeMap::new();
    values.insert("lambda_min".into(), lo);
    values.insert("lambda_max".into(), hi);
    report.theory.push(Theory {
        point: 0,
        law: Some(spectrum_law(g.alpha)?),
        values,
    });
    Ok(report)
}

/// PPT frequencies of random states over a grid of `α`.
pub fn run_ppt_sweep(
    c: &ExperimentConfig,
    grid: &[GridPoint],
    opts: &RunOptions,
) -> Result<Report, RunError> {
    let mut report = Report::new(c.clone(), Scale::StateTimesDim);
    let shape = BipartiteShape::new(c.d1, c.d2)?;
    let n = c.n();
    let jobs = grid.len() as u64 * c.trials;
    report.trials = map_trials(jobs, opts.threads, |job| {
        let point = (job / c.trials) as usize;
        let t = job % c.trials;
        let g = grid[point];
        let index = stream_index(point, t);
        let rho = sample_state(c.ensemble, n, g.p, &SampleStream::new(c.master_seed, index))?;
        let gauge = ppt_gauge(&rho, &shape)?;
        let mut stats = BTreeMap::new();
        stats.insert("is_ppt".into(), if gauge.is_ppt { 1.0 } else { 0.0 });
        stats.insert("lambda_min".into(), n as f64 * gauge.lambda_min);
        if let Some(v) = gauge.gauge {
            stats.insert("gauge".into(), v);
        }
        Ok(TrialRecord {
            point,
            alpha: g.alpha,
            p: g.p,
            trial: t,
            stream_index: index,
            stats,
            spectrum: None,
            histogram: None,
        })
    })?;
    report.aggregate_trials(grid);

    for (point, g) in grid.iter().enumerate() {
        let ppt_count = report
            .trials
            .iter()
            .filter(|t| t.point == point && t.stats["is_ppt"] == 1.0)
            .count() as u64;
        let (ci_low, ci_high) = wilson_interval(ppt_count, c.trials, Z95);
        let frequency = ppt_count as f64 / c.trials as f64;
        report.sweep.push(SweepPoint {
            alpha: g.alpha,
            p: g.p,
            trials: c.trials,
            ppt_count,
            frequency,
            ci_low,
            ci_high,
        });
        let edge = 1.0 - 2.0 / g.alpha.sqrt();
        let mut values = BTreeMap::new();
        values.insert("lambda_min".into(), edge);
        report.theory.push(Theory {
            point,
            law: Some(spectrum_law(g.alpha)?),
            values,
        });
        if g.alpha <= 2.0 {
            report.checks.push(Check::equal(
                format!("ppt_frequency_alpha_{}", g.alpha),
                frequency,
                0.0,
            ));
        } else if g.alpha >= 8.0 {
            report.checks.push(Check::at_least(
                format!("ppt_frequency_alpha_{}", g.alpha),
                frequency,
                th::PPT_HIGH_FREQUENCY,
            ));
        }
    }
    let mono = monotonicity(&report.sweep);
    report.checks.push(Check::equal(
        "ppt_frequency_monotone",
        if mono.non_decreasing { 1.0 } else { 0.0 },
        1.0,
    ));
    report.monotonicity = Some(mono);
    Ok(report)
}

/// Inversions of the PPT frequency along the grid, sorted by `α`.
pub fn monotonicity(sweep: &[SweepPoint]) -> Monotonicity {
    let mut points: Vec<&SweepPoint> = sweep.iter().collect();
    points.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let mut inversions = 0;
    let mut significant_inversions = 0;
    for w in points.windows(2) {
        if w[1].frequency < w[0].frequency {
            inversions += 1;
            if w[1].ci_high < w[0].ci_low {
                significant_inversions += 1;
            }
        }
    }
    Monotonicity {
        inversions,
        significant_inversions,
        non_decreasing: inversions <= 1 && significant_inversions == 0,
    }
}

/// Spectra of `d · |ψ⟩⟨ψ|^Γ` for uniform pure states on `C^d ⊗ C^d`.
pub fn run_pure_state(
    c: &ExperimentConfig,
    grid: &[GridPoint],
    opts: &RunOptions,
) -> Result<Report, RunError> {
    let mut report = Report::new(c.clone(), Scale::PureTimesD);
    let shape = BipartiteShape::new(c.d1, c.d2)?;
    let d = c.d1;
    let g = grid[0];
    report.trials = map_trials(c.trials, opts.threads, |t| {
        let index = stream_index(0, t);
        let psi = sample_pure_state(&shape, &SampleStream::new(c.master_seed, index));
        let direct = || -> ptw_core::Result<Vec<f64>> {
            hermitian_eigenvalues(&partial_transpose(&HermitianMatrix::outer(&psi), &shape)?)
        };
        let formula = || -> ptw_core::Result<Vec<f64>> {
            pure_pt_spectrum(&schmidt_coefficients(&psi, &shape)?)
        };
        let (spectrum, gap) = match c.method {
            PureMethod::Formula if d <= PURE_CROSS_CHECK_MAX_D => {
                let f = formula()?;
                let gap = max_abs_diff(&f, &direct()?);
                (f, Some(gap))
            }
            PureMethod::Formula => (formula()?, None),
            PureMethod::Direct if d <= PURE_CROSS_CHECK_MAX_D => {
                let e = direct()?;
                let gap = max_abs_diff(&e, &formula()?);
                (e, Some(gap))
            }
            PureMethod::Direct => (direct()?, None),
        };
        let scaled: Vec<f64> = spectrum.iter().map(|x| x * d as f64).collect();
        let s = SpectralSample::new(scaled, meta(c, &g, index))?;
        let mut stats = BTreeMap::new();
        moments(&s, &mut stats, "moment_", 1..=6);
        let (l, h) = extremes(&s);
        stats.insert("lambda_min".into(), l);
        stats.insert("lambda_max".into(), h);
        if let Some(gap) = gap {
            stats.insert("method_gap".into(), gap);
        }
        Ok(TrialRecord {
            point: 0,
            alpha: g.alpha,
            p: g.p,
            trial: t,
            stream_index: index,
            histogram: Some(Histogram::of(s.eigenvalues(), c.bins)?),
            spectrum: Some(s.eigenvalues().to_vec()),
            stats,
        })
    })?;
    report.aggregate_trials(grid);

    let mut values = BTreeMap::new();
    for k in 1..=6 {
        values.insert(format!("moment_{k}"), product_sc_moment(k)?);
    }
    report.checks.push(Check::within(
        "mean_moment_2",
        mean(&report, "moment_2"),
        values["moment_2"],
        th::PURE_SECOND_MOMENT,
    ));
    report.checks.push(Check::within(
        "mean_moment_4",
        mean(&report, "moment_4"),
        values["moment_4"],
        th::PURE_FOURTH_MOMENT,
    ));
    if d <= PURE_CROSS_CHECK_MAX_D {
        report.checks.push(Check::at_most(
            "max_method_gap",
            max_stat(&report, "method_gap"),
            th::PURE_METHOD_GAP,
        ));
    }
    report.theory.push(Theory {
        point: 0,
        law: Some(LimitLaw::ProductSemicircle),
        values,
    });
    Ok(report)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
