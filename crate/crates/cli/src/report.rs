use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use ptw_core::{Histogram, LimitLaw};

use crate::config::ExperimentConfig;
use crate::stats::Summary;

/// Units of the reported spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Eigenvalues of `Y = W^Γ`.
    WishartRaw,
    /// Eigenvalues of `d1 d2 · ρ^Γ`.
    StateTimesDim,
    /// Eigenvalues of `d · |ψ⟩⟨ψ|^Γ`.
    PureTimesD,
    /// No spectra (self-test, law tables).
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Index into the `(α, p)` grid.
    pub point: usize,
    pub alpha: f64,
    pub p: usize,
    pub trial: u64,
    pub stream_index: u64,
    pub stats: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub point: usize,
    pub alpha: f64,
    pub p: usize,
    pub statistic: String,
    #[serde(flatten)]
    pub summary: Summary,
}

/// Limit-law predictions for one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    pub point: usize,
    pub law: Option<LimitLaw>,
    pub values: BTreeMap<String, f64>,
}

/// PPT frequency at one `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub p: usize,
    pub trials: u64,
    pub ppt_count: u64,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monotonicity {
    /// Adjacent grid points where the frequency decreases.
    pub inversions: usize,
    /// Inversions whose confidence intervals do not overlap.
    pub significant_inversions: usize,
    /// At most one inversion and none significant.
    pub non_decreasing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|observed − expected| ≤ limit`.
    Within,
    /// `observed ≤ limit`.
    AtMost,
    /// `observed ≥ limit`.
    AtLeast,
    /// `observed = expected` exactly.
    Equal,
}

/// A pass/fail comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: Option<f64>,
    pub limit: Option<f64>,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, observed: f64, expected: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: Some(expected),
            limit: Some(limit),
            relation: Relation::Within,
            passed: (observed - expected).abs() <= limit,
        }
    }

    pub fn at_most(name: impl Into<String>, observed: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: None,
            limit: Some(limit),
            relation: Relation::AtMost,
            passed: observed <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, observed: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: None,
            limit: Some(limit),
            relation: Relation::AtLeast,
            passed: observed >= limit,
        }
    }

    pub fn equal(name: impl Into<String>, observed: f64, expected: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: Some(expected),
            limit: None,
            relation: Relation::Equal,
            passed: observed == expected,
        }
    }
}

/// A row of the `laws` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub law: String,
    pub statistic: String,
    pub x: Option<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub platform: String,
    /// Present only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl Provenance {
    pub fn current() -> Self {
        Self {
            tool: "ptw".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            rng: "ChaCha8 seeded by SplitMix64(master_seed), stream = stream_index".into(),
            platform: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
            wall_clock_seconds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub scale: Scale,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Vec<Aggregate>,
    pub theory: Vec<Theory>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotonicity: Option<Monotonicity>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<TableRow>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(config: ExperimentConfig, scale: Scale) -> Self {
        Self {
            config,
            scale,
            trials: Vec::new(),
            aggregates: Vec::new(),
            theory: Vec::new(),
            sweep: Vec::new(),
            monotonicity: None,
            checks: Vec::new(),
            tables: Vec::new(),
            provenance: Provenance::current(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Aggregate of `statistic` at grid point `point`.
    pub fn aggregate(&self, point: usize, statistic: &str) -> Option<&Summary> {
        self.aggregates
            .iter()
            .find(|a| a.point == point && a.statistic == statistic)
            .map(|a| &a.summary)
    }

    /// Fills `aggregates` from the trial records, statistic names in sorted order.
    pub fn aggregate_trials(&mut self, grid: &[crate::config::GridPoint]) {
        self.aggregates.clear();
        for (point, g) in grid.iter().enumerate() {
            let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for t in self.trials.iter().filter(|t| t.point == point) {
                for (k, v) in &t.stats {
                    columns.entry(k).or_default().push(*v);
                }
            }
            for (name, values) in columns {
                if let Some(summary) = Summary::of(&values) {
                    self.aggregates.push(Aggregate {
                        point,
                        alpha: g.alpha,
                        p: g.p,
                        statistic: name.to_string(),
                        summary,
                    });
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One row per (trial, statistic); self-test items and law tables get a blank trial.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "subcommand",
            "d1",
            "d2",
            "p",
            "alpha",
            "field",
            "trial",
            "statistic",
            "value",
        ])?;
        let c = &self.config;
        let sub = c.subcommand.name();
        let (d1, d2, field) = (c.d1.to_string(), c.d2.to_string(), c.field.to_string());
        for t in &self.trials {
            let (p, alpha, trial) = (t.p.to_string(), t.alpha.to_string(), t.trial.to_string());
            for (name, value) in &t.stats {
                w.write_record([
                    sub,
                    &d1,
                    &d2,
                    &p,
                    &alpha,
                    &field,
                    &trial,
                    name,
                    &value.to_string(),
                ])?;
            }
        }
        for check in &self.checks {
            if self.trials.is_empty() {
                w.write_record([
                    sub,
                    &d1,
                    &d2,
                    "",
                    "",
                    &field,
                    "",
                    &check.name,
                    &check.observed.to_string(),
                ])?;
            }
        }
        for row in &self.tables {
            let name = match row.x {
                Some(x) => format!("{}.{}@{}", row.law, row.statistic, x),
                None => format!("{}.{}", row.law, row.statistic),
            };
            w.write_record([
                sub,
                &d1,
                &d2,
                "",
                "",
                &field,
                "",
                &name,
                &row.value.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}
