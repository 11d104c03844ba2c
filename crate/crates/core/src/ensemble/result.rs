use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::spec::{Diagnostic, EnsembleSpec};
use crate::diagnostics::{Histogram, RDistribution};
use crate::error::{Error, Result};

/// Streaming count, mean, variance and range.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    /// Unbiased sample variance; zero below two samples.
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    #[serde(skip)]
    m2: f64,
}

impl Default for Summary {
    fn default() -> Self {
        Self {
            count: 0,
            mean: 0.0,
            variance: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            m2: 0.0,
        }
    }
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Self {
        let mut s = Self::default();
        values.iter().for_each(|&x| s.add(x));
        s
    }

    pub fn add(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        self.refresh();
    }

    /// Pairwise (Chan) combination.
    pub fn merge(&mut self, other: &Summary) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        self.refresh();
    }

    fn refresh(&mut self) {
        self.variance = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
    }

    pub fn std(&self) -> f64 {
        self.variance.sqrt()
    }
}

impl PartialEq for Summary {
    fn eq(&self, o: &Self) -> bool {
        (self.count, self.mean, self.variance, self.min, self.max)
            == (o.count, o.mean, o.variance, o.min, o.max)
    }
}

// `m2` is not serialized; rebuild it from the variance so merging keeps working
// after a round trip.
impl Summary {
    pub(crate) fn restore(&mut self) {
        self.m2 = if self.count > 1 {
            self.variance * (self.count - 1) as f64
        } else {
            0.0
        };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub index: u64,
    pub seed: u64,
    /// Eigenstates diagnosed (after sector selection).
    pub states: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Run metadata that legitimately differs between otherwise identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Timing {
    pub wall_time_seconds: f64,
    pub finished_at_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    /// The resolved spec; rerunning it reproduces this result.
    pub spec: EnsembleSpec,
    pub master_seed: u64,
    pub realizations: usize,
    pub failed: usize,
    pub histograms: BTreeMap<Diagnostic, Histogram>,
    pub summaries: BTreeMap<Diagnostic, Summary>,
    /// Kolmogorov–Smirnov distance of the pooled spacing ratios from each
    /// reference law.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub r_ks: BTreeMap<RDistribution, f64>,
    pub records: Vec<RealizationRecord>,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
        }
    }
}

impl EnsembleResult {
    /// Equality ignoring [`Timing`].
    pub fn same_outcome(&self, other: &EnsembleResult) -> bool {
        let strip = |r: &EnsembleResult| EnsembleResult {
            timing: Timing::default(),
            ..r.clone()
        };
        strip(self) == strip(other)
    }

    pub fn diagnosed_states(&self) -> u64 {
        self.records.iter().map(|r| r.states).sum()
    }

    pub fn mean(&self, d: Diagnostic) -> Option<f64> {
        self.summaries
            .get(&d)
            .filter(|s| s.count > 0)
            .map(|s| s.mean)
    }

    /// `<variant>_<D>_<seed>.<ext>`.
    pub fn file_name(&self, format: ExportFormat) -> String {
        let d = self
            .spec
            .model
            .dim()
            .map(|d| d.to_string())
            .unwrap_or_else(|_| "x".into());
        format!(
            "{}_{d}_{}.{}",
            self.spec.model.name(),
            self.master_seed,
            format.extension()
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut r: EnsembleResult = serde_json::from_str(s)?;
        r.summaries.values_mut().for_each(Summary::restore);
        Ok(r)
    }

    /// Header comments carry the master seed and the spec echo; rows are
    /// `diagnostic,bin_left,bin_right,count`. Histograms with no entries
    /// contribute no rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        let spec = serde_json::to_string(&self.spec)?;
        let _ = writeln!(out, "# master_seed: {}", self.master_seed);
        let _ = writeln!(out, "# spec: {spec}");
        let _ = writeln!(
            out,
            "# realizations: {} failed: {}",
            self.realizations, self.failed
        );
        for (d, s) in &self.summaries {
            let _ = writeln!(
                out,
                "# summary {}: count={} mean={} variance={} min={} max={}",
                d.name(),
                s.count,
                s.mean,
                s.variance,
                s.min,
                s.max
            );
        }
        for (d, h) in &self.histograms {
            if h.overflow > 0 {
                let _ = writeln!(out, "# overflow {}: {}", d.name(), h.overflow);
            }
        }
        for (r, ks) in &self.r_ks {
            let _ = writeln!(out, "# ks_r {}: {ks}", r.name());
        }
        out.push_str("diagnostic,bin_left,bin_right,count\n");
        for (d, h) in &self.histograms {
            if h.total() == 0 {
                continue;
            }
            for (i, c) in h.counts.iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{c}", d.name(), h.edge(i), h.edge(i + 1));
            }
        }
        Ok(out)
    }

    /// Writes `self` into `dir` under [`EnsembleResult::file_name`].
    pub fn export(&self, dir: &Path, format: ExportFormat) -> Result<PathBuf> {
        let path = dir.join(self.file_name(format));
        let body = match format {
            ExportFormat::Csv => self.to_csv()?,
            ExportFormat::Json => self.to_json()?,
        };
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}
