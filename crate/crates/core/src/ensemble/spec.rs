use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagnostics::Polarization;
use crate::error::{Error, Result};
use crate::models::{ModelSpec, Variant};

/// Total number of diagnosed states an ensemble aims for by default;
/// realizations default to `K / D`.
pub const DEFAULT_STATE_BUDGET: usize = 1_024_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    /// IR diversity in the computational basis.
    OmegaPosition,
    /// IR diversity after rotating into the model's momentum basis.
    OmegaMomentum,
    /// Spacing ratios of the (trimmed, sector-resolved) spectrum.
    RStats,
    /// Density of states of `H / dos_scale`.
    Dos,
}

impl Diagnostic {
    pub const ALL: [Diagnostic; 4] = [
        Diagnostic::OmegaPosition,
        Diagnostic::OmegaMomentum,
        Diagnostic::RStats,
        Diagnostic::Dos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::OmegaPosition => "omega_position",
            Diagnostic::OmegaMomentum => "omega_momentum",
            Diagnostic::RStats => "r_stats",
            Diagnostic::Dos => "dos",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::invalid("diagnostics", format!("unknown diagnostic `{s}`")))
    }

    pub(crate) fn needs_vectors(self) -> bool {
        matches!(self, Diagnostic::OmegaPosition | Diagnostic::OmegaMomentum)
    }
}

/// How the Hilbert space is split before diagonalizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorPolicy {
    /// Diagonalize the whole operator.
    #[default]
    Full,
    /// Split by the model's `±1` parity.
    #[serde(alias = "per_parity")]
    PerParitySector,
    /// Split by every known discrete symmetry of the model.
    #[serde(alias = "symmetry")]
    SymmetryResolved,
}

impl SectorPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| Error::invalid("sectors", format!("unknown sector policy `{s}`")))
    }
}

fn default_bins() -> usize {
    50
}

fn default_dos_range() -> [f64; 2] {
    [-2.5, 2.5]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramConfig {
    /// Bins per histogram. `Ω` and `r` histograms span `[0, 1]`.
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_dos_range")]
    pub dos_range: [f64; 2],
}

impl Default for HistogramConfig {
    fn default() -> Self {
        Self {
            bins: default_bins(),
            dos_range: default_dos_range(),
        }
    }
}

fn default_diagnostics() -> BTreeSet<Diagnostic> {
    [Diagnostic::OmegaPosition, Diagnostic::RStats].into()
}

/// A complete ensemble experiment. Optional fields take model-dependent
/// defaults; [`EnsembleSpec::resolved`] fills them in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(default = "default_diagnostics")]
    pub diagnostics: BTreeSet<Diagnostic>,
    #[serde(default)]
    pub histogram: HistogramConfig,
    #[serde(default)]
    pub sectors: SectorPolicy,
    /// Restrict diagnostics to these sector labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep_sectors: Option<Vec<String>>,
    #[serde(default)]
    pub polarization: Polarization,
    /// Fraction of levels dropped at each spectral edge before `r` statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_trim: Option<f64>,
    /// Eigenvalues are divided by this before the density-of-states histogram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dos_scale: Option<f64>,
}

impl EnsembleSpec {
    pub fn new(model: ModelSpec) -> Self {
        Self {
            model,
            realizations: None,
            diagnostics: default_diagnostics(),
            histogram: HistogramConfig::default(),
            sectors: SectorPolicy::Full,
            keep_sectors: None,
            polarization: Polarization::AsReturned,
            edge_trim: None,
            dos_scale: None,
        }
    }

    pub fn with_realizations(mut self, n: usize) -> Self {
        self.realizations = Some(n);
        self
    }

    pub fn with_diagnostics(mut self, d: impl IntoIterator<Item = Diagnostic>) -> Self {
        self.diagnostics = d.into_iter().collect();
        self
    }

    pub fn with_sectors(mut self, policy: SectorPolicy) -> Self {
        self.sectors = policy;
        self
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.histogram.bins = bins;
        self
    }

    pub fn master_seed(&self) -> u64 {
        self.model.master_seed()
    }

    /// `max(1, round(K/D))` for disordered models, 1 for deterministic ones.
    pub fn default_realizations(model: &ModelSpec) -> Result<usize> {
        if model.is_deterministic() {
            return Ok(1);
        }
        let d = model.dim()?;
        Ok(((DEFAULT_STATE_BUDGET as f64 / d as f64).round() as usize).max(1))
    }

    fn default_edge_trim(&self) -> f64 {
        match self.model.variant {
            Variant::Goe { .. } | Variant::Gue { .. } => 0.0,
            _ => 0.1,
        }
    }

    fn default_dos_scale(&self) -> Result<f64> {
        Ok(match self.model.variant {
            Variant::Goe { dim } | Variant::Gue { dim } => (dim as f64).sqrt(),
            Variant::RandomRegularGraph { degree, .. } => ((degree - 1) as f64).sqrt(),
            _ => 1.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.realizations == Some(0) {
            return Err(Error::invalid("realizations", "must be at least 1"));
        }
        if self.diagnostics.is_empty() {
            return Err(Error::invalid(
                "diagnostics",
                "at least one diagnostic is required",
            ));
        }
        if self.histogram.bins == 0 {
            return Err(Error::invalid("histogram.bins", "need at least one bin"));
        }
        let [lo, hi] = self.histogram.dos_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid("histogram.dos_range", "need finite lo < hi"));
        }
        if let Some(t) = self.edge_trim {
            if !(0.0..0.5).contains(&t) {
                return Err(Error::invalid(
                    "edge_trim",
                    format!("must lie in [0, 0.5), got {t}"),
                ));
            }
        }
        if let Some(s) = self.dos_scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::invalid(
                    "dos_scale",
                    format!("must be positive, got {s}"),
                ));
            }
        }
        if self.diagnostics.contains(&Diagnostic::OmegaMomentum)
            && self.model.momentum_basis().is_none()
        {
            return Err(Error::invalid(
                "diagnostics",
                format!("model `{}` has no momentum basis", self.model.name()),
            ));
        }
        let labels = match self.sectors {
            SectorPolicy::Full => None,
            SectorPolicy::PerParitySector => {
                if self.model.parity()?.is_none() {
                    return Err(Error::invalid(
                        "sectors",
                        format!("model `{}` has no parity symmetry", self.model.name()),
                    ));
                }
                Some(vec!["P+".to_owned(), "P-".to_owned()])
            }
            SectorPolicy::SymmetryResolved => {
                let defs = self.model.symmetry_sectors()?;
                if defs.is_empty() {
                    return Err(Error::invalid(
                        "sectors",
                        format!(
                            "no symmetry sectors are known for model `{}`",
                            self.model.name()
                        ),
                    ));
                }
                Some(defs.into_iter().map(|d| d.label).collect())
            }
        };
        if let Some(keep) = &self.keep_sectors {
            let Some(labels) = labels else {
                return Err(Error::invalid(
                    "keep_sectors",
                    "needs a sector policy other than `full`",
                ));
            };
            if keep.is_empty() {
                return Err(Error::invalid(
                    "keep_sectors",
                    "must name at least one sector",
                ));
            }
            if let Some(bad) = keep.iter().find(|k| !labels.contains(k)) {
                return Err(Error::invalid(
                    "keep_sectors",
                    format!("unknown sector `{bad}`; available: {}", labels.join(", ")),
                ));
            }
        }
        Ok(())
    }

    /// Validated copy with every default made explicit. Resolving is
    /// idempotent, so a resolved spec echoed to disk reruns identically.
    pub fn resolved(&self) -> Result<Self> {
        self.validate()?;
        let mut out = self.clone();
        if out.realizations.is_none() {
            out.realizations = Some(Self::default_realizations(&self.model)?);
        }
        if out.edge_trim.is_none() {
            out.edge_trim = Some(self.default_edge_trim());
        }
        if out.dos_scale.is_none() {
            out.dos_scale = Some(self.default_dos_scale()?);
        }
        Ok(out)
    }
}
