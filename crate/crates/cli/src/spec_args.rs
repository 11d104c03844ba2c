//! Turning flags (and optionally a spec file) into a validated `EnsembleSpec`.
//!
//! Flags are translated into the same JSON document a spec file would hold and
//! then parsed by the same code, so both routes agree by construction.

use std::path::PathBuf;

use clap::Args;
use ergolab_core::ensemble::EnsembleSpec;
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Default, Args)]
pub struct SpecArgs {
    /// JSON experiment spec; any flags below override its fields.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,

    /// Model variant, e.g. goe, anderson_ring, syk.
    #[arg(long)]
    pub model: Option<String>,

    /// Hilbert-space dimension for ring, graph and matrix models.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Number of spins, or of Majoranas for syk.
    #[arg(long)]
    pub sites: Option<usize>,

    /// Extra model parameter; repeatable. Values are parsed as JSON.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,

    /// Disorder distribution, e.g. gaussian:0,1 or uniform:-1,1.
    #[arg(long, value_name = "DIST:P1,P2")]
    pub disorder: Option<String>,

    #[arg(long)]
    pub boundary: Option<String>,

    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub realizations: Option<usize>,

    /// Comma-separated: omega_position, omega_momentum, r_stats, dos.
    #[arg(long, value_delimiter = ',')]
    pub diagnostics: Option<Vec<String>>,

    #[arg(long)]
    pub bins: Option<usize>,

    /// Lower and upper edge of the density-of-states histogram.
    #[arg(long, value_name = "LO:HI")]
    pub dos_range: Option<String>,

    /// full, per_parity or symmetry_resolved.
    #[arg(long = "sector")]
    pub sector: Option<String>,

    /// Comma-separated sector labels to keep.
    #[arg(long, value_delimiter = ',')]
    pub keep_sectors: Option<Vec<String>>,

    /// as_returned or random_orthogonal.
    #[arg(long)]
    pub polarization: Option<String>,

    #[arg(long)]
    pub edge_trim: Option<f64>,

    #[arg(long)]
    pub dos_scale: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_owned()))
}

fn object<'a>(v: &'a mut Value, key: &str) -> &'a mut Map<String, Value> {
    let map = v.as_object_mut().expect("object");
    let slot = map.entry(key).or_insert_with(|| json!({}));
    if !slot.is_object() {
        *slot = json!({});
    }
    slot.as_object_mut().expect("object")
}

fn parse_numbers(field: &str, s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("{field}: `{p}` is not a number")))
        })
        .collect()
}

impl SpecArgs {
    fn has_model_flags(&self) -> bool {
        self.model.is_some()
            || self.dim.is_some()
            || self.sites.is_some()
            || !self.params.is_empty()
    }

    /// The spec document before typed parsing.
    pub fn to_json(&self) -> Result<Value, CliError> {
        let mut doc = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<Value>(&text).map_err(|e| {
                    invalid(format!(
                        "{}: line {} column {}: {e}",
                        path.display(),
                        e.line(),
                        e.column()
                    ))
                })?
            }
            None => json!({}),
        };
        if !doc.is_object() {
            return Err(invalid("spec must be a JSON object"));
        }
        if self.has_model_flags() {
            let model = object(&mut doc, "model");
            if let Some(name) = &self.model {
                // A new variant starts from a clean parameter set.
                if model.get("variant").and_then(Value::as_str) != Some(name) {
                    model.insert("params".into(), json!({}));
                }
                model.insert("variant".into(), json!(name));
            }
            let variant = model
                .get("variant")
                .and_then(Value::as_str)
                .map(str::to_owned);
            let Some(variant) = variant else {
                return Err(invalid("--model is required"));
            };
            let params = object(doc.get_mut("model").expect("model"), "params");
            if let Some(d) = self.dim {
                params.insert("dim".into(), json!(d));
            }
            if let Some(n) = self.sites {
                let key = if variant == "syk" {
                    "majoranas"
                } else {
                    "sites"
                };
                params.insert(key.into(), json!(n));
            }
            for kv in &self.params {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| invalid(format!("--param `{kv}` must look like key=value")))?;
                params.insert(k.trim().to_owned(), parse_value(v.trim()));
            }
        }
        if self.disorder.is_some() || self.seed.is_some() {
            object(&mut doc, "model");
            let disorder = object(doc.get_mut("model").expect("model"), "disorder");
            if let Some(d) = &self.disorder {
                let (name, ps) = d.split_once(':').unwrap_or((d.as_str(), ""));
                disorder.insert("dist".into(), json!(name.trim()));
                disorder.insert("params".into(), json!(parse_numbers("--disorder", ps)?));
            }
            if let Some(seed) = self.seed {
                disorder.insert("seed".into(), json!(seed));
            }
        }
        if let Some(b) = &self.boundary {
            object(&mut doc, "model").insert("boundary".into(), json!(b));
        }
        let top = doc.as_object_mut().expect("object");
        if let Some(r) = self.realizations {
            top.insert("realizations".into(), json!(r));
        }
        if let Some(d) = &self.diagnostics {
            top.insert("diagnostics".into(), json!(d));
        }
        if let Some(s) = &self.sector {
            top.insert("sectors".into(), json!(s));
        }
        if let Some(k) = &self.keep_sectors {
            top.insert("keep_sectors".into(), json!(k));
        }
        if let Some(p) = &self.polarization {
            top.insert("polarization".into(), json!(p));
        }
        if let Some(t) = self.edge_trim {
            top.insert("edge_trim".into(), json!(t));
        }
        if let Some(s) = self.dos_scale {
            top.insert("dos_scale".into(), json!(s));
        }
        if self.bins.is_some() || self.dos_range.is_some() {
            let hist = object(&mut doc, "histogram");
            if let Some(b) = self.bins {
                hist.insert("bins".into(), json!(b));
            }
            if let Some(r) = &self.dos_range {
                let (lo, hi) = r
                    .split_once(':')
                    .ok_or_else(|| invalid(format!("--dos-range `{r}` must look like LO:HI")))?;
                let lo: f64 = lo
                    .parse()
                    .map_err(|_| invalid(format!("--dos-range: bad number `{lo}`")))?;
                let hi: f64 = hi
                    .parse()
                    .map_err(|_| invalid(format!("--dos-range: bad number `{hi}`")))?;
                hist.insert("dos_range".into(), json!([lo, hi]));
            }
        }
        if !doc.get("model").is_some_and(Value::is_object) {
            return Err(invalid("no model given: pass --model or a --spec file"));
        }
        Ok(doc)
    }

    pub fn to_spec(&self) -> Result<EnsembleSpec, CliError> {
        parse_spec(self.to_json()?)
    }
}

/// Typed, validated spec from a JSON document.
pub fn parse_spec(doc: Value) -> Result<EnsembleSpec, CliError> {
    let spec: EnsembleSpec =
        serde_json::from_value(doc).map_err(|e| invalid(format!("spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}
