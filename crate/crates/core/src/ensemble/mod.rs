//! Disorder ensembles: build, diagonalize and diagnose many realizations,
//! then aggregate histograms and summaries with full provenance.

mod result;
mod run;
mod spec;

pub use result::{EnsembleResult, ExportFormat, RealizationRecord, Summary, Timing};
pub use run::{estimated_bytes, run_ensemble, RunOptions, DEFAULT_MEMORY_BUDGET, FAILURE_CEILING};
pub use spec::{Diagnostic, EnsembleSpec, HistogramConfig, SectorPolicy, DEFAULT_STATE_BUDGET};
