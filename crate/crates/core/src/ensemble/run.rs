use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use super::result::{EnsembleResult, RealizationRecord, Summary, Timing};
use super::spec::{Diagnostic, EnsembleSpec, SectorPolicy};
use crate::diagnostics::{
    abelian_reduce, ir_diversity, ks_distance, polarize_degenerate, r_statistics, Histogram,
    PreparedRotation, RDistribution,
};
use crate::error::{Error, Result};
use crate::models::{realization_seed, SectorDef};
use crate::operator::HermitianOperator;
use crate::sectors::{split_parity_sectors, Embedding};
use crate::spectral::{eigenvalues, spectral_decompose, DEFAULT_EPS_DEG};

/// Share of realizations allowed to fail before the whole run is rejected.
pub const FAILURE_CEILING: f64 = 0.01;

/// Default cap on the estimated working set of concurrently held matrices.
pub const DEFAULT_MEMORY_BUDGET: u64 = 16 << 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses every available core. Ignored without the
    /// `parallel` feature.
    pub workers: Option<usize>,
    pub memory_budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            workers: None,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl RunOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: Some(workers),
            ..Self::default()
        }
    }

    fn effective_workers(&self) -> usize {
        let avail = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        self.workers.unwrap_or(avail).max(1)
    }
}

/// Bytes held per worker: the operator, its eigenvectors and solver scratch.
pub fn estimated_bytes(dim: usize, workers: usize) -> u64 {
    3 * 16 * (dim as u64).pow(2) * workers as u64
}

/// Values produced by one realization, in a fixed order.
#[derive(Default)]
struct Sample {
    states: u64,
    omega_position: Vec<f64>,
    omega_momentum: Vec<f64>,
    r: Vec<f64>,
    dos: Vec<f64>,
}

struct Plan {
    spec: EnsembleSpec,
    sector_defs: Vec<SectorDef>,
    parity: Option<Vec<f64>>,
    momentum: Option<PreparedRotation>,
    want_vectors: bool,
    edge_trim: f64,
    dos_scale: f64,
}

struct Block {
    label: Option<String>,
    embedding: Option<Embedding>,
    h: HermitianOperator,
}

impl Plan {
    fn new(spec: EnsembleSpec) -> Result<Self> {
        let sector_defs = match spec.sectors {
            SectorPolicy::SymmetryResolved => spec.model.symmetry_sectors()?,
            _ => Vec::new(),
        };
        let parity = match spec.sectors {
            SectorPolicy::PerParitySector => spec.model.parity()?,
            _ => None,
        };
        let momentum = if spec.diagnostics.contains(&Diagnostic::OmegaMomentum) {
            let rot = spec.model.momentum_basis().expect("validated");
            Some(rot.prepare()?)
        } else {
            None
        };
        Ok(Self {
            want_vectors: spec.diagnostics.iter().any(|d| d.needs_vectors()),
            edge_trim: spec.edge_trim.expect("resolved"),
            dos_scale: spec.dos_scale.expect("resolved"),
            sector_defs,
            parity,
            momentum,
            spec,
        })
    }

    fn keep(&self, label: &str) -> bool {
        self.spec
            .keep_sectors
            .as_ref()
            .is_none_or(|k| k.iter().any(|l| l == label))
    }

    fn blocks(&self, h: HermitianOperator) -> Result<Vec<Block>> {
        let sectors = match self.spec.sectors {
            SectorPolicy::Full => {
                return Ok(vec![Block {
                    label: None,
                    embedding: None,
                    h,
                }])
            }
            SectorPolicy::PerParitySector => {
                let (even, odd) =
                    split_parity_sectors(&h, self.parity.as_ref().expect("validated"))?;
                vec![even, odd]
            }
            SectorPolicy::SymmetryResolved => self
                .sector_defs
                .iter()
                .filter(|d| self.keep(&d.label))
                .map(|d| d.project(&h))
                .collect::<Result<_>>()?,
        };
        Ok(sectors
            .into_iter()
            .filter(|s| self.keep(&s.label))
            .filter_map(|s| {
                let h = s.hamiltonian?;
                Some(Block {
                    label: Some(s.label),
                    embedding: Some(s.embedding),
                    h,
                })
            })
            .collect())
    }

    fn realize(&self, index: u64) -> Result<Sample> {
        let diags = &self.spec.diagnostics;
        let h = self.spec.model.build(index)?;
        let parent = h.dim();
        let seed = realization_seed(self.spec.master_seed(), index);
        let mut out = Sample::default();
        for (b, block) in self.blocks(h)?.into_iter().enumerate() {
            let eigs = if self.want_vectors {
                let dec = spectral_decompose(&block.h, DEFAULT_EPS_DEG)?;
                let dec = polarize_degenerate(
                    &dec,
                    self.spec.polarization,
                    realization_seed(seed, b as u64),
                );
                let vecs = dec.eigenvectors();
                for n in 0..dec.dim() {
                    let local = vecs.column(n);
                    let state = match &block.embedding {
                        Some(e) => e.lift(&local, parent),
                        None => local,
                    };
                    if diags.contains(&Diagnostic::OmegaPosition) {
                        out.omega_position
                            .push(ir_diversity(&abelian_reduce(&state, None)?).1);
                    }
                    if let Some(rot) = &self.momentum {
                        out.omega_momentum
                            .push(ir_diversity(&abelian_reduce(&state, Some(rot))?).1);
                    }
                }
                dec.eigenvalues().to_vec()
            } else {
                eigenvalues(&block.h)?
            };
            out.states += eigs.len() as u64;
            if diags.contains(&Diagnostic::RStats) {
                match r_statistics(&eigs, self.edge_trim) {
                    Ok(g) => out.r.extend(g.r_values),
                    // Small sectors carry no ratios; only a whole spectrum must.
                    Err(Error::InsufficientData { .. }) if block.label.is_some() => {}
                    Err(e) => return Err(e),
                }
            }
            if diags.contains(&Diagnostic::Dos) {
                out.dos.extend(eigs.iter().map(|e| e / self.dos_scale));
            }
        }
        Ok(out)
    }
}

struct Accumulator {
    histograms: BTreeMap<Diagnostic, Histogram>,
    summaries: BTreeMap<Diagnostic, Summary>,
    r_pool: Vec<f64>,
    records: Vec<RealizationRecord>,
    failed: usize,
}

impl Accumulator {
    fn new(spec: &EnsembleSpec) -> Result<Self> {
        let bins = spec.histogram.bins;
        let mut histograms = BTreeMap::new();
        for &d in &spec.diagnostics {
            let (lo, hi) = match d {
                Diagnostic::Dos => (spec.histogram.dos_range[0], spec.histogram.dos_range[1]),
                _ => (0.0, 1.0),
            };
            histograms.insert(d, Histogram::new(lo, hi, bins)?);
        }
        Ok(Self {
            summaries: spec
                .diagnostics
                .iter()
                .map(|&d| (d, Summary::default()))
                .collect(),
            histograms,
            r_pool: Vec::new(),
            records: Vec::new(),
            failed: 0,
        })
    }

    fn absorb(&mut self, index: u64, seed: u64, sample: Result<Sample>) {
        let sample = match sample {
            Ok(s) => s,
            Err(e) => {
                self.failed += 1;
                self.records.push(RealizationRecord {
                    index,
                    seed,
                    states: 0,
                    error: Some(e.to_string()),
                });
                return;
            }
        };
        for (d, values) in [
            (Diagnostic::OmegaPosition, &sample.omega_position),
            (Diagnostic::OmegaMomentum, &sample.omega_momentum),
            (Diagnostic::RStats, &sample.r),
            (Diagnostic::Dos, &sample.dos),
        ] {
            if let Some(h) = self.histograms.get_mut(&d) {
                values.iter().for_each(|&x| h.add(x));
                let s = self.summaries.get_mut(&d).expect("paired with histogram");
                values.iter().for_each(|&x| s.add(x));
            }
        }
        self.r_pool.extend_from_slice(&sample.r);
        self.records.push(RealizationRecord {
            index,
            seed,
            states: sample.states,
            error: None,
        });
    }
}

#[cfg(feature = "parallel")]
fn map_chunk<T: Send>(
    pool: Option<&rayon::ThreadPool>,
    range: std::ops::Range<u64>,
    f: impl Fn(u64) -> T + Sync,
) -> Vec<T> {
    use rayon::prelude::*;
    match pool {
        Some(p) => p.install(|| range.into_par_iter().map(&f).collect()),
        None => range.map(f).collect(),
    }
}

/// Runs every realization of `spec` and aggregates the diagnostics.
///
/// Realizations are processed in chunks; within a chunk they may run on any
/// worker, but results are always merged in realization order, so the
/// outcome does not depend on the worker count.
pub fn run_ensemble(spec: &EnsembleSpec, options: &RunOptions) -> Result<EnsembleResult> {
    let start = Instant::now();
    let spec = spec.resolved()?;
    let dim = spec.model.dim()?;
    let workers = if cfg!(feature = "parallel") {
        options.effective_workers()
    } else {
        1
    };
    let need = estimated_bytes(dim, workers);
    if need > options.memory_budget {
        return Err(Error::Resource(format!(
            "D = {dim} with {workers} workers needs about {need} bytes, budget is {}",
            options.memory_budget
        )));
    }
    let total = spec.realizations.expect("resolved");
    let master = spec.master_seed();
    let plan = Plan::new(spec.clone())?;
    let mut acc = Accumulator::new(&spec)?;

    #[cfg(feature = "parallel")]
    let pool = if workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?,
        )
    } else {
        None
    };

    let chunk = (8 * workers).max(16) as u64;
    let mut next = 0u64;
    while next < total as u64 {
        let end = (next + chunk).min(total as u64);
        #[cfg(feature = "parallel")]
        let samples = map_chunk(pool.as_ref(), next..end, |i| plan.realize(i));
        #[cfg(not(feature = "parallel"))]
        let samples: Vec<_> = (next..end).map(|i| plan.realize(i)).collect();
        for (i, s) in (next..end).zip(samples) {
            acc.absorb(i, realization_seed(master, i), s);
        }
        next = end;
    }

    if acc.failed as f64 > FAILURE_CEILING * total as f64 {
        return Err(Error::EnsembleFailure {
            failed: acc.failed,
            total,
        });
    }
    let mut r_ks = BTreeMap::new();
    if !acc.r_pool.is_empty() {
        for dist in RDistribution::ALL {
            r_ks.insert(dist, ks_distance(&acc.r_pool, |r| dist.cdf(r)));
        }
    }
    acc.summaries.retain(|_, s| s.count > 0);
    let finished_at_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(EnsembleResult {
        master_seed: master,
        realizations: total,
        failed: acc.failed,
        histograms: acc.histograms,
        summaries: acc.summaries,
        r_ks,
        records: acc.records,
        timing: Timing {
            wall_time_seconds: start.elapsed().as_secs_f64(),
            finished_at_unix,
        },
        spec,
    })
}
