//! Hamiltonian families, built from a serializable [`ModelSpec`].
//!
//! Randomness is drawn from a per-realization stream seeded by
//! [`disorder::realization_seed`]. Within a realization the diagonal is drawn
//! first, then off-diagonal entries in row-major order, then couplings in
//! lexicographic multi-index order.

pub mod disorder;
mod gaussian;
mod graph;
mod lattice;
mod ring;
mod spin;
mod syk;
mod symmetry;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::diagnostics::BasisRotation;
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::operator::HermitianOperator;

pub use disorder::{realization_rng, realization_seed, DisorderSpec, Distribution, Sampler};
pub use graph::random_regular_graph;
pub use lattice::{stadium_layout, StadiumLayout};
pub use spin::{MAX_SPIN_SITES, MIN_SPIN_SITES};
pub use syk::{majorana_operators, MAX_MAJORANAS, MIN_MAJORANAS};
pub use symmetry::SectorDef;

/// `(√5 − 1)/2`.
pub const GOLDEN_OMEGA: f64 = 0.618_033_988_749_894_8;

/// Largest dense dimension any builder will produce.
pub const MAX_DIM: usize = 16_384;

fn golden() -> f64 {
    GOLDEN_OMEGA
}

fn default_ising_g() -> f64 {
    (5.0 + 5f64.sqrt()) / 8.0
}

fn default_ising_h() -> f64 {
    (1.0 + 5f64.sqrt()) / 4.0
}

fn default_orders() -> Vec<usize> {
    vec![1, 2]
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    #[default]
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum Variant {
    FreeRing {
        dim: usize,
    },
    AndersonRing {
        dim: usize,
        lambda: f64,
    },
    AubryAndre {
        dim: usize,
        lambda: f64,
        #[serde(default = "golden")]
        omega: f64,
        /// Fixed phase; drawn uniformly from `[0, 2π)` per realization when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<f64>,
    },
    RandomLinkRing {
        dim: usize,
        lambda: f64,
    },
    Torus2d {
        lx: usize,
        ly: usize,
        #[serde(default)]
        lambda: f64,
    },
    Stadium {
        lx: usize,
        ly: usize,
        radius: f64,
    },
    RandomRegularGraph {
        dim: usize,
        degree: usize,
    },
    Goe {
        dim: usize,
    },
    Gue {
        dim: usize,
    },
    Tfim {
        sites: usize,
        h: f64,
    },
    InteractingIsing {
        sites: usize,
        #[serde(default = "default_ising_g")]
        g: f64,
        #[serde(default = "default_ising_h")]
        h: f64,
    },
    EdwardsAnderson {
        sites: usize,
    },
    SherringtonKirkpatrick {
        sites: usize,
    },
    MblHeisenberg {
        sites: usize,
        #[serde(default = "one")]
        j: f64,
        h: f64,
    },
    HypercubeFree {
        sites: usize,
        #[serde(default = "default_orders")]
        orders: Vec<usize>,
    },
    Syk {
        majoranas: usize,
    },
}

/// One Hamiltonian family instance. JSON form:
/// `{"variant": ..., "params": {...}, "disorder": {"dist", "params", "seed"}, "boundary": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelSpec")]
pub struct ModelSpec {
    #[serde(flatten)]
    pub variant: Variant,
    #[serde(default)]
    pub disorder: DisorderSpec,
    #[serde(default)]
    pub boundary: Boundary,
}

// The derived form of a flattened, adjacently tagged enum silently drops
// unknown keys; this detour rejects them so typos in a spec are caught.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelSpec {
    variant: String,
    #[serde(default)]
    params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    disorder: DisorderSpec,
    #[serde(default)]
    boundary: Boundary,
}

impl TryFrom<RawModelSpec> for ModelSpec {
    type Error = String;

    fn try_from(raw: RawModelSpec) -> std::result::Result<Self, String> {
        let given: Vec<String> = raw
            .params
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, _)| k.clone())
            .collect();
        let tagged = serde_json::json!({ "variant": raw.variant, "params": raw.params });
        let variant: Variant = serde_json::from_value(tagged).map_err(|e| e.to_string())?;
        let echo = serde_json::to_value(&variant).map_err(|e| e.to_string())?;
        let known = echo.get("params").and_then(|p| p.as_object());
        if let Some(unknown) = given
            .iter()
            .find(|k| !known.is_some_and(|m| m.contains_key(*k)))
        {
            let mut names: Vec<&str> = known
                .map(|m| m.keys().map(String::as_str).collect())
                .unwrap_or_default();
            names.sort_unstable();
            return Err(format!(
                "unknown parameter `{unknown}` for model `{}`; expected one of: {}",
                raw.variant,
                names.join(", ")
            ));
        }
        Ok(ModelSpec {
            variant,
            disorder: raw.disorder,
            boundary: raw.boundary,
        })
    }
}

impl ModelSpec {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            disorder: DisorderSpec::default(),
            boundary: Boundary::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.disorder.seed = seed;
        self
    }

    pub fn with_distribution(mut self, dist: Distribution) -> Self {
        self.disorder.distribution = Some(dist);
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn master_seed(&self) -> u64 {
        self.disorder.seed
    }

    /// Snake-case variant name as used in JSON and file names.
    pub fn name(&self) -> &'static str {
        match self.variant {
            Variant::FreeRing { .. } => "free_ring",
            Variant::AndersonRing { .. } => "anderson_ring",
            Variant::AubryAndre { .. } => "aubry_andre",
            Variant::RandomLinkRing { .. } => "random_link_ring",
            Variant::Torus2d { .. } => "torus2d",
            Variant::Stadium { .. } => "stadium",
            Variant::RandomRegularGraph { .. } => "random_regular_graph",
            Variant::Goe { .. } => "goe",
            Variant::Gue { .. } => "gue",
            Variant::Tfim { .. } => "tfim",
            Variant::InteractingIsing { .. } => "interacting_ising",
            Variant::EdwardsAnderson { .. } => "edwards_anderson",
            Variant::SherringtonKirkpatrick { .. } => "sherrington_kirkpatrick",
            Variant::MblHeisenberg { .. } => "mbl_heisenberg",
            Variant::HypercubeFree { .. } => "hypercube_free",
            Variant::Syk { .. } => "syk",
        }
    }

    /// Disorder distribution that the builder will use, or `None` for models
    /// that take none.
    pub fn effective_distribution(&self) -> Option<Distribution> {
        let standard = Distribution::Gaussian {
            mean: 0.0,
            std: 1.0,
        };
        match self.variant {
            Variant::AndersonRing { .. }
            | Variant::Torus2d { .. }
            | Variant::EdwardsAnderson { .. }
            | Variant::SherringtonKirkpatrick { .. }
            | Variant::Syk { .. } => Some(self.disorder.distribution.unwrap_or(standard)),
            Variant::RandomLinkRing { lambda, .. } => Some(self.disorder.distribution.unwrap_or(
                Distribution::Gaussian {
                    mean: 1.0,
                    std: lambda.max(0.0).sqrt(),
                },
            )),
            Variant::RandomRegularGraph { .. } => self.disorder.distribution,
            _ => None,
        }
    }

    /// True when every realization is the same matrix.
    pub fn is_deterministic(&self) -> bool {
        match &self.variant {
            Variant::FreeRing { .. }
            | Variant::Stadium { .. }
            | Variant::Tfim { .. }
            | Variant::InteractingIsing { .. }
            | Variant::HypercubeFree { .. } => true,
            Variant::AubryAndre { phi, .. } => phi.is_some(),
            Variant::MblHeisenberg { h, .. } => *h == 0.0,
            Variant::Torus2d { lambda, .. } => *lambda == 0.0,
            Variant::Goe { .. } | Variant::Gue { .. } | Variant::RandomRegularGraph { .. } => false,
            _ => matches!(
                self.effective_distribution(),
                Some(Distribution::Constant(_))
            ),
        }
    }

    /// Hilbert-space dimension. Stadium dimensions depend on the obstacle and
    /// are computed from the lattice.
    pub fn dim(&self) -> Result<usize> {
        self.validate()?;
        Ok(match &self.variant {
            Variant::FreeRing { dim }
            | Variant::AndersonRing { dim, .. }
            | Variant::AubryAndre { dim, .. }
            | Variant::RandomLinkRing { dim, .. }
            | Variant::RandomRegularGraph { dim, .. }
            | Variant::Goe { dim }
            | Variant::Gue { dim } => *dim,
            Variant::Torus2d { lx, ly, .. } => lx * ly,
            Variant::Stadium { lx, ly, radius } => stadium_layout(*lx, *ly, *radius)?.dim(),
            Variant::Tfim { sites, .. }
            | Variant::InteractingIsing { sites, .. }
            | Variant::EdwardsAnderson { sites }
            | Variant::SherringtonKirkpatrick { sites }
            | Variant::MblHeisenberg { sites, .. }
            | Variant::HypercubeFree { sites, .. } => 1 << sites,
            Variant::Syk { majoranas } => 1 << (majoranas / 2),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let explicit = self.disorder.distribution;
        if let Some(d) = explicit {
            d.validate()?;
            if self.effective_distribution().is_none() {
                return Err(Error::invalid(
                    "disorder.dist",
                    format!(
                        "model {} does not take a disorder distribution",
                        self.name()
                    ),
                ));
            }
        }
        let nonneg = |field: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(field, "must be finite and nonnegative"))
            }
        };
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(field, "must be finite"))
            }
        };
        match &self.variant {
            Variant::FreeRing { dim } => ring::check_dim(*dim),
            Variant::AndersonRing { dim, lambda } | Variant::RandomLinkRing { dim, lambda } => {
                ring::check_dim(*dim)?;
                nonneg("lambda", *lambda)
            }
            Variant::AubryAndre {
                dim,
                lambda,
                omega,
                phi,
            } => {
                ring::check_dim(*dim)?;
                nonneg("lambda", *lambda)?;
                finite("omega", *omega)?;
                if let Some(p) = phi {
                    finite("phi", *p)?;
                }
                Ok(())
            }
            Variant::Torus2d { lx, ly, lambda } => {
                lattice::check_sides(*lx, *ly)?;
                nonneg("lambda", *lambda)
            }
            Variant::Stadium { lx, ly, radius } => {
                lattice::stadium_layout(*lx, *ly, *radius).map(|_| ())
            }
            Variant::RandomRegularGraph { dim, degree } => graph::check(*dim, *degree),
            Variant::Goe { dim } | Variant::Gue { dim } => gaussian::check_dim(*dim),
            Variant::Tfim { sites, h } => {
                spin::check_sites(*sites)?;
                finite("h", *h)
            }
            Variant::InteractingIsing { sites, g, h } => {
                spin::check_sites(*sites)?;
                finite("g", *g)?;
                finite("h", *h)
            }
            Variant::EdwardsAnderson { sites } | Variant::SherringtonKirkpatrick { sites } => {
                spin::check_sites(*sites)
            }
            Variant::MblHeisenberg { sites, j, h } => {
                spin::check_sites(*sites)?;
                finite("j", *j)?;
                nonneg("h", *h)
            }
            Variant::HypercubeFree { sites, orders } => {
                spin::check_sites(*sites)?;
                if orders.is_empty() || orders.iter().any(|&k| k == 0 || k > *sites) {
                    return Err(Error::invalid(
                        "orders",
                        format!("each order must lie in 1..={sites}"),
                    ));
                }
                Ok(())
            }
            Variant::Syk { majoranas } => syk::check(*majoranas),
        }
    }

    /// Hamiltonian of realization `index`. Identical inputs give bit-identical
    /// matrices.
    pub fn build(&self, index: u64) -> Result<HermitianOperator> {
        self.validate()?;
        let seed = self.master_seed();
        let mut rng = realization_rng(seed, index);
        let sampler = self.effective_distribution().map(|d| d.sampler());
        let sampler = || sampler.expect("model has a distribution");
        let mut warnings = Vec::new();
        let h = match &self.variant {
            Variant::FreeRing { dim } => ring::free(*dim),
            Variant::AndersonRing { dim, lambda } => {
                ring::anderson(*dim, *lambda, &sampler(), &mut rng)
            }
            Variant::AubryAndre {
                dim,
                lambda,
                omega,
                phi,
            } => {
                let phi = phi.unwrap_or_else(|| rand::Rng::random_range(&mut rng, 0.0..2.0 * PI));
                ring::aubry_andre(*dim, *lambda, *omega, phi)
            }
            Variant::RandomLinkRing { dim, .. } => ring::random_link(*dim, &sampler(), &mut rng),
            Variant::Torus2d { lx, ly, lambda } => {
                lattice::torus(*lx, *ly, *lambda, &sampler(), &mut rng)
            }
            Variant::Stadium { lx, ly, radius } => {
                let layout = stadium_layout(*lx, *ly, *radius)?;
                warnings.extend(layout.warnings.iter().cloned());
                lattice::stadium(&layout)
            }
            Variant::RandomRegularGraph { dim, degree } => {
                let edges = random_regular_graph(*dim, *degree, &mut rng)?;
                graph::adjacency(
                    *dim,
                    &edges,
                    self.effective_distribution().map(|d| d.sampler()),
                    &mut rng,
                )
            }
            Variant::Goe { dim } => gaussian::goe(*dim, &mut rng),
            Variant::Gue { dim } => {
                return self.finish(gaussian::gue(*dim, &mut rng)?, index, &warnings)
            }
            Variant::Tfim { .. }
            | Variant::InteractingIsing { .. }
            | Variant::EdwardsAnderson { .. }
            | Variant::SherringtonKirkpatrick { .. }
            | Variant::MblHeisenberg { .. }
            | Variant::HypercubeFree { .. } => {
                let op = spin::build(
                    &self.variant,
                    self.boundary,
                    self.effective_distribution(),
                    &mut rng,
                )?;
                return self.finish(op, index, &warnings);
            }
            Variant::Syk { majoranas } => {
                return self.finish(
                    syk::build(*majoranas, &sampler(), &mut rng)?,
                    index,
                    &warnings,
                )
            }
        };
        let space = HilbertSpace::new(h.nrows())?;
        self.finish(HermitianOperator::from_real(space, h)?, index, &warnings)
    }

    fn finish(
        &self,
        op: HermitianOperator,
        index: u64,
        warnings: &[String],
    ) -> Result<HermitianOperator> {
        let mut prov = format!(
            "{} D={} seed={} realization={index}",
            self.name(),
            op.dim(),
            self.master_seed()
        );
        for w in warnings {
            prov.push_str("; warning: ");
            prov.push_str(w);
        }
        Ok(op.with_provenance(prov))
    }

    /// Rotation into the model's momentum basis, when it has one: discrete
    /// Fourier for rings and tori, the `σ^x` product basis for spin models.
    pub fn momentum_basis(&self) -> Option<BasisRotation> {
        match &self.variant {
            Variant::FreeRing { dim }
            | Variant::AndersonRing { dim, .. }
            | Variant::AubryAndre { dim, .. }
            | Variant::RandomLinkRing { dim, .. } => {
                Some(BasisRotation::Fourier { shape: vec![*dim] })
            }
            Variant::Torus2d { lx, ly, .. } => Some(BasisRotation::Fourier {
                shape: vec![*lx, *ly],
            }),
            Variant::Tfim { sites, .. }
            | Variant::InteractingIsing { sites, .. }
            | Variant::EdwardsAnderson { sites }
            | Variant::SherringtonKirkpatrick { sites }
            | Variant::MblHeisenberg { sites, .. }
            | Variant::HypercubeFree { sites, .. } => {
                Some(BasisRotation::Hadamard { sites: *sites })
            }
            Variant::Syk { majoranas } => Some(BasisRotation::Hadamard {
                sites: majoranas / 2,
            }),
            Variant::Stadium { .. }
            | Variant::RandomRegularGraph { .. }
            | Variant::Goe { .. }
            | Variant::Gue { .. } => None,
        }
    }

    /// Diagonal `±1` parity commuting with every realization, if the model
    /// has one.
    pub fn parity(&self) -> Result<Option<Vec<f64>>> {
        Ok(match &self.variant {
            Variant::Tfim { sites, .. } => Some(symmetry::z_parity(*sites)),
            Variant::Syk { majoranas } => Some(symmetry::z_parity(majoranas / 2)),
            _ => None,
        })
    }

    /// Symmetry sectors that together cover the spectrum without repeating
    /// any multiplet. Empty when no symmetry is known for the model.
    pub fn symmetry_sectors(&self) -> Result<Vec<SectorDef>> {
        self.validate()?;
        symmetry::sectors(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigenvalues;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn json_shape() {
        let spec = ModelSpec::new(Variant::AndersonRing {
            dim: 16,
            lambda: 2.0,
        })
        .with_distribution(Distribution::Cauchy {
            location: 0.0,
            scale: 1.0,
        })
        .with_seed(5);
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["variant"], "anderson_ring");
        assert_eq!(v["params"]["dim"], 16);
        assert_eq!(v["disorder"]["dist"], "cauchy");
        assert_eq!(v["disorder"]["seed"], 5);
        assert_eq!(v["boundary"], "open");
        let back: ModelSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn json_defaults() {
        let spec: ModelSpec =
            serde_json::from_str(r#"{"variant":"interacting_ising","params":{"sites":6}}"#)
                .unwrap();
        assert_eq!(
            spec.variant,
            Variant::InteractingIsing {
                sites: 6,
                g: default_ising_g(),
                h: default_ising_h()
            }
        );
        assert_eq!(spec.boundary, Boundary::Open);
        let aa: ModelSpec =
            serde_json::from_str(r#"{"variant":"aubry_andre","params":{"dim":8,"lambda":1}}"#)
                .unwrap();
        assert!(
            matches!(aa.variant, Variant::AubryAndre { omega, phi: None, .. } if omega == GOLDEN_OMEGA)
        );
        assert!(serde_json::from_str::<ModelSpec>(r#"{"variant":"nope","params":{}}"#).is_err());
    }

    #[test]
    fn every_variant_round_trips() {
        let variants = vec![
            Variant::FreeRing { dim: 4 },
            Variant::AndersonRing {
                dim: 4,
                lambda: 0.5,
            },
            Variant::AubryAndre {
                dim: 5,
                lambda: 1.0,
                omega: 0.3,
                phi: Some(0.25),
            },
            Variant::RandomLinkRing {
                dim: 6,
                lambda: 0.1,
            },
            Variant::Torus2d {
                lx: 3,
                ly: 4,
                lambda: 0.0,
            },
            Variant::Stadium {
                lx: 10,
                ly: 10,
                radius: 2.5,
            },
            Variant::RandomRegularGraph { dim: 10, degree: 3 },
            Variant::Goe { dim: 3 },
            Variant::Gue { dim: 3 },
            Variant::Tfim { sites: 3, h: 0.1 },
            Variant::InteractingIsing {
                sites: 3,
                g: 1.0,
                h: 0.0,
            },
            Variant::EdwardsAnderson { sites: 3 },
            Variant::SherringtonKirkpatrick { sites: 3 },
            Variant::MblHeisenberg {
                sites: 3,
                j: 1.0,
                h: 2.0,
            },
            Variant::HypercubeFree {
                sites: 3,
                orders: vec![1],
            },
            Variant::Syk { majoranas: 8 },
        ];
        for v in variants {
            let spec = ModelSpec::new(v).with_seed(3);
            let s = serde_json::to_string(&spec).unwrap();
            let back: ModelSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(back, spec, "{s}");
            let h = spec.build(0).unwrap();
            assert_eq!(h.dim(), spec.dim().unwrap(), "{s}");
            assert_eq!(h, spec.build(0).unwrap(), "{s}");
        }
    }

    #[test]
    fn distribution_on_deterministic_model_is_rejected() {
        let spec =
            ModelSpec::new(Variant::Goe { dim: 4 }).with_distribution(Distribution::Rademacher);
        assert!(spec.validate().unwrap_err().is_validation());
    }

    #[test]
    fn free_ring_spectrum() {
        let h = ModelSpec::new(Variant::FreeRing { dim: 4 })
            .build(0)
            .unwrap();
        let e = eigenvalues(&h).unwrap();
        for (a, b) in e.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_free_spectrum_is_separable() {
        let h = ModelSpec::new(Variant::Torus2d {
            lx: 4,
            ly: 4,
            lambda: 0.0,
        })
        .build(0)
        .unwrap();
        let e = eigenvalues(&h).unwrap();
        let expect = sorted(
            (0..4)
                .flat_map(|k| {
                    (0..4).map(move |l| {
                        2.0 * (PI * k as f64 / 2.0).cos() + 2.0 * (PI * l as f64 / 2.0).cos()
                    })
                })
                .collect(),
        );
        for (a, b) in e.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn realizations_differ_but_repeat() {
        let spec = ModelSpec::new(Variant::Goe { dim: 6 }).with_seed(1);
        assert_ne!(spec.build(0).unwrap(), spec.build(1).unwrap());
        assert_eq!(spec.build(1).unwrap(), spec.build(1).unwrap());
        assert_ne!(
            spec.build(0).unwrap(),
            spec.clone().with_seed(2).build(0).unwrap()
        );
    }

    #[test]
    fn provenance_names_the_realization() {
        let h = ModelSpec::new(Variant::Goe { dim: 3 })
            .with_seed(9)
            .build(4)
            .unwrap();
        assert_eq!(h.provenance(), Some("goe D=3 seed=9 realization=4"));
    }
}
