//! Disorder distributions and the per-realization random stream.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution as _, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    Gaussian { mean: f64, std: f64 },
    Cauchy { location: f64, scale: f64 },
    Rademacher,
    Uniform { low: f64, high: f64 },
    Constant(f64),
}

impl Distribution {
    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Gaussian { .. } => "gaussian",
            Distribution::Cauchy { .. } => "cauchy",
            Distribution::Rademacher => "rademacher",
            Distribution::Uniform { .. } => "uniform",
            Distribution::Constant(_) => "constant",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Distribution::Gaussian { mean, std } => vec![mean, std],
            Distribution::Cauchy { location, scale } => vec![location, scale],
            Distribution::Rademacher => vec![],
            Distribution::Uniform { low, high } => vec![low, high],
            Distribution::Constant(c) => vec![c],
        }
    }

    /// Parses a name and parameter list, e.g. `("gaussian", [0, 1])`.
    pub fn from_parts(name: &str, params: &[f64]) -> Result<Self> {
        let field = "disorder.params";
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::invalid(
                    field,
                    format!("{name} takes {n} parameter(s), got {}", params.len()),
                ))
            }
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid(field, "parameters must be finite"));
        }
        let dist = match name.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => {
                want(2)?;
                Distribution::Gaussian {
                    mean: params[0],
                    std: params[1],
                }
            }
            "cauchy" => {
                want(2)?;
                Distribution::Cauchy {
                    location: params[0],
                    scale: params[1],
                }
            }
            "rademacher" => {
                want(0)?;
                Distribution::Rademacher
            }
            "uniform" => {
                want(2)?;
                Distribution::Uniform {
                    low: params[0],
                    high: params[1],
                }
            }
            "constant" => {
                want(1)?;
                Distribution::Constant(params[0])
            }
            other => {
                return Err(Error::invalid(
                    "disorder.dist",
                    format!("unknown distribution {other:?}"),
                ))
            }
        };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Distribution::Gaussian { std, .. } if !(std >= 0.0) => Err(Error::invalid(
                "disorder.params",
                "gaussian std must be >= 0",
            )),
            Distribution::Cauchy { scale, .. } if !(scale > 0.0) => Err(Error::invalid(
                "disorder.params",
                "cauchy scale must be > 0",
            )),
            Distribution::Uniform { low, high } if !(low <= high) => Err(Error::invalid(
                "disorder.params",
                "uniform needs low <= high",
            )),
            _ => Ok(()),
        }
    }

    pub fn sampler(&self) -> Sampler {
        let kind = match *self {
            Distribution::Gaussian { mean, std } => {
                SamplerKind::Gaussian(Normal::new(mean, std).expect("validated std"))
            }
            Distribution::Cauchy { location, scale } => {
                SamplerKind::Cauchy(Cauchy::new(location, scale).expect("validated scale"))
            }
            Distribution::Rademacher => SamplerKind::Rademacher,
            Distribution::Uniform { low, high } if low == high => SamplerKind::Constant(low),
            Distribution::Uniform { low, high } => {
                SamplerKind::Uniform(Uniform::new(low, high).expect("validated bounds"))
            }
            Distribution::Constant(c) => SamplerKind::Constant(c),
        };
        Sampler { kind }
    }
}

#[derive(Debug, Clone, Copy)]
enum SamplerKind {
    Gaussian(Normal<f64>),
    Cauchy(Cauchy<f64>),
    Rademacher,
    Uniform(Uniform<f64>),
    Constant(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    kind: SamplerKind,
}

impl Sampler {
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match &self.kind {
            SamplerKind::Gaussian(d) => d.sample(rng),
            SamplerKind::Cauchy(d) => d.sample(rng),
            SamplerKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            SamplerKind::Uniform(d) => d.sample(rng),
            SamplerKind::Constant(c) => *c,
        }
    }
}

/// Disorder configuration of a model. `distribution: None` selects the
/// model's own default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDisorder", into = "RawDisorder")]
pub struct DisorderSpec {
    pub distribution: Option<Distribution>,
    pub seed: u64,
}

impl DisorderSpec {
    pub fn new(distribution: Distribution, seed: u64) -> Result<Self> {
        distribution.validate()?;
        Ok(Self {
            distribution: Some(distribution),
            seed,
        })
    }

    pub fn seed_only(seed: u64) -> Self {
        Self {
            distribution: None,
            seed,
        }
    }
}

impl Default for DisorderSpec {
    fn default() -> Self {
        Self::seed_only(0)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisorder {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<f64>,
    #[serde(default)]
    seed: u64,
}

impl TryFrom<RawDisorder> for DisorderSpec {
    type Error = Error;

    fn try_from(raw: RawDisorder) -> Result<Self> {
        let distribution = match raw.dist {
            Some(name) => Some(Distribution::from_parts(&name, &raw.params)?),
            None if !raw.params.is_empty() => {
                return Err(Error::invalid(
                    "disorder.params",
                    "parameters given without `dist`",
                ))
            }
            None => None,
        };
        Ok(Self {
            distribution,
            seed: raw.seed,
        })
    }
}

impl From<DisorderSpec> for RawDisorder {
    fn from(d: DisorderSpec) -> Self {
        RawDisorder {
            dist: d.distribution.map(|x| x.name().to_owned()),
            params: d.distribution.map(|x| x.params()).unwrap_or_default(),
            seed: d.seed,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index` under `master_seed`.
pub fn realization_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Fresh random stream for one realization.
pub fn realization_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(realization_seed(master_seed, index))
}
