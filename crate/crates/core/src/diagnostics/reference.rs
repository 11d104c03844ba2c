//! Closed-form reference distributions and the Kolmogorov–Smirnov distance.
//!
//! Spacing-ratio densities live on `r ∈ [0, 1]`, matching `r = min/max`. The
//! Wigner-like surmise `(1/Z_β)(r + r²)^β / (1 + r + r²)^{1 + 3β/2}` is
//! invariant under `P(r) dr ↦ P(1/r) d(1/r)`, and the constants `Z_β` below
//! normalize it on `[0, 1]` (the same expression integrates to 2 on `[0, ∞)`).

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z_β` for `β = 1, 2, 4`.
pub fn surmise_normalization(beta: u8) -> Result<f64> {
    let s3 = 3f64.sqrt();
    match beta {
        1 => Ok(4.0 / 27.0),
        2 => Ok(2.0 * PI / (81.0 * s3)),
        4 => Ok(2.0 * PI / (729.0 * s3)),
        _ => Err(Error::invalid(
            "beta",
            format!("must be 1, 2 or 4, got {beta}"),
        )),
    }
}

/// Surmise density on `[0, 1]`; zero outside.
pub fn surmise_pdf(beta: u8, r: f64) -> Result<f64> {
    let z = surmise_normalization(beta)?;
    if !(0.0..=1.0).contains(&r) {
        return Ok(0.0);
    }
    let b = beta as f64;
    Ok((r + r * r).powf(b) / (1.0 + r + r * r).powf(1.0 + 1.5 * b) / z)
}

/// `2/(1 + r)²` on `[0, 1]`.
pub fn poisson_r_pdf(r: f64) -> f64 {
    if (0.0..=1.0).contains(&r) {
        2.0 / ((1.0 + r) * (1.0 + r))
    } else {
        0.0
    }
}

/// `2r/(1 + r)` on `[0, 1]`.
pub fn poisson_r_cdf(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    2.0 * r / (1.0 + r)
}

/// `⟨r⟩ = 2 ln 2 − 1` for Poisson levels.
pub fn poisson_mean_r() -> f64 {
    2.0 * 2f64.ln() - 1.0
}

const CDF_INTERVALS: usize = 4096;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

fn surmise_table(beta: u8) -> &'static [f64] {
    static TABLES: [OnceLock<Vec<f64>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match beta {
        1 => 0,
        2 => 1,
        _ => 2,
    };
    TABLES[slot].get_or_init(|| {
        let h = 1.0 / CDF_INTERVALS as f64;
        let mut table = Vec::with_capacity(CDF_INTERVALS + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for i in 0..CDF_INTERVALS {
            let a = i as f64 * h;
            acc += simpson(|r| surmise_pdf(beta, r).expect("valid beta"), a, a + h, 8);
            table.push(acc);
        }
        table
    })
}

/// Surmise CDF, tabulated once per `β` and linearly interpolated.
pub fn surmise_cdf(beta: u8, r: f64) -> Result<f64> {
    surmise_normalization(beta)?;
    let table = surmise_table(beta);
    let x = r.clamp(0.0, 1.0) * CDF_INTERVALS as f64;
    let i = (x.floor() as usize).min(CDF_INTERVALS - 1);
    let t = x - i as f64;
    Ok(table[i] + t * (table[i + 1] - table[i]))
}

/// Reference laws for spacing ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RDistribution {
    Poisson,
    Goe,
    Gue,
    Gse,
}

impl RDistribution {
    pub const ALL: [RDistribution; 4] = [Self::Poisson, Self::Goe, Self::Gue, Self::Gse];

    pub fn name(self) -> &'static str {
        match self {
            RDistribution::Poisson => "poisson",
            RDistribution::Goe => "goe",
            RDistribution::Gue => "gue",
            RDistribution::Gse => "gse",
        }
    }

    pub fn beta(self) -> Option<u8> {
        match self {
            RDistribution::Poisson => None,
            RDistribution::Goe => Some(1),
            RDistribution::Gue => Some(2),
            RDistribution::Gse => Some(4),
        }
    }

    pub fn pdf(self, r: f64) -> f64 {
        match self.beta() {
            None => poisson_r_pdf(r),
            Some(b) => surmise_pdf(b, r).expect("valid beta"),
        }
    }

    pub fn cdf(self, r: f64) -> f64 {
        match self.beta() {
            None => poisson_r_cdf(r),
            Some(b) => surmise_cdf(b, r).expect("valid beta"),
        }
    }
}

/// `sup_x |F_n(x) − F(x)|` for the empirical CDF of `samples`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        worst = worst.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    worst
}

/// Limiting eigenvalue densities of rescaled random matrices and graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceDensity {
    /// `(1/2π)√(4 − E²)`; applies to `H/√D` for Gaussian ensembles.
    Semicircle,
    /// `[d(d−1)/2π] √(4 − E²) / (d² − (d−1)E²)`; applies to `A/√(d−1)` for
    /// `d`-regular graphs.
    KestenMckay { d: u32 },
}

impl ReferenceDensity {
    pub fn validate(&self) -> Result<()> {
        match self {
            ReferenceDensity::KestenMckay { d } if *d < 3 => Err(Error::invalid(
                "d",
                format!("Kesten–McKay needs d >= 3, got {d}"),
            )),
            _ => Ok(()),
        }
    }
}

pub fn reference_density(kind: ReferenceDensity, e: f64) -> Result<f64> {
    kind.validate()?;
    if !(e.abs() <= 2.0) {
        return Ok(0.0);
    }
    let root = (4.0 - e * e).sqrt();
    Ok(match kind {
        ReferenceDensity::Semicircle => root / (2.0 * PI),
        ReferenceDensity::KestenMckay { d } => {
            let d = d as f64;
            d * (d - 1.0) / (2.0 * PI) * root / (d * d - (d - 1.0) * e * e)
        }
    })
}
