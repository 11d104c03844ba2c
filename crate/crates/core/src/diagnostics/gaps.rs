//! Level-spacing ratios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Levels closer than this times `‖H‖_F / D` count as one level.
pub const COLLAPSE_TOLERANCE: f64 = 1e-12;

/// Fewest distinct levels that yield one spacing ratio.
pub const MIN_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStatistics {
    pub r_values: Vec<f64>,
    pub spacings: Vec<f64>,
    pub edge_trim_fraction: f64,
    /// Levels merged into a neighbor because they were numerically equal.
    pub collapsed: usize,
}

impl GapStatistics {
    pub fn mean_r(&self) -> f64 {
        self.r_values.iter().sum::<f64>() / self.r_values.len() as f64
    }
}

/// Merges numerically equal levels of an ascending spectrum. `‖H‖_F` is
/// `sqrt(Σ E²)`.
pub fn collapse_degeneracies(eigenvalues: &[f64]) -> Vec<f64> {
    let d = eigenvalues.len();
    if d == 0 {
        return Vec::new();
    }
    let frob = eigenvalues.iter().map(|e| e * e).sum::<f64>().sqrt();
    let tol = COLLAPSE_TOLERANCE * frob / d as f64;
    let mut out = vec![eigenvalues[0]];
    let mut last = eigenvalues[0];
    for &e in &eigenvalues[1..] {
        if e - last >= tol && e != last {
            out.push(e);
        }
        last = e;
    }
    out
}

/// `r_n = min(s_n, s_{n−1}) / max(s_n, s_{n−1})` over the bulk of an
/// ascending spectrum, after collapsing degeneracies and dropping
/// `⌊edge_trim_fraction · n⌋` levels from each end.
pub fn r_statistics(eigenvalues: &[f64], edge_trim_fraction: f64) -> Result<GapStatistics> {
    if !(0.0..0.5).contains(&edge_trim_fraction) {
        return Err(Error::invalid("edge_trim", "must lie in [0, 0.5)"));
    }
    if eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::ContractViolation("non-finite eigenvalue".into()));
    }
    if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::ContractViolation(
            "eigenvalues must be sorted ascending".into(),
        ));
    }
    let levels = collapse_degeneracies(eigenvalues);
    let collapsed = eigenvalues.len() - levels.len();
    let trim = (edge_trim_fraction * levels.len() as f64).floor() as usize;
    let bulk = if 2 * trim < levels.len() {
        &levels[trim..levels.len() - trim]
    } else {
        &levels[..0]
    };
    if bulk.len() < MIN_LEVELS {
        return Err(Error::InsufficientData {
            needed: MIN_LEVELS,
            got: bulk.len(),
        });
    }
    let spacings: Vec<f64> = bulk.windows(2).map(|w| w[1] - w[0]).collect();
    let r_values = spacings
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            a.min(b) / a.max(b)
        })
        .collect();
    Ok(GapStatistics {
        r_values,
        spacings,
        edge_trim_fraction,
        collapsed,
    })
}
