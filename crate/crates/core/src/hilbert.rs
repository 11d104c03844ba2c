use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tensor-product structure of a Hilbert space: `site_count` sites of dimension
/// `site_dim` each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub site_count: usize,
    pub site_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    dim: usize,
    factorization: Option<Factorization>,
}

impl HilbertSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpace(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        Ok(Self {
            dim,
            factorization: None,
        })
    }

    /// `site_count` sites of dimension `site_dim`; basis states are enumerated
    /// with site 1 as the most significant digit.
    pub fn factorized(site_count: usize, site_dim: usize) -> Result<Self> {
        if site_count == 0 || site_dim < 2 {
            return Err(Error::InvalidSpace(format!(
                "need at least one site of dimension >= 2, got {site_count} sites of dimension {site_dim}"
            )));
        }
        let dim = u32::try_from(site_count)
            .ok()
            .and_then(|n| site_dim.checked_pow(n))
            .ok_or_else(|| Error::Resource(format!("{site_dim}^{site_count} overflows")))?;
        Ok(Self {
            dim,
            factorization: Some(Factorization {
                site_count,
                site_dim,
            }),
        })
    }

    /// `N` qubits.
    pub fn qubits(site_count: usize) -> Result<Self> {
        Self::factorized(site_count, 2)
    }

    /// A symmetry sector of a larger space. Sectors may be one-dimensional.
    pub(crate) fn sector(dim: usize) -> Self {
        debug_assert!(dim >= 1);
        Self {
            dim,
            factorization: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factorization(&self) -> Option<Factorization> {
        self.factorization
    }

    pub fn site_count(&self) -> Option<usize> {
        self.factorization.map(|f| f.site_count)
    }
}
