//! Unitary changes of basis used before coarse-graining an eigenstate.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which localized basis the weights `|ψ_m|²` refer to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisRotation {
    /// The basis the Hamiltonian is written in.
    Identity,
    /// Unitary discrete Fourier transform over a row-major grid.
    Fourier { shape: Vec<usize> },
    /// `H^{⊗N}`, mapping the `σ^z` basis to the `σ^x` basis.
    Hadamard { sites: usize },
}

impl BasisRotation {
    pub fn dim(&self) -> Option<usize> {
        match self {
            BasisRotation::Identity => None,
            BasisRotation::Fourier { shape } => Some(shape.iter().product()),
            BasisRotation::Hadamard { sites } => Some(1 << sites),
        }
    }

    /// Plans the transform once for repeated use.
    pub fn prepare(&self) -> Result<PreparedRotation> {
        let kind = match self {
            BasisRotation::Identity => Prepared::Identity,
            BasisRotation::Fourier { shape } => {
                if shape.is_empty() || shape.contains(&0) {
                    return Err(Error::invalid(
                        "rotation",
                        "Fourier shape must be nonempty and positive",
                    ));
                }
                let mut planner = FftPlanner::new();
                let plans = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
                Prepared::Fourier {
                    shape: shape.clone(),
                    plans,
                }
            }
            BasisRotation::Hadamard { sites } => {
                if *sites == 0 || *sites > 30 {
                    return Err(Error::invalid("rotation", "Hadamard needs 1..=30 sites"));
                }
                Prepared::Hadamard { sites: *sites }
            }
        };
        Ok(PreparedRotation { kind })
    }
}

#[derive(Clone)]
enum Prepared {
    Identity,
    Fourier {
        shape: Vec<usize>,
        plans: Vec<Arc<dyn Fft<f64>>>,
    },
    Hadamard {
        sites: usize,
    },
}

/// A [`BasisRotation`] with any transform plans built.
#[derive(Clone)]
pub struct PreparedRotation {
    kind: Prepared,
}

impl std::fmt::Debug for PreparedRotation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match &self.kind {
            Prepared::Identity => "Identity",
            Prepared::Fourier { .. } => "Fourier",
            Prepared::Hadamard { .. } => "Hadamard",
        };
        f.debug_struct("PreparedRotation")
            .field("kind", &name)
            .finish()
    }
}

impl PreparedRotation {
    pub fn identity() -> Self {
        Self {
            kind: Prepared::Identity,
        }
    }

    /// Rotates `state` in place.
    pub fn apply(&self, state: &mut [Complex64]) -> Result<()> {
        match &self.kind {
            Prepared::Identity => Ok(()),
            Prepared::Fourier { shape, plans } => {
                let d: usize = shape.iter().product();
                check_len(state.len(), d)?;
                // Axis k has stride equal to the product of the later axes.
                let mut stride = d;
                let mut line = Vec::new();
                for (&n, plan) in shape.iter().zip(plans) {
                    stride /= n;
                    line.resize(n, Complex64::new(0.0, 0.0));
                    for outer in 0..d / (n * stride) {
                        for inner in 0..stride {
                            let base = outer * n * stride + inner;
                            for (k, slot) in line.iter_mut().enumerate() {
                                *slot = state[base + k * stride];
                            }
                            plan.process(&mut line);
                            for (k, v) in line.iter().enumerate() {
                                state[base + k * stride] = *v;
                            }
                        }
                    }
                }
                let scale = 1.0 / (d as f64).sqrt();
                state.iter_mut().for_each(|z| *z *= scale);
                Ok(())
            }
            Prepared::Hadamard { sites } => {
                let d = 1usize << sites;
                check_len(state.len(), d)?;
                let mut h = 1;
                while h < d {
                    for block in (0..d).step_by(2 * h) {
                        for i in block..block + h {
                            let (a, b) = (state[i], state[i + h]);
                            state[i] = a + b;
                            state[i + h] = a - b;
                        }
                    }
                    h *= 2;
                }
                let scale = 1.0 / (d as f64).sqrt();
                state.iter_mut().for_each(|z| *z *= scale);
                Ok(())
            }
        }
    }
}

fn check_len(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::ContractViolation(format!(
            "rotation acts on dimension {want}, state has {got} entries"
        )));
    }
    Ok(())
}
