//! Gaussian orthogonal and unitary ensembles.

use std::f64::consts::SQRT_2;

use faer::Mat;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::operator::HermitianOperator;

pub(super) fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidSpace(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    if dim > super::MAX_DIM {
        return Err(Error::Resource(format!(
            "dimension {dim} exceeds {}",
            super::MAX_DIM
        )));
    }
    Ok(())
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Real symmetric; off-diagonal variance 1, diagonal variance 2.
pub(super) fn goe(d: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let mut h = Mat::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = SQRT_2 * normal(rng);
    }
    for i in 0..d {
        for j in i + 1..d {
            let x = normal(rng);
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    h
}

/// Hermitian; off-diagonal real and imaginary parts of variance 1/2,
/// diagonal variance 1.
pub(super) fn gue(d: usize, rng: &mut ChaCha8Rng) -> Result<HermitianOperator> {
    let mut h = Mat::<Complex64>::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = Complex64::new(normal(rng), 0.0);
    }
    for i in 0..d {
        for j in i + 1..d {
            let z = Complex64::new(normal(rng), normal(rng)) / SQRT_2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    HermitianOperator::from_complex(HilbertSpace::new(d)?, h)
}
