//! Choice of basis inside degenerate eigenspaces.

use faer::Mat;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::spectral::{Eigenvectors, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    /// Keep the eigensolver's basis.
    #[default]
    AsReturned,
    /// Haar-random rotation inside every degeneracy block.
    RandomOrthogonal,
}

trait Gaussian: Scalar {
    fn gaussian(rng: &mut ChaCha8Rng) -> Self;
}

impl Gaussian for f64 {
    fn gaussian(rng: &mut ChaCha8Rng) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Gaussian for Complex64 {
    fn gaussian(rng: &mut ChaCha8Rng) -> Self {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    }
}

/// Haar-distributed `k × k` orthogonal or unitary matrix, by Gram–Schmidt on
/// Gaussian columns.
fn haar<T: Gaussian>(k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<T> = (0..k).map(|_| T::gaussian(rng)).collect();
        for q in &cols {
            let mut dot = T::zero();
            for (a, b) in q.iter().zip(&v) {
                dot += a.conj() * *b;
            }
            for (x, a) in v.iter_mut().zip(q) {
                *x = *x - *a * dot;
            }
        }
        let norm = v.iter().map(|x| x.abs2()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / norm));
        cols.push(v);
    }
    cols
}

fn rotate_blocks<T: Gaussian>(
    v: &mut Mat<T>,
    blocks: &[std::ops::Range<usize>],
    rng: &mut ChaCha8Rng,
) {
    let d = v.nrows();
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let q = haar::<T>(block.len(), rng);
        let old: Vec<Vec<T>> = block
            .clone()
            .map(|c| (0..d).map(|i| v[(i, c)]).collect())
            .collect();
        for (j, col) in block.clone().enumerate() {
            for i in 0..d {
                let mut acc = T::zero();
                for (a, qa) in old.iter().zip(&q[j]) {
                    acc += a[i] * *qa;
                }
                v[(i, col)] = acc;
            }
        }
    }
}

/// Applies `mode` to every degeneracy block of `dec`. Blocks are visited in
/// order, each consuming fresh draws from a stream seeded by `seed`.
pub fn polarize_degenerate(
    dec: &SpectralDecomposition,
    mode: Polarization,
    seed: u64,
) -> SpectralDecomposition {
    let mut out = dec.clone();
    if mode == Polarization::AsReturned || !dec.has_degeneracies() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match &mut out.eigenvectors {
        Eigenvectors::Real(v) => rotate_blocks(v, &dec.degeneracy_blocks, &mut rng),
        Eigenvectors::Complex(v) => rotate_blocks(v, &dec.degeneracy_blocks, &mut rng),
    }
    out
}
