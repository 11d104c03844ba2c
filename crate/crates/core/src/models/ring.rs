//! One-dimensional rings: `H = L + L⁻¹` plus a diagonal potential or link noise.

use std::f64::consts::PI;

use faer::Mat;
use rand_chacha::ChaCha8Rng;

use super::Sampler;
use crate::error::{Error, Result};

pub(super) fn check_dim(dim: usize) -> Result<()> {
    if dim < 3 {
        return Err(Error::invalid(
            "dim",
            format!("rings need at least 3 sites, got {dim}"),
        ));
    }
    if dim > super::MAX_DIM {
        return Err(Error::Resource(format!(
            "dimension {dim} exceeds {}",
            super::MAX_DIM
        )));
    }
    Ok(())
}

pub(super) fn free(d: usize) -> Mat<f64> {
    let mut h = Mat::zeros(d, d);
    for n in 0..d {
        let m = (n + 1) % d;
        h[(n, m)] = 1.0;
        h[(m, n)] = 1.0;
    }
    h
}

/// Free ring plus `λ ζ_n` on the diagonal.
pub(super) fn anderson(d: usize, lambda: f64, zeta: &Sampler, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let mut h = free(d);
    for n in 0..d {
        h[(n, n)] = lambda * zeta.draw(rng);
    }
    h
}

/// Free ring plus `2λ cos(2πωn + φ)` for sites `n = 1..D`.
pub(super) fn aubry_andre(d: usize, lambda: f64, omega: f64, phi: f64) -> Mat<f64> {
    let mut h = free(d);
    for n in 0..d {
        h[(n, n)] = 2.0 * lambda * (2.0 * PI * omega * (n + 1) as f64 + phi).cos();
    }
    h
}

/// Hopping `H_{n,n+1} = ζ_n` around the ring.
pub(super) fn random_link(d: usize, zeta: &Sampler, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let mut h = Mat::zeros(d, d);
    for n in 0..d {
        let m = (n + 1) % d;
        let z = zeta.draw(rng);
        h[(n, m)] = z;
        h[(m, n)] = z;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::super::{ModelSpec, Variant};
    use crate::operator::clock_shift;
    use crate::spectral::eigenvalues;

    #[test]
    fn free_ring_commutes_with_shift() {
        for d in [3, 5, 8] {
            let h = ModelSpec::new(Variant::FreeRing { dim: d })
                .build(0)
                .unwrap();
            let l = clock_shift(h.space()).unwrap();
            assert!(h.commutator_norm(l.as_ref()) < 1e-12);
        }
    }

    #[test]
    fn aubry_andre_potential() {
        let spec = ModelSpec::new(Variant::AubryAndre {
            dim: 7,
            lambda: 0.5,
            omega: 0.25,
            phi: Some(0.0),
        });
        let h = spec.build(0).unwrap();
        // cos(2π · 0.25 · n) for n = 1..7 is 0, -1, 0, 1, 0, -1, 0.
        let expect = [0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0];
        for (n, e) in expect.iter().enumerate() {
            assert!((h.get(n, n).re - e).abs() < 1e-12);
        }
        assert_eq!(h.get(0, 6).re, 1.0);
    }

    #[test]
    fn anderson_zero_lambda_is_free() {
        let a = ModelSpec::new(Variant::AndersonRing {
            dim: 6,
            lambda: 0.0,
        })
        .build(3)
        .unwrap();
        let f = ModelSpec::new(Variant::FreeRing { dim: 6 })
            .build(0)
            .unwrap();
        assert_eq!(eigenvalues(&a).unwrap(), eigenvalues(&f).unwrap());
    }

    #[test]
    fn random_link_mean_is_one() {
        let spec = ModelSpec::new(Variant::RandomLinkRing {
            dim: 4000,
            lambda: 0.25,
        })
        .with_seed(2);
        let h = spec.build(0).unwrap();
        let d = h.dim();
        let links: Vec<f64> = (0..d).map(|n| h.get(n, (n + 1) % d).re).collect();
        let mean = links.iter().sum::<f64>() / d as f64;
        let var = links.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d as f64;
        assert!((mean - 1.0).abs() < 0.03);
        assert!((var - 0.25).abs() < 0.03);
        assert_eq!(h.get(0, 0).re, 0.0);
    }

    #[test]
    fn small_rings_rejected() {
        assert!(ModelSpec::new(Variant::FreeRing { dim: 2 })
            .build(0)
            .is_err());
        assert!(ModelSpec::new(Variant::AndersonRing {
            dim: 5,
            lambda: -1.0
        })
        .build(0)
        .is_err());
    }
}
