//! Random regular graphs.

use faer::Mat;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Sampler;
use crate::error::{Error, Result};

/// Restarts allowed before sampling gives up.
pub const MAX_RESTARTS: usize = 1000;

pub(super) fn check(dim: usize, degree: usize) -> Result<()> {
    if degree < 3 || degree >= dim {
        return Err(Error::invalid(
            "degree",
            format!("need 3 <= d < D, got d={degree}, D={dim}"),
        ));
    }
    if !(dim * degree).is_multiple_of(2) {
        return Err(Error::invalid(
            "degree",
            format!("d·D must be even, got d={degree}, D={dim}"),
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

/// Simple `degree`-regular graph on `dim` vertices as a sorted list of edges
/// `(i, j)` with `i < j`.
///
/// Pairing model: the `dim · degree` half-edges are matched two at a time,
/// uniformly among the unmatched ones; a pair that would form a self-loop or a
/// repeated edge is rejected and redrawn. When no admissible pair remains the
/// whole matching restarts, up to [`MAX_RESTARTS`] times.
pub fn random_regular_graph(
    dim: usize,
    degree: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>> {
    check(dim, degree)?;
    'restart: for _ in 0..MAX_RESTARTS {
        let mut free: Vec<usize> = (0..dim)
            .flat_map(|v| std::iter::repeat_n(v, degree))
            .collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(degree); dim];
        let mut misses = 0usize;
        while !free.is_empty() {
            let n = free.len();
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let (u, v) = (free[a], free[b]);
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
                let (hi, lo) = (a.max(b), a.min(b));
                free.swap_remove(hi);
                free.swap_remove(lo);
                misses = 0;
                continue;
            }
            misses += 1;
            if misses >= 16 * n {
                if !has_admissible_pair(&free, &adj) {
                    continue 'restart;
                }
                misses = 0;
            }
        }
        let mut edges: Vec<(usize, usize)> = adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        edges.sort_unstable();
        return Ok(edges);
    }
    Err(Error::Sampling(format!(
        "no simple {degree}-regular graph on {dim} vertices after {MAX_RESTARTS} restarts; try another seed"
    )))
}

fn has_admissible_pair(free: &[usize], adj: &[Vec<usize>]) -> bool {
    free.iter().enumerate().any(|(i, &u)| {
        free[i + 1..]
            .iter()
            .any(|&v| u != v && !adj[u].contains(&v))
    })
}

/// Adjacency matrix; with a sampler, each edge gets an i.i.d. weight drawn in
/// edge order.
pub(super) fn adjacency(
    dim: usize,
    edges: &[(usize, usize)],
    weights: Option<Sampler>,
    rng: &mut ChaCha8Rng,
) -> Mat<f64> {
    let mut h = Mat::zeros(dim, dim);
    for &(i, j) in edges {
        let w = weights.as_ref().map_or(1.0, |s| s.draw(rng));
        h[(i, j)] = w;
        h[(j, i)] = w;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::super::{realization_rng, Distribution, ModelSpec, Variant};
    use super::*;
    use crate::spectral::eigenvalues;

    #[test]
    fn complete_graph() {
        let h = ModelSpec::new(Variant::RandomRegularGraph { dim: 8, degree: 7 })
            .build(0)
            .unwrap();
        let e = eigenvalues(&h).unwrap();
        for x in &e[..7] {
            assert!((x + 1.0).abs() < 1e-12);
        }
        assert!((e[7] - 7.0).abs() < 1e-12);
    }

    #[test]
    fn graphs_are_simple_and_regular() {
        for (dim, degree, seed) in [(10, 3, 1), (64, 6, 2), (512, 6, 3), (1024, 3, 4)] {
            let mut rng = realization_rng(seed, 0);
            let edges = random_regular_graph(dim, degree, &mut rng).unwrap();
            assert_eq!(edges.len(), dim * degree / 2);
            let mut deg = vec![0; dim];
            for w in edges.windows(2) {
                assert_ne!(w[0], w[1]);
            }
            for &(i, j) in &edges {
                assert!(i < j);
                deg[i] += 1;
                deg[j] += 1;
            }
            assert!(deg.iter().all(|&k| k == degree));
        }
    }

    #[test]
    fn rademacher_weights_are_signs() {
        let spec = ModelSpec::new(Variant::RandomRegularGraph { dim: 20, degree: 4 })
            .with_distribution(Distribution::Rademacher)
            .with_seed(3);
        let h = spec.build(0).unwrap();
        let mut nonzero = 0;
        for i in 0..20 {
            for j in 0..20 {
                let x = h.get(i, j).re;
                if x != 0.0 {
                    assert!(x == 1.0 || x == -1.0);
                    nonzero += 1;
                }
            }
        }
        assert_eq!(nonzero, 80);
    }

    #[test]
    fn parameter_checks() {
        assert!(check(9, 3).is_err());
        assert!(check(8, 2).is_err());
        assert!(check(8, 8).is_err());
        assert!(check(8, 3).is_ok());
    }
}
