//! Spin chains assembled from Pauli strings in the `σ^z` basis.

use rand_chacha::ChaCha8Rng;

use super::{Boundary, Distribution, Variant};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::pauli::{realize_pauli_sum, Pauli, PauliString};

pub const MIN_SPIN_SITES: usize = 2;
/// `D = 2^14` is the largest dense spin problem built.
pub const MAX_SPIN_SITES: usize = 14;

pub(super) fn check_sites(n: usize) -> Result<()> {
    if !(MIN_SPIN_SITES..=MAX_SPIN_SITES).contains(&n) {
        return Err(Error::Resource(format!(
            "spin chains support {MIN_SPIN_SITES}..={MAX_SPIN_SITES} sites, got {n}"
        )));
    }
    Ok(())
}

/// Nearest-neighbor bonds; the periodic closing bond is added for `N ≥ 3`.
pub(super) fn bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && n >= 3 {
        b.push((n - 1, 0));
    }
    b
}

fn term(n: usize, ops: &[(usize, Pauli)], c: f64) -> Result<PauliString> {
    PauliString::from_sites(n, ops, c)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

pub(super) fn build(
    variant: &Variant,
    boundary: Boundary,
    dist: Option<Distribution>,
    rng: &mut ChaCha8Rng,
) -> Result<HermitianOperator> {
    use Pauli::{X, Y, Z};
    let mut terms = Vec::new();
    let n = match *variant {
        Variant::Tfim { sites: n, h } => {
            for (i, j) in bonds(n, boundary) {
                terms.push(term(n, &[(i, X), (j, X)], 1.0)?);
            }
            for i in 0..n {
                terms.push(term(n, &[(i, Z)], h)?);
            }
            n
        }
        Variant::InteractingIsing { sites: n, g, h } => {
            for (i, j) in bonds(n, boundary) {
                terms.push(term(n, &[(i, Z), (j, Z)], 1.0)?);
            }
            for i in 0..n {
                terms.push(term(n, &[(i, X)], g)?);
                terms.push(term(n, &[(i, Z)], h)?);
            }
            n
        }
        Variant::EdwardsAnderson { sites: n } => {
            let s = dist.expect("distribution").sampler();
            for (i, j) in bonds(n, boundary) {
                terms.push(term(n, &[(i, X), (j, X)], s.draw(rng))?);
            }
            n
        }
        Variant::SherringtonKirkpatrick { sites: n } => {
            let s = dist.expect("distribution").sampler();
            for i in 0..n {
                for j in i + 1..n {
                    terms.push(term(n, &[(i, X), (j, X)], s.draw(rng))?);
                }
            }
            n
        }
        Variant::MblHeisenberg { sites: n, j, h } => {
            let field = Distribution::Uniform { low: -h, high: h }.sampler();
            for i in 0..n {
                terms.push(term(n, &[(i, Z)], field.draw(rng))?);
            }
            for (a, b) in bonds(n, boundary) {
                for p in [X, Y, Z] {
                    terms.push(term(n, &[(a, p), (b, p)], j)?);
                }
            }
            n
        }
        Variant::HypercubeFree {
            sites: n,
            ref orders,
        } => {
            for &k in orders {
                for sites in combinations(n, k) {
                    let ops: Vec<(usize, Pauli)> = sites.into_iter().map(|i| (i, X)).collect();
                    terms.push(term(n, &ops, 1.0)?);
                }
            }
            n
        }
        _ => unreachable!("not a spin chain"),
    };
    realize_pauli_sum(n, &terms)
}
