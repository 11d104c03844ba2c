//! SYK model with `q = 4` via Jordan–Wigner strings on `N/2` qubits.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::Sampler;
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::operator::{Accumulator, HermitianOperator};
use crate::pauli::{Pauli, PauliString};

pub const MIN_MAJORANAS: usize = 8;
pub const MAX_MAJORANAS: usize = 22;

pub(super) fn check(n: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::invalid(
            "majoranas",
            format!("must be even, got {n}"),
        ));
    }
    if !(MIN_MAJORANAS..=MAX_MAJORANAS).contains(&n) {
        return Err(Error::Resource(format!(
            "SYK supports {MIN_MAJORANAS}..={MAX_MAJORANAS} Majoranas, got {n}"
        )));
    }
    Ok(())
}

/// `χ_{2i−1} = Z_1 ⋯ Z_{i−1} X_i` and `χ_{2i} = Z_1 ⋯ Z_{i−1} Y_i`, listed in
/// Majorana order.
pub fn majorana_operators(majoranas: usize) -> Result<Vec<PauliString>> {
    if !majoranas.is_multiple_of(2) || majoranas == 0 {
        return Err(Error::invalid(
            "majoranas",
            format!("must be even and positive, got {majoranas}"),
        ));
    }
    let sites = majoranas / 2;
    let mut out = Vec::with_capacity(majoranas);
    for i in 0..sites {
        for last in [Pauli::X, Pauli::Y] {
            let letters: Vec<Pauli> = (0..sites)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => Pauli::Z,
                    std::cmp::Ordering::Equal => last,
                    std::cmp::Ordering::Greater => Pauli::I,
                })
                .collect();
            out.push(PauliString::new(letters, Complex64::new(1.0, 0.0))?);
        }
    }
    Ok(out)
}

/// `H = Σ_{i<j<k<l} J_ijkl χ_i χ_j χ_k χ_l` with couplings drawn in
/// lexicographic order.
pub(super) fn build(
    majoranas: usize,
    couplings: &Sampler,
    rng: &mut ChaCha8Rng,
) -> Result<HermitianOperator> {
    check(majoranas)?;
    let chi = majorana_operators(majoranas)?;
    let space = HilbertSpace::qubits(majoranas / 2)?;
    let mut acc = Accumulator::new(space.dim());
    let n = majoranas;
    for i in 0..n {
        for j in i + 1..n {
            let ij = chi[i].mul(&chi[j])?;
            for k in j + 1..n {
                let ijk = ij.mul(&chi[k])?;
                for chi_l in &chi[k + 1..] {
                    let quartic = ijk.mul(chi_l)?;
                    debug_assert_eq!(quartic.coefficient().im, 0.0);
                    let c = couplings.draw(rng);
                    quartic
                        .scaled(Complex64::new(c, 0.0))
                        .accumulate_into(&mut acc);
                }
            }
        }
    }
    acc.finish(space)
}
