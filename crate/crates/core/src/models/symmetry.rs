//! Discrete symmetries of the model families, as sector definitions.

use std::sync::Arc;

use super::{stadium_layout, ModelSpec, Variant};
use crate::error::Result;
use crate::operator::HermitianOperator;
use crate::sectors::{symmetry_sector, Sector, SignedPermutation, SymmetryGroup};

/// One symmetry sector: the subspace on which `group` acts by `character`.
#[derive(Debug, Clone)]
pub struct SectorDef {
    pub label: String,
    pub group: Arc<SymmetryGroup>,
    pub character: Vec<f64>,
}

impl SectorDef {
    pub fn project(&self, h: &HermitianOperator) -> Result<Sector> {
        symmetry_sector(h, &self.group, &self.character, self.label.clone())
    }
}

/// Eigenvalues of `∏ Z` on the computational basis.
pub(super) fn z_parity(sites: usize) -> Vec<f64> {
    (0..1usize << sites)
        .map(|b| if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Spatial reflection `i ↦ N − 1 − i` of a chain, i.e. bit reversal.
fn chain_reflection(sites: usize) -> SignedPermutation {
    let target = (0..1usize << sites)
        .map(|b| b.reverse_bits() >> (usize::BITS as usize - sites))
        .collect();
    SignedPermutation::permutation(target).expect("bit reversal is a permutation")
}

fn sign(x: f64) -> char {
    if x > 0.0 {
        '+'
    } else {
        '-'
    }
}

/// All characters of an Abelian group given by its generators, each valued in ±1.
fn abelian_sectors(names: &[&str], generators: Vec<SignedPermutation>) -> Result<Vec<SectorDef>> {
    let group = Arc::new(SymmetryGroup::generated_by(&generators)?);
    let k = generators.len();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..1usize << k {
        let values: Vec<f64> = (0..k)
            .map(|i| if mask >> i & 1 == 0 { 1.0 } else { -1.0 })
            .collect();
        let character = group.character_from_generators(&generators, &values)?;
        let label = names
            .iter()
            .zip(&values)
            .map(|(n, &v)| format!("{n}{}", sign(v)))
            .collect();
        out.push(SectorDef {
            label,
            group: Arc::clone(&group),
            character,
        });
    }
    Ok(out)
}

/// Point-group sectors of the torus with a centered obstacle. For a square
/// torus the group is the dihedral group of order 8: the four one-dimensional
/// irreps are labelled by the common sign of the two axis reflections and the
/// sign of the diagonal reflection, and the two-dimensional irrep is reached
/// once per multiplet through the sector `Rx = +1, Ry = −1` of the axis
/// reflections alone.
fn stadium_sectors(lx: usize, ly: usize, radius: f64) -> Result<Vec<SectorDef>> {
    let layout = stadium_layout(lx, ly, radius)?;
    let perm = |f: &dyn Fn(usize, usize) -> (usize, usize)| -> Option<SignedPermutation> {
        let target: Option<Vec<usize>> = layout
            .sites
            .iter()
            .map(|&(x, y)| {
                let (a, b) = f(x, y);
                layout.index_of(a, b)
            })
            .collect();
        target.and_then(|t| SignedPermutation::permutation(t).ok())
    };
    let (Some(rx), Some(ry)) = (perm(&|x, y| (lx - 1 - x, y)), perm(&|x, y| (x, ly - 1 - y)))
    else {
        return Ok(Vec::new());
    };
    let diagonal = if lx == ly { perm(&|x, y| (y, x)) } else { None };
    let Some(s) = diagonal else {
        return abelian_sectors(&["Rx", "Ry"], vec![rx, ry]);
    };
    let generators = vec![rx.clone(), ry.clone(), s];
    let group = Arc::new(SymmetryGroup::generated_by(&generators)?);
    let mut out = Vec::new();
    for (axes, diag, name) in [
        (1.0, 1.0, "A1"),
        (1.0, -1.0, "B1"),
        (-1.0, 1.0, "B2"),
        (-1.0, -1.0, "A2"),
    ] {
        out.push(SectorDef {
            label: name.into(),
            group: Arc::clone(&group),
            character: group.character_from_generators(&generators, &[axes, axes, diag])?,
        });
    }
    let klein_gens = vec![rx, ry];
    let klein = Arc::new(SymmetryGroup::generated_by(&klein_gens)?);
    out.push(SectorDef {
        label: "E".into(),
        character: klein.character_from_generators(&klein_gens, &[1.0, -1.0])?,
        group: klein,
    });
    Ok(out)
}

pub(super) fn sectors(spec: &ModelSpec) -> Result<Vec<SectorDef>> {
    match &spec.variant {
        Variant::Tfim { sites, .. } => abelian_sectors(
            &["P", "R"],
            vec![
                SignedPermutation::diagonal(z_parity(*sites))?,
                chain_reflection(*sites),
            ],
        ),
        Variant::InteractingIsing { sites, .. } => {
            abelian_sectors(&["R"], vec![chain_reflection(*sites)])
        }
        Variant::Syk { majoranas } => abelian_sectors(
            &["P"],
            vec![SignedPermutation::diagonal(z_parity(majoranas / 2))?],
        ),
        Variant::Stadium { lx, ly, radius } => stadium_sectors(*lx, *ly, *radius),
        _ => Ok(Vec::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Boundary;
    use crate::sectors::split_parity_sectors;
    use crate::spectral::eigenvalues;

    fn merged_spectrum(spec: &ModelSpec, h: &HermitianOperator) -> Vec<f64> {
        let mut all: Vec<f64> = Vec::new();
        for def in spec.symmetry_sectors().unwrap() {
            let s = def.project(h).unwrap();
            if let Some(hs) = &s.hamiltonian {
                all.extend(eigenvalues(hs).unwrap());
            }
        }
        all.sort_by(f64::total_cmp);
        all
    }

    #[test]
    fn reflection_maps_site_one_to_site_n() {
        let r = chain_reflection(4);
        assert_eq!(r.target()[0b1000], 0b0001);
        assert_eq!(r.target()[0b1100], 0b0011);
        assert_eq!(r.target()[0b1001], 0b1001);
    }

    #[test]
    fn tfim_parity_halves_the_space() {
        // Brute-force count of ∏Z eigenvalues on 4 qubits.
        let spec = ModelSpec::new(Variant::Tfim { sites: 4, h: 0.7 });
        let h = spec.build(0).unwrap();
        let p = spec.parity().unwrap().unwrap();
        assert_eq!(p.iter().filter(|&&x| x > 0.0).count(), 8);
        let (a, b) = split_parity_sectors(&h, &p).unwrap();
        assert_eq!((a.dim(), b.dim()), (8, 8));
    }

    #[test]
    fn tfim_sectors_cover_spectrum() {
        let spec = ModelSpec::new(Variant::Tfim { sites: 6, h: 1.0 });
        let h = spec.build(0).unwrap();
        let defs = spec.symmetry_sectors().unwrap();
        assert_eq!(defs.len(), 4);
        let dims: usize = defs.iter().map(|d| d.project(&h).unwrap().dim()).sum();
        assert_eq!(dims, 64);
        let full = eigenvalues(&h).unwrap();
        for (a, b) in merged_spectrum(&spec, &h).iter().zip(&full) {
            assert!((a - b).abs() < 1e-8 * h.frobenius_norm());
        }
    }

    #[test]
    fn ising_reflection_sector_dimension() {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let spec = ModelSpec::new(Variant::InteractingIsing {
                sites: 6,
                g: 0.9,
                h: 0.8,
            })
            .with_boundary(boundary);
            let h = spec.build(0).unwrap();
            let defs = spec.symmetry_sectors().unwrap();
            assert_eq!(defs[0].label, "R+");
            // Reflection-symmetric states: (2^6 + 2^3) / 2.
            assert_eq!(defs[0].project(&h).unwrap().dim(), 36);
            assert_eq!(defs[1].project(&h).unwrap().dim(), 28);
        }
    }

    #[test]
    fn stadium_sectors_cover_distinct_levels() {
        let spec = ModelSpec::new(Variant::Stadium {
            lx: 12,
            ly: 12,
            radius: 3.0,
        });
        let h = spec.build(0).unwrap();
        let defs = spec.symmetry_sectors().unwrap();
        assert_eq!(defs.len(), 5);
        let sectors: Vec<Sector> = defs.iter().map(|d| d.project(&h).unwrap()).collect();
        let one_dim: usize = sectors[..4].iter().map(Sector::dim).sum();
        // Each two-dimensional multiplet appears twice in the full space.
        assert_eq!(one_dim + 2 * sectors[4].dim(), h.dim());
        let mut full = eigenvalues(&h).unwrap();
        let mut with_e = merged_spectrum(&spec, &h);
        let e_levels = eigenvalues(sectors[4].hamiltonian.as_ref().unwrap()).unwrap();
        with_e.extend(e_levels);
        with_e.sort_by(f64::total_cmp);
        full.sort_by(f64::total_cmp);
        assert_eq!(with_e.len(), full.len());
        for (a, b) in with_e.iter().zip(&full) {
            assert!((a - b).abs() < 1e-8 * h.frobenius_norm());
        }
    }

    #[test]
    fn models_without_symmetry_have_no_sectors() {
        let spec = ModelSpec::new(Variant::Goe { dim: 4 });
        assert!(spec.symmetry_sectors().unwrap().is_empty());
    }
}
