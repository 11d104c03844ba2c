//! Block-diagonalization by discrete symmetries.
//!
//! A symmetry is a finite group of signed basis permutations that commutes
//! with the Hamiltonian. Each one-dimensional character of the group selects a
//! sector spanned by projected basis vectors, one per orbit.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::operator::{Entries, HermitianOperator};
use crate::scalar::Scalar;

/// Relative bound on `‖[H, g]‖_F / ‖H‖_F`.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-10;

/// `g e_m = sign[m] · e_{target[m]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPermutation {
    target: Vec<usize>,
    sign: Vec<f64>,
}

impl SignedPermutation {
    pub fn new(target: Vec<usize>, sign: Vec<f64>) -> Result<Self> {
        if target.len() != sign.len() {
            return Err(Error::invalid("symmetry", "target and sign lengths differ"));
        }
        let mut seen = vec![false; target.len()];
        for &t in &target {
            if t >= target.len() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::invalid("symmetry", "target is not a permutation"));
            }
        }
        if sign.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::invalid("symmetry", "signs must be ±1"));
        }
        Ok(Self { target, sign })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            target: (0..dim).collect(),
            sign: vec![1.0; dim],
        }
    }

    pub fn permutation(target: Vec<usize>) -> Result<Self> {
        let n = target.len();
        Self::new(target, vec![1.0; n])
    }

    pub fn diagonal(sign: Vec<f64>) -> Result<Self> {
        Self::new((0..sign.len()).collect(), sign)
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn sign(&self) -> &[f64] {
        &self.sign
    }

    pub fn is_diagonal(&self) -> bool {
        self.target.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let target = other.target.iter().map(|&t| self.target[t]).collect();
        let sign = other
            .target
            .iter()
            .zip(&other.sign)
            .map(|(&t, &s)| s * self.sign[t])
            .collect();
        SignedPermutation { target, sign }
    }

    /// `‖g H g⁻¹ − H‖_F`, equal to `‖[H, g]‖_F` for orthogonal `g`.
    pub fn commutator_residual(&self, h: &HermitianOperator) -> f64 {
        let d = h.dim();
        let mut sum = 0.0;
        for n in 0..d {
            for m in 0..d {
                let moved = h.get(m, n) * (self.sign[m] * self.sign[n]);
                sum += (moved - h.get(self.target[m], self.target[n])).norm_sqr();
            }
        }
        sum.sqrt()
    }
}

/// Sector basis expressed in the parent basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Embedding {
    /// Sector basis vector `k` is parent basis vector `indices[k]`.
    Indices(Vec<usize>),
    /// Sector basis vector `k` is `Σ c · e_i` over `columns[k]`.
    Sparse(Vec<Vec<(usize, f64)>>),
}

impl Embedding {
    pub fn dim(&self) -> usize {
        match self {
            Embedding::Indices(v) => v.len(),
            Embedding::Sparse(v) => v.len(),
        }
    }

    /// Maps sector coefficients to parent-basis amplitudes.
    pub fn lift(&self, coefficients: &[Complex64], parent_dim: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); parent_dim];
        match self {
            Embedding::Indices(idx) => {
                for (&i, &c) in idx.iter().zip(coefficients) {
                    out[i] = c;
                }
            }
            Embedding::Sparse(cols) => {
                for (col, &c) in cols.iter().zip(coefficients) {
                    for &(i, w) in col {
                        out[i] += c * w;
                    }
                }
            }
        }
        out
    }

    fn column(&self, k: usize) -> EmbeddingColumn<'_> {
        match self {
            Embedding::Indices(idx) => EmbeddingColumn::Single(idx[k]),
            Embedding::Sparse(cols) => EmbeddingColumn::Many(&cols[k]),
        }
    }
}

enum EmbeddingColumn<'a> {
    Single(usize),
    Many(&'a [(usize, f64)]),
}

impl EmbeddingColumn<'_> {
    fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        match self {
            EmbeddingColumn::Single(i) => f(*i, 1.0),
            EmbeddingColumn::Many(c) => c.iter().for_each(|&(i, w)| f(i, w)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub label: String,
    pub embedding: Embedding,
    /// `None` when the sector is empty.
    pub hamiltonian: Option<HermitianOperator>,
}

impl Sector {
    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }
}

fn project_generic<T: Scalar>(m: &Mat<T>, embedding: &Embedding) -> Mat<T> {
    let k = embedding.dim();
    let mut out = Mat::<T>::from_fn(k, k, |_, _| T::zero());
    for j in 0..k {
        let cj = embedding.column(j);
        for i in j..k {
            let ci = embedding.column(i);
            let mut acc = T::zero();
            ci.for_each(|a, wa| cj.for_each(|b, wb| acc += m[(a, b)].scale(wa * wb)));
            out[(i, j)] = acc;
        }
    }
    for j in 0..k {
        out[(j, j)] = T::from_real(out[(j, j)].to_complex().re);
        for i in j + 1..k {
            out[(j, i)] = out[(i, j)].conj();
        }
    }
    out
}

/// `B† H B` for the isometry `B` described by `embedding`.
pub fn project(
    h: &HermitianOperator,
    embedding: &Embedding,
    label: impl Into<String>,
) -> Result<Sector> {
    let label = label.into();
    let dim = embedding.dim();
    let hamiltonian = if dim == 0 {
        None
    } else {
        let space = HilbertSpace::sector(dim);
        let op = match h.entries() {
            Entries::Real(m) => HermitianOperator::from_real(space, project_generic(m, embedding))?,
            Entries::Complex(m) => {
                HermitianOperator::from_complex(space, project_generic(m, embedding))?
            }
        };
        let op = match h.provenance() {
            Some(p) => op.with_provenance(format!("{p} [sector {label}]")),
            None => op,
        };
        Some(op)
    };
    Ok(Sector {
        label,
        embedding: embedding.clone(),
        hamiltonian,
    })
}

/// Restricts `h` to the `+1` and `−1` eigenspaces of a diagonal parity.
pub fn split_parity_sectors(h: &HermitianOperator, parity: &[f64]) -> Result<(Sector, Sector)> {
    let d = h.dim();
    if parity.len() != d {
        return Err(Error::ContractViolation(format!(
            "parity has {} entries for a {d}-dimensional operator",
            parity.len()
        )));
    }
    if parity.iter().any(|&p| p != 1.0 && p != -1.0) {
        return Err(Error::ContractViolation("parity entries must be ±1".into()));
    }
    let mut residual = 0.0;
    for j in 0..d {
        for i in 0..d {
            if parity[i] != parity[j] {
                residual += 4.0 * h.get(i, j).norm_sqr();
            }
        }
    }
    let residual = residual.sqrt();
    let bound = COMMUTATOR_TOLERANCE * h.frobenius_norm();
    if residual > bound {
        return Err(Error::SymmetryMismatch { residual, bound });
    }
    let even = (0..d).filter(|&i| parity[i] == 1.0).collect();
    let odd = (0..d).filter(|&i| parity[i] == -1.0).collect();
    Ok((
        project(h, &Embedding::Indices(even), "P+")?,
        project(h, &Embedding::Indices(odd), "P-")?,
    ))
}

/// A finite group of signed permutations listed element by element.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryGroup {
    elements: Vec<SignedPermutation>,
}

impl SymmetryGroup {
    /// Closes the given generators under composition.
    pub fn generated_by(generators: &[SignedPermutation]) -> Result<Self> {
        let dim = generators
            .first()
            .map(SignedPermutation::dim)
            .ok_or_else(|| Error::invalid("symmetry", "no generators"))?;
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::invalid(
                "symmetry",
                "generators act on different dimensions",
            ));
        }
        let mut elements = vec![SignedPermutation::identity(dim)];
        let mut frontier = 0;
        while frontier < elements.len() {
            for g in generators {
                let next = g.compose(&elements[frontier]);
                if !elements.contains(&next) {
                    if elements.len() >= 64 {
                        return Err(Error::Resource(
                            "symmetry group larger than 64 elements".into(),
                        ));
                    }
                    elements.push(next);
                }
            }
            frontier += 1;
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Checks that `character` is a ±1-valued homomorphism on this group.
    fn check_character(&self, character: &[f64]) -> Result<()> {
        if character.len() != self.order() {
            return Err(Error::invalid(
                "character",
                "one value per group element required",
            ));
        }
        if character.iter().any(|&c| c != 1.0 && c != -1.0) {
            return Err(Error::invalid("character", "values must be ±1"));
        }
        for (a, ga) in self.elements.iter().enumerate() {
            for (b, gb) in self.elements.iter().enumerate() {
                let ab = ga.compose(gb);
                let idx = self.elements.iter().position(|g| *g == ab).ok_or_else(|| {
                    Error::invalid("symmetry", "element list is not closed under composition")
                })?;
                if character[idx] != character[a] * character[b] {
                    return Err(Error::invalid("character", "not a homomorphism"));
                }
            }
        }
        Ok(())
    }

    /// Character from the values on the generators, extended multiplicatively.
    /// `generator_values[k]` belongs to `generators[k]` as passed to
    /// [`SymmetryGroup::generated_by`].
    pub fn character_from_generators(
        &self,
        generators: &[SignedPermutation],
        generator_values: &[f64],
    ) -> Result<Vec<f64>> {
        if generators.len() != generator_values.len() {
            return Err(Error::invalid(
                "character",
                "one value per generator required",
            ));
        }
        let mut chi: Vec<Option<f64>> = vec![None; self.order()];
        chi[0] = Some(1.0);
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.order() {
                let Some(ci) = chi[i] else { continue };
                for (g, &v) in generators.iter().zip(generator_values) {
                    let next = g.compose(&self.elements[i]);
                    let idx = self
                        .elements
                        .iter()
                        .position(|e| *e == next)
                        .expect("group is closed");
                    match chi[idx] {
                        None => {
                            chi[idx] = Some(ci * v);
                            changed = true;
                        }
                        Some(c) if c != ci * v => {
                            return Err(Error::invalid(
                                "character",
                                "generator values are inconsistent",
                            ));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(chi
            .into_iter()
            .map(|c| c.expect("every element reached"))
            .collect())
    }
}

/// Sector of `h` transforming under `character` of `group`.
pub fn symmetry_sector(
    h: &HermitianOperator,
    group: &SymmetryGroup,
    character: &[f64],
    label: impl Into<String>,
) -> Result<Sector> {
    let d = h.dim();
    if group.dim() != d {
        return Err(Error::ContractViolation(format!(
            "symmetry acts on dimension {} but the operator has dimension {d}",
            group.dim()
        )));
    }
    group.check_character(character)?;
    let bound = COMMUTATOR_TOLERANCE * h.frobenius_norm();
    for g in group.elements() {
        let residual = g.commutator_residual(h);
        if residual > bound {
            return Err(Error::SymmetryMismatch { residual, bound });
        }
    }
    project(h, &sector_embedding(group, character, d), label)
}

fn sector_embedding(group: &SymmetryGroup, character: &[f64], d: usize) -> Embedding {
    let mut visited = vec![false; d];
    let mut columns = Vec::new();
    for m in 0..d {
        if visited[m] {
            continue;
        }
        let mut col: Vec<(usize, f64)> = Vec::with_capacity(group.order());
        for (g, &chi) in group.elements().iter().zip(character) {
            let t = g.target()[m];
            visited[t] = true;
            let w = chi * g.sign()[m];
            match col.iter_mut().find(|(i, _)| *i == t) {
                Some(entry) => entry.1 += w,
                None => col.push((t, w)),
            }
        }
        col.retain(|&(_, w)| w.abs() > 1e-12);
        if col.is_empty() {
            continue;
        }
        col.sort_by_key(|&(i, _)| i);
        let norm = col.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
        col.iter_mut().for_each(|(_, w)| *w /= norm);
        columns.push(col);
    }
    if columns.iter().all(|c| c.len() == 1 && c[0].1 == 1.0) {
        Embedding::Indices(columns.into_iter().map(|c| c[0].0).collect())
    } else {
        Embedding::Sparse(columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigenvalues, spectral_decompose, DEFAULT_EPS_DEG};

    fn ring(d: usize) -> HermitianOperator {
        let m = Mat::from_fn(d, d, |i, j| {
            if (i + 1) % d == j || (j + 1) % d == i {
                1.0
            } else {
                0.0
            }
        });
        HermitianOperator::from_real(HilbertSpace::new(d).unwrap(), m).unwrap()
    }

    #[test]
    fn identity_parity_gives_full_and_empty() {
        let h = ring(6);
        let (even, odd) = split_parity_sectors(&h, &[1.0; 6]).unwrap();
        assert_eq!((even.dim(), odd.dim()), (6, 0));
        assert!(odd.hamiltonian.is_none());
        assert_eq!(even.hamiltonian.unwrap(), h);
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        let h = ring(4);
        let parity = [1.0, -1.0, 1.0, 1.0];
        assert!(matches!(
            split_parity_sectors(&h, &parity),
            Err(Error::SymmetryMismatch { .. })
        ));
        assert!(split_parity_sectors(&h, &[1.0, 0.5, 1.0, 1.0]).is_err());
    }

    #[test]
    fn reflection_sectors_preserve_spectrum() {
        // Ring reflection n -> -n mod D.
        let d = 10;
        let h = ring(d);
        let refl = SignedPermutation::permutation((0..d).map(|n| (d - n) % d).collect()).unwrap();
        let group = SymmetryGroup::generated_by(std::slice::from_ref(&refl)).unwrap();
        assert_eq!(group.order(), 2);
        let plus = group
            .character_from_generators(std::slice::from_ref(&refl), &[1.0])
            .unwrap();
        let minus = group.character_from_generators(&[refl], &[-1.0]).unwrap();
        let sp = symmetry_sector(&h, &group, &plus, "R+").unwrap();
        let sm = symmetry_sector(&h, &group, &minus, "R-").unwrap();
        assert_eq!(sp.dim() + sm.dim(), d);
        let mut merged: Vec<f64> = eigenvalues(sp.hamiltonian.as_ref().unwrap())
            .unwrap()
            .into_iter()
            .chain(eigenvalues(sm.hamiltonian.as_ref().unwrap()).unwrap())
            .collect();
        merged.sort_by(f64::total_cmp);
        let full = eigenvalues(&h).unwrap();
        for (a, b) in merged.iter().zip(&full) {
            assert!((a - b).abs() < 1e-8 * h.frobenius_norm());
        }
    }

    #[test]
    fn lifted_sector_vectors_are_eigenvectors() {
        let d = 8;
        let h = ring(d);
        let refl = SignedPermutation::permutation((0..d).map(|n| (d - n) % d).collect()).unwrap();
        let group = SymmetryGroup::generated_by(&[refl]).unwrap();
        let chi = vec![1.0, -1.0];
        let sector = symmetry_sector(&h, &group, &chi, "R-").unwrap();
        let hs = sector.hamiltonian.as_ref().unwrap();
        let dec = spectral_decompose(hs, DEFAULT_EPS_DEG).unwrap();
        let full = h.to_complex_matrix();
        for n in 0..dec.dim() {
            let v = sector.embedding.lift(&dec.eigenvectors().column(n), d);
            let e = dec.eigenvalues()[n];
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for i in 0..d {
                let hv: Complex64 = (0..d).map(|j| full[(i, j)] * v[j]).sum();
                assert!((hv - v[i] * e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn character_must_be_homomorphism() {
        let d = 4;
        let refl = SignedPermutation::permutation(vec![0, 3, 2, 1]).unwrap();
        let group = SymmetryGroup::generated_by(&[refl]).unwrap();
        assert!(symmetry_sector(&ring(4), &group, &[-1.0, 1.0], "bad").is_err());
        assert_eq!(group.dim(), d);
    }

    #[test]
    fn signed_permutation_validation() {
        assert!(SignedPermutation::permutation(vec![0, 0]).is_err());
        assert!(SignedPermutation::diagonal(vec![1.0, 2.0]).is_err());
        let p = SignedPermutation::new(vec![1, 0], vec![1.0, -1.0]).unwrap();
        let pp = p.compose(&p);
        assert_eq!(pp.target(), &[0, 1]);
        assert_eq!(pp.sign(), &[-1.0, -1.0]);
    }
}
