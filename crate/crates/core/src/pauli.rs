//! Pauli strings on qubit chains, applied to computational basis states by
//! bit manipulation.
//!
//! Site `i` (zero-based) lives on bit `N − 1 − i` of the basis index, so site 1
//! of an `N`-site chain is the most significant bit. `Z|0⟩ = |0⟩`, `Z|1⟩ = −|1⟩`.

use std::fmt;
use std::str::FromStr;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::operator::{Accumulator, HermitianOperator};

/// Dense realization is refused above this many sites.
pub const MAX_DENSE_SITES: usize = 26;
/// Bit-mask representation limit.
pub const MAX_SITES: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `self · other = phase · result`, with the phase as a power of `i`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::invalid("pauli", format!("unknown letter {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    coefficient: Complex64,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, coefficient: Complex64) -> Result<Self> {
        if letters.is_empty() || letters.len() > MAX_SITES {
            return Err(Error::Resource(format!(
                "Pauli strings support 1..={MAX_SITES} sites, got {}",
                letters.len()
            )));
        }
        Ok(Self {
            letters,
            coefficient,
        })
    }

    /// Identity on `site_count` sites with the given operators placed at
    /// zero-based positions.
    pub fn from_sites(site_count: usize, ops: &[(usize, Pauli)], coefficient: f64) -> Result<Self> {
        let mut letters = vec![Pauli::I; site_count];
        for &(site, p) in ops {
            let slot = letters.get_mut(site).ok_or_else(|| {
                Error::invalid(
                    "site",
                    format!("site {site} out of range for {site_count} sites"),
                )
            })?;
            let (phase, prod) = slot.mul(p);
            if phase != 0 {
                return Err(Error::invalid(
                    "site",
                    format!("site {site} listed twice with anticommuting letters"),
                ));
            }
            *slot = prod;
        }
        Self::new(letters, Complex64::new(coefficient, 0.0))
    }

    pub fn site_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        self.coefficient *= factor;
        self
    }

    /// Operator product `self · rhs`.
    pub fn mul(&self, rhs: &PauliString) -> Result<PauliString> {
        if self.site_count() != rhs.site_count() {
            return Err(Error::ContractViolation(format!(
                "site counts differ: {} vs {}",
                self.site_count(),
                rhs.site_count()
            )));
        }
        let mut phase = 0u8;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase += k;
                p
            })
            .collect();
        Ok(PauliString {
            letters,
            coefficient: self.coefficient * rhs.coefficient * i_pow(phase),
        })
    }

    pub(crate) fn masks(&self) -> BitMasks {
        let n = self.site_count();
        let mut flip = 0u64;
        let mut sign = 0u64;
        let mut y_count = 0u8;
        for (site, p) in self.letters.iter().enumerate() {
            let bit = 1u64 << (n - 1 - site);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Z => sign |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                    y_count += 1;
                }
            }
        }
        BitMasks {
            flip,
            sign,
            amplitude: self.coefficient * i_pow(y_count % 4),
        }
    }

    /// `P|b⟩ = amplitude · |b'⟩`; returns `(amplitude, b')`.
    pub fn apply_to_basis(&self, basis: usize) -> (Complex64, usize) {
        self.masks().apply(basis as u64)
    }

    pub(crate) fn accumulate_into(&self, acc: &mut Accumulator) {
        let masks = self.masks();
        let dim = 1usize << self.site_count();
        for b in 0..dim {
            let (amp, target) = masks.apply(b as u64);
            acc.add(target, b, amp);
        }
    }

    /// Full `2^N × 2^N` matrix, including a possibly non-real coefficient.
    pub fn to_dense(&self) -> Result<Mat<Complex64>> {
        let n = self.site_count();
        if n > MAX_DENSE_SITES {
            return Err(Error::Resource(format!(
                "dense realization of {n} sites exceeds the {MAX_DENSE_SITES}-site guard"
            )));
        }
        let dim = 1usize << n;
        let masks = self.masks();
        let mut m = Mat::zeros(dim, dim);
        for b in 0..dim {
            let (amp, target) = masks.apply(b as u64);
            m[(target, b)] = amp;
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·", self.coefficient)?;
        for p in &self.letters {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses a bare letter string such as `"XIZ"` with unit coefficient.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        Self::new(letters, Complex64::new(1.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BitMasks {
    pub flip: u64,
    pub sign: u64,
    pub amplitude: Complex64,
}

impl BitMasks {
    #[inline]
    pub fn apply(&self, basis: u64) -> (Complex64, usize) {
        let amp = if (basis & self.sign).count_ones() % 2 == 1 {
            -self.amplitude
        } else {
            self.amplitude
        };
        (amp, (basis ^ self.flip) as usize)
    }
}

/// Dense Hermitian realization of a Pauli string with real coefficient.
pub fn realize_pauli_string(p: &PauliString) -> Result<HermitianOperator> {
    let n = p.site_count();
    if n > MAX_DENSE_SITES {
        return Err(Error::Resource(format!(
            "dense realization of {n} sites exceeds the {MAX_DENSE_SITES}-site guard"
        )));
    }
    if p.coefficient().im != 0.0 {
        return Err(Error::ContractViolation(format!(
            "Pauli string {p} has a non-real coefficient and is not Hermitian"
        )));
    }
    let space = HilbertSpace::qubits(n)?;
    let mut acc = Accumulator::new(space.dim());
    p.accumulate_into(&mut acc);
    acc.finish(space)
}

/// Dense Hermitian realization of `Σ_k p_k`.
pub fn realize_pauli_sum(site_count: usize, terms: &[PauliString]) -> Result<HermitianOperator> {
    if site_count > MAX_DENSE_SITES {
        return Err(Error::Resource(format!(
            "dense realization of {site_count} sites exceeds the {MAX_DENSE_SITES}-site guard"
        )));
    }
    let space = HilbertSpace::qubits(site_count)?;
    let mut acc = Accumulator::new(space.dim());
    for t in terms {
        if t.site_count() != site_count {
            return Err(Error::ContractViolation(format!(
                "term {t} has {} sites, expected {site_count}",
                t.site_count()
            )));
        }
        t.accumulate_into(&mut acc);
    }
    acc.finish(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{max_abs_diff, Entries};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_z() {
        let h = realize_pauli_string(&"Z".parse().unwrap()).unwrap();
        assert!(h.is_real());
        assert_eq!(h.get(0, 0), c(1.0));
        assert_eq!(h.get(1, 1), c(-1.0));
        assert_eq!(h.get(0, 1), c(0.0));
    }

    #[test]
    fn xx_is_antidiagonal_permutation() {
        let h = realize_pauli_string(&"XX".parse().unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(h.get(i, j), c(expect));
            }
        }
    }

    #[test]
    fn product_is_homomorphic() {
        let zi: PauliString = "ZI".parse().unwrap();
        let iz: PauliString = "IZ".parse().unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        let prod = zi.mul(&iz).unwrap();
        assert_eq!(prod, zz);
        let dense = &zi.to_dense().unwrap() * &iz.to_dense().unwrap();
        assert_eq!(
            max_abs_diff(dense.as_ref(), zz.to_dense().unwrap().as_ref()),
            0.0
        );
    }

    #[test]
    fn products_match_dense_multiplication() {
        let words = ["XYZI", "YYXZ", "ZXIY", "IZYX", "YIYI"];
        for a in words {
            for b in words {
                let pa: PauliString = a.parse().unwrap();
                let pb: PauliString = b.parse().unwrap();
                let lhs = &pa.to_dense().unwrap() * &pb.to_dense().unwrap();
                let rhs = pa.mul(&pb).unwrap().to_dense().unwrap();
                assert!(max_abs_diff(lhs.as_ref(), rhs.as_ref()) < 1e-15, "{a}·{b}");
            }
        }
    }

    #[test]
    fn y_matches_matrix_definition() {
        let y = "Y".parse::<PauliString>().unwrap().to_dense().unwrap();
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
        let yy = realize_pauli_string(&"YY".parse().unwrap()).unwrap();
        // Y⊗Y is real.
        assert!(matches!(yy.entries(), Entries::Real(_)));
    }

    #[test]
    fn site_one_is_most_significant_bit() {
        // X on site 1 of 3 flips bit 2.
        let p = PauliString::from_sites(3, &[(0, Pauli::X)], 1.0).unwrap();
        assert_eq!(p.apply_to_basis(0b000), (c(1.0), 0b100));
        let p = PauliString::from_sites(3, &[(2, Pauli::Z)], 1.0).unwrap();
        assert_eq!(p.apply_to_basis(0b001), (c(-1.0), 0b001));
    }

    #[test]
    fn squares_to_coefficient_squared() {
        let p = "XZYY".parse::<PauliString>().unwrap().scaled(c(1.5));
        let sq = p.mul(&p).unwrap();
        assert!(sq.letters().iter().all(|&l| l == Pauli::I));
        assert!((sq.coefficient() - c(2.25)).norm() < 1e-15);
    }

    #[test]
    fn guards() {
        let big = PauliString::new(vec![Pauli::X; 27], c(1.0)).unwrap();
        assert!(matches!(
            realize_pauli_string(&big),
            Err(Error::Resource(_))
        ));
        let complex = "X"
            .parse::<PauliString>()
            .unwrap()
            .scaled(Complex64::new(0.0, 1.0));
        assert!(matches!(
            realize_pauli_string(&complex),
            Err(Error::ContractViolation(_))
        ));
        assert!("XQ".parse::<PauliString>().is_err());
    }
}
