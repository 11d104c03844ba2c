//! Dense Hermitian operators and the clock-algebra generators.

use std::f64::consts::PI;

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::scalar::Scalar;

/// Per-entry absolute tolerance for `H == H^†`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

/// Dense storage, real whenever every imaginary part is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    space: HilbertSpace,
    entries: Entries,
    provenance: Option<String>,
}

fn check_shape(space: &HilbertSpace, nrows: usize, ncols: usize) -> Result<()> {
    if nrows != space.dim() || ncols != space.dim() {
        return Err(Error::ContractViolation(format!(
            "matrix is {nrows}x{ncols} but the space has dimension {}",
            space.dim()
        )));
    }
    Ok(())
}

fn check_hermitian<T: Scalar>(m: MatRef<'_, T>) -> Result<()> {
    let n = m.nrows();
    for j in 0..n {
        for i in j..n {
            let a = m[(i, j)].to_complex();
            let b = m[(j, i)].to_complex().conj();
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::ContractViolation(format!(
                    "non-finite entry at ({i}, {j})"
                )));
            }
            if (a - b).norm() > HERMITICITY_TOLERANCE {
                return Err(Error::ContractViolation(format!(
                    "not Hermitian: |H[{i},{j}] - conj(H[{j},{i}])| = {:.3e}",
                    (a - b).norm()
                )));
            }
        }
    }
    Ok(())
}

impl HermitianOperator {
    pub fn from_real(space: HilbertSpace, entries: Mat<f64>) -> Result<Self> {
        check_shape(&space, entries.nrows(), entries.ncols())?;
        check_hermitian(entries.as_ref())?;
        Ok(Self {
            space,
            entries: Entries::Real(entries),
            provenance: None,
        })
    }

    /// Accepts a complex matrix; stored as real when all imaginary parts are zero.
    pub fn from_complex(space: HilbertSpace, entries: Mat<Complex64>) -> Result<Self> {
        check_shape(&space, entries.nrows(), entries.ncols())?;
        check_hermitian(entries.as_ref())?;
        let n = entries.nrows();
        let real = (0..n).all(|j| (0..n).all(|i| entries[(i, j)].im == 0.0));
        let entries = if real {
            Entries::Real(Mat::from_fn(n, n, |i, j| entries[(i, j)].re))
        } else {
            Entries::Complex(entries)
        };
        Ok(Self {
            space,
            entries,
            provenance: None,
        })
    }

    pub fn from_diagonal(space: HilbertSpace, diagonal: &[f64]) -> Result<Self> {
        check_shape(&space, diagonal.len(), diagonal.len())?;
        let n = diagonal.len();
        Self::from_real(
            space,
            Mat::from_fn(n, n, |i, j| if i == j { diagonal[i] } else { 0.0 }),
        )
    }

    /// Attach a description of where this operator came from; carried into
    /// numeric error messages.
    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_real(&self) -> bool {
        matches!(self.entries, Entries::Real(_))
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match &self.entries {
            Entries::Real(m) => Complex64::new(m[(i, j)], 0.0),
            Entries::Complex(m) => m[(i, j)],
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match &self.entries {
            Entries::Real(m) => m.norm_l2(),
            Entries::Complex(m) => m.norm_l2(),
        }
    }

    pub fn to_complex_matrix(&self) -> Mat<Complex64> {
        match &self.entries {
            Entries::Real(m) => {
                Mat::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::new(m[(i, j)], 0.0))
            }
            Entries::Complex(m) => m.clone(),
        }
    }

    /// `‖H·A − A·H‖_F`.
    pub fn commutator_norm(&self, other: MatRef<'_, Complex64>) -> f64 {
        let h = self.to_complex_matrix();
        let c = &h * other - other * &h;
        c.norm_l2()
    }
}

/// Collects matrix entries, promoting to complex storage the first time a
/// nonzero imaginary part is added.
#[derive(Debug)]
pub(crate) enum Accumulator {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

impl Accumulator {
    pub(crate) fn new(dim: usize) -> Self {
        Accumulator::Real(Mat::zeros(dim, dim))
    }

    pub(crate) fn add(&mut self, row: usize, col: usize, value: Complex64) {
        if value.im != 0.0 {
            if let Accumulator::Real(m) = self {
                let n = m.nrows();
                *self =
                    Accumulator::Complex(Mat::from_fn(n, n, |i, j| Complex64::new(m[(i, j)], 0.0)));
            }
        }
        match self {
            Accumulator::Real(m) => m[(row, col)] += value.re,
            Accumulator::Complex(m) => m[(row, col)] += value,
        }
    }

    pub(crate) fn finish(self, space: HilbertSpace) -> Result<HermitianOperator> {
        match self {
            Accumulator::Real(m) => HermitianOperator::from_real(space, m),
            Accumulator::Complex(m) => HermitianOperator::from_complex(space, m),
        }
    }
}

/// Diagonal clock unitary `U` with `U_nn = exp(2πi n/D)`, `n = 1..D`
/// (row `n − 1` in zero-based storage).
pub fn clock_position(space: &HilbertSpace) -> Result<Mat<Complex64>> {
    let d = space.dim();
    if d < 2 {
        return Err(Error::InvalidSpace(format!(
            "clock operators need D >= 2, got {d}"
        )));
    }
    Ok(Mat::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, 2.0 * PI * (i + 1) as f64 / d as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Cyclic shift `L` with `L_nm = δ_{n, (m+1) mod D}`, so `L e_m = e_{m+1}`.
pub fn clock_shift(space: &HilbertSpace) -> Result<Mat<Complex64>> {
    let d = space.dim();
    if d < 2 {
        return Err(Error::InvalidSpace(format!(
            "clock operators need D >= 2, got {d}"
        )));
    }
    Ok(Mat::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}
