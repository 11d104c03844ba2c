//! Dense Hermitian eigendecomposition.

use std::ops::Range;

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::traits::ComplexField;
use faer::{Mat, MatRef, Par};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{Entries, HermitianOperator};
use crate::scalar::Scalar;

/// Relative tolerance used to group numerically equal eigenvalues.
pub const DEFAULT_EPS_DEG: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvectors {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

impl Eigenvectors {
    pub fn dim(&self) -> usize {
        match self {
            Eigenvectors::Real(m) => m.nrows(),
            Eigenvectors::Complex(m) => m.nrows(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Eigenvectors::Real(_))
    }

    /// Column `n` as complex amplitudes.
    pub fn column(&self, n: usize) -> Vec<Complex64> {
        match self {
            Eigenvectors::Real(m) => m.col(n).iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Eigenvectors::Complex(m) => m.col(n).iter().copied().collect(),
        }
    }

    /// `|ψ_mn|²` for column `n`.
    pub fn weights(&self, n: usize) -> Vec<f64> {
        match self {
            Eigenvectors::Real(m) => m.col(n).iter().map(|x| x * x).collect(),
            Eigenvectors::Complex(m) => m.col(n).iter().map(|x| x.norm_sqr()).collect(),
        }
    }

    pub fn to_complex(&self) -> Mat<Complex64> {
        match self {
            Eigenvectors::Real(m) => {
                Mat::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::new(m[(i, j)], 0.0))
            }
            Eigenvectors::Complex(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub(crate) eigenvalues: Vec<f64>,
    pub(crate) eigenvectors: Eigenvectors,
    pub(crate) degeneracy_blocks: Vec<Range<usize>>,
}

impl SpectralDecomposition {
    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `n` pairs with `eigenvalues()[n]`.
    pub fn eigenvectors(&self) -> &Eigenvectors {
        &self.eigenvectors
    }

    /// Partition of `0..D` into runs of numerically equal eigenvalues.
    pub fn degeneracy_blocks(&self) -> &[Range<usize>] {
        &self.degeneracy_blocks
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn has_degeneracies(&self) -> bool {
        self.degeneracy_blocks.iter().any(|b| b.len() > 1)
    }

    /// `max_n ‖H v_n − E_n v_n‖₂`.
    pub fn max_residual(&self, h: &HermitianOperator) -> f64 {
        let hm = h.to_complex_matrix();
        let v = self.eigenvectors.to_complex();
        let hv = &hm * &v;
        (0..self.dim())
            .map(|n| {
                let e = self.eigenvalues[n];
                hv.col(n)
                    .iter()
                    .zip(v.col(n).iter())
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V†V − 1|` entrywise.
    pub fn orthonormality_error(&self) -> f64 {
        let v = self.eigenvectors.to_complex();
        let g = v.adjoint() * &v;
        let mut worst = 0.0f64;
        for j in 0..g.ncols() {
            for i in 0..g.nrows() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// `V · diag(E) · V†`.
    pub fn reconstruct(&self) -> Mat<Complex64> {
        let v = self.eigenvectors.to_complex();
        let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        &scaled * v.adjoint()
    }
}

fn evd<T>(
    a: MatRef<'_, T>,
    vectors: bool,
) -> std::result::Result<(Vec<f64>, Option<Mat<T>>), String>
where
    T: ComplexField + Scalar,
{
    let n = a.nrows();
    let par = Par::Seq;
    let compute = if vectors {
        ComputeEigenvectors::Yes
    } else {
        ComputeEigenvectors::No
    };
    let mut s = Diag::<T>::zeros(n);
    let mut u = vectors.then(|| Mat::<T>::zeros(n, n));
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<T>(
        n,
        compute,
        par,
        Default::default(),
    ));
    self_adjoint_evd(
        a,
        s.as_mut(),
        u.as_mut().map(|u| u.as_mut()),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| format!("eigensolver did not converge ({e:?})"))?;
    let values: Vec<f64> = s
        .column_vector()
        .iter()
        .map(|x| x.to_complex().re)
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err("eigensolver produced non-finite eigenvalues".into());
    }
    Ok((values, u))
}

fn numeric(h: &HermitianOperator, message: String) -> Error {
    Error::Numeric {
        message,
        provenance: h.provenance().map(str::to_owned),
    }
}

/// Groups consecutive eigenvalues whose gap is below `eps_deg · ‖H‖_F / D`.
pub fn degeneracy_blocks(
    eigenvalues: &[f64],
    frobenius_norm: f64,
    eps_deg: f64,
) -> Vec<Range<usize>> {
    let d = eigenvalues.len();
    if d == 0 {
        return Vec::new();
    }
    let threshold = eps_deg * frobenius_norm / d as f64;
    let mut blocks = Vec::new();
    let mut start = 0;
    for n in 1..d {
        let gap = eigenvalues[n] - eigenvalues[n - 1];
        if !(gap < threshold || gap == 0.0) {
            blocks.push(start..n);
            start = n;
        }
    }
    blocks.push(start..d);
    blocks
}

/// Full eigendecomposition with ascending eigenvalues. Real operators get real
/// eigenvectors.
pub fn spectral_decompose(h: &HermitianOperator, eps_deg: f64) -> Result<SpectralDecomposition> {
    if !(eps_deg >= 0.0) {
        return Err(Error::invalid("eps_deg", "must be nonnegative"));
    }
    let (eigenvalues, eigenvectors) = match h.entries() {
        Entries::Real(m) => {
            let (e, v) = evd(m.as_ref(), true).map_err(|msg| numeric(h, msg))?;
            (e, Eigenvectors::Real(v.expect("vectors requested")))
        }
        Entries::Complex(m) => {
            let (e, v) = evd(m.as_ref(), true).map_err(|msg| numeric(h, msg))?;
            (e, Eigenvectors::Complex(v.expect("vectors requested")))
        }
    };
    let degeneracy_blocks = degeneracy_blocks(&eigenvalues, h.frobenius_norm(), eps_deg);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        degeneracy_blocks,
    })
}

/// Ascending eigenvalues only; roughly twice as fast as the full decomposition.
pub fn eigenvalues(h: &HermitianOperator) -> Result<Vec<f64>> {
    match h.entries() {
        Entries::Real(m) => evd(m.as_ref(), false).map(|(e, _)| e),
        Entries::Complex(m) => evd(m.as_ref(), false).map(|(e, _)| e),
    }
    .map_err(|msg| numeric(h, msg))
}
