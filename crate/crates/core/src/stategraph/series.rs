use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;

/// Highest order the series is expanded to.
pub const MAX_ORDER: usize = 12;

/// Smallest gap between unperturbed levels.
pub const MIN_GAP: f64 = 1e-9;

/// Rayleigh–Schrödinger expansion of the eigenpairs of `X + λH` around a
/// nondegenerate diagonal `X = diag(x)`.
#[derive(Debug, Clone)]
pub struct PerturbationSeries {
    x: Vec<f64>,
    lambda: f64,
    h: Mat<Complex64>,
    /// `psi[k][(m, n)] = ψ^(k)_{mn}`; `psi[0]` is the identity.
    psi: Vec<Mat<Complex64>>,
    /// `energy[k][n] = E^(k)_n`, with `energy[0] = x`.
    energy: Vec<Vec<Complex64>>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Neumaier-compensated sum with error-free products, so that large
/// cancelling terms in the normalization sums leave no rounding residue.
#[derive(Default)]
struct Exact {
    sum: f64,
    comp: f64,
}

impl Exact {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p);
        self.add(a.mul_add(b, -p));
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `Σ conj(a) b` over `pairs`, compensated.
fn conj_dot(pairs: impl Iterator<Item = (Complex64, Complex64)>) -> Complex64 {
    let (mut re, mut im) = (Exact::default(), Exact::default());
    for (a, b) in pairs {
        re.add_product(a.re, b.re);
        re.add_product(a.im, b.im);
        im.add_product(a.re, b.im);
        im.add_product(-a.im, b.re);
    }
    Complex64::new(re.value(), im.value())
}

fn check_levels(x: &[f64]) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("x", "unperturbed levels must be finite"));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    for w in order.windows(2) {
        let gap = x[w[1]] - x[w[0]];
        if gap < MIN_GAP {
            return Err(Error::Degenerate {
                index: w[0].min(w[1]),
                gap,
                bound: MIN_GAP,
            });
        }
    }
    Ok(())
}

/// Expands to order `k_max` via
/// `(x_m − x_n) ψ^(k+1)_{mn} = Σ_{k'} E^(k'+1)_n ψ^(k−k')_{mn} − Σ_l H_{ml} ψ^(k)_{ln}`,
/// fixing the diagonal `ψ^(k)_{nn}` (taken real) by order-by-order
/// normalization.
pub fn perturbation_series(
    x: &[f64],
    h: &HermitianOperator,
    lambda: f64,
    k_max: usize,
) -> Result<PerturbationSeries> {
    let d = x.len();
    if h.dim() != d {
        return Err(Error::invalid(
            "x",
            format!("{d} levels for a {}-dimensional operator", h.dim()),
        ));
    }
    if !(1..=MAX_ORDER).contains(&k_max) {
        return Err(Error::invalid(
            "k_max",
            format!("must lie in 1..={MAX_ORDER}, got {k_max}"),
        ));
    }
    if !lambda.is_finite() {
        return Err(Error::invalid("lambda", "must be finite"));
    }
    check_levels(x)?;
    let hm = h.to_complex_matrix();
    let mut psi = vec![Mat::<Complex64>::identity(d, d)];
    let mut energy = vec![x
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect::<Vec<_>>()];
    for k in 0..k_max {
        let hpsi = &hm * &psi[k];
        // E^(k+1)_n from the m = n row; ψ^(0)_nn = 1.
        let e_next: Vec<Complex64> = (0..d)
            .map(|n| {
                let mut e = hpsi[(n, n)];
                for kp in 0..k {
                    e -= energy[kp + 1][n] * psi[k - kp][(n, n)];
                }
                e
            })
            .collect();
        energy.push(e_next);
        let mut next = Mat::<Complex64>::zeros(d, d);
        for n in 0..d {
            for m in (0..d).filter(|&m| m != n) {
                let mut rhs = -hpsi[(m, n)];
                for kp in 0..=k {
                    rhs += energy[kp + 1][n] * psi[k - kp][(m, n)];
                }
                next[(m, n)] = rhs / (x[m] - x[n]);
            }
        }
        psi.push(next);
        // 2 Re ψ^(k+1)_nn = −Σ_m Σ_{k'=1}^{k} conj(ψ^(k'))ψ^(k+1−k').
        let order = k + 1;
        for n in 0..d {
            let s = conj_dot((1..order).flat_map(|kp| {
                let psi = &psi;
                (0..d).map(move |m| (psi[kp][(m, n)], psi[order - kp][(m, n)]))
            }));
            psi[order][(n, n)] = Complex64::new(-0.5 * s.re, 0.0);
        }
    }
    Ok(PerturbationSeries {
        x: x.to_vec(),
        lambda,
        h: hm,
        psi,
        energy,
    })
}

impl PerturbationSeries {
    pub fn order(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn levels(&self) -> &[f64] {
        &self.x
    }

    /// `ψ^(k)_{mn}`.
    pub fn coefficient(&self, k: usize, m: usize, n: usize) -> Complex64 {
        self.psi[k][(m, n)]
    }

    /// `E^(k)_n` for `k ≥ 1`; real for Hermitian `H`.
    pub fn energy_correction(&self, k: usize, n: usize) -> f64 {
        self.energy[k][n].re
    }

    /// `x_n + Σ_k λ^k E^(k)_n`.
    pub fn energy(&self, n: usize) -> f64 {
        let mut e = self.x[n];
        let mut p = 1.0;
        for k in 1..=self.order() {
            p *= self.lambda;
            e += p * self.energy[k][n].re;
        }
        e
    }

    /// `Σ_k λ^k ψ^(k)_{·n}`.
    pub fn eigenvector(&self, n: usize) -> Vec<Complex64> {
        let d = self.x.len();
        let mut v = vec![zero(); d];
        let mut p = 1.0;
        for k in 0..=self.order() {
            for (m, vm) in v.iter_mut().enumerate() {
                *vm += self.psi[k][(m, n)] * p;
            }
            p *= self.lambda;
        }
        v
    }

    /// Largest violation of the recurrence over all orders and entries.
    pub fn recurrence_residual(&self) -> f64 {
        let d = self.x.len();
        let mut worst = 0.0f64;
        for k in 0..self.order() {
            let hpsi = &self.h * &self.psi[k];
            for n in 0..d {
                for m in 0..d {
                    let mut rhs = -hpsi[(m, n)];
                    for kp in 0..=k {
                        rhs += self.energy[kp + 1][n] * self.psi[k - kp][(m, n)];
                    }
                    let lhs = self.psi[k + 1][(m, n)] * (self.x[m] - self.x[n]);
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// Largest `|Σ_m Σ_{k'} conj(ψ^(k')_{mn}) ψ^(k−k')_{mn}|` for `1 ≤ k ≤ K`.
    pub fn normalization_residual(&self) -> f64 {
        let d = self.x.len();
        let mut worst = 0.0f64;
        for k in 1..=self.order() {
            for n in 0..d {
                let s = conj_dot((0..=k).flat_map(|kp| {
                    (0..d).map(move |m| (self.psi[kp][(m, n)], self.psi[k - kp][(m, n)]))
                }));
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// Multiplies `v` by the unit phase that makes its largest-magnitude entry
/// real and positive.
pub fn align_phase(v: &mut [Complex64]) {
    let Some(big) = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
    else {
        return;
    };
    if big.norm() == 0.0 {
        return;
    }
    let phase = big.conj() / big.norm();
    v.iter_mut().for_each(|z| *z *= phase);
}
