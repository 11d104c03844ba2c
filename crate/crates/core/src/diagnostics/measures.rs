//! Per-eigenstate delocalization measures.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PreparedRotation;
use crate::error::{Error, Result};

/// Allowed deviation of `‖ψ‖²` from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Weights `p_m = |ψ_m|²` after rotating `state` into the chosen basis.
pub fn abelian_reduce(
    state: &[Complex64],
    rotation: Option<&PreparedRotation>,
) -> Result<Vec<f64>> {
    let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if !((norm2 - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::ContractViolation(format!(
            "state is not normalized: |ψ|² = {norm2:.15}"
        )));
    }
    match rotation {
        None => Ok(state.iter().map(|z| z.norm_sqr()).collect()),
        Some(rot) => {
            let mut v = state.to_vec();
            rot.apply(&mut v)?;
            Ok(v.iter().map(|z| z.norm_sqr()).collect())
        }
    }
}

/// `ξ = 1/Σ p²`, clamped to `[1, D]` against round-off.
pub fn ipr(p: &[f64]) -> f64 {
    let s: f64 = p.iter().map(|x| x * x).sum();
    (1.0 / s).clamp(1.0, p.len() as f64)
}

/// `S = −Σ p ln p` (with `0 ln 0 = 0`) and `Ω = exp(S)/D`, `D = p.len()`.
pub fn ir_diversity(p: &[f64]) -> (f64, f64) {
    let d = p.len() as f64;
    let s = -p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>();
    let s = s.clamp(0.0, d.ln());
    (s, s.exp() / d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub energy: f64,
    pub ipr: f64,
    pub ir_entropy: f64,
    pub ir_diversity: f64,
    pub sector_label: Option<String>,
    /// The state belongs to a degeneracy block of size > 1.
    pub degenerate: bool,
}

impl DiagnosticRecord {
    pub fn from_weights(
        energy: f64,
        p: &[f64],
        sector_label: Option<String>,
        degenerate: bool,
    ) -> Self {
        let (ir_entropy, ir_diversity) = ir_diversity(p);
        Self {
            energy,
            ipr: ipr(p),
            ir_entropy,
            ir_diversity,
            sector_label,
            degenerate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn basis_vector_is_one_hot() {
        let mut e = vec![c(0.0); 6];
        e[2] = c(1.0);
        let p = abelian_reduce(&e, None).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(ipr(&p), 1.0);
        let (s, omega) = ir_diversity(&p[..]);
        assert_eq!(s, 0.0);
        assert_eq!(omega, 1.0 / 6.0);
    }

    #[test]
    fn uniform_vector() {
        let d = 8;
        let v = vec![c(1.0 / (d as f64).sqrt()); d];
        let p = abelian_reduce(&v, None).unwrap();
        assert!(p.iter().all(|&x| (x - 0.125).abs() < 1e-15));
        assert!((ipr(&p) - 8.0).abs() < 1e-12);
        let (s, omega) = ir_diversity(&p);
        assert!((s - 8f64.ln()).abs() < 1e-12);
        assert!((omega - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_and_half() {
        assert!((ipr(&[0.5, 0.5, 0.0, 0.0]) - 2.0).abs() < 1e-15);
        let (s, omega) = ir_diversity(&[0.5, 0.5, 0.0, 0.0]);
        assert!((s - 2f64.ln()).abs() < 1e-15);
        assert!((omega - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        assert!(abelian_reduce(&[c(1.0), c(0.1)], None).is_err());
    }

    #[test]
    fn record_is_consistent() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let r = DiagnosticRecord::from_weights(-1.0, &p, Some("P+".into()), false);
        assert!((r.ir_diversity - r.ir_entropy.exp() / 4.0).abs() < 1e-15);
        let expect_s =
            -(0.1f64 * 0.1f64.ln() + 0.2 * 0.2f64.ln() + 0.3 * 0.3f64.ln() + 0.4 * 0.4f64.ln());
        assert!((r.ir_entropy - expect_s).abs() < 1e-15);
        assert!((r.ipr - 1.0 / 0.3).abs() < 1e-12);
    }
}
