//! Fixed-edge histograms that merge exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `bins` equal-width bins on `[lo, hi]`: half-open except the last, which
/// includes `hi`. Values outside the range (or NaN) go to `overflow`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub overflow: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::invalid("bins", "need at least one bin"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(
                "range",
                format!("need finite lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bins],
            overflow: 0,
        })
    }

    pub fn from_values(values: &[f64], bins: usize, range: (f64, f64)) -> Result<Self> {
        let mut h = Self::new(range.0, range.1, bins)?;
        values.iter().for_each(|&x| h.add(x));
        Ok(h)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Left edge of bin `i`; `edge(bins)` is `hi`.
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.bins() {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / self.bins() as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.bins()).map(|i| self.edge(i)).collect()
    }

    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        let n = self.bins();
        let mut i = (((x - self.lo) / (self.hi - self.lo)) * n as f64).floor() as usize;
        i = i.min(n - 1);
        // Agree exactly with `edge` despite rounding in the division above.
        while i > 0 && x < self.edge(i) {
            i -= 1;
        }
        while i + 1 < n && x >= self.edge(i + 1) {
            i += 1;
        }
        Some(i)
    }

    pub fn add(&mut self, x: f64) {
        match self.bin_of(x) {
            Some(i) => self.counts[i] += 1,
            None => self.overflow += 1,
        }
    }

    /// In-range count.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn same_edges(&self, other: &Histogram) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.bins() == other.bins()
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if !self.same_edges(other) {
            return Err(Error::ContractViolation(format!(
                "cannot merge histograms on [{}, {}]x{} and [{}, {}]x{}",
                self.lo,
                self.hi,
                self.bins(),
                other.lo,
                other.hi,
                other.bins()
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
        Ok(())
    }

    /// Index of the fullest bin (first on ties), or `None` if empty.
    pub fn mode_bin(&self) -> Option<usize> {
        let max = *self.counts.iter().max()?;
        (max > 0).then(|| {
            self.counts
                .iter()
                .position(|&c| c == max)
                .expect("max exists")
        })
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.edge(i) + self.edge(i + 1))
    }
}
