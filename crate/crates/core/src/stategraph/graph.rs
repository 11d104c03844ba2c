use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;

/// Largest number of partial paths `trajectory_contribution` will walk.
pub const MAX_TRAJECTORIES: f64 = 1e7;

/// Off-diagonal support of a Hamiltonian in its computational basis: one
/// vertex per basis state, one undirected edge per hopping amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateGraph {
    vertex_count: usize,
    /// `(i, j, H_ij)` with `i < j`; the reverse edge carries `conj(H_ij)`.
    edges: Vec<(usize, usize, Complex64)>,
    diagonal: Vec<f64>,
    threshold: f64,
    /// Unperturbed energies `x_n`, used to weight trajectories.
    labels: Vec<f64>,
}

/// Default labels `x_n = n/D` for `n = 1..=D`.
pub fn default_labels(d: usize) -> Vec<f64> {
    (1..=d).map(|n| n as f64 / d as f64).collect()
}

/// Graph of the entries of `h` with `|H_ij| > threshold`, `i ≠ j`.
pub fn to_state_graph(h: &HermitianOperator, threshold: f64) -> Result<StateGraph> {
    if !(threshold >= 0.0) {
        return Err(Error::invalid(
            "threshold",
            format!("must be nonnegative, got {threshold}"),
        ));
    }
    let d = h.dim();
    let mut edges = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let w = h.get(i, j);
            if w.norm() > threshold {
                edges.push((i, j, w));
            }
        }
    }
    Ok(StateGraph {
        vertex_count: d,
        edges,
        diagonal: (0..d).map(|i| h.get(i, i).re).collect(),
        threshold,
        labels: default_labels(d),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub regular: bool,
}

impl StateGraph {
    /// Graph from an explicit undirected edge list; each pair may appear once
    /// in either orientation.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b, w) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::invalid(
                    "edges",
                    format!("vertex out of range in ({a}, {b})"),
                ));
            }
            if a == b {
                return Err(Error::invalid(
                    "edges",
                    format!("self-edge at {a}; use the diagonal"),
                ));
            }
            let (i, j) = (a.min(b), a.max(b));
            if !seen.insert((i, j)) {
                return Err(Error::invalid(
                    "edges",
                    format!("duplicate edge ({i}, {j})"),
                ));
            }
            out.push((i, j, Complex64::new(w, 0.0)));
        }
        out.sort_by_key(|e| (e.0, e.1));
        Ok(Self {
            vertex_count,
            edges: out,
            diagonal: vec![0.0; vertex_count],
            threshold: 0.0,
            labels: default_labels(vertex_count),
        })
    }

    pub fn with_diagonal(mut self, diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.len() != self.vertex_count {
            return Err(Error::invalid(
                "diagonal",
                "length must equal the vertex count",
            ));
        }
        self.diagonal = diagonal;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<f64>) -> Result<Self> {
        if labels.len() != self.vertex_count {
            return Err(Error::invalid(
                "labels",
                "length must equal the vertex count",
            ));
        }
        if labels.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("labels", "must be finite"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, Complex64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut degrees = vec![0; self.vertex_count];
        for &(i, j, _) in &self.edges {
            degrees[i] += 1;
            degrees[j] += 1;
        }
        let regular = degrees.windows(2).all(|w| w[0] == w[1]);
        DegreeProfile { degrees, regular }
    }

    /// Weighted adjacency lists, `H_ab` for every neighbor `b` of `a`,
    /// including `a` itself when the diagonal entry exceeds the threshold.
    fn adjacency(&self) -> Vec<Vec<(usize, Complex64)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (a, &w) in self.diagonal.iter().enumerate() {
            if w.abs() > self.threshold {
                adj[a].push((a, Complex64::new(w, 0.0)));
            }
        }
        for &(i, j, w) in &self.edges {
            adj[i].push((j, w));
            adj[j].push((i, w.conj()));
        }
        adj.iter_mut().for_each(|l| l.sort_by_key(|e| e.0));
        adj
    }

    /// `"i j w"` per edge, then `"i i w"` per nonzero diagonal entry. Complex
    /// weights are written as `re+imi`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let fmt = |w: Complex64| {
            if w.im == 0.0 {
                format!("{}", w.re)
            } else {
                format!("{w}")
            }
        };
        for &(i, j, w) in &self.edges {
            let _ = writeln!(out, "{i} {j} {}", fmt(w));
        }
        for (i, &w) in self.diagonal.iter().enumerate() {
            if w.abs() > self.threshold {
                let _ = writeln!(out, "{i} {i} {w}");
            }
        }
        out
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

pub fn graph_degree_profile(g: &StateGraph) -> DegreeProfile {
    g.degree_profile()
}

/// Sum of `a` by recursive halving, so the rounding pattern depends only on
/// the length of `a`.
fn pairwise_sum(a: &[Complex64]) -> Complex64 {
    match a.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => a[0],
        n => pairwise_sum(&a[..n / 2]) + pairwise_sum(&a[n / 2..]),
    }
}

struct Walk<'a> {
    adj: &'a [Vec<(usize, Complex64)>],
    inv_gap: Vec<f64>,
    n: usize,
}

impl Walk<'_> {
    /// Paths `at → … → n` of `steps` hops whose intermediate vertices avoid `n`.
    fn from(&self, at: usize, steps: usize) -> Complex64 {
        if steps == 1 {
            return self.adj[at]
                .iter()
                .find(|e| e.0 == self.n)
                .map_or(Complex64::new(0.0, 0.0), |e| e.1);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(l, w) in &self.adj[at] {
            if l != self.n {
                acc += w * self.inv_gap[l] * self.from(l, steps - 1);
            }
        }
        acc
    }
}

/// `Σ H_{m l₁} H_{l₁ l₂} ⋯ H_{l_{k−1} n} / [(x_n − x_m) ∏ (x_n − x_{l_i})]`
/// over all length-`k` walks from `m` to `n` whose intermediate vertices
/// differ from `n`, with `x` the graph's labels. Diagonal entries act as
/// self-loops.
///
/// Branches are split on the first step and their sums combined pairwise,
/// so the result is the same with or without parallelism.
pub fn trajectory_contribution(g: &StateGraph, n: usize, m: usize, k: usize) -> Result<Complex64> {
    let d = g.vertex_count;
    if n >= d || m >= d {
        return Err(Error::invalid(
            "vertex",
            format!("n = {n}, m = {m} out of range for D = {d}"),
        ));
    }
    if n == m {
        return Err(Error::invalid("m", "must differ from n"));
    }
    if k == 0 {
        return Err(Error::invalid("k", "path length must be at least 1"));
    }
    let x = &g.labels;
    let gap_nm = x[n] - x[m];
    if gap_nm == 0.0 {
        return Err(Error::Degenerate {
            index: n.min(m),
            gap: 0.0,
            bound: 0.0,
        });
    }
    let adj = g.adjacency();
    let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let work = max_deg.powi(k as i32 - 1);
    if work > MAX_TRAJECTORIES {
        return Err(Error::Resource(format!(
            "about {work:.2e} walks of length {k} at degree {max_deg}; limit is {MAX_TRAJECTORIES:.0e}"
        )));
    }
    let mut inv_gap = Vec::with_capacity(d);
    for (l, &xl) in x.iter().enumerate() {
        if l == n {
            inv_gap.push(0.0);
        } else if xl == x[n] {
            return Err(Error::Degenerate {
                index: l.min(n),
                gap: 0.0,
                bound: 0.0,
            });
        } else {
            inv_gap.push(1.0 / (x[n] - xl));
        }
    }
    let walk = Walk {
        adj: &adj,
        inv_gap,
        n,
    };
    let total = if k == 1 {
        walk.from(m, 1)
    } else {
        let branch = |&(l, w): &(usize, Complex64)| {
            if l == n {
                Complex64::new(0.0, 0.0)
            } else {
                w * walk.inv_gap[l] * walk.from(l, k - 1)
            }
        };
        #[cfg(feature = "parallel")]
        let parts: Vec<Complex64> = {
            use rayon::prelude::*;
            adj[m].par_iter().map(branch).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let parts: Vec<Complex64> = adj[m].iter().map(branch).collect();
        pairwise_sum(&parts)
    };
    Ok(total / gap_nm)
}
