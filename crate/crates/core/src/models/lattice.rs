//! Periodic square lattices and the torus with a circular obstacle.
//!
//! Site `(x, y)` of an `lx × ly` torus has index `x · ly + y`.

use std::collections::VecDeque;

use faer::Mat;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Sampler;
use crate::error::{Error, Result};

pub(super) fn check_sides(lx: usize, ly: usize) -> Result<()> {
    if lx < 3 || ly < 3 {
        return Err(Error::invalid(
            "lx/ly",
            format!("sides must be at least 3, got {lx}x{ly}"),
        ));
    }
    if lx.saturating_mul(ly) > super::MAX_DIM {
        return Err(Error::Resource(format!(
            "{lx}x{ly} lattice exceeds {} sites",
            super::MAX_DIM
        )));
    }
    Ok(())
}

fn neighbors(x: usize, y: usize, lx: usize, ly: usize) -> [(usize, usize); 4] {
    [
        ((x + 1) % lx, y),
        ((x + lx - 1) % lx, y),
        (x, (y + 1) % ly),
        (x, (y + ly - 1) % ly),
    ]
}

/// Torus adjacency plus `λ ζ` on the diagonal (drawn only when `λ ≠ 0`).
pub(super) fn torus(
    lx: usize,
    ly: usize,
    lambda: f64,
    zeta: &Sampler,
    rng: &mut ChaCha8Rng,
) -> Mat<f64> {
    let d = lx * ly;
    let mut h = Mat::zeros(d, d);
    if lambda != 0.0 {
        for i in 0..d {
            h[(i, i)] = lambda * zeta.draw(rng);
        }
    }
    for x in 0..lx {
        for y in 0..ly {
            let i = x * ly + y;
            for (nx, ny) in neighbors(x, y, lx, ly) {
                h[(i, nx * ly + ny)] = 1.0;
            }
        }
    }
    h
}

/// Sites of a torus that survive removal of a centered disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StadiumLayout {
    pub lx: usize,
    pub ly: usize,
    pub radius: f64,
    /// Kept sites in increasing torus index; position `k` is basis state `k`.
    pub sites: Vec<(usize, usize)>,
    /// Sites strictly inside the disk.
    pub deleted: usize,
    /// Sites outside the disk dropped because they are cut off from the
    /// largest connected component.
    pub dropped: usize,
    pub warnings: Vec<String>,
}

impl StadiumLayout {
    pub fn dim(&self) -> usize {
        self.sites.len()
    }

    pub fn index_of(&self, x: usize, y: usize) -> Option<usize> {
        self.sites
            .binary_search_by_key(&(x * self.ly + y), |&(a, b)| a * self.ly + b)
            .ok()
    }
}

/// Removes every site with `(x − cx)² + (y − cy)² < R²`, `c = ((lx−1)/2, (ly−1)/2)`,
/// and keeps the largest connected component of the rest.
pub fn stadium_layout(lx: usize, ly: usize, radius: f64) -> Result<StadiumLayout> {
    check_sides(lx, ly)?;
    let half = lx.min(ly) as f64 / 2.0;
    if !(radius >= 0.0 && radius < half) {
        return Err(Error::invalid(
            "radius",
            format!("obstacle too large: need 0 <= R < {half}, got {radius}"),
        ));
    }
    let (cx, cy) = ((lx as f64 - 1.0) / 2.0, (ly as f64 - 1.0) / 2.0);
    let inside = |x: usize, y: usize| {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        dx * dx + dy * dy < radius * radius
    };
    let d = lx * ly;
    let mut alive = vec![false; d];
    let mut deleted = 0;
    for x in 0..lx {
        for y in 0..ly {
            if inside(x, y) {
                deleted += 1;
            } else {
                alive[x * ly + y] = true;
            }
        }
    }

    let mut component = vec![usize::MAX; d];
    let mut sizes = Vec::new();
    for start in 0..d {
        if !alive[start] || component[start] != usize::MAX {
            continue;
        }
        let label = sizes.len();
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        component[start] = label;
        while let Some(i) = queue.pop_front() {
            size += 1;
            for (nx, ny) in neighbors(i / ly, i % ly, lx, ly) {
                let j = nx * ly + ny;
                if alive[j] && component[j] == usize::MAX {
                    component[j] = label;
                    queue.push_back(j);
                }
            }
        }
        sizes.push(size);
    }
    // First component of maximal size wins ties.
    let best = (0..sizes.len()).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b });
    let sites: Vec<(usize, usize)> = (0..d)
        .filter(|&i| alive[i] && component[i] == best)
        .map(|i| (i / ly, i % ly))
        .collect();
    let dropped = d - deleted - sites.len();
    let mut warnings = Vec::new();
    if sizes.len() > 1 {
        warnings.push(format!(
            "remainder has {} connected components; kept the largest, dropped {dropped} sites",
            sizes.len()
        ));
    }
    if sites.len() < 2 {
        return Err(Error::invalid(
            "radius",
            "obstacle leaves fewer than 2 sites",
        ));
    }
    Ok(StadiumLayout {
        lx,
        ly,
        radius,
        sites,
        deleted,
        dropped,
        warnings,
    })
}

pub(super) fn stadium(layout: &StadiumLayout) -> Mat<f64> {
    let d = layout.dim();
    let mut h = Mat::zeros(d, d);
    for (k, &(x, y)) in layout.sites.iter().enumerate() {
        for (nx, ny) in neighbors(x, y, layout.lx, layout.ly) {
            if let Some(j) = layout.index_of(nx, ny) {
                h[(k, j)] = 1.0;
            }
        }
    }
    h
}
