//! Seeded Fruchterman-Reingold layout.
//!
//! Repulsion between every vertex pair is `repulsion * k^2 / d`, attraction
//! along undirected edges is `d^2 / k`, with `k = sqrt(area / |V|)`. Each
//! step is capped by a temperature that cools linearly to zero, and
//! positions are clamped to the canvas. The repulsion multiplier scales the
//! force itself; it does not change the exponent of `d`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Sociogram, UndirectedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub repulsion: f64,
    pub iterations: usize,
    pub seed: u64,
    pub width: f64,
    pub height: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            repulsion: 3.5,
            iterations: 10,
            seed: 0,
            width: 1000.0,
            height: 1000.0,
        }
    }
}

impl LayoutParams {
    fn validate(&self) -> Result<()> {
        if !(self.repulsion > 0.0 && self.repulsion.is_finite()) {
            return Err(Error::Contract(format!(
                "repulsion must be positive, got {}",
                self.repulsion
            )));
        }
        if !(self.width > 0.0
            && self.height > 0.0
            && self.width.is_finite()
            && self.height.is_finite())
        {
            return Err(Error::Contract("canvas dimensions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutResult {
    /// `(x, y)` per vertex index.
    pub positions: Vec<(f64, f64)>,
    pub iterations_run: usize,
    pub seed: u64,
    pub repulsion_multiplier: f64,
    pub width: f64,
    pub height: f64,
}

/// Uniform placement on the canvas, drawn in vertex index order.
pub fn initial_positions(n: usize, params: &LayoutParams) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    (0..n)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            (x * params.width, y * params.height)
        })
        .collect()
}

const MIN_DISTANCE: f64 = 1e-3;

/// Unit direction from `b` to `a`; coincident points get a fixed
/// pseudo-random direction derived from the pair indices.
fn direction(a: (f64, f64), b: (f64, f64), ia: usize, ib: usize) -> ((f64, f64), f64) {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    let d = (dx * dx + dy * dy).sqrt();
    if d >= MIN_DISTANCE {
        return ((dx / d, dy / d), d);
    }
    let (lo, hi) = (ia.min(ib), ia.max(ib));
    let angle =
        ((lo as u64).wrapping_mul(2_654_435_761) ^ (hi as u64).wrapping_mul(40_503)) as f64 * 1e-3;
    let sign = if ia < ib { 1.0 } else { -1.0 };
    ((sign * angle.cos(), sign * angle.sin()), MIN_DISTANCE)
}

/// Runs the force simulation from explicit starting positions.
pub fn fr_layout_from(
    g: &UndirectedGraph,
    start: Vec<(f64, f64)>,
    params: &LayoutParams,
) -> Result<LayoutResult> {
    params.validate()?;
    let n = g.vertex_count();
    if start.len() != n {
        return Err(Error::Contract(format!(
            "{} start positions for {n} vertices",
            start.len()
        )));
    }
    let mut pos = start;
    let done = |positions, iterations_run| LayoutResult {
        positions,
        iterations_run,
        seed: params.seed,
        repulsion_multiplier: params.repulsion,
        width: params.width,
        height: params.height,
    };
    if n == 0 || params.iterations == 0 {
        return Ok(done(pos, 0));
    }

    let k = (params.width * params.height / n as f64).sqrt();
    let k2 = k * k;
    let t0 = params.width.min(params.height) / 10.0;
    for it in 0..params.iterations {
        let temp = t0 * (1.0 - it as f64 / params.iterations as f64);
        let current = &pos;
        let disp: Vec<(f64, f64)> = (0..n)
            .into_par_iter()
            .with_min_len(64)
            .map(|v| {
                let mut acc = (0.0, 0.0);
                for u in 0..n {
                    if u == v {
                        continue;
                    }
                    let ((ux, uy), d) = direction(current[v], current[u], v, u);
                    let f = params.repulsion * k2 / d;
                    acc.0 += ux * f;
                    acc.1 += uy * f;
                }
                for &w in g.neighbors(v) {
                    let ((ux, uy), d) = direction(current[v], current[w], v, w);
                    let f = d * d / k;
                    acc.0 -= ux * f;
                    acc.1 -= uy * f;
                }
                acc
            })
            .collect();
        for (p, (dx, dy)) in pos.iter_mut().zip(disp) {
            let len = (dx * dx + dy * dy).sqrt();
            if len > 0.0 && len.is_finite() {
                let step = len.min(temp) / len;
                p.0 += dx * step;
                p.1 += dy * step;
            }
            p.0 = p.0.clamp(0.0, params.width);
            p.1 = p.1.clamp(0.0, params.height);
        }
    }
    Ok(done(pos, params.iterations))
}

/// Seeded layout of the undirected view. A single vertex sits at the
/// canvas centre.
pub fn fr_layout(g: &Sociogram, params: &LayoutParams) -> Result<LayoutResult> {
    params.validate()?;
    let n = g.vertex_count();
    let start = if n == 1 {
        vec![(params.width / 2.0, params.height / 2.0)]
    } else {
        initial_positions(n, params)
    };
    if n == 1 {
        return Ok(LayoutResult {
            positions: start,
            iterations_run: params.iterations,
            seed: params.seed,
            repulsion_multiplier: params.repulsion,
            width: params.width,
            height: params.height,
        });
    }
    fr_layout_from(g.undirected_view(), start, params)
}
