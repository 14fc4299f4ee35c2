//! Betweenness (Brandes accumulation), PageRank and eigenvector centrality.
//!
//! All three are deterministic for a fixed graph and parameter set: parallel
//! work is split into fixed-size chunks whose partial sums are reduced in
//! chunk order, so the thread count never changes a result bit.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Undefined};
use crate::graph::Sociogram;

const SOURCE_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directedness {
    Directed,
    #[default]
    Undirected,
}

fn adjacency(g: &Sociogram, mode: Directedness) -> Vec<&[usize]> {
    (0..g.vertex_count())
        .map(|v| match mode {
            Directedness::Directed => g.successors(v),
            Directedness::Undirected => g.undirected_view().neighbors(v),
        })
        .collect()
}

struct BrandesScratch {
    stack: Vec<usize>,
    preds: Vec<Vec<usize>>,
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    queue: VecDeque<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            stack: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, adj: &[&[usize]], s: usize, into: &mut [f64]) {
        self.stack.clear();
        for p in &mut self.preds {
            p.clear();
        }
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            for &w in adj[v] {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
        while let Some(w) = self.stack.pop() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
            if w != s {
                into[w] += self.delta[w];
            }
        }
    }
}

/// Raw betweenness `sum n_st(v) / n_st`. Undirected mode counts each
/// unordered pair once; directed mode counts ordered pairs along edge
/// direction. Self-loops and duplicate edges play no part.
pub fn betweenness(g: &Sociogram, mode: Directedness) -> Vec<f64> {
    let n = g.vertex_count();
    let adj = adjacency(g, mode);
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut scratch = BrandesScratch::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                scratch.accumulate(&adj, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    if mode == Directedness::Undirected {
        for t in &mut total {
            *t /= 2.0;
        }
    }
    total
}

/// Betweenness scaled to [0, 1] by the number of pairs not involving the
/// vertex: `(n-1)(n-2)` ordered pairs, or half that when undirected.
pub fn betweenness_normalized(g: &Sociogram, mode: Directedness) -> Vec<f64> {
    let n = g.vertex_count();
    let mut scores = betweenness(g, mode);
    if n > 2 {
        let mut pairs = ((n - 1) * (n - 2)) as f64;
        if mode == Directedness::Undirected {
            pairs /= 2.0;
        }
        for s in &mut scores {
            *s /= pairs;
        }
    }
    scores
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        PageRankParams {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenParams {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenParams {
    fn default() -> Self {
        EigenParams {
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

/// Scores from a power iteration. `converged` is false when the iteration
/// budget ran out (or, for eigenvector centrality, when there are no edges).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub scores: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// PageRank by power iteration on the out-degree-normalized adjacency with
/// uniform teleport. Dangling mass is spread uniformly.
pub fn pagerank(g: &Sociogram, params: &PageRankParams) -> Result<PowerIteration> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Undefined::EmptyGraph.into());
    }
    if !(params.damping > 0.0 && params.damping < 1.0) {
        return Err(Error::Contract(format!(
            "damping {} outside (0, 1)",
            params.damping
        )));
    }
    if params.tol.is_nan() || params.tol <= 0.0 {
        return Err(Error::Contract("tolerance must be positive".into()));
    }
    let d = params.damping;
    let nf = n as f64;
    let out_deg: Vec<f64> = (0..n).map(|v| g.out_degree(v) as f64).collect();
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        let dangling: f64 = (0..n).filter(|&v| out_deg[v] == 0.0).map(|v| rank[v]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        next.par_iter_mut()
            .enumerate()
            .with_min_len(256)
            .for_each(|(v, slot)| {
                let inflow: f64 = g
                    .predecessors(v)
                    .iter()
                    .map(|&u| rank[u] / out_deg[u])
                    .sum();
                *slot = base + d * inflow;
            });
        let change: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < params.tol {
            converged = true;
            break;
        }
    }
    let sum: f64 = rank.iter().sum();
    for r in &mut rank {
        *r /= sum;
    }
    Ok(PowerIteration {
        scores: rank,
        converged,
        iterations,
    })
}

/// Eigenvector centrality on the undirected adjacency, max-normalized.
///
/// Iterates `x <- (A + I) x`, which shares the principal eigenvector of `A`
/// but does not oscillate on bipartite graphs. On a disconnected graph the
/// dominant component wins and the rest decay towards 0.
pub fn eigenvector_centrality(g: &Sociogram, params: &EigenParams) -> Result<PowerIteration> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Undefined::EmptyGraph.into());
    }
    let u = g.undirected_view();
    if u.edge_count() == 0 {
        return Ok(PowerIteration {
            scores: vec![0.0; n],
            converged: false,
            iterations: 0,
        });
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        y.par_iter_mut()
            .enumerate()
            .with_min_len(256)
            .for_each(|(v, slot)| {
                *slot = x[v] + u.neighbors(v).iter().map(|&w| x[w]).sum::<f64>();
            });
        let max = y.iter().copied().fold(0.0, f64::max);
        for v in &mut y {
            *v /= max;
        }
        let change = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut y);
        if change < params.tol {
            converged = true;
            break;
        }
    }
    Ok(PowerIteration {
        scores: x,
        converged,
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub betweenness: Vec<f64>,
    pub betweenness_mode: Directedness,
    pub pagerank: PowerIteration,
    pub eigenvector: PowerIteration,
}

pub fn centrality_scores(
    g: &Sociogram,
    mode: Directedness,
    pr: &PageRankParams,
    eig: &EigenParams,
) -> Result<CentralityScores> {
    Ok(CentralityScores {
        betweenness: betweenness(g, mode),
        betweenness_mode: mode,
        pagerank: pagerank(g, pr)?,
        eigenvector: eigenvector_centrality(g, eig)?,
    })
}
