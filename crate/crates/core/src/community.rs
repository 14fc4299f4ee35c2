//! Newman modularity and Clauset-Newman-Moore greedy agglomeration.
//!
//! Merge gains are kept as exact integers: joining blocks `i` and `j` changes
//! Q by `(2m * e_ij - d_i * d_j) / (2 m^2)`, with `e_ij` the edges between
//! the blocks and `d` the block degree sums. Only the numerator is stored,
//! so equal gains compare equal and the smallest `(i, j)` pair wins a tie.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result, Undefined};
use crate::graph::{Sociogram, UndirectedGraph};
use crate::outcome::Metric;

/// Q of a partition given as blocks of vertex indices.
pub fn modularity_undirected(g: &UndirectedGraph, blocks: &[Vec<usize>]) -> Result<f64> {
    let labels = labels_of(g.vertex_count(), blocks)?;
    let m = g.edge_count();
    if m == 0 {
        return Err(Undefined::NoEdges.into());
    }
    let mut inside = vec![0u64; blocks.len()];
    let mut degree = vec![0u64; blocks.len()];
    for v in 0..g.vertex_count() {
        degree[labels[v]] += g.degree(v) as u64;
    }
    for (u, v) in g.edges() {
        if labels[u] == labels[v] {
            inside[labels[u]] += 1;
        }
    }
    let m = m as f64;
    Ok(inside
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

pub fn modularity(g: &Sociogram, blocks: &[Vec<usize>]) -> Result<f64> {
    modularity_undirected(g.undirected_view(), blocks)
}

/// Block label per vertex; fails unless `blocks` partition `0..n`.
pub fn labels_of(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut labels = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::Contract(format!("block {b} is empty")));
        }
        for &v in block {
            if v >= n {
                return Err(Error::Contract(format!("vertex {v} out of range")));
            }
            if labels[v] != usize::MAX {
                return Err(Error::Contract(format!("vertex {v} appears in two blocks")));
            }
            labels[v] = b;
        }
    }
    if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
        return Err(Error::Contract(format!("vertex {v} is in no block")));
    }
    Ok(labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Merge {
    pub kept: usize,
    pub absorbed: usize,
    pub delta_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grouping {
    /// Blocks sorted by size descending, then by smallest member.
    pub blocks: Vec<Vec<usize>>,
    pub modularity: Metric<f64>,
    pub merges: Vec<Merge>,
    /// Optional per-block label, filled in by text analysis.
    pub labels: Vec<Option<String>>,
}

impl Grouping {
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                out[v] = b;
            }
        }
        out
    }
}

fn sort_blocks(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
    blocks
}

struct Agglomeration {
    two_m: i128,
    degree: Vec<i128>,
    links: Vec<BTreeMap<usize, i128>>,
    members: Vec<Vec<usize>>,
    queue: BTreeSet<(Reverse<i128>, usize, usize)>,
    live: usize,
}

impl Agglomeration {
    fn new(g: &UndirectedGraph) -> Self {
        let n = g.vertex_count();
        let mut links = vec![BTreeMap::new(); n];
        for (u, v) in g.edges() {
            links[u].insert(v, 1);
            links[v].insert(u, 1);
        }
        let mut a = Agglomeration {
            two_m: 2 * g.edge_count() as i128,
            degree: (0..n).map(|v| g.degree(v) as i128).collect(),
            links,
            members: (0..n).map(|v| vec![v]).collect(),
            queue: BTreeSet::new(),
            live: n,
        };
        for (u, v) in g.edges() {
            let key = a.key(u, v);
            a.queue.insert(key);
        }
        a
    }

    fn gain(&self, i: usize, j: usize) -> i128 {
        self.two_m * self.links[i][&j] - self.degree[i] * self.degree[j]
    }

    fn key(&self, i: usize, j: usize) -> (Reverse<i128>, usize, usize) {
        (Reverse(self.gain(i, j)), i.min(j), i.max(j))
    }

    fn best(&self) -> Option<(i128, usize, usize)> {
        self.queue.first().map(|&(Reverse(g), i, j)| (g, i, j))
    }

    fn delta_q(&self, gain: i128) -> f64 {
        2.0 * gain as f64 / (self.two_m as f64 * self.two_m as f64)
    }

    /// Absorbs block `j` into block `i` (`i < j`).
    fn merge(&mut self, i: usize, j: usize) {
        for &k in self.links[i].keys() {
            self.queue
                .remove(&(Reverse(self.gain(i, k)), i.min(k), i.max(k)));
        }
        for &k in self.links[j].keys() {
            if k != i {
                self.queue
                    .remove(&(Reverse(self.gain(j, k)), j.min(k), j.max(k)));
            }
        }
        let absorbed = std::mem::take(&mut self.links[j]);
        for (k, c) in absorbed {
            if k == i {
                continue;
            }
            *self.links[i].entry(k).or_insert(0) += c;
            let back = self.links[k].remove(&j).expect("symmetric links");
            *self.links[k].entry(i).or_insert(0) += back;
        }
        self.links[i].remove(&j);
        self.degree[i] += self.degree[j];
        self.degree[j] = 0;
        let moved = std::mem::take(&mut self.members[j]);
        self.members[i].extend(moved);
        self.live -= 1;
        let keys: Vec<_> = self.links[i].keys().map(|&k| self.key(i, k)).collect();
        self.queue.extend(keys);
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .filter(|m| !m.is_empty())
            .cloned()
            .collect()
    }
}

/// Greedy CNM grouping. Starts from singletons and merges the connected
/// pair with the largest modularity gain while that gain is positive, so
/// the final partition is the peak of the merge sequence.
pub fn cnm_partition_undirected(g: &UndirectedGraph) -> Grouping {
    let mut agg = Agglomeration::new(g);
    let mut merges = Vec::new();
    while let Some((gain, i, j)) = agg.best() {
        if gain <= 0 {
            break;
        }
        merges.push(Merge {
            kept: i,
            absorbed: j,
            delta_q: agg.delta_q(gain),
        });
        agg.merge(i, j);
    }
    let blocks = sort_blocks(agg.blocks());
    let modularity =
        Metric::from_result(modularity_undirected(g, &blocks)).expect("blocks partition the graph");
    let labels = vec![None; blocks.len()];
    Grouping {
        blocks,
        modularity,
        merges,
        labels,
    }
}

pub fn cnm_partition(g: &Sociogram) -> Grouping {
    cnm_partition_undirected(g.undirected_view())
}

/// Best two-block cut found by continuing the agglomeration past its peak
/// until two blocks remain. `None` for graphs that cannot be reduced to
/// exactly two connected blocks (fewer than 2 vertices, no edges, or more
/// than two components).
pub fn best_bipartition(g: &UndirectedGraph) -> Option<(Vec<Vec<usize>>, f64)> {
    if g.vertex_count() < 2 || g.edge_count() == 0 {
        return None;
    }
    let mut agg = Agglomeration::new(g);
    while agg.live > 2 {
        let (_, i, j) = agg.best()?;
        agg.merge(i, j);
    }
    let blocks = sort_blocks(agg.blocks());
    let q = modularity_undirected(g, &blocks).ok()?;
    Some((blocks, q))
}
