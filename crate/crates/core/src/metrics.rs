//! Global and per-vertex structural metrics.
//!
//! Triplets and geodesics are counted on the undirected view (self-loops
//! dropped). Density uses the distinct directed non-self-loop pairs.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, Undefined};
use crate::graph::{DegreeMode, Sociogram, UndirectedGraph};
use crate::outcome::{log10_ratio, Metric};

/// Closed over all triplets centred on `v`; 0 when `deg(v) < 2`.
pub fn local_clustering_at(g: &UndirectedGraph, v: usize) -> f64 {
    let ns = g.neighbors(v);
    let k = ns.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    links as f64 / (k * (k - 1) / 2) as f64
}

pub fn local_clustering(g: &Sociogram, v: &str) -> Result<f64> {
    let i = g.index_of(v)?;
    Ok(local_clustering_at(g.undirected_view(), i))
}

/// Local clustering of every vertex, in index order.
pub fn local_clustering_all(g: &Sociogram) -> Vec<f64> {
    let u = g.undirected_view();
    (0..u.vertex_count())
        .into_par_iter()
        .map(|v| local_clustering_at(u, v))
        .collect()
}

/// Mean local clustering over all vertices, degenerate vertices counting 0.
pub fn global_clustering(g: &Sociogram) -> Result<f64> {
    if g.is_empty() {
        return Err(Undefined::EmptyGraph.into());
    }
    let sum: f64 = local_clustering_all(g).iter().sum();
    Ok(sum / g.vertex_count() as f64)
}

/// Directed density: distinct non-self-loop edges over `|V|(|V|-1)`.
pub fn density(g: &Sociogram) -> Result<f64> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Undefined::TooFewVertices.into());
    }
    Ok(g.simple_edge_count() as f64 / (n as f64 * (n - 1) as f64))
}

/// Maximum number of undirected edges on `n` vertices.
pub fn max_edges(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geodesics {
    pub d_avg: f64,
    pub diameter: u32,
    pub reachable_pairs: u64,
}

fn bfs_from(
    g: &UndirectedGraph,
    s: usize,
    dist: &mut [u32],
    queue: &mut VecDeque<usize>,
) -> (u64, u64, u32) {
    dist.fill(u32::MAX);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    let (mut pairs, mut total, mut far) = (0u64, 0u64, 0u32);
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if v != s {
            pairs += 1;
            total += u64::from(d);
            far = far.max(d);
        }
        for &w in g.neighbors(v) {
            if dist[w] == u32::MAX {
                dist[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
    (pairs, total, far)
}

/// Mean and maximum shortest-path length over ordered reachable pairs.
pub fn geodesic_stats_undirected(g: &UndirectedGraph) -> Result<Geodesics> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Undefined::TooFewVertices.into());
    }
    let (pairs, total, diameter) = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), s| bfs_from(g, s, dist, queue),
        )
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2.max(b.2)));
    if pairs == 0 {
        return Err(Undefined::NoReachablePairs.into());
    }
    Ok(Geodesics {
        d_avg: total as f64 / pairs as f64,
        diameter,
        reachable_pairs: pairs,
    })
}

pub fn geodesic_stats(g: &Sociogram) -> Result<Geodesics> {
    geodesic_stats_undirected(g.undirected_view())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHistogram {
    pub mode: &'static str,
    pub bins: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn total(&self) -> usize {
        self.bins.values().sum()
    }

    /// `(degree, count)` points with the degree-0 bin dropped, for log-log fitting.
    pub fn positive_points(&self) -> Vec<(f64, f64)> {
        self.bins
            .iter()
            .filter(|(&d, &c)| d > 0 && c > 0)
            .map(|(&d, &c)| (d as f64, c as f64))
            .collect()
    }
}

pub fn degree_distribution(g: &Sociogram, mode: DegreeMode) -> DegreeHistogram {
    let mut bins = BTreeMap::new();
    for v in 0..g.vertex_count() {
        *bins.entry(g.degree_at(v, mode)).or_insert(0) += 1;
    }
    DegreeHistogram {
        mode: mode.as_str(),
        bins,
    }
}

/// `log10(n_in / n_out)`. A zero `n_out` yields the infinite-asymmetry sentinel.
pub fn asymmetry_strength(n_in: u64, n_out: u64) -> Metric<f64> {
    log10_ratio(n_in as f64, n_out as f64, Undefined::InfiniteAsymmetry)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymmetryCounts {
    pub n_in: u64,
    pub n_out: u64,
    pub r_vertex: Metric<f64>,
}

impl AsymmetryCounts {
    fn new(n_in: u64, n_out: u64) -> Self {
        AsymmetryCounts {
            n_in,
            n_out,
            r_vertex: asymmetry_strength(n_in, n_out),
        }
    }
}

/// Both readings of the in/out aggregate.
///
/// `active_vertices` counts vertices with in-degree > 0 and out-degree > 0.
/// `edge_endpoints` sums in- and out-degree over the retained multigraph
/// (self-loops excluded); those two sums coincide on any edge list, so its
/// ratio is always 0 and it is reported only for completeness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexAsymmetry {
    pub active_vertices: AsymmetryCounts,
    pub edge_endpoints: AsymmetryCounts,
}

impl VertexAsymmetry {
    pub fn headline(&self) -> &AsymmetryCounts {
        &self.active_vertices
    }
}

pub fn vertex_asymmetry(g: &Sociogram) -> Result<VertexAsymmetry> {
    if g.total_edge_count() == 0 {
        return Err(Undefined::NoEdges.into());
    }
    let n = g.vertex_count();
    let active_in = (0..n).filter(|&v| g.in_degree(v) > 0).count() as u64;
    let active_out = (0..n).filter(|&v| g.out_degree(v) > 0).count() as u64;
    let (mut ends_in, mut ends_out) = (0u64, 0u64);
    for (s, t) in g.retained_ends() {
        if s != t {
            ends_out += 1;
            ends_in += 1;
        }
    }
    Ok(VertexAsymmetry {
        active_vertices: AsymmetryCounts::new(active_in, active_out),
        edge_endpoints: AsymmetryCounts::new(ends_in, ends_out),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub c_global: Metric<f64>,
    pub rho: Metric<f64>,
    pub diameter: Metric<u32>,
    pub d_avg: Metric<f64>,
    pub max_edges: u64,
    pub r_vertex: Metric<f64>,
    pub n_in: Metric<u64>,
    pub n_out: Metric<u64>,
}

pub fn graph_stats(g: &Sociogram) -> Result<GraphStats> {
    let geo = Metric::from_result(geodesic_stats(g))?;
    let asym = Metric::from_result(vertex_asymmetry(g))?;
    Ok(GraphStats {
        c_global: Metric::from_result(global_clustering(g))?,
        rho: Metric::from_result(density(g))?,
        diameter: geo.map(|x| x.diameter),
        d_avg: geo.map(|x| x.d_avg),
        max_edges: max_edges(g.vertex_count()),
        r_vertex: match asym {
            Metric::Value(a) => a.headline().r_vertex,
            Metric::Undefined(r) => Metric::Undefined(r),
        },
        n_in: asym.map(|a| a.headline().n_in),
        n_out: asym.map(|a| a.headline().n_out),
    })
}
