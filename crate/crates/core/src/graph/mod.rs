//! Directed multigraph of users and communications.
//!
//! Vertices are case-folded screen names kept in sorted order, so vertex
//! indices are a pure function of the vertex set. Every input edge is kept
//! in `edges`; a unique-pair index marks the first occurrence of each ordered
//! `(source, target)` pair regardless of edge kind. Self-loops are stored
//! and tallied per vertex but never enter the simple directed and
//! undirected adjacency used by the structural metrics.

mod edgelist;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::edgelist::{parse_edge_csv, write_edge_csv, EdgeListDocument, RowError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Tweet,
    Retweet,
    Mention,
    Reply,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 4] = [
        EdgeKind::Tweet,
        EdgeKind::Retweet,
        EdgeKind::Mention,
        EdgeKind::Reply,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Tweet => "tweet",
            EdgeKind::Retweet => "retweet",
            EdgeKind::Mention => "mention",
            EdgeKind::Reply => "reply",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "tweet" => Ok(EdgeKind::Tweet),
            "retweet" => Ok(EdgeKind::Retweet),
            "mention" | "mentions" => Ok(EdgeKind::Mention),
            "reply" | "replies to" | "replies-to" | "replies_to" => Ok(EdgeKind::Reply),
            other => Err(Error::Format(format!("unknown edge kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dedup {
    KeepAll,
    #[default]
    CollapsePairs,
}

impl FromStr for Dedup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keep" | "keep_all" => Ok(Dedup::KeepAll),
            "collapse" | "collapse_pairs" => Ok(Dedup::CollapsePairs),
            other => Err(Error::Config(format!("unknown dedup mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

impl DegreeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DegreeMode::In => "in",
            DegreeMode::Out => "out",
            DegreeMode::Total => "total",
        }
    }
}

impl FromStr for DegreeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(DegreeMode::In),
            "out" => Ok(DegreeMode::Out),
            "total" => Ok(DegreeMode::Total),
            other => Err(Error::Config(format!("unknown degree mode `{other}`"))),
        }
    }
}

/// Canonical vertex id: trimmed and case-folded.
pub fn vertex_id(raw: &str) -> String {
    raw.trim().to_lowercase()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub kind: EdgeKind,
    pub text: Option<String>,
    pub timestamp: Option<DateTime<Utc>>,
}

impl Edge {
    /// Builds an edge with canonical endpoint ids. Empty endpoints are rejected.
    pub fn new(source: &str, target: &str, kind: EdgeKind) -> Result<Self> {
        let source = vertex_id(source);
        let target = vertex_id(target);
        if source.is_empty() {
            return Err(Error::Format("empty source".into()));
        }
        if target.is_empty() {
            return Err(Error::Format("empty target".into()));
        }
        Ok(Edge {
            source,
            target,
            kind,
            text: None,
            timestamp: None,
        })
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn with_timestamp(mut self, ts: DateTime<Utc>) -> Self {
        self.timestamp = Some(ts);
        self
    }

    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }
}

/// Simple undirected graph over vertex indices, adjacency lists sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl UndirectedGraph {
    /// Symmetrizes arbitrary index pairs; self-loops and repeats are dropped.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for (u, v) in pairs {
            if u != v {
                sets[u].insert(v);
                sets[v].insert(u);
            }
        }
        let adj: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<usize> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        UndirectedGraph { adj, edge_count }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Re-symmetrizes this graph; the result equals `self`.
    pub fn undirected_view(&self) -> UndirectedGraph {
        UndirectedGraph::from_pairs(self.vertex_count(), self.edges())
    }

    /// Subgraph induced by `vertices` (indices into self), relabeled 0..k in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> UndirectedGraph {
        let local: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let pairs = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let local = &local;
            self.adj[v]
                .iter()
                .filter_map(move |w| local.get(w).map(|&j| (i, j)))
        });
        UndirectedGraph::from_pairs(vertices.len(), pairs)
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut block = Vec::new();
            while let Some(v) = stack.pop() {
                block.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            out.push(block);
        }
        out
    }
}

/// Immutable directed multigraph built from an edge list.
#[derive(Debug, Clone)]
pub struct Sociogram {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    ends: Vec<(usize, usize)>,
    unique: Vec<usize>,
    dedup: Dedup,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    undirected: UndirectedGraph,
    self_loops: Vec<usize>,
}

impl Sociogram {
    pub fn from_edges(edges: Vec<Edge>, dedup: Dedup) -> Self {
        Self::with_vertices(std::iter::empty::<String>(), edges, dedup)
    }

    /// Builds a graph that also contains `extra_vertices`, which may be
    /// isolated. Endpoint ids are canonicalized.
    pub fn with_vertices<S: AsRef<str>>(
        extra_vertices: impl IntoIterator<Item = S>,
        edges: Vec<Edge>,
        dedup: Dedup,
    ) -> Self {
        let mut set: HashSet<String> = extra_vertices
            .into_iter()
            .map(|s| vertex_id(s.as_ref()))
            .filter(|s| !s.is_empty())
            .collect();
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|mut e| {
                e.source = vertex_id(&e.source);
                e.target = vertex_id(&e.target);
                e
            })
            .collect();
        for e in &edges {
            set.insert(e.source.clone());
            set.insert(e.target.clone());
        }
        let mut names: Vec<String> = set.into_iter().collect();
        names.sort_unstable();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let n = names.len();
        let ends: Vec<(usize, usize)> = edges
            .iter()
            .map(|e| (index[&e.source], index[&e.target]))
            .collect();
        let mut seen = HashSet::with_capacity(ends.len());
        let unique: Vec<usize> = (0..ends.len()).filter(|&i| seen.insert(ends[i])).collect();

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &i in &unique {
            let (s, t) = ends[i];
            if s != t {
                out_adj[s].push(t);
                in_adj[t].push(s);
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        let undirected = UndirectedGraph::from_pairs(n, unique.iter().map(|&i| ends[i]));

        let mut g = Sociogram {
            names,
            index,
            edges,
            ends,
            unique,
            dedup,
            out_adj,
            in_adj,
            undirected,
            self_loops: vec![0; n],
        };
        let mut self_loops = vec![0; n];
        for (s, t) in g.retained_ends() {
            if s == t {
                self_loops[s] += 1;
            }
        }
        g.self_loops = self_loops;
        g
    }

    pub fn dedup(&self) -> Dedup {
        self.dedup
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Vertex ids in index order (sorted).
    pub fn vertices(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        let key = vertex_id(id);
        self.index
            .get(&key)
            .copied()
            .ok_or(Error::UnknownVertex(key))
    }

    /// Every input edge in input order, duplicates included.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of distinct ordered `(source, target)` pairs, self-loops included.
    pub fn unique_edge_count(&self) -> usize {
        self.unique.len()
    }

    pub fn duplicate_count(&self) -> usize {
        self.edges.len() - self.unique.len()
    }

    /// Edges kept under the dedup mode: all of them for `KeepAll`, first
    /// occurrences for `CollapsePairs`.
    pub fn retained_edges(&self) -> Box<dyn Iterator<Item = &Edge> + '_> {
        match self.dedup {
            Dedup::KeepAll => Box::new(self.edges.iter()),
            Dedup::CollapsePairs => Box::new(self.unique.iter().map(move |&i| &self.edges[i])),
        }
    }

    /// Index pairs of the retained edges.
    pub fn retained_ends(&self) -> Box<dyn Iterator<Item = (usize, usize)> + '_> {
        match self.dedup {
            Dedup::KeepAll => Box::new(self.ends.iter().copied()),
            Dedup::CollapsePairs => Box::new(self.unique.iter().map(move |&i| self.ends[i])),
        }
    }

    /// Distinct non-self-loop directed pairs, sorted.
    pub fn simple_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    pub fn simple_edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.out_adj[s].binary_search(&t).is_ok()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn degree_at(&self, v: usize, mode: DegreeMode) -> usize {
        match mode {
            DegreeMode::In => self.in_degree(v),
            DegreeMode::Out => self.out_degree(v),
            DegreeMode::Total => self.in_degree(v) + self.out_degree(v),
        }
    }

    /// Unique incident edges of `v` in the given direction; self-loops excluded.
    pub fn degree(&self, v: &str, mode: DegreeMode) -> Result<usize> {
        Ok(self.degree_at(self.index_of(v)?, mode))
    }

    pub fn self_loops(&self, v: usize) -> usize {
        self.self_loops[v]
    }

    pub fn self_loop_edge_count(&self) -> usize {
        self.self_loops.iter().sum()
    }

    pub fn undirected_view(&self) -> &UndirectedGraph {
        &self.undirected
    }

    /// Weakly connected components as vertex-index blocks, ordered by
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.undirected.components()
    }

    /// Subgraph on `vertices` keeping every input edge with both endpoints
    /// inside. Vertices are matched by index into `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Sociogram {
        let keep: HashSet<usize> = vertices.iter().copied().collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .zip(&self.ends)
            .filter(|(_, (s, t))| keep.contains(s) && keep.contains(t))
            .map(|(e, _)| e.clone())
            .collect();
        Sociogram::with_vertices(
            vertices.iter().map(|&v| self.names[v].as_str()),
            edges,
            self.dedup,
        )
    }
}

/// `build_graph` over a parsed document.
pub fn build_graph(doc: &EdgeListDocument, dedup: Dedup) -> Sociogram {
    Sociogram::from_edges(doc.edges.clone(), dedup)
}
