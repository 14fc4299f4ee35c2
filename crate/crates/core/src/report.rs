//! The analysis report: every section the pipeline produces, serialized as
//! canonical JSON (see [`crate::canonical`]). Sections of stages that did
//! not run, or that are undefined for the input, carry a reason instead of
//! a value.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::canonical;
use crate::classify::{Archetype, ArchetypeLabel, FeatureVector};
use crate::error::Result;
use crate::graph::Dedup;
use crate::metrics::{DegreeHistogram, GraphStats, VertexAsymmetry};
use crate::outcome::Metric;
use crate::statfit::FitResult;
use crate::text::{BigramStat, RiskFactorReport, SentimentReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    /// Edges read from the input, duplicates included.
    pub edges_total: usize,
    /// Distinct ordered (source, target) pairs.
    pub edges_unique: usize,
    pub duplicates: usize,
    pub self_loop_edges: usize,
    pub rejected_rows: usize,
    pub dedup: Dedup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeBin {
    pub degree: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeDistributions {
    #[serde(rename = "in")]
    pub in_degree: Vec<DegreeBin>,
    #[serde(rename = "out")]
    pub out_degree: Vec<DegreeBin>,
    pub total: Vec<DegreeBin>,
}

impl DegreeDistributions {
    pub fn from_histograms(i: &DegreeHistogram, o: &DegreeHistogram, t: &DegreeHistogram) -> Self {
        let bins = |h: &DegreeHistogram| {
            h.bins
                .iter()
                .map(|(&degree, &count)| DegreeBin { degree, count })
                .collect()
        };
        DegreeDistributions {
            in_degree: bins(i),
            out_degree: bins(o),
            total: bins(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSection {
    pub graph_stats: GraphStats,
    pub asymmetry: Metric<VertexAsymmetry>,
    pub degree_distribution: DegreeDistributions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedVertex {
    pub vertex: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    /// Highest scores first, ties by vertex id.
    pub top: Vec<RankedVertex>,
}

impl Distribution {
    /// Summary of per-vertex `scores`; `None` when there are no vertices.
    pub fn of(scores: &[f64], names: &[String], top: usize) -> Option<Self> {
        if scores.is_empty() {
            return None;
        }
        let n = scores.len() as f64;
        let mean = scores.iter().sum::<f64>() / n;
        let var = scores.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let mut sorted = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        };
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| {
            scores[b]
                .total_cmp(&scores[a])
                .then_with(|| names[a].cmp(&names[b]))
        });
        Some(Distribution {
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            mean,
            median,
            std_dev: var.sqrt(),
            top: order
                .into_iter()
                .take(top)
                .map(|v| RankedVertex {
                    vertex: names[v].clone(),
                    score: scores[v],
                })
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerIterationSummary {
    pub distribution: Distribution,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralitySummary {
    /// `directed` or `undirected`.
    pub betweenness_mode: String,
    pub betweenness: Distribution,
    pub pagerank: PowerIterationSummary,
    pub eigenvector: PowerIterationSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermEntry {
    pub term: String,
    pub count: usize,
    pub salience: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    /// 0-based position in the size-sorted block list.
    pub index: usize,
    pub size: usize,
    pub members: Vec<String>,
    pub label: Metric<ArchetypeLabel>,
    pub features: Metric<FeatureVector>,
    /// Most salient words in tweets sent by members.
    pub top_terms: Metric<Vec<TermEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingSection {
    pub modularity: Metric<f64>,
    pub group_count: usize,
    pub groups: Vec<GroupReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextSection {
    /// Distinct tweets with text.
    pub documents: usize,
    pub total_tokens: usize,
    pub top_terms: Vec<TermEntry>,
    pub bigrams: Vec<BigramStat>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub name: String,
    /// What is plotted on each axis.
    pub x: String,
    pub y: String,
    pub result: Metric<FitResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Position {
    pub vertex: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutSection {
    pub repulsion_multiplier: f64,
    pub iterations: usize,
    pub seed: u64,
    pub width: f64,
    pub height: f64,
    pub positions: Vec<Position>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    /// SHA-256 over the canonical analysis parameters and configuration
    /// file contents (paths and thread count excluded).
    pub config_hash: String,
    /// SHA-256 of the edge list bytes.
    pub input_hash: String,
    /// RFC 3339 run time; null in deterministic mode.
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format_version: u32,
    /// Names of the stages that ran, in order.
    pub stages: Vec<String>,
    pub graph: GraphSummary,
    pub metrics: Metric<MetricsSection>,
    pub centrality_summary: Metric<CentralitySummary>,
    pub grouping: Metric<GroupingSection>,
    /// Label of the whole graph.
    pub graph_archetype: Metric<ArchetypeLabel>,
    pub archetype_frequency: Metric<BTreeMap<Archetype, usize>>,
    pub sentiment: Metric<SentimentReport>,
    pub risk: Metric<RiskFactorReport>,
    pub text: Metric<TextSection>,
    pub fits: Metric<Vec<FitReport>>,
    pub layout: Metric<LayoutSection>,
    pub provenance: Provenance,
}

/// Count per archetype over labeled groups, with every kind present.
pub fn archetype_frequency<'a>(
    labels: impl IntoIterator<Item = &'a ArchetypeLabel>,
) -> BTreeMap<Archetype, usize> {
    let mut freq: BTreeMap<Archetype, usize> = Archetype::ALL.into_iter().map(|k| (k, 0)).collect();
    for l in labels {
        *freq.get_mut(&l.kind).expect("all kinds present") += 1;
    }
    freq
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        canonical::to_json(self)
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_json()?.as_bytes())?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
