//! Six-way archetype classification of (sub)graphs: unified, in-hub,
//! out-hub, multi-topic, polarized and fragmented.
//!
//! A graph is reduced to a label-free [`FeatureVector`] and then run through
//! an ordered decision list whose thresholds live in [`ClassifierConfig`]:
//! fragmented, in-hub, out-hub, polarized, unified, with multi-topic as the
//! fallback. [`generate_archetype`] builds seeded exemplars of each kind and
//! serves as the labeling oracle for the rules.

mod generate;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::community::best_bipartition;
use crate::error::{Error, Result};
use crate::graph::Sociogram;

pub use generate::generate_archetype;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Archetype {
    Unified,
    InHub,
    OutHub,
    MultiTopic,
    Polarized,
    Fragmented,
}

impl Archetype {
    pub const ALL: [Archetype; 6] = [
        Archetype::Unified,
        Archetype::InHub,
        Archetype::OutHub,
        Archetype::MultiTopic,
        Archetype::Polarized,
        Archetype::Fragmented,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Archetype::Unified => "unified",
            Archetype::InHub => "in_hub",
            Archetype::OutHub => "out_hub",
            Archetype::MultiTopic => "multi_topic",
            Archetype::Polarized => "polarized",
            Archetype::Fragmented => "fragmented",
        }
    }
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Archetype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Archetype::ALL
            .into_iter()
            .find(|a| a.as_str() == s.replace('-', "_"))
            .ok_or_else(|| Error::Config(format!("unknown archetype `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureVector {
    pub n_vertices: usize,
    /// Distinct directed non-self-loop edges.
    pub n_edges: usize,
    /// Vertices with no edge to another vertex (self-loops do not count).
    pub isolate_fraction: f64,
    pub largest_component_fraction: f64,
    /// Largest single-vertex in-degree over `n_edges`.
    pub hub_in_share: f64,
    pub hub_out_share: f64,
    /// Modularity of the best two-block cut of the largest component.
    pub bipartition_q: f64,
    /// Undirected edges of the largest component crossing that cut, over
    /// all its undirected edges.
    pub cross_block_edge_fraction: f64,
    pub component_count: usize,
    /// Self-loop edges over retained edges.
    pub self_loop_fraction: f64,
    /// Undirected density of the largest component.
    pub largest_component_density: f64,
}

pub fn features(g: &Sociogram) -> FeatureVector {
    let n = g.vertex_count();
    let und = g.undirected_view();
    let n_edges = g.simple_edge_count();
    let frac = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };

    let isolates = (0..n).filter(|&v| und.degree(v) == 0).count();
    let components = g.connected_components();
    let largest = components
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b[0].cmp(&a[0])));
    let max_in = (0..n).map(|v| g.in_degree(v)).max().unwrap_or(0);
    let max_out = (0..n).map(|v| g.out_degree(v)).max().unwrap_or(0);
    let retained = g.retained_ends().count();

    let (mut bipartition_q, mut cross, mut lcc_density) = (0.0, 0.0, 0.0);
    if let Some(block) = largest {
        let sub = und.induced(block);
        let k = block.len();
        if k >= 2 {
            lcc_density = sub.edge_count() as f64 / (k * (k - 1) / 2) as f64;
        }
        if let Some((halves, q)) = best_bipartition(&sub) {
            bipartition_q = q;
            let mut side = vec![0u8; k];
            for &v in &halves[1] {
                side[v] = 1;
            }
            let crossing = sub.edges().filter(|&(a, b)| side[a] != side[b]).count();
            cross = frac(crossing, sub.edge_count());
        }
    }

    FeatureVector {
        n_vertices: n,
        n_edges,
        isolate_fraction: frac(isolates, n),
        largest_component_fraction: frac(largest.map_or(0, Vec::len), n),
        hub_in_share: frac(max_in, n_edges),
        hub_out_share: frac(max_out, n_edges),
        bipartition_q,
        cross_block_edge_fraction: cross,
        component_count: components.len(),
        self_loop_fraction: frac(g.self_loop_edge_count(), retained),
        largest_component_density: lcc_density,
    }
}

/// Decision-list thresholds. Loaded from TOML; missing keys take defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    /// Fragmented when at least this share of vertices is isolated.
    pub isolate_fraction: f64,
    /// Hub when one vertex holds at least this share of edges in one direction...
    pub hub_share: f64,
    /// ...and less than this share in the other.
    pub hub_opposite_max: f64,
    /// Polarized needs a two-block cut with at least this modularity...
    pub polarized_bipartition_q: f64,
    /// ...and fewer crossing edges than this share.
    pub polarized_cross_fraction: f64,
    /// Unified needs at least this undirected density on the largest component...
    pub unified_density: f64,
    /// ...and that component must hold at least this share of the vertices.
    pub unified_component_fraction: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            isolate_fraction: 0.5,
            hub_share: 0.6,
            hub_opposite_max: 0.2,
            polarized_bipartition_q: 0.3,
            polarized_cross_fraction: 0.05,
            unified_density: 0.3,
            unified_component_fraction: 0.9,
        }
    }
}

impl ClassifierConfig {
    pub fn parse(content: &str) -> Result<Self> {
        let cfg: ClassifierConfig = toml::from_str(content)
            .map_err(|e| Error::Config(format!("classifier config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!(
                "cannot read classifier config `{}`: {e}",
                path.display()
            ))
        })?;
        Self::parse(&content)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat struct serializes")
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("isolate_fraction", self.isolate_fraction),
            ("hub_share", self.hub_share),
            ("hub_opposite_max", self.hub_opposite_max),
            ("polarized_bipartition_q", self.polarized_bipartition_q),
            ("polarized_cross_fraction", self.polarized_cross_fraction),
            ("unified_density", self.unified_density),
            (
                "unified_component_fraction",
                self.unified_component_fraction,
            ),
        ];
        for (name, v) in fields {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!(
                    "classifier threshold `{name}` = {v} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArchetypeLabel {
    pub kind: Archetype,
    /// Threshold margin of the deciding feature, in [0, 1]; not a probability.
    pub confidence: f64,
}

/// Margin of `value` above `threshold`, scaled by the room above it.
fn above(value: f64, threshold: f64) -> f64 {
    (value - threshold) / (1.0 - threshold).max(f64::EPSILON)
}

/// Margin of `value` below `threshold`, scaled by the room below it.
fn below(value: f64, threshold: f64) -> f64 {
    (threshold - value) / threshold.max(f64::EPSILON)
}

/// Each rule as a list of signed margins; it fires when all are satisfied.
fn rules(f: &FeatureVector, c: &ClassifierConfig) -> [(Archetype, Vec<(f64, bool)>); 5] {
    let ge = |v: f64, t: f64| (above(v, t), v >= t);
    let lt = |v: f64, t: f64| (below(v, t), v < t);
    [
        (
            Archetype::Fragmented,
            vec![ge(f.isolate_fraction, c.isolate_fraction)],
        ),
        (
            Archetype::InHub,
            vec![
                ge(f.hub_in_share, c.hub_share),
                lt(f.hub_out_share, c.hub_opposite_max),
            ],
        ),
        (
            Archetype::OutHub,
            vec![
                ge(f.hub_out_share, c.hub_share),
                lt(f.hub_in_share, c.hub_opposite_max),
            ],
        ),
        (
            Archetype::Polarized,
            vec![
                ge(f.bipartition_q, c.polarized_bipartition_q),
                lt(f.cross_block_edge_fraction, c.polarized_cross_fraction),
            ],
        ),
        (
            Archetype::Unified,
            vec![
                ge(f.largest_component_fraction, c.unified_component_fraction),
                ge(f.largest_component_density, c.unified_density),
                lt(f.hub_in_share.max(f.hub_out_share), c.hub_share),
            ],
        ),
    ]
}

/// First matching rule wins; multi-topic is the fallback. Confidence is the
/// smallest margin among the firing rule's conditions, or for the fallback
/// the smallest shortfall by which any other rule missed.
pub fn classify_archetype(f: &FeatureVector, config: &ClassifierConfig) -> ArchetypeLabel {
    let mut nearest_miss = f64::INFINITY;
    for (kind, conditions) in rules(f, config) {
        if conditions.iter().all(|&(_, ok)| ok) {
            let margin = conditions.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
            return ArchetypeLabel {
                kind,
                confidence: margin.clamp(0.0, 1.0),
            };
        }
        let shortfall = conditions
            .iter()
            .filter(|c| !c.1)
            .map(|c| -c.0)
            .fold(0.0, f64::max);
        nearest_miss = nearest_miss.min(shortfall);
    }
    ArchetypeLabel {
        kind: Archetype::MultiTopic,
        confidence: nearest_miss.clamp(0.0, 1.0),
    }
}
