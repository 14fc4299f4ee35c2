//! End-to-end analysis: ingest, metrics, centrality, community, classify,
//! text, fit, layout, then artifact emission.
//!
//! All configuration is loaded and checked before any computation, so a
//! bad path or malformed file fails fast with a configuration error.
//! Artifacts are rendered in memory and only written once every stage has
//! succeeded; a failed write removes whatever this run already wrote.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::canonical;
use crate::centrality::{
    centrality_scores, CentralityScores, Directedness, EigenParams, PageRankParams,
};
use crate::classify::{classify_archetype, features, ArchetypeLabel, ClassifierConfig};
use crate::community::{cnm_partition, Grouping};
use crate::error::{Error, Result, Undefined};
use crate::export::{self, VertexRecord};
use crate::graph::{build_graph, parse_edge_csv, Dedup, DegreeMode, Sociogram};
use crate::layout::{fr_layout, LayoutParams, LayoutResult};
use crate::metrics::{degree_distribution, graph_stats, local_clustering_all, vertex_asymmetry};
use crate::outcome::Metric;
use crate::report::*;
use crate::statfit::{fit, FitModel};
use crate::text::{
    bigram_stats, risk_factor_match, sentiment_scores, top_terms, LexiconSet, RiskFactorConfig,
    TokenCorpus, LEXICON_NAMES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Metrics,
    Centrality,
    Community,
    Classify,
    Text,
    Fit,
    Layout,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Ingest,
        Stage::Metrics,
        Stage::Centrality,
        Stage::Community,
        Stage::Classify,
        Stage::Text,
        Stage::Fit,
        Stage::Layout,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Metrics => "metrics",
            Stage::Centrality => "centrality",
            Stage::Community => "community",
            Stage::Classify => "classify",
            Stage::Text => "text",
            Stage::Fit => "fit",
            Stage::Layout => "layout",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown stage `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Artifact {
    Report,
    VerticesCsv,
    LayoutCsv,
    Graphml,
    Dot,
}

impl Artifact {
    pub const ALL: [Artifact; 5] = [
        Artifact::Report,
        Artifact::VerticesCsv,
        Artifact::LayoutCsv,
        Artifact::Graphml,
        Artifact::Dot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Artifact::Report => "report",
            Artifact::VerticesCsv => "vertices_csv",
            Artifact::LayoutCsv => "layout_csv",
            Artifact::Graphml => "graphml",
            Artifact::Dot => "dot",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Artifact::Report => "report.json",
            Artifact::VerticesCsv => "vertices.csv",
            Artifact::LayoutCsv => "layout.csv",
            Artifact::Graphml => "graph.graphml",
            Artifact::Dot => "graph.dot",
        }
    }

    /// Last stage whose output the artifact needs.
    pub fn required_stage(self) -> Stage {
        match self {
            Artifact::Report | Artifact::Graphml | Artifact::Dot => Stage::Ingest,
            Artifact::VerticesCsv => Stage::Community,
            Artifact::LayoutCsv => Stage::Layout,
        }
    }
}

impl FromStr for Artifact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Artifact::ALL
            .into_iter()
            .find(|a| a.as_str() == s || a.file_name() == s)
            .ok_or_else(|| Error::Config(format!("unknown artifact `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub input_edges: PathBuf,
    pub lexicon_dir: PathBuf,
    pub risk_config: PathBuf,
    /// Built-in thresholds when absent.
    pub classifier_config: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub dedup: Dedup,
    pub layout: LayoutParams,
    pub pagerank: PageRankParams,
    pub eigenvector: EigenParams,
    pub betweenness: Directedness,
    pub emit: BTreeSet<Artifact>,
    /// Stop after this stage; later sections are marked as skipped.
    pub stage: Option<Stage>,
    /// Worker cap; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Omit the run timestamp so reports are byte-identical across runs.
    pub deterministic: bool,
}

impl AnalysisConfig {
    pub fn new(
        input_edges: impl Into<PathBuf>,
        lexicon_dir: impl Into<PathBuf>,
        risk_config: impl Into<PathBuf>,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        AnalysisConfig {
            input_edges: input_edges.into(),
            lexicon_dir: lexicon_dir.into(),
            risk_config: risk_config.into(),
            classifier_config: None,
            output_dir: output_dir.into(),
            dedup: Dedup::default(),
            layout: LayoutParams::default(),
            pagerank: PageRankParams::default(),
            eigenvector: EigenParams::default(),
            betweenness: Directedness::default(),
            emit: Artifact::ALL.into_iter().collect(),
            stage: None,
            threads: None,
            deterministic: false,
        }
    }

    fn last_stage(&self) -> Stage {
        self.stage.unwrap_or(Stage::Layout)
    }
}

/// Everything loaded from disk during validation.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub edges: Vec<u8>,
    pub lexicons: LexiconSet,
    pub risk: RiskFactorConfig,
    pub classifier: ClassifierConfig,
    pub config_hash: String,
    pub input_hash: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn read_config_file(path: &Path, what: &str) -> Result<Vec<u8>> {
    if !path.is_file() {
        return Err(Error::Config(format!(
            "{what} `{}` does not exist",
            path.display()
        )));
    }
    std::fs::read(path)
        .map_err(|e| Error::Config(format!("cannot read {what} `{}`: {e}", path.display())))
}

#[derive(Serialize)]
struct HashedConfig<'a> {
    dedup: Dedup,
    layout: &'a LayoutParams,
    pagerank: &'a PageRankParams,
    eigenvector: &'a EigenParams,
    betweenness: Directedness,
    emit: &'a BTreeSet<Artifact>,
    stage: Option<Stage>,
    classifier: &'a ClassifierConfig,
    lexicons: BTreeMap<&'static str, String>,
    risk: String,
}

/// Checks every referenced path and parses every configuration file.
pub fn validate(config: &AnalysisConfig) -> Result<Inputs> {
    let edges = read_config_file(&config.input_edges, "edge list")?;
    let lexicons = LexiconSet::load_dir(&config.lexicon_dir)?;
    let risk_bytes = read_config_file(&config.risk_config, "risk factor config")?;
    let risk = RiskFactorConfig::load(&config.risk_config)?;
    let classifier = match &config.classifier_config {
        Some(p) => ClassifierConfig::load(p)?,
        None => ClassifierConfig::default(),
    };
    if config.threads == Some(0) {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    let last = config.last_stage();
    for a in &config.emit {
        if a.required_stage() > last {
            return Err(Error::Config(format!(
                "{} needs the {} stage, but the run stops after {last}",
                a.file_name(),
                a.required_stage()
            )));
        }
    }
    let check = |r: Result<()>| r.map_err(|e| Error::Config(e.to_string()));
    check(probe_pagerank(&config.pagerank))?;
    check(probe_layout(&config.layout))?;

    let mut lexicon_hashes = BTreeMap::new();
    for name in LEXICON_NAMES {
        let bytes = std::fs::read(config.lexicon_dir.join(format!("{name}.txt")))?;
        lexicon_hashes.insert(name, sha256_hex(&bytes));
    }
    let hashed = HashedConfig {
        dedup: config.dedup,
        layout: &config.layout,
        pagerank: &config.pagerank,
        eigenvector: &config.eigenvector,
        betweenness: config.betweenness,
        emit: &config.emit,
        stage: config.stage,
        classifier: &classifier,
        lexicons: lexicon_hashes,
        risk: sha256_hex(&risk_bytes),
    };
    let config_hash = sha256_hex(canonical::to_json(&hashed)?.as_bytes());
    let input_hash = sha256_hex(&edges);
    Ok(Inputs {
        edges,
        lexicons,
        risk,
        classifier,
        config_hash,
        input_hash,
    })
}

fn probe_pagerank(p: &PageRankParams) -> Result<()> {
    if !(p.damping > 0.0 && p.damping < 1.0) {
        return Err(Error::Contract(format!(
            "damping must lie in (0, 1), got {}",
            p.damping
        )));
    }
    if p.tol.is_nan() || p.tol <= 0.0 {
        return Err(Error::Contract(format!(
            "tolerance must be positive, got {}",
            p.tol
        )));
    }
    Ok(())
}

fn probe_layout(p: &LayoutParams) -> Result<()> {
    let single = Sociogram::with_vertices(["x"], Vec::new(), Dedup::CollapsePairs);
    fr_layout(&single, p).map(|_| ())
}

/// In-memory products of a run.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: Report,
    pub graph: Sociogram,
    pub vertices: Option<Vec<VertexRecord>>,
    pub layout: Option<LayoutResult>,
}

const SKIPPED: Undefined = Undefined::StageSkipped;
const EMPTY: Undefined = Undefined::EmptyGraph;

/// One document per distinct (sender, timestamp, text); a tweet that
/// mentions several users appears once per mention in the edge list.
fn documents(g: &Sociogram) -> Vec<(usize, String)> {
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for e in g.edges() {
        let Some(text) = &e.text else { continue };
        if seen.insert((e.source.as_str(), e.timestamp, text.as_str())) {
            let sender = g.index_of(&e.source).expect("edge endpoints are vertices");
            docs.push((sender, text.clone()));
        }
    }
    docs
}

fn term_entries(corpus: &TokenCorpus, limit: usize) -> Vec<TermEntry> {
    top_terms(corpus, limit)
        .into_iter()
        .map(|(term, s)| TermEntry {
            term,
            count: s.count,
            salience: s.salience,
        })
        .collect()
}

fn fit_report(
    name: &str,
    x: &str,
    y: &str,
    model: FitModel,
    points: &[(f64, f64)],
) -> Result<FitReport> {
    let result = if points.len() < 3 {
        Metric::Undefined(Undefined::TooFewPoints)
    } else {
        match fit(model, points) {
            Ok(r) => Metric::Value(r),
            Err(Error::SingularFit(_)) => Metric::Undefined(Undefined::ZeroVariance),
            Err(Error::Undefined(u)) => Metric::Undefined(u),
            Err(e) => return Err(e),
        }
    };
    Ok(FitReport {
        name: name.into(),
        x: x.into(),
        y: y.into(),
        result,
    })
}

/// Runs the requested stages on already-validated inputs. No files are
/// touched.
pub fn analyze(config: &AnalysisConfig, inputs: &Inputs) -> Result<Analysis> {
    let last = config.last_stage();
    let runs = |s: Stage| s <= last;
    let stages: Vec<String> = Stage::ALL
        .into_iter()
        .filter(|&s| runs(s))
        .map(|s| s.to_string())
        .collect();

    // ingest
    let doc = parse_edge_csv(&inputs.edges[..]).map_err(|e| e.in_stage("ingest"))?;
    let g = build_graph(&doc, config.dedup);
    let n = g.vertex_count();
    let summary = GraphSummary {
        vertices: n,
        edges_total: g.total_edge_count(),
        edges_unique: g.unique_edge_count(),
        duplicates: g.duplicate_count(),
        self_loop_edges: g.self_loop_edge_count(),
        rejected_rows: doc.errors.len(),
        dedup: config.dedup,
    };

    let mut clustering = None;
    let metrics = if runs(Stage::Metrics) {
        let stage = |e: Error| e.in_stage("metrics");
        clustering = Some(local_clustering_all(&g));
        Metric::Value(MetricsSection {
            graph_stats: graph_stats(&g).map_err(stage)?,
            asymmetry: Metric::from_result(vertex_asymmetry(&g)).map_err(stage)?,
            degree_distribution: DegreeDistributions::from_histograms(
                &degree_distribution(&g, DegreeMode::In),
                &degree_distribution(&g, DegreeMode::Out),
                &degree_distribution(&g, DegreeMode::Total),
            ),
        })
    } else {
        Metric::Undefined(SKIPPED)
    };

    let mut scores: Option<CentralityScores> = None;
    let centrality_summary = if !runs(Stage::Centrality) {
        Metric::Undefined(SKIPPED)
    } else if n == 0 {
        Metric::Undefined(EMPTY)
    } else {
        let s = centrality_scores(
            &g,
            config.betweenness,
            &config.pagerank,
            &config.eigenvector,
        )
        .map_err(|e| e.in_stage("centrality"))?;
        let names = g.vertices();
        let summary = |p: &crate::centrality::PowerIteration| PowerIterationSummary {
            distribution: Distribution::of(&p.scores, names, 10).expect("nonempty graph"),
            converged: p.converged,
            iterations: p.iterations,
        };
        let out = CentralitySummary {
            betweenness_mode: match s.betweenness_mode {
                Directedness::Directed => "directed".into(),
                Directedness::Undirected => "undirected".into(),
            },
            betweenness: Distribution::of(&s.betweenness, names, 10).expect("nonempty graph"),
            pagerank: summary(&s.pagerank),
            eigenvector: summary(&s.eigenvector),
        };
        scores = Some(s);
        Metric::Value(out)
    };

    let grouping: Option<Grouping> = (runs(Stage::Community) && n > 0).then(|| cnm_partition(&g));

    let mut labels: Option<Vec<(ArchetypeLabel, crate::classify::FeatureVector)>> = None;
    let mut graph_archetype = Metric::Undefined(SKIPPED);
    if runs(Stage::Classify) {
        graph_archetype = Metric::Undefined(EMPTY);
        if let Some(gr) = &grouping {
            labels = Some(
                gr.blocks
                    .iter()
                    .map(|block| {
                        let f = features(&g.induced_subgraph(block));
                        (classify_archetype(&f, &inputs.classifier), f)
                    })
                    .collect(),
            );
            graph_archetype = Metric::Value(classify_archetype(&features(&g), &inputs.classifier));
        }
    }

    let mut group_terms: Option<Vec<Vec<TermEntry>>> = None;
    let (mut sentiment, mut risk, mut text) = (
        Metric::Undefined(SKIPPED),
        Metric::Undefined(SKIPPED),
        Metric::Undefined(SKIPPED),
    );
    if runs(Stage::Text) {
        let stage = |e: Error| e.in_stage("text");
        let docs = documents(&g);
        let corpus = TokenCorpus::from_texts(docs.iter().map(|(_, t)| t.as_str()));
        sentiment =
            Metric::from_result(sentiment_scores(&corpus, &inputs.lexicons)).map_err(stage)?;
        risk = Metric::Value(risk_factor_match(&corpus.documents, &inputs.risk).map_err(stage)?);
        text = Metric::Value(TextSection {
            documents: corpus.documents.len(),
            total_tokens: corpus.total_tokens,
            top_terms: term_entries(&corpus, 20),
            bigrams: bigram_stats(&corpus, 2).into_iter().take(50).collect(),
        });
        if let Some(gr) = &grouping {
            let block = gr.block_of(n);
            let mut per_group = vec![TokenCorpus::default(); gr.blocks.len()];
            for ((sender, _), tokens) in docs.iter().zip(&corpus.documents) {
                per_group[block[*sender]].push(tokens.clone());
            }
            group_terms = Some(per_group.iter().map(|c| term_entries(c, 10)).collect());
        }
    }

    let fits = if !runs(Stage::Fit) {
        Metric::Undefined(SKIPPED)
    } else if n == 0 {
        Metric::Undefined(EMPTY)
    } else {
        let stage = |e: Error| e.in_stage("fit");
        let degrees = degree_distribution(&g, DegreeMode::Total).positive_points();
        let mut fits = vec![
            fit_report(
                "degree_power_law",
                "total degree",
                "vertex count",
                FitModel::PowerLaw,
                &degrees,
            )
            .map_err(stage)?,
            fit_report(
                "degree_stretched_power_law",
                "total degree",
                "vertex count",
                FitModel::StretchedPowerLaw,
                &degrees,
            )
            .map_err(stage)?,
        ];
        if let Some(s) = &scores {
            let points: Vec<(f64, f64)> = (0..n)
                .filter(|&v| s.betweenness[v] > 0.0)
                .map(|v| (n as f64 * s.pagerank.scores[v], s.betweenness[v]))
                .collect();
            fits.push(
                fit_report(
                    "betweenness_pagerank_exponential",
                    "pagerank x |V|",
                    "betweenness",
                    FitModel::Exponential,
                    &points,
                )
                .map_err(stage)?,
            );
        }
        Metric::Value(fits)
    };

    let mut layout_result = None;
    let layout = if runs(Stage::Layout) {
        let r = fr_layout(&g, &config.layout).map_err(|e| e.in_stage("layout"))?;
        let section = LayoutSection {
            repulsion_multiplier: r.repulsion_multiplier,
            iterations: r.iterations_run,
            seed: r.seed,
            width: r.width,
            height: r.height,
            positions: r
                .positions
                .iter()
                .enumerate()
                .map(|(v, &(x, y))| Position {
                    vertex: g.vertex_name(v).to_string(),
                    x,
                    y,
                })
                .collect(),
        };
        layout_result = Some(r);
        Metric::Value(section)
    } else {
        Metric::Undefined(SKIPPED)
    };

    let grouping_section = match &grouping {
        None if !runs(Stage::Community) => Metric::Undefined(SKIPPED),
        None => Metric::Undefined(EMPTY),
        Some(gr) => Metric::Value(GroupingSection {
            modularity: gr.modularity,
            group_count: gr.blocks.len(),
            groups: gr
                .blocks
                .iter()
                .enumerate()
                .map(|(i, block)| GroupReport {
                    index: i,
                    size: block.len(),
                    members: block
                        .iter()
                        .map(|&v| g.vertex_name(v).to_string())
                        .collect(),
                    label: labels
                        .as_ref()
                        .map_or(Metric::Undefined(SKIPPED), |l| Metric::Value(l[i].0)),
                    features: labels
                        .as_ref()
                        .map_or(Metric::Undefined(SKIPPED), |l| Metric::Value(l[i].1)),
                    top_terms: group_terms
                        .as_ref()
                        .map_or(Metric::Undefined(SKIPPED), |t| Metric::Value(t[i].clone())),
                })
                .collect(),
        }),
    };
    let archetype_frequency = if !runs(Stage::Classify) {
        Metric::Undefined(SKIPPED)
    } else {
        Metric::Value(archetype_frequency(labels.iter().flatten().map(|(l, _)| l)))
    };

    let vertices = match (&clustering, &scores) {
        (Some(c), Some(s)) if runs(Stage::Community) => {
            Some(export::vertex_records(&g, c, s, grouping.as_ref()))
        }
        _ if runs(Stage::Community) && n == 0 => Some(Vec::new()),
        _ => None,
    };

    let report = Report {
        format_version: FORMAT_VERSION,
        stages,
        graph: summary,
        metrics,
        centrality_summary,
        grouping: grouping_section,
        graph_archetype,
        archetype_frequency,
        sentiment,
        risk,
        text,
        fits,
        layout,
        provenance: Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: inputs.config_hash.clone(),
            input_hash: inputs.input_hash.clone(),
            timestamp: (!config.deterministic)
                .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        },
    };
    Ok(Analysis {
        report,
        graph: g,
        vertices,
        layout: layout_result,
    })
}

fn render(artifact: Artifact, a: &Analysis) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match artifact {
        Artifact::Report => a.report.write(&mut buf)?,
        Artifact::VerticesCsv => {
            let records = a
                .vertices
                .as_deref()
                .expect("validated: community stage ran");
            export::write_vertices_csv(records, &mut buf)?
        }
        Artifact::LayoutCsv => {
            let layout = a.layout.as_ref().expect("validated: layout stage ran");
            export::write_layout_csv(&a.graph, layout, &mut buf)?
        }
        Artifact::Graphml => export::write_graphml(&a.graph, a.vertices.as_deref(), &mut buf)?,
        Artifact::Dot => export::write_dot(&a.graph, a.vertices.as_deref(), &mut buf)?,
    }
    Ok(buf)
}

/// Writes every rendered artifact or none of them.
fn write_all(dir: &Path, files: &[(Artifact, Vec<u8>)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<()> {
        for (artifact, bytes) in files {
            let tmp = dir.join(format!(".{}.partial", artifact.file_name()));
            written.push(tmp.clone());
            std::fs::write(&tmp, bytes)?;
        }
        for ((artifact, _), tmp) in files.iter().zip(written.clone()) {
            let path = dir.join(artifact.file_name());
            std::fs::rename(&tmp, &path)?;
            written.push(path);
        }
        Ok(())
    })();
    if result.is_err() {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
    }
    result
}

/// Validates, computes (within a capped thread pool when requested) and
/// writes the requested artifacts.
pub fn run_analyze(config: &AnalysisConfig) -> Result<Analysis> {
    let inputs = validate(config)?;
    let analysis = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {t} worker threads: {e}")))?
            .install(|| analyze(config, &inputs))?,
        None => analyze(config, &inputs)?,
    };
    let files = config
        .emit
        .iter()
        .map(|&a| render(a, &analysis).map(|b| (a, b)))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("emit"))?;
    write_all(&config.output_dir, &files).map_err(|e| e.in_stage("emit"))?;
    Ok(analysis)
}
