use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sociogram::canonical;
use sociogram::centrality::Directedness;
use sociogram::classify::{
    classify_archetype, features, generate_archetype, Archetype, ClassifierConfig,
};
use sociogram::graph::write_edge_csv;
use sociogram::layout::{fr_layout, LayoutParams};
use sociogram::pipeline::{run_analyze, AnalysisConfig, Artifact, Stage};
use sociogram::statfit::{fit, FitModel};
use sociogram::{build_graph, parse_edge_csv, Dedup, Error, Result};

#[derive(Parser)]
#[command(
    name = "sociogram",
    version,
    about = "Sociogram analytics for social-media edge lists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis and write report.json and exports.
    Analyze(AnalyzeArgs),
    /// Write a synthetic archetype graph as an edge CSV.
    Generate(GenerateArgs),
    /// Fit a model to x,y points from a CSV.
    Fit(FitArgs),
    /// Compute a force-directed layout for an edge CSV.
    Layout(LayoutArgs),
}

#[derive(Args)]
struct LayoutFlags {
    /// Repulsion force multiplier.
    #[arg(long = "fr-repulsion", default_value_t = 3.5)]
    repulsion: f64,
    #[arg(long = "fr-iterations", default_value_t = 10)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000.0)]
    width: f64,
    #[arg(long, default_value_t = 1000.0)]
    height: f64,
}

impl LayoutFlags {
    fn params(&self) -> LayoutParams {
        LayoutParams {
            repulsion: self.repulsion,
            iterations: self.iterations,
            seed: self.seed,
            width: self.width,
            height: self.height,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge list CSV with at least `source` and `target` columns.
    #[arg(long)]
    edges: PathBuf,
    /// Directory holding the six lexicon word lists.
    #[arg(long)]
    lexicons: PathBuf,
    /// Risk-factor phrase configuration (TOML).
    #[arg(long)]
    risk: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Classifier thresholds (TOML); built-in defaults otherwise.
    #[arg(long)]
    classifier: Option<PathBuf>,
    /// `collapse` merges repeated (source, target) pairs; `keep` keeps all.
    #[arg(long, default_value = "collapse")]
    dedup: String,
    #[command(flatten)]
    layout: LayoutFlags,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// Compute betweenness on the directed graph instead of the undirected view.
    #[arg(long)]
    directed_betweenness: bool,
    /// Worker thread cap. Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Leave the timestamp out of the report.
    #[arg(long)]
    deterministic: bool,
    /// Stop after this stage: ingest, metrics, centrality, community,
    /// classify, text, fit or layout.
    #[arg(long)]
    stage: Option<String>,
    /// Artifacts to write (report, vertices_csv, layout_csv, graphml, dot).
    /// Defaults to all that the chosen stage allows.
    #[arg(long, value_delimiter = ',')]
    emit: Vec<String>,
}

#[derive(Args)]
struct GenerateArgs {
    /// unified, in_hub, out_hub, multi_topic, polarized or fragmented.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 100)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Destination CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print the features and label of the generated graph to stderr.
    #[arg(long)]
    classify: bool,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with `x` and `y` columns.
    #[arg(long)]
    input: PathBuf,
    /// power_law, stretched_power_law or exponential.
    #[arg(long, default_value = "power_law")]
    model: String,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long)]
    edges: PathBuf,
    /// Destination CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    layout: LayoutFlags,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if !path.is_file() {
        return Err(Error::Config(format!(
            "input `{}` does not exist",
            path.display()
        )));
    }
    Ok(std::fs::read(path)?)
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let dedup: Dedup = a
        .dedup
        .parse()
        .map_err(|e: Error| Error::Config(e.to_string()))?;
    let stage = a.stage.as_deref().map(str::parse::<Stage>).transpose()?;
    let mut config = AnalysisConfig::new(a.edges, a.lexicons, a.risk, a.out);
    config.classifier_config = a.classifier;
    config.dedup = dedup;
    config.layout = a.layout.params();
    config.pagerank.damping = a.damping;
    if a.directed_betweenness {
        config.betweenness = Directedness::Directed;
    }
    config.threads = a.threads;
    config.deterministic = a.deterministic;
    config.stage = stage;
    config.emit = if a.emit.is_empty() {
        let last = stage.unwrap_or(Stage::Layout);
        Artifact::ALL
            .into_iter()
            .filter(|x| x.required_stage() <= last)
            .collect()
    } else {
        a.emit
            .iter()
            .map(|s| s.parse())
            .collect::<Result<BTreeSet<_>>>()?
    };
    let analysis = run_analyze(&config)?;
    let r = &analysis.report.graph;
    eprintln!(
        "analyzed {} vertices, {} edges ({} unique); wrote {} file(s) to {}",
        r.vertices,
        r.edges_total,
        r.edges_unique,
        config.emit.len(),
        config.output_dir.display()
    );
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let kind: Archetype = a.kind.parse()?;
    let g = generate_archetype(kind, a.size, a.seed).map_err(|e| Error::Config(e.to_string()))?;
    let mut out = output(a.out.as_deref())?;
    write_edge_csv(&g, &mut out)?;
    out.flush()?;
    if a.classify {
        let f = features(&g);
        let label = classify_archetype(&f, &ClassifierConfig::default());
        eprint!(
            "{}",
            canonical::to_json(&serde_json::json!({ "features": f, "label": label }))?
        );
    }
    Ok(())
}

fn fit_points(a: FitArgs) -> Result<()> {
    let model: FitModel = serde_json::from_value(serde_json::Value::String(a.model.clone()))
        .map_err(|_| Error::Config(format!("unknown model `{}`", a.model)))?;
    let bytes = read_input(&a.input)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(&bytes[..]);
    let header = reader
        .headers()
        .map_err(|e| Error::Format(e.to_string()))?
        .clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| {
                Error::Format(format!("`{}` lacks an `{name}` column", a.input.display()))
            })
    };
    let (xi, yi) = (col("x")?, col("y")?);
    let mut points = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Format(e.to_string()))?;
        let num = |j: usize| -> Result<f64> {
            row.get(j)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Format(format!("row {}: expected a number", i + 2)))
        };
        points.push((num(xi)?, num(yi)?));
    }
    let result = fit(model, &points)?;
    print!("{}", canonical::to_json(&result)?);
    Ok(())
}

fn layout(a: LayoutArgs) -> Result<()> {
    let bytes = read_input(&a.edges)?;
    let doc = parse_edge_csv(&bytes[..])?;
    let g = build_graph(&doc, Dedup::CollapsePairs);
    let r = fr_layout(&g, &a.layout.params())?;
    let mut out = output(a.out.as_deref())?;
    sociogram::export::write_layout_csv(&g, &r, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Generate(a) => generate(a),
        Command::Fit(a) => fit_points(a),
        Command::Layout(a) => layout(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sociogram: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
