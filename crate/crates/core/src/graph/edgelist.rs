//! Header-driven edge CSV reader and writer.

use std::io::{Read, Write};

use chrono::{DateTime, Utc};

use super::{Edge, EdgeKind, Sociogram};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

/// Parsed edge list: accepted edges plus per-row rejections.
#[derive(Debug, Clone, Default)]
pub struct EdgeListDocument {
    pub header: Vec<String>,
    pub edges: Vec<Edge>,
    pub errors: Vec<RowError>,
}

impl EdgeListDocument {
    pub fn row_count(&self) -> usize {
        self.edges.len()
    }
}

struct Columns {
    source: usize,
    target: usize,
    kind: Option<usize>,
    text: Option<usize>,
    timestamp: Option<usize>,
}

impl Columns {
    fn from_header(header: &[String]) -> Result<Self> {
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
        };
        let source =
            find("source").ok_or_else(|| Error::Format("header lacks a `source` column".into()))?;
        let target =
            find("target").ok_or_else(|| Error::Format("header lacks a `target` column".into()))?;
        Ok(Columns {
            source,
            target,
            kind: find("kind"),
            text: find("text"),
            timestamp: find("timestamp"),
        })
    }
}

fn parse_row(record: &::csv::StringRecord, cols: &Columns) -> Result<Edge> {
    let field = |i: usize| record.get(i).map(str::trim);
    let source = field(cols.source).ok_or_else(|| Error::Format("missing source field".into()))?;
    let target = field(cols.target).ok_or_else(|| Error::Format("missing target field".into()))?;
    let kind = match cols.kind.and_then(field) {
        Some(k) if !k.is_empty() => k.parse()?,
        _ => EdgeKind::Tweet,
    };
    let mut edge = Edge::new(source, target, kind)?;
    if let Some(text) = cols.text.and_then(|i| record.get(i)) {
        if !text.is_empty() {
            edge.text = Some(text.to_string());
        }
    }
    if let Some(ts) = cols.timestamp.and_then(field) {
        if !ts.is_empty() {
            let parsed = DateTime::parse_from_rfc3339(ts)
                .map_err(|e| Error::Format(format!("bad timestamp `{ts}`: {e}")))?;
            edge.timestamp = Some(parsed.with_timezone(&Utc));
        }
    }
    Ok(edge)
}

/// Reads an RFC-4180 edge CSV. Column order is free; `source` and `target`
/// are mandatory, `kind`, `text` and `timestamp` optional. Malformed rows
/// are skipped and recorded with their line number.
pub fn parse_edge_csv<R: Read>(input: R) -> Result<EdgeListDocument> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let header: Vec<String> = match reader.headers() {
        Ok(h) => h
            .iter()
            .map(|s| s.trim_start_matches('\u{feff}').to_string())
            .collect(),
        Err(e) => return Err(csv_fatal(e)),
    };
    if header.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::Format("missing header row".into()));
    }
    let cols = Columns::from_header(&header)?;

    let mut doc = EdgeListDocument {
        header,
        ..Default::default()
    };
    for result in reader.records() {
        match result {
            Ok(record) => {
                let line = record.position().map_or(0, |p| p.line());
                match parse_row(&record, &cols) {
                    Ok(edge) => doc.edges.push(edge),
                    Err(e) => doc.errors.push(RowError {
                        line,
                        message: e.to_string(),
                    }),
                }
            }
            Err(e) if e.is_io_error() => return Err(csv_fatal(e)),
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                doc.errors.push(RowError {
                    line,
                    message: e.to_string(),
                });
            }
        }
    }
    Ok(doc)
}

fn csv_fatal(e: ::csv::Error) -> Error {
    match e.into_kind() {
        ::csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

/// Writes every input edge of `g` (duplicates included) as edge CSV.
/// Isolated vertices are not representable in this format.
pub fn write_edge_csv<W: Write>(g: &Sociogram, out: W) -> Result<()> {
    let mut w = ::csv::Writer::from_writer(out);
    let io = |e: ::csv::Error| csv_fatal(e);
    w.write_record(["source", "target", "kind", "text", "timestamp"])
        .map_err(io)?;
    for e in g.edges() {
        let ts = e
            .timestamp
            .map(|t| t.to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true))
            .unwrap_or_default();
        w.write_record([
            e.source.as_str(),
            e.target.as_str(),
            e.kind.as_str(),
            e.text.as_deref().unwrap_or(""),
            ts.as_str(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
