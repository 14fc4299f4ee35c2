//! Per-vertex tables and graph exports: vertices.csv, layout.csv, GraphML
//! (with a reader for round trips) and Graphviz DOT.

use std::io::Write;

use quick_xml::escape::{escape, resolve_predefined_entity};
use quick_xml::events::Event;
use quick_xml::Reader;
use serde::Serialize;

use crate::canonical::format_float;
use crate::centrality::CentralityScores;
use crate::community::Grouping;
use crate::error::{Error, Result};
use crate::graph::{Dedup, Edge, EdgeKind, Sociogram};
use crate::layout::LayoutResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexRecord {
    pub vertex: String,
    pub in_degree: usize,
    pub out_degree: usize,
    pub clustering: f64,
    pub betweenness: f64,
    pub pagerank: f64,
    pub eigenvector: f64,
    pub group: Option<usize>,
    pub self_loops: usize,
}

pub fn vertex_records(
    g: &Sociogram,
    clustering: &[f64],
    centrality: &CentralityScores,
    grouping: Option<&Grouping>,
) -> Vec<VertexRecord> {
    let n = g.vertex_count();
    let groups = grouping.map(|gr| gr.block_of(n));
    (0..n)
        .map(|v| VertexRecord {
            vertex: g.vertex_name(v).to_string(),
            in_degree: g.in_degree(v),
            out_degree: g.out_degree(v),
            clustering: clustering[v],
            betweenness: centrality.betweenness[v],
            pagerank: centrality.pagerank.scores[v],
            eigenvector: centrality.eigenvector.scores[v],
            group: groups.as_ref().map(|b| b[v]),
            self_loops: g.self_loops(v),
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

/// Columns: vertex, in, out, c_j, C_B, pagerank, eigenvector, group, self_loops.
pub fn write_vertices_csv<W: Write>(records: &[VertexRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "vertex",
        "in",
        "out",
        "c_j",
        "C_B",
        "pagerank",
        "eigenvector",
        "group",
        "self_loops",
    ])
    .map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.vertex.clone(),
            r.in_degree.to_string(),
            r.out_degree.to_string(),
            format_float(r.clustering),
            format_float(r.betweenness),
            format_float(r.pagerank),
            format_float(r.eigenvector),
            r.group.map(|g| g.to_string()).unwrap_or_default(),
            r.self_loops.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_layout_csv<W: Write>(g: &Sociogram, layout: &LayoutResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["vertex", "x", "y"]).map_err(csv_error)?;
    for (v, &(x, y)) in layout.positions.iter().enumerate() {
        w.write_record([
            g.vertex_name(v).to_string(),
            format_float(x),
            format_float(y),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

const NODE_KEYS: [(&str, &str); 8] = [
    ("group", "int"),
    ("in_degree", "int"),
    ("out_degree", "int"),
    ("clustering", "double"),
    ("betweenness", "double"),
    ("pagerank", "double"),
    ("eigenvector", "double"),
    ("self_loops", "int"),
];

/// Directed GraphML. Every retained edge is written with its kind; vertex
/// attributes come from `records` when given.
pub fn write_graphml<W: Write>(
    g: &Sociogram,
    records: Option<&[VertexRecord]>,
    mut out: W,
) -> Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    for (name, ty) in NODE_KEYS {
        writeln!(
            out,
            r#"  <key id="{name}" for="node" attr.name="{name}" attr.type="{ty}"/>"#
        )?;
    }
    writeln!(
        out,
        r#"  <key id="kind" for="edge" attr.name="kind" attr.type="string"/>"#
    )?;
    writeln!(out, r#"  <graph id="G" edgedefault="directed">"#)?;
    for v in 0..g.vertex_count() {
        let id = escape(g.vertex_name(v));
        let Some(r) = records.map(|rs| &rs[v]) else {
            writeln!(out, r#"    <node id="{id}"/>"#)?;
            continue;
        };
        writeln!(out, r#"    <node id="{id}">"#)?;
        let values = [
            r.group.map(|x| x.to_string()),
            Some(r.in_degree.to_string()),
            Some(r.out_degree.to_string()),
            Some(format_float(r.clustering)),
            Some(format_float(r.betweenness)),
            Some(format_float(r.pagerank)),
            Some(format_float(r.eigenvector)),
            Some(r.self_loops.to_string()),
        ];
        for ((key, _), value) in NODE_KEYS.iter().zip(values) {
            if let Some(value) = value {
                writeln!(out, r#"      <data key="{key}">{value}</data>"#)?;
            }
        }
        writeln!(out, "    </node>")?;
    }
    for (i, e) in g.retained_edges().enumerate() {
        writeln!(
            out,
            r#"    <edge id="e{i}" source="{}" target="{}"><data key="kind">{}</data></edge>"#,
            escape(e.source.as_str()),
            escape(e.target.as_str()),
            e.kind.as_str()
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")?;
    Ok(())
}

fn attr(tag: &quick_xml::events::BytesStart<'_>, name: &str) -> Result<Option<String>> {
    let err = |e: &dyn std::fmt::Display| Error::Format(format!("GraphML attribute `{name}`: {e}"));
    match tag.try_get_attribute(name).map_err(|e| err(&e))? {
        Some(a) => {
            let v = a
                .normalized_value(quick_xml::XmlVersion::Implicit1_0)
                .map_err(|e| err(&e))?;
            Ok(Some(v.into_owned()))
        }
        None => Ok(None),
    }
}

/// Reads nodes and edges (with their `kind` data) back from GraphML.
/// Other attributes are ignored.
pub fn read_graphml(content: &str, dedup: Dedup) -> Result<Sociogram> {
    let mut reader = Reader::from_str(content);
    reader.config_mut().trim_text(true);
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut pending: Option<(String, String)> = None;
    let mut kind_text: Option<String> = None;
    let mut in_kind = false;
    let xml_err = |e: quick_xml::Error| Error::Format(format!("GraphML: {e}"));
    loop {
        let event = reader.read_event().map_err(xml_err)?;
        match event {
            Event::Start(ref t) | Event::Empty(ref t) => {
                let empty = matches!(event, Event::Empty(_));
                match t.local_name().as_ref() {
                    "node" => {
                        let id = attr(t, "id")?
                            .ok_or_else(|| Error::Format("GraphML node without id".into()))?;
                        nodes.push(id);
                    }
                    "edge" => {
                        let missing =
                            || Error::Format("GraphML edge without source or target".into());
                        let s = attr(t, "source")?.ok_or_else(missing)?;
                        let d = attr(t, "target")?.ok_or_else(missing)?;
                        if empty {
                            edges.push(Edge::new(&s, &d, EdgeKind::Tweet)?);
                        } else {
                            pending = Some((s, d));
                            kind_text = None;
                        }
                    }
                    "data" if pending.is_some() && !empty => {
                        in_kind = attr(t, "key")?.as_deref() == Some("kind");
                    }
                    _ => {}
                }
            }
            Event::Text(t) if in_kind => {
                kind_text
                    .get_or_insert_with(String::new)
                    .push_str(&t.xml10_content());
            }
            Event::GeneralRef(r) if in_kind => {
                let text = kind_text.get_or_insert_with(String::new);
                if r.is_char_ref() {
                    if let Some(c) = r.resolve_char_ref().map_err(xml_err)? {
                        text.push(c);
                    }
                } else if let Some(s) = resolve_predefined_entity(&r) {
                    text.push_str(s);
                }
            }
            Event::End(t) => match t.local_name().as_ref() {
                "data" => in_kind = false,
                "edge" => {
                    let (s, d) = pending
                        .take()
                        .ok_or_else(|| Error::Format("unbalanced GraphML edge".into()))?;
                    let kind = match kind_text.take() {
                        Some(k) => k.parse::<EdgeKind>()?,
                        None => EdgeKind::Tweet,
                    };
                    edges.push(Edge::new(&s, &d, kind)?);
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if pending.is_some() {
        return Err(Error::Format("GraphML ends inside an edge".into()));
    }
    Ok(Sociogram::with_vertices(nodes, edges, dedup))
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph: one line per vertex, one `->` line per retained edge.
pub fn write_dot<W: Write>(
    g: &Sociogram,
    records: Option<&[VertexRecord]>,
    mut out: W,
) -> Result<()> {
    writeln!(out, "digraph sociogram {{")?;
    for v in 0..g.vertex_count() {
        let id = dot_id(g.vertex_name(v));
        match records.and_then(|rs| rs[v].group) {
            Some(group) => writeln!(out, "  {id} [group={group}];")?,
            None => writeln!(out, "  {id};")?,
        }
    }
    for e in g.retained_edges() {
        writeln!(
            out,
            "  {} -> {} [kind={}];",
            dot_id(&e.source),
            dot_id(&e.target),
            e.kind.as_str()
        )?;
    }
    writeln!(out, "}}")?;
    Ok(())
}
