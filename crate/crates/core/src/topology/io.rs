//! Plain-text graph interchange.
//!
//! ```text
//! # comments and blank lines are ignored
//! <node count> <slices per link>
//! <node id> <x km> <y km>          one line per node, ids 0, 1, 2, ...
//! <link id> <u> <v> <cost km> <available>   one line per undirected link
//! ```
//!
//! `<available>` uses the slice-set text form (`0-3,7`, or `-` when empty).
//! Link ids are free-form unique integers and are what route output prints.
//! Writing is deterministic, so a written file is a stable golden artifact.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{Cost, Multigraph, NodeId, Point};
use crate::spectrum::{SliceSet, SpectrumError};

#[derive(Debug, Error)]
pub enum GraphFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Slices {
        line: usize,
        #[source]
        source: SpectrumError,
    },
    #[error("missing header line")]
    MissingHeader,
    #[error("expected {expected} node lines, found {found}")]
    MissingNodes { expected: usize, found: usize },
    #[error("link {0} is directed and cannot be written as a link line")]
    DirectedLink(u32),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> GraphFormatError {
    GraphFormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(
    line: usize,
    what: &str,
    token: Option<&str>,
) -> Result<T, GraphFormatError> {
    let token = token.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| syntax(line, format!("invalid {what} {token:?}")))
}

pub fn parse_graph(text: &str) -> Result<Multigraph, GraphFormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(GraphFormatError::MissingHeader)?;
    let mut tokens = header.split_whitespace();
    let node_count: usize = field(header_line, "node count", tokens.next())?;
    let slices: usize = field(header_line, "slice count", tokens.next())?;
    if tokens.next().is_some() {
        return Err(syntax(header_line, "trailing tokens in header"));
    }

    let mut g = Multigraph::new(slices);
    for expected in 0..node_count {
        let (line, text) = lines.next().ok_or(GraphFormatError::MissingNodes {
            expected: node_count,
            found: expected,
        })?;
        let mut tokens = text.split_whitespace();
        let id: usize = field(line, "node id", tokens.next())?;
        if id != expected {
            return Err(syntax(
                line,
                format!("expected node id {expected}, found {id}"),
            ));
        }
        let x: f64 = field(line, "x coordinate", tokens.next())?;
        let y: f64 = field(line, "y coordinate", tokens.next())?;
        if tokens.next().is_some() {
            return Err(syntax(line, "trailing tokens in node line"));
        }
        g.add_node(Point::new(x, y));
    }

    let mut labels = HashSet::new();
    for (line, text) in lines {
        let mut tokens = text.split_whitespace();
        let label: u32 = field(line, "link id", tokens.next())?;
        let u: usize = field(line, "link endpoint", tokens.next())?;
        let v: usize = field(line, "link endpoint", tokens.next())?;
        let cost: Cost = field(line, "link cost", tokens.next())?;
        let available = tokens
            .next()
            .ok_or_else(|| syntax(line, "missing available slices"))?;
        if tokens.next().is_some() {
            return Err(syntax(line, "trailing tokens in link line"));
        }
        if u >= node_count || v >= node_count {
            return Err(syntax(line, format!("endpoint out of range ({u}, {v})")));
        }
        if !labels.insert(label) {
            return Err(syntax(line, format!("duplicate link id {label}")));
        }
        let available = SliceSet::parse(available, slices)
            .map_err(|source| GraphFormatError::Slices { line, source })?;
        g.add_labeled_link(label, NodeId::from(u), NodeId::from(v), cost, available);
    }
    Ok(g)
}

pub fn read_graph<R: Read>(mut reader: R) -> Result<Multigraph, GraphFormatError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_graph(&text)
}

pub fn load_graph(path: &Path) -> Result<Multigraph, GraphFormatError> {
    read_graph(std::fs::File::open(path)?)
}

pub fn format_graph(g: &Multigraph) -> Result<String, GraphFormatError> {
    let mut out = String::new();
    writeln!(out, "{} {}", g.node_count(), g.slices()).unwrap();
    for v in g.nodes() {
        let p = g.position(v);
        writeln!(out, "{} {} {}", v.index(), p.x, p.y).unwrap();
    }
    for link in g.links() {
        if !link.is_bidirectional() {
            return Err(GraphFormatError::DirectedLink(link.label));
        }
        writeln!(
            out,
            "{} {} {} {} {}",
            link.label,
            link.endpoints.0.index(),
            link.endpoints.1.index(),
            link.length,
            link.available
        )
        .unwrap();
    }
    Ok(out)
}

pub fn write_graph<W: Write>(g: &Multigraph, mut writer: W) -> Result<(), GraphFormatError> {
    writer.write_all(format_graph(g)?.as_bytes())?;
    Ok(())
}
