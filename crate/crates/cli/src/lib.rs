//! Tab-separated file formats used by the `lexgraph` binary.
//!
//! * Edge lists: a `#directed` or `#undirected` header, then rows
//!   `u<TAB>v<TAB>len`. Vertex ids are arbitrary strings, numbered densely in
//!   order of first appearance.
//! * Labels and assignments: rows `id<TAB>value`.
//!
//! Blank lines and lines starting with `#` after the header are ignored.

use std::collections::HashMap;
use std::io::{self, Write};

use lexgraph::{Graph, PartialAssignment, VertexId};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("empty edge list: expected a #directed or #undirected header")]
    MissingHeader,
    #[error("line 1: expected #directed or #undirected, found {0:?}")]
    BadHeader(String),
    #[error("line {line}: expected {expected} tab-separated fields, found {found}")]
    Fields {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: edge length must be a positive finite number, found {text:?}")]
    BadLength { line: usize, text: String },
    #[error("line {line}: self-loop on vertex {id:?}")]
    SelfLoop { line: usize, id: String },
    #[error("line {line}: value must be a finite number, found {text:?}")]
    BadValue { line: usize, text: String },
    #[error("line {line}: vertex {id:?} does not appear in the edge list")]
    UnknownId { line: usize, id: String },
    #[error("line {line}: vertex {id:?} is listed twice")]
    Duplicate { line: usize, id: String },
    #[error("no value given for vertex {0:?}")]
    MissingVertex(String),
    #[error("edge list has no edges")]
    NoEdges,
}

/// A parsed edge list with its id mapping.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    /// External id of each dense vertex.
    pub ids: Vec<String>,
    index: HashMap<String, VertexId>,
}

/// Non-comment rows with their 1-based line numbers.
fn rows(text: &str, skip: usize) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .skip(skip)
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split('\t').collect()))
}

fn fields(line: usize, f: &[&str], expected: usize) -> Result<(), ParseError> {
    if f.len() != expected {
        return Err(ParseError::Fields {
            line,
            expected,
            found: f.len(),
        });
    }
    Ok(())
}

fn value(line: usize, text: &str) -> Result<f64, ParseError> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError::BadValue {
            line,
            text: text.to_string(),
        }),
    }
}

impl EdgeList {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let header = text.lines().next().ok_or(ParseError::MissingHeader)?.trim();
        let directed = match header {
            "#directed" => true,
            "#undirected" => false,
            other => return Err(ParseError::BadHeader(other.to_string())),
        };
        let mut ids = Vec::new();
        let mut index = HashMap::new();
        let mut edges = Vec::new();
        for (line, f) in rows(text, 1) {
            fields(line, &f, 3)?;
            if f[0] == f[1] {
                return Err(ParseError::SelfLoop {
                    line,
                    id: f[0].to_string(),
                });
            }
            let len = match f[2].trim().parse::<f64>() {
                Ok(l) if l.is_finite() && l > 0.0 => l,
                _ => {
                    return Err(ParseError::BadLength {
                        line,
                        text: f[2].to_string(),
                    })
                }
            };
            let mut id = |name: &str| {
                *index.entry(name.to_string()).or_insert_with(|| {
                    ids.push(name.to_string());
                    ids.len() - 1
                })
            };
            let (u, v) = (id(f[0]), id(f[1]));
            edges.push((u, v, len));
        }
        if edges.is_empty() {
            return Err(ParseError::NoEdges);
        }
        let graph = Graph::new(ids.len(), directed, edges).expect("edges validated while parsing");
        Ok(Self { graph, ids, index })
    }

    /// Builds the id mapping for a graph whose vertices are named `0..n`.
    pub fn numbered(graph: Graph) -> Self {
        let ids: Vec<String> = (0..graph.n()).map(|x| x.to_string()).collect();
        let index = ids
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Self { graph, ids, index }
    }

    pub fn lookup(&self, id: &str) -> Option<VertexId> {
        self.index.get(id).copied()
    }

    /// Rows `id<TAB>value`, each id at most once.
    fn keyed_values(&self, text: &str) -> Result<Vec<Option<f64>>, ParseError> {
        let mut out = vec![None; self.graph.n()];
        for (line, f) in rows(text, 0) {
            fields(line, &f, 2)?;
            let x = self.lookup(f[0]).ok_or_else(|| ParseError::UnknownId {
                line,
                id: f[0].to_string(),
            })?;
            if out[x].is_some() {
                return Err(ParseError::Duplicate {
                    line,
                    id: f[0].to_string(),
                });
            }
            out[x] = Some(value(line, f[1])?);
        }
        Ok(out)
    }

    pub fn parse_labels(&self, text: &str) -> Result<PartialAssignment, ParseError> {
        Ok(PartialAssignment::new(self.keyed_values(text)?).expect("values are finite"))
    }

    /// A complete assignment: every vertex exactly once.
    pub fn parse_assignment(&self, text: &str) -> Result<Vec<f64>, ParseError> {
        self.keyed_values(text)?
            .into_iter()
            .enumerate()
            .map(|(x, v)| v.ok_or_else(|| ParseError::MissingVertex(self.ids[x].clone())))
            .collect()
    }

    pub fn write_edges<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header = if self.graph.is_directed() {
            "#directed"
        } else {
            "#undirected"
        };
        writeln!(w, "{header}")?;
        for e in self.graph.edges() {
            writeln!(
                w,
                "{}\t{}\t{}",
                self.ids[e.u],
                self.ids[e.v],
                format_value(e.len)
            )?;
        }
        Ok(())
    }

    pub fn write_labels<W: Write>(&self, mut w: W, labels: &PartialAssignment) -> io::Result<()> {
        for x in labels.terminals() {
            writeln!(
                w,
                "{}\t{}",
                self.ids[x],
                format_value(labels.get(x).expect("terminal"))
            )?;
        }
        Ok(())
    }

    pub fn write_assignment<W: Write>(&self, mut w: W, values: &[f64]) -> io::Result<()> {
        for (id, &v) in self.ids.iter().zip(values) {
            writeln!(w, "{id}\t{}", format_value(v))?;
        }
        Ok(())
    }
}

/// Formats with 12 significant digits, trailing zeros dropped.
pub fn format_value(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    // Rounding may carry into the next decade; the scientific form handles
    // that on its own.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let exp = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if !(-5..DIGITS).contains(&exp) {
        let (mantissa, e) = sci.split_once('e').expect("scientific form");
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
