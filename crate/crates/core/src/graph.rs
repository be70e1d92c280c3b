//! Graphs, partial assignments, gradients and the lexicographic order.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::shortest::{sloped_search, Direction};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub len: f64,
}

/// One entry of an adjacency list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub to: VertexId,
    pub len: f64,
    pub edge: usize,
}

/// A weighted graph with positive edge lengths.
///
/// Undirected graphs store every edge once; both orientations appear in the
/// adjacency lists. Directed graphs keep separate out- and in-lists.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    out_offsets: Vec<usize>,
    out_arcs: Vec<Arc>,
    in_offsets: Vec<usize>,
    in_arcs: Vec<Arc>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints and
    /// non-positive or non-finite lengths. Parallel edges collapse to the
    /// shortest one, kept at the position of its first appearance.
    pub fn new<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut seen: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut list: Vec<Edge> = Vec::new();
        for (u, v, len) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidEdge {
                    u,
                    v,
                    reason: "self-loop",
                });
            }
            if !len.is_finite() || len <= 0.0 {
                return Err(Error::InvalidEdge {
                    u,
                    v,
                    reason: "length must be positive and finite",
                });
            }
            let key = if directed || u < v { (u, v) } else { (v, u) };
            match seen.get(&key) {
                Some(&i) => list[i].len = list[i].len.min(len),
                None => {
                    seen.insert(key, list.len());
                    list.push(Edge { u, v, len });
                }
            }
        }
        Ok(Self::from_valid_edges(n, directed, list))
    }

    pub fn undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        Self::new(n, false, edges)
    }

    pub fn directed<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        Self::new(n, true, edges)
    }

    /// Builds the adjacency structure for edges already known to be valid
    /// and free of duplicates.
    pub(crate) fn from_valid_edges(n: usize, directed: bool, edges: Vec<Edge>) -> Self {
        let mut out_deg = vec![0usize; n + 1];
        let mut in_deg = vec![0usize; if directed { n + 1 } else { 0 }];
        for e in &edges {
            out_deg[e.u + 1] += 1;
            if directed {
                in_deg[e.v + 1] += 1;
            } else {
                out_deg[e.v + 1] += 1;
            }
        }
        for i in 0..n {
            out_deg[i + 1] += out_deg[i];
            if directed {
                in_deg[i + 1] += in_deg[i];
            }
        }
        let out_offsets = out_deg;
        let in_offsets = in_deg;
        let blank = Arc {
            to: 0,
            len: 0.0,
            edge: 0,
        };
        let mut out_arcs = vec![blank; *out_offsets.last().unwrap_or(&0)];
        let mut in_arcs = vec![blank; in_offsets.last().copied().unwrap_or(0)];
        let mut out_fill = out_offsets.clone();
        let mut in_fill = in_offsets.clone();
        for (i, e) in edges.iter().enumerate() {
            out_arcs[out_fill[e.u]] = Arc {
                to: e.v,
                len: e.len,
                edge: i,
            };
            out_fill[e.u] += 1;
            let back = Arc {
                to: e.u,
                len: e.len,
                edge: i,
            };
            if directed {
                in_arcs[in_fill[e.v]] = back;
                in_fill[e.v] += 1;
            } else {
                out_arcs[out_fill[e.v]] = back;
                out_fill[e.v] += 1;
            }
        }
        Graph {
            n,
            directed,
            edges,
            out_offsets,
            out_arcs,
            in_offsets,
            in_arcs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Arcs leaving `x`. For undirected graphs, every incident edge.
    pub fn out_arcs(&self, x: VertexId) -> &[Arc] {
        &self.out_arcs[self.out_offsets[x]..self.out_offsets[x + 1]]
    }

    /// Arcs entering `x`, each reported with `to` set to the tail.
    /// For undirected graphs, every incident edge.
    pub fn in_arcs(&self, x: VertexId) -> &[Arc] {
        if self.directed {
            &self.in_arcs[self.in_offsets[x]..self.in_offsets[x + 1]]
        } else {
            self.out_arcs(x)
        }
    }

    pub(crate) fn arcs(&self, x: VertexId, dir: Direction) -> &[Arc] {
        match dir {
            Direction::Forward => self.out_arcs(x),
            Direction::Backward => self.in_arcs(x),
        }
    }

    /// Index of the edge from `x` to `y` (following orientation when directed).
    pub fn find_edge(&self, x: VertexId, y: VertexId) -> Option<usize> {
        if x >= self.n || y >= self.n {
            return None;
        }
        self.out_arcs(x).iter().find(|a| a.to == y).map(|a| a.edge)
    }

    pub fn edge_len(&self, x: VertexId, y: VertexId) -> Option<f64> {
        self.find_edge(x, y).map(|i| self.edges[i].len)
    }

    /// The same graph with every edge reversed. Undirected graphs are cloned.
    pub fn reversed(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                u: e.v,
                v: e.u,
                len: e.len,
            })
            .collect();
        Graph::from_valid_edges(self.n, true, edges)
    }

    /// Keeps the vertex set and the edges accepted by `keep`.
    pub fn retain_edges<F: FnMut(&Edge) -> bool>(&self, mut keep: F) -> Graph {
        let edges = self.edges.iter().copied().filter(|e| keep(e)).collect();
        Graph::from_valid_edges(self.n, self.directed, edges)
    }

    /// Subgraph induced on the vertices with `keep[x]`, renumbered densely in
    /// increasing order. Returns the subgraph and the map from new ids to old.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<VertexId>) {
        let mut local = vec![usize::MAX; self.n];
        let mut to_parent = Vec::new();
        for x in 0..self.n {
            if keep[x] {
                local[x] = to_parent.len();
                to_parent.push(x);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.u] && keep[e.v])
            .map(|e| Edge {
                u: local[e.u],
                v: local[e.v],
                len: e.len,
            })
            .collect();
        (
            Graph::from_valid_edges(to_parent.len(), self.directed, edges),
            to_parent,
        )
    }

    /// Weakly connected components: a component id per vertex and the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for a in self.out_arcs(x).iter().chain(self.in_arcs(x)) {
                    if comp[a.to] == usize::MAX {
                        comp[a.to] = count;
                        stack.push(a.to);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Vertices reachable from `sources` following `dir`.
    pub(crate) fn reachable(&self, sources: &[VertexId], dir: Direction) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack: Vec<VertexId> = Vec::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for a in self.arcs(x, dir) {
                if !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }

    /// Drops every edge whose endpoints are both terminals of `v`.
    pub fn without_terminal_edges(&self, v: &PartialAssignment) -> Graph {
        self.retain_edges(|e| !(v.is_terminal(e.u) && v.is_terminal(e.v)))
    }
}

/// Values on a subset of the vertices; the rest are free.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialAssignment {
    values: Vec<Option<f64>>,
}

impl PartialAssignment {
    pub fn new(values: Vec<Option<f64>>) -> Result<Self> {
        for (vertex, x) in values.iter().enumerate() {
            if matches!(x, Some(val) if !val.is_finite()) {
                return Err(Error::NonFiniteLabel { vertex });
            }
        }
        Ok(PartialAssignment { values })
    }

    /// All `n` vertices free.
    pub fn free(n: usize) -> Self {
        PartialAssignment {
            values: vec![None; n],
        }
    }

    pub fn from_labels<I>(n: usize, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, f64)>,
    {
        let mut a = Self::free(n);
        for (x, val) in labels {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            a.set(x, val)?;
        }
        Ok(a)
    }

    pub fn complete(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Some(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: VertexId) -> Option<f64> {
        self.values[x]
    }

    pub fn is_terminal(&self, x: VertexId) -> bool {
        self.values[x].is_some()
    }

    pub fn set(&mut self, x: VertexId, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteLabel { vertex: x });
        }
        self.values[x] = Some(value);
        Ok(())
    }

    /// Turns `x` back into a free vertex.
    pub fn unset(&mut self, x: VertexId) {
        self.values[x] = None;
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn terminals(&self) -> Vec<VertexId> {
        (0..self.len()).filter(|&x| self.is_terminal(x)).collect()
    }

    pub fn num_terminals(&self) -> usize {
        self.values.iter().filter(|x| x.is_some()).count()
    }

    pub fn free_vertices(&self) -> Vec<VertexId> {
        (0..self.len()).filter(|&x| !self.is_terminal(x)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn to_complete(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(vertex, x)| x.ok_or(Error::MissingValue { vertex }))
            .collect()
    }

    /// Pulls values back along a map from local vertex ids to ids of `self`.
    pub(crate) fn restrict(&self, to_parent: &[VertexId]) -> PartialAssignment {
        PartialAssignment {
            values: to_parent.iter().map(|&x| self.values[x]).collect(),
        }
    }

    pub(crate) fn value(&self, x: VertexId) -> f64 {
        self.values[x].expect("terminal value")
    }
}

/// Relative tolerance used for every floating-point comparison of
/// gradients and envelope values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        Tolerance { rel }
    }

    /// `a > b` by more than `rel * max(1, |a|, |b|)`.
    pub fn greater(&self, a: f64, b: f64) -> bool {
        a - b > self.rel * 1f64.max(a.abs()).max(b.abs())
    }

    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        !self.greater(a, b) && !self.greater(b, a)
    }
}

/// Signed gradient of edge `edge`, measured from its first to its second
/// endpoint.
pub fn gradient(g: &Graph, v: &PartialAssignment, edge: usize) -> Result<f64> {
    let e = g
        .edges()
        .get(edge)
        .ok_or_else(|| Error::InvalidArgument(format!("no edge with index {edge}")))?;
    let a = v.get(e.u).ok_or(Error::MissingValue { vertex: e.u })?;
    let b = v.get(e.v).ok_or(Error::MissingValue { vertex: e.v })?;
    Ok((a - b) / e.len)
}

/// Per-edge gradients of a complete assignment, in edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector(pub Vec<f64>);

impl GradientVector {
    pub fn of(g: &Graph, v: &[f64]) -> Result<Self> {
        if v.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                actual: v.len(),
            });
        }
        Ok(GradientVector(
            g.edges()
                .iter()
                .map(|e| (v[e.u] - v[e.v]) / e.len)
                .collect(),
        ))
    }

    /// Positive parts of the gradients along edge orientation.
    pub fn positive_part(g: &Graph, v: &[f64]) -> Result<Self> {
        let mut gv = Self::of(g, v)?;
        for x in &mut gv.0 {
            *x = x.max(0.0);
        }
        Ok(gv)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inf_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Absolute values sorted in non-increasing order.
    pub fn sorted_abs(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self.0.iter().map(|x| x.abs()).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexOrder {
    Less,
    /// The sorted absolute values coincide.
    Equivalent,
    Greater,
}

/// Compares gradient vectors by their absolute values sorted in
/// non-increasing order.
pub fn lex_compare(a: &GradientVector, b: &GradientVector) -> Result<LexOrder> {
    lex_compare_with(a, b, Tolerance { rel: 0.0 })
}

/// As [`lex_compare`], treating entries within `tol` as equal.
pub fn lex_compare_with(
    a: &GradientVector,
    b: &GradientVector,
    tol: Tolerance,
) -> Result<LexOrder> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    for (x, y) in a.sorted_abs().into_iter().zip(b.sorted_abs()) {
        if tol.greater(x, y) {
            return Ok(LexOrder::Greater);
        }
        if tol.greater(y, x) {
            return Ok(LexOrder::Less);
        }
    }
    Ok(LexOrder::Equivalent)
}

/// A path whose endpoints are terminals.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalPath {
    pub vertices: Vec<VertexId>,
    pub length: f64,
    pub gradient: f64,
}

impl TerminalPath {
    /// Builds the path through `vertices`, summing edge lengths in `g`.
    pub fn along(g: &Graph, v: &PartialAssignment, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::NotATerminalPath("fewer than two vertices".into()));
        }
        let mut length = 0.0;
        for w in vertices.windows(2) {
            length += g.edge_len(w[0], w[1]).ok_or_else(|| {
                Error::NotATerminalPath(format!("no edge from {} to {}", w[0], w[1]))
            })?;
        }
        let first = vertices[0];
        let last = vertices[vertices.len() - 1];
        let (a, b) = match (v.get(first), v.get(last)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotATerminalPath("an endpoint is free".into())),
        };
        Ok(TerminalPath {
            vertices,
            length,
            gradient: (a - b) / length,
        })
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    /// True if no two consecutive vertices are both terminals.
    pub fn is_free(&self, v: &PartialAssignment) -> bool {
        self.vertices
            .windows(2)
            .all(|w| !(v.is_terminal(w[0]) && v.is_terminal(w[1])))
    }

    pub(crate) fn mapped(mut self, to_parent: &[VertexId]) -> Self {
        for x in &mut self.vertices {
            *x = to_parent[*x];
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Defect {
    AssignmentLength {
        expected: usize,
        actual: usize,
    },
    /// An undirected component without a terminal.
    UnlabeledComponent {
        vertices: Vec<VertexId>,
    },
    /// A free vertex of a directed graph that no terminal reaches.
    NoTerminalUpstream {
        vertex: VertexId,
    },
    /// A free vertex of a directed graph that reaches no terminal.
    NoTerminalDownstream {
        vertex: VertexId,
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DefectReport {
    pub defects: Vec<Defect>,
}

impl DefectReport {
    /// Every vertex named by some defect, sorted.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for d in &self.defects {
            match d {
                Defect::AssignmentLength { .. } => {}
                Defect::UnlabeledComponent { vertices } => out.extend(vertices),
                Defect::NoTerminalUpstream { vertex } | Defect::NoTerminalDownstream { vertex } => {
                    out.push(*vertex)
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for DefectReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 10;
        for (i, d) in self.defects.iter().take(SHOWN).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            match d {
                Defect::AssignmentLength { expected, actual } => write!(
                    f,
                    "assignment has {actual} entries, graph has {expected} vertices"
                )?,
                Defect::UnlabeledComponent { vertices } => {
                    write!(
                        f,
                        "component without terminals containing vertex {}",
                        vertices[0]
                    )?;
                    if vertices.len() > 1 {
                        write!(f, " and {} more", vertices.len() - 1)?;
                    }
                }
                Defect::NoTerminalUpstream { vertex } => {
                    write!(f, "vertex {vertex} is not reachable from any terminal")?
                }
                Defect::NoTerminalDownstream { vertex } => {
                    write!(f, "vertex {vertex} reaches no terminal")?
                }
            }
        }
        if self.defects.len() > SHOWN {
            write!(f, "; {} more defects", self.defects.len() - SHOWN)?;
        }
        Ok(())
    }
}

/// Checks that every free vertex can receive a value: in undirected graphs
/// each component needs a terminal; in directed graphs each free vertex
/// must lie on a directed path between two terminals.
pub fn check_well_posed(
    g: &Graph,
    v0: &PartialAssignment,
) -> std::result::Result<(), DefectReport> {
    let mut report = DefectReport::default();
    if v0.len() != g.n() {
        report.defects.push(Defect::AssignmentLength {
            expected: g.n(),
            actual: v0.len(),
        });
        return Err(report);
    }
    if g.is_directed() {
        let terminals = v0.terminals();
        let fed = g.reachable(&terminals, Direction::Forward);
        let drained = g.reachable(&terminals, Direction::Backward);
        for x in 0..g.n() {
            if v0.is_terminal(x) {
                continue;
            }
            if !fed[x] {
                report
                    .defects
                    .push(Defect::NoTerminalUpstream { vertex: x });
            }
            if !drained[x] {
                report
                    .defects
                    .push(Defect::NoTerminalDownstream { vertex: x });
            }
        }
    } else {
        let (comp, count) = g.components();
        let mut labeled = vec![false; count];
        for x in 0..g.n() {
            if v0.is_terminal(x) {
                labeled[comp[x]] = true;
            }
        }
        let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); count];
        for x in 0..g.n() {
            if !labeled[comp[x]] {
                members[comp[x]].push(x);
            }
        }
        for vertices in members.into_iter().filter(|m| !m.is_empty()) {
            report.defects.push(Defect::UnlabeledComponent { vertices });
        }
    }
    if report.defects.is_empty() {
        Ok(())
    } else {
        Err(report)
    }
}

pub(crate) fn ensure_well_posed(g: &Graph, v0: &PartialAssignment) -> Result<()> {
    if v0.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            actual: v0.len(),
        });
    }
    check_well_posed(g, v0).map_err(Error::NotWellPosed)
}

/// Relative gap below which two candidate gradients count as the same value.
pub(crate) const DEDUP_REL: f64 = 1e-12;

/// Sorts ascending and merges values within [`DEDUP_REL`] of each other.
pub(crate) fn sort_dedup(values: &mut Vec<f64>) {
    values.sort_by(f64::total_cmp);
    values.dedup_by(|b, a| (*b - *a).abs() <= DEDUP_REL * 1f64.max(a.abs()));
}

/// Gradients `(v0(s) - v0(t)) / dist(s, t)` over all ordered pairs of
/// distinct terminals with `t` reachable from `s`, shortest paths allowed to
/// run through other terminals. Sorted ascending, near-duplicates merged.
pub fn enumerate_terminal_gradients(g: &Graph, v0: &PartialAssignment) -> Result<Vec<f64>> {
    if v0.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            actual: v0.len(),
        });
    }
    let terminals = v0.terminals();
    let mut out = Vec::new();
    for &s in &terminals {
        let (dist, _) = sloped_search(g, Direction::Forward, &[(s, 0.0)], 1.0);
        for &t in &terminals {
            if t != s && dist[t].is_finite() {
                out.push((v0.value(s) - v0.value(t)) / dist[t]);
            }
        }
    }
    sort_dedup(&mut out);
    Ok(out)
}
