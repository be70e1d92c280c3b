//! Removing outlier labels to minimize the Lipschitz constant.
//!
//! For a threshold `alpha`, the pressure graph has an arc `s -> t` between
//! terminals whenever the shortest path from `s` to `t` has gradient above
//! `alpha`. Relabeling a set `U` of terminals brings the optimal Lipschitz
//! constant to `alpha` or below exactly when `U` covers every arc. For
//! `alpha >= 0` the pressure graph is a transitively closed DAG, where a
//! minimum vertex cover comes from a maximum matching.

mod flow;
mod matching;

pub use flow::FlowNetwork;
pub use matching::{hopcroft_karp, konig_cover, Matching};

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{
    ensure_well_posed, sort_dedup, Graph, PartialAssignment, Tolerance, VertexId, DEDUP_REL,
};
use crate::shortest::{sloped_search, Direction};
use crate::solver::{free_core, inf_min_with, SolveOptions, SolverResult};
use crate::steepest::steepest_raw;

/// A directed graph on vertices `0..n`, used for pressure graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

impl Digraph {
    /// Builds the graph; duplicate arcs are merged, self-loops rejected.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in arcs {
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
            list.push((u, v));
        }
        list.sort_unstable();
        list.dedup();
        let mut out = vec![Vec::new(); n];
        for &(u, v) in &list {
            out[u].push(v);
        }
        Ok(Digraph { n, arcs: list, out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// A vertex on a directed cycle, if any.
    pub fn find_cycle(&self) -> Option<usize> {
        // Kahn's algorithm: whatever cannot be peeled lies on or behind a cycle.
        let mut indeg = vec![0usize; self.n];
        for &(_, v) in &self.arcs {
            indeg[v] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut peeled = 0;
        while let Some(u) = stack.pop() {
            peeled += 1;
            for &v in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        if peeled == self.n {
            return None;
        }
        // Walk predecessors-with-positive-indegree until a vertex repeats.
        let mut pred = vec![usize::MAX; self.n];
        for &(u, v) in &self.arcs {
            if indeg[u] > 0 && indeg[v] > 0 {
                pred[v] = u;
            }
        }
        let mut x = (0..self.n).find(|&v| indeg[v] > 0)?;
        let mut seen = vec![false; self.n];
        while !seen[x] {
            seen[x] = true;
            x = pred[x];
        }
        Some(x)
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// An arc implied by transitivity but absent, if any.
    pub fn missing_closure_arc(&self) -> Option<(usize, usize)> {
        for &(u, v) in &self.arcs {
            for &w in &self.out[v] {
                if w != u && !self.has_arc(u, w) {
                    return Some((u, w));
                }
            }
        }
        None
    }

    pub fn is_transitively_closed(&self) -> bool {
        self.missing_closure_arc().is_none()
    }

    pub fn transitive_closure(&self) -> Digraph {
        let mut arcs = Vec::new();
        let mut seen = vec![usize::MAX; self.n];
        for s in 0..self.n {
            let mut stack = vec![s];
            seen[s] = s;
            while let Some(x) = stack.pop() {
                for &y in &self.out[x] {
                    if seen[y] != s {
                        seen[y] = s;
                        arcs.push((s, y));
                        stack.push(y);
                    }
                }
            }
        }
        Digraph::new(self.n, arcs.into_iter().filter(|(u, v)| u != v)).expect("valid arcs")
    }

    /// Whether every arc has an endpoint in `set`.
    pub fn is_cover(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &x in set {
            if x < self.n {
                inside[x] = true;
            }
        }
        self.arcs.iter().all(|&(u, v)| inside[u] || inside[v])
    }
}

/// The pressure graph at threshold `alpha`; vertex `i` of `dag` stands for
/// `terminals[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureGraph {
    pub terminals: Vec<VertexId>,
    pub alpha: f64,
    pub dag: Digraph,
}

impl PressureGraph {
    /// Arcs as pairs of original vertex ids.
    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        self.dag
            .arcs()
            .iter()
            .map(|&(i, j)| (self.terminals[i], self.terminals[j]))
            .collect()
    }
}

/// Shortest distances between all pairs of terminals.
#[derive(Debug, Clone)]
pub(crate) struct TerminalDistances {
    terminals: Vec<VertexId>,
    values: Vec<f64>,
    dist: Vec<f64>,
}

impl TerminalDistances {
    pub(crate) fn compute(g: &Graph, v0: &PartialAssignment) -> Self {
        let terminals = v0.terminals();
        let k = terminals.len();
        let mut dist = Vec::with_capacity(k * k);
        for &s in &terminals {
            let (d, _) = sloped_search(g, Direction::Forward, &[(s, 0.0)], 1.0);
            dist.extend(terminals.iter().map(|&t| d[t]));
        }
        TerminalDistances {
            values: terminals.iter().map(|&t| v0.value(t)).collect(),
            terminals,
            dist,
        }
    }

    fn len(&self) -> usize {
        self.terminals.len()
    }

    fn gradient(&self, i: usize, j: usize) -> Option<f64> {
        let d = self.dist[i * self.len() + j];
        (i != j && d.is_finite()).then(|| (self.values[i] - self.values[j]) / d)
    }

    fn gradients(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).flat_map(move |i| (0..self.len()).filter_map(move |j| self.gradient(i, j)))
    }

    /// Arc `i -> j` whenever the gradient exceeds `alpha` by more than a
    /// relative `1e-12`.
    pub(crate) fn pressure_graph(&self, alpha: f64) -> PressureGraph {
        let floor = alpha + DEDUP_REL * 1f64.max(alpha.abs());
        let k = self.len();
        let arcs = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| self.gradient(i, j).is_some_and(|grad| grad > floor));
        PressureGraph {
            terminals: self.terminals.clone(),
            alpha,
            dag: Digraph::new(k, arcs).expect("valid arcs"),
        }
    }
}

/// The pressure graph of `v0` at `alpha`: an arc `s -> t` for each ordered
/// pair of terminals whose shortest path (possibly through other terminals)
/// has gradient above `alpha`.
pub fn term_pressure_graph(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Result<PressureGraph> {
    ensure_well_posed(g, v0)?;
    if alpha.is_nan() {
        return Err(Error::InvalidArgument("threshold is NaN".into()));
    }
    Ok(TerminalDistances::compute(g, v0).pressure_graph(alpha))
}

fn double_graph(dag: &Digraph) -> Vec<Vec<usize>> {
    (0..dag.n()).map(|u| dag.successors(u).to_vec()).collect()
}

/// Minimum vertex cover of a transitively closed DAG, through a maximum
/// matching in its bipartite double graph. With `validate`, the input is
/// checked for cycles and missing closure arcs first.
pub fn min_vc_tcdag(dag: &Digraph, validate: bool) -> Result<Vec<usize>> {
    if validate {
        if let Some(vertex) = dag.find_cycle() {
            return Err(Error::NotAcyclic { vertex });
        }
        if let Some((u, v)) = dag.missing_closure_arc() {
            return Err(Error::NotTransitivelyClosed { u, v });
        }
    }
    let adj = double_graph(dag);
    let m = hopcroft_karp(dag.n(), &adj);
    let (left, right) = konig_cover(dag.n(), &adj, &m);
    let mut inside = vec![false; dag.n()];
    for x in left.into_iter().chain(right) {
        inside[x] = true;
    }
    Ok((0..dag.n()).filter(|&x| inside[x]).collect())
}

/// Minimum vertex cover of the transitive closure of a DAG, without
/// building the closure: a minimum cut in the split network with unit arcs
/// `s -> (v,1)` and `(v,2) -> t`, uncuttable arcs `(u,1) -> (v,2)` for each
/// arc and `(v,2) -> (v,1)` for each vertex.
pub fn min_vc_implicit(dag: &Digraph) -> Result<Vec<usize>> {
    if let Some(vertex) = dag.find_cycle() {
        return Err(Error::NotAcyclic { vertex });
    }
    let n = dag.n();
    let (s, t) = (0, 1);
    let left = |v: usize| 2 + v;
    let right = |v: usize| 2 + n + v;
    let inf = 2 * n as u64 + 1;
    let mut net = FlowNetwork::new(2 * n + 2, s, t);
    for v in 0..n {
        net.add_arc(s, left(v), 1);
        net.add_arc(right(v), t, 1);
        net.add_arc(right(v), left(v), inf);
    }
    for &(u, v) in dag.arcs() {
        net.add_arc(left(u), right(v), inf);
    }
    net.max_flow();
    let side = net.source_side();
    Ok((0..n)
        .filter(|&v| !side[left(v)] || side[right(v)])
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierResult {
    pub result: SolverResult,
    /// Terminals whose labels were dropped, sorted.
    pub removed: Vec<VertexId>,
    /// Lipschitz constant targeted by the removal: the optimum for the exact
    /// solver, the achieved value for the approximate one.
    pub alpha: f64,
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        Err(Error::RequiresUndirected)
    } else {
        Ok(())
    }
}

/// Drops at most `k` labels so that the inf-minimizer of the rest has the
/// smallest possible Lipschitz constant, found by binary search over the
/// terminal-pair gradients.
pub fn outlier_exact(
    g: &Graph,
    v0: &PartialAssignment,
    k: usize,
    opts: &SolveOptions,
) -> Result<OutlierResult> {
    require_undirected(g)?;
    ensure_well_posed(g, v0)?;
    let td = TerminalDistances::compute(g, v0);
    let mut candidates: Vec<f64> = td.gradients().filter(|&x| x >= 0.0).collect();
    candidates.push(0.0);
    sort_dedup(&mut candidates);

    let cover_at =
        |alpha: f64| -> Result<Vec<usize>> { min_vc_tcdag(&td.pressure_graph(alpha).dag, false) };
    // The largest candidate always has an empty pressure graph.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut cover = cover_at(candidates[hi])?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let c = cover_at(candidates[mid])?;
        if c.len() <= k {
            hi = mid;
            cover = c;
        } else {
            lo = mid + 1;
        }
    }
    let alpha = candidates[lo];
    let removed: Vec<VertexId> = cover.iter().map(|&i| td.terminals[i]).collect();
    let mut v = v0.clone();
    for &x in &removed {
        v.unset(x);
    }
    let mut rng = opts.rng();
    let result = inf_min_with(g, &v, &mut rng, opts.tol)?;
    Ok(OutlierResult {
        result,
        removed,
        alpha,
    })
}

/// Steepest terminal pair `(s, t, gradient)` over terminal-terminal edges
/// and free terminal paths.
fn steepest_pair<R: Rng>(
    g: &Graph,
    v: &PartialAssignment,
    rng: &mut R,
    tol: Tolerance,
) -> Option<(VertexId, VertexId, f64)> {
    let mut best: Option<(VertexId, VertexId, f64)> = None;
    for e in g.edges() {
        if let (Some(a), Some(b)) = (v.get(e.u), v.get(e.v)) {
            let grad = ((a - b) / e.len).abs();
            let pair = if a >= b {
                (e.u, e.v, grad)
            } else {
                (e.v, e.u, grad)
            };
            if best.is_none_or(|b| grad > b.2) {
                best = Some(pair);
            }
        }
    }
    if !v.is_complete() {
        let (h, map) = free_core(g, v);
        let local = v.restrict(&map);
        if let Some(s) = steepest_raw(&h, &local, rng, tol) {
            let p = s.path.mapped(&map);
            if best.is_none_or(|b| p.gradient > b.2) {
                best = Some((p.first(), p.last(), p.gradient));
            }
        }
    }
    best
}

/// Greedy removal: up to `k` times, drop the labels at both ends of the
/// steepest terminal path. At most `2k` labels are dropped and the result is
/// at least as good as the best possible with `k` removals. When a
/// component would lose its last label, only one end is dropped.
pub fn outlier_approx(
    g: &Graph,
    v0: &PartialAssignment,
    k: usize,
    opts: &SolveOptions,
) -> Result<OutlierResult> {
    require_undirected(g)?;
    ensure_well_posed(g, v0)?;
    let (comp, count) = g.components();
    let mut labeled = vec![0usize; count];
    for t in v0.terminals() {
        labeled[comp[t]] += 1;
    }
    let mut rng = opts.rng();
    let mut v = v0.clone();
    let mut removed = Vec::new();
    for _ in 0..k {
        let Some((s, t, grad)) = steepest_pair(g, &v, &mut rng, opts.tol) else {
            break;
        };
        if grad <= 0.0 {
            break;
        }
        for x in [s, t] {
            if labeled[comp[x]] > 1 && v.is_terminal(x) {
                v.unset(x);
                labeled[comp[x]] -= 1;
                removed.push(x);
            }
        }
    }
    removed.sort_unstable();
    let result = inf_min_with(g, &v, &mut rng, opts.tol)?;
    Ok(OutlierResult {
        alpha: result.inf_norm,
        result,
        removed,
    })
}
