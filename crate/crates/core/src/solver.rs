//! Inf-minimizers, lex-minimizers and their verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{high_pressure_raw, vhigh_raw, vlow_raw};
use crate::error::{Error, Result};
use crate::graph::{
    ensure_well_posed, GradientVector, Graph, PartialAssignment, TerminalPath, Tolerance, VertexId,
};
use crate::steepest::{exhaustive_steepest, round_cap, steepest_raw, vertex_steepest_raw};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub tol: Tolerance,
}

impl SolveOptions {
    pub fn new(seed: u64) -> Self {
        SolveOptions {
            seed,
            tol: Tolerance::default(),
        }
    }

    pub fn with_tol(mut self, rel: f64) -> Self {
        self.tol = Tolerance::new(rel);
        self
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self::new(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub assignment: Vec<f64>,
    /// Largest absolute edge gradient of `assignment` (largest positive
    /// part for directed graphs).
    pub inf_norm: f64,
    /// Number of paths fixed.
    pub iterations: usize,
    /// Fixed paths in the order they were fixed.
    pub fixed_order: Vec<TerminalPath>,
}

impl SolverResult {
    fn finish(g: &Graph, v: PartialAssignment, fixed_order: Vec<TerminalPath>) -> Result<Self> {
        let assignment = v.to_complete()?;
        let grads = if g.is_directed() {
            GradientVector::positive_part(g, &assignment)?
        } else {
            GradientVector::of(g, &assignment)?
        };
        Ok(SolverResult {
            inf_norm: grads.inf_norm(),
            iterations: fixed_order.len(),
            assignment,
            fixed_order,
        })
    }
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        Err(Error::RequiresUndirected)
    } else {
        Ok(())
    }
}

/// Assigns the free vertices of `p` by linear interpolation in path-length
/// coordinate between its endpoint values. Vertices that already carry a
/// value keep it; a vertex visited twice takes its first value.
pub fn fix_path(g: &Graph, v: &PartialAssignment, p: &TerminalPath) -> Result<PartialAssignment> {
    let path = &p.vertices;
    if path.len() < 2 {
        return Err(Error::NotATerminalPath("fewer than two vertices".into()));
    }
    if let Some(&x) = path.iter().find(|&&x| x >= v.len()) {
        return Err(Error::VertexOutOfRange {
            vertex: x,
            n: v.len(),
        });
    }
    let (first, last) = (path[0], path[path.len() - 1]);
    let (Some(start), Some(end)) = (v.get(first), v.get(last)) else {
        return Err(Error::NotATerminalPath("an endpoint is free".into()));
    };
    let mut prefix = Vec::with_capacity(path.len());
    let mut total = 0.0;
    prefix.push(0.0);
    for w in path.windows(2) {
        total += g
            .edge_len(w[0], w[1])
            .ok_or_else(|| Error::NotATerminalPath(format!("no edge from {} to {}", w[0], w[1])))?;
        prefix.push(total);
    }
    let grad = (start - end) / total;
    let mut out = v.clone();
    for (i, &x) in path.iter().enumerate().take(path.len() - 1).skip(1) {
        if !out.is_terminal(x) {
            out.set(x, start - grad * prefix[i])?;
        }
    }
    if cfg!(debug_assertions)
        && is_simple(path)
        && path[1..path.len() - 1].iter().all(|&x| !v.is_terminal(x))
    {
        let scale = 1f64.max(start.abs()).max(end.abs()) / total;
        for w in path.windows(2) {
            let e = (out.value(w[0]) - out.value(w[1])) / g.edge_len(w[0], w[1]).unwrap_or(1.0);
            debug_assert!(
                (e - grad).abs() <= 1e-6 * scale.max(grad.abs()),
                "edge gradient {e} differs from path gradient {grad}"
            );
        }
    }
    Ok(out)
}

fn is_simple(path: &[VertexId]) -> bool {
    let mut p = path.to_vec();
    p.sort_unstable();
    p.dedup();
    p.len() == path.len()
}

/// The graph without terminal-terminal edges and without terminals left
/// isolated by their removal, with its map back to `g`.
pub(crate) fn free_core(g: &Graph, v: &PartialAssignment) -> (Graph, Vec<VertexId>) {
    let h = g.without_terminal_edges(v);
    let keep: Vec<bool> = (0..g.n())
        .map(|x| !v.is_terminal(x) || !h.out_arcs(x).is_empty() || !h.in_arcs(x).is_empty())
        .collect();
    h.induced(&keep)
}

/// Gives every free vertex of `h` the smallest terminal value it reaches.
/// Used once every remaining free terminal path has gradient zero, where all
/// terminals a free vertex reaches share one value.
fn fill_flat(
    h: &Graph,
    local: &PartialAssignment,
    map: &[VertexId],
    v: &mut PartialAssignment,
) -> Result<()> {
    let low = vlow_raw(h, local, 0.0).values;
    for (i, &x) in map.iter().enumerate() {
        if !local.is_terminal(i) {
            v.set(x, low[i])?;
        }
    }
    Ok(())
}

/// An extension minimizing the largest absolute edge gradient.
///
/// The optimal Lipschitz constant `a` is the larger of the steepest
/// terminal-terminal edge and the steepest free terminal path. Free vertices
/// get the midpoint of `vLow[a]` and `vHigh[a]`, which is the inf-minimizer
/// closest in max-norm to all others.
pub fn comp_inf_min(
    g: &Graph,
    v0: &PartialAssignment,
    opts: &SolveOptions,
) -> Result<SolverResult> {
    require_undirected(g)?;
    ensure_well_posed(g, v0)?;
    let mut rng = opts.rng();
    inf_min_with(g, v0, &mut rng, opts.tol)
}

pub(crate) fn inf_min_with<R: Rng>(
    g: &Graph,
    v0: &PartialAssignment,
    rng: &mut R,
    tol: Tolerance,
) -> Result<SolverResult> {
    if v0.is_complete() {
        return SolverResult::finish(g, v0.clone(), Vec::new());
    }
    let mut alpha = g
        .edges()
        .iter()
        .filter_map(|e| match (v0.get(e.u), v0.get(e.v)) {
            (Some(a), Some(b)) => Some(((a - b) / e.len).abs()),
            _ => None,
        })
        .fold(0.0, f64::max);
    let (h, map) = free_core(g, v0);
    let local = v0.restrict(&map);
    let search = steepest_raw(&h, &local, rng, tol).ok_or(Error::NoFreeVertex)?;
    alpha = alpha.max(search.path.gradient);
    let low = vlow_raw(&h, &local, alpha).values;
    let high = vhigh_raw(&h, &local, alpha).values;
    let mut v = v0.clone();
    for (i, &x) in map.iter().enumerate() {
        if !local.is_terminal(i) {
            v.set(x, 0.5 * (low[i] + high[i]))?;
        }
    }
    SolverResult::finish(g, v, vec![search.path.mapped(&map)])
}

/// The lex-minimizer, by repeatedly fixing a steepest free terminal path.
pub fn comp_lex_min(
    g: &Graph,
    v0: &PartialAssignment,
    opts: &SolveOptions,
) -> Result<SolverResult> {
    require_undirected(g)?;
    ensure_well_posed(g, v0)?;
    let mut rng = opts.rng();
    let mut v = v0.clone();
    let mut fixed = Vec::new();
    while !v.is_complete() {
        let (h, map) = free_core(g, &v);
        let local = v.restrict(&map);
        let search = steepest_raw(&h, &local, &mut rng, opts.tol).ok_or(Error::NoFreeVertex)?;
        let path = search.path.mapped(&map);
        if let Some(prev) = fixed.last().map(|p: &TerminalPath| p.gradient) {
            debug_assert!(
                !opts.tol.greater(path.gradient, prev),
                "fixed gradients must not increase: {prev} then {}",
                path.gradient
            );
        }
        if path.gradient <= 0.0 {
            fill_flat(&h, &local, &map, &mut v)?;
            fixed.push(path);
            break;
        }
        v = fix_path(g, &v, &path)?;
        fixed.push(path);
    }
    SolverResult::finish(g, v, fixed)
}

struct FastState<'r, R> {
    rng: &'r mut R,
    tol: Tolerance,
    values: PartialAssignment,
    fixed: Vec<TerminalPath>,
}

impl<R: Rng> FastState<'_, R> {
    /// Fixes every path through `graph` (a piece of the original graph,
    /// mapped by `map`) whose gradient exceeds `threshold`; with a zero
    /// threshold, fixes everything.
    fn fix_above(
        &mut self,
        graph: Graph,
        map: Vec<VertexId>,
        threshold: f64,
        depth: usize,
    ) -> Result<()> {
        let (mut graph, mut map) = (graph, map);
        loop {
            let local = self.values.restrict(&map);
            if local.is_complete() {
                return Ok(());
            }
            let (h, hmap) = free_core(&graph, &local);
            map = hmap.iter().map(|&x| map[x]).collect();
            graph = h;
            let local = local.restrict(&hmap);
            if graph.m() == 0 {
                return Err(Error::NoFreeVertex);
            }

            if depth > round_cap(graph.m()) {
                let path = exhaustive_steepest(&graph, &local).ok_or(Error::NoFreeVertex)?;
                self.fix_local(&graph, &local, &map, path)?;
            } else {
                let terminals = local.terminals();
                let e = graph.edges()[self.rng.random_range(0..graph.m())];
                let x3 = self.rng.random_range(0..graph.n());
                let mut best: Option<TerminalPath> = None;
                for x in [e.u, e.v, x3] {
                    if let Some(p) =
                        vertex_steepest_raw(&graph, &local, &terminals, x, self.rng, self.tol)
                    {
                        if best.as_ref().is_none_or(|b| p.gradient > b.gradient) {
                            best = Some(p);
                        }
                    }
                }
                let best = best.ok_or(Error::NoFreeVertex)?;
                let alpha = best.gradient.max(0.0);
                let sub = high_pressure_raw(&graph, &local, alpha, self.tol);
                if sub.graph.m() == 0 {
                    self.fix_local(&graph, &local, &map, best)?;
                } else {
                    let (comp, count) = sub.graph.components();
                    let mut members = vec![Vec::new(); count];
                    for (x, &c) in comp.iter().enumerate() {
                        members[c].push(x);
                    }
                    for part in members {
                        let mut keep = vec![false; sub.graph.n()];
                        for &x in &part {
                            keep[x] = true;
                        }
                        let (cg, cmap) = sub.graph.induced(&keep);
                        if cg.m() == 0 {
                            continue;
                        }
                        let to_global = cmap.iter().map(|&x| map[sub.to_parent[x]]).collect();
                        self.fix_above(cg, to_global, alpha, depth + 1)?;
                    }
                }
            }

            if threshold > 0.0 {
                let local = self.values.restrict(&map);
                if local.is_complete() {
                    return Ok(());
                }
                let (h, hmap) = free_core(&graph, &local);
                let local = local.restrict(&hmap);
                let sub = high_pressure_raw(&h, &local, threshold, self.tol);
                if sub.graph.m() == 0 {
                    return Ok(());
                }
                map = sub.to_parent.iter().map(|&x| map[hmap[x]]).collect();
                graph = sub.graph;
            }
        }
    }

    fn fix_local(
        &mut self,
        graph: &Graph,
        local: &PartialAssignment,
        map: &[VertexId],
        path: TerminalPath,
    ) -> Result<()> {
        if path.gradient <= 0.0 {
            fill_flat(graph, local, map, &mut self.values)?;
        } else {
            let fixed = fix_path(graph, local, &path)?;
            for &x in &path.vertices {
                if !local.is_terminal(x) {
                    self.values.set(map[x], fixed.value(x))?;
                }
            }
        }
        self.fixed.push(path.mapped(map));
        Ok(())
    }
}

/// The lex-minimizer, fixing all paths above a sampled pressure level at
/// once and recursing on the connected pieces of the high-pressure
/// subgraph.
pub fn comp_fast_lex_min(
    g: &Graph,
    v0: &PartialAssignment,
    opts: &SolveOptions,
) -> Result<SolverResult> {
    require_undirected(g)?;
    ensure_well_posed(g, v0)?;
    let mut rng = opts.rng();
    let mut state = FastState {
        rng: &mut rng,
        tol: opts.tol,
        values: v0.clone(),
        fixed: Vec::new(),
    };
    state.fix_above(g.clone(), (0..g.n()).collect(), 0.0, 0)?;
    let FastState { values, fixed, .. } = state;
    SolverResult::finish(g, values, fixed)
}

/// A free vertex left unconstrained by the directed path fixing, with the
/// interval of values that keep every positive gradient at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbiguousVertex {
    pub vertex: VertexId,
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectedResult {
    pub result: SolverResult,
    pub ambiguous: Vec<AmbiguousVertex>,
    /// Edges outside the fixed part whose positive gradient ended above
    /// tolerance. Expected to be empty.
    pub violations: Vec<usize>,
}

/// Lex-minimizer of the positive parts of directed gradients.
///
/// Steepest directed paths of positive gradient are fixed one at a time.
/// Each remaining free vertex `x` is then confined to `[lo, hi]`, where `lo`
/// is the largest value of a terminal with a directed path to `x` and `hi`
/// the smallest value of a terminal reachable from `x` (paths avoiding other
/// terminals). It takes the point of that interval closest to the median of
/// the original labels.
pub fn directed_lex_min(
    g: &Graph,
    v0: &PartialAssignment,
    opts: &SolveOptions,
) -> Result<DirectedResult> {
    if !g.is_directed() {
        return Err(Error::RequiresDirected);
    }
    ensure_well_posed(g, v0)?;
    let mut rng = opts.rng();
    let mut v = v0.clone();
    let mut fixed = Vec::new();
    while !v.is_complete() {
        let (h, map) = free_core(g, &v);
        let local = v.restrict(&map);
        let Some(search) = steepest_raw(&h, &local, &mut rng, opts.tol) else {
            break;
        };
        if search.path.gradient <= 0.0 {
            break;
        }
        let path = search.path.mapped(&map);
        v = fix_path(g, &v, &path)?;
        fixed.push(path);
    }

    let mut labels: Vec<f64> = v0.values().iter().flatten().copied().collect();
    labels.sort_by(f64::total_cmp);
    let median = match labels.len() {
        0 => 0.0,
        k if k % 2 == 1 => labels[k / 2],
        k => 0.5 * (labels[k / 2 - 1] + labels[k / 2]),
    };
    let lower = bound_through_free(g, &v, true);
    let upper = bound_through_free(g, &v, false);
    let mut ambiguous = Vec::new();
    for x in v.free_vertices() {
        let (lo, hi) = (lower[x], upper[x]);
        let value = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => median.max(lo).min(hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => median,
        };
        ambiguous.push(AmbiguousVertex {
            vertex: x,
            lower: lo,
            upper: hi,
            value,
        });
    }
    let fixed_part = v.clone();
    for a in &ambiguous {
        v.set(a.vertex, a.value)?;
    }
    let result = SolverResult::finish(g, v, fixed)?;
    let violations = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !(fixed_part.is_terminal(e.u) && fixed_part.is_terminal(e.v)))
        .filter(|(_, e)| (result.assignment[e.u] - result.assignment[e.v]) / e.len > opts.tol.rel)
        .map(|(i, _)| i)
        .collect();
    Ok(DirectedResult {
        result,
        ambiguous,
        violations,
    })
}

/// For `upstream`, the largest terminal value with a directed path to each
/// free vertex through free vertices only (`-inf` if none); otherwise the
/// smallest terminal value reachable the same way (`+inf` if none).
fn bound_through_free(g: &Graph, v: &PartialAssignment, upstream: bool) -> Vec<f64> {
    let mut terminals = v.terminals();
    terminals.sort_by(|&a, &b| {
        let ord = v.value(a).total_cmp(&v.value(b));
        if upstream {
            ord.reverse()
        } else {
            ord
        }
    });
    let blank = if upstream {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    let mut bound = vec![blank; g.n()];
    let mut seen = vec![false; g.n()];
    let mut stack = Vec::new();
    for t in terminals {
        let val = v.value(t);
        stack.push(t);
        while let Some(x) = stack.pop() {
            let arcs = if upstream {
                g.out_arcs(x)
            } else {
                g.in_arcs(x)
            };
            for a in arcs {
                let y = a.to;
                if !v.is_terminal(y) && !seen[y] {
                    seen[y] = true;
                    bound[y] = val;
                    stack.push(y);
                }
            }
        }
    }
    bound
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A terminal whose value differs from its label.
    Label {
        vertex: VertexId,
        expected: f64,
        actual: f64,
    },
    /// A free vertex whose steepest outgoing and incoming gradients differ.
    Averaging {
        vertex: VertexId,
        max_gradient: f64,
        min_gradient: f64,
    },
}

/// Checks that `v` extends `v0` and that at every free vertex the largest
/// gradient toward a neighbour is minus the smallest one. An assignment
/// passes exactly when it is the lex-minimizer. Returns the violations.
pub fn verify_max_min(
    g: &Graph,
    v0: &PartialAssignment,
    v: &[f64],
    tol: f64,
) -> Result<Vec<Violation>> {
    require_undirected(g)?;
    for (actual, expected) in [(v.len(), g.n()), (v0.len(), g.n())] {
        if actual != expected {
            return Err(Error::LengthMismatch { expected, actual });
        }
    }
    let mut out = Vec::new();
    for x in 0..g.n() {
        if let Some(label) = v0.get(x) {
            if label != v[x] {
                out.push(Violation::Label {
                    vertex: x,
                    expected: label,
                    actual: v[x],
                });
            }
            continue;
        }
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for a in g.out_arcs(x) {
            let grad = (v[x] - v[a.to]) / a.len;
            hi = hi.max(grad);
            lo = lo.min(grad);
        }
        if g.out_arcs(x).is_empty() {
            continue;
        }
        if (hi + lo).abs() > tol * 1f64.max(hi.abs()).max(lo.abs()) {
            out.push(Violation::Averaging {
                vertex: x,
                max_gradient: hi,
                min_gradient: lo,
            });
        }
    }
    Ok(out)
}

/// Largest change of the lex-minimizer when the labels move from `v0` to
/// `v1` (same terminal set). Never exceeds the largest label change.
pub fn stability_check(
    g: &Graph,
    v0: &PartialAssignment,
    v1: &PartialAssignment,
    opts: &SolveOptions,
) -> Result<f64> {
    if v0.len() != v1.len() {
        return Err(Error::LengthMismatch {
            expected: v0.len(),
            actual: v1.len(),
        });
    }
    if let Some(vertex) = (0..v0.len()).find(|&x| v0.is_terminal(x) != v1.is_terminal(x)) {
        return Err(Error::TerminalSetMismatch { vertex });
    }
    let a = comp_fast_lex_min(g, v0, opts)?.assignment;
    let b = comp_fast_lex_min(g, v1, opts)?.assignment;
    Ok(a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize, l: &[(usize, f64)]) -> PartialAssignment {
        PartialAssignment::from_labels(n, l.iter().copied()).unwrap()
    }

    #[test]
    fn fix_path_examples() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let v = labels(3, &[(0, 0.0), (2, 1.0)]);
        let p = TerminalPath::along(&g, &v, vec![0, 1, 2]).unwrap();
        assert_eq!(fix_path(&g, &v, &p).unwrap().get(1), Some(0.5));

        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 3.0)]).unwrap();
        let v = labels(3, &[(0, 4.0), (2, 0.0)]);
        let p = TerminalPath::along(&g, &v, vec![0, 1, 2]).unwrap();
        assert_eq!(fix_path(&g, &v, &p).unwrap().get(1), Some(3.0));
    }

    #[test]
    fn fix_path_uneven_lengths() {
        let lens = [0.5, 2.0, 1.25, 0.25];
        let g = Graph::undirected(5, (0..4).map(|i| (i, i + 1, lens[i]))).unwrap();
        let v = labels(5, &[(0, 2.0), (4, -2.0)]);
        let p = TerminalPath::along(&g, &v, vec![0, 1, 2, 3, 4]).unwrap();
        let out = fix_path(&g, &v, &p).unwrap();
        // 4 over a total length of 4: one unit of value per unit of length.
        assert_eq!(out.get(1), Some(1.5));
        assert_eq!(out.get(2), Some(-0.5));
        assert_eq!(out.get(3), Some(-1.75));
    }

    #[test]
    fn fix_path_rejects_non_paths() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let v = labels(3, &[(0, 0.0), (2, 1.0)]);
        let bad = TerminalPath {
            vertices: vec![0, 2],
            length: 1.0,
            gradient: -1.0,
        };
        assert!(fix_path(&g, &v, &bad).is_err());
        let bad = TerminalPath {
            vertices: vec![0, 1],
            length: 1.0,
            gradient: 0.0,
        };
        assert!(fix_path(&g, &v, &bad).is_err());
    }

    #[test]
    fn inf_min_single_path() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let v0 = labels(3, &[(0, 0.0), (2, 1.0)]);
        let r = comp_inf_min(&g, &v0, &SolveOptions::new(1)).unwrap();
        assert_eq!(r.inf_norm, 0.5);
        assert_eq!(r.assignment, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_labels_stay_constant() {
        let g = Graph::undirected(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (1, 3, 5.0)]).unwrap();
        let v0 = labels(4, &[(0, 7.0), (3, 7.0)]);
        for solve in [comp_inf_min, comp_lex_min, comp_fast_lex_min] {
            let r = solve(&g, &v0, &SolveOptions::new(3)).unwrap();
            assert_eq!(r.assignment, vec![7.0; 4]);
            assert_eq!(r.inf_norm, 0.0);
        }
    }

    #[test]
    fn lex_on_path_interpolates() {
        let g = Graph::undirected(5, (0..4).map(|i| (i, i + 1, 1.0))).unwrap();
        let v0 = labels(5, &[(0, 0.0), (4, 2.0)]);
        let r = comp_lex_min(&g, &v0, &SolveOptions::new(0)).unwrap();
        assert_eq!(r.assignment, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn lex_t_graph_trace() {
        // a=0, b=1, c=2, d=3, e=4
        let g = Graph::undirected(5, [(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (3, 4, 1.0)]).unwrap();
        let v0 = labels(5, &[(0, 0.0), (2, 1.0), (4, 0.5)]);
        for solve in [comp_lex_min, comp_fast_lex_min] {
            let r = solve(&g, &v0, &SolveOptions::new(5)).unwrap();
            assert_eq!(r.assignment, vec![0.0, 0.5, 1.0, 0.5, 0.5]);
            assert_eq!(r.fixed_order[0].gradient, 0.5);
        }
    }

    #[test]
    fn undirected_solvers_reject_directed() {
        let g = Graph::directed(2, [(0, 1, 1.0)]).unwrap();
        let v0 = labels(2, &[(0, 0.0), (1, 1.0)]);
        assert!(matches!(
            comp_lex_min(&g, &v0, &SolveOptions::new(0)),
            Err(Error::RequiresUndirected)
        ));
    }

    #[test]
    fn ill_posed_is_reported() {
        let g = Graph::undirected(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let v0 = labels(4, &[(0, 0.0)]);
        assert!(matches!(
            comp_fast_lex_min(&g, &v0, &SolveOptions::new(0)),
            Err(Error::NotWellPosed(_))
        ));
    }

    #[test]
    fn directed_chain_examples() {
        let g = Graph::directed(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let r =
            directed_lex_min(&g, &labels(3, &[(0, 1.0), (2, 0.0)]), &SolveOptions::new(0)).unwrap();
        assert_eq!(r.result.assignment[1], 0.5);
        assert!(r.ambiguous.is_empty());

        let r =
            directed_lex_min(&g, &labels(3, &[(0, 0.0), (2, 1.0)]), &SolveOptions::new(0)).unwrap();
        assert_eq!(r.result.assignment[1], 0.5);
        assert_eq!(
            r.ambiguous,
            vec![AmbiguousVertex {
                vertex: 1,
                lower: 0.0,
                upper: 1.0,
                value: 0.5
            }]
        );
        assert_eq!(r.result.inf_norm, 0.0);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn verify_detects_perturbation() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let v0 = labels(3, &[(0, 0.0), (2, 1.0)]);
        assert!(verify_max_min(&g, &v0, &[0.0, 0.5, 1.0], 1e-7)
            .unwrap()
            .is_empty());
        let bad = verify_max_min(&g, &v0, &[0.0, 0.6, 1.0], 1e-7).unwrap();
        assert!(matches!(bad[..], [Violation::Averaging { vertex: 1, .. }]));
        let bad = verify_max_min(&g, &v0, &[0.1, 0.55, 1.0], 1e-7).unwrap();
        assert!(matches!(bad[..], [Violation::Label { vertex: 0, .. }]));
    }

    #[test]
    fn stability_identity_and_translation() {
        let g = Graph::undirected(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (1, 3, 1.5)]).unwrap();
        let v0 = labels(4, &[(0, 0.0), (3, 1.0)]);
        assert_eq!(
            stability_check(&g, &v0, &v0, &SolveOptions::new(0)).unwrap(),
            0.0
        );
        let v1 = labels(4, &[(0, 0.25), (3, 1.25)]);
        let d = stability_check(&g, &v0, &v1, &SolveOptions::new(0)).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
        let v2 = labels(4, &[(0, 0.25), (2, 1.25)]);
        assert!(stability_check(&g, &v0, &v2, &SolveOptions::new(0)).is_err());
    }
}
