//! Randomized search for steepest terminal paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::high_pressure_raw;
use crate::error::{Error, Result};
use crate::graph::{
    ensure_well_posed, Graph, PartialAssignment, TerminalPath, Tolerance, VertexId, DEDUP_REL,
};
use crate::shortest::{dijkstra, Direction, ShortestPaths};

/// A terminal seen from the centre of a star: paths may leave it toward the
/// centre (`dist_in`) or arrive at it from the centre (`dist_out`).
/// Infinite distances mark a missing direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarTerminal {
    pub value: f64,
    pub dist_in: f64,
    pub dist_out: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarInstance {
    terminals: Vec<StarTerminal>,
}

impl StarInstance {
    /// A star with symmetric distances, given as `(value, distance)` pairs.
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(terminals: I) -> Result<Self> {
        Self::directed(terminals.into_iter().map(|(value, d)| StarTerminal {
            value,
            dist_in: d,
            dist_out: d,
        }))
    }

    pub fn directed<I: IntoIterator<Item = StarTerminal>>(terminals: I) -> Result<Self> {
        let terminals: Vec<StarTerminal> = terminals.into_iter().collect();
        for (i, t) in terminals.iter().enumerate() {
            let ok = |d: f64| d > 0.0 && !d.is_nan();
            if !t.value.is_finite() || !ok(t.dist_in) || !ok(t.dist_out) {
                return Err(Error::InvalidArgument(format!(
                    "star terminal {i} needs a finite value and positive distances"
                )));
            }
        }
        Ok(StarInstance { terminals })
    }

    pub fn terminals(&self) -> &[StarTerminal] {
        &self.terminals
    }

    /// Gradient of the path from terminal `i` through the centre to `j`.
    pub fn gradient(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.terminals[i], &self.terminals[j]);
        (a.value - b.value) / (a.dist_in + b.dist_out)
    }

    fn admissible(&self, i: usize, j: usize) -> bool {
        i != j && self.terminals[i].dist_in.is_finite() && self.terminals[j].dist_out.is_finite()
    }
}

/// The two smallest keys with their owners, so that the minimum over
/// "everyone but `t`" is available in constant time.
struct TwoBest {
    best: (f64, usize),
    second: (f64, usize),
}

impl TwoBest {
    fn min_of<I: Iterator<Item = (f64, usize)>>(items: I) -> Self {
        let mut tb = TwoBest {
            best: (f64::INFINITY, usize::MAX),
            second: (f64::INFINITY, usize::MAX),
        };
        for (k, i) in items {
            if k < tb.best.0 {
                tb.second = tb.best;
                tb.best = (k, i);
            } else if k < tb.second.0 {
                tb.second = (k, i);
            }
        }
        tb
    }

    fn excluding(&self, t: usize) -> f64 {
        if self.best.1 == t {
            self.second.0
        } else {
            self.best.0
        }
    }
}

/// Best ordered pair `(t1, t2, gradient)`, or `None` if no admissible pair
/// exists. Among pairs within a relative `1e-12` of the maximum, the
/// lexicographically smallest `(t1, t2)` is returned.
pub(crate) fn star_steepest_rng<R: Rng>(
    inst: &StarInstance,
    rng: &mut R,
    tol: Tolerance,
) -> Option<(usize, usize, f64)> {
    let ts = &inst.terminals;
    let mut active: Vec<usize> = (0..ts.len())
        .filter(|&i| ts[i].dist_in.is_finite() || ts[i].dist_out.is_finite())
        .collect();
    let mut best: Option<(usize, usize, f64)> = None;
    while active.len() >= 2 {
        let t1 = active[rng.random_range(0..active.len())];
        let mut pivot: Option<(usize, usize, f64)> = None;
        for &t in &active {
            for (a, b) in [(t1, t), (t, t1)] {
                if inst.admissible(a, b) {
                    let grad = inst.gradient(a, b);
                    if pivot.is_none_or(|p| grad > p.2) {
                        pivot = Some((a, b, grad));
                    }
                }
            }
        }
        let Some(pivot) = pivot else {
            active.retain(|&t| t != t1);
            continue;
        };
        if best.is_none_or(|b| pivot.2 > b.2) {
            best = Some(pivot);
        }
        let alpha = pivot.2;
        let low = TwoBest::min_of(
            active
                .iter()
                .filter(|&&t| ts[t].dist_out.is_finite())
                .map(|&t| (ts[t].value + alpha * ts[t].dist_out, t)),
        );
        let high = TwoBest::min_of(
            active
                .iter()
                .filter(|&&t| ts[t].dist_in.is_finite())
                .map(|&t| (-(ts[t].value - alpha * ts[t].dist_in), t)),
        );
        active.retain(|&t| {
            let s = &ts[t];
            (s.dist_in.is_finite() && tol.greater(s.value - alpha * s.dist_in, low.excluding(t)))
                || (s.dist_out.is_finite()
                    && tol.greater(-high.excluding(t), s.value + alpha * s.dist_out))
        });
    }
    let (_, _, top) = best?;
    let floor = top - DEDUP_REL * 1f64.max(top.abs());
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            if inst.admissible(i, j) && inst.gradient(i, j) >= floor {
                return Some((i, j, inst.gradient(i, j)));
            }
        }
    }
    best
}

/// Returns the ordered pair of distinct terminals maximizing
/// `(v(t1) - v(t2)) / (d(t1) + d(t2))`.
pub fn star_steepest_path(inst: &StarInstance, seed: u64) -> Result<(usize, usize)> {
    if inst.terminals.len() < 2 {
        return Err(Error::InvalidArgument(
            "a star needs at least two terminals".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    star_steepest_rng(inst, &mut rng, Tolerance::default())
        .map(|(i, j, _)| (i, j))
        .ok_or_else(|| Error::InvalidArgument("no admissible pair of star terminals".into()))
}

fn concat(first: Vec<VertexId>, second: Vec<VertexId>) -> Vec<VertexId> {
    let mut out = first;
    out.extend_from_slice(&second[1..]);
    out
}

/// Shortest searches from `x` in both directions (one search when undirected).
fn searches_from(g: &Graph, x: VertexId) -> (ShortestPaths, Option<ShortestPaths>) {
    let fwd = dijkstra(g, x, Direction::Forward);
    let back = g.is_directed().then(|| dijkstra(g, x, Direction::Backward));
    (fwd, back)
}

/// Path `t..x` along edge orientation.
fn path_into(fwd: &ShortestPaths, back: &Option<ShortestPaths>, t: VertexId) -> Vec<VertexId> {
    match back {
        Some(b) => b.path(t).expect("reachable"),
        None => {
            let mut p = fwd.path(t).expect("reachable");
            p.reverse();
            p
        }
    }
}

/// Steepest terminal path through `x`, or `None` when no terminal path
/// passes through it.
pub(crate) fn vertex_steepest_raw<R: Rng>(
    g: &Graph,
    v0: &PartialAssignment,
    terminals: &[VertexId],
    x: VertexId,
    rng: &mut R,
    tol: Tolerance,
) -> Option<TerminalPath> {
    let (fwd, back) = searches_from(g, x);
    let dist_in = |t: VertexId| back.as_ref().unwrap_or(&fwd).dist[t];
    let dist_out = |t: VertexId| fwd.dist[t];

    if let Some(vx) = v0.get(x) {
        // Candidates as (t1, t2, gradient) with x at one end.
        let mut best: Option<(VertexId, VertexId, f64)> = None;
        let mut consider = |cand: (VertexId, VertexId, f64)| {
            let better = match best {
                None => true,
                Some(b) => {
                    let floor = b.2 - DEDUP_REL * 1f64.max(b.2.abs());
                    let ceil = b.2 + DEDUP_REL * 1f64.max(b.2.abs());
                    cand.2 > ceil || (cand.2 >= floor && (cand.0, cand.1) < (b.0, b.1))
                }
            };
            if better {
                best = Some(cand);
            }
        };
        for &t in terminals {
            if t == x {
                continue;
            }
            let vt = v0.value(t);
            if dist_out(t).is_finite() {
                consider((x, t, (vx - vt) / dist_out(t)));
            }
            if dist_in(t).is_finite() {
                consider((t, x, (vt - vx) / dist_in(t)));
            }
        }
        let (t1, t2, gradient) = best?;
        let (vertices, length) = if t1 == x {
            (fwd.path(t2).expect("reachable"), dist_out(t2))
        } else {
            (path_into(&fwd, &back, t1), dist_in(t1))
        };
        return Some(TerminalPath {
            vertices,
            length,
            gradient,
        });
    }

    let reach: Vec<VertexId> = terminals
        .iter()
        .copied()
        .filter(|&t| dist_in(t).is_finite() || dist_out(t).is_finite())
        .collect();
    let star = StarInstance {
        terminals: reach
            .iter()
            .map(|&t| StarTerminal {
                value: v0.value(t),
                dist_in: dist_in(t),
                dist_out: dist_out(t),
            })
            .collect(),
    };
    let pair = star_steepest_rng(&star, rng, tol);
    let looped = reach
        .iter()
        .copied()
        .find(|&t| dist_in(t).is_finite() && dist_out(t).is_finite());
    let (t1, t2) = match (pair, looped) {
        (Some((_, _, grad)), Some(t)) if grad < 0.0 => (t, t),
        (Some((i, j, _)), _) => (reach[i], reach[j]),
        (None, Some(t)) => (t, t),
        (None, None) => return None,
    };
    let length = dist_in(t1) + dist_out(t2);
    Some(TerminalPath {
        vertices: concat(path_into(&fwd, &back, t1), fwd.path(t2).expect("reachable")),
        length,
        gradient: (v0.value(t1) - v0.value(t2)) / length,
    })
}

/// The steepest terminal path through `x`; its gradient is the pressure of
/// `x`.
pub fn vertex_steepest_path(
    g: &Graph,
    v0: &PartialAssignment,
    x: VertexId,
) -> Result<TerminalPath> {
    ensure_well_posed(g, v0)?;
    if x >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: x,
            n: g.n(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(x as u64);
    vertex_steepest_raw(g, v0, &v0.terminals(), x, &mut rng, Tolerance::default())
        .ok_or(Error::NoTerminalPath { vertex: x })
}

/// Result of [`steepest_path_traced`].
#[derive(Debug, Clone)]
pub struct SteepestSearch {
    pub path: TerminalPath,
    /// Sampling rounds used (each round shrinks the search to a
    /// higher-pressure subgraph).
    pub rounds: usize,
    /// Whether the round cap was hit and the exhaustive scan answered.
    pub exhaustive: bool,
}

pub(crate) fn round_cap(m: usize) -> usize {
    8 * (m.max(2) as f64).log2().ceil() as usize + 16
}

/// Exhaustive steepest terminal path: one Dijkstra per terminal.
pub(crate) fn exhaustive_steepest(g: &Graph, v0: &PartialAssignment) -> Option<TerminalPath> {
    let terminals = v0.terminals();
    let mut best: Option<(VertexId, VertexId, f64, Vec<VertexId>, f64)> = None;
    let mut looped: Option<TerminalPath> = None;
    for &s in &terminals {
        let fwd = dijkstra(g, s, Direction::Forward);
        for &t in &terminals {
            if t == s || !fwd.dist[t].is_finite() {
                continue;
            }
            let grad = (v0.value(s) - v0.value(t)) / fwd.dist[t];
            let take = match &best {
                None => true,
                Some(b) => grad > b.2 + DEDUP_REL * 1f64.max(b.2.abs()),
            };
            if take {
                best = Some((s, t, grad, fwd.path(t).expect("reachable"), fwd.dist[t]));
            }
        }
        if looped.is_none() {
            let back = if g.is_directed() {
                dijkstra(g, s, Direction::Backward)
            } else {
                fwd.clone()
            };
            let x = (0..g.n()).find(|&x| {
                !v0.is_terminal(x) && fwd.dist[x].is_finite() && back.dist[x].is_finite()
            });
            if let Some(x) = x {
                let mut there = fwd.path(x).expect("reachable");
                let back_path = if g.is_directed() {
                    back.path(x).expect("reachable")
                } else {
                    let mut p = fwd.path(x).expect("reachable");
                    p.reverse();
                    p
                };
                there.extend_from_slice(&back_path[1..]);
                looped = Some(TerminalPath {
                    vertices: there,
                    length: fwd.dist[x] + back.dist[x],
                    gradient: 0.0,
                });
            }
        }
    }
    match (best, looped) {
        (Some(b), Some(l)) if b.2 < 0.0 => Some(l),
        (Some((_, _, gradient, vertices, length)), _) => Some(TerminalPath {
            vertices,
            length,
            gradient,
        }),
        (None, l) => l,
    }
}

/// Core loop shared by the solvers. `g` must have no terminal-terminal
/// edges. In directed graphs, when no path has positive gradient the result
/// is only guaranteed to have non-positive gradient.
pub(crate) fn steepest_raw<R: Rng>(
    g: &Graph,
    v0: &PartialAssignment,
    rng: &mut R,
    tol: Tolerance,
) -> Option<SteepestSearch> {
    let cap = round_cap(g.m());
    let mut owned: Option<(Graph, PartialAssignment, Vec<VertexId>)> = None;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let (cur, labels) = match &owned {
            Some((h, l, _)) => (h, l),
            None => (g, v0),
        };
        let finish =
            |path: TerminalPath, owned: &Option<(Graph, PartialAssignment, Vec<VertexId>)>| {
                let path = match owned {
                    Some((_, _, map)) => path.mapped(map),
                    None => path,
                };
                Some(SteepestSearch {
                    path,
                    rounds,
                    exhaustive: false,
                })
            };
        if rounds > cap || cur.m() == 0 {
            return exhaustive_steepest(g, v0).map(|path| SteepestSearch {
                path,
                rounds,
                exhaustive: true,
            });
        }
        let terminals = labels.terminals();
        let e = cur.edges()[rng.random_range(0..cur.m())];
        let x3 = rng.random_range(0..cur.n());
        let mut best: Option<TerminalPath> = None;
        for x in [e.u, e.v, x3] {
            if let Some(p) = vertex_steepest_raw(cur, labels, &terminals, x, rng, tol) {
                if best.as_ref().is_none_or(|b| p.gradient > b.gradient) {
                    best = Some(p);
                }
            }
        }
        let Some(best) = best else {
            rounds = cap;
            continue;
        };
        let sub = high_pressure_raw(cur, labels, best.gradient.max(0.0), tol);
        if sub.graph.m() == 0 {
            return finish(best, &owned);
        }
        let map = match &owned {
            Some((_, _, map)) => sub.to_parent.iter().map(|&x| map[x]).collect(),
            None => sub.to_parent,
        };
        owned = Some((sub.graph, sub.labels, map));
    }
}

fn check_steepest_input(g: &Graph, v0: &PartialAssignment) -> Result<()> {
    ensure_well_posed(g, v0)?;
    if v0.is_complete() {
        return Err(Error::NoFreeVertex);
    }
    if let Some(e) = g
        .edges()
        .iter()
        .find(|e| v0.is_terminal(e.u) && v0.is_terminal(e.v))
    {
        return Err(Error::TerminalEdge { u: e.u, v: e.v });
    }
    Ok(())
}

/// A free terminal path of maximum gradient, with search statistics.
pub fn steepest_path_traced(
    g: &Graph,
    v0: &PartialAssignment,
    seed: u64,
) -> Result<SteepestSearch> {
    check_steepest_input(g, v0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    steepest_raw(g, v0, &mut rng, Tolerance::default()).ok_or(Error::NoFreeVertex)
}

/// A free terminal path of maximum gradient.
///
/// Requires a well-posed instance with at least one free vertex and no edge
/// between two terminals.
pub fn steepest_path(g: &Graph, v0: &PartialAssignment, seed: u64) -> Result<TerminalPath> {
    steepest_path_traced(g, v0, seed).map(|s| s.path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_two_terminals() {
        let inst = StarInstance::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(star_steepest_path(&inst, 1).unwrap(), (1, 0));
        assert_eq!(inst.gradient(1, 0), 0.5);
    }

    #[test]
    fn star_constant_values() {
        let inst = StarInstance::new([(2.0, 1.0), (2.0, 3.0), (2.0, 0.5)]).unwrap();
        let (a, b) = star_steepest_path(&inst, 7).unwrap();
        assert_eq!(inst.gradient(a, b), 0.0);
        assert_eq!((a, b), (0, 1));
    }

    #[test]
    fn star_rejects_degenerate() {
        assert!(StarInstance::new([(0.0, 0.0)]).is_err());
        let one = StarInstance::new([(0.0, 1.0)]).unwrap();
        assert!(star_steepest_path(&one, 0).is_err());
    }

    #[test]
    fn vertex_path_examples() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let v0 = PartialAssignment::from_labels(3, [(0, 0.0), (2, 2.0)]).unwrap();
        let p = vertex_steepest_path(&g, &v0, 1).unwrap();
        assert_eq!(p.vertices, vec![2, 1, 0]);
        assert_eq!(p.gradient, 1.0);

        let g = Graph::undirected(2, [(0, 1, 2.0)]).unwrap();
        let v0 = PartialAssignment::from_labels(2, [(0, 0.0), (1, 1.0)]).unwrap();
        let p = vertex_steepest_path(&g, &v0, 0).unwrap();
        assert_eq!(p.vertices, vec![1, 0]);
        assert_eq!(p.gradient, 0.5);
    }

    #[test]
    fn single_free_vertex() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 3.0)]).unwrap();
        let v0 = PartialAssignment::from_labels(3, [(0, 4.0), (2, 0.0)]).unwrap();
        let p = steepest_path(&g, &v0, 3).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
        assert_eq!(p.gradient, 1.0);
    }

    #[test]
    fn constant_labels_give_zero() {
        let g = Graph::undirected(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let v0 = PartialAssignment::from_labels(4, [(0, 5.0), (3, 5.0)]).unwrap();
        assert_eq!(steepest_path(&g, &v0, 0).unwrap().gradient, 0.0);
    }

    #[test]
    fn rejects_terminal_edges() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let v0 = PartialAssignment::from_labels(3, [(0, 0.0), (1, 1.0)]).unwrap();
        assert!(matches!(
            steepest_path(&g, &v0, 0),
            Err(Error::TerminalEdge { .. })
        ));
    }

    #[test]
    fn single_terminal_component_loops_back() {
        let g = Graph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let v0 = PartialAssignment::from_labels(2, [(0, 3.0)]).unwrap();
        let p = steepest_path(&g, &v0, 0).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 0]);
        assert_eq!(p.gradient, 0.0);
        assert_eq!(p.length, 2.0);
    }
}
