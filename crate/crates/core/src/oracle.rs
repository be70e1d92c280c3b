//! Slow reference implementations for cross-checking the solvers.
//!
//! Everything here works from all-pairs distances or exhaustive
//! enumeration and shares no search code with the rest of the crate.
//! Each function enforces a size limit and fails beyond it.

use crate::error::{Error, Result};
use crate::graph::{Graph, PartialAssignment, TerminalPath, VertexId};
use crate::l0::Digraph;

const NO_NEXT: usize = usize::MAX;

/// All-pairs shortest distances with successor pointers for path recovery.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<f64>,
    next: Vec<usize>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// A shortest path from `i` to `j`, if one exists.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if !self.get(i, j).is_finite() {
            return None;
        }
        let mut out = vec![i];
        let mut cur = i;
        while cur != j {
            cur = self.next[cur * self.n + j];
            out.push(cur);
        }
        Some(out)
    }
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::SizeGuard { what, size, limit })
    } else {
        Ok(())
    }
}

fn floyd_warshall(n: usize, directed: bool, edges: &[(usize, usize, f64)]) -> DistanceMatrix {
    let mut dist = vec![f64::INFINITY; n * n];
    let mut next = vec![NO_NEXT; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
        next[i * n + i] = i;
    }
    for &(u, v, len) in edges {
        let mut relax = |a: usize, b: usize| {
            if len < dist[a * n + b] {
                dist[a * n + b] = len;
                next[a * n + b] = b;
            }
        };
        relax(u, v);
        if !directed {
            relax(v, u);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k * n + j];
                if through < dist[i * n + j] {
                    dist[i * n + j] = through;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }
    DistanceMatrix { n, dist, next }
}

fn edge_list(g: &Graph) -> Vec<(usize, usize, f64)> {
    g.edges().iter().map(|e| (e.u, e.v, e.len)).collect()
}

pub fn apsp_floyd_warshall(g: &Graph) -> Result<DistanceMatrix> {
    guard("graph", g.n(), 500)?;
    Ok(floyd_warshall(g.n(), g.is_directed(), &edge_list(g)))
}

/// Distances with every edge between two terminals of `v` removed.
fn free_distances(g: &Graph, v: &[Option<f64>]) -> DistanceMatrix {
    let edges: Vec<_> = edge_list(g)
        .into_iter()
        .filter(|&(a, b, _)| v[a].is_none() || v[b].is_none())
        .collect();
    floyd_warshall(g.n(), g.is_directed(), &edges)
}

fn length_of(g: &Graph, path: &[usize]) -> f64 {
    path.windows(2)
        .map(|w| {
            g.edges()
                .iter()
                .filter(|e| {
                    (e.u == w[0] && e.v == w[1]) || (!g.is_directed() && e.u == w[1] && e.v == w[0])
                })
                .map(|e| e.len)
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

fn steepest_from(g: &Graph, v: &[Option<f64>]) -> Result<TerminalPath> {
    if v.iter().all(Option::is_some) {
        return Err(Error::NoFreeVertex);
    }
    let d = free_distances(g, v);
    let n = g.n();
    let terminals: Vec<usize> = (0..n).filter(|&x| v[x].is_some()).collect();
    let mut best: Option<(usize, usize, f64)> = None;
    for &s in &terminals {
        for &t in &terminals {
            if s == t || !d.get(s, t).is_finite() {
                continue;
            }
            let grad = (v[s].unwrap() - v[t].unwrap()) / d.get(s, t);
            if best.is_none_or(|b| grad > b.2 + 1e-12 * b.2.abs().max(1.0)) {
                best = Some((s, t, grad));
            }
        }
    }
    // A free vertex reachable from and returning to one terminal gives a
    // terminal path of gradient zero.
    let looped = terminals.iter().find_map(|&t| {
        (0..n)
            .find(|&x| v[x].is_none() && d.get(t, x).is_finite() && d.get(x, t).is_finite())
            .map(|x| (t, x))
    });
    let best = best.filter(|b| b.2 >= 0.0 || looped.is_none());
    match (best, looped) {
        (Some(b), _) => {
            let vertices = d.path(b.0, b.1).expect("finite distance");
            Ok(TerminalPath {
                vertices,
                length: d.get(b.0, b.1),
                gradient: b.2,
            })
        }
        (_, Some((t, x))) => {
            let mut vertices = d.path(t, x).expect("finite distance");
            vertices.extend_from_slice(&d.path(x, t).expect("finite distance")[1..]);
            Ok(TerminalPath {
                vertices,
                length: d.get(t, x) + d.get(x, t),
                gradient: 0.0,
            })
        }
        (None, None) => Err(Error::NoTerminalPath {
            vertex: (0..n).find(|&x| v[x].is_none()).unwrap_or(0),
        }),
    }
}

/// Steepest free terminal path by exhaustive search over terminal pairs.
/// Ties within a relative `1e-12` go to the smallest `(start, end)` pair.
pub fn brute_steepest_path(g: &Graph, v0: &PartialAssignment) -> Result<TerminalPath> {
    guard("graph", g.n(), 200)?;
    steepest_from(g, v0.values())
}

/// Lex-minimizer by repeatedly fixing the exhaustively found steepest path.
pub fn brute_lex_min(g: &Graph, v0: &PartialAssignment) -> Result<Vec<f64>> {
    guard("graph", g.n(), 60)?;
    if g.is_directed() {
        return Err(Error::RequiresUndirected);
    }
    let mut v: Vec<Option<f64>> = v0.values().to_vec();
    while v.iter().any(Option::is_none) {
        let p = steepest_from(g, &v)?;
        if p.gradient <= 0.0 {
            // Every remaining free vertex sees a single terminal value.
            let d = free_distances(g, &v);
            let snapshot = v.clone();
            for x in 0..g.n() {
                if snapshot[x].is_none() {
                    let t = (0..g.n())
                        .find(|&t| snapshot[t].is_some() && d.get(x, t).is_finite())
                        .ok_or(Error::NoTerminalPath { vertex: x })?;
                    v[x] = snapshot[t];
                }
            }
            break;
        }
        let start = v[p.vertices[0]].unwrap();
        let end = v[*p.vertices.last().unwrap()].unwrap();
        let total = length_of(g, &p.vertices);
        let mut walked = 0.0;
        for i in 1..p.vertices.len() - 1 {
            walked += length_of(g, &p.vertices[i - 1..=i]);
            let x = p.vertices[i];
            if v[x].is_none() {
                v[x] = Some(start + (end - start) * walked / total);
            }
        }
    }
    Ok(v.into_iter().map(Option::unwrap).collect())
}

/// Minimum vertex cover by enumerating subsets in order of size.
pub fn brute_min_vc(dag: &Digraph) -> Result<Vec<usize>> {
    let n = dag.n();
    guard("digraph", n, 20)?;
    let covers = |mask: u32| {
        dag.arcs()
            .iter()
            .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
    };
    for size in 0..=n as u32 {
        if size == 0 {
            if covers(0) {
                return Ok(Vec::new());
            }
            continue;
        }
        // Gosper's hack: all n-bit masks with `size` bits set, ascending.
        let mut mask: u32 = (1 << size) - 1;
        while mask < 1 << n {
            if covers(mask) {
                return Ok((0..n).filter(|&i| mask >> i & 1 == 1).collect());
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    unreachable!("the full vertex set is a cover")
}

/// Best Lipschitz constant reachable by dropping at most `k` labels, by
/// trying every subset. Returns the constant and the first optimal subset
/// (smallest size, then lexicographic).
pub fn brute_outlier(g: &Graph, v0: &PartialAssignment, k: usize) -> Result<(f64, Vec<VertexId>)> {
    let terminals = v0.terminals();
    guard("terminal set", terminals.len(), 14)?;
    guard("budget", k, 4)?;
    guard("graph", g.n(), 500)?;
    let d = apsp_floyd_warshall(g)?;
    let t = terminals.len();
    let residual = |drop: u32| {
        let mut worst: f64 = 0.0;
        for i in 0..t {
            for j in 0..t {
                if i == j || drop >> i & 1 == 1 || drop >> j & 1 == 1 {
                    continue;
                }
                let (s, r) = (terminals[i], terminals[j]);
                if d.get(s, r).is_finite() {
                    worst = worst
                        .max((v0.values()[s].unwrap() - v0.values()[r].unwrap()) / d.get(s, r));
                }
            }
        }
        worst
    };
    let mut best = (residual(0), 0u32);
    for size in 1..=k.min(t) as u32 {
        let mut mask: u32 = (1 << size) - 1;
        while mask < 1 << t {
            let r = residual(mask);
            if r < best.0 {
                best = (r, mask);
            }
            let c = mask & mask.wrapping_neg();
            let rr = mask + c;
            mask = (((rr ^ mask) >> 2) / c) | rr;
        }
    }
    let subset = (0..t)
        .filter(|&i| best.1 >> i & 1 == 1)
        .map(|i| terminals[i])
        .collect();
    Ok((best.0, subset))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PLaplacian {
    pub values: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
}

/// Sign of `sum_y w_y |z - v_y|^(p-1) sign(z - v_y)` with
/// `w_y = len_y^(-p)`, evaluated in log space so large `p` cannot underflow.
fn derivative_sign(z: f64, nbrs: &[(f64, f64)], p: f64) -> f64 {
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(nbrs.len());
    for &(val, len) in nbrs {
        let diff = z - val;
        if diff != 0.0 {
            terms.push((diff.signum(), (p - 1.0) * diff.abs().ln() - p * len.ln()));
        }
    }
    let top = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    terms.iter().map(|&(s, e)| s * (e - top).exp()).sum::<f64>()
}

/// Minimizes `sum_e len_e^(-p) |v(x) - v(y)|^p` over the free vertices by
/// cyclic coordinate descent; each one-dimensional step bisects on the sign
/// of the derivative. Stops when no value moves by more than `tol` in a
/// sweep, or after `iters` sweeps with `converged = false`.
pub fn p_laplacian_min(
    g: &Graph,
    v0: &PartialAssignment,
    p: u32,
    iters: usize,
    tol: f64,
) -> Result<PLaplacian> {
    guard("graph", g.n(), 30)?;
    if g.is_directed() {
        return Err(Error::RequiresUndirected);
    }
    if !(2..=128).contains(&p) || p % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "exponent must be even and in [2, 128], got {p}"
        )));
    }
    let n = g.n();
    let labels: Vec<f64> = v0.values().iter().flatten().copied().collect();
    if labels.is_empty() {
        return Err(Error::InvalidArgument("no labels".into()));
    }
    let mean = labels.iter().sum::<f64>() / labels.len() as f64;
    let mut v: Vec<f64> = v0.values().iter().map(|x| x.unwrap_or(mean)).collect();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push((e.v, e.len));
        adj[e.v].push((e.u, e.len));
    }
    let pf = p as f64;
    let mut nbrs = Vec::new();
    for sweep in 1..=iters {
        let mut moved: f64 = 0.0;
        for x in 0..n {
            if v0.is_terminal(x) || adj[x].is_empty() {
                continue;
            }
            nbrs.clear();
            nbrs.extend(adj[x].iter().map(|&(y, len)| (v[y], len)));
            let mut lo = nbrs.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
            let mut hi = nbrs.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let s = derivative_sign(mid, &nbrs, pf);
                if s > 0.0 {
                    hi = mid;
                } else if s < 0.0 {
                    lo = mid;
                } else {
                    lo = mid;
                    hi = mid;
                }
            }
            let z = 0.5 * (lo + hi);
            moved = moved.max((z - v[x]).abs());
            v[x] = z;
        }
        if moved < tol {
            return Ok(PLaplacian {
                values: v,
                converged: true,
                sweeps: sweep,
            });
        }
    }
    Ok(PLaplacian {
        values: v,
        converged: false,
        sweeps: iters,
    })
}

/// Exhaustive search over completions whose free values lie on `grid`.
/// Returns the lexicographically smallest sorted gradient magnitudes
/// (positive parts for directed graphs) and a completion attaining them.
pub fn grid_lex_min(
    g: &Graph,
    v0: &PartialAssignment,
    grid: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let free: Vec<usize> = v0.free_vertices();
    let combos = (grid.len() as f64).powi(free.len() as i32);
    guard("grid search", combos as usize, 5_000_000)?;
    let mut v: Vec<f64> = v0.values().iter().map(|x| x.unwrap_or(0.0)).collect();
    let profile = |v: &[f64]| {
        let mut a: Vec<f64> = g
            .edges()
            .iter()
            .map(|e| {
                let grad = (v[e.u] - v[e.v]) / e.len;
                if g.is_directed() {
                    grad.max(0.0)
                } else {
                    grad.abs()
                }
            })
            .collect();
        a.sort_by(|x, y| y.total_cmp(x));
        a
    };
    let mut best: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut idx = vec![0usize; free.len()];
    loop {
        for (i, &x) in free.iter().enumerate() {
            v[x] = grid[idx[i]];
        }
        let prof = profile(&v);
        let better = match &best {
            None => true,
            Some((b, _)) => prof
                .iter()
                .zip(b)
                .find(|(x, y)| x != y)
                .is_some_and(|(x, y)| x < y),
        };
        if better {
            best = Some((prof, v.clone()));
        }
        // Odometer increment.
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < grid.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
    }
    Ok(best.expect("at least one completion"))
}
