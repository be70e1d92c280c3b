//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use lexgraph::l0::Digraph;
use lexgraph::{check_well_posed, Graph, PartialAssignment};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected undirected graph: a random spanning tree plus extra edges, with
/// lengths in `[0.5, 2)` and `terminals` labels in `[0, 1)`.
pub fn undirected_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    terminals: usize,
) -> (Graph, PartialAssignment) {
    let mut edges = Vec::with_capacity(m);
    for x in 1..n {
        edges.push((rng.random_range(0..x), x, rng.random_range(0.5..2.0)));
    }
    let mut tries = 0;
    while edges.len() < m && tries < 20 * m {
        tries += 1;
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v
            && !edges
                .iter()
                .any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u))
        {
            edges.push((u, v, rng.random_range(0.5..2.0)));
        }
    }
    let g = Graph::undirected(n, edges).unwrap();
    let chosen = sample(rng, n, terminals).into_vec();
    let labels: Vec<(usize, f64)> = chosen
        .into_iter()
        .map(|x| (x, rng.random::<f64>()))
        .collect();
    (g, PartialAssignment::from_labels(n, labels).unwrap())
}

/// The instance family used by the solver acceptance checks: n <= 30,
/// m <= 90, between 2 and 8 terminals.
pub fn small_instance(seed: u64) -> (Graph, PartialAssignment) {
    let mut r = rng(seed);
    let n = r.random_range(4..=30);
    let m = r.random_range(n - 1..=(3 * n).min(90));
    let t = r.random_range(2..=8usize.min(n));
    undirected_instance(&mut r, n, m, t)
}

/// Undirected instance with up to `max_terminals` terminals, for the
/// outlier checks.
pub fn outlier_instance(seed: u64, max_terminals: usize) -> (Graph, PartialAssignment) {
    let mut r = rng(seed);
    let n = r.random_range(8..=30);
    let m = r.random_range(n - 1..=(3 * n).min(90));
    let t = r.random_range(3..=max_terminals.min(n));
    undirected_instance(&mut r, n, m, t)
}

/// Well-posed directed instance: random orientations (some edges both
/// ways), redrawn until every free vertex lies between two terminals.
pub fn directed_instance(seed: u64) -> (Graph, PartialAssignment) {
    let mut r = rng(seed);
    loop {
        let n = r.random_range(4..=20);
        let m = r.random_range(n..=3 * n);
        let t = r.random_range(2..=6usize.min(n));
        let mut edges = Vec::new();
        for _ in 0..m {
            let (u, v) = (r.random_range(0..n), r.random_range(0..n));
            if u == v {
                continue;
            }
            let len = r.random_range(0.5..2.0);
            edges.push((u, v, len));
            if r.random_bool(0.2) {
                edges.push((v, u, len));
            }
        }
        let g = Graph::directed(n, edges).unwrap();
        let chosen = sample(&mut r, n, t).into_vec();
        let labels: Vec<(usize, f64)> =
            chosen.into_iter().map(|x| (x, r.random::<f64>())).collect();
        let v0 = PartialAssignment::from_labels(n, labels).unwrap();
        if g.m() > 0 && check_well_posed(&g, &v0).is_ok() {
            return (g, v0);
        }
    }
}

/// Random DAG on `n` vertices: arcs go forward in a hidden random order.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let order = sample(rng, n, n).into_vec();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    Digraph::new(n, arcs).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Labels of `v0` mapped through `f`.
pub fn map_labels(
    v0: &PartialAssignment,
    mut f: impl FnMut(usize, f64) -> f64,
) -> PartialAssignment {
    let values = (0..v0.len())
        .map(|x| v0.get(x).map(|val| f(x, val)))
        .collect();
    PartialAssignment::new(values).unwrap()
}
