//! Seeded synthetic instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, PartialAssignment};

#[derive(Debug, Clone)]
pub struct SynthInstance {
    pub graph: Graph,
    pub labels: PartialAssignment,
    /// Per-vertex target the labels were drawn from, when there is one.
    pub truth: Option<Vec<f64>>,
    /// Sample coordinates, one row per vertex (empty for abstract graphs).
    pub points: Vec<Vec<f64>>,
}

/// Two Gaussian clusters on the line, centred at 0 and 4 with unit standard
/// deviation, `per_cluster` samples each. The graph is complete with edge
/// length `exp(|x - y|^2 / (2 sigma^2))`; pairs whose length overflows are
/// left unconnected. The sample nearest 0 is labeled -1 and the one nearest
/// 4 is labeled +1. The truth is the cluster sign.
pub fn gauss1d(per_cluster: usize, sigma: f64, seed: u64) -> Result<SynthInstance> {
    if per_cluster == 0 {
        return Err(Error::InvalidArgument(
            "need at least one sample per cluster".into(),
        ));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bandwidth must be positive, got {sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let n = 2 * per_cluster;
    let mut xs = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    for (centre, sign) in [(0.0, -1.0), (4.0, 1.0)] {
        for _ in 0..per_cluster {
            xs.push(centre + unit.sample(&mut rng));
            truth.push(sign);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = xs[i] - xs[j];
            let len = (d * d / (2.0 * sigma * sigma)).exp();
            if len.is_finite() {
                edges.push(Edge { u: i, v: j, len });
            }
        }
    }
    let nearest = |c: f64| {
        (0..n)
            .min_by(|&a, &b| (xs[a] - c).abs().total_cmp(&(xs[b] - c).abs()))
            .expect("non-empty")
    };
    let (lo, hi) = (nearest(0.0), nearest(4.0));
    let labels = PartialAssignment::from_labels(n, [(lo, -1.0), (hi, 1.0)])?;
    Ok(SynthInstance {
        graph: Graph::from_valid_edges(n, false, edges),
        labels,
        truth: Some(truth),
        points: xs.into_iter().map(|x| vec![x]).collect(),
    })
}

/// `n` uniform samples in the unit cube `[0,1]^dim`, joined to their `k`
/// nearest neighbours (symmetrized) by edges of Euclidean length. A uniform
/// random subset of `labeled` samples is labeled with its first coordinate,
/// which is also the truth.
pub fn cube_knn(
    n: usize,
    dim: usize,
    k: usize,
    labeled: usize,
    seed: u64,
) -> Result<SynthInstance> {
    if dim == 0 || k == 0 || k >= n || labeled == 0 || labeled > n {
        return Err(Error::InvalidArgument(format!(
            "cube-knn needs dim >= 1, 1 <= k < n and 1 <= labels <= n (n={n}, dim={dim}, k={k}, labels={labeled})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let sq = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let mut pairs: Vec<(usize, usize, f64)> = Vec::with_capacity(n * k);
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        cand.clear();
        cand.extend(
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (sq(&points[i], &points[j]), j)),
        );
        cand.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(d2, j) in &cand[..k] {
            if d2 > 0.0 {
                pairs.push((i.min(j), i.max(j), d2.sqrt()));
            }
        }
    }
    pairs.sort_by_key(|&(u, v, _)| (u, v));
    pairs.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    let edges = pairs
        .into_iter()
        .map(|(u, v, len)| Edge { u, v, len })
        .collect();
    let chosen = sample(&mut rng, n, labeled).into_vec();
    let labels = PartialAssignment::from_labels(n, chosen.iter().map(|&i| (i, points[i][0])))?;
    Ok(SynthInstance {
        graph: Graph::from_valid_edges(n, false, edges),
        labels,
        truth: Some(points.iter().map(|p| p[0]).collect()),
        points,
    })
}

/// A random `degree`-regular graph with unit lengths, built as the union of
/// `degree / 2` uniformly random Hamiltonian cycles (a cycle that would
/// repeat an edge is redrawn). `labeled` uniform random vertices get
/// uniform values in `[0, 1)`.
pub fn random_regular(n: usize, degree: usize, labeled: usize, seed: u64) -> Result<SynthInstance> {
    if degree == 0 || degree % 2 == 1 || n < degree + 2 || labeled == 0 || labeled > n {
        return Err(Error::InvalidArgument(format!(
            "random-regular needs an even degree >= 2, n >= degree + 2 and 1 <= labels <= n (n={n}, degree={degree}, labels={labeled})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::with_capacity(n * degree / 2);
    let mut edges = Vec::with_capacity(n * degree / 2);
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    for _ in 0..degree / 2 {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > 1000 {
                return Err(Error::InvalidArgument(
                    "could not draw a cycle avoiding repeated edges".into(),
                ));
            }
            let order = sample(&mut rng, n, n).into_vec();
            let cycle: Vec<(usize, usize)> =
                (0..n).map(|i| key(order[i], order[(i + 1) % n])).collect();
            let mut fresh = std::collections::HashSet::with_capacity(n);
            if cycle.iter().all(|e| !seen.contains(e) && fresh.insert(*e)) {
                for (u, v) in cycle {
                    seen.insert((u, v));
                    edges.push(Edge { u, v, len: 1.0 });
                }
                break;
            }
        }
    }
    let chosen = sample(&mut rng, n, labeled).into_vec();
    let labels =
        PartialAssignment::from_labels(n, chosen.iter().map(|&i| (i, rng.random::<f64>())))?;
    Ok(SynthInstance {
        graph: Graph::from_valid_edges(n, false, edges),
        labels,
        truth: None,
        points: Vec::new(),
    })
}
