//! Dijkstra's algorithm with a binary heap and lazy deletion.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::{Graph, VertexId};

/// Which adjacency lists a search follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Along edge orientation: distances *from* the sources.
    Forward,
    /// Against edge orientation: distances *to* the sources.
    Backward,
}

#[derive(Clone, Copy)]
struct Entry {
    key: f64,
    vertex: VertexId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Reversed so that `BinaryHeap` pops the smallest key, then the smallest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Multi-source search where crossing an edge of length `len` adds
/// `slope * len` to the key. Each seed `(s, k)` starts at key `k`.
///
/// Returns the final keys (`+inf` where unreached) and the parent of every
/// vertex whose key came from a neighbour. Requires `slope >= 0`.
pub(crate) fn sloped_search(
    g: &Graph,
    dir: Direction,
    seeds: &[(VertexId, f64)],
    slope: f64,
) -> (Vec<f64>, Vec<Option<VertexId>>) {
    debug_assert!(slope >= 0.0);
    let n = g.n();
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::with_capacity(seeds.len().max(16));
    for &(s, k) in seeds {
        if k < key[s] {
            key[s] = k;
            heap.push(Entry { key: k, vertex: s });
        }
    }
    while let Some(Entry { key: k, vertex: x }) = heap.pop() {
        if done[x] || k > key[x] {
            continue;
        }
        done[x] = true;
        for a in g.arcs(x, dir) {
            let y = a.to;
            if done[y] {
                continue;
            }
            let nk = k + slope * a.len;
            if nk < key[y] {
                key[y] = nk;
                parent[y] = Some(x);
                heap.push(Entry { key: nk, vertex: y });
            }
        }
    }
    (key, parent)
}

/// Single-source shortest paths.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: VertexId,
    pub direction: Direction,
    /// `dist[x]` is the distance from the source to `x` (forward) or from
    /// `x` to the source (backward); `+inf` if there is no path.
    pub dist: Vec<f64>,
    /// Next vertex on a shortest path back toward the source.
    pub parent: Vec<Option<VertexId>>,
}

impl ShortestPaths {
    /// A shortest path between the source and `x`, listed along edge
    /// orientation: `source..x` for forward searches, `x..source` for
    /// backward ones.
    pub fn path(&self, x: VertexId) -> Option<Vec<VertexId>> {
        if !self.dist[x].is_finite() {
            return None;
        }
        let mut out = vec![x];
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        if self.direction == Direction::Forward {
            out.reverse();
        }
        Some(out)
    }
}

pub fn dijkstra(g: &Graph, source: VertexId, direction: Direction) -> ShortestPaths {
    let (dist, parent) = sloped_search(g, direction, &[(source, 0.0)], 1.0);
    ShortestPaths {
        source,
        direction,
        dist,
        parent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_detour() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        let sp = dijkstra(&g, 0, Direction::Forward);
        assert_eq!(sp.dist, vec![0.0, 1.0, 2.0]);
        assert_eq!(sp.path(2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn directed_orientation() {
        let g = Graph::directed(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let fwd = dijkstra(&g, 0, Direction::Forward);
        assert_eq!(fwd.dist, vec![0.0, 1.0, 3.0]);
        let back = dijkstra(&g, 2, Direction::Backward);
        assert_eq!(back.dist, vec![3.0, 2.0, 0.0]);
        assert_eq!(back.path(0).unwrap(), vec![0, 1, 2]);
        let none = dijkstra(&g, 2, Direction::Forward);
        assert!(none.path(0).is_none());
    }

    #[test]
    fn sloped_seeds() {
        let g = Graph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let (key, parent) = sloped_search(&g, Direction::Forward, &[(0, 0.0), (2, 1.0)], 1.0);
        assert_eq!(key, vec![0.0, 1.0, 1.0]);
        assert_eq!(parent, vec![None, Some(0), None]);
    }
}
