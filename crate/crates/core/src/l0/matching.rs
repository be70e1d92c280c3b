//! Maximum bipartite matching (Hopcroft-Karp) and König vertex covers.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pair_left: Vec<Option<usize>>,
    pub pair_right: Vec<Option<usize>>,
    pub size: usize,
}

const UNSEEN: usize = usize::MAX;

/// Maximum matching of the bipartite graph with `adj[l]` listing the right
/// neighbours of left vertex `l`.
pub fn hopcroft_karp(n_right: usize, adj: &[Vec<usize>]) -> Matching {
    let n_left = adj.len();
    let mut m = Matching {
        pair_left: vec![None; n_left],
        pair_right: vec![None; n_right],
        size: 0,
    };
    let mut layer = vec![UNSEEN; n_left];
    let mut next_edge = vec![0usize; n_left];
    loop {
        // Layer the free left vertices and everything alternating from them.
        let mut queue = VecDeque::new();
        for (l, depth) in layer.iter_mut().enumerate() {
            if m.pair_left[l].is_none() {
                *depth = 0;
                queue.push_back(l);
            } else {
                *depth = UNSEEN;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match m.pair_right[r] {
                    None => found = true,
                    Some(l2) if layer[l2] == UNSEEN => {
                        layer[l2] = layer[l] + 1;
                        queue.push_back(l2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return m;
        }
        next_edge.iter_mut().for_each(|e| *e = 0);
        for l in 0..n_left {
            if m.pair_left[l].is_none() && augment(l, adj, &mut m, &mut layer, &mut next_edge) {
                m.size += 1;
            }
        }
    }
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    m: &mut Matching,
    layer: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[l] < adj[l].len() {
        let r = adj[l][next_edge[l]];
        next_edge[l] += 1;
        let ok = match m.pair_right[r] {
            None => true,
            Some(l2) => layer[l2] == layer[l] + 1 && augment(l2, adj, m, layer, next_edge),
        };
        if ok {
            m.pair_left[l] = Some(r);
            m.pair_right[r] = Some(l);
            return true;
        }
    }
    layer[l] = UNSEEN;
    false
}

/// Minimum vertex cover from a maximum matching: with `Z` the vertices on
/// alternating paths from unmatched left vertices, the cover is
/// `(L \ Z) ∪ (R ∩ Z)`. Returns the covered left and right vertices.
pub fn konig_cover(n_right: usize, adj: &[Vec<usize>], m: &Matching) -> (Vec<usize>, Vec<usize>) {
    let n_left = adj.len();
    let mut left_seen = vec![false; n_left];
    let mut right_seen = vec![false; n_right];
    let mut stack: Vec<usize> = (0..n_left).filter(|&l| m.pair_left[l].is_none()).collect();
    for &l in &stack {
        left_seen[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in &adj[l] {
            if right_seen[r] || m.pair_left[l] == Some(r) {
                continue;
            }
            right_seen[r] = true;
            if let Some(l2) = m.pair_right[r] {
                if !left_seen[l2] {
                    left_seen[l2] = true;
                    stack.push(l2);
                }
            }
        }
    }
    (
        (0..n_left).filter(|&l| !left_seen[l]).collect(),
        (0..n_right).filter(|&r| right_seen[r]).collect(),
    )
}
