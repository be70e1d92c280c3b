//! Dinic's maximum flow on integer capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
struct FlowArc {
    to: usize,
    cap: u64,
}

/// A flow network; arcs are stored in pairs so that `id ^ 1` is the
/// reverse residual arc.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    source: usize,
    sink: usize,
    arcs: Vec<FlowArc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            source,
            sink,
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(FlowArc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(FlowArc { to: from, cap: 0 });
    }

    fn levels(&self) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(x) = queue.pop_front() {
            for &id in &self.adj[x] {
                let a = self.arcs[id];
                if a.cap > 0 && level[a.to] == usize::MAX {
                    level[a.to] = level[x] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        level
    }

    fn push(&mut self, x: usize, limit: u64, level: &[usize], next: &mut [usize]) -> u64 {
        if x == self.sink {
            return limit;
        }
        while next[x] < self.adj[x].len() {
            let id = self.adj[x][next[x]];
            let a = self.arcs[id];
            if a.cap > 0 && level[a.to] == level[x] + 1 {
                let pushed = self.push(a.to, limit.min(a.cap), level, next);
                if pushed > 0 {
                    self.arcs[id].cap -= pushed;
                    self.arcs[id ^ 1].cap += pushed;
                    return pushed;
                }
            }
            next[x] += 1;
        }
        0
    }

    /// Saturates the network and returns the flow value.
    pub fn max_flow(&mut self) -> u64 {
        let mut total = 0;
        loop {
            let level = self.levels();
            if level[self.sink] == usize::MAX {
                return total;
            }
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.push(self.source, u64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    /// After [`max_flow`](Self::max_flow): the nodes on the source side of a
    /// minimum cut (residual reachability from the source).
    pub fn source_side(&self) -> Vec<bool> {
        self.levels().iter().map(|&l| l != usize::MAX).collect()
    }
}
