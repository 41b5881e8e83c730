//! Exact offline optimum of a b-matching instance by max flow (Dinic).

use std::collections::VecDeque;

use super::SimInstance;

/// Largest offline side the oracle accepts.
pub const FLOW_ORACLE_CAP: usize = 50;

struct Edge {
    to: usize,
    cap: u32,
}

struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); nodes], level: vec![0; nodes], next: vec![0; nodes] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u32) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: u32) -> u32 {
        if v == t {
            return pushed;
        }
        while self.next[v] < self.adj[v].len() {
            let e = self.adj[v][self.next[v]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.next[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let f = self.dfs(s, t, u32::MAX);
                if f == 0 {
                    break;
                }
                total += u64::from(f);
            }
        }
        total
    }
}

/// Maximum number of queries that can be assigned offline; `None` above
/// [`FLOW_ORACLE_CAP`] offline vertices.
pub fn offline_optimum(instance: &SimInstance) -> Option<u64> {
    let n = instance.n_offline();
    if n > FLOW_ORACLE_CAP {
        return None;
    }
    let m = instance.n_online();
    let (source, sink) = (n + m, n + m + 1);
    let mut net = Network::new(n + m + 2);
    for u in 0..n {
        net.add_edge(source, u, instance.capacity());
    }
    for (q, nbrs) in instance.arrivals().iter().enumerate() {
        for &u in nbrs {
            net.add_edge(u, n + q, 1);
        }
        net.add_edge(n + q, sink, 1);
    }
    Some(net.max_flow(source, sink))
}
