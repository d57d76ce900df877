//! Integral max-flow (Dinic) and feasible flows with lower bounds.
//!
//! A network with arc bounds `lower <= x <= upper` is reduced to a plain
//! max-flow instance in the usual way: each arc keeps capacity
//! `upper - lower`, the forced `lower` units become supply at the head and
//! demand at the tail, uncapacitated arcs between sink and source (both
//! directions) turn the s-t flow into a circulation, and a super
//! source/sink pair must be able to route all supplies. A feasible flow exists iff that max flow
//! saturates every super-source arc.

use std::collections::VecDeque;

pub type ArcId = usize;

#[derive(Debug, Clone)]
struct Residual {
    to: usize,
    cap: i64,
}

/// Residual graph with paired forward/backward arcs (`id ^ 1` is the twin).
#[derive(Debug, Clone)]
struct Dinic {
    arcs: Vec<Residual>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            next: vec![0; nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Residual { to, cap });
        self.out[from].push(id);
        self.arcs.push(Residual { to: from, cap: 0 });
        self.out[to].push(id + 1);
        id
    }

    /// Units pushed through the forward arc `id`.
    fn flow_on(&self, id: usize) -> i64 {
        self.arcs[id + 1].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.out[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.next[u] < self.out[u].len() {
            let id = self.out[u][self.next[u]];
            let Residual { to, cap } = self.arcs[id];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.arcs[id].cap -= pushed;
                    self.arcs[id ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        if s == t {
            return 0;
        }
        let mut total = 0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub lower: i64,
    pub upper: i64,
}

/// A directed network whose arcs carry integer lower and upper bounds.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    nodes: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            nodes,
            arcs: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Panics if `lower > upper`, `lower < 0` or a node is out of range.
    pub fn add_arc(&mut self, from: usize, to: usize, lower: i64, upper: i64) -> ArcId {
        assert!(from < self.nodes && to < self.nodes, "arc endpoint out of range");
        assert!(0 <= lower && lower <= upper, "arc bounds must satisfy 0 <= lower <= upper");
        self.arcs.push(Arc { from, to, lower, upper });
        self.arcs.len() - 1
    }

    /// Maximum `source -> sink` flow ignoring lower bounds. Returns the value
    /// and the flow on every arc.
    pub fn max_flow(&self, source: usize, sink: usize) -> (i64, Vec<i64>) {
        let mut dinic = Dinic::new(self.nodes);
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|a| dinic.add_arc(a.from, a.to, a.upper))
            .collect();
        let value = dinic.max_flow(source, sink);
        (value, ids.iter().map(|&id| dinic.flow_on(id)).collect())
    }

    /// Some flow from `source` to `sink` (of any value) respecting every
    /// arc's bounds and conservation at all other nodes, or `None` if no
    /// such flow exists. The returned flow is integral.
    pub fn feasible_flow(&self, source: usize, sink: usize) -> Option<Vec<i64>> {
        let super_source = self.nodes;
        let super_sink = self.nodes + 1;
        let mut dinic = Dinic::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|a| {
                excess[a.to] += a.lower;
                excess[a.from] -= a.lower;
                dinic.add_arc(a.from, a.to, a.upper - a.lower)
            })
            .collect();
        if source != sink {
            let unbounded: i64 = self.arcs.iter().map(|a| a.upper).sum();
            dinic.add_arc(sink, source, unbounded);
            dinic.add_arc(source, sink, unbounded);
        }
        let mut required = 0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0 {
                dinic.add_arc(super_source, v, e);
                required += e;
            } else if e < 0 {
                dinic.add_arc(v, super_sink, -e);
            }
        }
        if dinic.max_flow(super_source, super_sink) != required {
            return None;
        }
        Some(
            ids.iter()
                .zip(&self.arcs)
                .map(|(&id, a)| a.lower + dinic.flow_on(id))
                .collect(),
        )
    }

    /// Checks bounds and conservation at every node except `source`/`sink`.
    pub fn is_feasible(&self, flow: &[i64], source: usize, sink: usize) -> bool {
        if flow.len() != self.arcs.len() {
            return false;
        }
        let mut balance = vec![0i64; self.nodes];
        for (a, &x) in self.arcs.iter().zip(flow) {
            if x < a.lower || x > a.upper {
                return false;
            }
            balance[a.to] += x;
            balance[a.from] -= x;
        }
        balance
            .iter()
            .enumerate()
            .all(|(v, &b)| v == source || v == sink || b == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classic_max_flow() {
        // CLRS figure 26.1, value 23
        let mut net = FlowNetwork::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (2, 1, 4),
            (1, 3, 12),
            (3, 2, 9),
            (2, 4, 14),
            (4, 3, 7),
            (3, 5, 20),
            (4, 5, 4),
        ] {
            net.add_arc(u, v, 0, c);
        }
        let (value, flow) = net.max_flow(0, 5);
        assert_eq!(value, 23);
        assert!(net.is_feasible(&flow, 0, 5));
    }

    #[test]
    fn lower_bounds_force_flow() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 2, 5);
        net.add_arc(1, 2, 0, 3);
        let flow = net.feasible_flow(0, 2).unwrap();
        assert!(net.is_feasible(&flow, 0, 2));
        assert!(flow[0] >= 2 && flow[0] <= 3);
    }

    #[test]
    fn incompatible_bounds_are_infeasible() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 4, 5);
        net.add_arc(1, 2, 0, 3);
        assert!(net.feasible_flow(0, 2).is_none());
    }

    #[test]
    fn circulation_without_terminals() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 1, 2);
        net.add_arc(1, 2, 0, 2);
        net.add_arc(2, 0, 2, 2);
        let flow = net.feasible_flow(0, 0).unwrap();
        assert_eq!(flow, vec![2, 2, 2]);
    }

    /// Exhaustive search over all integral flows of a tiny network.
    fn brute_force_feasible(net: &FlowNetwork, s: usize, t: usize) -> bool {
        let arcs = net.arcs();
        let mut flow = vec![0i64; arcs.len()];
        fn rec(i: usize, net: &FlowNetwork, flow: &mut Vec<i64>, s: usize, t: usize) -> bool {
            if i == flow.len() {
                return net.is_feasible(flow, s, t);
            }
            let a = net.arcs()[i];
            for x in a.lower..=a.upper {
                flow[i] = x;
                if rec(i + 1, net, flow, s, t) {
                    return true;
                }
            }
            false
        }
        rec(0, net, &mut flow, s, t)
    }

    proptest! {
        #[test]
        fn feasibility_matches_exhaustive_search(
            arcs in prop::collection::vec((0usize..4, 0usize..4, 0i64..3, 0i64..3), 1..6)
        ) {
            let mut net = FlowNetwork::new(4);
            for (u, v, x, y) in arcs {
                if u != v {
                    net.add_arc(u, v, x.min(y), x.max(y));
                }
            }
            let found = net.feasible_flow(0, 3);
            if let Some(flow) = &found {
                prop_assert!(net.is_feasible(flow, 0, 3));
            }
            prop_assert_eq!(found.is_some(), brute_force_feasible(&net, 0, 3));
        }
    }
}
