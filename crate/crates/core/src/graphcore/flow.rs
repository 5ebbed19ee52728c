//! Unit vertex-capacity max flow over the split graph: vertex `v` becomes
//! `in(v) = 2v -> out(v) = 2v + 1`, each edge `uv` becomes `out(u) -> in(v)`
//! and `out(v) -> in(u)`.

use super::{Graph, VertexSet};
use std::collections::VecDeque;

const INF: u32 = u32::MAX / 2;

struct Net {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    orig: Vec<u32>,
}

impl Net {
    fn new(nodes: usize) -> Self {
        Net {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
        }
    }

    fn arc(&mut self, a: usize, b: usize, c: u32) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.orig.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
        self.orig.push(0);
    }

    /// Pushes unit augmenting paths until none remain or `limit` is hit.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let nodes = self.head.len();
        let mut flow = 0;
        let mut pred = vec![usize::MAX; nodes];
        while flow < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            let mut q = VecDeque::from([s]);
            let mut reached = false;
            'bfs: while let Some(x) = q.pop_front() {
                for &e in &self.head[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && y != s && pred[y] == usize::MAX {
                        pred[y] = e;
                        if y == t {
                            reached = true;
                            break 'bfs;
                        }
                        q.push_back(y);
                    }
                }
            }
            if !reached {
                break;
            }
            let mut y = t;
            while y != s {
                let e = pred[y];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                y = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }

    /// Splits the flow into `s -> t` node walks.
    fn decompose(&mut self, s: usize, t: usize, count: usize) -> Vec<Vec<usize>> {
        let mut used: Vec<u32> = self
            .orig
            .iter()
            .zip(&self.cap)
            .map(|(&o, &c)| o.saturating_sub(c))
            .collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut walk = vec![s];
            let mut x = s;
            while x != t {
                let e = self.head[x]
                    .iter()
                    .copied()
                    .find(|&e| self.orig[e] > 0 && used[e] > 0)
                    .expect("flow conservation");
                used[e] -= 1;
                x = self.to[e];
                walk.push(x);
            }
            out.push(walk);
        }
        out
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &e in &self.head[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        seen
    }
}

/// Network for internally disjoint `u–v` paths; `u` and `v` are uncapped.
fn pair_net(g: &Graph, u: usize, v: usize, allowed: Option<&VertexSet>) -> Net {
    let n = g.n();
    let ok = |x: usize| x == u || x == v || allowed.is_none_or(|a| a.contains(x));
    let mut net = Net::new(2 * n);
    for x in 0..n {
        if ok(x) && x != u && x != v {
            net.arc(2 * x, 2 * x + 1, 1);
        }
    }
    for (a, b) in g.edges() {
        if !ok(a) || !ok(b) {
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            if y != u && x != v {
                // The direct edge is one path; other arcs never bind.
                let c = if x == u && y == v { 1 } else { INF };
                net.arc(2 * x + 1, 2 * y, c);
            }
        }
    }
    net
}

/// Number of internally vertex-disjoint `u–v` paths, counting a direct edge
/// as one path, stopping once `limit` is reached.
pub fn local_connectivity(g: &Graph, u: usize, v: usize, limit: usize) -> usize {
    let mut net = pair_net(g, u, v, None);
    net.max_flow(2 * u + 1, 2 * v, limit)
}

/// Maximum family of internally vertex-disjoint `u–v` paths with interiors
/// inside `allowed` (all vertices when `None`). Paths include both ends.
pub fn vertex_disjoint_paths(
    g: &Graph,
    u: usize,
    v: usize,
    allowed: Option<&VertexSet>,
) -> Vec<Vec<usize>> {
    if u == v {
        return Vec::new();
    }
    let mut net = pair_net(g, u, v, allowed);
    let (s, t) = (2 * u + 1, 2 * v);
    let f = net.max_flow(s, t, usize::MAX);
    net.decompose(s, t, f)
        .into_iter()
        .map(|walk| {
            let mut p = vec![u];
            p.extend(walk[1..].iter().filter(|&&x| x % 2 == 0).map(|&x| x / 2));
            p
        })
        .collect()
}

/// Maximum family of fully vertex-disjoint paths from `from` to `to`, all
/// vertices drawn from `allowed` (everything when `None`). A vertex lying in
/// both sets yields a one-vertex path.
pub fn set_disjoint_paths(
    g: &Graph,
    from: &VertexSet,
    to: &VertexSet,
    allowed: Option<&VertexSet>,
) -> Vec<Vec<usize>> {
    let n = g.n();
    let ok = |x: usize| from.contains(x) || to.contains(x) || allowed.is_none_or(|a| a.contains(x));
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Net::new(2 * n + 2);
    for x in 0..n {
        if ok(x) {
            net.arc(2 * x, 2 * x + 1, 1);
        }
    }
    for x in from.iter() {
        net.arc(s, 2 * x, 1);
    }
    for x in to.iter() {
        net.arc(2 * x + 1, t, 1);
    }
    for (a, b) in g.edges() {
        if ok(a) && ok(b) {
            net.arc(2 * a + 1, 2 * b, INF);
            net.arc(2 * b + 1, 2 * a, INF);
        }
    }
    let f = net.max_flow(s, t, usize::MAX);
    net.decompose(s, t, f)
        .into_iter()
        .map(|walk| {
            walk[1..walk.len() - 1]
                .iter()
                .filter(|&&x| x % 2 == 0)
                .map(|&x| x / 2)
                .collect()
        })
        .collect()
}

/// A minimum vertex cut of `g` if it has size at most `bound`. Complete
/// graphs have no cut.
pub fn bounded_min_vertex_cut(g: &Graph, bound: usize) -> Option<VertexSet> {
    let n = g.n();
    let mut best: Option<VertexSet> = None;
    let mut cap = bound;
    let mut i = 0;
    while i <= cap && i < n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let mut net = pair_net(g, i, j, None);
            let (s, t) = (2 * i + 1, 2 * j);
            let f = net.max_flow(s, t, cap + 1);
            if f <= cap && best.as_ref().is_none_or(|b| f < b.len()) {
                let reach = net.residual_reach(s);
                let cut: VertexSet = (0..n)
                    .filter(|&x| x != i && x != j && reach[2 * x] && !reach[2 * x + 1])
                    .collect();
                debug_assert_eq!(cut.len(), f);
                cap = f;
                best = Some(cut);
                if f == 0 {
                    return best;
                }
            }
        }
        i += 1;
    }
    best
}
