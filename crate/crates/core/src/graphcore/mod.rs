//! Simple undirected graphs on dense labels `0..n`.

mod enk;
mod flow;
mod io;
mod trace;

pub use enk::{enk_check, EnkReport};
pub use flow::{
    bounded_min_vertex_cut, local_connectivity, set_disjoint_paths, vertex_disjoint_paths,
};
pub use io::{parse_graph, write_graph};
pub use trace::ContractionTrace;

use crate::error::{Error, Result};
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Sorted, duplicate-free set of vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

/// Simple undirected graph. Adjacency lists are kept sorted and mirrored in
/// a bit matrix for constant-time edge queries.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    bits: Vec<Vec<u64>>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            adj: vec![Vec::new(); n],
            bits: vec![vec![0; words]; n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting loops, out-of-range endpoints and repeats.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge {u}{v} out of range for n = {n}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::invalid(format!("duplicate edge {u}{v}")));
            }
            g.set_bit(u, v);
        }
        g.rebuild_lists();
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but silently merges repeats and drops loops.
    pub(crate) fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u != v && !g.has_edge(u, v) {
                g.set_bit(u, v);
            }
        }
        g.rebuild_lists();
        g
    }

    fn set_bit(&mut self, u: usize, v: usize) {
        self.bits[u][v / 64] |= 1 << (v % 64);
        self.bits[v][u / 64] |= 1 << (u % 64);
        self.m += 1;
    }

    fn rebuild_lists(&mut self) {
        for (u, row) in self.bits.iter().enumerate() {
            let list = &mut self.adj[u];
            list.clear();
            for (w, &word) in row.iter().enumerate() {
                let mut x = word;
                while x != 0 {
                    let b = x.trailing_zeros() as usize;
                    list.push(w * 64 + b);
                    x &= x - 1;
                }
            }
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges_lossy(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges_lossy(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges_lossy(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn star(leaves: usize) -> Self {
        Graph::from_edges_lossy(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    /// `K_{s,t}` with the `s` side on labels `0..s`.
    pub fn complete_bipartite(s: usize, t: usize) -> Self {
        Graph::from_edges_lossy(
            s + t,
            (0..s).flat_map(|u| (s..s + t).map(move |v| (u, v))),
        )
    }

    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges_lossy(10, e)
    }

    /// Erdős–Rényi `G(n, p)`.
    pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    e.push((u, v));
                }
            }
        }
        Graph::from_edges_lossy(n, e)
    }

    /// Disjoint union, `other` relabelled after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        Graph::from_edges_lossy(
            off + other.n(),
            self.edges()
                .into_iter()
                .chain(other.edges().into_iter().map(|(u, v)| (u + off, v + off))),
        )
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && (self.bits[u][v / 64] >> (v % 64)) & 1 == 1
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.m == n * n.saturating_sub(1) / 2
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        if set.len() < self.degree(v) {
            set.iter().filter(|&u| self.has_edge(v, u)).count()
        } else {
            self.adj[v].iter().filter(|&&u| set.contains(u)).count()
        }
    }

    /// True when some edge joins `a` and `b`.
    pub fn sets_adjacent(&self, a: &VertexSet, b: &VertexSet) -> bool {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        small
            .iter()
            .any(|u| large.iter().any(|v| self.has_edge(u, v)))
    }

    /// Number of edges `uv` with `u` in `a` and `v` in `b`. Shared vertices
    /// are not double counted when `a == b`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        if a == b {
            return self.induced_edge_count(a);
        }
        a.iter()
            .map(|u| b.iter().filter(|&v| self.has_edge(u, v)).count())
            .sum()
    }

    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        let mut c = 0;
        for (i, u) in s.iter().enumerate() {
            for v in s.as_slice()[i + 1..].iter() {
                if self.has_edge(u, *v) {
                    c += 1;
                }
            }
        }
        c
    }

    /// Induced subgraph on `vs` (relabelled `0..|vs|` in sorted order).
    pub fn induced(&self, vs: &VertexSet) -> Graph {
        let map = vs.as_slice();
        let mut e = Vec::new();
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    e.push((i, j));
                }
            }
        }
        Graph::from_edges_lossy(map.len(), e)
    }

    /// Graph with `vs` removed; survivors keep their relative order.
    pub fn remove_vertices(&self, vs: &VertexSet) -> (Graph, Vec<usize>) {
        let keep: VertexSet = (0..self.n()).filter(|&v| !vs.contains(v)).collect();
        let g = self.induced(&keep);
        (g, keep.into_vec())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let all: VertexSet = (0..self.n()).collect();
        self.components_within(&all)
    }

    /// Components of the subgraph induced on `within`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in within.iter() {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut q = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = q.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] && within.contains(w) {
                        seen[w] = true;
                        q.push_back(w);
                    }
                }
            }
            out.push(comp.into_iter().collect());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        !s.is_empty() && self.components_within(s).len() == 1
    }

    /// Shortest path from any vertex of `from` to any vertex of `to`,
    /// using interior vertices that satisfy `allowed`. Returns the full
    /// vertex sequence, endpoints included.
    pub fn shortest_path_between(
        &self,
        from: &VertexSet,
        to: &VertexSet,
        allowed: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let n = self.n();
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut q = VecDeque::new();
        for s in from.iter() {
            if to.contains(s) {
                return Some(vec![s]);
            }
            seen[s] = true;
            q.push_back(s);
        }
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if seen[w] {
                    continue;
                }
                if to.contains(w) {
                    let mut path = vec![w, u];
                    let mut x = u;
                    while prev[x] != usize::MAX {
                        x = prev[x];
                        path.push(x);
                    }
                    path.reverse();
                    return Some(path);
                }
                if allowed(w) {
                    seen[w] = true;
                    prev[w] = u;
                    q.push_back(w);
                }
            }
        }
        None
    }
}

/// Exact density `e(G) / C(n, 2)`.
pub fn density(g: &Graph) -> Result<Ratio<u64>> {
    let n = g.n() as u64;
    if n < 2 {
        return Err(Error::Degenerate(format!("density needs n >= 2, got {n}")));
    }
    Ok(Ratio::new(g.m() as u64, n * (n - 1) / 2))
}

/// Exact ratio `e(G) / |G|`.
pub fn edge_vertex_ratio(g: &Graph) -> Result<Ratio<u64>> {
    if g.n() == 0 {
        return Err(Error::Degenerate("edge/vertex ratio of the empty graph".into()));
    }
    Ok(Ratio::new(g.m() as u64, g.n() as u64))
}

/// Contracts edge `uv`: `v` merges into `u` and is removed, labels above
/// `v` shift down by one.
pub fn contract(g: &Graph, u: usize, v: usize) -> Result<Graph> {
    if u == v || !g.has_edge(u, v) {
        return Err(Error::InvalidContraction { u, v });
    }
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x > v {
            x - 1
        } else {
            x
        }
    };
    Ok(Graph::from_edges_lossy(
        g.n() - 1,
        g.edges().into_iter().map(|(a, b)| (relabel(a), relabel(b))),
    ))
}

/// Balanced blowup `G0(k)`: vertex `v` becomes the independent set
/// `{v*k, .., v*k + k - 1}` and each edge a complete bipartite join.
pub fn balanced_blowup(g0: &Graph, k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::Degenerate("blowup multiplicity k = 0".into()));
    }
    let mut e = Vec::with_capacity(g0.m() * k * k);
    for (a, b) in g0.edges() {
        for i in 0..k {
            for j in 0..k {
                e.push((a * k + i, b * k + j));
            }
        }
    }
    Ok(Graph::from_edges_lossy(g0.n() * k, e))
}

/// `|N(u) ∩ N(v)|` for an edge `uv`.
pub fn edge_triangle_count(g: &Graph, u: usize, v: usize) -> Result<usize> {
    if !g.has_edge(u, v) {
        return Err(Error::invalid(format!("{u}{v} is not an edge")));
    }
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(c)
}

/// Vertex connectivity by Even's algorithm over unit-capacity flows.
/// `κ(K_n) = n − 1`; disconnected graphs give 0.
pub fn connectivity(g: &Graph) -> usize {
    let n = g.n();
    if n <= 1 {
        return 0;
    }
    if g.is_complete() {
        return n - 1;
    }
    let mut best = g.min_degree();
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                let k = local_connectivity(g, i, j, best);
                best = best.min(k);
            }
        }
        i += 1;
    }
    best
}
