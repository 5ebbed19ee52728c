//! Branch-set extension search.
//!
//! H-vertices are processed in decreasing degree (ties by label). For each
//! one we enumerate connected vertex sets of the unused part of G by size
//! (ESU enumeration), keep those touching every already-placed neighbour's
//! branch set, and recurse. Twin vertices of G (equal open or closed
//! neighbourhoods) are interchangeable, so each branch set takes at most the
//! lowest unused member of a twin class. Roots never join a twin class.

use super::bits::Bits;
use super::model::{validate_model, MinorModel};
use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use serde::Serialize;
use std::collections::HashMap;
use std::ops::ControlFlow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum MinorOutcome {
    Yes { model: MinorModel },
    No,
    Timeout,
}

impl MinorOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, MinorOutcome::Yes { .. })
    }

    pub fn model(&self) -> Option<&MinorModel> {
        match self {
            MinorOutcome::Yes { model } => Some(model),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MinorOutcome::Yes { .. } => "yes",
            MinorOutcome::No => "no",
            MinorOutcome::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    #[serde(flatten)]
    pub outcome: MinorOutcome,
    /// Candidate branch sets examined.
    pub nodes: u64,
    pub budget: u64,
}

/// Decides whether `h` is a minor of `g`, examining at most `budget`
/// candidate branch sets. `No` is only reported on a completed search.
pub fn is_minor(g: &Graph, h: &Graph, budget: u64) -> Result<SearchResult> {
    run(g, h, None, budget)
}

/// As [`is_minor`], with `roots[h] ∈ V_h` required for every H-vertex.
pub fn is_rooted_minor(g: &Graph, h: &Graph, roots: &[usize], budget: u64) -> Result<SearchResult> {
    if roots.len() != h.n() {
        return Err(Error::invalid(format!(
            "{} roots for {} H-vertices",
            roots.len(),
            h.n()
        )));
    }
    let distinct: VertexSet = roots.iter().copied().collect();
    if distinct.len() != roots.len() || roots.iter().any(|&r| r >= g.n()) {
        return Err(Error::invalid("roots must be distinct vertices of G"));
    }
    run(g, h, Some(roots), budget)
}

fn run(g: &Graph, h: &Graph, roots: Option<&[usize]>, budget: u64) -> Result<SearchResult> {
    let done = |outcome| {
        Ok(SearchResult {
            outcome,
            nodes: 0,
            budget,
        })
    };
    if h.n() == 0 {
        return done(MinorOutcome::Yes {
            model: MinorModel::default(),
        });
    }
    if h.n() > g.n() || h.m() > g.m() {
        return done(MinorOutcome::No);
    }
    let res = match g.n().div_ceil(64) {
        1 => run_w::<1>(g, h, roots, budget),
        2 => run_w::<2>(g, h, roots, budget),
        3 | 4 => run_w::<4>(g, h, roots, budget),
        5..=8 => run_w::<8>(g, h, roots, budget),
        9..=16 => run_w::<16>(g, h, roots, budget),
        _ => {
            return Err(Error::invalid(format!(
                "exact search supports at most 1024 host vertices, got {}",
                g.n()
            )))
        }
    };
    if let MinorOutcome::Yes { model } = &res.outcome {
        let check = validate_model(g, h, model)?;
        if !check.valid {
            return Err(Error::Internal(format!(
                "search produced an invalid model: {:?}",
                check.violation
            )));
        }
        if let Some(r) = roots {
            if r.iter().enumerate().any(|(hv, &x)| !model.set(hv).contains(x)) {
                return Err(Error::Internal("search lost a root".into()));
            }
        }
    }
    Ok(res)
}

struct Ctx<'a, const W: usize> {
    n: usize,
    adj: Vec<Bits<W>>,
    h: &'a Graph,
    order: Vec<usize>,
    pos: Vec<usize>,
    classes: Vec<Vec<usize>>,
    roots: Option<&'a [usize]>,
    root_bits: Bits<W>,
    budget: u64,
}

struct State<const W: usize> {
    sets: Vec<Bits<W>>,
    used: Bits<W>,
    nodes: u64,
    timed_out: bool,
}

/// Twin classes (equal open or closed neighbourhoods), roots kept apart.
fn twin_classes(g: &Graph, roots: Option<&[usize]>) -> Vec<Vec<usize>> {
    let is_root = |v: usize| roots.is_some_and(|r| r.contains(&v));
    let mut open: HashMap<&[usize], Vec<usize>> = HashMap::new();
    let mut closed: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut classes = Vec::new();
    for v in 0..g.n() {
        if is_root(v) {
            classes.push(vec![v]);
            continue;
        }
        open.entry(g.neighbors(v)).or_default().push(v);
        let mut c = g.neighbors(v).to_vec();
        let i = c.partition_point(|&x| x < v);
        c.insert(i, v);
        closed.entry(c).or_default().push(v);
    }
    let mut class_of = vec![usize::MAX; g.n()];
    let mut groups: Vec<Vec<usize>> = open.into_values().chain(closed.into_values()).collect();
    groups.sort();
    for grp in groups.into_iter().filter(|g| g.len() > 1) {
        classes.push(grp.clone());
        let id = classes.len() - 1;
        for v in grp {
            class_of[v] = id;
        }
    }
    // Non-root vertices without a twin.
    for v in 0..g.n() {
        if !is_root(v) && class_of[v] == usize::MAX {
            classes.push(vec![v]);
        }
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

fn run_w<const W: usize>(g: &Graph, h: &Graph, roots: Option<&[usize]>, budget: u64) -> SearchResult {
    let n = g.n();
    let adj: Vec<Bits<W>> = (0..n)
        .map(|v| Bits::with(g.neighbors(v).iter().copied()))
        .collect();
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut pos = vec![0; h.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let ctx = Ctx {
        n,
        adj,
        h,
        order,
        pos,
        classes: twin_classes(g, roots),
        roots,
        root_bits: Bits::with(roots.unwrap_or(&[]).iter().copied()),
        budget,
    };
    let mut st = State {
        sets: vec![Bits::EMPTY; h.n()],
        used: Bits::EMPTY,
        nodes: 0,
        timed_out: false,
    };
    let found = feasible(&ctx, &st, 0) && search(&ctx, &mut st, 0);
    let outcome = if found {
        MinorOutcome::Yes {
            model: MinorModel::from_sets(
                st.sets
                    .iter()
                    .map(|b| b.iter().collect::<VertexSet>())
                    .collect(),
            ),
        }
    } else if st.timed_out {
        MinorOutcome::Timeout
    } else {
        MinorOutcome::No
    };
    SearchResult {
        outcome,
        nodes: st.nodes,
        budget,
    }
}

fn neighbourhood<const W: usize>(ctx: &Ctx<W>, s: &Bits<W>) -> Bits<W> {
    s.iter().fold(Bits::EMPTY, |acc, v| acc.or(ctx.adj[v]))
}

/// Every unplaced H-vertex must still have a component of unused vertices
/// touching all its placed neighbours (and holding its root).
fn feasible<const W: usize>(ctx: &Ctx<W>, st: &State<W>, next: usize) -> bool {
    let all = Bits::<W>::with(0..ctx.n);
    let free = all.minus(st.used);
    if free.count() < ctx.order.len() - next {
        return false;
    }
    let mut comps: Vec<Bits<W>> = Vec::new();
    let mut left = free;
    while let Some(s) = left.first() {
        let mut comp = Bits::with([s]);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let grow = neighbourhood(ctx, &frontier).and(free).minus(comp);
            comp = comp.or(grow);
            frontier = grow;
        }
        left = left.minus(comp);
        comps.push(comp);
    }
    for &hv in &ctx.order[next..] {
        let touch: Vec<Bits<W>> = ctx
            .h
            .neighbors(hv)
            .iter()
            .filter(|&&x| ctx.pos[x] < next)
            .map(|&x| neighbourhood(ctx, &st.sets[x]))
            .collect();
        let ok = comps.iter().any(|c| {
            ctx.roots.is_none_or(|r| c.has(r[hv])) && touch.iter().all(|t| t.intersects(c))
        });
        if !ok {
            return false;
        }
    }
    true
}

fn search<const W: usize>(ctx: &Ctx<W>, st: &mut State<W>, i: usize) -> bool {
    if i == ctx.order.len() {
        return true;
    }
    let hv = ctx.order[i];
    let remaining = ctx.order.len() - i - 1;
    let free_count = ctx.n - st.used.count();
    if free_count < remaining + 1 {
        return false;
    }
    let max_size = free_count - remaining;
    let mut pool = Bits::EMPTY;
    for c in &ctx.classes {
        if let Some(&v) = c.iter().find(|&&v| !st.used.has(v)) {
            if !ctx.root_bits.has(v) {
                pool.set(v);
            }
        }
    }
    let root = ctx.roots.map(|r| r[hv]);
    if let Some(r) = root {
        pool.set(r);
    }
    let touch: Vec<Bits<W>> = ctx
        .h
        .neighbors(hv)
        .iter()
        .filter(|&&x| ctx.pos[x] < i)
        .map(|&x| neighbourhood(ctx, &st.sets[x]))
        .collect();
    let later_nbrs = ctx
        .h
        .neighbors(hv)
        .iter()
        .filter(|&&x| ctx.pos[x] > i)
        .count();
    let max_size = max_size.min(pool.count());

    let mut found = false;
    for size in 1..=max_size {
        let flow = esu(ctx, pool, root, size, &mut |s: Bits<W>| {
            st.nodes += 1;
            if st.nodes > ctx.budget {
                st.timed_out = true;
                return ControlFlow::Break(());
            }
            if !touch.iter().all(|t| t.intersects(&s)) {
                return ControlFlow::Continue(());
            }
            let outside = neighbourhood(ctx, &s).minus(st.used).minus(s);
            if outside.count() < later_nbrs {
                return ControlFlow::Continue(());
            }
            st.sets[hv] = s;
            st.used = st.used.or(s);
            if feasible(ctx, st, i + 1) && search(ctx, st, i + 1) {
                found = true;
                return ControlFlow::Break(());
            }
            st.used = st.used.minus(s);
            st.sets[hv] = Bits::EMPTY;
            if st.timed_out {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if flow.is_break() {
            break;
        }
    }
    found
}

/// Enumerates connected subsets of `pool` with exactly `size` vertices,
/// each once; only sets containing `root` when given.
fn esu<const W: usize>(
    ctx: &Ctx<W>,
    pool: Bits<W>,
    root: Option<usize>,
    size: usize,
    f: &mut dyn FnMut(Bits<W>) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let starts: Vec<(usize, Bits<W>)> = match root {
        Some(r) => vec![(r, pool)],
        None => pool
            .iter()
            .map(|v| (v, pool.and(Bits::above(v, ctx.n))))
            .collect(),
    };
    for (v, allowed) in starts {
        let sub = Bits::with([v]);
        let ext = ctx.adj[v].and(allowed);
        let mut closed = ctx.adj[v];
        closed.set(v);
        extend(ctx, sub, ext, closed, allowed, size, f)?;
    }
    ControlFlow::Continue(())
}

fn extend<const W: usize>(
    ctx: &Ctx<W>,
    sub: Bits<W>,
    mut ext: Bits<W>,
    closed: Bits<W>,
    allowed: Bits<W>,
    size: usize,
    f: &mut dyn FnMut(Bits<W>) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if sub.count() == size {
        return f(sub);
    }
    while let Some(w) = ext.first() {
        ext.unset(w);
        let excl = ctx.adj[w].and(allowed).minus(closed);
        let mut sub2 = sub;
        sub2.set(w);
        let mut closed2 = closed.or(ctx.adj[w]);
        closed2.set(w);
        extend(ctx, sub2, ext.or(excl), closed2, allowed, size, f)?;
    }
    ControlFlow::Continue(())
}
