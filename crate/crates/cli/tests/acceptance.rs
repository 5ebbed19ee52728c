//! Acceptance suite: one line per criterion, `PASS`, `FAIL` or
//! `FAIL (conflict)`. A conflict line marks a stated expectation that the
//! exact oracle contradicts with a validated witness; it is reported and
//! recorded, and does not fail the run. Any other failure exits nonzero.

use minorlab::embedder::{
    bipartite_contraction_minor, embed_dense, embed_sparse, engineered_host, CoverPiece,
    DenseConfig, DenseSpec, SparseConfig,
};
use minorlab::family::{part_sizes, sample_family, FamilySpec};
use minorlab::gamma::{
    alpha, gamma_inequality_lhs, gamma_r, gamma_vec, Exponent, GammaInstance, GammaRMode,
    WeightedPartition,
};
use minorlab::graphcore::{balanced_blowup, contract, write_graph};
use minorlab::lowerbound::{
    chernoff_tails, desk_scale_lowerbound_experiment, no_edge_frequency, replay_certificate,
    Certification, LbExperimentConfig,
};
use minorlab::oracle::{is_minor, validate_model, MinorModel, MinorOutcome};
use minorlab::par::Exec;
use minorlab::partitioner::{blocked_partition, BlockedPartitionParams};
use minorlab::rng::rng_from_seed;
use minorlab::{Graph, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;
use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::time::Instant;

const BUDGET: u64 = 20_000_000;

enum Status {
    Pass,
    Fail,
    Conflict,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("alpha solver", c1_alpha),
        ("gamma_vec worked example", c2_example),
        ("gamma_vec vs grid oracle", c3_grid),
        ("gamma_r suite", c4_gamma_r),
        ("family sampler", c5_family),
        ("minor oracle", c6_oracle),
        ("blocked partition", c7_blocked),
        ("dense embedding", c8_dense),
        ("sparse pipeline", c9_sparse),
        ("lower-bound experiment", c10_lowerbound),
        ("tail bounds", c11_tails),
        ("gamma-match via CLI", c12_gamma_match),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|e| Outcome {
            status: Status::Fail,
            detail: format!("panicked: {}", panic_text(&e)),
        });
        let secs = clock.elapsed().as_secs_f64();
        let tag = match out.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Conflict => "FAIL (conflict)",
        };
        println!(
            "criterion {:>2} {tag}: {name} [{secs:.1}s] {}",
            i + 1,
            out.detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

// ---------------------------------------------------------------- 1

fn c1_alpha() -> Outcome {
    let clock = Instant::now();
    let a = alpha();
    let secs = clock.elapsed().as_secs_f64();
    let ok = (a.alpha - 0.319).abs() <= 1e-3 && (a.p_star - 0.715).abs() <= 5e-3 && secs < 1.0;
    outcome(
        ok,
        format!("alpha={:.6} p*={:.6} in {secs:.3}s", a.alpha, a.p_star),
    )
}

// ---------------------------------------------------------------- 2, 3

/// `min σ·β` by brute force: a grid over every coordinate but the last,
/// zoomed around the incumbent, with the last coordinate set to the least
/// value meeting its constraints.
fn grid_oracle(sigma: &[f64], d: &[Vec<Option<f64>>]) -> f64 {
    let r = sigma.len();
    let need = |i: usize, j: usize| d[i][j].filter(|&x| x > 0.0);
    let eval = |head: &[f64]| -> f64 {
        let k = head.len();
        for i in 0..k {
            for j in i..k {
                if let Some(x) = need(i, j) {
                    if head[i] * head[j] < x * (1.0 - 1e-12) {
                        return f64::INFINITY;
                    }
                }
            }
        }
        let mut last: f64 = need(k, k).map_or(0.0, f64::sqrt);
        for i in 0..k {
            if let Some(x) = need(i, k) {
                if head[i] == 0.0 {
                    return f64::INFINITY;
                }
                last = last.max(x / head[i]);
            }
        }
        head.iter().zip(sigma).map(|(b, s)| b * s).sum::<f64>() + sigma[k] * last
    };
    let free = r - 1;
    if free == 0 {
        return eval(&[]);
    }
    let coarse: Vec<f64> = std::iter::once(0.0)
        .chain((0..=240).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 240.0)))
        .collect();
    let grids: Vec<Vec<f64>> = vec![coarse; free];
    let (mut best, mut arg) = scan(&grids, &eval);
    let mut factor = 10f64.powf(6.0 / 240.0);
    for _ in 0..12 {
        let grids: Vec<Vec<f64>> = arg
            .iter()
            .map(|&b| {
                let mut g: Vec<f64> = if b == 0.0 {
                    (0..=40).map(|i| 1e-3 * i as f64 / 40.0).collect()
                } else {
                    (0..=40)
                        .map(|i| b * factor.powf(-1.0 + 2.0 * i as f64 / 40.0))
                        .collect()
                };
                g.push(0.0);
                g
            })
            .collect();
        let (v, a) = scan(&grids, &eval);
        if v < best {
            best = v;
            arg = a;
        }
        factor = factor.powf(0.25);
    }
    best
}

fn scan(grids: &[Vec<f64>], eval: &dyn Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let mut best = (f64::INFINITY, vec![0.0; grids.len()]);
    let mut idx = vec![0usize; grids.len()];
    loop {
        let point: Vec<f64> = idx.iter().zip(grids).map(|(&i, g)| g[i]).collect();
        let v = eval(&point);
        if v < best.0 {
            best = (v, point);
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < grids[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return best;
        }
    }
}

fn as_options(d: &[Vec<Exponent>]) -> Vec<Vec<Option<f64>>> {
    d.iter()
        .map(|row| row.iter().map(|e| e.finite()).collect())
        .collect()
}

fn example(y: f64) -> GammaInstance {
    let third = 1.0 / 3.0;
    GammaInstance::from_pairs(
        vec![third, third, 1.0 - 2.0 * third],
        &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, y)],
    )
    .unwrap()
}

fn c2_example() -> Outcome {
    let clock = Instant::now();
    let v = gamma_vec(&example(0.5), 1e-12).unwrap().value;
    let exact = 2.0 * 2f64.sqrt() / 3.0;
    let mut ok = (v - exact).abs() <= 1e-4;
    let mut worst: f64 = 0.0;
    for y in [0.5, 0.6, 0.8, 1.0] {
        let inst = example(y);
        let got = gamma_vec(&inst, 1e-12).unwrap().value;
        let want = grid_oracle(&inst.sigma, &as_options(&inst.d));
        worst = worst.max((got - want).abs());
    }
    ok &= worst <= 1e-3;
    let secs = clock.elapsed().as_secs_f64();
    ok &= secs < 5.0;
    outcome(
        ok,
        format!("value={v:.6} (2√2/3={exact:.6}), worst grid gap {worst:.2e}"),
    )
}

fn random_instance(rng: &mut impl Rng) -> GammaInstance {
    let r = rng.gen_range(1..=3);
    let raw: Vec<f64> = (0..r).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut sigma: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = sigma[..r - 1].iter().sum();
    sigma[r - 1] = 1.0 - head;
    let mut d = vec![vec![Exponent::NegInfinity; r]; r];
    for i in 0..r {
        for j in i..r {
            let e = if rng.gen_bool(0.2) {
                Exponent::NegInfinity
            } else {
                Exponent::Finite(rng.gen_range(-0.5..=1.0))
            };
            d[i][j] = e;
            d[j][i] = e;
        }
    }
    GammaInstance::new(sigma, d).unwrap()
}

fn c3_grid() -> Outcome {
    let mut rng = rng_from_seed(3);
    let (mut worst, mut mono_bad) = (0f64, 0);
    for _ in 0..50 {
        let inst = random_instance(&mut rng);
        let got = gamma_vec(&inst, 1e-12).unwrap().value;
        let want = grid_oracle(&inst.sigma, &as_options(&inst.d));
        worst = worst.max((got - want).abs());
        let r = inst.r();
        let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
        let mut up = inst.clone();
        let raised = match inst.d[i][j] {
            Exponent::NegInfinity => Exponent::Finite(rng.gen_range(-0.5..=1.0)),
            Exponent::Finite(x) => Exponent::Finite(rng.gen_range(x..=1.0)),
        };
        up.d[i][j] = raised;
        up.d[j][i] = raised;
        if gamma_vec(&up, 1e-12).unwrap().value < got - 1e-7 {
            mono_bad += 1;
        }
    }
    outcome(
        worst <= 1e-3 && mono_bad == 0,
        format!("worst gap {worst:.2e}, monotonicity violations {mono_bad}"),
    )
}

// ---------------------------------------------------------------- 4

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// One representative per isomorphism class of graphs on `n` vertices with
/// more than `n` edges, by minimum permuted edge mask.
fn nonisomorphic_dense(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        if mask.count_ones() as usize <= n {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                pairs.iter().enumerate().fold(0u32, |acc, (i, &(u, v))| {
                    if mask >> i & 1 == 1 {
                        let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                        acc | 1 << index[&(a, b)]
                    } else {
                        acc
                    }
                })
            })
            .min()
            .unwrap();
        seen.insert(canon);
    }
    seen.into_iter().map(|m| graph_from_mask(n, m)).collect()
}

fn c4_gamma_r() -> Outcome {
    let exhaustive = GammaRMode::Exhaustive { cap: 1e7 };
    let mut notes = Vec::new();
    let mut ok = true;
    for r in 1..=3 {
        ok &= gamma_r(&Graph::empty(5), r, &exhaustive, Exec::Parallel)
            .unwrap()
            .value
            == 0.0;
    }
    let mut rng = rng_from_seed(4);
    let pairs: Vec<(usize, usize)> = (0..8)
        .flat_map(|u| (u + 1..8).map(move |v| (u, v)))
        .collect();
    let mut worst_one: f64 = 0.0;
    for _ in 0..10 {
        let edges: Vec<_> = pairs.choose_multiple(&mut rng, 16).copied().collect();
        let h = Graph::from_edges(8, &edges).unwrap();
        let w = gamma_r(&h, 1, &exhaustive, Exec::Parallel).unwrap();
        worst_one = worst_one.max((w.value - 1.0).abs());
    }
    ok &= worst_one <= 1e-6;
    notes.push(format!("|gamma_1 - 1| <= {worst_one:.1e}"));
    let (mut graphs, mut mono_bad, mut lhs_bad, mut worst_lhs) = (0, 0, 0, 0f64);
    for n in 4..=6 {
        for h in nonisomorphic_dense(n) {
            graphs += 1;
            let vals: Vec<f64> = (1..=4)
                .map(|r| {
                    let w = gamma_r(&h, r, &exhaustive, Exec::Parallel).unwrap();
                    let lhs = gamma_inequality_lhs(&h, &w.partition, w.d).unwrap();
                    worst_lhs = worst_lhs.max(lhs);
                    if lhs > 1.0 + 1e-9 {
                        lhs_bad += 1;
                    }
                    w.value
                })
                .collect();
            mono_bad += vals.windows(2).filter(|p| p[1] > p[0] + 1e-9).count();
        }
    }
    ok &= mono_bad == 0 && lhs_bad == 0;
    notes.push(format!(
        "{graphs} classes with |H|<=6 and d>1, monotonicity violations {mono_bad}, max witness lhs {worst_lhs:.12}"
    ));
    outcome(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 5

/// Exact target `⌊t·b^p⌋` for `D = p/q` and `d = b^q`, in integers.
fn integer_target(t: u64, b: u64, p: i32) -> u64 {
    if p >= 0 {
        t * b.pow(p as u32)
    } else {
        t / b.pow((-p) as u32)
    }
}

fn c5_family() -> Outcome {
    let mut rng = rng_from_seed(5);
    let (mut specs, mut samples, mut mismatches) = (0, 0, 0);
    while specs < 10 {
        let r = rng.gen_range(1..=3);
        let (b, q) = (rng.gen_range(2..=3u64), rng.gen_range(1..=2i32));
        let t = rng.gen_range(30..=60usize);
        let sigma: Vec<f64> = {
            let mut s = vec![1.0 / r as f64; r];
            let head: f64 = s[..r - 1].iter().sum();
            s[r - 1] = 1.0 - head;
            s
        };
        let mut pq = vec![vec![None; r]; r];
        for i in 0..r {
            for j in i..r {
                let p = if rng.gen_bool(0.2) {
                    None
                } else {
                    Some(rng.gen_range(-q..=q))
                };
                pq[i][j] = p;
                pq[j][i] = p;
            }
        }
        let d: Vec<Vec<Exponent>> = pq
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        p.map_or(Exponent::NegInfinity, |p| {
                            Exponent::Finite(p as f64 / q as f64)
                        })
                    })
                    .collect()
            })
            .collect();
        let sizes = part_sizes(&sigma, t).unwrap();
        let capacity = |i: usize, j: usize| -> u64 {
            let (a, c) = (sizes[i] as u64, sizes[j] as u64);
            if i == j {
                a * a.saturating_sub(1) / 2
            } else {
                a * c
            }
        };
        let fits = (0..r).all(|i| {
            (i..r).all(|j| {
                pq[i][j].map_or(true, |p| integer_target(t as u64, b, p) <= capacity(i, j))
            })
        });
        if !fits {
            continue;
        }
        specs += 1;
        let spec = FamilySpec {
            inst: GammaInstance::new(sigma, d).unwrap(),
            t,
            d: b.pow(q as u32) as f64,
        };
        for k in 0..10 {
            samples += 1;
            let s = sample_family(&spec, rng.gen()).unwrap();
            let labels = s.part_labels();
            let mut counts = vec![vec![0u64; r]; r];
            for (u, v) in s.graph.edges() {
                let (i, j) = (labels[u].min(labels[v]), labels[u].max(labels[v]));
                counts[i][j] += 1;
            }
            for i in 0..r {
                for j in i..r {
                    let want = pq[i][j].map_or(0, |p| integer_target(t as u64, b, p));
                    if counts[i][j] != want {
                        mismatches += 1;
                        eprintln!(
                            "spec {specs} sample {k}: pair ({i},{j}) has {} edges, want {want}",
                            counts[i][j]
                        );
                    }
                }
            }
        }
    }
    // Determinism.
    let spec = FamilySpec {
        inst: GammaInstance::from_pairs(vec![0.5, 0.5], &[(0, 1, 0.5), (0, 0, 0.0)]).unwrap(),
        t: 30,
        d: 4.0,
    };
    let deterministic = (0..10).all(|seed| {
        let a = serde_json::to_string(&sample_family(&spec, seed).unwrap()).unwrap();
        let b = serde_json::to_string(&sample_family(&spec, seed).unwrap()).unwrap();
        a == b
    });
    // Uniformity: 3 edges among the 9 cross slots of two triples.
    let spec = FamilySpec {
        inst: GammaInstance::from_pairs(vec![0.5, 0.5], &[(0, 1, -1.0)]).unwrap(),
        t: 6,
        d: 2.0,
    };
    let trials = 2000;
    let mut slot = HashMap::new();
    for seed in 0..trials {
        let g = sample_family(&spec, 1_000_000 + seed).unwrap().graph;
        for e in g.edges() {
            *slot.entry(e).or_insert(0u64) += 1;
        }
    }
    let mean = trials as f64 / 3.0;
    let sd = (trials as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
    let worst_z = (0..3)
        .flat_map(|u| (3..6).map(move |v| (u, v)))
        .map(|e| (slot.get(&e).copied().unwrap_or(0) as f64 - mean).abs() / sd)
        .fold(0f64, f64::max);
    let uniform = worst_z <= 5.0 && slot.len() == 9;
    outcome(
        mismatches == 0 && deterministic && uniform,
        format!("{samples} samples over {specs} specs, {mismatches} count mismatches; deterministic={deterministic}; worst slot z={worst_z:.2}"),
    )
}

// ---------------------------------------------------------------- 6

fn yes_validates(g: &Graph, h: &Graph, out: &MinorOutcome) -> bool {
    match out {
        MinorOutcome::Yes { model } => validate_model(g, h, model).unwrap().valid,
        _ => true,
    }
}

fn delete_edge(g: &Graph, e: (usize, usize)) -> Graph {
    let edges: Vec<_> = g.edges().into_iter().filter(|&f| f != e).collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

fn add_edge(g: &Graph, e: (usize, usize)) -> Graph {
    let mut edges = g.edges();
    edges.push(e);
    Graph::from_edges(g.n(), &edges).unwrap()
}

/// A random minor of `g`: a few contractions, edge deletions and vertex
/// deletions.
fn random_minor(g: &Graph, rng: &mut impl Rng) -> Graph {
    let mut cur = g.clone();
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..3) {
            0 if cur.m() > 0 => {
                let (u, v) = *cur.edges().choose(rng).unwrap();
                cur = contract(&cur, u, v).unwrap();
            }
            1 if cur.m() > 0 => {
                let e = *cur.edges().choose(rng).unwrap();
                cur = delete_edge(&cur, e);
            }
            _ if cur.n() > 1 => {
                let v = rng.gen_range(0..cur.n());
                cur = cur.remove_vertices(&VertexSet::singleton(v)).0;
            }
            _ => {}
        }
    }
    cur
}

fn c6_oracle() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let no =
        |g: &Graph, h: &Graph| matches!(is_minor(g, h, BUDGET).unwrap().outcome, MinorOutcome::No);
    ok &= no(&Graph::complete(4), &Graph::complete(5));
    ok &= no(&Graph::complete(6), &Graph::complete_bipartite(3, 4));
    let pet = is_minor(&Graph::petersen(), &Graph::complete(5), BUDGET)
        .unwrap()
        .outcome;
    ok &= pet.is_yes() && yes_validates(&Graph::petersen(), &Graph::complete(5), &pet);
    let c5 = is_minor(&Graph::cycle(5), &Graph::complete(3), BUDGET)
        .unwrap()
        .outcome;
    let c5_valid = c5.is_yes() && yes_validates(&Graph::cycle(5), &Graph::complete(3), &c5);
    let conflict = c5_valid;
    ok &= c5.is_yes() == c5_valid;
    if let Some(m) = c5.model() {
        notes.push(format!(
            "(C5,K3): oracle says yes with validated model {:?}, against the stated 'no'",
            m.branch_sets
                .values()
                .map(|s| s.as_slice().to_vec())
                .collect::<Vec<_>>()
        ));
    }
    let mut rng = rng_from_seed(6);
    let (mut trans_bad, mut mono_bad, mut invalid, mut timeouts) = (0, 0, 0, 0);
    let mut check = |g: &Graph, h: &Graph| -> Option<bool> {
        let out = is_minor(g, h, BUDGET).unwrap().outcome;
        if !yes_validates(g, h, &out) {
            invalid += 1;
        }
        match out {
            MinorOutcome::Timeout => {
                timeouts += 1;
                None
            }
            o => Some(o.is_yes()),
        }
    };
    for _ in 0..500 {
        let n = rng.gen_range(2..=7);
        let g = Graph::gnp(n, rng.gen_range(0.2..0.9), &mut rng);
        // Transitivity along a contraction/deletion chain g ≽ h1 ≽ h2.
        let h1 = random_minor(&g, &mut rng);
        let h2 = random_minor(&h1, &mut rng);
        for (a, b) in [(&g, &h1), (&h1, &h2), (&g, &h2)] {
            if check(a, b) == Some(false) {
                trans_bad += 1;
            }
        }
        // Subgraph monotonicity against an unrelated H.
        let h = Graph::gnp(rng.gen_range(1..=n.min(5)), 0.5, &mut rng);
        let base = check(&g, &h);
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        if let (Some(true), Some(&e)) = (base, missing.choose(&mut rng)) {
            if check(&add_edge(&g, e), &h) == Some(false) {
                mono_bad += 1;
            }
        }
        if let (Some(true), Some(&e)) = (base, h.edges().choose(&mut rng)) {
            if check(&g, &delete_edge(&h, e)) == Some(false) {
                mono_bad += 1;
            }
        }
    }
    ok &= trans_bad == 0 && mono_bad == 0 && invalid == 0 && timeouts == 0;
    notes.push(format!(
        "500 pairs: transitivity violations {trans_bad}, monotonicity violations {mono_bad}, invalid yes {invalid}, timeouts {timeouts}"
    ));
    Outcome {
        status: match (ok, conflict) {
            (false, _) => Status::Fail,
            (true, true) => Status::Conflict,
            (true, false) => Status::Pass,
        },
        detail: notes.join("; "),
    }
}

// ---------------------------------------------------------------- 7

fn c7_blocked() -> Outcome {
    let g = Graph::gnp(60, 0.7, &mut rng_from_seed(7));
    // The first configuration exercises blocks and rejection; the second
    // keeps parts small enough for non-adjacency to be observable.
    let configs = [
        BlockedPartitionParams {
            a: vec![4, 4],
            b: vec![1, 1],
            l: 2,
            omega: 10.0,
            eta: 0.5,
        },
        BlockedPartitionParams {
            a: vec![12, 12],
            b: vec![1, 2],
            l: 1,
            omega: 10.0,
            eta: 0.5,
        },
    ];
    let (mut runs, mut shape_bad) = (0, 0);
    // (config, vertex, sub) -> (bad, trials, bound)
    let mut bad: HashMap<(usize, usize, usize), (u64, u64, f64)> = HashMap::new();
    let (mut built_pairs, mut built_nonadj, mut mc_pairs, mut mc_nonadj) = (0u64, 0u64, 0u64, 0u64);
    for (ci, params) in configs.iter().enumerate() {
        let (l, x, cap) = (params.l, params.x(), params.bad_fraction_cap());
        for seed in 0..20 {
            let Ok(bp) = blocked_partition(&g, params, seed, 64, Exec::Parallel) else {
                continue;
            };
            runs += 1;
            let mut shape = bp.blocks.len() == l && bp.blocks.iter().all(|b| b.len() == x);
            shape &= bp.blocks.concat() == bp.degree_order;
            shape &= bp.q.windows(2).all(|w| w[0] <= w[1] + 1e-12);
            let mut used = BTreeSet::new();
            for p in &bp.parts {
                shape &= p.per_block.len() == l;
                for (j, vs) in p.per_block.iter().enumerate() {
                    shape &=
                        vs.len() == params.b[p.sub] && vs.iter().all(|v| bp.blocks[j].contains(v));
                    for &v in vs {
                        shape &= used.insert(v);
                    }
                }
            }
            let mut final_used = BTreeSet::new();
            for (i, sub) in bp.subpartitions.iter().enumerate() {
                shape &= sub.len() as f64 >= params.a[i] as f64 * (1.0 - cap) - 1e-9;
                for (k, part) in sub.iter().enumerate() {
                    shape &= part.iter().all(|v| final_used.insert(v));
                    let origin = &bp.parts[bp.origin[i][k]];
                    shape &= origin.vertices().iter().all(|v| part.contains(v));
                }
            }
            if !shape {
                shape_bad += 1;
            }
            for p in &bp.parts {
                let pv = p.vertices();
                for &v in &bp.degree_order {
                    if pv.contains(v) {
                        continue;
                    }
                    let bound = bp.q_of(v).unwrap().powi((l * params.b[p.sub]) as i32);
                    let e = bad.entry((ci, v, p.sub)).or_insert((0, 0, bound));
                    e.1 += 1;
                    if pv.iter().all(|u| !g.has_edge(u, v)) {
                        e.0 += 1;
                    }
                }
            }
            let finals: Vec<VertexSet> = bp.parts.iter().map(|p| p.vertices()).collect();
            for a in 0..finals.len() {
                for b in a + 1..finals.len() {
                    built_pairs += 1;
                    if !g.sets_adjacent(&finals[a], &finals[b]) {
                        built_nonadj += 1;
                    }
                }
            }
            let mut rng = rng_from_seed(1000 + 100 * ci as u64 + seed);
            let sizes: Vec<usize> = finals.iter().map(|p| p.len()).collect();
            for _ in 0..50 {
                let mut pool = bp.degree_order.clone();
                pool.shuffle(&mut rng);
                let mut at = 0;
                let sets: Vec<VertexSet> = sizes
                    .iter()
                    .map(|&s| {
                        let set: VertexSet = pool[at..at + s].iter().copied().collect();
                        at += s;
                        set
                    })
                    .collect();
                for a in 0..sets.len() {
                    for b in a + 1..sets.len() {
                        mc_pairs += 1;
                        if !g.sets_adjacent(&sets[a], &sets[b]) {
                            mc_nonadj += 1;
                        }
                    }
                }
            }
        }
    }
    let mut freq_bad = 0;
    for &(hits, trials, bound) in bad.values() {
        let sd = (bound * (1.0 - bound) / trials as f64).sqrt();
        if hits as f64 / trials as f64 > bound + 3.0 * sd {
            freq_bad += 1;
        }
    }
    let built = built_nonadj as f64 / built_pairs.max(1) as f64;
    let mc = mc_nonadj as f64 / mc_pairs.max(1) as f64;
    outcome(
        runs > 0 && shape_bad == 0 && freq_bad == 0 && built <= 3.0 * mc,
        format!(
            "{runs}/40 runs succeeded over two configurations, shape violations {shape_bad}, bad-vertex excesses {freq_bad}/{}, non-adjacency {built:.2e} vs oracle mean {mc:.2e}",
            bad.len()
        ),
    )
}

// ---------------------------------------------------------------- 8

fn c8_dense() -> Outcome {
    let h = Graph::complete_bipartite(2, 8);
    let (mut returned, mut invalid) = (0, 0);
    for seed in 0..25 {
        let g = Graph::gnp(120, 0.8, &mut rng_from_seed(seed));
        let cfg = DenseConfig {
            seed,
            ..DenseConfig::default()
        };
        let rep = embed_dense(&g, &h, &DenseSpec::Bipartite { s: 2, t: 8 }, None, &cfg);
        if let Some(m) = &rep.model {
            returned += 1;
            if !validate_model(&g, &h, m).unwrap().valid {
                invalid += 1;
            }
        }
    }
    let n = 40;
    let cfg0 = DenseConfig::default();
    let reserve = (4.0 * cfg0.eta * n as f64).ceil() as usize;
    let max_h = (n - reserve) / 2;
    let (mut kn_runs, mut kn_fail) = (0, 0);
    let kn = Graph::complete(n);
    for seed in 0..25u64 {
        let size = [4, 8, 12, max_h][seed as usize % 4];
        let hh = Graph::gnp(size, 0.5, &mut rng_from_seed(500 + seed));
        let cfg = DenseConfig { seed, ..cfg0 };
        let rep = embed_dense(&kn, &hh, &DenseSpec::Generic, None, &cfg);
        kn_runs += 1;
        match &rep.model {
            Some(m) if validate_model(&kn, &hh, m).unwrap().valid => {}
            _ => kn_fail += 1,
        }
    }
    outcome(
        invalid == 0 && kn_fail == 0,
        format!("G(120,0.8)/K_2,8: {returned}/25 returned, {invalid} invalid; K_{n} hosts with |H|<={max_h}: {kn_fail}/{kn_runs} failed"),
    )
}

// ---------------------------------------------------------------- 9

fn c4_cover() -> Vec<CoverPiece> {
    vec![
        CoverPiece {
            vertices: VertexSet::from(vec![0, 1, 2]),
            edges: vec![(0, 1), (1, 2)],
        },
        CoverPiece {
            vertices: VertexSet::from(vec![0, 2, 3]),
            edges: vec![(0, 3), (2, 3)],
        },
    ]
}

fn c9_sparse() -> Outcome {
    let h = Graph::cycle(4);
    let (mut ok_runs, mut invalid) = (0, 0);
    for seed in 0..25 {
        let host = engineered_host(60.0, 2, 8, 2, seed);
        let rep = embed_sparse(&host.graph, &h, &c4_cover(), &SparseConfig::new(60.0, seed));
        if let Some(m) = &rep.model {
            ok_runs += 1;
            if !validate_model(&host.graph, &h, m).unwrap().valid {
                invalid += 1;
            }
        }
    }
    let mut rng = rng_from_seed(9);
    let (mut produced, mut replay_bad) = (0, 0);
    for _ in 0..20 {
        let (na, nb) = (30, 10);
        let p = rng.gen_range(0.5..0.9);
        let mut edges = Vec::new();
        for a in 0..na {
            for b in na..na + nb {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(na + nb, &edges).unwrap();
        let part_a: VertexSet = (0..na).collect();
        let part_b: VertexSet = (na..na + nb).collect();
        let Ok(cm) = bipartite_contraction_minor(&g, &part_a, &part_b, nb as f64, 1.0 / 7.0, 0.2)
        else {
            continue;
        };
        produced += 1;
        let model = MinorModel::from_sets(cm.branch_sets.clone());
        let replayed = cm.trace.certifies(&g, &cm.minor);
        let valid = validate_model(&g, &cm.minor, &model)
            .map(|c| c.valid)
            .unwrap_or(false);
        if !(replayed && valid) {
            replay_bad += 1;
        }
    }
    outcome(
        ok_runs * 5 >= 25 * 4 && invalid == 0 && produced == 20 && replay_bad == 0,
        format!("engineered host: {ok_runs}/25 succeeded, {invalid} invalid; contraction minors: {produced}/20 produced, {replay_bad} failed replay"),
    )
}

// ---------------------------------------------------------------- 10

fn c10_lowerbound() -> Outcome {
    let inst = GammaInstance::from_pairs(vec![0.5, 0.5], &[(0, 1, 0.2)]).unwrap();
    let (mut certs, mut replay_bad, mut inconclusive, mut blowup_bad) = (0, 0, 0, 0);
    for k in 1..=5 {
        let mut cfg = LbExperimentConfig::new(5, 4, 12, 100 + k as u64);
        cfg.k_override = Some(k);
        let rep = desk_scale_lowerbound_experiment(&inst, &cfg).unwrap();
        for s in &rep.samples {
            match &s.certification {
                Certification::NotMinor(c) => {
                    certs += 1;
                    if !replay_certificate(c).unwrap_or(false) {
                        replay_bad += 1;
                    }
                }
                Certification::Inconclusive { .. } => inconclusive += 1,
                Certification::IsMinor { .. } => {}
            }
        }
        let lb = &rep.lower_bound;
        let (g, base) = (&lb.graph, &lb.base);
        let mut fine = g.n() == k * 4 && g.m() == k * k * base.m() && lb.verify_blowup();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let (cu, cv) = (u / k, v / k);
                let want = cu != cv && base.has_edge(cu, cv);
                fine &= g.has_edge(u, v) == want;
            }
        }
        fine &= balanced_blowup(base, k)
            .map(|b| write_graph(&b) == write_graph(g))
            .unwrap_or(false);
        if !fine {
            blowup_bad += 1;
        }
    }
    let mut anchor = Vec::new();
    for (a, b) in [(1, 1), (1, 2), (2, 2)] {
        let f = no_edge_frequency(16, 0.715, a, b, 10_000, 10 + (a * b) as u64).unwrap();
        anchor.push((f.observed - f.expected).abs() <= 5.0 * f.sigma);
    }
    let anchor_ok = anchor.iter().all(|&x| x);
    outcome(
        replay_bad == 0 && blowup_bad == 0 && anchor_ok,
        format!("{certs} certificates, {replay_bad} failed replay, {inconclusive} inconclusive; blowup violations {blowup_bad}; anchor at 5σ {anchor:?}"),
    )
}

// ---------------------------------------------------------------- 11

fn c11_tails() -> Outcome {
    let (n, p, trials) = (200, 0.3, 100_000);
    let mu = n as f64 * p;
    let mut rng = rng_from_seed(11);
    let draws: Vec<u32> = (0..trials)
        .map(|_| (0..n).filter(|_| rng.gen_bool(p)).count() as u32)
        .collect();
    let mut violations = 0;
    let mut rows = Vec::new();
    for a in [5.0, 10.0, 20.0] {
        let tb = chernoff_tails(mu, a).unwrap();
        let upper = draws.iter().filter(|&&x| x as f64 > mu + a).count() as f64 / trials as f64;
        let lower = draws.iter().filter(|&&x| (x as f64) < mu - a).count() as f64 / trials as f64;
        violations += (upper > tb.upper_general) as usize;
        violations += tb.upper_small_a.map_or(0, |b| (upper > b) as usize);
        violations += (lower > tb.lower) as usize;
        rows.push(format!(
            "a={a}: up {upper:.4}<= {:.4}, low {lower:.4}<= {:.4}",
            tb.upper_small_a.unwrap_or(tb.upper_general),
            tb.lower
        ));
    }
    outcome(
        violations == 0,
        format!("{violations} violations; {}", rows.join(", ")),
    )
}

// ---------------------------------------------------------------- 12

fn c12_gamma_match() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let spec_text = r#"{"sigma":[0.5,0.5],"D":[[0.5,1.0],[1.0,0.5]],"t":40,"d":8}"#;
    let spec_path = dir.path().join("spec.json");
    std::fs::write(&spec_path, spec_text).unwrap();
    let args = [
        "gamma-match",
        "--spec",
        spec_path.to_str().unwrap(),
        "--r",
        "2",
        "--samples",
        "50",
        "--seed",
        "12",
    ];
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_minorlab"))
            .args(args)
            .output()
            .unwrap();
        (
            out.status.code(),
            serde_json::from_slice::<Value>(&out.stdout).unwrap_or(Value::Null),
        )
    };
    let (code, doc) = run();
    if code != Some(0) {
        return outcome(false, format!("CLI exited with {code:?}"));
    }
    let spec: FamilySpec = serde_json::from_str(spec_text).unwrap();
    let rep = &doc["result"];
    let gamma = rep["gamma"].as_f64().unwrap();
    let beta: Vec<f64> = rep["beta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_f64().unwrap())
        .collect();
    let rows = rep["rows"].as_array().unwrap();
    let mut bad = 0;
    let mut worst_eps = f64::NEG_INFINITY;
    for row in rows {
        let seed = row["seed"].as_u64().unwrap();
        let s = sample_family(&spec, seed).unwrap();
        let h = &s.graph;
        let t = h.n() as f64;
        let d_h = h.m() as f64 / t;
        let c = row["witness_scale"].as_f64().unwrap();
        let parts: Vec<VertexSet> = s
            .part_boundaries
            .windows(2)
            .map(|w| (w[0]..w[1]).collect())
            .collect();
        let wp = WeightedPartition::new(parts.clone(), beta.iter().map(|b| c * b).collect());
        let lhs = gamma_inequality_lhs(h, &wp, d_h).unwrap();
        let value: f64 = parts
            .iter()
            .zip(&wp.weights)
            .map(|(p, w)| p.len() as f64 * w)
            .sum::<f64>()
            / t;
        let eps = value / gamma - 1.0;
        worst_eps = worst_eps.max(eps);
        let g_r = row["gamma_r"].as_f64().unwrap();
        let fine = row["edges"].as_u64() == Some(h.m() as u64)
            && lhs <= 1.0 + 1e-9
            && (row["eps_report"].as_f64().unwrap() - eps).abs() <= 1e-9
            && g_r <= gamma * (1.0 + eps) + 1e-9
            && row["certified"].as_bool() == Some(true);
        if !fine {
            bad += 1;
        }
    }
    let (_, again) = run();
    let replay = again["result"] == doc["result"];
    outcome(
        rows.len() == 50 && bad == 0 && replay,
        format!("gamma={gamma:.6}, {}/50 rows re-verified, max eps_report {worst_eps:.3e}, rerun identical={replay}", rows.len() - bad),
    )
}
