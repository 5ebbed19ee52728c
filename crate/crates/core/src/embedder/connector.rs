use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use crate::oracle::{validate_model, MinorModel};
use crate::rng::rng_from_seed;
use crate::round::ceil_tol;
use rand::seq::index::sample;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectorReservation {
    pub cp_set: VertexSet,
    /// `4η|G|`.
    pub budget: f64,
    pub within_budget: bool,
    pub seed: u64,
}

/// Reserves `⌈4η|G|⌉` uniformly random non-root vertices.
pub fn reserve_connector(g: &Graph, roots: &[usize], eta: f64, seed: u64) -> Result<ConnectorReservation> {
    let budget = 4.0 * eta * g.n() as f64;
    let size = ceil_tol(budget).max(0.0) as usize;
    let root_set: VertexSet = roots.iter().copied().collect();
    let free: Vec<usize> = (0..g.n()).filter(|&v| !root_set.contains(v)).collect();
    if free.len() < size {
        return Err(Error::Capacity(format!(
            "need {size} connector vertices but only {} non-roots exist",
            free.len()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let cp_set: VertexSet = sample(&mut rng, free.len(), size).into_iter().map(|i| free[i]).collect();
    Ok(ConnectorReservation {
        within_budget: cp_set.len() as f64 <= budget.ceil(),
        cp_set,
        budget,
        seed,
    })
}

fn route_failure(what: String) -> Error {
    Error::ConstructionFailed {
        stage: "fix_bad_pairs".into(),
        attempts: 1,
        diagnostics: what,
    }
}

/// Grows `U_h ⊇ V_h ∪ {r_h}` into connected sets, then realises each bad
/// pair with a shortest path through unused connector vertices.
pub fn fix_bad_pairs(
    g: &Graph,
    h: &Graph,
    parts: &[VertexSet],
    roots: &[usize],
    cp: &ConnectorReservation,
    bad: &[(usize, usize)],
) -> Result<MinorModel> {
    if parts.len() != h.n() || roots.len() != h.n() {
        return Err(Error::MalformedPartition("one part and one root per H-vertex".into()));
    }
    let mut owner = vec![usize::MAX; g.n()];
    let mut pool = vec![false; g.n()];
    for v in cp.cp_set.iter() {
        pool[v] = true;
    }
    let mut u: Vec<VertexSet> = Vec::with_capacity(h.n());
    for (x, p) in parts.iter().enumerate() {
        let mut s = p.clone();
        s.insert(roots[x]);
        for v in s.iter() {
            if owner[v] != usize::MAX || pool[v] {
                return Err(Error::MalformedPartition(format!(
                    "vertex {v} is shared or reserved"
                )));
            }
            owner[v] = x;
        }
        u.push(s);
    }
    for x in 0..h.n() {
        loop {
            let comps = g.components_within(&u[x]);
            if comps.len() <= 1 {
                break;
            }
            let home = comps
                .iter()
                .position(|c| c.contains(roots[x]))
                .unwrap_or(0);
            let rest: VertexSet = comps
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != home)
                .flat_map(|(_, c)| c.iter())
                .collect();
            let path = g
                .shortest_path_between(&comps[home], &rest, |w| pool[w])
                .ok_or_else(|| route_failure(format!("cannot connect the branch set of {x}")))?;
            for &w in &path[1..path.len() - 1] {
                pool[w] = false;
                owner[w] = x;
                u[x].insert(w);
            }
        }
    }
    for &(r, s) in bad {
        if g.sets_adjacent(&u[r], &u[s]) {
            continue;
        }
        let path = g
            .shortest_path_between(&u[r], &u[s], |w| pool[w])
            .ok_or_else(|| route_failure(format!("pair ({r},{s}) is unroutable")))?;
        for &w in &path[1..path.len() - 1] {
            pool[w] = false;
            owner[w] = r;
            u[r].insert(w);
        }
    }
    let model = MinorModel::from_sets(u);
    let check = validate_model(g, h, &model)?;
    if !check.valid {
        return Err(route_failure(format!("assembled model invalid: {:?}", check.violation)));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reservation_size() {
        let g = Graph::complete(100);
        let roots = vec![0, 1, 2];
        let cp = reserve_connector(&g, &roots, 0.05, 4).unwrap();
        assert_eq!(cp.cp_set.len(), 20);
        assert!(roots.iter().all(|&r| !cp.cp_set.contains(r)));
        assert_eq!(cp, reserve_connector(&g, &roots, 0.05, 4).unwrap());
        assert!(reserve_connector(&g, &roots, 0.0, 4).unwrap().cp_set.is_empty());
    }

    #[test]
    fn trivial_fix() {
        let g = Graph::complete(6);
        let h = Graph::complete(3);
        let parts = vec![VertexSet::singleton(0), VertexSet::singleton(1), VertexSet::singleton(2)];
        let cp = reserve_connector(&g, &[0, 1, 2], 0.0, 0).unwrap();
        let model = fix_bad_pairs(&g, &h, &parts, &[0, 1, 2], &cp, &[]).unwrap();
        assert_eq!(model.set(1), &VertexSet::singleton(1));
    }

    #[test]
    fn routes_through_connector() {
        // 0 - 2 - 1 path with 2 reserved; H is an edge.
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let h = Graph::path(2);
        let cp = ConnectorReservation {
            cp_set: VertexSet::singleton(2),
            budget: 1.0,
            within_budget: true,
            seed: 0,
        };
        let parts = vec![VertexSet::singleton(0), VertexSet::singleton(1)];
        let model = fix_bad_pairs(&g, &h, &parts, &[0, 1], &cp, &[(0, 1)]).unwrap();
        assert_eq!(model.set(0).len() + model.set(1).len(), 3);
    }
}
