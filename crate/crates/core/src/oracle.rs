//! Brute-force reference algorithms.
//!
//! [`oracle_tsp`] is the subset dynamic program over Hamiltonian paths from
//! a fixed start vertex; [`oracle_cycles`] extends paths one edge at a time
//! and keeps every closed path. Both accept arbitrary multigraphs of any
//! degree and honour forced edges. They exist to check the fast algorithms.

use std::collections::BTreeSet;

use crate::error::OracleError;
use crate::graph::{EdgeId, GraphSpec, Weight};

pub const TSP_LIMIT: usize = 18;
pub const CYCLES_LIMIT: usize = 14;
/// Enumeration limit when every vertex has degree at most 3, where the
/// number of partial paths is below `2^n`.
pub const CYCLES_LIMIT_CUBIC: usize = 18;

/// Minimum-cost Hamiltonian cycle containing every forced edge, as
/// `(cost, sorted edge ids)`; `Ok(None)` if there is none.
pub fn oracle_tsp(spec: &GraphSpec) -> Result<Option<(Weight, Vec<EdgeId>)>, OracleError> {
    let n = spec.vertex_count;
    if n > TSP_LIMIT {
        return Err(OracleError::TooLarge { vertices: n, limit: TSP_LIMIT });
    }
    if n <= 2 {
        return Ok(best_small(spec));
    }
    // forced edges carry a bonus larger than any cost difference, so the
    // optimum uses as many of them as possible
    let bonus: i128 = 2 * spec.edges.iter().map(|e| (e.weight as i128).abs()).sum::<i128>() + 1;
    let adj_w = |e: usize| spec.edges[e].weight as i128 - if spec.edges[e].forced { bonus } else { 0 };
    // cheapest adjusted edge per vertex pair
    let mut best_edge: Vec<Option<usize>> = vec![None; n * n];
    for (i, e) in spec.edges.iter().enumerate() {
        if e.u == e.v {
            if e.forced {
                return Ok(None);
            }
            continue;
        }
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            let slot = &mut best_edge[a * n + b];
            if slot.map_or(true, |j| (adj_w(i), i) < (adj_w(j), j)) {
                *slot = Some(i);
            }
        }
    }
    let full = 1usize << (n - 1);
    // dp over subsets of vertices 1..n; path starts at 0
    const INF: i128 = i128::MAX;
    let mut dp = vec![INF; full * n];
    let mut parent = vec![u8::MAX; full * n];
    for v in 1..n {
        if let Some(e) = best_edge[v] {
            dp[(1 << (v - 1)) * n + v] = adj_w(e);
        }
    }
    for mask in 1..full {
        for v in 1..n {
            let cur = dp[mask * n + v];
            if cur == INF {
                continue;
            }
            for w in 1..n {
                let bit = 1 << (w - 1);
                if mask & bit != 0 {
                    continue;
                }
                if let Some(e) = best_edge[v * n + w] {
                    let next = mask | bit;
                    let cand = cur + adj_w(e);
                    if cand < dp[next * n + w] {
                        dp[next * n + w] = cand;
                        parent[next * n + w] = v as u8;
                    }
                }
            }
        }
    }
    let last = full - 1;
    let mut best: Option<(i128, usize)> = None;
    for v in 1..n {
        let cur = dp[last * n + v];
        if cur == INF {
            continue;
        }
        if let Some(e) = best_edge[v * n] {
            let total = cur + adj_w(e);
            if best.map_or(true, |(b, _)| total < b) {
                best = Some((total, v));
            }
        }
    }
    let Some((_, end)) = best else { return Ok(None) };
    let mut tour = vec![best_edge[end * n].expect("closing edge")];
    let (mut mask, mut v) = (last, end);
    while mask != 1 << (v - 1) {
        let p = parent[mask * n + v] as usize;
        tour.push(best_edge[p * n + v].expect("path edge"));
        mask &= !(1 << (v - 1));
        v = p;
    }
    tour.push(best_edge[v].expect("first edge"));
    finish(spec, tour)
}

fn finish(spec: &GraphSpec, tour: Vec<usize>) -> Result<Option<(Weight, Vec<EdgeId>)>, OracleError> {
    let set: BTreeSet<usize> = tour.into_iter().collect();
    if spec.edges.iter().enumerate().any(|(i, e)| e.forced && !set.contains(&i)) {
        return Ok(None);
    }
    let cost = set.iter().map(|&i| spec.edges[i].weight).sum();
    Ok(Some((cost, set.into_iter().map(|i| EdgeId(i as u32)).collect())))
}

fn best_small(spec: &GraphSpec) -> Option<(Weight, Vec<EdgeId>)> {
    enumerate(spec)
        .into_iter()
        .map(|c| (c.iter().map(|e| spec.edges[e.index()].weight).sum::<Weight>(), c))
        .min()
}

/// Every Hamiltonian cycle containing all forced edges, each as its sorted
/// edge ids; the list is sorted and free of duplicates.
pub fn oracle_cycles(spec: &GraphSpec) -> Result<Vec<Vec<EdgeId>>, OracleError> {
    let n = spec.vertex_count;
    let limit = if spec.max_degree() <= 3 { CYCLES_LIMIT_CUBIC } else { CYCLES_LIMIT };
    if n > limit {
        return Err(OracleError::TooLarge { vertices: n, limit });
    }
    Ok(enumerate(spec))
}

fn enumerate(spec: &GraphSpec) -> Vec<Vec<EdgeId>> {
    let n = spec.vertex_count;
    let mut found: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    match n {
        0 => {}
        1 => {
            for (i, e) in spec.edges.iter().enumerate() {
                if e.u == e.v {
                    found.insert(vec![EdgeId(i as u32)]);
                }
            }
        }
        _ => {
            let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
            for (i, e) in spec.edges.iter().enumerate() {
                if e.u != e.v {
                    inc[e.u].push((i, e.v));
                    inc[e.v].push((i, e.u));
                }
            }
            let mut visited = vec![false; n];
            visited[0] = true;
            let mut path = Vec::with_capacity(n);
            extend(&inc, 0, 1, &mut visited, &mut path, &mut found);
        }
    }
    let forced: Vec<EdgeId> = spec.forced_ids();
    found.into_iter().filter(|c| forced.iter().all(|f| c.binary_search(f).is_ok())).collect()
}

fn extend(
    inc: &[Vec<(usize, usize)>],
    v: usize,
    depth: usize,
    visited: &mut [bool],
    path: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<EdgeId>>,
) {
    let n = visited.len();
    if depth == n {
        for &(e, w) in &inc[v] {
            if w == 0 && !path.contains(&e) {
                let mut c: Vec<EdgeId> = path.iter().chain([&e]).map(|&i| EdgeId(i as u32)).collect();
                c.sort_unstable();
                found.insert(c);
            }
        }
        return;
    }
    for &(e, w) in &inc[v] {
        if !visited[w] {
            visited[w] = true;
            path.push(e);
            extend(inc, w, depth + 1, visited, path, found);
            path.pop();
            visited[w] = false;
        }
    }
}

/// Canonical form of a cyclic vertex sequence: the lexicographically
/// smallest among its rotations and reflections.
pub fn canonical_vertex_cycle(seq: &[usize]) -> Vec<usize> {
    let k = seq.len();
    let mut best: Option<Vec<usize>> = None;
    let rev: Vec<usize> = seq.iter().rev().copied().collect();
    for s in [seq, &rev[..]] {
        for r in 0..k {
            let cand: Vec<usize> = s[r..].iter().chain(&s[..r]).copied().collect();
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Vertex order of a Hamiltonian cycle given by edge ids, starting from the
/// smallest vertex. `None` if the edges do not form one cycle through all
/// vertices.
pub fn cycle_vertex_order(spec: &GraphSpec, edges: &[EdgeId]) -> Option<Vec<usize>> {
    let n = spec.vertex_count;
    if n == 0 || edges.len() != n {
        return None;
    }
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in edges {
        let r = spec.edges.get(e.index())?;
        inc[r.u].push(e.index());
        inc[r.v].push(e.index());
    }
    if inc.iter().any(|l| l.len() != 2) {
        return None;
    }
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut v = 0;
    let mut used = 0;
    loop {
        let e = if inc[v][0] != prev { inc[v][0] } else { inc[v][1] };
        used += 1;
        let r = &spec.edges[e];
        let w = if r.u == v { r.v } else { r.u };
        if w == 0 {
            break;
        }
        if order.contains(&w) {
            return None;
        }
        order.push(w);
        prev = e;
        v = w;
    }
    (used == n && order.len() == n).then_some(order)
}

/// True when `edges` is a Hamiltonian cycle of `spec` containing every
/// forced edge and costing `cost`.
pub fn is_valid_tour(spec: &GraphSpec, edges: &[EdgeId], cost: Weight) -> bool {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == edges.len()
        && cycle_vertex_order(spec, edges).is_some()
        && spec.forced_ids().iter().all(|f| sorted.binary_search(f).is_ok())
        && edges.iter().map(|e| spec.edges[e.index()].weight).sum::<Weight>() == cost
}
