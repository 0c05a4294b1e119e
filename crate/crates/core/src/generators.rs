//! Named graphs and parametrised families.
//!
//! All generators return unit-weight edge lists. Families built from gadgets
//! joined in a ring mark the joining edges forced; every Hamiltonian cycle
//! uses them anyway once there are two or more gadgets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::graph::{EdgeSpec, GraphSpec};

fn bad(family: &str, message: impl Into<String>) -> GenError {
    GenError::BadParameters { family: family.to_string(), message: message.into() }
}

fn ring(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

pub fn k4() -> GraphSpec {
    GraphSpec::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

pub fn k33() -> GraphSpec {
    let pairs: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    GraphSpec::from_pairs(6, &pairs)
}

pub fn petersen() -> GraphSpec {
    let mut pairs = ring(5);
    pairs.extend((0..5).map(|i| (i, i + 5)));
    pairs.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    GraphSpec::from_pairs(10, &pairs)
}

/// The 3-dimensional cube: bottom face 0-3, top face 4-7, verticals last.
pub fn cube() -> GraphSpec {
    let mut pairs = ring(4);
    pairs.extend(ring(4).into_iter().map(|(a, b)| (a + 4, b + 4)));
    pairs.extend((0..4).map(|i| (i, i + 4)));
    GraphSpec::from_pairs(8, &pairs)
}

/// Two `m`-cycles joined by a perfect matching of rungs (listed last).
pub fn prism(m: usize) -> Result<GraphSpec, GenError> {
    if m < 3 {
        return Err(bad("prism", "m must be at least 3"));
    }
    let mut pairs = ring(m);
    pairs.extend(ring(m).into_iter().map(|(a, b)| (a + m, b + m)));
    pairs.extend((0..m).map(|i| (i, i + m)));
    Ok(GraphSpec::from_pairs(2 * m, &pairs))
}

/// Appends gadget edges; returns the two degree-2 stub vertices.
fn push_k33_gadget(spec: &mut GraphSpec) -> (usize, usize) {
    let base = spec.vertex_count;
    spec.vertex_count += 6;
    for a in 0..3 {
        for b in 3..6 {
            if (a, b) != (0, 3) {
                spec.add_edge(base + a, base + b, 1);
            }
        }
    }
    (base, base + 3)
}

fn push_k4_gadget(spec: &mut GraphSpec) -> (usize, usize) {
    let base = spec.vertex_count;
    spec.vertex_count += 4;
    for (a, b) in [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)] {
        spec.add_edge(base + a, base + b, 1);
    }
    (base, base + 3)
}

fn close_ring(spec: &mut GraphSpec, stubs: &[(usize, usize)]) {
    for i in 0..stubs.len() {
        let (_, out) = stubs[i];
        let (inp, _) = stubs[(i + 1) % stubs.len()];
        spec.edges.push(EdgeSpec::forced(out, inp, 1));
    }
}

/// Ring of `k` copies of `K_{3,3}` minus an edge: `6k` vertices, cubic,
/// with four Hamiltonian paths through each gadget and so `4^k` cycles.
pub fn gadget_cycle(k: usize) -> Result<GraphSpec, GenError> {
    gadget_ring(k, 0).map_err(|_| bad("gadget_cycle", "k must be at least 1"))
}

/// Ring of `k` copies of `K_{3,3}` minus an edge followed by `j` copies of
/// `K_4` minus an edge (two paths each): `4^k 2^j` cycles.
pub fn k4_gadget_cycle(k: usize, j: usize) -> Result<GraphSpec, GenError> {
    gadget_ring(k, j)
}

fn gadget_ring(k: usize, j: usize) -> Result<GraphSpec, GenError> {
    if k + j == 0 {
        return Err(bad("k4_gadget_cycle", "need at least one gadget"));
    }
    let mut spec = GraphSpec::new(0);
    let mut stubs: Vec<_> = (0..k).map(|_| push_k33_gadget(&mut spec)).collect();
    stubs.extend((0..j).map(|_| push_k4_gadget(&mut spec)));
    close_ring(&mut spec, &stubs);
    Ok(spec)
}

/// `n`-cycle in which every other edge is doubled: `2^{n/2}` cycles.
pub fn multigraph_ngon(n: usize) -> Result<GraphSpec, GenError> {
    if n < 4 || n % 2 != 0 {
        return Err(bad("multigraph_ngon", "n must be even and at least 4"));
    }
    let mut spec = GraphSpec::from_pairs(n, &ring(n));
    for i in (0..n).step_by(2) {
        spec.add_edge(i, i + 1, 1);
    }
    Ok(spec)
}

/// Dual of the torus triangulation obtained from a `p × q` quad grid by
/// cutting every quad along the same diagonal. Vertex `2(iq + j)` is the
/// lower triangle of quad `(i, j)` and `2(iq + j) + 1` the upper one.
pub fn torus_dual(p: usize, q: usize) -> Result<GraphSpec, GenError> {
    if p < 2 || q < 2 {
        return Err(bad("torus_dual", "p and q must be at least 2"));
    }
    let lower = |i: usize, j: usize| 2 * ((i % p) * q + (j % q));
    let upper = |i: usize, j: usize| lower(i, j) + 1;
    let mut pairs = Vec::with_capacity(3 * p * q);
    for i in 0..p {
        for j in 0..q {
            pairs.push((lower(i, j), upper(i, j)));
            pairs.push((lower(i, j), upper(i, j + q - 1)));
            pairs.push((lower(i, j), upper(i + p - 1, j)));
        }
    }
    Ok(GraphSpec::from_pairs(2 * p * q, &pairs))
}

/// Random `d`-regular simple graph on `n` vertices from the configuration
/// model: pair up `dn` half-edges uniformly and retry on loops or parallel
/// edges.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<GraphSpec, GenError> {
    if d == 0 || d >= n || (n * d) % 2 != 0 {
        return Err(bad("random_regular", "need 0 < d < n and n*d even"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    loop {
        points.shuffle(&mut rng);
        let pairs: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        let spec = GraphSpec::from_pairs(n, &pairs);
        if spec.is_simple() {
            return Ok(spec);
        }
    }
}

/// Random simple cubic graph; `n` even and at least 4.
pub fn random_cubic(n: usize, seed: u64) -> Result<GraphSpec, GenError> {
    if n < 4 || n % 2 != 0 {
        return Err(bad("random_cubic", "n must be even and at least 4"));
    }
    random_regular(n, 3, seed)
}

/// Random simple cubic graph with weights in `1..=max_weight` and a forced
/// matching of up to `max_forced` edges chosen greedily in random order.
pub fn weighted_random_cubic(
    n: usize,
    max_weight: i64,
    max_forced: usize,
    seed: u64,
) -> Result<GraphSpec, GenError> {
    if max_weight < 1 {
        return Err(bad("weighted_random_cubic", "max_weight must be positive"));
    }
    let mut spec = random_cubic(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for e in &mut spec.edges {
        e.weight = rng.gen_range(1..=max_weight);
    }
    let target = rng.gen_range(0..=max_forced);
    let mut order: Vec<usize> = (0..spec.edges.len()).collect();
    order.shuffle(&mut rng);
    let mut used = vec![false; n];
    let mut forced = 0;
    for i in order {
        let (u, v) = (spec.edges[i].u, spec.edges[i].v);
        if forced < target && !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            spec.edges[i].forced = true;
            forced += 1;
        }
    }
    Ok(spec)
}

/// Circulant graph: `i` adjacent to `i ± o` for each offset `o`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<GraphSpec, GenError> {
    let ok = offsets.iter().all(|&o| o >= 1 && 2 * o < n);
    if !ok {
        return Err(bad("circulant", "offsets must lie in 1..n/2"));
    }
    let pairs: Vec<_> =
        offsets.iter().flat_map(|&o| (0..n).map(move |i| (i, (i + o) % n))).collect();
    Ok(GraphSpec::from_pairs(n, &pairs))
}

/// Names accepted by [`generate`], with their parameter lists.
pub const FAMILIES: &[(&str, &str)] = &[
    ("gadget_cycle", "K"),
    ("k4_gadget_cycle", "K J"),
    ("multigraph_ngon", "N"),
    ("torus_dual", "P Q"),
    ("petersen", ""),
    ("k4", ""),
    ("k33", ""),
    ("cube", ""),
    ("prism", "M"),
    ("random_cubic", "N (uses seed)"),
    ("random_regular", "N D (uses seed)"),
    ("circulant", "N O1 [O2 ...]"),
];

/// Builds a family member by name.
pub fn generate(family: &str, params: &[usize], seed: u64) -> Result<GraphSpec, GenError> {
    let arity = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(bad(family, format!("expected {k} parameter(s), got {}", params.len())))
        }
    };
    match family {
        "gadget_cycle" => arity(1).and_then(|_| gadget_cycle(params[0])),
        "k4_gadget_cycle" => arity(2).and_then(|_| k4_gadget_cycle(params[0], params[1])),
        "multigraph_ngon" => arity(1).and_then(|_| multigraph_ngon(params[0])),
        "torus_dual" => arity(2).and_then(|_| torus_dual(params[0], params[1])),
        "petersen" => arity(0).map(|_| petersen()),
        "k4" => arity(0).map(|_| k4()),
        "k33" => arity(0).map(|_| k33()),
        "cube" => arity(0).map(|_| cube()),
        "prism" => arity(1).and_then(|_| prism(params[0])),
        "random_cubic" => arity(1).and_then(|_| random_cubic(params[0], seed)),
        "random_regular" => arity(2).and_then(|_| random_regular(params[0], params[1], seed)),
        "circulant" => {
            if params.len() < 2 {
                return Err(bad(family, "expected N and at least one offset"));
            }
            circulant(params[0], &params[1..])
        }
        other => Err(GenError::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(spec: &GraphSpec) -> bool {
        spec.degrees().iter().all(|&d| d == 3)
    }

    #[test]
    fn named_graphs_are_simple_cubic() {
        for spec in [k4(), k33(), petersen(), cube(), prism(5).unwrap()] {
            assert!(cubic(&spec) && spec.is_simple());
        }
    }

    #[test]
    fn gadget_cycle_shape() {
        for k in 1..=4 {
            let spec = gadget_cycle(k).unwrap();
            assert_eq!(spec.vertex_count, 6 * k);
            assert_eq!(spec.edges.len(), 9 * k);
            assert!(cubic(&spec) && spec.is_simple());
            assert_eq!(spec.forced_ids().len(), k);
        }
        assert!(gadget_cycle(0).is_err());
    }

    #[test]
    fn torus_dual_shape() {
        for (p, q) in [(2, 2), (3, 4), (10, 20)] {
            let spec = torus_dual(p, q).unwrap();
            assert_eq!(spec.vertex_count, 2 * p * q);
            assert!(cubic(&spec) && spec.is_simple());
        }
    }

    #[test]
    fn ngon_shape() {
        let spec = multigraph_ngon(6).unwrap();
        assert_eq!((spec.vertex_count, spec.edges.len()), (6, 9));
        assert!(!spec.is_simple());
    }

    #[test]
    fn random_cubic_is_reproducible() {
        let a = random_cubic(20, 7).unwrap();
        assert_eq!(a, random_cubic(20, 7).unwrap());
        assert!(cubic(&a) && a.is_simple());
    }

    #[test]
    fn weighted_random_cubic_forces_a_matching() {
        for seed in 0..20 {
            let spec = weighted_random_cubic(12, 100, 3, seed).unwrap();
            let forced = spec.forced_ids();
            assert!(forced.len() <= 3);
            let mut ends: Vec<usize> =
                forced.iter().flat_map(|e| [spec.edges[e.index()].u, spec.edges[e.index()].v]).collect();
            ends.sort_unstable();
            ends.dedup();
            assert_eq!(ends.len(), 2 * forced.len());
            assert!(spec.edges.iter().all(|e| (1..=100).contains(&e.weight)));
        }
    }

    #[test]
    fn circulant_is_four_regular() {
        let spec = circulant(8, &[1, 2]).unwrap();
        assert!(spec.degrees().iter().all(|&d| d == 4) && spec.is_simple());
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(generate("nope", &[], 0), Err(GenError::UnknownFamily(_))));
        assert!(generate("prism", &[], 0).is_err());
    }
}
