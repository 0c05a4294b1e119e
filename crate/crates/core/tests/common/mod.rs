#![allow(dead_code)]

use std::collections::BTreeSet;

use cubic_tsp::generators::{
    cube, gadget_cycle, k33, k4, k4_gadget_cycle, petersen, prism, random_cubic, random_regular,
    torus_dual,
};
use cubic_tsp::listing::collect_cycles;
use cubic_tsp::oracle::oracle_cycles;
use cubic_tsp::reduce::{Engine, Mode, Rule, Step, RULE_COUNT};
use cubic_tsp::{EdgeId, GraphSpec, Multigraph, Weight};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random cubic graph on `n` vertices with weights in `1..=100` and a random
/// forced matching of up to `max_forced` edges.
pub fn weighted_instance(n: usize, max_forced: usize, seed: u64) -> GraphSpec {
    let mut r = rng(seed ^ 0x9e37_79b9);
    let mut spec = random_cubic(n, seed).expect("valid size");
    for e in &mut spec.edges {
        e.weight = r.gen_range(1..=100);
    }
    let target = r.gen_range(0..=max_forced);
    force_random_matching(&mut spec, target, &mut r);
    spec
}

pub fn force_random_matching(spec: &mut GraphSpec, target: usize, r: &mut ChaCha8Rng) {
    let mut order: Vec<usize> = (0..spec.edges.len()).collect();
    order.shuffle(r);
    let mut used = vec![false; spec.vertex_count];
    let mut count = 0;
    for i in order {
        if count == target {
            break;
        }
        let (u, v) = (spec.edges[i].u, spec.edges[i].v);
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            spec.edges[i].forced = true;
            count += 1;
        }
    }
}

/// Random multigraph of maximum degree 3 from an unrejected pairing: loops
/// and parallel edges appear. Weights in `1..=20`, each edge forced with
/// probability `p_forced`.
pub fn random_multigraph(n: usize, p_forced: f64, r: &mut ChaCha8Rng) -> GraphSpec {
    let mut points: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    if points.len() % 2 == 1 {
        points.pop();
    }
    points.shuffle(r);
    let mut spec = GraphSpec::new(n);
    for c in points.chunks(2) {
        let i = spec.add_edge(c[0], c[1], r.gen_range(1..=20));
        spec.edges[i].forced = r.gen_bool(p_forced);
    }
    spec
}

/// Every Hamiltonian cycle of the live graph containing its forced edges,
/// as (cost, input edge ids it stands for).
pub fn solution_set(g: &Multigraph) -> BTreeSet<(Weight, Vec<EdgeId>)> {
    let (spec, ids) = g.to_spec();
    oracle_cycles(&spec)
        .expect("state within oracle limits")
        .into_iter()
        .map(|c| {
            let live: Vec<EdgeId> = c.iter().map(|e| ids[e.index()]).collect();
            let cost = live.iter().map(|&e| g.edge(e).weight).sum();
            (cost, g.provenance_of_all(&live))
        })
        .collect()
}

fn min_cost(set: &BTreeSet<(Weight, Vec<EdgeId>)>) -> Option<Weight> {
    set.iter().map(|s| s.0).min()
}

#[derive(Default)]
pub struct Tally {
    /// Rule applications checked, by rule index.
    pub fired: [u64; RULE_COUNT],
    /// Walks in which the rule fired at least once, by rule index.
    pub instances: [u64; RULE_COUNT],
    pub failures: Vec<String>,
}

/// Applies rules one at a time from `spec`, comparing the oracle's solution
/// set before and after each application. When no rule applies, forces (with
/// probability `p_force`) or deletes a random unforced edge and continues. Dropping a parallel edge
/// may discard tours through the costlier copy, so for that rule the
/// optimum must be kept and no tour may appear.
pub fn soundness_walk(
    spec: &GraphSpec,
    mode: Mode,
    p_force: f64,
    r: &mut ChaCha8Rng,
    tally: &mut Tally,
) {
    let mut engine = Engine::new(Multigraph::load(spec).expect("valid spec"), mode);
    let mut seen = [false; RULE_COUNT];
    let fail = |tally: &mut Tally, rule: Rule, what: &str| {
        tally.failures.push(format!("{mode:?} rule {rule}: {what} on {spec:?}"));
    };
    loop {
        let before = solution_set(engine.graph());
        let step = engine.step();
        let rule = match &step {
            Step::Fired(rule) | Step::ReturnNone(rule) => *rule,
            Step::Hamiltonian(_) => Rule::HamiltonianTerminal,
            Step::Exhausted => {
                let g = engine.graph();
                let free: Vec<EdgeId> = g.edges().filter(|&e| !g.edge(e).forced).collect();
                let Some(&e) = free.choose(r) else { return };
                if r.gen_bool(p_force) { engine.force(e) } else { engine.delete(e) }
                continue;
            }
        };
        tally.fired[rule.index()] += 1;
        if !seen[rule.index()] {
            seen[rule.index()] = true;
            tally.instances[rule.index()] += 1;
        }
        match step {
            Step::Fired(Rule::DropParallel) => {
                let after = solution_set(engine.graph());
                if !after.is_subset(&before) || min_cost(&after) != min_cost(&before) {
                    fail(tally, rule, "optimum not preserved");
                }
            }
            Step::Fired(_) => {
                if solution_set(engine.graph()) != before {
                    fail(tally, rule, "solution set changed");
                }
            }
            Step::ReturnNone(_) => {
                if !before.is_empty() {
                    fail(tally, rule, "returned None on a Hamiltonian state");
                }
                return;
            }
            Step::Hamiltonian(edges) => {
                let g = engine.graph();
                let cost = edges.iter().map(|&e| g.edge(e).weight).sum();
                let only = BTreeSet::from([(cost, g.provenance_of_all(&edges))]);
                if before != only {
                    fail(tally, rule, "terminal cycle is not the unique tour");
                }
                return;
            }
            Step::Exhausted => unreachable!(),
        }
    }
}

/// Start state for a TSP soundness walk: a random multigraph, a random simple
/// cubic graph, or a small prism, each with some forced edges.
pub fn tsp_walk_instance(r: &mut ChaCha8Rng) -> GraphSpec {
    match r.gen_range(0..3) {
        0 => {
            let n = r.gen_range(2..=10);
            random_multigraph(n, 0.15, r)
        }
        1 => {
            let n = 2 * r.gen_range(3..=6);
            let mut spec = random_cubic(n, r.gen()).expect("valid size");
            let k = r.gen_range(0..=3);
            force_random_matching(&mut spec, k, r);
            spec
        }
        _ => {
            let mut spec = prism(r.gen_range(3..=6)).expect("valid size");
            for e in &mut spec.edges {
                e.weight = r.gen_range(1..=20);
            }
            let k = r.gen_range(1..=3);
            force_random_matching(&mut spec, k, r);
            spec
        }
    }
}

/// Start state for a listing soundness walk: a random simple cubic graph
/// with a forced matching or an arbitrary forced subset.
pub fn listing_walk_instance(r: &mut ChaCha8Rng) -> GraphSpec {
    let n = 2 * r.gen_range(2..=6);
    let mut spec = random_cubic(n, r.gen()).expect("valid size");
    if r.gen_bool(0.5) {
        let k = r.gen_range(0..=3);
        force_random_matching(&mut spec, k, r);
    } else {
        spec.edges.iter_mut().for_each(|e| e.forced = r.gen_bool(0.2));
    }
    spec
}

/// Simple members of every generator family with at most `max_n` vertices,
/// with a label each.
pub fn simple_family_instances(max_n: usize) -> Vec<(String, GraphSpec)> {
    let mut out = vec![
        ("k4".to_string(), k4()),
        ("k33".to_string(), k33()),
        ("petersen".to_string(), petersen()),
        ("cube".to_string(), cube()),
    ];
    for k in 1..=max_n / 6 {
        out.push((format!("gadget_cycle({k})"), gadget_cycle(k).unwrap()));
    }
    for k in 0..=max_n / 6 {
        for j in 0..=(max_n - 6 * k) / 4 {
            if k + j > 0 {
                out.push((format!("k4_gadget_cycle({k},{j})"), k4_gadget_cycle(k, j).unwrap()));
            }
        }
    }
    for m in 3..=max_n / 2 {
        out.push((format!("prism({m})"), prism(m).unwrap()));
    }
    for p in 2..=max_n / 4 {
        for q in p..=max_n / (2 * p) {
            out.push((format!("torus_dual({p},{q})"), torus_dual(p, q).unwrap()));
        }
    }
    for n in (4..=max_n).step_by(2) {
        for seed in 0..3 {
            out.push((format!("random_cubic({n}, seed {seed})"), random_cubic(n, seed).unwrap()));
        }
    }
    out.retain(|(_, s)| s.vertex_count <= max_n);
    out
}

/// Cycles from the lister, sorted, or a message describing a duplicate.
pub fn listed_sorted(spec: &GraphSpec) -> Result<Vec<Vec<EdgeId>>, String> {
    let mut cycles = collect_cycles(spec).map_err(|e| e.to_string())?;
    let len = cycles.len();
    cycles.sort();
    cycles.dedup();
    if cycles.len() != len {
        return Err(format!("{} duplicate cycles", len - cycles.len()));
    }
    Ok(cycles)
}

/// Random 4-regular simple graph on `n` vertices with weights in `1..=50`.
pub fn weighted_quartic(n: usize, seed: u64) -> GraphSpec {
    let mut r = rng(seed ^ 0x5851_f42d);
    let mut spec = random_regular(n, 4, seed).expect("valid size");
    for e in &mut spec.edges {
        e.weight = r.gen_range(1..=50);
    }
    spec
}

/// K5 with weights from a fixed seed; its optimal tour is unique.
pub fn weighted_k5() -> GraphSpec {
    let mut r = rng(12345);
    let mut spec = GraphSpec::new(5);
    for a in 0..5 {
        for b in a + 1..5 {
            spec.add_edge(a, b, r.gen_range(1..=100));
        }
    }
    spec
}
