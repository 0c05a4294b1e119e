mod common;

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cubic_tsp::degree_four::{solve_deterministic, solve_randomized, Degree4Options};
use cubic_tsp::generators::{gadget_cycle, multigraph_ngon, random_cubic, torus_dual};
use cubic_tsp::hitting_set::{build_hitting_set, size_bound};
use cubic_tsp::listing::{count_cycles, list_cycles, ListOptions};
use cubic_tsp::oracle::{is_valid_tour, oracle_cycles, oracle_tsp};
use cubic_tsp::reduce::{Mode, Rule};
use cubic_tsp::tsp::{solve, SolveOptions};
use cubic_tsp::{GraphError, GraphSpec};
use num_bigint::BigUint;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.1}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn tsp_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    let count = 1200u64;
    for seed in 0..count {
        let n = 6 + 2 * (seed as usize % 4);
        let spec = common::weighted_instance(n, 3, seed);
        let expected = oracle_tsp(&spec).unwrap().map(|(c, _)| c);
        let out = solve(&spec, SolveOptions::default()).unwrap();
        let ok = match &out.solution {
            None => expected.is_none(),
            Some(s) => Some(s.cost) == expected && is_valid_tour(&spec, &s.tour, s.cost),
        };
        if !ok {
            bad.push(seed);
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    verdict(
        bad.is_empty() && fast,
        format!("{count} instances, mismatched seeds {bad:?}, {time}"),
    )
}

fn listing_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    let families = common::simple_family_instances(14);
    let mut checked = 0;
    for (name, spec) in &families {
        match common::listed_sorted(spec) {
            Ok(listed) if listed == oracle_cycles(spec).unwrap() => {}
            _ => bad.push(name.clone()),
        }
        checked += 1;
    }
    // the lister refuses multigraphs; their count is checked on the oracle
    for n in (4..=14).step_by(2) {
        let spec = multigraph_ngon(n).unwrap();
        let refused = count_cycles(&spec) == Err(GraphError::NotSimple);
        if !refused || oracle_cycles(&spec).unwrap().len() != 1 << (n / 2) {
            bad.push(format!("multigraph_ngon({n})"));
        }
        checked += 1;
    }
    let randoms = 520u64;
    for seed in 0..randoms {
        let n = 4 + 2 * (seed as usize % 5);
        let spec = random_cubic(n, 1000 + seed).unwrap();
        let oracle = oracle_cycles(&spec).unwrap();
        let ok = common::listed_sorted(&spec).is_ok_and(|l| l == oracle)
            && count_cycles(&spec).unwrap() == BigUint::from(oracle.len());
        if !ok {
            bad.push(format!("random_cubic({n}, seed {})", 1000 + seed));
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    verdict(
        bad.is_empty() && fast,
        format!("{checked} family instances + {randoms} random, mismatches {bad:?}, {time}"),
    )
}

/// Torus sizes named by the branch-count criteria, up to 200 vertices.
const TORUS: &[(usize, usize)] = &[
    (2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (4, 5), (5, 5), (5, 6), (4, 8),
    (5, 7), (6, 7), (7, 7), (7, 8), (8, 8), (8, 10), (10, 10),
];

/// Exhaustive search stops being feasible above this many torus vertices:
/// node counts grow about fifteenfold per twenty vertices.
const TORUS_EXHAUSTIVE: usize = 64;

fn bound_instances() -> (Vec<(String, GraphSpec)>, Vec<String>) {
    let mut run = Vec::new();
    let mut skipped = Vec::new();
    for k in 1..=10 {
        run.push((format!("gadget_cycle({k})"), gadget_cycle(k).unwrap()));
    }
    for &(p, q) in TORUS {
        let name = format!("torus_dual({p},{q})");
        if 2 * p * q <= TORUS_EXHAUSTIVE {
            run.push((name, torus_dual(p, q).unwrap()));
        } else {
            skipped.push(name);
        }
    }
    for n in (6..=36).step_by(2) {
        for seed in 0..3 {
            run.push((format!("random_cubic({n}, seed {seed})"), random_cubic(n, seed).unwrap()));
        }
    }
    (run, skipped)
}

fn bound_verdict(kind: &str, worst: (f64, String), over: Vec<String>, skipped: &[String], start: Instant) -> Verdict {
    let skipped_note = if skipped.is_empty() {
        String::new()
    } else {
        format!(
            "; not run, exhaustive {kind} infeasible: {} ({}..200 vertices)",
            skipped.join(" "),
            TORUS_EXHAUSTIVE + 1
        )
    };
    verdict(
        over.is_empty() && skipped.is_empty(),
        format!(
            "over bound {over:?}, largest nodes/bound {:.2e} on {}, {:.1}s{skipped_note}",
            worst.0,
            worst.1,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn tsp_branch_bound() -> Verdict {
    let start = Instant::now();
    let (run, skipped) = bound_instances();
    let mut over = Vec::new();
    let mut worst = (0.0, String::new());
    for (name, spec) in run {
        let stats = solve(&spec, SolveOptions::default()).unwrap().stats;
        let bound = 64.0 * 2f64.powf(stats.initial_measure as f64 / 3.0) + 64.0;
        let ratio = stats.branch_nodes as f64 / bound;
        if ratio > worst.0 {
            worst = (ratio, name.clone());
        }
        if stats.branch_nodes as f64 > bound {
            over.push(name);
        }
    }
    bound_verdict("search", worst, over, &skipped, start)
}

fn listing_branch_bound() -> Verdict {
    let start = Instant::now();
    let (run, skipped) = bound_instances();
    let mut over = Vec::new();
    let mut worst = (0.0, String::new());
    for (name, spec) in run {
        let stats = list_cycles(&spec, ListOptions::default(), |_| ControlFlow::Continue(())).unwrap();
        let bound = 64.0 * 2f64.powf(stats.initial_unforced as f64 / 4.0) + 64.0;
        let ratio = stats.branch_nodes as f64 / bound;
        if ratio > worst.0 {
            worst = (ratio, name.clone());
        }
        if stats.branch_nodes as f64 > bound {
            over.push(name);
        }
    }
    bound_verdict("listing", worst, over, &skipped, start)
}

fn extremal_counts() -> Verdict {
    let mut wrong = Vec::new();
    for k in 1..=8u32 {
        if count_cycles(&gadget_cycle(k as usize).unwrap()).unwrap() != BigUint::from(4u32).pow(k) {
            wrong.push(k);
        }
    }
    let mut instances = common::simple_family_instances(14);
    instances.extend((1..=8).map(|k| (format!("gadget_cycle({k})"), gadget_cycle(k).unwrap())));
    instances.extend((0..500u64).map(|s| {
        let n = 4 + 2 * (s as usize % 5);
        (format!("random_cubic({n}, seed {})", 1000 + s), random_cubic(n, 1000 + s).unwrap())
    }));
    // (vertices, count) -> instances
    let mut above: BTreeMap<(usize, String), Vec<String>> = BTreeMap::new();
    let mut checked = 0;
    for (name, spec) in &instances {
        if !spec.is_simple() || !spec.degrees().iter().all(|&d| d == 3) {
            continue;
        }
        checked += 1;
        let count = count_cycles(spec).unwrap();
        let n = spec.vertex_count;
        if count.to_string().parse::<f64>().unwrap() > 2f64.powf(3.0 * n as f64 / 8.0) {
            above.entry((n, count.to_string())).or_default().push(name.clone());
        }
    }
    let report: Vec<String> = above
        .iter()
        .map(|((n, c), names)| {
            let bound = 2f64.powf(3.0 * *n as f64 / 8.0);
            format!("n={n}: {c} cycles > {bound:.2} on {} instance(s), e.g. {}", names.len(), names[0])
        })
        .collect();
    verdict(
        wrong.is_empty() && above.is_empty(),
        format!(
            "4^k counts for k in 1..=8 wrong for {wrong:?}; {checked} simple cubic instances, above 2^(3n/8): [{}]",
            report.join("; ")
        ),
    )
}

fn torus_solve() -> Verdict {
    let start = Instant::now();
    let spec = torus_dual(10, 20).unwrap();
    let out = solve(&spec, SolveOptions { prune: true, ..SolveOptions::default() }).unwrap();
    let (fast, time) = within(Duration::from_secs(60), start);
    let valid = out.solution.as_ref().is_some_and(|s| is_valid_tour(&spec, &s.tour, s.cost));
    verdict(
        valid && fast,
        format!("400 vertices, tour found and valid: {valid}, {} branch nodes, {time}", out.stats.branch_nodes),
    )
}

fn degree_four_deterministic() -> Verdict {
    let mut bad = Vec::new();
    let count = 210u64;
    for seed in 0..count {
        let n = 5 + seed as usize % 3;
        let spec = common::weighted_quartic(n, seed);
        let expected = oracle_tsp(&spec).unwrap().map(|(c, _)| c);
        for k in 1..=3 {
            let opts = Degree4Options { group_size: k, ..Degree4Options::default() };
            let sol = solve_deterministic(&spec, &opts).unwrap().solution;
            let ok = sol.as_ref().map(|s| s.cost) == expected
                && sol.as_ref().map_or(true, |s| is_valid_tour(&spec, &s.tour, s.cost));
            if !ok {
                bad.push((seed, k));
            }
        }
    }
    verdict(bad.is_empty(), format!("{count} graphs x k in 1..=3, mismatches {bad:?}"))
}

/// `P(X >= x)` for `X ~ Binomial(n, p)`.
fn binomial_upper_tail(n: u64, p: f64, x: u64) -> f64 {
    let mut pmf = (1.0 - p).powi(n as i32);
    let mut below = 0.0;
    for k in 0..x {
        below += pmf;
        pmf *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
    }
    (1.0 - below).max(0.0)
}

fn degree_four_randomized() -> Verdict {
    let start = Instant::now();
    let spec = common::weighted_k5();
    let best = oracle_tsp(&spec).unwrap().map(|(c, _)| c);
    let trials = 200u64;
    let failures = (0..trials)
        .filter(|&seed| {
            let opts = Degree4Options { seed, lambda: 5.0, ..Degree4Options::default() };
            solve_randomized(&spec, &opts).unwrap().solution.map(|s| s.cost) != best
        })
        .count() as u64;
    let p_value = binomial_upper_tail(trials, (-5f64).exp(), failures);
    let (fast, time) = within(Duration::from_secs(60), start);
    let rate = (trials - failures) as f64 / trials as f64;
    verdict(
        rate >= 0.99 && fast,
        format!(
            "optimum in {}/{trials} trials ({:.1}%), P(>= {failures} failures at e^-5) = {p_value:.3}, {time}",
            trials - failures,
            100.0 * rate
        ),
    )
}

fn hitting_sets() -> Verdict {
    let mut sizes = Vec::new();
    let mut ok = true;
    for k in 1..=6 {
        let h = build_hitting_set(k);
        ok &= h.hits_all() && h.words.len() <= size_bound(k);
        sizes.push(format!("k={k}: {}/{}", h.words.len(), size_bound(k)));
    }
    verdict(ok, format!("sizes/bounds {}", sizes.join(", ")))
}

fn rule_soundness() -> Verdict {
    const NEEDED: u64 = 200;
    const MAX_WALKS: u64 = 100_000;
    let tsp_rules = [
        Rule::ForceDegreeTwo,
        Rule::ContractPath,
        Rule::DropParallel,
        Rule::DropLoop,
        Rule::ContractTriangle,
        Rule::ForceQuad,
    ];
    let listing_rules = [
        Rule::LowDegree,
        Rule::Claw,
        Rule::HamiltonianTerminal,
        Rule::NonHamiltonianTerminal,
        Rule::ContractPath,
        Rule::ForceDegreeTwo,
        Rule::ForceTriangleEdge,
    ];
    let mut tsp = common::Tally::default();
    let mut seed = 0;
    while seed < MAX_WALKS && tsp_rules.iter().any(|r| tsp.instances[r.index()] < NEEDED) {
        let mut r = common::rng(seed);
        let spec = common::tsp_walk_instance(&mut r);
        common::soundness_walk(&spec, Mode::Tsp, 0.7, &mut r, &mut tsp);
        seed += 1;
    }
    let mut listing = common::Tally::default();
    let mut seed = 0;
    while seed < MAX_WALKS && listing_rules.iter().any(|r| listing.instances[r.index()] < NEEDED) {
        let mut r = common::rng(seed);
        let spec = common::listing_walk_instance(&mut r);
        common::soundness_walk(&spec, Mode::Listing, 0.8, &mut r, &mut listing);
        seed += 1;
    }
    let describe = |tally: &common::Tally, rules: &[Rule]| {
        rules
            .iter()
            .map(|r| format!("{r}:{}/{}", tally.instances[r.index()], tally.fired[r.index()]))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let enough = tsp_rules.iter().all(|r| tsp.instances[r.index()] >= NEEDED)
        && listing_rules.iter().all(|r| listing.instances[r.index()] >= NEEDED);
    let failures: Vec<&String> = tsp.failures.iter().chain(&listing.failures).take(3).collect();
    verdict(
        enough && failures.is_empty(),
        format!(
            "instances/firings tsp [{}] listing [{}], failures {failures:?}",
            describe(&tsp, &tsp_rules),
            describe(&listing, &listing_rules)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("TSP oracle equivalence", tsp_oracle_equivalence),
        ("listing oracle equivalence", listing_oracle_equivalence),
        ("TSP branch-count bound", tsp_branch_bound),
        ("listing branch-count bound", listing_branch_bound),
        ("extremal cycle counts", extremal_counts),
        ("torus_dual(10,20) solve", torus_solve),
        ("degree-4 deterministic", degree_four_deterministic),
        ("degree-4 randomized", degree_four_randomized),
        ("hitting sets", hitting_sets),
        ("reduction-rule soundness", rule_soundness),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        all &= v.pass;
        println!("{} criterion {} ({name}): {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
