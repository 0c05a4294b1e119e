mod common;

use std::ops::ControlFlow;

use cubic_tsp::listing::{list_cycles, ListOptions};
use cubic_tsp::oracle::oracle_cycles;

const CHECKED: ListOptions = ListOptions { check_measure: true, self_check: true };

#[test]
fn random_cubic_cycle_sets_match_oracle() {
    for seed in 0..200u64 {
        let n = 4 + 2 * (seed as usize % 5);
        let mut spec = cubic_tsp::generators::random_cubic(n, seed).unwrap();
        common::force_random_matching(&mut spec, seed as usize % 3, &mut common::rng(seed));
        let listed = common::listed_sorted(&spec).unwrap();
        assert_eq!(listed, oracle_cycles(&spec).unwrap(), "seed {seed}");
    }
}

#[test]
fn family_cycle_sets_match_oracle() {
    for (name, spec) in common::simple_family_instances(16) {
        let listed = common::listed_sorted(&spec).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(listed, oracle_cycles(&spec).unwrap(), "{name}");
    }
}

#[test]
fn measure_decreases_on_families() {
    for (name, spec) in common::simple_family_instances(18) {
        let stats = list_cycles(&spec, CHECKED, |_| ControlFlow::Continue(())).unwrap();
        assert_eq!(stats.measure_violations, 0, "{name}");
        assert_eq!(stats.measure_increases, 0, "{name}");
    }
}
