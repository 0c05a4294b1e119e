mod common;

use cubic_tsp::oracle::{is_valid_tour, oracle_tsp};
use cubic_tsp::tsp::{solve, SolveOptions};

#[test]
fn random_cubic_matches_oracle() {
    let opts = SolveOptions { check_measure: true, self_check: true, ..SolveOptions::default() };
    for seed in 0..300u64 {
        let n = 6 + 2 * (seed as usize % 4);
        let spec = common::weighted_instance(n, 3, seed);
        let expected = oracle_tsp(&spec).unwrap().map(|(c, _)| c);
        let out = solve(&spec, opts).unwrap();
        let got = out.solution.as_ref().map(|s| s.cost);
        assert_eq!(got, expected, "seed {seed}");
        if let Some(sol) = &out.solution {
            assert!(is_valid_tour(&spec, &sol.tour, sol.cost), "seed {seed}");
        }
        assert_eq!(out.stats.measure_violations, 0, "seed {seed}");
        assert_eq!(out.stats.measure_increases, 0, "seed {seed}");
    }
}
