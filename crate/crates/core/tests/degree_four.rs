mod common;

use std::collections::BTreeSet;

use cubic_tsp::degree_four::{
    degree_four_vertices, solve_deterministic, solve_randomized, split, Degree4Options,
};
use cubic_tsp::oracle::{is_valid_tour, oracle_cycles, oracle_tsp};
use cubic_tsp::EdgeId;

#[test]
fn deterministic_matches_oracle() {
    for seed in 0..40u64 {
        let n = 5 + seed as usize % 3;
        let spec = common::weighted_quartic(n, seed);
        let expected = oracle_tsp(&spec).unwrap().map(|(c, _)| c);
        for k in 1..=3 {
            let opts = Degree4Options { group_size: k, ..Degree4Options::default() };
            let out = solve_deterministic(&spec, &opts).unwrap();
            assert_eq!(out.solution.as_ref().map(|s| s.cost), expected, "seed {seed} k {k}");
            if let Some(sol) = out.solution {
                assert!(is_valid_tour(&spec, &sol.tour, sol.cost), "seed {seed} k {k}");
            }
        }
    }
}

#[test]
fn each_tour_survives_two_of_three_pairings_per_vertex() {
    let spec = common::weighted_k5();
    let f = degree_four_vertices(&spec).len();
    let tours = oracle_cycles(&spec).unwrap();
    assert_eq!(tours.len(), 12);
    let mut survivals = vec![0u32; tours.len()];
    for code in 0..3u32.pow(f as u32) {
        let choices: Vec<u8> = (0..f).map(|i| (code / 3u32.pow(i as u32) % 3) as u8).collect();
        let s = split(&spec, &choices).unwrap();
        let kept: BTreeSet<Vec<EdgeId>> = oracle_cycles(&s.spec)
            .unwrap()
            .into_iter()
            .map(|c| c.into_iter().filter(|e| e.index() < s.synthetic_from).collect())
            .collect();
        for (t, tour) in tours.iter().enumerate() {
            survivals[t] += kept.contains(tour) as u32;
        }
    }
    assert!(survivals.iter().all(|&c| c == 2u32.pow(f as u32)), "{survivals:?}");
}

#[test]
fn randomized_usually_finds_optimum() {
    let spec = common::weighted_k5();
    let best = oracle_tsp(&spec).unwrap().unwrap().0;
    let hits = (0..20u64)
        .filter(|&seed| {
            let opts = Degree4Options { seed, ..Degree4Options::default() };
            solve_randomized(&spec, &opts).unwrap().solution.map(|s| s.cost) == Some(best)
        })
        .count();
    assert!(hits >= 19, "{hits} of 20");
}
