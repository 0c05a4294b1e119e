//! Traveling salesman on graphs of maximum degree four by vertex splitting.
//!
//! A degree-4 vertex is replaced by two vertices joined by a forced edge of
//! weight 0, each taking two of the four edge ends. A tour survives the
//! split iff its two ends at the vertex are put on different sides, which
//! holds for two of the three ways to pair the ends. Tours of the split
//! graph map back to tours of the same cost by dropping the bridge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;
use crate::graph::{EdgeSpec, GraphSpec, Multigraph};
use crate::hitting_set::{build_hitting_set, HittingSet};
use crate::tsp::{solve_multigraph, SolveOptions, Solution};

pub const DEFAULT_LAMBDA: f64 = 5.0;

/// Pairings of the four ends `h0..h3` at a vertex, by digit.
const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// A split graph. Edges at index `>= synthetic_from` are the bridges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitGraph {
    pub spec: GraphSpec,
    pub synthetic_from: usize,
}

impl SplitGraph {
    pub fn load(&self) -> Multigraph {
        Multigraph::load_with_synthetic(&self.spec, self.synthetic_from)
            .expect("split graph is well formed")
    }
}

/// Vertices of degree 4, in increasing order.
pub fn degree_four_vertices(spec: &GraphSpec) -> Vec<usize> {
    spec.degrees().iter().enumerate().filter(|(_, &d)| d == 4).map(|(v, _)| v).collect()
}

fn check_input(spec: &GraphSpec) -> Result<(), GraphError> {
    if let Some((v, &d)) = spec.degrees().iter().enumerate().find(|(_, &d)| d > 4) {
        return Err(GraphError::DegreeTooHigh { vertex: v, degree: d, max: 4 });
    }
    Ok(())
}

/// Splits every degree-4 vertex; `choices[i]` (0, 1 or 2) selects the
/// pairing at the `i`-th degree-4 vertex. The ends at a vertex are ordered
/// by edge index, and for a self-loop the `u` end comes first.
pub fn split(spec: &GraphSpec, choices: &[u8]) -> Result<SplitGraph, GraphError> {
    check_input(spec)?;
    let four = degree_four_vertices(spec);
    assert_eq!(choices.len(), four.len(), "one choice per degree-4 vertex");
    let mut out = spec.clone();
    // ends[v] lists (edge index, side) in edge order
    let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); spec.vertex_count];
    for (i, e) in spec.edges.iter().enumerate() {
        ends[e.u].push((i, 0));
        ends[e.v].push((i, 1));
    }
    for (&v, &c) in four.iter().zip(choices) {
        assert!(c < 3, "choice digit out of range");
        let p = PAIRINGS[c as usize];
        let twin = out.vertex_count;
        out.vertex_count += 1;
        for &slot in &p[2..] {
            let (i, side) = ends[v][slot];
            let e = &mut out.edges[i];
            if side == 0 { e.u = twin } else { e.v = twin }
        }
        out.edges.push(EdgeSpec::forced(v, twin, 0));
    }
    Ok(SplitGraph { spec: out, synthetic_from: spec.edges.len() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Degree4Options {
    pub seed: u64,
    pub lambda: f64,
    pub group_size: usize,
    /// Worker threads for independent expansions; 0 or 1 runs inline.
    pub jobs: usize,
    pub solve: SolveOptions,
}

impl Default for Degree4Options {
    fn default() -> Self {
        Degree4Options {
            seed: 0,
            lambda: DEFAULT_LAMBDA,
            group_size: 2,
            jobs: 1,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree4Outcome {
    pub solution: Option<Solution>,
    /// Split graphs solved.
    pub expansions: u64,
    pub branch_nodes: u64,
}

/// Number of random repetitions: `ceil(lambda (3/2)^f)`, and 1 when `f = 0`.
pub fn repetitions(f: usize, lambda: f64) -> u64 {
    if f == 0 {
        return 1;
    }
    (lambda * 1.5f64.powi(f as i32)).ceil().max(1.0) as u64
}

/// Best tour over independently and uniformly random splits. May miss the
/// optimum with probability at most `e^-lambda`.
pub fn solve_randomized(spec: &GraphSpec, opts: &Degree4Options) -> Result<Degree4Outcome, GraphError> {
    check_input(spec)?;
    assert!(opts.lambda > 0.0, "lambda must be positive");
    let f = degree_four_vertices(spec).len();
    let reps = repetitions(f, opts.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let all: Vec<Vec<u8>> =
        (0..reps).map(|_| (0..f).map(|_| rng.gen_range(0..3u8)).collect()).collect();
    run_expansions(spec, reps, opts, |i| all[i as usize].clone())
}

/// Exact: tries every combination of hitting-set words over groups of
/// `opts.group_size` degree-4 vertices.
pub fn solve_deterministic(spec: &GraphSpec, opts: &Degree4Options) -> Result<Degree4Outcome, GraphError> {
    check_input(spec)?;
    let f = degree_four_vertices(spec).len();
    let k = opts.group_size;
    let set: HittingSet = build_hitting_set(k);
    let groups = f.div_ceil(k);
    let radix = set.words.len() as u64;
    let total = radix.checked_pow(groups as u32).expect("too many expansions");
    run_expansions(spec, total, opts, |mut i| {
        let mut choices = Vec::with_capacity(groups * k);
        for _ in 0..groups {
            choices.extend_from_slice(&set.words[(i % radix) as usize]);
            i /= radix;
        }
        // the padding digits of the last group are dropped
        choices.truncate(f);
        choices
    })
}

fn run_expansions<C>(
    spec: &GraphSpec,
    count: u64,
    opts: &Degree4Options,
    choices: C,
) -> Result<Degree4Outcome, GraphError>
where
    C: Fn(u64) -> Vec<u8> + Sync,
{
    // validate once so workers can unwrap
    split(spec, &choices(0))?;
    let run_range = |lo: u64, hi: u64| {
        let mut best: Option<(Solution, u64)> = None;
        let mut nodes = 0;
        for i in lo..hi {
            let g = split(spec, &choices(i)).expect("validated").load();
            let out = solve_multigraph(g, opts.solve);
            nodes += out.stats.branch_nodes;
            if let Some(sol) = out.solution {
                if best.as_ref().map_or(true, |(b, _)| sol.cost < b.cost) {
                    best = Some((sol, i));
                }
            }
        }
        (best, nodes)
    };
    let jobs = (opts.jobs.max(1) as u64).min(count.max(1));
    let parts: Vec<(Option<(Solution, u64)>, u64)> = if jobs <= 1 {
        vec![run_range(0, count)]
    } else {
        let chunk = count.div_ceil(jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let lo = (j * chunk).min(count);
                    let hi = ((j + 1) * chunk).min(count);
                    let run = &run_range;
                    s.spawn(move || run(lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let branch_nodes = parts.iter().map(|p| p.1).sum();
    // earliest expansion among the cheapest, independent of threading
    let solution = parts
        .into_iter()
        .filter_map(|p| p.0)
        .min_by_key(|(s, i)| (s.cost, *i))
        .map(|(s, _)| s);
    Ok(Degree4Outcome { solution, expansions: count, branch_nodes })
}
