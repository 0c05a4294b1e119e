//! Branch-and-reduce search for the forced traveling salesman problem on
//! graphs of maximum degree three.
//!
//! Each search node runs the reduction rules to a fixpoint, solves the node
//! directly when the unforced edges form disjoint 4-cycles, and otherwise
//! branches on one unforced edge: first with the edge forced, then with it
//! deleted. All changes live on one undo trail, so space is linear.

use std::fmt;

use crate::error::GraphError;
use crate::four_cycle::FourCycleCover;
use crate::graph::{EdgeId, GraphSpec, Multigraph, Weight};
use crate::reduce::{BranchRule, Engine, Mode, Rule, Stop, TraceEvent, RULE_COUNT};

/// Largest vertex degree accepted by the solver.
pub const MAX_SOLVE_DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Skip subtrees whose degree lower bound cannot beat the best tour so
    /// far. Never changes the result.
    pub prune: bool,
    /// Check at every branch node that the measure decreases as the
    /// running-time analysis requires; failures are counted in the stats.
    pub check_measure: bool,
    /// Cross-check the incremental match sets and the rule priority at every
    /// step. Slow.
    pub self_check: bool,
    /// Record every fired rule.
    pub trace: bool,
}

/// An optimal tour: total cost and the input edge ids it uses, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub cost: Weight,
    pub tour: Vec<EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes at which the search branched.
    pub branch_nodes: u64,
    /// Nodes solved by the 4-cycle spanning tree step.
    pub four_cycle_leaves: u64,
    /// Branch nodes by how the branch edge was chosen.
    pub branch_quad: u64,
    pub branch_adjacent: u64,
    pub branch_initial: u64,
    pub pruned: u64,
    pub max_depth: usize,
    /// Rule firings, indexed by [`Rule::index`].
    pub rule_fires: [u64; RULE_COUNT],
    /// Measure of the input: vertices minus forced edges minus 4-cycle
    /// components of the unforced subgraph.
    pub initial_measure: i64,
    /// Branch nodes whose children failed the required measure decrease.
    pub measure_violations: u64,
    /// Search-tree edges along which the measure increased.
    pub measure_increases: u64,
}

impl SearchStats {
    pub fn fires(&self, rule: Rule) -> u64 {
        self.rule_fires[rule.index()]
    }
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch_nodes={}", self.branch_nodes)?;
        writeln!(f, "four_cycle_leaves={}", self.four_cycle_leaves)?;
        writeln!(f, "branch_quad={}", self.branch_quad)?;
        writeln!(f, "branch_adjacent={}", self.branch_adjacent)?;
        writeln!(f, "branch_initial={}", self.branch_initial)?;
        writeln!(f, "pruned={}", self.pruned)?;
        writeln!(f, "max_depth={}", self.max_depth)?;
        writeln!(f, "initial_measure={}", self.initial_measure)?;
        writeln!(f, "measure_violations={}", self.measure_violations)?;
        writeln!(f, "measure_increases={}", self.measure_increases)?;
        for rule in Rule::ALL {
            writeln!(f, "rule_{}={}", rule.code(), self.fires(rule))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub solution: Option<Solution>,
    pub stats: SearchStats,
    pub trace: Vec<TraceEvent>,
}

/// Solves the forced TSP on `spec`. Rejects vertices of degree above 3.
pub fn solve(spec: &GraphSpec, opts: SolveOptions) -> Result<SolveOutcome, GraphError> {
    if let Some((v, &d)) = spec.degrees().iter().enumerate().find(|(_, &d)| d > MAX_SOLVE_DEGREE) {
        return Err(GraphError::DegreeTooHigh { vertex: v, degree: d, max: MAX_SOLVE_DEGREE });
    }
    Ok(solve_multigraph(Multigraph::load(spec)?, opts))
}

/// Solves the forced TSP on an already loaded graph of maximum degree 3.
pub fn solve_multigraph(g: Multigraph, opts: SolveOptions) -> SolveOutcome {
    assert!(g.max_degree() <= MAX_SOLVE_DEGREE, "solver requires maximum degree 3");
    let mut engine = Engine::new(g, Mode::Tsp).with_self_check(opts.self_check);
    if opts.trace {
        engine = engine.with_trace();
    }
    let mut search = Search {
        stats: SearchStats { initial_measure: engine.measure_s(), ..SearchStats::default() },
        engine,
        opts,
        best: None,
    };
    search.node(0);
    let Search { mut engine, mut stats, best, .. } = search;
    stats.rule_fires = engine.fire_counts();
    SolveOutcome { solution: best, stats, trace: engine.take_trace() }
}

struct Search {
    engine: Engine,
    opts: SolveOptions,
    stats: SearchStats,
    best: Option<Solution>,
}

impl Search {
    fn offer(&mut self, cost: Weight, tour: Vec<EdgeId>) {
        if self.best.as_ref().map_or(true, |b| cost < b.cost) {
            self.best = Some(Solution { cost, tour });
        }
    }

    /// Explores the current state. Returns the measure at the reduced
    /// fixpoint if the node branched, `None` if it was solved or cut off
    /// without branching.
    fn node(&mut self, depth: usize) -> Option<i64> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        match self.engine.reduce_raw() {
            Some(Stop::None(_)) => return None,
            Some(Stop::Hamiltonian(edges)) => {
                let g = self.engine.graph();
                let cost = edges.iter().map(|&e| g.edge(e).weight).sum();
                let tour = g.provenance_of_all(&edges);
                self.offer(cost, tour);
                return None;
            }
            None => {}
        }
        let s = self.engine.measure_s();
        let g = self.engine.graph();
        if g.vertex_count() == 4 * self.engine.quad_components() {
            self.stats.four_cycle_leaves += 1;
            let cover = FourCycleCover::build(g).expect("4-cycle components cover the graph");
            if let Some((cost, live)) = cover.solve_live(g) {
                let tour = g.provenance_of_all(&live);
                self.offer(cost, tour);
            }
            return None;
        }
        if self.opts.prune && self.prunable() {
            self.stats.pruned += 1;
            return None;
        }

        self.stats.branch_nodes += 1;
        let bound_applies =
            self.engine.graph().forced_count() > 0 && self.engine.is_reduced_cubic(true);
        let (yz, how) = self.engine.choose_branch_edge();
        match how {
            BranchRule::Quad => self.stats.branch_quad += 1,
            BranchRule::Adjacent => self.stats.branch_adjacent += 1,
            BranchRule::Initial => self.stats.branch_initial += 1,
        }

        let mark = self.engine.mark();
        self.engine.force(yz);
        let s1 = self.node(depth + 1);
        self.engine.undo_to(mark);

        self.engine.delete(yz);
        let s2 = self.node(depth + 1);
        self.engine.undo_to(mark);

        if self.opts.check_measure {
            for c in [s1, s2].into_iter().flatten() {
                if c > s {
                    self.stats.measure_increases += 1;
                }
            }
            if bound_applies && !recurrence_holds(s, s1, s2) {
                self.stats.measure_violations += 1;
            }
        }
        Some(s)
    }

    /// Every tour uses two edge ends at each vertex, forced ones first, so
    /// half the sum of the two cheapest admissible ends bounds its cost.
    fn prunable(&self) -> bool {
        let Some(best) = &self.best else { return false };
        let g = self.engine.graph();
        let mut twice = 0;
        for v in g.vertices() {
            let mut forced: Vec<Weight> = Vec::new();
            let mut free: Vec<Weight> = Vec::new();
            for &e in g.incident(v) {
                let r = g.edge(e);
                if r.is_loop() {
                    return false;
                }
                if r.forced { forced.push(r.weight) } else { free.push(r.weight) }
            }
            if forced.len() + free.len() < 2 {
                return false;
            }
            free.sort_unstable();
            twice += forced.iter().chain(free.iter()).take(2).sum::<Weight>();
        }
        twice >= 2 * best.cost
    }
}

/// Children measures `a`, `b`, with `None` for a child that returned
/// during reduction. Accepts: both at most `s - 3`; one at most `s - 2` and
/// the other at most `s - 5`; or a single surviving child at most `s - 1`.
fn recurrence_holds(s: i64, a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), None) | (None, Some(x)) => x <= s - 1,
        (Some(x), Some(y)) => {
            let (hi, lo) = (x.max(y), x.min(y));
            hi <= s - 3 || (hi <= s - 2 && lo <= s - 5)
        }
    }
}
