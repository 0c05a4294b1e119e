//! Non-branching reduction rules.
//!
//! [`Engine`] owns a [`Multigraph`] together with its [`MatchSets`] and
//! applies reduction rules until one returns or none applies. Rule selection
//! is a lookup of the first match in a fixed priority order:
//!
//! * TSP mode: degree ≤ 1, three forced ends at a vertex, the one-vertex and
//!   two-vertex forced-cycle terminals (these three return immediately), then
//!   contraction of a forced two-path, then degree-two forcing, parallel edge
//!   removal, self-loop removal, Delta-Y contraction of triangles, and forcing
//!   around a 4-cycle with forced edges at opposite corners.
//! * Listing mode: degree ≤ 1 / forced claw / forced triangle (backtrack, or
//!   output when exactly three vertices remain), forced two-path contraction
//!   with parallel-edge cleanup, degree-two forcing, and the triangle forcing
//!   rule.
//!
//! Among matches of one rule the one with the smallest key (smallest
//! relevant edge id) fires.

use std::fmt;

use crate::graph::{EdgeId, Multigraph, TrailMark, VertexId, Weight};
use crate::matches::{Match, MatchSets, Pattern};

pub use crate::matches::Mode;

/// Identifies a rule for statistics and traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Degree 0 or 1: return None.
    LowDegree,
    /// Forced set is a Hamiltonian cycle (one- or two-vertex terminal).
    HamiltonianTerminal,
    /// Forced set contains a shorter cycle.
    NonHamiltonianTerminal,
    /// Three forced edges at a vertex.
    Claw,
    /// Merge two forced edges through their common vertex.
    ContractPath,
    /// Force both edges of a degree-two vertex.
    ForceDegreeTwo,
    /// Drop the unforced (costlier) edge of a parallel pair.
    DropParallel,
    /// Drop an unforced self-loop.
    DropLoop,
    /// Delta-Y transformation of a triangle.
    ContractTriangle,
    /// Force the exits of a 4-cycle with forced edges at opposite corners.
    ForceQuad,
    /// Listing: force `yz` in a triangle whose outside edge at `x` is forced.
    ForceTriangleEdge,
}

pub const RULE_COUNT: usize = 11;

impl Rule {
    pub const ALL: [Rule; RULE_COUNT] = [
        Rule::LowDegree,
        Rule::HamiltonianTerminal,
        Rule::NonHamiltonianTerminal,
        Rule::Claw,
        Rule::ContractPath,
        Rule::ForceDegreeTwo,
        Rule::DropParallel,
        Rule::DropLoop,
        Rule::ContractTriangle,
        Rule::ForceQuad,
        Rule::ForceTriangleEdge,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short identifier used in traces and statistics.
    pub fn code(self) -> &'static str {
        match self {
            Rule::LowDegree => "1a",
            Rule::ForceDegreeTwo => "1b",
            Rule::HamiltonianTerminal => "1c",
            Rule::NonHamiltonianTerminal => "1d",
            Rule::Claw => "1e",
            Rule::ContractPath => "1f",
            Rule::DropParallel => "1g",
            Rule::DropLoop => "1h",
            Rule::ContractTriangle => "1i",
            Rule::ForceQuad => "1j",
            Rule::ForceTriangleEdge => "tri-force",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One fired rule, as recorded by the optional trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub rule: Rule,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        for e in &self.edges {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

/// Result of running the reduction rules to a fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceOutcome {
    ReturnNone,
    /// The forced set is a Hamiltonian cycle; `tour` lists input edge ids.
    ReturnCost { cost: Weight, tour: Vec<EdgeId> },
    /// No rule applies.
    Exhausted,
}

/// Internal form of a returning step: the terminal forced edges are live
/// edges whose provenance forms the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Stop {
    None(Rule),
    Hamiltonian(Vec<EdgeId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Fired(Rule),
    ReturnNone(Rule),
    Hamiltonian(Vec<EdgeId>),
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineMark {
    graph: TrailMark,
    matches: usize,
}

/// How a branch edge was selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchRule {
    /// Beside a 4-cycle that touches two forced edges.
    Quad,
    /// Adjacent to a forced edge.
    Adjacent,
    /// Smallest unforced edge; used when the forced set is empty.
    Initial,
}

pub struct Engine {
    graph: Multigraph,
    matches: MatchSets,
    mode: Mode,
    fires: [u64; RULE_COUNT],
    trace: Option<Vec<TraceEvent>>,
    self_check: bool,
    touched: Vec<VertexId>,
}

impl Engine {
    pub fn new(graph: Multigraph, mode: Mode) -> Self {
        let matches = MatchSets::build(&graph, mode);
        let mut graph = graph;
        graph.take_touched();
        Engine {
            graph,
            matches,
            mode,
            fires: [0; RULE_COUNT],
            trace: None,
            self_check: false,
            touched: Vec::new(),
        }
    }

    /// Records every fired rule.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    /// Verifies the match sets against a from-scratch recomputation after
    /// every step, and that no higher-priority rule was applicable when a
    /// rule fired. Quadratic; for tests.
    pub fn with_self_check(mut self, on: bool) -> Self {
        self.self_check = on;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn matches(&self) -> &MatchSets {
        &self.matches
    }

    pub fn into_graph(self) -> Multigraph {
        self.graph
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn fire_counts(&self) -> [u64; RULE_COUNT] {
        self.fires
    }

    pub(crate) fn graph_mut(&mut self) -> &mut Multigraph {
        &mut self.graph
    }

    pub fn mark(&mut self) -> EngineMark {
        self.flush();
        EngineMark { graph: self.graph.mark(), matches: self.matches.mark() }
    }

    pub fn undo_to(&mut self, mark: EngineMark) {
        self.graph.undo_to(mark.graph);
        self.graph.take_touched();
        self.touched.clear();
        self.matches.undo_to(mark.matches);
    }

    fn flush(&mut self) {
        self.graph.drain_touched_into(&mut self.touched);
        if !self.touched.is_empty() {
            let touched = std::mem::take(&mut self.touched);
            self.matches.refresh(&self.graph, &touched);
            self.touched = touched;
            self.touched.clear();
        }
    }

    /// Adds `e` to the forced set (the include branch).
    pub fn force(&mut self, e: EdgeId) {
        self.graph.force_edge(e);
        self.flush();
    }

    /// Removes `e` (the exclude branch).
    pub fn delete(&mut self, e: EdgeId) {
        self.graph.delete_edge(e);
        self.flush();
    }

    /// Number of unforced 4-cycles that are whole components of the
    /// unforced subgraph.
    pub fn quad_components(&self) -> usize {
        self.matches.len(Pattern::QuadComponent)
    }

    pub fn quad_component_matches(&self) -> impl Iterator<Item = &Match> + '_ {
        self.matches.iter(Pattern::QuadComponent)
    }

    /// `|V| - |F| - |C|`.
    pub fn measure_s(&self) -> i64 {
        self.graph.vertex_count() as i64
            - self.graph.forced_count() as i64
            - self.quad_components() as i64
    }

    /// Number of unforced edges.
    pub fn measure_u(&self) -> i64 {
        self.graph.unforced_count() as i64
    }

    fn record(&mut self, rule: Rule, vertices: &[VertexId], edges: &[EdgeId]) {
        self.fires[rule.index()] += 1;
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceEvent { rule, vertices: vertices.to_vec(), edges: edges.to_vec() });
        }
    }

    /// Runs rules until one returns or none applies.
    pub fn reduce(&mut self) -> ReduceOutcome {
        match self.reduce_raw() {
            None => ReduceOutcome::Exhausted,
            Some(Stop::None(_)) => ReduceOutcome::ReturnNone,
            Some(Stop::Hamiltonian(edges)) => {
                let cost = edges.iter().map(|&e| self.graph.edge(e).weight).sum();
                ReduceOutcome::ReturnCost { cost, tour: self.graph.provenance_of_all(&edges) }
            }
        }
    }

    /// `None` when exhausted.
    pub(crate) fn reduce_raw(&mut self) -> Option<Stop> {
        loop {
            match self.step() {
                Step::Fired(_) => continue,
                Step::ReturnNone(rule) => return Some(Stop::None(rule)),
                Step::Hamiltonian(edges) => return Some(Stop::Hamiltonian(edges)),
                Step::Exhausted => return None,
            }
        }
    }

    /// Applies exactly one rule.
    pub fn step(&mut self) -> Step {
        self.flush();
        let selected = self.select();
        if self.self_check {
            if let Some(report) = self.matches.mismatch_report(&self.graph) {
                panic!("match sets out of sync: {report}");
            }
            let brute = select_brute(&self.graph, self.mode);
            assert_eq!(
                selected.as_ref().map(|(r, m)| (*r, *m)),
                brute,
                "priority violated: incremental choice differs from exhaustive choice"
            );
        }
        let Some((rule, m)) = selected else {
            return Step::Exhausted;
        };
        let result = self.apply(rule, &m);
        self.flush();
        result
    }

    /// Highest-priority applicable rule and its match.
    fn select(&self) -> Option<(Rule, Match)> {
        select_from(&self.graph, self.mode, |p| self.matches.first(p).copied())
    }

    fn apply(&mut self, rule: Rule, m: &Match) -> Step {
        let g = &self.graph;
        match rule {
            Rule::LowDegree | Rule::Claw => {
                self.record(rule, &[m.anchor], &[]);
                Step::ReturnNone(rule)
            }
            Rule::NonHamiltonianTerminal => {
                self.record(rule, &[m.anchor], &[]);
                Step::ReturnNone(rule)
            }
            Rule::HamiltonianTerminal => {
                let edges: Vec<EdgeId> = match m.pattern {
                    Pattern::ForcedLoop => vec![m.edge(0)],
                    Pattern::ForcedPair => vec![m.edge(0), m.edge(1)],
                    Pattern::ForcedTriangle => vec![m.edge(2), m.edge(3), m.edge(4)],
                    p => unreachable!("terminal from {p:?}"),
                };
                self.record(rule, &[m.anchor], &edges);
                Step::Hamiltonian(edges)
            }
            Rule::ContractPath => {
                let (e1, e2) = (m.edge(0), m.edge(1));
                let b = m.anchor;
                if self.mode == Mode::Listing {
                    // the new edge would be parallel to an existing one: drop it
                    let a = g.edge(e1).other(b);
                    let c = g.edge(e2).other(b);
                    let clash: Vec<EdgeId> = g
                        .incident(a)
                        .iter()
                        .copied()
                        .filter(|&x| !g.edge(x).is_loop() && g.edge(x).other(a) == c)
                        .collect();
                    for x in clash {
                        debug_assert!(!self.graph.edge(x).forced, "forced triangle missed");
                        self.graph.delete_edge(x);
                    }
                }
                self.record(rule, &[b], &[e1, e2]);
                self.graph.merge_path(e1, e2);
                Step::Fired(rule)
            }
            Rule::ForceDegreeTwo => {
                let es = [m.edge(0), m.edge(1)];
                self.record(rule, &[m.anchor], &es);
                for e in es {
                    self.graph.force_edge(e);
                }
                Step::Fired(rule)
            }
            Rule::DropParallel => {
                let (e, f) = (m.edge(0), m.edge(1));
                let drop = parallel_victim(g, e, f);
                self.record(rule, &[m.anchor], &[drop]);
                self.graph.delete_edge(drop);
                Step::Fired(rule)
            }
            Rule::DropLoop => {
                self.record(rule, &[m.anchor], &[m.edge(0)]);
                self.graph.delete_edge(m.edge(0));
                Step::Fired(rule)
            }
            Rule::ContractTriangle => {
                let (x, y, z) = (m.anchor, m.vertex(0), m.vertex(1));
                for v in [x, y, z] {
                    assert_eq!(
                        g.degree(v),
                        3,
                        "triangle contraction at {v}: neighbourhood is not cubic"
                    );
                }
                self.record(rule, &[x, y, z], &[m.edge(2), m.edge(3), m.edge(4)]);
                self.graph.contract_triangle(x, y, z);
                Step::Fired(rule)
            }
            Rule::ForceQuad => {
                let verts = [m.anchor, m.vertex(0), m.vertex(1), m.vertex(2)];
                let cycle = [m.edge(3), m.edge(4), m.edge(5), m.edge(6)];
                let mut exits = Vec::new();
                for v in verts {
                    for &e in g.incident(v) {
                        if !cycle.contains(&e) && !g.edge(e).forced && !exits.contains(&e) {
                            exits.push(e);
                        }
                    }
                }
                self.record(rule, &verts, &exits);
                for e in exits {
                    self.graph.force_edge(e);
                }
                Step::Fired(rule)
            }
            Rule::ForceTriangleEdge => {
                // items: [a, b, e_ab, e_vb, e_va, x]; force the edge opposite x
                let tri = [m.anchor, m.vertex(0), m.vertex(1)];
                let opp = [m.edge(2), m.edge(3), m.edge(4)];
                let x = m.vertex(5);
                let i = tri.iter().position(|&t| t == x).expect("x on triangle");
                self.record(rule, &tri, &[opp[i]]);
                self.graph.force_edge(opp[i]);
                Step::Fired(rule)
            }
        }
    }

    /// Chooses the edge to branch on once the rules are exhausted.
    ///
    /// Panics if no unforced edge is left.
    pub fn choose_branch_edge(&mut self) -> (EdgeId, BranchRule) {
        self.flush();
        if self.mode == Mode::Tsp {
            if let Some(m) = self.matches.first(Pattern::BranchQuad) {
                return (EdgeId(m.key), BranchRule::Quad);
            }
        }
        if let Some(m) = self.matches.first(Pattern::BranchAdjacent) {
            return (EdgeId(m.key), BranchRule::Adjacent);
        }
        let g = &self.graph;
        let e = g
            .edges()
            .find(|&e| !g.edge(e).forced && !g.edge(e).is_loop())
            .expect("branching requires an unforced edge");
        (e, BranchRule::Initial)
    }

    /// True when the graph is simple and cubic and the forced edges form a
    /// matching. With `triangle_free`, also requires no triangles.
    pub fn is_reduced_cubic(&self, triangle_free: bool) -> bool {
        let g = &self.graph;
        g.vertices().all(|v| g.degree(v) == 3 && g.forced_degree(v) <= 1)
            && g.is_simple()
            && (!triangle_free || !has_triangle(g))
    }
}

fn has_triangle(g: &Multigraph) -> bool {
    g.vertices().any(|v| {
        let nb: Vec<VertexId> = g.incident(v).iter().map(|&e| g.edge(e).other(v)).collect();
        nb.iter().enumerate().any(|(i, &a)| {
            nb[i + 1..]
                .iter()
                .any(|&b| a != b && g.incident(a).iter().any(|&e| g.edge(e).other(a) == b))
        })
    })
}

/// The edge of a parallel pair that the parallel rule removes: the unforced
/// one if only one is unforced, else the costlier, else the larger id.
fn parallel_victim(g: &Multigraph, e: EdgeId, f: EdgeId) -> EdgeId {
    let (re, rf) = (g.edge(e), g.edge(f));
    match (re.forced, rf.forced) {
        (true, false) => f,
        (false, true) => e,
        (false, false) => {
            if (re.weight, e) > (rf.weight, f) {
                e
            } else {
                f
            }
        }
        (true, true) => unreachable!("forced pair is a terminal"),
    }
}

/// Priority order shared by the incremental selector and the brute-force
/// check. `first(p)` returns the smallest current match of `p`.
fn select_from(
    g: &Multigraph,
    mode: Mode,
    first: impl Fn(Pattern) -> Option<Match>,
) -> Option<(Rule, Match)> {
    let n = g.vertex_count();
    if n == 0 {
        // nothing left to visit; treated like a dead end
        return Some((
            Rule::LowDegree,
            Match { pattern: Pattern::LowDegree, key: u32::MAX, anchor: VertexId(u32::MAX), items: [u32::MAX; 8] },
        ));
    }
    let pick = |p: Pattern, r: Rule| first(p).map(|m| (r, m));
    match mode {
        Mode::Tsp => pick(Pattern::LowDegree, Rule::LowDegree)
            .or_else(|| pick(Pattern::Claw, Rule::Claw))
            .or_else(|| {
                let r = if n == 1 { Rule::HamiltonianTerminal } else { Rule::NonHamiltonianTerminal };
                pick(Pattern::ForcedLoop, r)
            })
            .or_else(|| {
                let r = if n == 2 { Rule::HamiltonianTerminal } else { Rule::NonHamiltonianTerminal };
                pick(Pattern::ForcedPair, r)
            })
            .or_else(|| pick(Pattern::ForcedPath, Rule::ContractPath))
            .or_else(|| pick(Pattern::DegreeTwo, Rule::ForceDegreeTwo))
            .or_else(|| if n > 2 { pick(Pattern::UnforcedParallel, Rule::DropParallel) } else { None })
            .or_else(|| if n > 1 { pick(Pattern::UnforcedLoop, Rule::DropLoop) } else { None })
            .or_else(|| pick(Pattern::Triangle, Rule::ContractTriangle))
            .or_else(|| pick(Pattern::QuadForce, Rule::ForceQuad)),
        Mode::Listing => pick(Pattern::LowDegree, Rule::LowDegree)
            .or_else(|| pick(Pattern::Claw, Rule::Claw))
            .or_else(|| {
                let r = if n == 3 { Rule::HamiltonianTerminal } else { Rule::NonHamiltonianTerminal };
                pick(Pattern::ForcedTriangle, r)
            })
            // on three vertices the forced path closes into the terminal triangle
            .or_else(|| if n > 3 { pick(Pattern::ForcedPath, Rule::ContractPath) } else { None })
            .or_else(|| pick(Pattern::DegreeTwo, Rule::ForceDegreeTwo))
            .or_else(|| pick(Pattern::TriangleForce, Rule::ForceTriangleEdge)),
    }
}

fn select_brute(g: &Multigraph, mode: Mode) -> Option<(Rule, Match)> {
    let fresh = MatchSets::build(g, mode);
    select_from(g, mode, |p| fresh.first(p).copied())
}
