//! Incrementally maintained sets of pattern matches.
//!
//! Every pattern is a connected configuration of O(1) edges. Each match is
//! owned by an *anchor* vertex (the smallest vertex id of its core), and the
//! matches anchored at a vertex are cached. After a batch of graph mutations
//! the engine rescans every vertex within distance [`rescan_radius`] of a
//! touched vertex; every match that could have been created or destroyed is
//! anchored inside that ball. Cache replacements are logged, so the sets can
//! be rolled back together with the graph.

use std::collections::BTreeSet;

use crate::graph::{EdgeId, Multigraph, VertexId};

/// Largest distance from a pattern's anchor to any vertex of its core:
/// 2 for the 4-cycle patterns of TSP mode, 1 for everything else.
pub fn rescan_radius(mode: Mode) -> usize {
    match mode {
        Mode::Tsp => 2,
        Mode::Listing => 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Forced traveling salesman rules.
    Tsp,
    /// Hamiltonian cycle listing rules.
    Listing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    /// Vertex of degree 0 or 1.
    LowDegree,
    /// Vertex with three or more forced edge ends.
    Claw,
    /// Forced self-loop.
    ForcedLoop,
    /// Two forced parallel edges.
    ForcedPair,
    /// Triangle of forced edges (listing terminal).
    ForcedTriangle,
    /// Vertex with exactly two forced ends, on two distinct non-loop edges.
    ForcedPath,
    /// Degree-two vertex with an unforced incident edge.
    DegreeTwo,
    /// Two parallel edges, at least one unforced.
    UnforcedParallel,
    /// Unforced self-loop.
    UnforcedLoop,
    /// Triangle on three distinct vertices.
    Triangle,
    /// Triangle `xyz` whose outside edge at `x` is forced and `yz` is not.
    TriangleForce,
    /// Unforced 4-cycle with forced edges at two opposite vertices and some
    /// unforced edge leaving the cycle.
    QuadForce,
    /// Unforced 4-cycle forming a whole component of the unforced subgraph.
    QuadComponent,
    /// Branch candidate beside an unforced 4-cycle touching two forced edges.
    BranchQuad,
    /// Unforced edge adjacent to a forced edge.
    BranchAdjacent,
}

pub const PATTERN_COUNT: usize = 15;

impl Pattern {
    pub const ALL: [Pattern; PATTERN_COUNT] = [
        Pattern::LowDegree,
        Pattern::Claw,
        Pattern::ForcedLoop,
        Pattern::ForcedPair,
        Pattern::ForcedTriangle,
        Pattern::ForcedPath,
        Pattern::DegreeTwo,
        Pattern::UnforcedParallel,
        Pattern::UnforcedLoop,
        Pattern::Triangle,
        Pattern::TriangleForce,
        Pattern::QuadForce,
        Pattern::QuadComponent,
        Pattern::BranchQuad,
        Pattern::BranchAdjacent,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn used_in(self, mode: Mode) -> bool {
        use Pattern::*;
        match mode {
            Mode::Tsp => !matches!(self, ForcedTriangle | TriangleForce),
            Mode::Listing => matches!(
                self,
                LowDegree | Claw | ForcedTriangle | ForcedPath | DegreeTwo | TriangleForce | BranchAdjacent
            ),
        }
    }
}

/// One occurrence of a pattern.
///
/// Matches of a pattern are ordered by `key`, the smallest edge id relevant
/// to the match (for the branch patterns: the branch edge itself), so the
/// first element of a set is the deterministic choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Match {
    pub pattern: Pattern,
    pub key: u32,
    pub anchor: VertexId,
    pub items: [u32; 8],
}

const NONE: u32 = u32::MAX;

impl Match {
    fn new(pattern: Pattern, key: u32, anchor: VertexId, items: &[u32]) -> Self {
        let mut arr = [NONE; 8];
        arr[..items.len()].copy_from_slice(items);
        Match { pattern, key, anchor, items: arr }
    }

    pub fn edge(&self, i: usize) -> EdgeId {
        EdgeId(self.items[i])
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        VertexId(self.items[i])
    }
}

#[derive(Clone, Debug)]
pub struct MatchSets {
    mode: Mode,
    sets: Vec<BTreeSet<Match>>,
    anchored: Vec<Vec<Match>>,
    trail: Vec<(VertexId, Vec<Match>)>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl MatchSets {
    /// Computes every match of `g` from scratch.
    pub fn build(g: &Multigraph, mode: Mode) -> Self {
        let mut ms = MatchSets {
            mode,
            sets: vec![BTreeSet::new(); PATTERN_COUNT],
            anchored: Vec::new(),
            trail: Vec::new(),
            stamp: Vec::new(),
            epoch: 0,
        };
        ms.ensure_capacity(g.vertex_capacity());
        let mut buf = Vec::new();
        for v in g.vertices() {
            buf.clear();
            matches_at(g, v, mode, &mut buf);
            buf.sort_unstable();
            for m in &buf {
                ms.sets[m.pattern.index()].insert(*m);
            }
            ms.anchored[v.index()] = buf.clone();
        }
        ms
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn ensure_capacity(&mut self, n: usize) {
        if self.anchored.len() < n {
            self.anchored.resize(n, Vec::new());
            self.stamp.resize(n, 0);
        }
    }

    pub fn first(&self, p: Pattern) -> Option<&Match> {
        self.sets[p.index()].first()
    }

    pub fn len(&self, p: Pattern) -> usize {
        self.sets[p.index()].len()
    }

    pub fn is_empty(&self, p: Pattern) -> bool {
        self.sets[p.index()].is_empty()
    }

    pub fn iter(&self, p: Pattern) -> impl Iterator<Item = &Match> + '_ {
        self.sets[p.index()].iter()
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        assert!(mark <= self.trail.len(), "stale match-set mark");
        while self.trail.len() > mark {
            let (v, old) = self.trail.pop().expect("non-empty");
            let cur = std::mem::replace(&mut self.anchored[v.index()], old);
            for m in &cur {
                self.sets[m.pattern.index()].remove(m);
            }
            for m in &self.anchored[v.index()] {
                self.sets[m.pattern.index()].insert(*m);
            }
        }
    }

    /// Rescans the radius ball around every vertex in `touched`.
    pub fn refresh(&mut self, g: &Multigraph, touched: &[VertexId]) {
        if touched.is_empty() {
            return;
        }
        self.ensure_capacity(g.vertex_capacity());
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut frontier: Vec<VertexId> = Vec::new();
        let mut ball: Vec<VertexId> = Vec::new();
        for &v in touched {
            if v.index() >= self.stamp.len() || self.stamp[v.index()] == self.epoch {
                continue;
            }
            self.stamp[v.index()] = self.epoch;
            ball.push(v);
            if g.is_vertex_alive(v) {
                frontier.push(v);
            }
        }
        for _ in 0..rescan_radius(self.mode) {
            let mut next = Vec::new();
            for &v in &frontier {
                for &e in g.incident(v) {
                    let w = g.edge(e).other(v);
                    if self.stamp[w.index()] != self.epoch {
                        self.stamp[w.index()] = self.epoch;
                        ball.push(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        let mut buf = Vec::new();
        for v in ball {
            buf.clear();
            if g.is_vertex_alive(v) {
                matches_at(g, v, self.mode, &mut buf);
                buf.sort_unstable();
            }
            if buf != self.anchored[v.index()] {
                let old = std::mem::replace(&mut self.anchored[v.index()], buf.clone());
                for m in &old {
                    self.sets[m.pattern.index()].remove(m);
                }
                for m in &buf {
                    self.sets[m.pattern.index()].insert(*m);
                }
                self.trail.push((v, old));
            }
        }
    }

    /// True when every set equals the from-scratch recomputation.
    pub fn agrees_with(&self, g: &Multigraph) -> bool {
        let fresh = MatchSets::build(g, self.mode);
        self.sets == fresh.sets
    }

    pub fn mismatch_report(&self, g: &Multigraph) -> Option<String> {
        let fresh = MatchSets::build(g, self.mode);
        for p in Pattern::ALL {
            let (a, b) = (&self.sets[p.index()], &fresh.sets[p.index()]);
            if a != b {
                let stale: Vec<_> = a.difference(b).collect();
                let missing: Vec<_> = b.difference(a).collect();
                return Some(format!("{p:?}: stale {stale:?}, missing {missing:?}"));
            }
        }
        None
    }
}

/// Appends every match anchored at `v` (in any order).
pub fn matches_at(g: &Multigraph, v: VertexId, mode: Mode, out: &mut Vec<Match>) {
    let inc = g.incident(v);
    let forced = |e: EdgeId| g.edge(e).forced;
    let min_inc = inc.iter().map(|e| e.0).min().unwrap_or(NONE);
    let deg = inc.len();
    let fdeg = inc.iter().filter(|&&e| forced(e)).count();
    let use_p = |p: Pattern| p.used_in(mode);

    if deg <= 1 {
        out.push(Match::new(Pattern::LowDegree, min_inc, v, &[]));
    }
    if fdeg >= 3 {
        let k = inc.iter().filter(|&&e| forced(e)).map(|e| e.0).min().unwrap_or(NONE);
        out.push(Match::new(Pattern::Claw, k, v, &[]));
    }
    if fdeg == 2 {
        let fe: Vec<EdgeId> = inc.iter().copied().filter(|&e| forced(e)).collect();
        if fe[0] != fe[1] && !g.edge(fe[0]).is_loop() && !g.edge(fe[1]).is_loop() {
            let (a, b) = (fe[0].0.min(fe[1].0), fe[0].0.max(fe[1].0));
            out.push(Match::new(Pattern::ForcedPath, min_inc, v, &[a, b]));
        }
    }
    if deg == 2 && inc.iter().any(|&e| !forced(e)) {
        let (a, b) = (inc[0].0.min(inc[1].0), inc[0].0.max(inc[1].0));
        out.push(Match::new(Pattern::DegreeTwo, a, v, &[a, b]));
    }

    // loops, parallel pairs, branch-adjacent edges
    for (i, &e) in inc.iter().enumerate() {
        let rec = g.edge(e);
        if rec.is_loop() {
            // listed twice; emit once
            if inc[..i].contains(&e) {
                continue;
            }
            if rec.forced {
                if use_p(Pattern::ForcedLoop) {
                    out.push(Match::new(Pattern::ForcedLoop, e.0, v, &[e.0]));
                }
            } else if use_p(Pattern::UnforcedLoop) {
                out.push(Match::new(Pattern::UnforcedLoop, e.0, v, &[e.0]));
            }
            continue;
        }
        let w = rec.other(v);
        if w < v {
            continue;
        }
        for &f in &inc[i + 1..] {
            let rf = g.edge(f);
            if f == e || rf.is_loop() || rf.other(v) != w {
                continue;
            }
            let (a, b) = (e.0.min(f.0), e.0.max(f.0));
            if rec.forced && rf.forced {
                if use_p(Pattern::ForcedPair) {
                    out.push(Match::new(Pattern::ForcedPair, a, v, &[a, b]));
                }
            } else if use_p(Pattern::UnforcedParallel) {
                out.push(Match::new(Pattern::UnforcedParallel, a, v, &[a, b]));
            }
        }
        if !rec.forced
            && (fdeg > 0 || g.forced_degree(w) > 0)
            && !(mode == Mode::Tsp && in_quad_component(g, e))
        {
            out.push(Match::new(Pattern::BranchAdjacent, e.0, v, &[e.0]));
        }
    }

    triangles_at(g, v, mode, out);
    if mode == Mode::Tsp {
        quads_at(g, v, out);
    }
}

/// The unforced edges at `v` other than `e`, when there is exactly one.
fn other_unforced(g: &Multigraph, v: VertexId, e: EdgeId) -> Option<EdgeId> {
    let inc = g.incident(v);
    let unforced: Vec<EdgeId> = inc.iter().copied().filter(|&x| !g.edge(x).forced).collect();
    match unforced.as_slice() {
        [a, b] if *a == e && *b != e => Some(*b),
        [a, b] if *b == e && *a != e => Some(*a),
        _ => None,
    }
}

/// True when `e` lies on a 4-cycle that is a whole component of the
/// unforced subgraph.
fn in_quad_component(g: &Multigraph, e: EdgeId) -> bool {
    let r = g.edge(e);
    if r.is_loop() || r.forced {
        return false;
    }
    let [v, w] = r.ends;
    let (Some(a), Some(b)) = (other_unforced(g, v, e), other_unforced(g, w, e)) else {
        return false;
    };
    let (x, y) = (g.edge(a).other(v), g.edge(b).other(w));
    if [v, w].contains(&x) || [v, w].contains(&y) || x == y {
        return false;
    }
    match (other_unforced(g, x, a), other_unforced(g, y, b)) {
        (Some(c), Some(d)) => c == d && g.edge(c).other(x) == y,
        _ => false,
    }
}

fn edges_between(g: &Multigraph, a: VertexId, b: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
    g.incident(a)
        .iter()
        .copied()
        .filter(move |&e| !g.edge(e).is_loop() && g.edge(e).other(a) == b)
}

fn triangles_at(g: &Multigraph, v: VertexId, mode: Mode, out: &mut Vec<Match>) {
    let inc = g.incident(v);
    for (i, &e1) in inc.iter().enumerate() {
        let r1 = g.edge(e1);
        if r1.is_loop() || r1.other(v) < v {
            continue;
        }
        let a = r1.other(v);
        for (j, &e2) in inc.iter().enumerate() {
            let r2 = g.edge(e2);
            if i == j || r2.is_loop() {
                continue;
            }
            let b = r2.other(v);
            if b <= a {
                continue;
            }
            for e3 in edges_between(g, a, b) {
                emit_triangle(g, [v, a, b], [e3, e2, e1], mode, out);
            }
        }
    }
}

/// `opp[i]` is the triangle edge opposite `tri[i]`.
fn emit_triangle(
    g: &Multigraph,
    tri: [VertexId; 3],
    opp: [EdgeId; 3],
    mode: Mode,
    out: &mut Vec<Match>,
) {
    let key = opp.iter().map(|e| e.0).min().expect("three edges");
    let items = [tri[1].0, tri[2].0, opp[0].0, opp[1].0, opp[2].0];
    match mode {
        Mode::Tsp => out.push(Match::new(Pattern::Triangle, key, tri[0], &items)),
        Mode::Listing => {
            let all_forced = opp.iter().all(|&e| g.edge(e).forced);
            if all_forced {
                out.push(Match::new(Pattern::ForcedTriangle, key, tri[0], &items));
                return;
            }
            for i in 0..3 {
                if g.edge(opp[i]).forced {
                    continue;
                }
                let x = tri[i];
                let outside_forced = g
                    .incident(x)
                    .iter()
                    .any(|&e| g.edge(e).forced && !opp.contains(&e));
                if outside_forced {
                    let mut it = items.to_vec();
                    it.push(x.0);
                    out.push(Match::new(Pattern::TriangleForce, key, tri[0], &it));
                }
            }
        }
    }
}

fn quads_at(g: &Multigraph, v: VertexId, out: &mut Vec<Match>) {
    let unforced_nonloop = |x: VertexId| {
        g.incident(x)
            .iter()
            .copied()
            .filter(move |&e| !g.edge(e).forced && !g.edge(e).is_loop())
    };
    for e1 in unforced_nonloop(v) {
        let a = g.edge(e1).other(v);
        if a <= v {
            continue;
        }
        for e2 in unforced_nonloop(a) {
            if e2 == e1 {
                continue;
            }
            let b = g.edge(e2).other(a);
            if b <= v {
                continue;
            }
            for e3 in unforced_nonloop(b) {
                if e3 == e2 {
                    continue;
                }
                let c = g.edge(e3).other(b);
                // a < c fixes the direction of traversal
                if c <= a || c == b {
                    continue;
                }
                for e4 in unforced_nonloop(c) {
                    if e4 == e3 || g.edge(e4).other(c) != v {
                        continue;
                    }
                    emit_quad(g, [v, a, b, c], [e1, e2, e3, e4], out);
                }
            }
        }
    }
}

/// `verts` in cyclic order; `edges[i]` joins `verts[i]` and `verts[i+1]`.
fn emit_quad(g: &Multigraph, verts: [VertexId; 4], edges: [EdgeId; 4], out: &mut Vec<Match>) {
    let key = edges.iter().map(|e| e.0).min().expect("four edges");
    let items = [
        verts[1].0, verts[2].0, verts[3].0, edges[0].0, edges[1].0, edges[2].0, edges[3].0,
    ];
    let has_forced: [bool; 4] = verts.map(|x| g.forced_degree(x) > 0);
    let off_cycle_unforced = |x: VertexId| {
        g.incident(x)
            .iter()
            .copied()
            .filter(|e| !edges.contains(e) && !g.edge(*e).forced)
            .collect::<Vec<_>>()
    };
    let any_unforced_exit = verts.iter().any(|&x| !off_cycle_unforced(x).is_empty());

    if ((has_forced[0] && has_forced[2]) || (has_forced[1] && has_forced[3])) && any_unforced_exit {
        out.push(Match::new(Pattern::QuadForce, key, verts[0], &items));
    }
    let component = verts.iter().all(|&x| {
        g.incident(x).iter().filter(|&&e| !g.edge(e).forced).count() == 2
    });
    if component {
        out.push(Match::new(Pattern::QuadComponent, key, verts[0], &items));
    }
    if has_forced.iter().filter(|&&f| f).count() >= 2 {
        for (i, &y) in verts.iter().enumerate() {
            if has_forced[i] {
                continue;
            }
            for yz in off_cycle_unforced(y) {
                if g.edge(yz).is_loop() {
                    continue;
                }
                let mut it = items.to_vec();
                it.push(y.0);
                out.push(Match::new(Pattern::BranchQuad, yz.0, verts[0], &it));
            }
        }
    }
}
