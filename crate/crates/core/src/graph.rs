//! Mutable multigraph with exact weights, forced-edge flags, provenance back
//! to the input edges, and an undo trail.
//!
//! Every mutation is logged on the trail, so a depth-first search can take a
//! [`TrailMark`], mutate freely, and roll back with [`Multigraph::undo_to`].
//! Identifiers are never reused: deleted vertices and edges keep their
//! records (marked dead), and new objects are appended. Undo pops them again,
//! so the state after `undo_to(mark)` is identical to the state at `mark()`,
//! including the order of every incidence list.
//!
//! Weights are signed integers. Negative weights are accepted; the solver
//! never assumes nonnegativity of input weights.

use std::fmt;

use crate::error::GraphError;

/// Exact edge weight.
pub type Weight = i64;

/// Maximum vertex degree accepted by [`Multigraph::load`].
pub const MAX_LOAD_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One input edge of a [`GraphSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
    pub forced: bool,
}

impl EdgeSpec {
    pub fn new(u: usize, v: usize, weight: Weight) -> Self {
        EdgeSpec { u, v, weight, forced: false }
    }

    pub fn forced(u: usize, v: usize, weight: Weight) -> Self {
        EdgeSpec { u, v, weight, forced: true }
    }
}

/// Plain edge-list description of an input graph. Edge `i` of the list
/// becomes original edge `EdgeId(i)` once loaded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertex_count: usize,
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    pub fn new(vertex_count: usize) -> Self {
        GraphSpec { vertex_count, edges: Vec::new() }
    }

    /// Builds a unit-weight, unforced graph from endpoint pairs.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Self {
        GraphSpec {
            vertex_count,
            edges: pairs.iter().map(|&(u, v)| EdgeSpec::new(u, v, 1)).collect(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: Weight) -> usize {
        self.edges.push(EdgeSpec::new(u, v, weight));
        self.edges.len() - 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            if e.u < self.vertex_count {
                deg[e.u] += 1;
            }
            if e.v < self.vertex_count {
                deg[e.v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// No self-loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| {
            let key = (e.u.min(e.v), e.u.max(e.v));
            e.u != e.v && seen.insert(key)
        })
    }

    pub fn forced_ids(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.forced)
            .map(|(i, _)| EdgeId(i as u32))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    /// Endpoints; equal for a self-loop.
    pub ends: [VertexId; 2],
    pub weight: Weight,
    pub forced: bool,
    alive: bool,
    /// Set for input edges (to their own id); `None` for merged and
    /// synthetic edges.
    origin: Option<EdgeId>,
    /// Edges whose provenance has been folded into this one.
    sources: Vec<EdgeId>,
}

impl EdgeRecord {
    pub fn is_alive(&self) -> bool {
        self.alive
    }

    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            debug_assert_eq!(self.ends[1], v);
            self.ends[0]
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.ends[0] == v || self.ends[1] == v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct VertexRecord {
    alive: bool,
    /// Incident edges; a self-loop appears twice.
    inc: Vec<EdgeId>,
}

/// Position on the trail returned by [`Multigraph::mark`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrailMark(usize);

#[derive(Clone, Debug)]
enum Undo {
    AddVertex,
    DeleteVertex(VertexId),
    AddEdge,
    DeleteEdge { e: EdgeId, slots: [usize; 2] },
    SetForced { e: EdgeId, was: bool },
    AddWeight { e: EdgeId, delta: Weight },
    MergeProvenance { e: EdgeId },
    MoveEnd { e: EdgeId, side: usize, from: VertexId, slot: usize },
    TrackOriginal { original: EdgeId },
}

/// Set of input edges that have been added to the forced set, maintained
/// only when enabled (the cycle lister uses it for delta output).
#[derive(Clone, Debug, Default)]
struct ForcedOriginals {
    marked: Vec<bool>,
    changed: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct Multigraph {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    original_weights: Vec<Weight>,
    live_vertices: usize,
    live_edges: usize,
    forced_live: usize,
    trail: Vec<Undo>,
    touched: Vec<VertexId>,
    forced_originals: Option<ForcedOriginals>,
}

impl Multigraph {
    /// Loads an edge list. Each edge's provenance is the singleton of its
    /// own input id.
    pub fn load(spec: &GraphSpec) -> Result<Self, GraphError> {
        Self::load_with_synthetic(spec, spec.edges.len())
    }

    /// Like [`Multigraph::load`], but edges with index `>= first_synthetic`
    /// get empty provenance: they never appear in reported tours.
    pub(crate) fn load_with_synthetic(
        spec: &GraphSpec,
        first_synthetic: usize,
    ) -> Result<Self, GraphError> {
        if spec.vertex_count > u32::MAX as usize || spec.edges.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge);
        }
        let mut vertices = vec![VertexRecord { alive: true, inc: Vec::new() }; spec.vertex_count];
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut forced_live = 0;
        for (i, es) in spec.edges.iter().enumerate() {
            for x in [es.u, es.v] {
                if x >= spec.vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        edge: i,
                        vertex: x,
                        vertex_count: spec.vertex_count,
                    });
                }
            }
            let id = EdgeId(i as u32);
            vertices[es.u].inc.push(id);
            vertices[es.v].inc.push(id);
            forced_live += usize::from(es.forced);
            edges.push(EdgeRecord {
                ends: [VertexId(es.u as u32), VertexId(es.v as u32)],
                weight: es.weight,
                forced: es.forced,
                alive: true,
                origin: (i < first_synthetic).then_some(id),
                sources: Vec::new(),
            });
        }
        for (v, rec) in vertices.iter().enumerate() {
            if rec.inc.len() > MAX_LOAD_DEGREE {
                return Err(GraphError::DegreeTooHigh {
                    vertex: v,
                    degree: rec.inc.len(),
                    max: MAX_LOAD_DEGREE,
                });
            }
        }
        let original_weights = spec.edges.iter().map(|e| e.weight).collect();
        Ok(Multigraph {
            live_vertices: vertices.len(),
            live_edges: edges.len(),
            vertices,
            edges,
            original_weights,
            forced_live,
            trail: Vec::new(),
            touched: Vec::new(),
            forced_originals: None,
        })
    }

    // ---- queries -------------------------------------------------------

    /// Number of live vertices.
    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    /// Number of live edges.
    pub fn edge_count(&self) -> usize {
        self.live_edges
    }

    pub fn forced_count(&self) -> usize {
        self.forced_live
    }

    pub fn unforced_count(&self) -> usize {
        self.live_edges - self.forced_live
    }

    /// Upper bound (exclusive) on vertex ids ever allocated.
    pub fn vertex_capacity(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges in the input, i.e. the range of original edge ids.
    pub fn original_edge_count(&self) -> usize {
        self.original_weights.len()
    }

    pub fn original_weight(&self, original: EdgeId) -> Weight {
        self.original_weights[original.index()]
    }

    pub fn is_vertex_alive(&self, v: VertexId) -> bool {
        self.vertices.get(v.index()).is_some_and(|r| r.alive)
    }

    pub fn is_edge_alive(&self, e: EdgeId) -> bool {
        self.edges.get(e.index()).is_some_and(|r| r.alive)
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.index()]
    }

    /// Incident edges of `v`; a self-loop is listed twice.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.vertices[v.index()].inc
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices[v.index()].inc.len()
    }

    /// Number of forced edge ends at `v` (a forced loop counts twice).
    pub fn forced_degree(&self, v: VertexId) -> usize {
        self.incident(v).iter().filter(|&&e| self.edges[e.index()].forced).count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, r)| r.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, r)| r.alive)
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// No live self-loops and no live parallel edges.
    pub fn is_simple(&self) -> bool {
        self.vertices().all(|v| {
            let inc = self.incident(v);
            inc.iter().enumerate().all(|(i, &e)| {
                let w = self.edges[e.index()].other(v);
                w != v
                    && inc[i + 1..]
                        .iter()
                        .all(|&f| self.edges[f.index()].other(v) != w)
            })
        })
    }

    /// Input edge ids represented by `e`, in ascending order. Synthetic
    /// edges contribute nothing.
    pub fn provenance(&self, e: EdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        self.collect_provenance(e, &mut out);
        out.sort_unstable();
        out
    }

    fn collect_provenance(&self, e: EdgeId, out: &mut Vec<EdgeId>) {
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            let rec = &self.edges[x.index()];
            if let Some(o) = rec.origin {
                out.push(o);
            }
            stack.extend(rec.sources.iter().copied());
        }
    }

    /// Union of the provenance of `edges`, sorted.
    pub fn provenance_of_all(&self, edges: &[EdgeId]) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for &e in edges {
            self.collect_provenance(e, &mut out);
        }
        out.sort_unstable();
        out
    }

    /// True when the edge represents no input edge (a split bridge).
    pub fn is_synthetic(&self, e: EdgeId) -> bool {
        let rec = &self.edges[e.index()];
        rec.origin.is_none() && rec.sources.is_empty()
    }

    // ---- trail ---------------------------------------------------------

    pub fn mark(&self) -> TrailMark {
        TrailMark(self.trail.len())
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Rolls every mutation after `mark` back.
    ///
    /// Panics if the trail is already shorter than `mark` (a stale mark).
    pub fn undo_to(&mut self, mark: TrailMark) {
        assert!(
            mark.0 <= self.trail.len(),
            "stale trail mark {} (trail length {})",
            mark.0,
            self.trail.len()
        );
        while self.trail.len() > mark.0 {
            let op = self.trail.pop().expect("non-empty trail");
            self.revert(op);
        }
    }

    fn revert(&mut self, op: Undo) {
        match op {
            Undo::AddVertex => {
                let rec = self.vertices.pop().expect("vertex to pop");
                debug_assert!(rec.inc.is_empty());
                self.live_vertices -= 1;
                self.touched.push(VertexId(self.vertices.len() as u32));
            }
            Undo::DeleteVertex(v) => {
                self.vertices[v.index()].alive = true;
                self.live_vertices += 1;
                self.touched.push(v);
            }
            Undo::AddEdge => {
                let e = EdgeId(self.edges.len() as u32 - 1);
                let [a, b] = self.edges[e.index()].ends;
                for x in [b, a] {
                    let popped = self.vertices[x.index()].inc.pop();
                    debug_assert_eq!(popped, Some(e));
                    self.touched.push(x);
                }
                let rec = self.edges.pop().expect("edge to pop");
                self.live_edges -= 1;
                if rec.forced {
                    self.forced_live -= 1;
                }
            }
            Undo::DeleteEdge { e, slots } => {
                let [a, b] = self.edges[e.index()].ends;
                self.restore_incidence(b, e, slots[1]);
                self.restore_incidence(a, e, slots[0]);
                let rec = &mut self.edges[e.index()];
                rec.alive = true;
                self.live_edges += 1;
                if rec.forced {
                    self.forced_live += 1;
                }
                self.touched.extend([a, b]);
            }
            Undo::SetForced { e, was } => {
                let rec = &mut self.edges[e.index()];
                if rec.forced != was {
                    if rec.forced {
                        self.forced_live -= 1;
                    } else {
                        self.forced_live += 1;
                    }
                }
                rec.forced = was;
                let [a, b] = rec.ends;
                self.touched.extend([a, b]);
            }
            Undo::AddWeight { e, delta } => {
                self.edges[e.index()].weight -= delta;
            }
            Undo::MergeProvenance { e } => {
                self.edges[e.index()].sources.pop();
            }
            Undo::MoveEnd { e, side, from, slot } => {
                let to = self.edges[e.index()].ends[side];
                let popped = self.vertices[to.index()].inc.pop();
                debug_assert_eq!(popped, Some(e));
                self.restore_incidence(from, e, slot);
                self.edges[e.index()].ends[side] = from;
                self.touched.extend([from, to]);
            }
            Undo::TrackOriginal { original } => {
                let fo = self.forced_originals.as_mut().expect("tracking enabled");
                fo.marked[original.index()] = false;
                fo.changed.push(original);
            }
        }
    }

    fn detach_incidence(&mut self, v: VertexId, e: EdgeId) -> usize {
        let inc = &mut self.vertices[v.index()].inc;
        let pos = inc
            .iter()
            .position(|&x| x == e)
            .unwrap_or_else(|| panic!("{e} not incident to {v}"));
        inc.swap_remove(pos);
        pos
    }

    fn restore_incidence(&mut self, v: VertexId, e: EdgeId, slot: usize) {
        let inc = &mut self.vertices[v.index()].inc;
        inc.push(e);
        let last = inc.len() - 1;
        inc.swap(slot, last);
    }

    /// Vertices touched by mutations or undos since the last call.
    pub fn take_touched(&mut self) -> Vec<VertexId> {
        std::mem::take(&mut self.touched)
    }

    pub(crate) fn drain_touched_into(&mut self, out: &mut Vec<VertexId>) {
        out.append(&mut self.touched);
    }

    // ---- forced-original tracking ---------------------------------------

    /// Starts tracking which input edges belong to the forced set. Must be
    /// called on a graph with an empty trail.
    pub(crate) fn enable_forced_tracking(&mut self) {
        let mut fo = ForcedOriginals {
            marked: vec![false; self.original_edge_count()],
            changed: Vec::new(),
        };
        let mut buf = Vec::new();
        for e in self.edges() {
            if self.edges[e.index()].forced {
                buf.clear();
                self.collect_provenance(e, &mut buf);
                for &o in &buf {
                    if !fo.marked[o.index()] {
                        fo.marked[o.index()] = true;
                        fo.changed.push(o);
                    }
                }
            }
        }
        self.forced_originals = Some(fo);
    }

    pub(crate) fn is_original_forced(&self, original: EdgeId) -> bool {
        self.forced_originals
            .as_ref()
            .is_some_and(|fo| fo.marked[original.index()])
    }

    pub(crate) fn take_forced_changes(&mut self) -> Vec<EdgeId> {
        self.forced_originals
            .as_mut()
            .map(|fo| std::mem::take(&mut fo.changed))
            .unwrap_or_default()
    }

    // ---- primitive mutations ---------------------------------------------

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.vertices.len() as u32);
        self.vertices.push(VertexRecord { alive: true, inc: Vec::new() });
        self.live_vertices += 1;
        self.trail.push(Undo::AddVertex);
        self.touched.push(v);
        v
    }

    /// Deletes an isolated vertex.
    pub fn delete_vertex(&mut self, v: VertexId) {
        let rec = &mut self.vertices[v.index()];
        assert!(rec.alive, "{v} already deleted");
        assert!(rec.inc.is_empty(), "{v} still has incident edges");
        rec.alive = false;
        self.live_vertices -= 1;
        self.trail.push(Undo::DeleteVertex(v));
        self.touched.push(v);
    }

    /// Adds a new edge whose provenance is the union of `sources`.
    pub fn add_edge(
        &mut self,
        a: VertexId,
        b: VertexId,
        weight: Weight,
        forced: bool,
        sources: Vec<EdgeId>,
    ) -> EdgeId {
        assert!(self.is_vertex_alive(a) && self.is_vertex_alive(b));
        let e = EdgeId(self.edges.len() as u32);
        self.edges.push(EdgeRecord {
            ends: [a, b],
            weight,
            forced,
            alive: true,
            origin: None,
            sources,
        });
        self.vertices[a.index()].inc.push(e);
        self.vertices[b.index()].inc.push(e);
        self.live_edges += 1;
        if forced {
            self.forced_live += 1;
        }
        self.trail.push(Undo::AddEdge);
        self.touched.extend([a, b]);
        e
    }

    pub fn delete_edge(&mut self, e: EdgeId) {
        assert!(self.is_edge_alive(e), "{e} is not alive");
        let [a, b] = self.edges[e.index()].ends;
        let s0 = self.detach_incidence(a, e);
        let s1 = self.detach_incidence(b, e);
        let rec = &mut self.edges[e.index()];
        rec.alive = false;
        self.live_edges -= 1;
        if rec.forced {
            self.forced_live -= 1;
        }
        self.trail.push(Undo::DeleteEdge { e, slots: [s0, s1] });
        self.touched.extend([a, b]);
    }

    /// Adds `e` to the forced set. Returns false if it already was forced.
    pub fn force_edge(&mut self, e: EdgeId) -> bool {
        assert!(self.is_edge_alive(e), "{e} is not alive");
        let rec = &mut self.edges[e.index()];
        if rec.forced {
            return false;
        }
        rec.forced = true;
        self.forced_live += 1;
        let [a, b] = rec.ends;
        self.trail.push(Undo::SetForced { e, was: false });
        self.touched.extend([a, b]);
        if self.forced_originals.is_some() {
            let mut buf = Vec::new();
            self.collect_provenance(e, &mut buf);
            let fo = self.forced_originals.as_mut().expect("checked");
            for o in buf {
                if !fo.marked[o.index()] {
                    fo.marked[o.index()] = true;
                    fo.changed.push(o);
                    self.trail.push(Undo::TrackOriginal { original: o });
                }
            }
        }
        true
    }

    pub fn add_weight(&mut self, e: EdgeId, delta: Weight) {
        self.edges[e.index()].weight += delta;
        self.trail.push(Undo::AddWeight { e, delta });
    }

    /// Folds the provenance of `source` into `e`.
    pub fn merge_provenance(&mut self, e: EdgeId, source: EdgeId) {
        self.edges[e.index()].sources.push(source);
        self.trail.push(Undo::MergeProvenance { e });
    }

    /// Re-attaches the `from` end of non-loop edge `e` to vertex `to`.
    pub fn move_end(&mut self, e: EdgeId, from: VertexId, to: VertexId) {
        let rec = &self.edges[e.index()];
        assert!(!rec.is_loop(), "cannot move an end of loop {e}");
        let side = if rec.ends[0] == from {
            0
        } else {
            assert_eq!(rec.ends[1], from, "{e} does not touch {from}");
            1
        };
        let slot = self.detach_incidence(from, e);
        self.vertices[to.index()].inc.push(e);
        self.edges[e.index()].ends[side] = to;
        self.trail.push(Undo::MoveEnd { e, side, from, slot });
        self.touched.extend([from, to]);
    }

    /// Replaces the two forced edges `e1 = a–b` and `e2 = b–c` meeting at
    /// `b` by one forced edge `a–c` whose weight is the sum and whose
    /// provenance is the union. Every other edge at `b` is deleted, then `b`
    /// itself.
    pub fn merge_path(&mut self, e1: EdgeId, e2: EdgeId) -> EdgeId {
        let r1 = &self.edges[e1.index()];
        let r2 = &self.edges[e2.index()];
        assert!(r1.alive && r2.alive && e1 != e2);
        assert!(r1.forced && r2.forced, "merge_path needs forced edges");
        assert!(!r1.is_loop() && !r2.is_loop());
        let b = if r2.touches(r1.ends[0]) {
            r1.ends[0]
        } else {
            assert!(r2.touches(r1.ends[1]), "{e1} and {e2} share no vertex");
            r1.ends[1]
        };
        let a = r1.other(b);
        let c = r2.other(b);
        let weight = r1.weight + r2.weight;
        let others: Vec<EdgeId> = self
            .incident(b)
            .iter()
            .copied()
            .filter(|&x| x != e1 && x != e2)
            .collect();
        for x in others {
            if self.is_edge_alive(x) {
                self.delete_edge(x);
            }
        }
        self.delete_edge(e1);
        self.delete_edge(e2);
        self.delete_vertex(b);
        self.add_edge(a, c, weight, true, vec![e1, e2])
    }

    /// Delta-Y transformation of the triangle on `x`, `y`, `z`.
    ///
    /// Each vertex must have degree 3 with exactly one non-triangle edge.
    /// The non-triangle edge at a vertex absorbs the weight and provenance of
    /// the opposite triangle edge, and becomes forced if that edge was
    /// forced. The triangle edges are removed and the three vertices are
    /// replaced by one new supervertex, which is returned.
    pub fn contract_triangle(&mut self, x: VertexId, y: VertexId, z: VertexId) -> VertexId {
        let tri = [x, y, z];
        let find = |g: &Self, p: VertexId, q: VertexId| -> EdgeId {
            g.incident(p)
                .iter()
                .copied()
                .find(|&e| g.edges[e.index()].other(p) == q)
                .unwrap_or_else(|| panic!("no edge {p}-{q}"))
        };
        // opposite[i] is the triangle edge not touching tri[i]
        let opposite = [find(self, y, z), find(self, z, x), find(self, x, y)];
        let mut outer = [EdgeId(0); 3];
        for (i, &v) in tri.iter().enumerate() {
            assert_eq!(self.degree(v), 3, "triangle vertex {v} must have degree 3");
            let outs: Vec<EdgeId> = self
                .incident(v)
                .iter()
                .copied()
                .filter(|&e| !opposite.contains(&e))
                .collect();
            assert_eq!(outs.len(), 1, "triangle vertex {v} needs one outside edge");
            outer[i] = outs[0];
        }
        for i in 0..3 {
            let (d, t) = (outer[i], opposite[i]);
            let (tw, tf) = (self.edges[t.index()].weight, self.edges[t.index()].forced);
            if tw != 0 {
                self.add_weight(d, tw);
            }
            self.merge_provenance(d, t);
            if tf {
                self.force_edge(d);
            }
        }
        for t in opposite {
            self.delete_edge(t);
        }
        let s = self.add_vertex();
        for i in 0..3 {
            self.move_end(outer[i], tri[i], s);
        }
        for v in tri {
            self.delete_vertex(v);
        }
        s
    }

    /// State equality ignoring the trail and touched buffers.
    pub fn same_state(&self, other: &Multigraph) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.live_vertices == other.live_vertices
            && self.live_edges == other.live_edges
            && self.forced_live == other.forced_live
    }

    /// Recomputes the cached counts from scratch.
    pub fn counts_consistent(&self) -> bool {
        let v = self.vertices().count();
        let e = self.edges().count();
        let f = self.edges().filter(|&e| self.edge(e).forced).count();
        let inc_ok = self.edges().all(|e| {
            let [a, b] = self.edge(e).ends;
            self.is_vertex_alive(a)
                && self.is_vertex_alive(b)
                && self.incident(a).contains(&e)
                && self.incident(b).contains(&e)
        });
        inc_ok && v == self.live_vertices && e == self.live_edges && f == self.forced_live
    }

    /// Live-graph snapshot as an edge list, with vertices renumbered densely
    /// in id order. Returns the spec plus the live edge id of each entry.
    pub fn to_spec(&self) -> (GraphSpec, Vec<EdgeId>) {
        let mut index = vec![usize::MAX; self.vertices.len()];
        let mut n = 0;
        for v in self.vertices() {
            index[v.index()] = n;
            n += 1;
        }
        let mut spec = GraphSpec::new(n);
        let mut ids = Vec::new();
        for e in self.edges() {
            let r = self.edge(e);
            spec.edges.push(EdgeSpec {
                u: index[r.ends[0].index()],
                v: index[r.ends[1].index()],
                weight: r.weight,
                forced: r.forced,
            });
            ids.push(e);
        }
        (spec, ids)
    }
}
