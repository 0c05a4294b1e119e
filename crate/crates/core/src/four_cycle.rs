//! Exact solution when the unforced edges form vertex-disjoint 4-cycles.
//!
//! Each 4-cycle `C_i` is split into its cheaper pair of opposite edges `H_i`
//! and the complementary pair. Every vertex then has degree two in `F ∪ H`,
//! so `F ∪ H` is a union of cycles. Swapping `H_i` for `C_i \ H_i` merges the
//! two cycles through `C_i` at extra cost `cost(C_i \ H_i) - cost(H_i) ≥ 0`,
//! and an optimal tour is `F ∪ H` with the swaps of a minimum spanning tree
//! of the resulting component graph applied.

use crate::graph::{EdgeId, Multigraph, VertexId, Weight};

/// One unforced 4-cycle with its chosen opposite pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadCycle {
    /// Edges in cyclic order.
    pub edges: [EdgeId; 4],
    /// The cheaper opposite pair.
    pub kept: [EdgeId; 2],
    /// The other pair.
    pub swapped: [EdgeId; 2],
}

impl QuadCycle {
    /// `cost(C \ H) - cost(H)`.
    pub fn swap_cost(&self, g: &Multigraph) -> Weight {
        pair_cost(g, self.swapped) - pair_cost(g, self.kept)
    }
}

/// The decomposition used to solve a 4-cycle instance.
#[derive(Clone, Debug)]
pub struct FourCycleCover {
    pub cycles: Vec<QuadCycle>,
    /// Component of `F ∪ H` containing each live vertex, indexed by vertex id.
    component: Vec<usize>,
    pub component_count: usize,
}

fn pair_cost(g: &Multigraph, pair: [EdgeId; 2]) -> Weight {
    g.edge(pair[0]).weight + g.edge(pair[1]).weight
}

/// True iff every connected component of the unforced subgraph is a cycle
/// of four distinct vertices. Vertices without unforced edges are not
/// allowed.
pub fn covers_disjoint_4cycles(g: &Multigraph) -> bool {
    g.vertex_count() > 0 && unforced_cycles(g).is_some()
}

fn unforced_at(g: &Multigraph, v: VertexId) -> Vec<EdgeId> {
    g.incident(v).iter().copied().filter(|&e| !g.edge(e).forced).collect()
}

/// Walks the unforced subgraph; `None` unless it is a disjoint union of
/// 4-cycles spanning all vertices.
fn unforced_cycles(g: &Multigraph) -> Option<Vec<[EdgeId; 4]>> {
    let mut seen = vec![false; g.vertex_capacity()];
    let mut out = Vec::new();
    for start in g.vertices() {
        if seen[start.index()] {
            continue;
        }
        let mut edges = Vec::with_capacity(4);
        let mut prev: Option<EdgeId> = None;
        let mut v = start;
        loop {
            let inc = unforced_at(g, v);
            if inc.len() != 2 || inc[0] == inc[1] || seen[v.index()] {
                return None;
            }
            seen[v.index()] = true;
            let e = if Some(inc[0]) == prev { inc[1] } else { inc[0] };
            edges.push(e);
            if edges.len() > 4 {
                return None;
            }
            prev = Some(e);
            v = g.edge(e).other(v);
            if v == start {
                break;
            }
        }
        if edges.len() != 4 {
            return None;
        }
        out.push([edges[0], edges[1], edges[2], edges[3]]);
    }
    Some(out)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl FourCycleCover {
    /// `None` unless [`covers_disjoint_4cycles`] holds.
    ///
    /// Panics unless every vertex has exactly one forced edge end, which
    /// holds whenever the reduction rules are exhausted.
    pub fn build(g: &Multigraph) -> Option<Self> {
        if g.vertex_count() == 0 {
            return None;
        }
        for v in g.vertices() {
            assert_eq!(g.forced_degree(v), 1, "vertex {v} is not covered by exactly one forced edge");
        }
        let raw = unforced_cycles(g)?;
        let cycles: Vec<QuadCycle> = raw
            .into_iter()
            .map(|edges| {
                let a = [edges[0], edges[2]];
                let b = [edges[1], edges[3]];
                let (ca, cb) = (pair_cost(g, a), pair_cost(g, b));
                let min_id = |p: [EdgeId; 2]| p[0].min(p[1]);
                let a_first = ca < cb || (ca == cb && min_id(a) < min_id(b));
                let (kept, swapped) = if a_first { (a, b) } else { (b, a) };
                QuadCycle { edges, kept, swapped }
            })
            .collect();

        let mut dsu = Dsu::new(g.vertex_capacity());
        let join = |dsu: &mut Dsu, e: EdgeId| {
            let [u, v] = g.edge(e).ends;
            dsu.union(u.index(), v.index());
        };
        for e in g.edges().filter(|&e| g.edge(e).forced) {
            join(&mut dsu, e);
        }
        for c in &cycles {
            join(&mut dsu, c.kept[0]);
            join(&mut dsu, c.kept[1]);
        }
        let mut label = vec![usize::MAX; g.vertex_capacity()];
        let mut component = vec![usize::MAX; g.vertex_capacity()];
        let mut count = 0;
        for v in g.vertices() {
            let r = dsu.find(v.index());
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            component[v.index()] = label[r];
        }
        Some(FourCycleCover { cycles, component, component_count: count })
    }

    /// Component-graph edge of cycle `i`: the components joined by its swap.
    pub fn component_edge(&self, g: &Multigraph, i: usize) -> (usize, usize) {
        let [a, _] = g.edge(self.cycles[i].kept[0]).ends;
        let [b, _] = g.edge(self.cycles[i].kept[1]).ends;
        (self.component[a.index()], self.component[b.index()])
    }

    /// Minimum-cost tour as live edge ids, or `None` when the component
    /// graph is disconnected.
    pub fn solve_live(&self, g: &Multigraph) -> Option<(Weight, Vec<EdgeId>)> {
        let mut order: Vec<usize> = (0..self.cycles.len()).collect();
        order.sort_by_key(|&i| (self.cycles[i].swap_cost(g), i));
        let mut dsu = Dsu::new(self.component_count);
        let mut in_tree = vec![false; self.cycles.len()];
        let mut joined = 0;
        for i in order {
            let (a, b) = self.component_edge(g, i);
            if dsu.union(a, b) {
                in_tree[i] = true;
                joined += 1;
            }
        }
        if joined + 1 != self.component_count {
            return None;
        }
        let mut tour: Vec<EdgeId> = g.edges().filter(|&e| g.edge(e).forced).collect();
        for (c, &t) in self.cycles.iter().zip(&in_tree) {
            tour.extend(if t { c.swapped } else { c.kept });
        }
        let cost = tour.iter().map(|&e| g.edge(e).weight).sum();
        tour.sort_unstable();
        Some((cost, tour))
    }
}

/// Solves a 4-cycle instance. Returns the optimal cost and the tour as input
/// edge ids, or `None` when the instance is infeasible or the precondition
/// fails.
pub fn solve_4cycles(g: &Multigraph) -> Option<(Weight, Vec<EdgeId>)> {
    let cover = FourCycleCover::build(g)?;
    let (cost, live) = cover.solve_live(g)?;
    Some((cost, g.provenance_of_all(&live)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;

    fn cube_vertical_forced() -> GraphSpec {
        let mut spec = GraphSpec::from_pairs(
            8,
            &[
                (0, 1), (1, 2), (2, 3), (3, 0),
                (4, 5), (5, 6), (6, 7), (7, 4),
                (0, 4), (1, 5), (2, 6), (3, 7),
            ],
        );
        for e in &mut spec.edges[8..] {
            e.forced = true;
        }
        spec
    }

    #[test]
    fn cube_detects_two_cycles() {
        let g = Multigraph::load(&cube_vertical_forced()).unwrap();
        assert!(covers_disjoint_4cycles(&g));
        let cover = FourCycleCover::build(&g).unwrap();
        assert_eq!(cover.cycles.len(), 2);
        assert_eq!(cover.component_count, 2);
        // tie between the pairs: the pair holding edge 0 is kept
        assert!(cover.cycles.iter().any(|c| c.kept.contains(&EdgeId(0))));
    }

    #[test]
    fn cube_unit_weights_cost_eight() {
        let g = Multigraph::load(&cube_vertical_forced()).unwrap();
        let (cost, tour) = solve_4cycles(&g).unwrap();
        assert_eq!(cost, 8);
        assert_eq!(tour.len(), 8);
        for e in 8..12 {
            assert!(tour.contains(&EdgeId(e)));
        }
    }

    #[test]
    fn petersen_is_not_covered() {
        let spec = GraphSpec::from_pairs(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        );
        assert!(!covers_disjoint_4cycles(&Multigraph::load(&spec).unwrap()));
    }

    #[test]
    fn disconnected_component_graph_is_infeasible() {
        // two disjoint copies: no 4-cycle joins them
        let a = cube_vertical_forced();
        let mut spec = GraphSpec::new(16);
        for off in [0, 8] {
            for e in &a.edges {
                let mut e = e.clone();
                e.u += off;
                e.v += off;
                spec.edges.push(e);
            }
        }
        let g = Multigraph::load(&spec).unwrap();
        assert!(covers_disjoint_4cycles(&g));
        assert_eq!(solve_4cycles(&g), None);
    }
}
