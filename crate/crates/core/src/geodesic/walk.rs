//! Walks, walks traced by cycles, and the doubled-tree constructions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, SubgraphRef, VertexId, WeightedMultigraph};
use crate::planarity::is_planar;
use crate::rational::Rational;
use crate::steiner::shortest_path_matrix;

/// An alternating sequence `v1 e1 v2 ... ek v(k+1)` with `ei` joining
/// `vi` and `v(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Walk {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Walk {
    pub fn new(g: &WeightedMultigraph, vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Result<Self> {
        if vertices.len() != edges.len() + 1 {
            return Err(Error::Precondition("a walk has one more vertex than edges".into()));
        }
        for (i, &e) in edges.iter().enumerate() {
            if e >= g.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            if !g.edge(e).joins(vertices[i], vertices[i + 1]) {
                return Err(Error::Precondition(format!("edge {e} does not join walk positions {i} and {}", i + 1)));
            }
        }
        Ok(Walk { vertices, edges })
    }

    pub fn trivial(v: VertexId) -> Self {
        Walk { vertices: vec![v], edges: Vec::new() }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    /// `len(W)`: edge lengths summed with repetition.
    pub fn length(&self, g: &WeightedMultigraph) -> Rational {
        self.edges.iter().map(|&e| g.len(e)).sum()
    }
}

/// `m_W(e)` for every edge the walk uses.
pub fn walk_multiplicities(w: &Walk) -> BTreeMap<EdgeId, usize> {
    let mut out = BTreeMap::new();
    for &e in &w.edges {
        *out.entry(e).or_insert(0) += 1;
    }
    out
}

fn check_cycle(g: &WeightedMultigraph, cycle: &[VertexId]) -> Result<()> {
    if cycle.len() < 2 {
        return Err(Error::Precondition("a cycle needs at least two vertices".into()));
    }
    if let Some(&v) = cycle.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cycle.len() {
        return Err(Error::Precondition("cycle vertices must be distinct".into()));
    }
    Ok(())
}

/// The closed walk obtained from the cyclic vertex order `cycle` by
/// replacing each step `ab` with a shortest `a`-`b` path of `g`, starting
/// at `cycle[start]` and running backwards through `cycle` if `reversed`.
/// Ties between shortest paths go to the lexicographically least vertex
/// sequence.
pub fn trace_walk(g: &WeightedMultigraph, cycle: &[VertexId], start: usize, reversed: bool) -> Result<Walk> {
    check_cycle(g, cycle)?;
    let n = cycle.len();
    let order: Vec<VertexId> = (0..n)
        .map(|i| if reversed { cycle[(start + n - i % n) % n] } else { cycle[(start + i) % n] })
        .collect();
    let dm = shortest_path_matrix(g);
    let mut vertices = vec![order[0]];
    let mut edges = Vec::new();
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        let (vs, es) = dm.path(a, b).ok_or(Error::Disconnected)?;
        vertices.extend_from_slice(&vs[1..]);
        edges.extend(es);
    }
    Ok(Walk { vertices, edges })
}

/// A cyclic order of the leaves of the tree `t` whose traced walk uses
/// every tree edge exactly twice: the order in which a depth-first
/// traversal (from the least vertex, edges in id order) meets the leaves.
pub fn eulerian_double_cover_cycle(t: &SubgraphRef<'_>) -> Result<Vec<VertexId>> {
    let s = t.structure();
    if !s.is_tree || s.leaves.len() < 2 {
        return Err(Error::Precondition("needs a tree with at least two leaves".into()));
    }
    let host = t.host();
    let root = *t.vertices().iter().next().expect("non-empty");
    let mut order = Vec::new();
    let mut stack = vec![(root, usize::MAX)];
    while let Some((v, via)) = stack.pop() {
        if s.leaves.contains(&v) {
            order.push(v);
        }
        let mut next: Vec<(VertexId, EdgeId)> = host
            .incident(v)
            .iter()
            .filter(|&&e| e != via && t.contains_edge(e))
            .map(|&e| (host.edge(e).other(v), e))
            .collect();
        next.sort_by_key(|&(_, e)| e);
        for (w, e) in next.into_iter().rev() {
            stack.push((w, e));
        }
    }
    Ok(order)
}

/// The three equivalent conditions on a tree `T` and a cycle `C` through
/// exactly its leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarReport {
    /// `T ∪ C` is planar.
    pub cond_a: bool,
    /// Every tree edge splits `V(C)` into two arcs of `C`.
    pub cond_b: bool,
    /// The walk traced by `C` in `T` uses every tree edge exactly twice.
    pub cond_c: bool,
}

impl PlanarReport {
    pub fn agree(&self) -> bool {
        self.cond_a == self.cond_b && self.cond_b == self.cond_c
    }
}

pub fn planar_equivalence_report(t: &SubgraphRef<'_>, cycle: &[VertexId]) -> Result<PlanarReport> {
    let host = t.host();
    check_cycle(host, cycle)?;
    let s = t.structure();
    if !s.is_tree {
        return Err(Error::Precondition("T must be a tree".into()));
    }
    let mut on_cycle: Vec<VertexId> = cycle.to_vec();
    on_cycle.sort_unstable();
    if on_cycle != s.leaves.iter().copied().collect::<Vec<_>>() {
        return Err(Error::Precondition("the cycle must pass through exactly the leaves of T".into()));
    }
    let tree = t.restricted_graph().graph;

    let mut union = tree.clone();
    for i in 0..cycle.len() {
        union.add_edge(cycle[i], cycle[(i + 1) % cycle.len()], Rational::ONE)?;
    }
    let cond_a = is_planar(&union)?;

    let position: BTreeMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let cond_b = tree.edges().all(|(id, _)| {
        let side = edge_side(&tree, id);
        let changes = (0..cycle.len())
            .filter(|&i| side[cycle[i]] != side[cycle[(i + 1) % cycle.len()]])
            .count();
        debug_assert!(position.len() == cycle.len());
        changes <= 2
    });

    let walk = trace_walk(&tree, cycle, 0, false)?;
    let mult = walk_multiplicities(&walk);
    let cond_c = tree.edges().all(|(id, _)| mult.get(&id) == Some(&2));
    Ok(PlanarReport { cond_a, cond_b, cond_c })
}

/// Vertices on the `u` side of tree edge `e`.
fn edge_side(tree: &WeightedMultigraph, e: EdgeId) -> Vec<bool> {
    let edge = tree.edge(e);
    let mut side = vec![false; tree.vertex_count()];
    side[edge.u] = true;
    let mut stack = vec![edge.u];
    while let Some(x) = stack.pop() {
        for &f in tree.incident(x) {
            let y = tree.edge(f).other(x);
            if f != e && !side[y] {
                side[y] = true;
                stack.push(y);
            }
        }
    }
    side
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Edges ua, ub, uv, vc, vd with unit lengths.
    fn fig1() -> WeightedMultigraph {
        let mut g = WeightedMultigraph::with_vertices(["a", "b", "c", "d", "u", "v"]).unwrap();
        for (x, y) in [("u", "a"), ("u", "b"), ("u", "v"), ("v", "c"), ("v", "d")] {
            g.add_named_edge(x, y, 1).unwrap();
        }
        g
    }

    fn ids(g: &WeightedMultigraph, names: &[&str]) -> Vec<VertexId> {
        names.iter().map(|n| g.vertex(n).unwrap()).collect()
    }

    #[test]
    fn multiplicities_on_fig1() {
        let g = fig1();
        let c1 = trace_walk(&g, &ids(&g, &["a", "b", "c", "d"]), 0, false).unwrap();
        assert!(c1.is_closed());
        assert!(walk_multiplicities(&c1).values().all(|&m| m == 2));
        assert_eq!(c1.length(&g), Rational::from(10));

        let c3 = trace_walk(&g, &ids(&g, &["a", "c", "b", "d"]), 0, false).unwrap();
        let m = walk_multiplicities(&c3);
        assert_eq!(m[&2], 4);
        for e in [0, 1, 3, 4] {
            assert_eq!(m[&e], 2);
        }
    }

    #[test]
    fn trivial_walk() {
        let w = Walk::trivial(3);
        assert!(walk_multiplicities(&w).is_empty());
        assert!(w.is_closed());
    }

    #[test]
    fn walk_validation() {
        let g = fig1();
        assert!(Walk::new(&g, vec![4, 0], vec![0]).is_ok());
        assert!(Walk::new(&g, vec![4, 1], vec![0]).is_err());
        assert!(Walk::new(&g, vec![4], vec![0]).is_err());
    }

    #[test]
    fn traced_triangle_is_itself() {
        let mut g = WeightedMultigraph::with_vertex_count(3);
        for i in 0..3 {
            g.add_edge(i, (i + 1) % 3, Rational::ONE).unwrap();
        }
        let w = trace_walk(&g, &[0, 1, 2], 0, false).unwrap();
        assert_eq!(w.vertices(), &[0, 1, 2, 0]);
        assert_eq!(w.edges(), &[0, 1, 2]);
        let back = trace_walk(&g, &[0, 1, 2], 1, true).unwrap();
        assert_eq!(back.vertices(), &[1, 0, 2, 1]);
    }

    #[test]
    fn trace_rejects_bad_cycles() {
        let mut g = WeightedMultigraph::with_vertex_count(3);
        g.add_edge(0, 1, Rational::ONE).unwrap();
        assert_eq!(trace_walk(&g, &[0, 2], 0, false), Err(Error::Disconnected));
        assert!(trace_walk(&g, &[0], 0, false).is_err());
        assert!(trace_walk(&g, &[0, 1, 0], 0, false).is_err());
    }

    #[test]
    fn euler_orders() {
        let g = fig1();
        let t = SubgraphRef::full(&g);
        let order = eulerian_double_cover_cycle(&t).unwrap();
        assert_eq!(order, ids(&g, &["a", "b", "c", "d"]));
        let w = trace_walk(&g, &order, 0, false).unwrap();
        assert_eq!(w.length(&g), Rational::from(10));

        let mut edge = WeightedMultigraph::with_vertex_count(2);
        edge.add_edge(0, 1, Rational::from(3)).unwrap();
        let order = eulerian_double_cover_cycle(&SubgraphRef::full(&edge)).unwrap();
        assert_eq!(order, vec![0, 1]);
        assert_eq!(trace_walk(&edge, &order, 0, false).unwrap().length(&edge), Rational::from(6));
    }

    #[test]
    fn star_any_order() {
        let mut g = WeightedMultigraph::with_vertex_count(4);
        for i in 1..4 {
            g.add_edge(0, i, Rational::ONE).unwrap();
        }
        for order in [[1, 2, 3], [1, 3, 2], [2, 1, 3]] {
            let w = trace_walk(&g, &order, 0, false).unwrap();
            assert_eq!(w.length(&g), Rational::from(6));
        }
    }

    #[test]
    fn planar_reports_on_fig1() {
        let g = fig1();
        let t = SubgraphRef::full(&g);
        let r1 = planar_equivalence_report(&t, &ids(&g, &["a", "b", "c", "d"])).unwrap();
        assert_eq!(r1, PlanarReport { cond_a: true, cond_b: true, cond_c: true });
        let r3 = planar_equivalence_report(&t, &ids(&g, &["a", "c", "b", "d"])).unwrap();
        assert_eq!(r3, PlanarReport { cond_a: false, cond_b: false, cond_c: false });
        assert!(planar_equivalence_report(&t, &ids(&g, &["a", "b", "c"])).is_err());
    }

    #[test]
    fn single_edge_report() {
        let mut g = WeightedMultigraph::with_vertex_count(2);
        g.add_edge(0, 1, Rational::ONE).unwrap();
        let r = planar_equivalence_report(&SubgraphRef::full(&g), &[0, 1]).unwrap();
        assert!(r.cond_a && r.cond_b && r.cond_c);
    }
}
