//! Shortcut trees for cycles: after suppressing degree-2 vertices, `T ∪ C`
//! is planar, 3-regular and one of five multigraphs, with two to six
//! leaves.

use serde::Serialize;

use super::{verify_sct, ShortcutTree};
use crate::error::{Error, Result};
use crate::graph::{multigraph_isomorphic, suppress_degree_two, SubgraphRef, VertexId, WeightedMultigraph};
use crate::planarity::is_planar;
use crate::rational::Rational;

pub const CATALOGUE_SIZE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleShape {
    /// 1-based index into [`cycle_catalogue`], if `T ∪ C` matches an entry.
    pub shape: Option<usize>,
    pub leaves: usize,
    pub cubic: bool,
    pub planar: bool,
    /// For three or more leaves: any two consecutive leaf-to-leaf arcs of
    /// the cycle are together longer than any single arc.
    pub consecutive_arcs_long: Option<bool>,
    /// For three or more leaves: every arc is shorter than half the cycle.
    pub arcs_below_half: Option<bool>,
}

/// `T ∪ C` for a tree `edges` on leaves `0..m` (further vertices are
/// internal) and the cycle through the leaves in order.
fn tree_plus_cycle(vertex_count: usize, leaves: usize, edges: &[(usize, usize)]) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::with_vertex_count(vertex_count);
    for &(a, b) in edges {
        g.add_edge(a, b, Rational::ONE).expect("valid edge");
    }
    for i in 0..leaves {
        g.add_edge(i, (i + 1) % leaves, Rational::ONE).expect("valid edge");
    }
    g
}

/// The five shapes, by leaf count 2 to 6: the theta graph, K4, the
/// triangular prism, the five-leaf caterpillar and the three-cherry
/// spider, each drawn with the cycle through the leaves in planar order.
pub fn cycle_catalogue() -> Vec<WeightedMultigraph> {
    vec![
        tree_plus_cycle(2, 2, &[(0, 1)]),
        tree_plus_cycle(4, 3, &[(3, 0), (3, 1), (3, 2)]),
        tree_plus_cycle(6, 4, &[(4, 0), (4, 1), (5, 2), (5, 3), (4, 5)]),
        tree_plus_cycle(8, 5, &[(5, 0), (5, 1), (6, 2), (7, 3), (7, 4), (5, 6), (6, 7)]),
        tree_plus_cycle(
            10,
            6,
            &[(6, 0), (6, 1), (7, 2), (7, 3), (8, 4), (8, 5), (9, 6), (9, 7), (9, 8)],
        ),
    ]
}

/// Structural report for a certified shortcut tree whose host is a cycle.
pub fn classify_cycle_sct(st: &ShortcutTree) -> Result<CycleShape> {
    let order = cycle_order(&st.host)?;
    if !verify_sct(st)?.is_valid() {
        return Err(Error::InvalidInstance("not a valid shortcut tree".into()));
    }
    let union = suppress_degree_two(&st.union_graph())?;
    let cubic = union.vertices().all(|v| union.degree(v) == 3);
    let planar = is_planar(&union)?;
    let catalogue = cycle_catalogue();
    let mut shape = None;
    for (i, c) in catalogue.iter().enumerate() {
        if multigraph_isomorphic(&union, c, false)? {
            shape = Some(i + 1);
            break;
        }
    }
    let images = st.leaf_images();
    let leaves = images.len();
    let (mut consecutive_arcs_long, mut arcs_below_half) = (None, None);
    if leaves >= 3 {
        let arcs = leaf_arcs(&st.host, &order, &images);
        let total: Rational = arcs.iter().sum();
        let longest = *arcs.iter().max().expect("at least three arcs");
        consecutive_arcs_long = Some((0..leaves).all(|i| arcs[i] + arcs[(i + 1) % leaves] > longest));
        arcs_below_half = Some(arcs.iter().all(|&a| a + a < total));
    }
    Ok(CycleShape { shape, leaves, cubic, planar, consecutive_arcs_long, arcs_below_half })
}

/// Vertices and edges of a cycle in traversal order, starting at vertex 0.
fn cycle_order(host: &WeightedMultigraph) -> Result<Vec<(VertexId, usize)>> {
    let s = SubgraphRef::full(host).structure();
    if !s.is_cycle || host.vertex_count() < 2 {
        return Err(Error::Precondition("the host must be a cycle".into()));
    }
    let mut order = Vec::with_capacity(host.vertex_count());
    let (mut v, mut via) = (0, usize::MAX);
    loop {
        let e = *host.incident(v).iter().find(|&&e| e != via).expect("2-regular");
        order.push((v, e));
        v = host.edge(e).other(v);
        via = e;
        if v == 0 {
            break;
        }
    }
    Ok(order)
}

/// Lengths of the cycle segments between consecutive leaf images.
fn leaf_arcs(host: &WeightedMultigraph, order: &[(VertexId, usize)], images: &[VertexId]) -> Vec<Rational> {
    let start = order.iter().position(|(v, _)| images.contains(v)).expect("leaves lie on the cycle");
    let mut arcs = Vec::new();
    let mut current = Rational::ZERO;
    for i in 0..order.len() {
        let (_, e) = order[(start + i) % order.len()];
        current += host.len(e);
        let (next, _) = order[(start + i + 1) % order.len()];
        if images.contains(&next) {
            arcs.push(current);
            current = Rational::ZERO;
        }
    }
    arcs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shortcut::tests::triangle_with_star;

    #[test]
    fn catalogue_is_cubic_planar_and_pairwise_distinct() {
        let cat = cycle_catalogue();
        assert_eq!(cat.len(), CATALOGUE_SIZE);
        for (i, g) in cat.iter().enumerate() {
            assert!(g.vertices().all(|v| g.degree(v) == 3));
            assert!(is_planar(g).unwrap());
            for h in &cat[i + 1..] {
                assert!(!multigraph_isomorphic(g, h, false).unwrap());
            }
        }
    }

    #[test]
    fn triangle_star_is_k4() {
        let shape = classify_cycle_sct(&triangle_with_star(2, Rational::ONE)).unwrap();
        assert_eq!(shape.shape, Some(2));
        assert!(shape.cubic && shape.planar);
        assert_eq!(shape.consecutive_arcs_long, Some(true));
        assert_eq!(shape.arcs_below_half, Some(true));
    }

    #[test]
    fn chord_is_theta() {
        let mut host = WeightedMultigraph::with_vertex_count(4);
        for i in 0..4 {
            host.add_edge(i, (i + 1) % 4, Rational::ONE).unwrap();
        }
        let mut tree = WeightedMultigraph::with_vertex_count(2);
        tree.add_edge(0, 1, Rational::ONE).unwrap();
        let st = ShortcutTree::new(host, tree, [(0, 0), (1, 2)].into());
        let shape = classify_cycle_sct(&st).unwrap();
        assert_eq!(shape.shape, Some(1));
        assert_eq!(shape.consecutive_arcs_long, None);
    }

    #[test]
    fn rejects_invalid_or_non_cycle() {
        assert!(classify_cycle_sct(&triangle_with_star(2, Rational::from(2))).is_err());
        let mut st = triangle_with_star(2, Rational::ONE);
        st.host.add_vertex("x").unwrap();
        st.host.add_named_edge("a", "x", 1).unwrap();
        assert!(classify_cycle_sct(&st).is_err());
    }
}
