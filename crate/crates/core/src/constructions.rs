//! Explicit instance families with known Steiner distances.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, SubgraphRef, VertexId, WeightedMultigraph};
use crate::rational::Rational;
use crate::shortcut::ShortcutTree;

/// `K_{k+2}` on `0..=k+1`: spokes `0j` of length `k-1`, all other edges of
/// length `k`. The complete graph on `1..=k+1` is `k`-geodesic but not
/// `(k+1)`-geodesic.
#[derive(Clone, Debug)]
pub struct HierarchyInstance {
    pub k: usize,
    pub graph: WeightedMultigraph,
    pub h_edges: EdgeSet,
}

impl HierarchyInstance {
    pub fn h(&self) -> SubgraphRef<'_> {
        SubgraphRef::from_edges(&self.graph, self.h_edges.iter().copied()).expect("edges belong to the graph")
    }

    /// `(sd_G, sd_H)` of `V(H)`: `((k+1)(k-1), k^2)`.
    pub fn expected_gap(&self) -> (Rational, Rational) {
        let k = self.k as i128;
        (Rational::from((k + 1) * (k - 1)), Rational::from(k * k))
    }
}

pub fn hierarchy_example(k: usize) -> Result<HierarchyInstance> {
    if k < 2 {
        return Err(Error::Precondition("the hierarchy family starts at k = 2".into()));
    }
    let n = k + 2;
    let mut graph = WeightedMultigraph::with_vertices((0..n).map(|i| i.to_string()))?;
    let mut h_edges = EdgeSet::new();
    let (spoke, side) = (Rational::from(k as i64 - 1), Rational::from(k as i64));
    for i in 0..n {
        for j in i + 1..n {
            let e = graph.add_edge(i, j, if i == 0 { spoke } else { side })?;
            if i > 0 {
                h_edges.insert(e);
            }
        }
    }
    Ok(HierarchyInstance { k, graph, h_edges })
}

/// `K_{2,2k}` with parts `{x, y}` and `A ∪ B`, and a double star on
/// `x', y'` whose `2k` leaves are `A ∪ B`.
#[derive(Clone, Debug)]
pub struct BipartiteSctInstance {
    pub k: usize,
    pub shortcut: ShortcutTree,
    /// Host ids.
    pub x: VertexId,
    pub y: VertexId,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
}

impl BipartiteSctInstance {
    /// `T ∪ H` with the host edges listed first.
    pub fn ambient(&self) -> (WeightedMultigraph, EdgeSet) {
        let g = self.shortcut.union_graph();
        (g, (0..self.shortcut.host.edge_count()).collect())
    }
}

/// The lengths `(short, long)`. The short length is `k-1`, which is not
/// positive for `k = 1`; there `1/4` stands in for it.
pub fn bipartite_lengths(k: usize) -> (Rational, Rational) {
    let long = Rational::from(k as i64);
    let short = if k == 1 { Rational::new(1, 4) } else { Rational::from(k as i64 - 1) };
    (short, long)
}

pub fn bipartite_sct_example(k: usize) -> Result<BipartiteSctInstance> {
    if k < 1 {
        return Err(Error::Precondition("the bipartite family starts at k = 1".into()));
    }
    let (short, long) = bipartite_lengths(k);
    let a_names: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    let b_names: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();

    let mut host = WeightedMultigraph::new();
    let x = host.add_vertex("x")?;
    let y = host.add_vertex("y")?;
    let a: Vec<VertexId> = a_names.iter().map(|n| host.add_vertex(n.as_str())).collect::<Result<_>>()?;
    let b: Vec<VertexId> = b_names.iter().map(|n| host.add_vertex(n.as_str())).collect::<Result<_>>()?;
    for &v in &a {
        host.add_edge(v, x, short)?;
        host.add_edge(v, y, long)?;
    }
    for &v in &b {
        host.add_edge(v, y, short)?;
        host.add_edge(v, x, long)?;
    }

    let mut tree = WeightedMultigraph::new();
    let xp = tree.add_vertex("x'")?;
    let yp = tree.add_vertex("y'")?;
    tree.add_edge(xp, yp, short)?;
    let mut leaf_map = BTreeMap::new();
    for (&hv, centre) in a.iter().map(|v| (v, xp)).chain(b.iter().map(|v| (v, yp))) {
        let t = tree.add_vertex(host.name(hv))?;
        tree.add_edge(t, centre, short)?;
        leaf_map.insert(t, hv);
    }
    Ok(BipartiteSctInstance { k, shortcut: ShortcutTree::new(host, tree, leaf_map), x, y, a, b })
}

/// `(sd_H(A' ∪ B'), sd_T(A' ∪ B'))` in the bipartite family from the
/// sizes `|A'|, |B'|`. Sets with at most one vertex have distance 0.
pub fn bipartite_sd_closed_forms(a_size: usize, b_size: usize, k: usize) -> Result<(Rational, Rational)> {
    if k < 1 || a_size > k || b_size > k {
        return Err(Error::Precondition("need k >= 1 and |A'|, |B'| <= k".into()));
    }
    let n = a_size + b_size;
    if n <= 1 {
        return Ok((Rational::ZERO, Rational::ZERO));
    }
    let (short, long) = bipartite_lengths(k);
    let nn = Rational::from(n as i64);
    let sd_h = short * nn + (long - short) * Rational::from(a_size.min(b_size) as i64);
    let sd_t = if a_size == 0 || b_size == 0 { short * nn } else { short * nn + short };
    Ok((sd_h, sd_t))
}
