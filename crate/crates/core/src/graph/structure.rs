use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeId, SubgraphRef, VertexId, VertexSet, WeightedMultigraph};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub is_connected: bool,
    pub is_tree: bool,
    /// Connected and 2-regular; a pair of parallel edges counts.
    pub is_cycle: bool,
    pub leaves: VertexSet,
    /// Non-increasing.
    pub degree_sequence: Vec<usize>,
}

/// Basic shape predicates of a subgraph. The empty graph is not connected.
pub fn structural_predicates(h: &SubgraphRef<'_>) -> Structure {
    let degrees: BTreeMap<VertexId, usize> = h.vertices().iter().map(|&v| (v, h.degree(v))).collect();
    let is_connected = !h.vertices().is_empty() && component_count(h) == 1;
    let n = h.vertices().len();
    let m = h.edges().len();
    let is_tree = is_connected && m + 1 == n;
    let is_cycle = is_connected && m > 0 && degrees.values().all(|&d| d == 2);
    let leaves = degrees.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
    let mut degree_sequence: Vec<usize> = degrees.into_values().collect();
    degree_sequence.sort_unstable_by(|a, b| b.cmp(a));
    Structure { is_connected, is_tree, is_cycle, leaves, degree_sequence }
}

pub(crate) fn component_count(h: &SubgraphRef<'_>) -> usize {
    let host = h.host();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &s in h.vertices() {
        if !seen.insert(s) {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &e in host.incident(x) {
                if h.contains_edge(e) {
                    let y = host.edge(e).other(x);
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    count
}

/// The split of a vertex set `X` induced by deleting a tree edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    /// `X` restricted to the component of `T - e` containing the edge's `u`.
    pub first: VertexSet,
    /// `X` restricted to the component containing the edge's `v`.
    pub second: VertexSet,
}

impl Bipartition {
    pub fn is_nontrivial(&self) -> bool {
        !self.first.is_empty() && !self.second.is_empty()
    }
}

/// Splits `x` by the two components of `t - e`.
pub fn edge_bipartition(t: &SubgraphRef<'_>, e: EdgeId, x: &VertexSet) -> Result<Bipartition> {
    if !t.contains_edge(e) {
        return Err(Error::UnknownEdge(e));
    }
    if !t.structure().is_tree {
        return Err(Error::Precondition("edge_bipartition needs a tree".into()));
    }
    if let Some(v) = x.iter().find(|v| !t.vertices().contains(v)) {
        return Err(Error::Precondition(format!("vertex {v} is not in the tree")));
    }
    let host = t.host();
    let side = side_of(t, e, host.edge(e).u);
    let (first, second) = x.iter().partition(|v| side.contains(v));
    Ok(Bipartition { first, second })
}

/// Vertices reachable from `start` in `t - e`.
pub(crate) fn side_of(t: &SubgraphRef<'_>, e: EdgeId, start: VertexId) -> VertexSet {
    let host = t.host();
    let mut seen: VertexSet = [start].into_iter().collect();
    let mut stack = vec![start];
    while let Some(y) = stack.pop() {
        for &f in host.incident(y) {
            if f != e && t.contains_edge(f) {
                let z = host.edge(f).other(y);
                if seen.insert(z) {
                    stack.push(z);
                }
            }
        }
    }
    seen
}

/// Replaces every maximal path through degree-2 vertices by one edge
/// carrying the path's length. Surviving vertices keep their names and
/// relative order; edges are emitted in order of the least original edge
/// id on each path.
///
/// Fails when a component is a cycle (nothing to anchor the suppressed
/// path to) or when suppression would create a loop.
pub fn suppress_degree_two(g: &WeightedMultigraph) -> Result<WeightedMultigraph> {
    let is_internal = |v: VertexId| g.degree(v) == 2;
    for comp in g.components() {
        if comp.iter().all(|&v| is_internal(v)) {
            return Err(Error::Precondition(
                "cannot suppress degree-2 vertices of a cycle component".into(),
            ));
        }
    }

    let mut out = WeightedMultigraph::new();
    let mut local = vec![usize::MAX; g.vertex_count()];
    for v in g.vertices().filter(|&v| !is_internal(v)) {
        local[v] = out.add_vertex(g.name(v)).expect("names are unique");
    }

    // From internal vertex `x`, entered via `via`, follow the path to its end.
    let extend = |x: VertexId, via: EdgeId, used: &mut Vec<bool>| -> (VertexId, Rational) {
        let (mut cur, mut prev, mut len) = (x, via, Rational::ZERO);
        while is_internal(cur) {
            let next = *g
                .incident(cur)
                .iter()
                .find(|&&f| f != prev)
                .expect("degree-2 vertex has a second edge");
            used[next] = true;
            len += g.len(next);
            cur = g.edge(next).other(cur);
            prev = next;
        }
        (cur, len)
    };

    let mut used = vec![false; g.edge_count()];
    for (id, edge) in g.edges() {
        if used[id] {
            continue;
        }
        used[id] = true;
        let (s, len_s) = extend(edge.u, id, &mut used);
        let (t, len_t) = extend(edge.v, id, &mut used);
        if s == t {
            return Err(Error::Precondition(format!(
                "suppression would create a loop at {:?}",
                g.name(s)
            )));
        }
        out.add_edge(local[s], local[t], edge.len + len_s + len_t).expect("endpoints survive");
    }
    Ok(out)
}
