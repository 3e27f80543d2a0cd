//! Leaf-labelled trees without degree-2 vertices.

use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;
use crate::rational::Rational;

pub const MAX_TOPOLOGY_LEAVES: usize = 8;

/// A tree whose vertices `0..leaves` are its labelled leaves and whose
/// remaining vertices all have degree at least three.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeTopology {
    leaves: usize,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TreeTopology {
    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn internal_count(&self) -> usize {
        self.vertex_count - self.leaves
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The topology as a graph with the given edge lengths. Leaves are
    /// named by `leaf_names`, internal vertices `t0, t1, ...`.
    pub fn to_graph(&self, leaf_names: &[String], lengths: &[Rational]) -> Result<WeightedMultigraph> {
        if leaf_names.len() != self.leaves || lengths.len() != self.edges.len() {
            return Err(Error::Precondition("topology size mismatch".into()));
        }
        let names = leaf_names
            .iter()
            .cloned()
            .chain((0..self.internal_count()).map(|i| format!("t{i}")));
        let mut g = WeightedMultigraph::with_vertices(names)?;
        for (&(a, b), &len) in self.edges.iter().zip(lengths) {
            g.add_edge(a, b, len)?;
        }
        Ok(g)
    }

    /// For each edge, the leaves on the side of its first endpoint.
    pub(crate) fn leaf_sides(&self) -> Vec<u32> {
        let names: Vec<String> = (0..self.leaves).map(|i| format!("l{i}")).collect();
        let g = self
            .to_graph(&names, &vec![Rational::ONE; self.edges.len()])
            .expect("topologies are valid trees");
        let leaves: Vec<usize> = (0..self.leaves).collect();
        super::leaf_sides(&g, &leaves)
    }
}

const INTERNAL: usize = 1 << 16;

/// All leaf-labelled trees on `m` leaves without degree-2 vertices, each
/// exactly once. Leaf `j` is inserted into every tree on leaves `0..j`
/// either by subdividing an edge or by joining an internal vertex; every
/// tree arises from exactly one parent, namely itself with leaf `j`
/// removed and the resulting degree-2 vertex (if any) suppressed.
pub fn enumerate_topologies(m: usize) -> Result<Vec<TreeTopology>> {
    if !(2..=MAX_TOPOLOGY_LEAVES).contains(&m) {
        return Err(Error::SizeLimit(format!("topologies are enumerated for 2..={MAX_TOPOLOGY_LEAVES} leaves")));
    }
    let mut out = Vec::new();
    grow(vec![(0, 1)], 0, 2, m, &mut out);
    Ok(out)
}

fn grow(edges: Vec<(usize, usize)>, internal: usize, leaves: usize, target: usize, out: &mut Vec<TreeTopology>) {
    if leaves == target {
        out.push(finish(&edges, internal, leaves));
        return;
    }
    let new_leaf = leaves;
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        let w = INTERNAL + internal;
        let mut next = edges.clone();
        next[i] = (a, w);
        next.push((w, b));
        next.push((w, new_leaf));
        grow(next, internal + 1, leaves + 1, target, out);
    }
    for j in 0..internal {
        let mut next = edges.clone();
        next.push((INTERNAL + j, new_leaf));
        grow(next, internal, leaves + 1, target, out);
    }
}

fn finish(edges: &[(usize, usize)], internal: usize, leaves: usize) -> TreeTopology {
    let relabel = |v: usize| if v >= INTERNAL { leaves + v - INTERNAL } else { v };
    TreeTopology {
        leaves,
        vertex_count: leaves + internal,
        edges: edges.iter().map(|&(a, b)| (relabel(a), relabel(b))).collect(),
    }
}
