//! Finite undirected multigraphs with positive rational edge lengths.
//!
//! Vertices and edges are dense indices assigned at insertion. Parallel
//! edges are distinct edges; loops are rejected. Every iteration order
//! in this crate follows these ids, so all algorithms are deterministic.

mod iso;
mod json;
mod structure;

use std::collections::{BTreeSet, HashMap};

pub use iso::{multigraph_isomorphic, MAX_ISOMORPHISM_VERTICES};
pub use json::{EdgeJson, GraphJson};
pub use structure::{edge_bipartition, structural_predicates, suppress_degree_two, Bipartition, Structure};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type VertexSet = BTreeSet<VertexId>;
pub type EdgeSet = BTreeSet<EdgeId>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub len: Rational,
}

impl Edge {
    /// The endpoint opposite to `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            debug_assert_eq!(x, self.v);
            self.u
        }
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

#[derive(Clone, Debug, Default)]
pub struct WeightedMultigraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<EdgeId>>,
}

impl PartialEq for WeightedMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for WeightedMultigraph {}

impl WeightedMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph on `n` isolated vertices named `"0"`, `"1"`, ...
    pub fn with_vertex_count(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex(i.to_string()).expect("fresh names are unique");
        }
        g
    }

    /// A graph on the given vertex names, without edges.
    pub fn with_vertices<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut g = Self::new();
        for name in names {
            g.add_vertex(name)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::InvalidGraph(format!("duplicate vertex {name:?}")));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.incidence.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, len: Rational) -> Result<EdgeId> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("edge endpoint out of range ({u}, {v})")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {:?}", self.names[u])));
        }
        if !len.is_positive() {
            return Err(Error::InvalidGraph(format!("non-positive length {len}")));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, len });
        self.incidence[u].push(id);
        self.incidence[v].push(id);
        Ok(id)
    }

    /// Convenience for literals: adds an edge between two named vertices.
    pub fn add_named_edge(&mut self, u: &str, v: &str, len: impl Into<Rational>) -> Result<EdgeId> {
        let a = self.vertex_id(u)?;
        let b = self.vertex_id(v)?;
        self.add_edge(a, b, len.into())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().enumerate()
    }

    pub fn len(&self, id: EdgeId) -> Rational {
        self.edges[id].len
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.len).collect()
    }

    /// Incident edge ids of `v`, in increasing id order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_ids<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<VertexSet> {
        names.into_iter().map(|n| self.vertex_id(n)).collect()
    }

    pub fn total_length(&self) -> Rational {
        self.edges.iter().map(|e| e.len).sum()
    }

    /// Same topology, new lengths (indexed by edge id).
    pub fn with_lengths(&self, lengths: &[Rational]) -> Result<Self> {
        if lengths.len() != self.edge_count() {
            return Err(Error::Precondition(format!(
                "expected {} lengths, got {}",
                self.edge_count(),
                lengths.len()
            )));
        }
        if let Some(bad) = lengths.iter().find(|l| !l.is_positive()) {
            return Err(Error::InvalidGraph(format!("non-positive length {bad}")));
        }
        let mut g = self.clone();
        for (e, l) in g.edges.iter_mut().zip(lengths) {
            e.len = *l;
        }
        Ok(g)
    }

    /// Number of edges joining `a` and `b`.
    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        self.incidence[a].iter().filter(|&&e| self.edges[e].joins(a, b)).count()
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &e in &self.incidence[x] {
                    let y = self.edges[e].other(x);
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The subgraph spanned by `edges` together with the isolated vertices
    /// in `extra_vertices`, as a fresh graph. Vertex and edge ids are
    /// renumbered in increasing order of the original ids.
    pub fn extract(&self, extra_vertices: &VertexSet, edges: &EdgeSet) -> Extracted {
        let mut keep: VertexSet = extra_vertices.clone();
        for &e in edges {
            keep.insert(self.edges[e].u);
            keep.insert(self.edges[e].v);
        }
        let mut graph = WeightedMultigraph::new();
        let mut local = vec![usize::MAX; self.vertex_count()];
        let mut vertex_origin = Vec::with_capacity(keep.len());
        for &v in &keep {
            local[v] = graph.add_vertex(self.names[v].clone()).expect("host names are unique");
            vertex_origin.push(v);
        }
        let mut edge_origin = Vec::with_capacity(edges.len());
        for &e in edges {
            let edge = self.edges[e];
            graph
                .add_edge(local[edge.u], local[edge.v], edge.len)
                .expect("host edges are valid");
            edge_origin.push(e);
        }
        Extracted { graph, vertex_origin, edge_origin }
    }
}

/// A graph cut out of a host, with maps back to host ids.
#[derive(Clone, Debug)]
pub struct Extracted {
    pub graph: WeightedMultigraph,
    /// `vertex_origin[local] = host vertex`.
    pub vertex_origin: Vec<VertexId>,
    /// `edge_origin[local] = host edge`.
    pub edge_origin: Vec<EdgeId>,
}

impl Extracted {
    pub fn local_vertex(&self, host: VertexId) -> Option<VertexId> {
        self.vertex_origin.binary_search(&host).ok()
    }
}

/// An edge-subset view of a host graph, closed under endpoints, carrying
/// the restriction of the host's lengths.
#[derive(Clone, Debug)]
pub struct SubgraphRef<'g> {
    host: &'g WeightedMultigraph,
    vertices: VertexSet,
    edges: EdgeSet,
}

impl<'g> SubgraphRef<'g> {
    pub fn new(host: &'g WeightedMultigraph, vertices: VertexSet, edges: EdgeSet) -> Result<Self> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= host.vertex_count()) {
            return Err(Error::NotSubgraph(format!("vertex {v} not in host")));
        }
        for &e in &edges {
            if e >= host.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            let edge = host.edge(e);
            if !vertices.contains(&edge.u) || !vertices.contains(&edge.v) {
                return Err(Error::NotSubgraph(format!("edge {e} has an endpoint outside the vertex set")));
            }
        }
        Ok(Self { host, vertices, edges })
    }

    /// The subgraph formed by `edges` and their endpoints.
    pub fn from_edges(host: &'g WeightedMultigraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let edges: EdgeSet = edges.into_iter().collect();
        let mut vertices = VertexSet::new();
        for &e in &edges {
            if e >= host.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            vertices.insert(host.edge(e).u);
            vertices.insert(host.edge(e).v);
        }
        Ok(Self { host, vertices, edges })
    }

    pub fn full(host: &'g WeightedMultigraph) -> Self {
        Self { host, vertices: host.vertices().collect(), edges: (0..host.edge_count()).collect() }
    }

    /// The subgraph induced by `vertices`.
    pub fn induced(host: &'g WeightedMultigraph, vertices: VertexSet) -> Result<Self> {
        let edges = host
            .edges()
            .filter(|(_, e)| vertices.contains(&e.u) && vertices.contains(&e.v))
            .map(|(id, _)| id)
            .collect();
        Self::new(host, vertices, edges)
    }

    pub fn host(&self) -> &'g WeightedMultigraph {
        self.host
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Sum of the lengths of the edges of the subgraph.
    pub fn length(&self) -> Rational {
        subgraph_length(self)
    }

    pub fn structure(&self) -> Structure {
        structural_predicates(self)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.host.incident(v).iter().filter(|e| self.edges.contains(e)).count()
    }

    /// The subgraph as a standalone graph on the host's full vertex set
    /// (vertices outside the subgraph stay isolated), so host vertex ids
    /// remain valid. `edge_origin` maps the new edge ids back to the host.
    pub fn restricted_graph(&self) -> Extracted {
        let mut graph = WeightedMultigraph::new();
        for v in self.host.vertices() {
            graph.add_vertex(self.host.name(v)).expect("host names are unique");
        }
        let mut edge_origin = Vec::with_capacity(self.edges.len());
        for &e in &self.edges {
            let edge = self.host.edge(e);
            graph.add_edge(edge.u, edge.v, edge.len).expect("host edges are valid");
            edge_origin.push(e);
        }
        Extracted { graph, vertex_origin: self.host.vertices().collect(), edge_origin }
    }

    /// The subgraph as a standalone graph on its own vertices.
    pub fn extracted(&self) -> Extracted {
        self.host.extract(&self.vertices, &self.edges)
    }
}

/// ℓ(H): the exact sum of the edge lengths of `h`.
pub fn subgraph_length(h: &SubgraphRef<'_>) -> Rational {
    h.edges.iter().map(|&e| h.host.len(e)).sum()
}
