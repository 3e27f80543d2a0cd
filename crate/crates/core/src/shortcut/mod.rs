//! Shortcut trees: a tree `T` glued to a host `H` at its leaves that is
//! strictly shorter than `H` on the whole leaf set yet never shorter on a
//! proper subset of it.

mod cycle;
pub mod search;
mod topology;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, GraphJson, SubgraphRef, VertexId, VertexSet, WeightedMultigraph};
use crate::rational::{Distance, Rational};
use crate::steiner::SubsetSteiner;

pub use cycle::{classify_cycle_sct, cycle_catalogue, CycleShape, CATALOGUE_SIZE};
pub use search::{lp_feasible_lengths, search_shortcut_trees, SearchConfig, MAX_SEARCH_LEAVES};
pub use topology::{enumerate_topologies, TreeTopology, MAX_TOPOLOGY_LEAVES};

/// Largest leaf count `verify_sct` evaluates (it visits every leaf subset).
pub const MAX_VERIFY_LEAVES: usize = 20;

/// A tree and a host graph, each carrying its own lengths, glued along
/// `leaf_map` (tree vertex to host vertex). The two edge sets are disjoint
/// by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutTree {
    pub host: WeightedMultigraph,
    pub tree: WeightedMultigraph,
    pub leaf_map: BTreeMap<VertexId, VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SctReport {
    /// The tree meets the host exactly in its leaves.
    pub sct1: bool,
    /// No shared edges.
    pub sct2: bool,
    /// `ℓ(T) < sd_H(L(T))`.
    pub sct3: bool,
    /// `sd_H(B) <= sd_T(B)` for every proper leaf subset `B`.
    pub sct4: bool,
    pub leaves: usize,
    pub tree_length: Rational,
    pub host_steiner: Distance,
    /// `sd_H(L(T)) - ℓ(T)`.
    pub margin: Distance,
    /// Proper leaf subsets (as host vertices) with `sd_T(B) < sd_H(B)`.
    pub violated_subsets: Vec<VertexSet>,
}

impl SctReport {
    pub fn is_valid(&self) -> bool {
        self.sct1 && self.sct2 && self.sct3 && self.sct4
    }
}

impl ShortcutTree {
    pub fn new(host: WeightedMultigraph, tree: WeightedMultigraph, leaf_map: BTreeMap<VertexId, VertexId>) -> Self {
        ShortcutTree { host, tree, leaf_map }
    }

    /// Cuts a shortcut tree candidate out of an ambient graph: `tree_edges`
    /// become the tree, `h` the host, and tree vertices lying in `h` are
    /// identified with their host copies.
    pub fn from_ambient(h: &SubgraphRef<'_>, tree_edges: &EdgeSet) -> Result<Self> {
        if let Some(e) = tree_edges.iter().find(|e| h.contains_edge(**e)) {
            return Err(Error::InvalidInstance(format!("edge {e} belongs to both the tree and the host")));
        }
        let g = h.host();
        let host = h.extracted();
        let tree = g.extract(&VertexSet::new(), tree_edges);
        let leaf_map = tree
            .vertex_origin
            .iter()
            .enumerate()
            .filter_map(|(t, &v)| host.local_vertex(v).map(|hv| (t, hv)))
            .collect();
        Ok(ShortcutTree { host: host.graph, tree: tree.graph, leaf_map })
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        self.tree.vertices().filter(|&v| self.tree.degree(v) == 1).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Host vertices the leaves are glued to, in tree-vertex order.
    pub fn leaf_images(&self) -> Vec<VertexId> {
        self.leaves().iter().filter_map(|t| self.leaf_map.get(t).copied()).collect()
    }

    /// `T ∪ H` as one graph. Host vertices and edges keep their ids; the
    /// remaining tree vertices and all tree edges follow.
    pub fn union_graph(&self) -> WeightedMultigraph {
        let mut g = self.host.clone();
        let mut taken: BTreeSet<String> = g.names().iter().cloned().collect();
        let mut place = vec![usize::MAX; self.tree.vertex_count()];
        for t in self.tree.vertices() {
            place[t] = match self.leaf_map.get(&t) {
                Some(&h) => h,
                None => {
                    let mut name = self.tree.name(t).to_string();
                    while taken.contains(&name) {
                        name.push('\'');
                    }
                    taken.insert(name.clone());
                    g.add_vertex(name).expect("fresh name")
                }
            };
        }
        for (_, e) in self.tree.edges() {
            g.add_edge(place[e.u], place[e.v], e.len).expect("tree edges are valid");
        }
        g
    }

    fn check_map(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (&t, &h) in &self.leaf_map {
            if t >= self.tree.vertex_count() || h >= self.host.vertex_count() {
                return Err(Error::InvalidInstance(format!("leaf_map entry {t} -> {h} out of range")));
            }
            if !seen.insert(h) {
                return Err(Error::InvalidInstance(format!(
                    "leaf_map is not injective: host vertex {} is used twice",
                    self.host.name(h)
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> ShortcutTreeJson {
        ShortcutTreeJson {
            host: self.host.to_json(),
            tree: self.tree.to_json(),
            leaf_map: self
                .leaf_map
                .iter()
                .map(|(&t, &h)| (self.tree.name(t).to_string(), self.host.name(h).to_string()))
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ShortcutTreeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        ShortcutTree::try_from(&doc)
    }
}

/// `{"host": graph, "tree": graph, "leaf_map": {"tree vertex": "host vertex"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortcutTreeJson {
    pub host: GraphJson,
    pub tree: GraphJson,
    pub leaf_map: BTreeMap<String, String>,
}

impl TryFrom<&ShortcutTreeJson> for ShortcutTree {
    type Error = Error;

    fn try_from(doc: &ShortcutTreeJson) -> Result<Self> {
        let host = WeightedMultigraph::try_from(&doc.host)?;
        let tree = WeightedMultigraph::try_from(&doc.tree)?;
        let mut leaf_map = BTreeMap::new();
        for (t, h) in &doc.leaf_map {
            leaf_map.insert(tree.vertex_id(t)?, host.vertex_id(h)?);
        }
        let st = ShortcutTree { host, tree, leaf_map };
        st.check_map()?;
        Ok(st)
    }
}

/// For each tree edge, the leaves (as bits over `leaves`) on the side of
/// the edge's `u` endpoint.
pub(crate) fn leaf_sides(tree: &WeightedMultigraph, leaves: &[VertexId]) -> Vec<u32> {
    let n = tree.vertex_count();
    let mut bit = vec![0u32; n];
    for (i, &l) in leaves.iter().enumerate() {
        bit[l] = 1 << i;
    }
    tree.edges()
        .map(|(id, e)| {
            let mut mask = 0;
            let mut seen = vec![false; n];
            seen[e.u] = true;
            seen[e.v] = true;
            let mut stack = vec![e.u];
            while let Some(x) = stack.pop() {
                mask |= bit[x];
                for &f in tree.incident(x) {
                    let y = tree.edge(f).other(x);
                    if f != id && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            mask
        })
        .collect()
}

/// `sd_T(B)` for a tree: total length of the edges separating `B`.
pub(crate) fn tree_steiner(sides: &[u32], lengths: &[Rational], mask: u32) -> Rational {
    sides
        .iter()
        .zip(lengths)
        .filter(|(&s, _)| mask & s != 0 && mask & !s != 0)
        .map(|(_, &l)| l)
        .sum()
}

/// Evaluates all four shortcut-tree conditions exactly.
pub fn verify_sct(st: &ShortcutTree) -> Result<SctReport> {
    st.check_map()?;
    if !SubgraphRef::full(&st.tree).structure().is_tree || st.tree.edge_count() == 0 {
        return Err(Error::InvalidInstance("the tree part must be a tree with at least one edge".into()));
    }
    let leaves = st.leaves();
    let m = leaves.len();
    if m > MAX_VERIFY_LEAVES {
        return Err(Error::SizeLimit(format!("verification limited to {MAX_VERIFY_LEAVES} leaves")));
    }
    let mut images = Vec::with_capacity(m);
    for &l in &leaves {
        match st.leaf_map.get(&l) {
            Some(&h) => images.push(h),
            None => {
                return Err(Error::InvalidInstance(format!(
                    "leaf {} is not identified with a host vertex",
                    st.tree.name(l)
                )))
            }
        }
    }
    let sct1 = st.leaf_map.len() == m;

    let sides = leaf_sides(&st.tree, &leaves);
    let lengths = st.tree.lengths();
    let tree_length: Rational = lengths.iter().sum();
    let sd_h = SubsetSteiner::compute(&st.host, &images, m);
    let full = (1u32 << m) - 1;
    let host_steiner = sd_h.distance(full);
    let margin = match host_steiner {
        Distance::Finite(d) => Distance::Finite(d - tree_length),
        Distance::Infinite => Distance::Infinite,
    };
    let sct3 = margin > Distance::ZERO;

    let mut violated_subsets = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        let in_tree = Distance::Finite(tree_steiner(&sides, &lengths, mask));
        if sd_h.distance(mask) > in_tree {
            violated_subsets.push((0..m).filter(|i| mask >> i & 1 == 1).map(|i| images[i]).collect());
        }
    }
    violated_subsets.sort();
    Ok(SctReport {
        sct1,
        sct2: true,
        sct3,
        sct4: violated_subsets.is_empty(),
        leaves: m,
        tree_length,
        host_steiner,
        margin,
        violated_subsets,
    })
}
