//! Exact Steiner distances and Steiner trees.
//!
//! Lengths are scaled by the common denominator of all edge lengths so the
//! dynamic programs run on integers; results are scaled back, so every
//! reported value is exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, SubgraphRef, VertexId, VertexSet, WeightedMultigraph};
use crate::rational::{Distance, Rational};

/// Default cap on the number of terminals handed to the subset DP.
pub const DEFAULT_TERMINAL_CAP: usize = 12;
/// Edge cap for the exhaustive oracle.
pub const BRUTE_FORCE_EDGE_CAP: usize = 16;

const INF: i128 = i128::MAX / 4;

/// Edge lengths multiplied by their common denominator.
#[derive(Clone, Debug)]
pub(crate) struct IntLengths {
    pub scale: i128,
    pub lens: Vec<i128>,
}

impl IntLengths {
    pub fn new(g: &WeightedMultigraph) -> Self {
        let lengths = g.lengths();
        let scale = Rational::common_denominator(&lengths);
        let lens = lengths.iter().map(|l| l.scaled_to_integer(scale)).collect();
        Self { scale, lens }
    }

    pub fn to_distance(&self, v: i128) -> Distance {
        if v >= INF {
            Distance::Infinite
        } else {
            Distance::Finite(Rational::new(v, self.scale))
        }
    }
}

/// All-pairs shortest distances with lexicographically least path
/// reconstruction.
#[derive(Clone, Debug)]
pub struct DistanceMatrix<'g> {
    graph: &'g WeightedMultigraph,
    lengths: IntLengths,
    dist: Vec<i128>,
    n: usize,
}

/// Pairwise distances of `g`; unreachable pairs are `Distance::Infinite`.
pub fn shortest_path_matrix(g: &WeightedMultigraph) -> DistanceMatrix<'_> {
    let n = g.vertex_count();
    let lengths = IntLengths::new(g);
    let mut dist = vec![INF; n * n];
    for v in 0..n {
        dist[v * n + v] = 0;
    }
    for (id, e) in g.edges() {
        let l = lengths.lens[id];
        let (a, b) = (e.u * n + e.v, e.v * n + e.u);
        dist[a] = dist[a].min(l);
        dist[b] = dist[b].min(l);
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik >= INF {
                continue;
            }
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
    DistanceMatrix { graph: g, lengths, dist, n }
}

impl<'g> DistanceMatrix<'g> {
    pub fn get(&self, x: VertexId, y: VertexId) -> Distance {
        self.lengths.to_distance(self.dist[x * self.n + y])
    }

    pub(crate) fn raw(&self, x: VertexId, y: VertexId) -> i128 {
        self.dist[x * self.n + y]
    }

    pub(crate) fn lengths(&self) -> &IntLengths {
        &self.lengths
    }

    /// The shortest `x`-`y` path with the lexicographically least vertex
    /// sequence (ties between parallel edges go to the smaller edge id).
    /// Returns `(vertices, edges)` or `None` when `y` is unreachable.
    pub fn path(&self, x: VertexId, y: VertexId) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
        if self.raw(x, y) >= INF {
            return None;
        }
        let g = self.graph;
        let mut vertices = vec![x];
        let mut edges = Vec::new();
        let mut cur = x;
        while cur != y {
            let remaining = self.raw(cur, y);
            let (next, edge) = g
                .incident(cur)
                .iter()
                .map(|&e| (g.edge(e).other(cur), e))
                .filter(|&(w, e)| self.lengths.lens[e] + self.raw(w, y) == remaining)
                .min()
                .expect("a tight edge exists on every shortest path");
            vertices.push(next);
            edges.push(edge);
            cur = next;
        }
        Some((vertices, edges))
    }
}

/// A Steiner tree as vertex and edge sets of the graph it was computed in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerTree {
    pub vertices: VertexSet,
    pub edges: EdgeSet,
}

impl SteinerTree {
    pub fn subgraph<'g>(&self, host: &'g WeightedMultigraph) -> SubgraphRef<'g> {
        SubgraphRef::new(host, self.vertices.clone(), self.edges.clone())
            .expect("Steiner trees are closed under endpoints")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerResult {
    pub distance: Distance,
    /// Present exactly when `distance` is finite.
    pub tree: Option<SteinerTree>,
}

impl SteinerResult {
    fn empty_for(terminals: &VertexSet) -> Self {
        SteinerResult {
            distance: Distance::ZERO,
            tree: Some(SteinerTree { vertices: terminals.clone(), edges: EdgeSet::new() }),
        }
    }

    fn unreachable() -> Self {
        SteinerResult { distance: Distance::Infinite, tree: None }
    }
}

fn check_terminals(g: &WeightedMultigraph, terminals: &VertexSet) -> Result<()> {
    match terminals.iter().find(|&&v| v >= g.vertex_count()) {
        Some(v) => Err(Error::UnknownVertex(v.to_string())),
        None => Ok(()),
    }
}

/// Steiner tree for `terminals` with the default terminal cap.
pub fn steiner_tree(g: &WeightedMultigraph, terminals: &VertexSet) -> Result<SteinerResult> {
    steiner_tree_with_cap(g, terminals, DEFAULT_TERMINAL_CAP)
}

/// Dreyfus–Wagner over terminal subsets. The distance is exact; which of
/// several minimum trees is returned is fixed by the DP scan order.
pub fn steiner_tree_with_cap(g: &WeightedMultigraph, terminals: &VertexSet, cap: usize) -> Result<SteinerResult> {
    check_terminals(g, terminals)?;
    if terminals.len() > cap {
        return Err(Error::SizeLimit(format!("{} terminals exceeds the cap of {cap}", terminals.len())));
    }
    if terminals.len() <= 1 {
        return Ok(SteinerResult::empty_for(terminals));
    }
    let list: Vec<VertexId> = terminals.iter().copied().collect();
    let dm = shortest_path_matrix(g);
    let dp = SubsetSteiner::compute_with(&dm, &list, list.len());
    let full = (1u32 << list.len()) - 1;
    Ok(dp.result(full))
}

/// Steiner distances for every subset of a terminal list up to a size
/// bound, from one Dreyfus–Wagner pass.
pub struct SubsetSteiner<'g> {
    dm: DistanceMatrix<'g>,
    terminals: Vec<VertexId>,
    max_size: usize,
    n: usize,
    dp: Vec<i128>,
    /// For `|S| >= 2`: the vertex `u` whose merge feeds `dp[S][v]`.
    via: Vec<u32>,
    /// For `|S| >= 2`: the split `S1` (containing the lowest bit) at `u`.
    split: Vec<u32>,
}

impl<'g> SubsetSteiner<'g> {
    /// Panics if there are more than 24 terminals; callers enforce caps.
    pub fn compute(g: &'g WeightedMultigraph, terminals: &[VertexId], max_size: usize) -> Self {
        Self::compute_with(&shortest_path_matrix(g), terminals, max_size)
    }

    fn compute_with(dm: &DistanceMatrix<'g>, terminals: &[VertexId], max_size: usize) -> Self {
        let t = terminals.len();
        assert!(t <= 24, "subset DP limited to 24 terminals");
        let n = dm.n;
        let size = 1usize << t;
        let mut dp = vec![INF; size * n];
        let mut via = vec![u32::MAX; size * n];
        let mut split = vec![0u32; size * n];
        let mut merge = vec![INF; n];
        let mut merge_split = vec![0u32; n];
        for s in 1..size {
            let pop = s.count_ones() as usize;
            if pop > max_size {
                continue;
            }
            let row = s * n;
            if pop == 1 {
                let term = terminals[s.trailing_zeros() as usize];
                for v in 0..n {
                    dp[row + v] = dm.raw(term, v);
                }
                continue;
            }
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            merge.fill(INF);
            for v in 0..n {
                // Proper submasks of `rest` (including the empty one).
                let mut sub = (rest - 1) & rest;
                loop {
                    let s1 = low | sub;
                    let s2 = s ^ s1;
                    let a = dp[s1 * n + v];
                    let b = dp[s2 * n + v];
                    if a < INF && b < INF && a + b < merge[v] {
                        merge[v] = a + b;
                        merge_split[v] = s1 as u32;
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
            for v in 0..n {
                let mut best = INF;
                let mut best_u = u32::MAX;
                for u in 0..n {
                    let (m, d) = (merge[u], dm.raw(u, v));
                    if m < INF && d < INF && m + d < best {
                        best = m + d;
                        best_u = u as u32;
                    }
                }
                dp[row + v] = best;
                via[row + v] = best_u;
                split[row + v] = if best_u == u32::MAX { 0 } else { merge_split[best_u as usize] };
            }
        }
        SubsetSteiner { dm: dm.clone(), terminals: terminals.to_vec(), max_size, n, dp, via, split }
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    fn raw_distance(&self, mask: u32) -> i128 {
        if mask.count_ones() <= 1 {
            return 0;
        }
        let low = mask.trailing_zeros() as usize;
        self.dp[mask as usize * self.n + self.terminals[low]]
    }

    /// Steiner distance of the terminals selected by `mask`.
    pub fn distance(&self, mask: u32) -> Distance {
        assert!(mask.count_ones() as usize <= self.max_size.max(1), "subset larger than the DP bound");
        self.dm.lengths().to_distance(self.raw_distance(mask))
    }

    /// The distance times [`Self::scale`], or `None` when infinite.
    pub(crate) fn scaled(&self, mask: u32) -> Option<i128> {
        let raw = self.raw_distance(mask);
        (raw < INF).then_some(raw)
    }

    pub(crate) fn scale(&self) -> i128 {
        self.dm.lengths().scale
    }

    /// Steiner distance and one minimum tree for the subset `mask`.
    pub fn result(&self, mask: u32) -> SteinerResult {
        let members: VertexSet = (0..self.terminals.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.terminals[i])
            .collect();
        if mask.count_ones() <= 1 {
            return SteinerResult::empty_for(&members);
        }
        let raw = self.raw_distance(mask);
        if raw >= INF {
            return SteinerResult::unreachable();
        }
        let root = self.terminals[mask.trailing_zeros() as usize];
        let mut edges = EdgeSet::new();
        self.collect(mask, root, &mut edges);
        let g = self.dm.graph;
        let mut vertices = members;
        for &e in &edges {
            vertices.insert(g.edge(e).u);
            vertices.insert(g.edge(e).v);
        }
        let distance = self.dm.lengths().to_distance(raw);
        debug_assert_eq!(
            Distance::Finite(edges.iter().map(|&e| g.len(e)).sum()),
            distance,
            "reconstructed tree length differs from the DP value"
        );
        SteinerResult { distance, tree: Some(SteinerTree { vertices, edges }) }
    }

    fn add_path(&self, a: VertexId, b: VertexId, out: &mut EdgeSet) {
        let (_, path) = self.dm.path(a, b).expect("finite DP entries have paths");
        out.extend(path);
    }

    fn collect(&self, mask: u32, v: VertexId, out: &mut EdgeSet) {
        if mask.count_ones() == 1 {
            let term = self.terminals[mask.trailing_zeros() as usize];
            self.add_path(term, v, out);
            return;
        }
        let idx = mask as usize * self.n + v;
        let u = self.via[idx] as usize;
        let s1 = self.split[idx];
        self.add_path(u, v, out);
        self.collect(s1, u, out);
        self.collect(mask ^ s1, u, out);
    }
}

/// The unique Steiner tree of `terminals` inside the tree `t`: the union
/// of all pairwise tree paths, obtained by pruning non-terminal leaves.
pub fn steiner_tree_in_tree(t: &SubgraphRef<'_>, terminals: &VertexSet) -> Result<SteinerResult> {
    if !t.structure().is_tree {
        return Err(Error::Precondition("steiner_tree_in_tree needs a tree".into()));
    }
    if let Some(v) = terminals.iter().find(|v| !t.vertices().contains(v)) {
        return Err(Error::Precondition(format!("terminal {v} is not a vertex of the tree")));
    }
    if terminals.len() <= 1 {
        return Ok(SteinerResult::empty_for(terminals));
    }
    let host = t.host();
    let mut vertices = t.vertices().clone();
    let mut edges = t.edges().clone();
    let degree = |v: VertexId, edges: &EdgeSet| host.incident(v).iter().filter(|e| edges.contains(e)).count();
    loop {
        let prune: Vec<VertexId> = vertices
            .iter()
            .copied()
            .filter(|v| !terminals.contains(v) && degree(*v, &edges) <= 1)
            .collect();
        if prune.is_empty() {
            break;
        }
        for v in prune {
            vertices.remove(&v);
            for e in host.incident(v) {
                edges.remove(e);
            }
        }
    }
    let distance = Distance::Finite(edges.iter().map(|&e| host.len(e)).sum());
    Ok(SteinerResult { distance, tree: Some(SteinerTree { vertices, edges }) })
}

/// Exhaustive minimum over all connected edge subsets containing the
/// terminals. Test oracle; limited to `BRUTE_FORCE_EDGE_CAP` edges.
pub fn brute_force_steiner(g: &WeightedMultigraph, terminals: &VertexSet) -> Result<SteinerResult> {
    check_terminals(g, terminals)?;
    let m = g.edge_count();
    if m > BRUTE_FORCE_EDGE_CAP {
        return Err(Error::SizeLimit(format!("brute force limited to {BRUTE_FORCE_EDGE_CAP} edges")));
    }
    if terminals.len() <= 1 {
        return Ok(SteinerResult::empty_for(terminals));
    }
    let ints = IntLengths::new(g);
    let mut best: Option<(i128, u32)> = None;
    for mask in 1u32..(1 << m) {
        let len: i128 = (0..m).filter(|e| mask >> e & 1 == 1).map(|e| ints.lens[e]).sum();
        if best.is_some_and(|(b, _)| len >= b) {
            continue;
        }
        if spans_connected(g, mask, terminals) {
            best = Some((len, mask));
        }
    }
    Ok(match best {
        None => SteinerResult::unreachable(),
        Some((len, mask)) => {
            let len = Rational::new(len, ints.scale);
            let edges: EdgeSet = (0..m).filter(|e| mask >> e & 1 == 1).collect();
            let mut vertices = terminals.clone();
            for &e in &edges {
                vertices.insert(g.edge(e).u);
                vertices.insert(g.edge(e).v);
            }
            SteinerResult { distance: Distance::Finite(len), tree: Some(SteinerTree { vertices, edges }) }
        }
    })
}

/// Whether the edges in `mask` form a connected graph touching every terminal.
fn spans_connected(g: &WeightedMultigraph, mask: u32, terminals: &VertexSet) -> bool {
    let start = *terminals.iter().next().expect("non-empty");
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut used_edges = 0u32;
    while let Some(x) = stack.pop() {
        for &e in g.incident(x) {
            if mask >> e & 1 == 1 {
                used_edges |= 1 << e;
                let y = g.edge(e).other(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    used_edges == mask && terminals.iter().all(|&t| seen[t])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5_hierarchy() -> WeightedMultigraph {
        // Apex 0 at length 2 from everything, length 3 among 1..=4.
        let mut g = WeightedMultigraph::with_vertex_count(5);
        for i in 0..5 {
            for j in i + 1..5 {
                let len = if i == 0 { 2 } else { 3 };
                g.add_edge(i, j, Rational::from(len)).unwrap();
            }
        }
        g
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn is_tree_with_terminal_leaves(g: &WeightedMultigraph, r: &SteinerResult, terminals: &VertexSet) -> bool {
        let tree = r.tree.as_ref().unwrap();
        let sub = tree.subgraph(g);
        let s = sub.structure();
        (tree.edges.is_empty() || s.is_tree)
            && terminals.is_subset(&tree.vertices)
            && s.leaves.is_subset(terminals)
            && Distance::Finite(sub.length()) == r.distance
    }

    #[test]
    fn single_edge_distance() {
        let mut g = WeightedMultigraph::with_vertex_count(2);
        g.add_edge(0, 1, Rational::from(5)).unwrap();
        assert_eq!(shortest_path_matrix(&g).get(0, 1), Distance::Finite(Rational::from(5)));
    }

    #[test]
    fn two_hop_beats_long_edge() {
        let mut g = WeightedMultigraph::with_vertex_count(3);
        g.add_edge(0, 1, Rational::ONE).unwrap();
        g.add_edge(1, 2, Rational::ONE).unwrap();
        g.add_edge(0, 2, Rational::from(3)).unwrap();
        let dm = shortest_path_matrix(&g);
        assert_eq!(dm.get(0, 2), Distance::Finite(Rational::from(2)));
        assert_eq!(dm.path(0, 2).unwrap().0, vec![0, 1, 2]);
    }

    #[test]
    fn disconnected_pair_is_infinite() {
        let g = WeightedMultigraph::with_vertex_count(2);
        let dm = shortest_path_matrix(&g);
        assert_eq!(dm.get(0, 1), Distance::Infinite);
        assert_eq!(dm.get(1, 1), Distance::ZERO);
        assert!(dm.path(0, 1).is_none());
    }

    #[test]
    fn path_terminals() {
        let mut g = WeightedMultigraph::with_vertex_count(3);
        g.add_edge(0, 1, Rational::ONE).unwrap();
        g.add_edge(1, 2, Rational::ONE).unwrap();
        let r = steiner_tree(&g, &set(&[0, 2])).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(2)));
    }

    #[test]
    fn k5_star_at_apex() {
        let g = k5_hierarchy();
        let a = set(&[1, 2, 3, 4]);
        let r = steiner_tree(&g, &a).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(8)));
        let tree = r.tree.as_ref().unwrap();
        assert!(tree.vertices.contains(&0));
        assert!(is_tree_with_terminal_leaves(&g, &r, &a));
        assert_eq!(brute_force_steiner(&g, &a).unwrap().distance, r.distance);
    }

    #[test]
    fn k5_three_terminals_tie() {
        let g = k5_hierarchy();
        let a = set(&[1, 2, 3]);
        let r = steiner_tree(&g, &a).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(6)));
        assert_eq!(brute_force_steiner(&g, &a).unwrap().distance, r.distance);
        assert!(is_tree_with_terminal_leaves(&g, &r, &a));
    }

    #[test]
    fn terminal_cap_and_unknown_vertex() {
        let g = WeightedMultigraph::with_vertex_count(3);
        assert!(matches!(steiner_tree_with_cap(&g, &set(&[0, 1, 2]), 2), Err(Error::SizeLimit(_))));
        assert!(matches!(steiner_tree(&g, &set(&[5])), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn disconnected_terminals() {
        let mut g = WeightedMultigraph::with_vertex_count(4);
        g.add_edge(0, 1, Rational::ONE).unwrap();
        g.add_edge(2, 3, Rational::ONE).unwrap();
        let r = steiner_tree(&g, &set(&[0, 3])).unwrap();
        assert_eq!(r.distance, Distance::Infinite);
        assert!(r.tree.is_none());
        assert_eq!(brute_force_steiner(&g, &set(&[0, 3])).unwrap().distance, Distance::Infinite);
    }

    fn fig1() -> WeightedMultigraph {
        let mut g = WeightedMultigraph::with_vertices(["a", "b", "c", "d", "u", "v"]).unwrap();
        for (x, y) in [("u", "a"), ("u", "b"), ("u", "v"), ("v", "c"), ("v", "d")] {
            g.add_named_edge(x, y, 1).unwrap();
        }
        g
    }

    #[test]
    fn in_tree_pair() {
        let g = fig1();
        let t = SubgraphRef::full(&g);
        let a = g.vertex_ids(["a", "b"]).unwrap();
        let r = steiner_tree_in_tree(&t, &a).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(2)));
        assert_eq!(r.tree.unwrap().vertices, g.vertex_ids(["a", "b", "u"]).unwrap());
    }

    #[test]
    fn in_tree_single_and_all() {
        let g = fig1();
        let t = SubgraphRef::full(&g);
        let r = steiner_tree_in_tree(&t, &g.vertex_ids(["a"]).unwrap()).unwrap();
        assert_eq!(r.distance, Distance::ZERO);
        let r = steiner_tree_in_tree(&t, &g.vertex_ids(["a", "b", "c", "d"]).unwrap()).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(5)));
    }

    #[test]
    fn in_tree_rejects_outside_terminal() {
        let g = fig1();
        let t = SubgraphRef::from_edges(&g, [0, 1]).unwrap();
        assert!(steiner_tree_in_tree(&t, &g.vertex_ids(["d"]).unwrap()).is_err());
    }

    #[test]
    fn brute_force_k4_spanning() {
        let mut g = WeightedMultigraph::with_vertex_count(4);
        for i in 0..4 {
            for j in i + 1..4 {
                g.add_edge(i, j, Rational::ONE).unwrap();
            }
        }
        let r = brute_force_steiner(&g, &set(&[0, 1, 2, 3])).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(3)));
    }

    #[test]
    fn brute_force_triangle() {
        let mut g = WeightedMultigraph::with_vertex_count(3);
        g.add_edge(0, 1, Rational::from(2)).unwrap();
        g.add_edge(1, 2, Rational::from(2)).unwrap();
        g.add_edge(2, 0, Rational::from(2)).unwrap();
        let r = brute_force_steiner(&g, &set(&[0, 1, 2])).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::from(4)));
    }

    #[test]
    fn brute_force_edge_cap() {
        let mut g = WeightedMultigraph::with_vertex_count(2);
        for _ in 0..17 {
            g.add_edge(0, 1, Rational::ONE).unwrap();
        }
        assert!(matches!(brute_force_steiner(&g, &set(&[0, 1])), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn subset_table_matches_single_queries() {
        let g = k5_hierarchy();
        let terms = [1, 2, 3, 4];
        let table = SubsetSteiner::compute(&g, &terms, 4);
        for mask in 0u32..16 {
            let set: VertexSet = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
            assert_eq!(table.distance(mask), steiner_tree(&g, &set).unwrap().distance, "mask {mask}");
        }
    }

    #[test]
    fn rational_lengths_stay_exact() {
        let mut g = WeightedMultigraph::with_vertex_count(3);
        g.add_edge(0, 1, Rational::new(1, 3)).unwrap();
        g.add_edge(1, 2, Rational::new(1, 7)).unwrap();
        g.add_edge(0, 2, Rational::new(1, 2)).unwrap();
        let r = steiner_tree(&g, &set(&[0, 1, 2])).unwrap();
        assert_eq!(r.distance, Distance::Finite(Rational::new(10, 21)));
    }
}
