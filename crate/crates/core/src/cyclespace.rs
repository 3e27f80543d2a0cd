//! The cycle space over GF(2): which cycles are fully geodesic, and which
//! cycles are not sums of strictly shorter ones.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::{is_fully_geodesic, is_k_geodesic};
use crate::graph::{EdgeId, SubgraphRef, VertexId, WeightedMultigraph};
use crate::rational::Rational;

/// Largest edge count for which every cycle is enumerated.
pub const MAX_CYCLE_EDGES: usize = 16;

/// Characteristic vector of an edge set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeVector {
    words: Vec<u64>,
}

impl EdgeVector {
    pub fn zero(edge_count: usize) -> Self {
        EdgeVector { words: vec![0; edge_count.div_ceil(64)] }
    }

    pub fn from_edges(edge_count: usize, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut v = Self::zero(edge_count);
        for e in edges {
            v.words[e / 64] ^= 1 << (e % 64);
        }
        v
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.words.get(e / 64).is_some_and(|w| w >> (e % 64) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &EdgeVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// The 2-sum `self ⊕ other`.
    pub fn sum(&self, other: &EdgeVector) -> EdgeVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn support(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// Cyclic vertex order, starting at the least vertex.
    pub vertices: Vec<VertexId>,
    /// Edge ids in increasing order.
    pub edges: Vec<EdgeId>,
    pub length: Rational,
    #[serde(skip)]
    pub vector: EdgeVector,
}

/// A reduced basis keyed by leading edge.
#[derive(Clone, Debug, Default)]
struct Basis {
    rows: Vec<EdgeVector>,
}

impl Basis {
    fn reduce(&self, v: &EdgeVector) -> EdgeVector {
        let mut v = v.clone();
        for row in &self.rows {
            let lead = row.leading().expect("basis rows are non-zero");
            if v.contains(lead) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v` if independent; returns whether it was.
    fn insert(&mut self, v: &EdgeVector) -> bool {
        let r = self.reduce(v);
        let Some(lead) = r.leading() else { return false };
        for row in &mut self.rows {
            if row.contains(lead) {
                row.xor_assign(&r);
            }
        }
        let pos = self.rows.partition_point(|row| row.leading() > Some(lead));
        self.rows.insert(pos, r);
        true
    }
}

fn check_size(g: &WeightedMultigraph) -> Result<()> {
    if g.edge_count() > MAX_CYCLE_EDGES {
        return Err(Error::SizeLimit(format!(
            "cycle enumeration limited to {MAX_CYCLE_EDGES} edges, graph has {}",
            g.edge_count()
        )));
    }
    Ok(())
}

/// Every cycle of `g`, parallel-edge 2-cycles included, ordered by edge
/// mask.
pub fn enumerate_cycles(g: &WeightedMultigraph) -> Result<Vec<Cycle>> {
    check_size(g)?;
    let m = g.edge_count();
    let mut out = Vec::new();
    let mut degree = vec![0usize; g.vertex_count()];
    for mask in 1u32..(1u32 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        let edges: Vec<EdgeId> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
        degree.fill(0);
        for &e in &edges {
            degree[g.edge(e).u] += 1;
            degree[g.edge(e).v] += 1;
        }
        if degree.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        if let Some(vertices) = walk_around(g, &edges) {
            out.push(Cycle {
                vertices,
                length: edges.iter().map(|&e| g.len(e)).sum(),
                vector: EdgeVector::from_edges(m, edges.iter().copied()),
                edges,
            });
        }
    }
    Ok(out)
}

/// The vertex order of a 2-regular edge set, or `None` if it is not
/// connected.
fn walk_around(g: &WeightedMultigraph, edges: &[EdgeId]) -> Option<Vec<VertexId>> {
    let start = edges.iter().map(|&e| g.edge(e).u.min(g.edge(e).v)).min()?;
    let mut used = vec![false; edges.len()];
    let mut vertices = vec![start];
    let mut at = start;
    loop {
        let next = (0..edges.len()).find(|&i| !used[i] && (g.edge(edges[i]).u == at || g.edge(edges[i]).v == at));
        let Some(i) = next else { break };
        used[i] = true;
        at = g.edge(edges[i]).other(at);
        if at == start {
            break;
        }
        vertices.push(at);
    }
    used.iter().all(|&u| u).then_some(vertices)
}

fn filter_cycles(
    g: &WeightedMultigraph,
    cycles: Vec<Cycle>,
    keep: impl Fn(&SubgraphRef<'_>) -> Result<bool> + Sync,
) -> Result<Vec<Cycle>> {
    let flags: Vec<bool> = cycles
        .par_iter()
        .map(|c| keep(&SubgraphRef::from_edges(g, c.edges.iter().copied())?))
        .collect::<Result<_>>()?;
    Ok(cycles.into_iter().zip(flags).filter_map(|(c, f)| f.then_some(c)).collect())
}

pub fn fully_geodesic_cycles(g: &WeightedMultigraph) -> Result<Vec<Cycle>> {
    filter_cycles(g, enumerate_cycles(g)?, |h| Ok(is_fully_geodesic(g, h)?.holds))
}

pub fn two_geodesic_cycles(g: &WeightedMultigraph) -> Result<Vec<Cycle>> {
    filter_cycles(g, enumerate_cycles(g)?, |h| Ok(is_k_geodesic(g, h, 2)?.holds))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub rank: usize,
    /// `|E| - |V| + components`.
    pub cycle_space_dimension: usize,
    pub spans_cycle_space: bool,
}

/// Rank of `vectors` over GF(2), compared with the dimension of the cycle
/// space of `g`. The vectors are assumed to lie in the cycle space.
pub fn gf2_rank_and_span(vectors: &[EdgeVector], g: &WeightedMultigraph) -> SpanReport {
    let mut basis = Basis::default();
    for v in vectors {
        basis.insert(v);
    }
    let rank = basis.rows.len();
    let dim = g.edge_count() + g.components().len() - g.vertex_count();
    SpanReport { rank, cycle_space_dimension: dim, spans_cycle_space: rank == dim }
}

/// Cycles outside the span of the strictly shorter cycles.
pub fn non_2sum_cycles(g: &WeightedMultigraph) -> Result<Vec<Cycle>> {
    let mut cycles = enumerate_cycles(g)?;
    cycles.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.edges.cmp(&b.edges)));
    let mut basis = Basis::default();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cycles.len() {
        let mut j = i;
        while j < cycles.len() && cycles[j].length == cycles[i].length {
            j += 1;
        }
        let group = &cycles[i..j];
        let fresh: Vec<bool> = group.iter().map(|c| !basis.reduce(&c.vector).is_zero()).collect();
        for c in group {
            basis.insert(&c.vector);
        }
        out.extend(group.iter().zip(fresh).filter_map(|(c, f)| f.then(|| c.clone())));
        i = j;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleSpaceReport {
    pub cycle_count: usize,
    pub fully_geodesic: Vec<Cycle>,
    pub non_2sum: Vec<Cycle>,
    pub fully_geodesic_span: SpanReport,
    pub non_2sum_span: SpanReport,
    pub two_geodesic_span: SpanReport,
    pub non_2sum_all_fully_geodesic: bool,
}

impl CycleSpaceReport {
    pub fn holds(&self) -> bool {
        self.fully_geodesic_span.spans_cycle_space
            && self.non_2sum_span.spans_cycle_space
            && self.two_geodesic_span.spans_cycle_space
            && self.non_2sum_all_fully_geodesic
    }
}

pub fn cycle_space_report(g: &WeightedMultigraph) -> Result<CycleSpaceReport> {
    let cycle_count = enumerate_cycles(g)?.len();
    let fully_geodesic = fully_geodesic_cycles(g)?;
    let non_2sum = non_2sum_cycles(g)?;
    let two = two_geodesic_cycles(g)?;
    let vectors = |cs: &[Cycle]| cs.iter().map(|c| c.vector.clone()).collect::<Vec<_>>();
    Ok(CycleSpaceReport {
        cycle_count,
        fully_geodesic_span: gf2_rank_and_span(&vectors(&fully_geodesic), g),
        non_2sum_span: gf2_rank_and_span(&vectors(&non_2sum), g),
        two_geodesic_span: gf2_rank_and_span(&vectors(&two), g),
        non_2sum_all_fully_geodesic: non_2sum.iter().all(|c| fully_geodesic.iter().any(|f| f.edges == c.edges)),
        fully_geodesic,
        non_2sum,
    })
}
