//! Deciding whether a subgraph preserves Steiner distances of small
//! terminal sets, and cutting a shortcut tree out of a violation.

mod walk;

pub use walk::{
    eulerian_double_cover_cycle, planar_equivalence_report, trace_walk, walk_multiplicities, PlanarReport, Walk,
};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, SubgraphRef, VertexId, VertexSet, WeightedMultigraph};
use crate::rational::{Distance, Rational};
use crate::shortcut::ShortcutTree;
use crate::steiner::{steiner_tree_with_cap, SubsetSteiner};

/// Default limit on the number of terminal sets a query may enumerate.
pub const DEFAULT_SUBSET_CAP: u64 = 1_000_000;

/// Above this many `2^|V(H)| * |V(G)|` table cells the subset DP is
/// replaced by one Steiner computation per terminal set.
const DP_CELL_LIMIT: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct GeodesicVerdict {
    pub holds: bool,
    pub k: usize,
    pub subsets_checked: u64,
    /// Violating set with least `sd_G`, then fewest vertices, then least
    /// sorted id sequence.
    pub witness: Option<VertexSet>,
    /// `(sd_G(A), sd_H(A))` for the witness.
    pub witness_gap: Option<(Rational, Distance)>,
    /// Edge ids of a Steiner tree for the witness in `G`.
    pub witness_tree: Option<EdgeSet>,
    /// The same tree cut out as a shortcut tree for `H`.
    pub extracted: Option<ShortcutTree>,
}

pub fn is_k_geodesic(g: &WeightedMultigraph, h: &SubgraphRef<'_>, k: usize) -> Result<GeodesicVerdict> {
    is_k_geodesic_with_cap(g, h, k, DEFAULT_SUBSET_CAP)
}

/// `k`-geodecity with every `k`, i.e. with `k = |V(H)|`.
pub fn is_fully_geodesic(g: &WeightedMultigraph, h: &SubgraphRef<'_>) -> Result<GeodesicVerdict> {
    is_k_geodesic(g, h, h.vertices().len().max(2))
}

/// Shortcut tree with at most `k` leaves witnessing that `H` is not
/// `k`-geodesic.
pub fn extract_shortcut_tree(g: &WeightedMultigraph, h: &SubgraphRef<'_>, k: usize) -> Result<ShortcutTree> {
    is_k_geodesic(g, h, k)?.extracted.ok_or(Error::NoViolation)
}

fn binomial_sum(n: usize, k: usize) -> u64 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for s in 1..=k.min(n) {
        c = c * (n - s + 1) as u128 / s as u128;
        if s >= 2 {
            total += c;
        }
        if total > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    total as u64
}

struct Best {
    sd_g: Rational,
    terminals: Vec<VertexId>,
    sd_h: Distance,
}

impl Best {
    fn beats(&self, other: &Option<Best>) -> bool {
        match other {
            None => true,
            Some(o) => (self.sd_g, self.terminals.len(), &self.terminals) < (o.sd_g, o.terminals.len(), &o.terminals),
        }
    }
}

pub fn is_k_geodesic_with_cap(
    g: &WeightedMultigraph,
    h: &SubgraphRef<'_>,
    k: usize,
    subset_cap: u64,
) -> Result<GeodesicVerdict> {
    if !std::ptr::eq(h.host(), g) && h.host() != g {
        return Err(Error::NotSubgraph("H lives in a different graph".into()));
    }
    if k < 2 {
        return Err(Error::Precondition("k must be at least 2".into()));
    }
    let hv: Vec<VertexId> = h.vertices().iter().copied().collect();
    let nh = hv.len();
    let kk = k.min(nh);
    let total = binomial_sum(nh, kk);
    if total > subset_cap {
        return Err(Error::SizeLimit(format!(
            "{total} terminal sets of size at most {k} exceed the cap of {subset_cap}"
        )));
    }
    let restricted = h.restricted_graph();
    let hg = &restricted.graph;

    let mut best: Option<Best> = None;
    let mut consider = |terminals: Vec<VertexId>, sd_g: Distance, sd_h: Distance| {
        if sd_g < sd_h {
            let sd_g = match sd_g {
                Distance::Finite(r) => r,
                Distance::Infinite => unreachable!("sd_g < sd_h implies finite"),
            };
            let cand = Best { sd_g, terminals, sd_h };
            if cand.beats(&best) {
                best = Some(cand);
            }
        }
    };

    let use_dp = nh <= 24 && ((1u64 << nh) * g.vertex_count().max(1) as u64) <= DP_CELL_LIMIT;
    let dp_g = use_dp.then(|| SubsetSteiner::compute(g, &hv, kk));
    if let Some(dp_g) = &dp_g {
        let dp_h = SubsetSteiner::compute(hg, &hv, kk);
        for mask in 1u32..(1u32 << nh) {
            let pop = mask.count_ones() as usize;
            if pop < 2 || pop > kk {
                continue;
            }
            let (a, b) = (dp_g.distance(mask), dp_h.distance(mask));
            if a < b {
                let terminals = (0..nh).filter(|i| mask >> i & 1 == 1).map(|i| hv[i]).collect();
                consider(terminals, a, b);
            }
        }
    } else {
        for size in 2..=kk {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let set: VertexSet = idx.iter().map(|&i| hv[i]).collect();
                let a = steiner_tree_with_cap(g, &set, size)?.distance;
                let b = steiner_tree_with_cap(hg, &set, size)?.distance;
                consider(set.into_iter().collect(), a, b);
                if !next_combination(&mut idx, nh) {
                    break;
                }
            }
        }
    }

    let Some(best) = best else {
        return Ok(GeodesicVerdict {
            holds: true,
            k,
            subsets_checked: total,
            witness: None,
            witness_gap: None,
            witness_tree: None,
            extracted: None,
        });
    };
    let witness: VertexSet = best.terminals.iter().copied().collect();
    let tree = match &dp_g {
        Some(dp) => {
            let mask = best
                .terminals
                .iter()
                .map(|v| 1u32 << hv.binary_search(v).expect("witness lies in H"))
                .fold(0, |m, b| m | b);
            dp.result(mask).tree
        }
        None => steiner_tree_with_cap(g, &witness, witness.len())?.tree,
    }
    .expect("finite Steiner distance has a tree");
    let extracted = ShortcutTree::from_ambient(h, &tree.edges)?;
    Ok(GeodesicVerdict {
        holds: false,
        k,
        subsets_checked: total,
        witness: Some(witness),
        witness_gap: Some((best.sd_g, best.sd_h)),
        witness_tree: Some(tree.edges),
        extracted: Some(extracted),
    })
}

/// Advances `idx` to the next `idx.len()`-subset of `0..n` in
/// lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
