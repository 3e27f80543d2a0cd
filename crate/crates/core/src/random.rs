//! Seeded random instances for the property harnesses.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geodesic::is_k_geodesic;
use crate::graph::{EdgeSet, SubgraphRef, WeightedMultigraph};
use crate::rational::{Distance, Rational};

/// Independent generator for instance `index` of stream `stream`.
pub fn instance_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 32);
    rng
}

/// A positive length `p/q` with `q ∈ {1, 2, 3}` and value at most
/// `max_length`.
pub fn random_length(rng: &mut impl Rng, max_length: i64) -> Rational {
    let q: i64 = *[1, 1, 2, 3].choose(rng).expect("non-empty");
    Rational::new(rng.gen_range(1..=max_length * q) as i128, q as i128)
}

/// Integer lengths in `1..=max_length`; small ranges produce many ties.
pub fn random_integer_length(rng: &mut impl Rng, max_length: i64) -> Rational {
    Rational::from(rng.gen_range(1..=max_length))
}

/// A random spanning tree on `0..n` plus `extra` further edges, parallel
/// edges allowed.
pub fn random_connected_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    extra: usize,
    length: impl Fn(&mut R) -> Rational,
) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::with_vertex_count(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let len = length(rng);
        g.add_edge(parent, order[i], len).expect("valid edge");
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            let len = length(rng);
            g.add_edge(u, v, len).expect("valid edge");
        }
    }
    g
}

/// A random subtree: a random spanning tree of `g` (which must be
/// connected with at least one edge), with a random number of leaves
/// pruned away. At least one edge remains.
pub fn random_subtree(rng: &mut impl Rng, g: &WeightedMultigraph) -> EdgeSet {
    let mut edges: Vec<usize> = (0..g.edge_count()).collect();
    edges.shuffle(rng);
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = EdgeSet::new();
    for e in edges {
        let (a, b) = (find(&mut parent, g.edge(e).u), find(&mut parent, g.edge(e).v));
        if a != b {
            parent[a] = b;
            tree.insert(e);
        }
    }
    let prune = rng.gen_range(0..g.vertex_count());
    for _ in 0..prune {
        if tree.len() <= 1 {
            break;
        }
        let mut deg = vec![0usize; g.vertex_count()];
        for &e in &tree {
            deg[g.edge(e).u] += 1;
            deg[g.edge(e).v] += 1;
        }
        let leaf_edges: Vec<usize> =
            tree.iter().copied().filter(|&e| deg[g.edge(e).u] == 1 || deg[g.edge(e).v] == 1).collect();
        let e = *leaf_edges.choose(rng).expect("a tree has leaf edges");
        tree.remove(&e);
    }
    tree
}

/// How a subgraph was made `k`-geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repair {
    /// Already `k`-geodesic.
    None,
    /// Lengthened minimum witnesses' Steiner trees this many times.
    Rounds(usize),
    /// Gave up on rounds and lengthened every edge outside `H` past `ℓ(H)`.
    Forced,
}

/// Makes `H` (given by `h_edges`) `k`-geodesic in `g` by lengthening edges
/// outside `H`. Each round takes the minimum witness `A` and spreads the
/// gap `sd_H(A) - sd_G(A)` evenly over its Steiner tree, whose edges all
/// lie outside `H`. `H` must be connected.
pub fn repair_to_k_geodesic(
    g: &mut WeightedMultigraph,
    h_edges: &EdgeSet,
    k: usize,
    max_rounds: usize,
) -> Result<Repair> {
    for round in 0..=max_rounds {
        let verdict = {
            let h = SubgraphRef::from_edges(g, h_edges.iter().copied())?;
            is_k_geodesic(g, &h, k)?
        };
        if verdict.holds {
            return Ok(if round == 0 { Repair::None } else { Repair::Rounds(round) });
        }
        if round == max_rounds {
            break;
        }
        let (sd_g, sd_h) = verdict.witness_gap.expect("failing verdicts carry a gap");
        let Distance::Finite(sd_h) = sd_h else {
            return Err(Error::Precondition("repair needs a connected subgraph".into()));
        };
        let tree = verdict.witness_tree.expect("failing verdicts carry a tree");
        let bump = (sd_h - sd_g) / Rational::from(tree.len() as i64);
        let mut lengths = g.lengths();
        for &e in &tree {
            lengths[e] = lengths[e] + bump;
        }
        *g = g.with_lengths(&lengths)?;
    }
    let total: Rational = h_edges.iter().map(|&e| g.len(e)).sum();
    let lengths: Vec<Rational> =
        g.edges().map(|(id, e)| if h_edges.contains(&id) { e.len } else { e.len.max(total + Rational::ONE) }).collect();
    *g = g.with_lengths(&lengths)?;
    Ok(Repair::Forced)
}
