//! Planarity of small graphs by exhaustive search for subdivisions of K5
//! and K3,3.
//!
//! The graph is first reduced without changing planarity: lengths and
//! parallel edges are ignored, vertices of degree at most one are removed
//! and degree-2 vertices are smoothed. What remains has minimum degree
//! three and is small enough for the brute-force search at the sizes this
//! crate works with.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;

/// Largest reduced graph the subdivision search accepts.
pub const MAX_REDUCED_VERTICES: usize = 24;

pub fn is_planar(g: &WeightedMultigraph) -> Result<bool> {
    let adj = reduce(g);
    let n = adj.len();
    if n <= 4 {
        return Ok(true);
    }
    let m: usize = adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2;
    if m > 3 * n - 6 {
        return Ok(false);
    }
    if n > MAX_REDUCED_VERTICES {
        return Err(Error::SizeLimit(format!(
            "planarity search limited to {MAX_REDUCED_VERTICES} vertices after reduction, got {n}"
        )));
    }
    Ok(!has_k5_subdivision(&adj) && !has_k33_subdivision(&adj))
}

/// Simple graph with minimum degree >= 3 (or empty), as bitmask rows.
fn reduce(g: &WeightedMultigraph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (_, e) in g.edges() {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            match adj[v].len() {
                0 | 1 => {
                    for w in std::mem::take(&mut adj[v]) {
                        adj[w].remove(&v);
                    }
                    alive[v] = false;
                    changed = true;
                }
                2 => {
                    let mut it = std::mem::take(&mut adj[v]).into_iter();
                    let (a, b) = (it.next().unwrap(), it.next().unwrap());
                    adj[a].remove(&v);
                    adj[b].remove(&v);
                    adj[a].insert(b);
                    adj[b].insert(a);
                    alive[v] = false;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if keep.len() > 64 {
        // Only the Euler bound can decide graphs this large; report a
        // dense stand-in so callers hit the size limit.
        return vec![u64::MAX; keep.len()];
    }
    let mut local = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        local[v] = i;
    }
    keep.iter()
        .map(|&v| adj[v].iter().fold(0u64, |m, &w| m | 1 << local[w]))
        .collect()
}

fn has_k5_subdivision(adj: &[u64]) -> bool {
    let candidates: Vec<usize> = (0..adj.len()).filter(|&v| adj[v].count_ones() >= 4).collect();
    let mut found = false;
    for_each_subset(&candidates, 5, &mut |branch| {
        let mut pairs = Vec::with_capacity(10);
        for i in 0..5 {
            for j in i + 1..5 {
                pairs.push((branch[i], branch[j]));
            }
        }
        found = linkable(adj, &pairs, branch);
        found
    });
    found
}

fn has_k33_subdivision(adj: &[u64]) -> bool {
    let candidates: Vec<usize> = (0..adj.len()).filter(|&v| adj[v].count_ones() >= 3).collect();
    let mut found = false;
    for_each_subset(&candidates, 6, &mut |branch| {
        // The side containing branch[0], completed by two of the rest.
        for i in 1..6 {
            for j in i + 1..6 {
                let side: Vec<usize> = vec![branch[0], branch[i], branch[j]];
                let other: Vec<usize> = branch.iter().copied().filter(|v| !side.contains(v)).collect();
                let pairs: Vec<(usize, usize)> =
                    side.iter().flat_map(|&a| other.iter().map(move |&b| (a, b))).collect();
                if linkable(adj, &pairs, branch) {
                    found = true;
                    return true;
                }
            }
        }
        false
    });
    found
}

/// Calls `f` on every `k`-subset of `items` until it returns true.
fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            if rec(items, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

/// Whether all `pairs` can be joined by internally disjoint paths whose
/// interiors avoid the branch vertices.
fn linkable(adj: &[u64], pairs: &[(usize, usize)], branch: &[usize]) -> bool {
    let blocked = branch.iter().fold(0u64, |m, &v| m | 1 << v);
    link(adj, pairs, 0, blocked)
}

fn link(adj: &[u64], pairs: &[(usize, usize)], idx: usize, used: u64) -> bool {
    if idx == pairs.len() {
        return true;
    }
    let (a, b) = pairs[idx];
    if adj[a] >> b & 1 == 1 && link(adj, pairs, idx + 1, used) {
        return true;
    }
    // Paths of length >= 2 through unused vertices.
    let mut stack_used = used;
    extend_path(adj, pairs, idx, a, b, &mut stack_used)
}

fn extend_path(adj: &[u64], pairs: &[(usize, usize)], idx: usize, cur: usize, target: usize, used: &mut u64) -> bool {
    let mut options = adj[cur] & !*used;
    while options != 0 {
        let w = options.trailing_zeros() as usize;
        options &= options - 1;
        *used |= 1 << w;
        let closes = adj[w] >> target & 1 == 1;
        if (closes && link(adj, pairs, idx + 1, *used)) || extend_path(adj, pairs, idx, w, target, used) {
            return true;
        }
        *used &= !(1 << w);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize)]) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::with_vertex_count(n);
        for &(u, v) in edges {
            g.add_edge(u, v, Rational::ONE).unwrap();
        }
        g
    }

    fn complete(n: usize) -> WeightedMultigraph {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        graph(n, &edges)
    }

    fn k33() -> WeightedMultigraph {
        let edges: Vec<_> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
        graph(6, &edges)
    }

    #[test]
    fn small_complete_graphs() {
        assert!(is_planar(&complete(4)).unwrap());
        assert!(!is_planar(&complete(5)).unwrap());
        assert!(!is_planar(&k33()).unwrap());
    }

    #[test]
    fn subdivided_k33_is_not_planar() {
        // Subdivide every edge of K3,3 once; the Euler bound no longer fires.
        let mut edges = Vec::new();
        let mut next = 6;
        for i in 0..3 {
            for j in 3..6 {
                edges.push((i, next));
                edges.push((next, j));
                next += 1;
            }
        }
        assert!(!is_planar(&graph(next, &edges)).unwrap());
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        assert!(!is_planar(&graph(10, &edges)).unwrap());
    }

    #[test]
    fn prism_and_cube_are_planar() {
        let prism = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]);
        assert!(is_planar(&prism).unwrap());
        let mut cube = Vec::new();
        for v in 0..8usize {
            for bit in 0..3 {
                let w = v ^ (1 << bit);
                if v < w {
                    cube.push((v, w));
                }
            }
        }
        assert!(is_planar(&graph(8, &cube)).unwrap());
    }

    #[test]
    fn parallel_edges_and_trees() {
        let mut g = graph(2, &[(0, 1)]);
        g.add_edge(0, 1, Rational::ONE).unwrap();
        assert!(is_planar(&g).unwrap());
        assert!(is_planar(&WeightedMultigraph::new()).unwrap());
    }

    /// Independent check: a connected graph is planar iff some rotation
    /// system has V - E + F = 2.
    fn planar_by_rotations(g: &WeightedMultigraph) -> bool {
        let n = g.vertex_count();
        let mut darts: Vec<(usize, usize)> = Vec::new();
        for (_, e) in g.edges() {
            darts.push((e.u, e.v));
            darts.push((e.v, e.u));
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &(u, _)) in darts.iter().enumerate() {
            out[u].push(i);
        }
        let mut rotation: Vec<Vec<usize>> = out.clone();
        fn faces(darts: &[(usize, usize)], rotation: &[Vec<usize>]) -> usize {
            let mut seen = vec![false; darts.len()];
            let mut count = 0;
            for s in 0..darts.len() {
                if seen[s] {
                    continue;
                }
                count += 1;
                let mut d = s;
                while !seen[d] {
                    seen[d] = true;
                    let rev = d ^ 1;
                    let (v, _) = darts[rev];
                    let pos = rotation[v].iter().position(|&x| x == rev).unwrap();
                    d = rotation[v][(pos + 1) % rotation[v].len()];
                }
            }
            count
        }
        fn permute(v: usize, out: &[Vec<usize>], rotation: &mut Vec<Vec<usize>>, darts: &[(usize, usize)], target: usize) -> bool {
            if v == out.len() {
                return faces(darts, rotation) == target;
            }
            let first = match out[v].first() {
                None => return permute(v + 1, out, rotation, darts, target),
                Some(&f) => f,
            };
            let rest: Vec<usize> = out[v][1..].to_vec();
            let mut perms = Vec::new();
            permutations(rest, &mut perms);
            for p in perms {
                rotation[v] = std::iter::once(first).chain(p).collect();
                if permute(v + 1, out, rotation, darts, target) {
                    return true;
                }
            }
            false
        }
        fn permutations(items: Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if items.is_empty() {
                out.push(Vec::new());
                return;
            }
            for i in 0..items.len() {
                let mut rest = items.clone();
                let x = rest.remove(i);
                let mut tails = Vec::new();
                permutations(rest, &mut tails);
                out.extend(tails.into_iter().map(|t| std::iter::once(x).chain(t).collect()));
            }
        }
        let used = (0..n).filter(|&v| !out[v].is_empty()).count();
        let target = 2 + g.edge_count() - used;
        permute(0, &out, &mut rotation, &darts, target)
    }

    #[test]
    fn agrees_with_rotation_systems_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 150 {
            let n = rng.gen_range(5..=7);
            let p = rng.gen_range(0.35..0.8);
            let mut g = WeightedMultigraph::with_vertex_count(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(i, j, Rational::ONE).unwrap();
                    }
                }
            }
            let rotations: u64 = g
                .vertices()
                .map(|v| (1..g.degree(v).max(1) as u64).product::<u64>())
                .product();
            if g.components().len() != 1 || rotations > 200_000 {
                continue;
            }
            assert_eq!(is_planar(&g).unwrap(), planar_by_rotations(&g), "{}", g.to_json_string());
            checked += 1;
        }
    }
}
