use super::{VertexId, WeightedMultigraph};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MAX_ISOMORPHISM_VERTICES: usize = 16;

/// Brute-force multigraph isomorphism for small graphs. Edge
/// multiplicities between every vertex pair must match; with
/// `respect_lengths` the multisets of lengths on each pair must match too.
pub fn multigraph_isomorphic(
    g1: &WeightedMultigraph,
    g2: &WeightedMultigraph,
    respect_lengths: bool,
) -> Result<bool> {
    let n = g1.vertex_count();
    if n > MAX_ISOMORPHISM_VERTICES || g2.vertex_count() > MAX_ISOMORPHISM_VERTICES {
        return Err(Error::SizeLimit(format!(
            "isomorphism test limited to {MAX_ISOMORPHISM_VERTICES} vertices"
        )));
    }
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let sig1 = PairTable::new(g1, respect_lengths);
    let sig2 = PairTable::new(g2, respect_lengths);

    let mut deg1: Vec<usize> = g1.vertices().map(|v| g1.degree(v)).collect();
    let mut deg2: Vec<usize> = g2.vertices().map(|v| g2.degree(v)).collect();
    let (d1, d2) = (deg1.clone(), deg2.clone());
    deg1.sort_unstable();
    deg2.sort_unstable();
    if deg1 != deg2 {
        return Ok(false);
    }

    // Assign high-degree vertices first; they prune hardest.
    let mut order: Vec<VertexId> = g1.vertices().collect();
    order.sort_by(|&a, &b| d1[b].cmp(&d1[a]).then(a.cmp(&b)));

    let mut image = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    Ok(extend(0, &order, &d1, &d2, &sig1, &sig2, &mut image, &mut taken))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[VertexId],
    d1: &[usize],
    d2: &[usize],
    sig1: &PairTable,
    sig2: &PairTable,
    image: &mut [usize],
    taken: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..taken.len() {
        if taken[w] || d1[v] != d2[w] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&x| sig1.get(v, x) == sig2.get(w, image[x]));
        if !consistent {
            continue;
        }
        image[v] = w;
        taken[w] = true;
        if extend(depth + 1, order, d1, d2, sig1, sig2, image, taken) {
            return true;
        }
        taken[w] = false;
        image[v] = usize::MAX;
    }
    false
}

/// For each unordered pair, the sorted lengths of the edges joining it
/// (or just as many placeholder entries when lengths are ignored).
struct PairTable {
    n: usize,
    cells: Vec<Vec<Rational>>,
}

impl PairTable {
    fn new(g: &WeightedMultigraph, respect_lengths: bool) -> Self {
        let n = g.vertex_count();
        let mut cells = vec![Vec::new(); n * n];
        for (_, e) in g.edges() {
            let len = if respect_lengths { e.len } else { Rational::ONE };
            cells[e.u * n + e.v].push(len);
            cells[e.v * n + e.u].push(len);
        }
        for c in &mut cells {
            c.sort_unstable();
        }
        Self { n, cells }
    }

    fn get(&self, a: VertexId, b: VertexId) -> &[Rational] {
        &self.cells[a * self.n + b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize, order: &[usize]) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::with_vertex_count(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(order[i], order[j], Rational::ONE).unwrap();
            }
        }
        g
    }

    #[test]
    fn relabelled_k4() {
        let a = complete(4, &[0, 1, 2, 3]);
        let b = complete(4, &[2, 0, 3, 1]);
        assert!(multigraph_isomorphic(&a, &b, true).unwrap());
    }

    #[test]
    fn k33_vs_k4_padded() {
        // K_{3,3}: 6 vertices, 9 edges, 3-regular.
        let mut k33 = WeightedMultigraph::with_vertex_count(6);
        for i in 0..3 {
            for j in 3..6 {
                k33.add_edge(i, j, Rational::ONE).unwrap();
            }
        }
        // K4 plus two vertices joined by a triple edge: also 6 vertices,
        // 9 edges, 3-regular.
        let mut other = WeightedMultigraph::with_vertex_count(6);
        for i in 0..4 {
            for j in i + 1..4 {
                other.add_edge(i, j, Rational::ONE).unwrap();
            }
        }
        for _ in 0..3 {
            other.add_edge(4, 5, Rational::ONE).unwrap();
        }
        assert!(!multigraph_isomorphic(&k33, &other, false).unwrap());
    }

    #[test]
    fn multiplicity_matters() {
        let mut a = WeightedMultigraph::with_vertex_count(2);
        a.add_edge(0, 1, Rational::ONE).unwrap();
        a.add_edge(0, 1, Rational::ONE).unwrap();
        let mut b = WeightedMultigraph::with_vertex_count(2);
        b.add_edge(0, 1, Rational::ONE).unwrap();
        assert!(!multigraph_isomorphic(&a, &b, false).unwrap());
    }

    #[test]
    fn lengths_respected_only_when_asked() {
        let mut a = WeightedMultigraph::with_vertex_count(3);
        a.add_edge(0, 1, Rational::ONE).unwrap();
        a.add_edge(1, 2, Rational::from(2)).unwrap();
        let mut b = WeightedMultigraph::with_vertex_count(3);
        b.add_edge(0, 1, Rational::ONE).unwrap();
        b.add_edge(1, 2, Rational::ONE).unwrap();
        assert!(multigraph_isomorphic(&a, &b, false).unwrap());
        assert!(!multigraph_isomorphic(&a, &b, true).unwrap());
    }

    #[test]
    fn size_limit() {
        let g = WeightedMultigraph::with_vertex_count(17);
        assert!(matches!(multigraph_isomorphic(&g, &g, false), Err(Error::SizeLimit(_))));
    }
}
