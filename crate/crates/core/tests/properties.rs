//! Invariants checked on seeded random instances.

use geodecity::cyclespace::enumerate_cycles;
use geodecity::geodesic::{is_k_geodesic, trace_walk, walk_multiplicities};
use geodecity::graph::{edge_bipartition, suppress_degree_two, EdgeSet};
use geodecity::lp::{maximize, LpOutcome, StandardLp};
use geodecity::random::{instance_rng, random_connected_graph, random_length, random_subtree};
use geodecity::shortcut::{enumerate_topologies, lp_feasible_lengths, verify_sct, ShortcutTree};
use geodecity::steiner::{shortest_path_matrix, steiner_tree};
use geodecity::{Distance, Rational, SubgraphRef, VertexSet, WeightedMultigraph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn graph(seed: u64, n: usize, extra: usize) -> WeightedMultigraph {
    let mut rng = instance_rng(seed, 100, 0);
    random_connected_graph(&mut rng, n, extra, |r| random_length(r, 6))
}

fn subset(seed: u64, n: usize, size: usize) -> VertexSet {
    let mut rng = instance_rng(seed, 101, 0);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut rng);
    all.into_iter().take(size).collect()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i128..50, 1i128..12).prop_map(|(p, q)| Rational::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_order_matches_reals(a in rational(), b in rational()) {
        prop_assert_eq!(a < b, a.numer() * b.denom() < b.numer() * a.denom());
        prop_assert_eq!(a + b - b, a);
        prop_assert!(a.denom() > 0);
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn graph_json_round_trips(seed in any::<u64>(), n in 1usize..8, extra in 0usize..6) {
        let g = graph(seed, n, if n > 1 { extra } else { 0 });
        prop_assert_eq!(WeightedMultigraph::from_json_str(&g.to_json_string()).unwrap(), g);
    }

    #[test]
    fn subgraph_length_inclusion_exclusion(seed in any::<u64>(), n in 2usize..8, extra in 0usize..6) {
        let g = graph(seed, n, extra);
        let mut rng = instance_rng(seed, 102, 0);
        let a: EdgeSet = (0..g.edge_count()).filter(|_| rng.gen_bool(0.5)).collect();
        let b: EdgeSet = (0..g.edge_count()).filter(|_| rng.gen_bool(0.5)).collect();
        let len = |s: &EdgeSet| SubgraphRef::from_edges(&g, s.iter().copied()).unwrap().length();
        let union: EdgeSet = a.union(&b).copied().collect();
        let inter: EdgeSet = a.intersection(&b).copied().collect();
        prop_assert_eq!(len(&union), len(&a) + len(&b) - len(&inter));
    }

    #[test]
    fn suppression_preserves_length_and_leaves(seed in any::<u64>(), n in 2usize..9, extra in 0usize..4) {
        let g = graph(seed, n, extra);
        if SubgraphRef::full(&g).structure().is_cycle {
            return Ok(());
        }
        // Suppressing a pendant cycle would need a loop; that input is rejected.
        let s = match suppress_degree_two(&g) {
            Err(geodecity::Error::Precondition(_)) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert_eq!(s.total_length(), g.total_length());
        prop_assert!(s.vertices().all(|v| s.degree(v) != 2));
        let leaves = |h: &WeightedMultigraph| {
            let mut l: Vec<String> = h.vertices().filter(|&v| h.degree(v) == 1).map(|v| h.name(v).to_string()).collect();
            l.sort();
            l
        };
        prop_assert_eq!(leaves(&s), leaves(&g));
        prop_assert_eq!(suppress_degree_two(&s).unwrap(), s);
    }

    #[test]
    fn edge_bipartitions_split_leaf_sets(seed in any::<u64>(), n in 2usize..9) {
        let t = graph(seed, n, 0);
        let full = SubgraphRef::full(&t);
        let leaves = full.structure().leaves;
        let x: VertexSet = leaves.iter().copied().chain(subset(seed, n, n / 2)).collect();
        for e in 0..t.edge_count() {
            let b = edge_bipartition(&full, e, &x).unwrap();
            prop_assert!(b.first.is_disjoint(&b.second));
            prop_assert_eq!(b.first.union(&b.second).copied().collect::<VertexSet>(), x.clone());
            prop_assert!(b.is_nontrivial());
        }
    }

    #[test]
    fn steiner_distances_are_monotone(seed in any::<u64>(), n in 2usize..8, extra in 0usize..6, k in 1usize..5) {
        let g = graph(seed, n, extra);
        let a = subset(seed, n, k.min(n));
        let sd = steiner_tree(&g, &a).unwrap();
        // Adding a terminal cannot shrink the distance.
        let mut b = a.clone();
        b.insert(seed as usize % n);
        prop_assert!(steiner_tree(&g, &b).unwrap().distance >= sd.distance);
        // Neither can deleting edges.
        let sub = SubgraphRef::from_edges(&g, random_subtree(&mut instance_rng(seed, 103, 0), &g)).unwrap();
        let restricted = sub.restricted_graph().graph;
        prop_assert!(steiner_tree(&restricted, &a).unwrap().distance >= sd.distance);
        // Every leaf of the tree is a terminal.
        if let Some(t) = &sd.tree {
            prop_assert!(t.subgraph(&g).structure().leaves.is_subset(&a));
        }
        if a.len() == 2 {
            let v: Vec<usize> = a.iter().copied().collect();
            prop_assert_eq!(sd.distance, shortest_path_matrix(&g).get(v[0], v[1]));
        }
    }

    #[test]
    fn geodecity_is_monotone_in_k(seed in any::<u64>(), n in 3usize..8, extra in 1usize..6) {
        let g = graph(seed, n, extra);
        let h = SubgraphRef::from_edges(&g, random_subtree(&mut instance_rng(seed, 104, 0), &g)).unwrap();
        let top = h.vertices().len().max(2);
        let verdicts: Vec<bool> = (2..=top).map(|k| is_k_geodesic(&g, &h, k).unwrap().holds).collect();
        prop_assert!(verdicts.windows(2).all(|w| w[0] || !w[1]));
        for k in 2..=top {
            let v = is_k_geodesic(&g, &h, k).unwrap();
            if let Some(st) = &v.extracted {
                prop_assert!(v.witness.as_ref().unwrap().len() <= k);
                let (sd_g, sd_h) = v.witness_gap.unwrap();
                prop_assert!(Distance::Finite(sd_g) < sd_h);
                prop_assert!(st.leaf_count() <= k);
                prop_assert!(verify_sct(st).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn traced_walks_sum_distances(seed in any::<u64>(), n in 2usize..8, extra in 0usize..6, c in 2usize..6) {
        let g = graph(seed, n, extra);
        let mut order: Vec<usize> = subset(seed, n, c.min(n)).into_iter().collect();
        if order.len() < 2 {
            return Ok(());
        }
        order.shuffle(&mut instance_rng(seed, 105, 0));
        let w = trace_walk(&g, &order, 0, false).unwrap();
        let dm = shortest_path_matrix(&g);
        let expected: Rational =
            (0..order.len()).map(|i| dm.get(order[i], order[(i + 1) % order.len()]).unwrap_finite()).sum();
        prop_assert_eq!(w.length(&g), expected);
        let weighted: Rational =
            walk_multiplicities(&w).iter().map(|(&e, &m)| g.len(e) * Rational::from(m)).sum();
        prop_assert_eq!(weighted, expected);
    }

    #[test]
    fn lp_optima_carry_certificates(
        rows in prop::collection::vec(prop::collection::vec(-2i64..6, 3), 1..5),
        rhs_seed in any::<u64>(),
        objective in prop::collection::vec(-3i64..5, 3),
    ) {
        let mut rng = instance_rng(rhs_seed, 106, 0);
        let lp = StandardLp {
            objective: objective.iter().map(|&c| Rational::from(c)).collect(),
            rhs: rows.iter().map(|_| Rational::from(rng.gen_range(0i64..10))).collect(),
            rows: rows.iter().map(|r| r.iter().map(|&a| Rational::from(a)).collect()).collect(),
        };
        if let LpOutcome::Optimal(s) = maximize(&lp).unwrap() {
            for (row, b) in lp.rows.iter().zip(&lp.rhs) {
                let lhs: Rational = row.iter().zip(&s.primal).map(|(a, y)| *a * *y).sum();
                prop_assert!(lhs <= *b);
            }
            prop_assert!(s.primal.iter().all(|y| *y >= Rational::ZERO));
            prop_assert!(s.dual.iter().all(|x| *x >= Rational::ZERO));
            for j in 0..3 {
                let col: Rational = lp.rows.iter().zip(&s.dual).map(|(r, x)| r[j] * *x).sum();
                prop_assert!(col >= lp.objective[j]);
            }
            let cy: Rational = lp.objective.iter().zip(&s.primal).map(|(c, y)| *c * *y).sum();
            let bx: Rational = lp.rhs.iter().zip(&s.dual).map(|(b, x)| *b * *x).sum();
            prop_assert_eq!(cy, s.value);
            prop_assert_eq!(bx, s.value);
        }
    }

    #[test]
    fn lp_lengths_certify(seed in any::<u64>(), n in 3usize..7, m in 2usize..6) {
        let mut rng = instance_rng(seed, 107, 0);
        let mut host = WeightedMultigraph::with_vertex_count(n);
        for i in 0..n {
            host.add_edge(i, (i + 1) % n, Rational::from(rng.gen_range(1i64..8))).unwrap();
        }
        if rng.gen_bool(0.5) {
            host.add_edge(0, n / 2, Rational::from(rng.gen_range(1i64..8))).unwrap();
        }
        let m = m.min(n);
        let topologies = enumerate_topologies(m).unwrap();
        let topo = topologies.choose(&mut rng).unwrap();
        let mut placement: Vec<usize> = (0..n).collect();
        placement.shuffle(&mut rng);
        placement.truncate(m);
        if let Some(x) = lp_feasible_lengths(&host, topo, &placement).unwrap() {
            let names: Vec<String> = (0..m).map(|i| format!("l{i}")).collect();
            let tree = topo.to_graph(&names, &x).unwrap();
            let st = ShortcutTree::new(host, tree, placement.iter().copied().enumerate().collect());
            prop_assert!(verify_sct(&st).unwrap().is_valid());
        }
    }

    #[test]
    fn cycle_sums_are_even(seed in any::<u64>(), n in 2usize..7, extra in 1usize..6) {
        let g = graph(seed, n, extra);
        let cycles = enumerate_cycles(&g).unwrap();
        for a in cycles.iter().take(8) {
            for b in cycles.iter().take(8) {
                let mut deg = vec![0usize; n];
                for e in a.vector.sum(&b.vector).support() {
                    deg[g.edge(e).u] += 1;
                    deg[g.edge(e).v] += 1;
                }
                prop_assert!(deg.iter().all(|d| d % 2 == 0));
            }
        }
    }
}
