//! Seeded property harnesses and the suites built from them.
//!
//! Every randomized check draws instance `i` from its own stream
//! ([`instance_rng`]), so results do not depend on scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::constructions::{bipartite_sct_example, bipartite_sd_closed_forms, hierarchy_example};
use crate::cyclespace::{cycle_space_report, enumerate_cycles, MAX_CYCLE_EDGES};
use crate::error::{Error, Result};
use crate::geodesic::{
    eulerian_double_cover_cycle, is_fully_geodesic, is_k_geodesic, planar_equivalence_report, trace_walk,
    walk_multiplicities, GeodesicVerdict,
};
use crate::graph::{EdgeSet, SubgraphRef, VertexId, VertexSet, WeightedMultigraph};
use crate::random::{
    instance_rng, random_connected_graph, random_integer_length, random_length, random_subtree,
    repair_to_k_geodesic, Repair,
};
use crate::rational::{Distance, Rational};
use crate::shortcut::search::sample_hosts;
use crate::shortcut::{
    classify_cycle_sct, cycle_catalogue, search_shortcut_trees, verify_sct, SearchConfig, ShortcutTree, CATALOGUE_SIZE,
};
use crate::steiner::{brute_force_steiner, steiner_tree};

const STREAM_STEINER: u64 = 1;
const STREAM_TOOLBOX: u64 = 2;
const STREAM_TREES: u64 = 3;
const STREAM_TREE_HOSTS: u64 = 4;
const STREAM_CYCLES: u64 = 5;
const STREAM_CYCLE_SPACE: u64 = 6;

/// Failures listed in a report before the rest are only counted.
const MAX_LISTED: usize = 10;

/// Shortcut trees cut out of geodecity failures and re-verified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Extractions {
    pub checked: u64,
    pub invalid: u64,
}

impl Extractions {
    fn record(&mut self, verdict: &GeodesicVerdict) -> Result<()> {
        if let Some(st) = &verdict.extracted {
            self.record_tree(st)?;
        }
        Ok(())
    }

    fn record_tree(&mut self, st: &ShortcutTree) -> Result<()> {
        self.checked += 1;
        if !verify_sct(st)?.is_valid() {
            self.invalid += 1;
        }
        Ok(())
    }

    fn add(&mut self, other: Extractions) {
        self.checked += other.checked;
        self.invalid += other.invalid;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Value,
    pub extractions: Extractions,
}

impl Check {
    fn new(name: &str, passed: bool, details: Value) -> Self {
        Check { name: name.to_string(), passed, details, extractions: Extractions::default() }
    }
}

fn listed(failures: &[Value]) -> Value {
    json!({ "count": failures.len(), "first": &failures[..failures.len().min(MAX_LISTED)] })
}

fn set_names(g: &WeightedMultigraph, s: &VertexSet) -> Vec<String> {
    s.iter().map(|&v| g.name(v).to_string()).collect()
}

fn verdict_json(g: &WeightedMultigraph, v: &GeodesicVerdict) -> Value {
    json!({
        "holds": v.holds,
        "k": v.k,
        "witness": v.witness.as_ref().map(|w| set_names(g, w)),
        "sd_g": v.witness_gap.map(|(a, _)| a.to_string()),
        "sd_h": v.witness_gap.map(|(_, b)| b.to_string()),
    })
}

/// Steiner DP against exhaustive search on random connected graphs with at
/// most 7 vertices, over every terminal set of size at most 4.
pub fn steiner_oracle_check(seed: u64, instances: usize) -> Result<Check> {
    let outcomes: Vec<(u64, Vec<Value>)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, STREAM_STEINER, i as u64);
            let n = rng.gen_range(1..=7);
            let extra = if n == 1 { 0 } else { rng.gen_range(0..=(13 - n).min(n + 2)) };
            let g = random_connected_graph(&mut rng, n, extra, |r| random_length(r, 6));
            let mut sets = 0;
            let mut failures = Vec::new();
            for mask in 1u32..(1 << n) {
                if mask.count_ones() > 4 {
                    continue;
                }
                sets += 1;
                let terminals: VertexSet = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                let dp = steiner_tree(&g, &terminals)?;
                let bf = brute_force_steiner(&g, &terminals)?;
                let tree_ok = match (&dp.tree, dp.distance) {
                    (Some(t), Distance::Finite(d)) if terminals.len() >= 2 => {
                        let sub = t.subgraph(&g);
                        let s = sub.structure();
                        s.is_tree
                            && terminals.is_subset(sub.vertices())
                            && s.leaves.is_subset(&terminals)
                            && sub.length() == d
                    }
                    (_, d) => terminals.len() <= 1 && d == Distance::Finite(Rational::ZERO),
                };
                if dp.distance != bf.distance || !tree_ok {
                    failures.push(json!({
                        "instance": i,
                        "graph": g.to_json(),
                        "terminals": set_names(&g, &terminals),
                        "dp": dp.distance.to_string(),
                        "brute_force": bf.distance.to_string(),
                        "tree_valid": tree_ok,
                    }));
                }
            }
            Ok((sets, failures))
        })
        .collect::<Result<_>>()?;
    let sets: u64 = outcomes.iter().map(|o| o.0).sum();
    let failures: Vec<Value> = outcomes.into_iter().flat_map(|o| o.1).collect();
    Ok(Check::new(
        "steiner_oracle",
        failures.is_empty(),
        json!({ "instances": instances, "terminal_sets": sets, "failures": listed(&failures) }),
    ))
}

/// One representative of every isomorphism class of trees on `n` vertices,
/// with unit lengths.
pub fn all_trees(n: usize) -> Vec<WeightedMultigraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for tree in &level {
            for v in 0..size - 1 {
                let mut grown = tree.clone();
                grown.push((v, size - 1));
                if seen.insert(tree_canonical_form(size, &grown)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|edges| {
            let mut g = WeightedMultigraph::with_vertex_count(n);
            for (a, b) in edges {
                g.add_edge(a, b, Rational::ONE).expect("valid edge");
            }
            g
        })
        .collect()
}

/// Canonical string of an unlabelled tree: the least rooted encoding over
/// its centres.
fn tree_canonical_form(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut children: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| encode(adj, w, v)).collect();
        children.sort();
        format!("({})", children.concat())
    }
    layer.iter().map(|&c| encode(&adj, c, usize::MAX)).min().expect("a tree has a centre")
}

/// Calls `f` on every cyclic order of `items` (the first item stays first).
fn for_each_cyclic_order(items: &[VertexId], f: &mut impl FnMut(&[VertexId])) {
    fn rec(order: &mut Vec<VertexId>, rest: &mut Vec<VertexId>, f: &mut impl FnMut(&[VertexId])) {
        if rest.is_empty() {
            f(order);
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            order.push(v);
            rec(order, rest, f);
            order.pop();
            rest.insert(i, v);
        }
    }
    if let Some((&first, rest)) = items.split_first() {
        rec(&mut vec![first], &mut rest.to_vec(), f);
    }
}

/// Walks traced in trees: for every tree with at most `max_vertices`
/// vertices and every cyclic order of its leaves, multiplicities are
/// positive and even, the traced length is at least twice the tree length
/// (with equality for the Euler order), and the three planarity conditions
/// agree. Trees with at most 6 vertices also get every cycle through a
/// superset of their leaves.
pub fn toolbox_check(seed: u64, max_vertices: usize) -> Result<Check> {
    let trees: Vec<WeightedMultigraph> = (2..=max_vertices).flat_map(all_trees).collect();
    let outcomes: Vec<(u64, u64, Vec<Value>)> = trees
        .par_iter()
        .enumerate()
        .map(|(i, shape)| {
            let mut rng = instance_rng(seed, STREAM_TOOLBOX, i as u64);
            let lengths: Vec<Rational> = (0..shape.edge_count()).map(|_| random_length(&mut rng, 5)).collect();
            let t = shape.with_lengths(&lengths)?;
            let doubled = t.total_length() * Rational::from(2);
            let leaves: Vec<VertexId> = t.vertices().filter(|&v| t.degree(v) == 1).collect();
            let full = SubgraphRef::full(&t);
            let mut failures = Vec::new();
            let (mut walks, mut reports) = (0u64, 0u64);

            let check_walk = |order: &[VertexId], failures: &mut Vec<Value>| -> Result<bool> {
                let w = trace_walk(&t, order, 0, false)?;
                let mult = walk_multiplicities(&w);
                let even = t.edges().all(|(e, _)| mult.get(&e).is_some_and(|&m| m > 0 && m % 2 == 0));
                let len = w.length(&t);
                if !even || len < doubled {
                    failures.push(json!({
                        "tree": t.to_json(), "cycle": order, "length": len.to_string(), "property": "positive_even",
                    }));
                }
                Ok(len == doubled)
            };

            let mut result = Ok(());
            for_each_cyclic_order(&leaves, &mut |order| {
                if result.is_err() {
                    return;
                }
                result = (|| {
                    walks += 1;
                    let tight = check_walk(order, &mut failures)?;
                    let r = planar_equivalence_report(&full, order)?;
                    reports += 1;
                    if !r.agree() || r.cond_c != tight {
                        failures.push(json!({ "tree": t.to_json(), "cycle": order, "report": r, "tight": tight }));
                    }
                    Ok(())
                })();
            });
            result?;

            let euler = eulerian_double_cover_cycle(&full)?;
            if !check_walk(&euler, &mut failures)? {
                failures.push(json!({ "tree": t.to_json(), "cycle": euler, "property": "euler_equality" }));
            }

            if t.vertex_count() <= 6 {
                let inner: Vec<VertexId> = t.vertices().filter(|&v| t.degree(v) > 1).collect();
                for mask in 1u32..(1 << inner.len()) {
                    let mut on_cycle = leaves.clone();
                    on_cycle.extend((0..inner.len()).filter(|b| mask >> b & 1 == 1).map(|b| inner[b]));
                    let mut result = Ok(());
                    for_each_cyclic_order(&on_cycle, &mut |order| {
                        if result.is_ok() {
                            walks += 1;
                            result = check_walk(order, &mut failures).map(|_| ());
                        }
                    });
                    result?;
                }
            }
            Ok((walks, reports, failures))
        })
        .collect::<Result<_>>()?;
    let walks: u64 = outcomes.iter().map(|o| o.0).sum();
    let reports: u64 = outcomes.iter().map(|o| o.1).sum();
    let failures: Vec<Value> = outcomes.into_iter().flat_map(|o| o.2).collect();
    Ok(Check::new(
        "walk_toolbox",
        failures.is_empty(),
        json!({ "trees": trees.len(), "walks": walks, "planarity_reports": reports, "failures": listed(&failures) }),
    ))
}

#[derive(Default)]
struct HarnessTally {
    already: u64,
    repaired: u64,
    forced: u64,
    counterexamples: Vec<Value>,
    extractions: Extractions,
}

fn run_repair_harness(
    instances: usize,
    k: usize,
    make: impl Fn(usize) -> (WeightedMultigraph, EdgeSet) + Sync,
) -> Result<HarnessTally> {
    let outcomes: Vec<(Repair, Option<Value>, Extractions)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let (mut g, h_edges) = make(i);
            let mut ex = Extractions::default();
            {
                let h = SubgraphRef::from_edges(&g, h_edges.iter().copied())?;
                ex.record(&is_fully_geodesic(&g, &h)?)?;
            }
            let repair = repair_to_k_geodesic(&mut g, &h_edges, k, 60)?;
            let h = SubgraphRef::from_edges(&g, h_edges.iter().copied())?;
            let full = is_fully_geodesic(&g, &h)?;
            ex.record(&full)?;
            let counter = (!full.holds).then(|| {
                json!({ "instance": i, "graph": g.to_json(), "subgraph_edges": h_edges, "verdict": verdict_json(&g, &full) })
            });
            Ok((repair, counter, ex))
        })
        .collect::<Result<_>>()?;
    let mut tally = HarnessTally::default();
    for (repair, counter, ex) in outcomes {
        match repair {
            Repair::None => tally.already += 1,
            Repair::Rounds(_) => tally.repaired += 1,
            Repair::Forced => tally.forced += 1,
        }
        tally.counterexamples.extend(counter);
        tally.extractions.add(ex);
    }
    Ok(tally)
}

fn harness_check(name: &str, k: usize, instances: usize, tally: HarnessTally) -> Check {
    let mut check = Check::new(
        name,
        tally.counterexamples.is_empty(),
        json!({
            "instances": instances,
            "k": k,
            "already_k_geodesic": tally.already,
            "repaired": tally.repaired,
            "forced": tally.forced,
            "counterexamples": listed(&tally.counterexamples),
        }),
    );
    check.extractions = tally.extractions;
    check
}

/// Random graphs with at most 10 vertices and a random subtree, lengthened
/// until the tree is 2-geodesic; every such tree must be fully geodesic.
pub fn tree_harness(seed: u64, instances: usize) -> Result<Check> {
    let tally = run_repair_harness(instances, 2, |i| {
        let mut rng = instance_rng(seed, STREAM_TREES, i as u64);
        let n = rng.gen_range(2..=10);
        let extra = rng.gen_range(1..=2 * n);
        let integer = rng.gen_bool(0.5);
        let g = random_connected_graph(&mut rng, n, extra, |r| {
            if integer { random_integer_length(r, 3) } else { random_length(r, 6) }
        });
        let t = random_subtree(&mut rng, &g);
        (g, t)
    })?;
    Ok(harness_check("two_geodesic_trees_fully_geodesic", 2, instances, tally))
}

/// Shortcut-tree search with 3 to 6 leaves on random tree hosts must come
/// back empty.
pub fn tree_host_search(seed: u64, hosts: usize, samples: usize) -> Result<Check> {
    let mut found = Vec::new();
    let mut solves = 0;
    for i in 0..hosts {
        let mut rng = instance_rng(seed, STREAM_TREE_HOSTS, i as u64);
        let n = rng.gen_range(4..=7);
        let host = random_connected_graph(&mut rng, n, 0, |r| random_length(r, 6));
        let config = SearchConfig { min_leaves: 3, max_leaves: 6, samples, seed: seed ^ i as u64, ..SearchConfig::default() };
        let out = search_shortcut_trees(&host, &config)?;
        solves += out.solves;
        found.extend(out.found.iter().map(ShortcutTree::to_json));
    }
    Ok(Check::new(
        "tree_hosts_have_no_shortcut_trees",
        found.is_empty(),
        json!({ "hosts": hosts, "samples_per_host": samples, "lp_solves": solves, "found": found.len() }),
    ))
}

fn cycle_host(n: usize) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::with_vertex_count(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, Rational::ONE).expect("valid edge");
    }
    g
}

/// Shortcut-tree search on cycles with every leaf count from 2 to
/// `max_leaves`: every certificate classifies into the five-shape
/// catalogue, all five shapes and a 6-leaf certificate appear, and none
/// has more than 6 leaves. A 6-leaf certificate is also checked to leave
/// its cycle 5-geodesic but not 6-geodesic.
pub fn cycle_search_check(seed: u64, samples: usize, max_leaves: usize) -> Result<Check> {
    let catalogue = cycle_catalogue();
    let mut catalogue_distinct = true;
    for i in 0..catalogue.len() {
        for j in i + 1..catalogue.len() {
            if crate::graph::multigraph_isomorphic(&catalogue[i], &catalogue[j], false)? {
                catalogue_distinct = false;
            }
        }
    }
    let mut per_cap = Vec::new();
    let mut shapes = BTreeSet::new();
    let mut bad = Vec::new();
    let mut most_leaves = 0;
    let mut six_leaf: Option<ShortcutTree> = None;
    for m in 2..=max_leaves {
        let host = cycle_host(m.max(3));
        let config = SearchConfig { min_leaves: m, max_leaves: m, samples, seed, ..SearchConfig::default() };
        let out = search_shortcut_trees(&host, &config)?;
        let mut cap_shapes = BTreeMap::new();
        for st in &out.found {
            let c = classify_cycle_sct(st)?;
            most_leaves = most_leaves.max(c.leaves);
            let ok = c.shape.is_some()
                && c.cubic
                && c.planar
                && c.consecutive_arcs_long != Some(false)
                && c.arcs_below_half != Some(false);
            if !ok {
                bad.push(json!({ "shortcut_tree": st.to_json(), "classification": c }));
            }
            if let Some(s) = c.shape {
                shapes.insert(s);
                *cap_shapes.entry(s).or_insert(0u64) += 1;
            }
            if c.leaves == 6 && six_leaf.is_none() {
                six_leaf = Some(st.clone());
            }
        }
        per_cap.push(json!({ "leaves": m, "found": out.found.len(), "shapes": cap_shapes, "lp_solves": out.solves }));
    }
    let mut extractions = Extractions::default();
    let five_not_six = match &six_leaf {
        Some(st) => {
            let g = st.union_graph();
            let h = SubgraphRef::from_edges(&g, 0..st.host.edge_count())?;
            let five = is_k_geodesic(&g, &h, 5)?;
            let six = is_k_geodesic(&g, &h, 6)?;
            extractions.record(&six)?;
            Some(json!({ "shortcut_tree": st.to_json(), "five_geodesic": five.holds, "six_geodesic": six.holds }))
                .filter(|_| five.holds && !six.holds)
                .or(Some(json!({ "shortcut_tree": st.to_json(), "mismatch": true })))
        }
        None => None,
    };
    let five_not_six_ok = five_not_six.as_ref().is_some_and(|v| v.get("mismatch").is_none());
    let all_shapes = shapes == (1..=CATALOGUE_SIZE).collect::<BTreeSet<_>>();
    let passed = catalogue.len() == CATALOGUE_SIZE
        && catalogue_distinct
        && bad.is_empty()
        && all_shapes
        && most_leaves <= 6
        && five_not_six_ok;
    let mut check = Check::new(
        "cycle_shortcut_trees",
        passed,
        json!({
            "samples_per_cap": samples,
            "catalogue_size": catalogue.len(),
            "catalogue_distinct": catalogue_distinct,
            "per_cap": per_cap,
            "shapes_seen": shapes,
            "most_leaves": most_leaves,
            "six_leaf_certificate": six_leaf.is_some(),
            "seven_or_more_leaves": most_leaves > 6,
            "five_geodesic_not_six": five_not_six,
            "unclassified": listed(&bad),
        }),
    );
    check.extractions = extractions;
    Ok(check)
}

/// Random graphs around a cycle of length 3 to 9, lengthened until the
/// cycle is 6-geodesic; every such cycle must be fully geodesic.
pub fn cycle_harness(seed: u64, instances: usize) -> Result<Check> {
    let tally = run_repair_harness(instances, 6, |i| {
        let mut rng = instance_rng(seed, STREAM_CYCLES, i as u64);
        let c = rng.gen_range(3..=9);
        let outside = rng.gen_range(0..=(10 - c).min(3));
        let integer = rng.gen_bool(0.5);
        let len = |r: &mut rand_chacha::ChaCha8Rng| if integer { random_integer_length(r, 3) } else { random_length(r, 6) };
        let mut g = WeightedMultigraph::with_vertex_count(c + outside);
        for v in 0..c {
            let l = len(&mut rng);
            g.add_edge(v, (v + 1) % c, l).expect("valid edge");
        }
        for v in c..c + outside {
            let u = rng.gen_range(0..v);
            let l = len(&mut rng);
            g.add_edge(u, v, l).expect("valid edge");
        }
        let n = c + outside;
        for _ in 0..rng.gen_range(1..=6) {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            let l = len(&mut rng);
            g.add_edge(u, v, l).expect("valid edge");
        }
        (g, (0..c).collect())
    })?;
    Ok(harness_check("six_geodesic_cycles_fully_geodesic", 6, instances, tally))
}

/// The complete-graph family: `K_{k+1}` is `k`-geodesic but not
/// `(k+1)`-geodesic, with gap `((k+1)(k-1), k^2)`.
pub fn hierarchy_check(ks: &[usize]) -> Result<Check> {
    let mut rows = Vec::new();
    let mut passed = true;
    let mut extractions = Extractions::default();
    for &k in ks {
        let inst = hierarchy_example(k)?;
        let h = inst.h();
        let at_k = is_k_geodesic(&inst.graph, &h, k)?;
        let above = is_k_geodesic(&inst.graph, &h, k + 1)?;
        extractions.record(&above)?;
        let (eg, eh) = inst.expected_gap();
        let gap_ok = above.witness_gap == Some((eg, Distance::Finite(eh)));
        let witness_ok = above.witness == Some((1..=k + 1).collect());
        let star_ok = above.extracted.as_ref().is_some_and(|st| {
            st.leaf_count() == k + 1 && st.tree.vertex_count() == k + 2 && st.tree.edge_count() == k + 1
        });
        let ok = at_k.holds && !above.holds && gap_ok && witness_ok && star_ok;
        passed &= ok;
        rows.push(json!({
            "k": k,
            "k_geodesic": at_k.holds,
            "k_plus_one": verdict_json(&inst.graph, &above),
            "expected_gap": [eg.to_string(), eh.to_string()],
            "extracted_star": star_ok,
            "passed": ok,
        }));
    }
    let mut check = Check::new("hierarchy_strict", passed, json!({ "instances": rows }));
    check.extractions = extractions;
    Ok(check)
}

/// The `K_{2,2k}` family: valid shortcut trees with `2k` leaves, closed
/// forms matching the Steiner DP (exhaustively for `k <= 3`), and the host
/// `(2k-1)`-geodesic but not `2k`-geodesic in `T ∪ H`.
pub fn bipartite_check(ks: &[usize]) -> Result<Check> {
    let mut rows = Vec::new();
    let mut passed = true;
    let mut extractions = Extractions::default();
    for &k in ks {
        let inst = bipartite_sct_example(k)?;
        let st = &inst.shortcut;
        let report = verify_sct(st)?;
        let tree_of: BTreeMap<VertexId, VertexId> = st.leaf_map.iter().map(|(&t, &h)| (h, t)).collect();
        let mut mismatches = Vec::new();
        let exhaustive = k <= 3;
        if exhaustive {
            for am in 0..1u32 << k {
                for bm in 0..1u32 << k {
                    let mut hs = VertexSet::new();
                    hs.extend((0..k).filter(|i| am >> i & 1 == 1).map(|i| inst.a[i]));
                    hs.extend((0..k).filter(|i| bm >> i & 1 == 1).map(|i| inst.b[i]));
                    let ts: VertexSet = hs.iter().map(|v| tree_of[v]).collect();
                    let got = (steiner_tree(&st.host, &hs)?.distance, steiner_tree(&st.tree, &ts)?.distance);
                    let (eh, et) = bipartite_sd_closed_forms(am.count_ones() as usize, bm.count_ones() as usize, k)?;
                    if got != (Distance::Finite(eh), Distance::Finite(et)) {
                        mismatches.push(json!({ "a": am, "b": bm, "sd_h": got.0.to_string(), "sd_t": got.1.to_string() }));
                    }
                }
            }
        }
        let (g, h_edges) = inst.ambient();
        let h = SubgraphRef::from_edges(&g, h_edges)?;
        // Every subgraph is vacuously 1-geodesic.
        let below = if k == 1 { true } else { is_k_geodesic(&g, &h, 2 * k - 1)?.holds };
        let at = is_k_geodesic(&g, &h, 2 * k)?;
        extractions.record(&at)?;
        let ok = report.is_valid()
            && report.leaves == 2 * k
            && mismatches.is_empty()
            && below
            && !at.holds;
        passed &= ok;
        rows.push(json!({
            "k": k,
            "sct": report,
            "closed_forms_exhaustive": exhaustive,
            "closed_form_mismatches": mismatches,
            "host_geodesic_below_2k": below,
            "host_geodesic_at_2k": at.holds,
            "passed": ok,
        }));
    }
    let mut check = Check::new("bipartite_shortcut_trees", passed, json!({ "instances": rows }));
    check.extractions = extractions;
    Ok(check)
}

fn cycle_space_instance(g: &WeightedMultigraph, extractions: &mut Extractions) -> Result<Option<Value>> {
    let report = cycle_space_report(g)?;
    for c in enumerate_cycles(g)? {
        let h = SubgraphRef::from_edges(g, c.edges.iter().copied())?;
        extractions.record(&is_fully_geodesic(g, &h)?)?;
    }
    Ok((!report.holds()).then(|| json!({ "graph": g.to_json(), "report": report })))
}

/// Fully geodesic cycles span the cycle space, and every cycle that is
/// not a sum of shorter cycles is fully geodesic, on random graphs with at
/// most 8 vertices (and on `extra` if given).
pub fn cycle_space_check(seed: u64, instances: usize, extra: Option<&WeightedMultigraph>) -> Result<Check> {
    let outcomes: Vec<(usize, Option<Value>, Extractions)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, STREAM_CYCLE_SPACE, i as u64);
            let n = rng.gen_range(3..=8);
            let extra_edges = rng.gen_range(1..=(MAX_CYCLE_EDGES + 1 - n).min(7));
            let integer = rng.gen_bool(0.5);
            let g = random_connected_graph(&mut rng, n, extra_edges, |r| {
                if integer { random_integer_length(r, 3) } else { random_length(r, 5) }
            });
            let mut ex = Extractions::default();
            let bad = cycle_space_instance(&g, &mut ex)?.map(|mut v| {
                v["instance"] = json!(i);
                v
            });
            Ok((enumerate_cycles(&g)?.len(), bad, ex))
        })
        .collect::<Result<_>>()?;
    let mut extractions = Extractions::default();
    let mut cycles = 0;
    let mut failures = Vec::new();
    for (c, bad, ex) in outcomes {
        cycles += c;
        failures.extend(bad);
        extractions.add(ex);
    }
    let extra_report = match extra {
        Some(g) => {
            let bad = cycle_space_instance(g, &mut extractions)?;
            let report = cycle_space_report(g)?;
            failures.extend(bad);
            Some(json!({
                "cycles": report.cycle_count,
                "fully_geodesic": report.fully_geodesic.len(),
                "non_2sum": report.non_2sum.len(),
                "rank": report.fully_geodesic_span.rank,
                "dimension": report.fully_geodesic_span.cycle_space_dimension,
                "holds": report.holds(),
            }))
        }
        None => None,
    };
    let mut check = Check::new(
        "fully_geodesic_cycles_span",
        failures.is_empty(),
        json!({ "instances": instances, "cycles": cycles, "given_graph": extra_report, "failures": listed(&failures) }),
    );
    check.extractions = extractions;
    Ok(check)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Toolbox,
    Trees,
    Cycles,
    Hierarchy,
    K22k,
    CycleSpace,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Toolbox, Suite::Trees, Suite::Cycles, Suite::Hierarchy, Suite::K22k, Suite::CycleSpace];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Toolbox => "toolbox",
            Suite::Trees => "trees",
            Suite::Cycles => "cycles",
            Suite::Hierarchy => "hierarchy",
            Suite::K22k => "k22k",
            Suite::CycleSpace => "cyclespace",
        }
    }

    /// A suite name, or `all`.
    pub fn parse_many(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    /// Instances or host-length samples per randomized check; each check
    /// has its own default.
    pub samples: Option<usize>,
    pub max_leaves: usize,
    /// Restricts the hierarchy and `K_{2,2k}` suites to one `k`.
    pub k: Option<usize>,
    /// An extra instance for the cycle-space suite.
    pub graph: Option<WeightedMultigraph>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { seed: 1, samples: None, max_leaves: 7, k: None, graph: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<SuiteReport> {
    let n = |default: usize| p.samples.unwrap_or(default);
    let checks = match suite {
        Suite::Toolbox => vec![steiner_oracle_check(p.seed, n(500))?, toolbox_check(p.seed, 8)?],
        Suite::Trees => vec![tree_harness(p.seed, n(300))?, tree_host_search(p.seed, 3, n(300).min(20))?],
        Suite::Cycles => vec![cycle_search_check(p.seed, n(200), p.max_leaves)?, cycle_harness(p.seed, n(200))?],
        Suite::Hierarchy => {
            let ks: Vec<usize> = p.k.map_or((2..=5).collect(), |k| vec![k]);
            vec![hierarchy_check(&ks)?]
        }
        Suite::K22k => {
            let ks: Vec<usize> = p.k.map_or((1..=4).collect(), |k| vec![k]);
            vec![bipartite_check(&ks)?]
        }
        Suite::CycleSpace => vec![cycle_space_check(p.seed, n(200), p.graph.as_ref())?],
    };
    Ok(SuiteReport { suite, passed: checks.iter().all(|c| c.passed), checks })
}

/// Everything a `paper-verify` run reports. Contains no timings, so equal
/// inputs give byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub instance_digest: String,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    /// Every shortcut tree cut out of a failure, re-verified.
    pub extraction_soundness: Check,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, instance_digest: String, suites: Vec<SuiteReport>) -> Self {
        let mut total = Extractions::default();
        for c in suites.iter().flat_map(|s| &s.checks) {
            total.add(c.extractions);
        }
        let mut extraction_soundness =
            Check::new("extraction_soundness", total.invalid == 0, json!({ "checked": total.checked, "invalid": total.invalid }));
        extraction_soundness.extractions = total;
        let passed = extraction_soundness.passed && suites.iter().all(|s| s.passed);
        RunReport { command: command.to_string(), seed, instance_digest, passed, suites, extraction_soundness }
    }
}

/// Hex SHA-256 of the parts, each terminated by a newline.
pub fn instance_digest<S: AsRef<str>>(parts: &[S]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_ref().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Host samples used by the cycle search for `m` leaves; exposed so
/// reports can be replayed.
pub fn cycle_search_hosts(m: usize, samples: usize, seed: u64) -> Vec<WeightedMultigraph> {
    sample_hosts(&cycle_host(m.max(3)), samples, seed, SearchConfig::default().grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| all_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47]);
    }

    #[test]
    fn cyclic_orders() {
        let mut seen = Vec::new();
        for_each_cyclic_order(&[1, 2, 3, 4], &mut |o| seen.push(o.to_vec()));
        assert_eq!(seen.len(), 6);
        assert!(seen.iter().all(|o| o[0] == 1));
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_many("all").unwrap().len(), 6);
        assert_eq!(Suite::parse_many("k22k").unwrap(), vec![Suite::K22k]);
        assert!(matches!(Suite::parse_many("nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn small_runs_pass() {
        assert!(steiner_oracle_check(3, 20).unwrap().passed);
        assert!(toolbox_check(3, 6).unwrap().passed);
        let t = tree_harness(3, 20).unwrap();
        assert!(t.passed, "{}", t.details);
        assert!(t.extractions.checked > 0 && t.extractions.invalid == 0);
        assert!(cycle_harness(3, 10).unwrap().passed);
        assert!(hierarchy_check(&[2, 3]).unwrap().passed);
        assert!(bipartite_check(&[1, 2]).unwrap().passed);
        assert!(cycle_space_check(3, 10, None).unwrap().passed);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(instance_digest(&["a", "b"]), instance_digest(&["a", "b"]));
        assert_ne!(instance_digest(&["a", "b"]), instance_digest(&["ab"]));
    }
}
