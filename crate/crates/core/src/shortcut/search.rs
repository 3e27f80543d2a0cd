//! Searching for shortcut trees by linear programming over tree
//! topologies.
//!
//! Once the topology and the leaf placement are fixed, `sd_T(B)` is the
//! sum of the tree edges separating `B`, so the shortcut conditions are
//! linear in the tree edge lengths `x`:
//!
//! ```text
//! sum(x) < sd_H(L),   sum of x over edges separating B >= sd_H(B),   x > 0.
//! ```
//!
//! Minimising `sum(x)` subject to the covering constraints and `x >= 0`
//! decides this: the strict system is solvable iff the minimum `z*` is
//! below `sd_H(L)`, after which every edge is lengthened by a fraction of
//! the slack. The minimum is read off the optimal dual multipliers of the
//! packing problem `max sum(sd_H(B) y_B)` subject to `sum over B separated
//! by e of y_B <= 1`, whose origin is feasible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Mutex;

use rayon::prelude::*;

use super::topology::{enumerate_topologies, TreeTopology};
use super::{verify_sct, ShortcutTree};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};
use crate::lp::{maximize_integral, LpOutcome};
use crate::rational::Rational;
use crate::steiner::SubsetSteiner;

pub const MAX_SEARCH_LEAVES: usize = 8;

/// Tree edge lengths making `topo`, placed on the host by `placement`
/// (leaf `i` goes to `placement[i]`), a shortcut tree; `None` if no
/// positive lengths work.
pub fn lp_feasible_lengths(
    host: &WeightedMultigraph,
    topo: &TreeTopology,
    placement: &[VertexId],
) -> Result<Option<Vec<Rational>>> {
    let m = topo.leaf_count();
    if placement.len() != m {
        return Err(Error::Precondition(format!("{m} leaves but {} placed", placement.len())));
    }
    if let Some(&v) = placement.iter().find(|&&v| v >= host.vertex_count()) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let mut sorted = placement.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != m {
        return Err(Error::Precondition("placement is not injective".into()));
    }
    let sd = SubsetSteiner::compute(host, placement, m);
    Ok(solve(&sd, &topo.leaf_sides(), None))
}

/// A feasible point `y = terms / den` of the packing problem of one
/// topology. It does not depend on the host, so `s·y >= sd_H(L)` proves
/// infeasibility for any host without solving the LP again.
#[derive(Clone, Debug)]
struct PackingPoint {
    terms: Vec<(usize, i128)>,
    den: i128,
}

/// Packing points remembered per topology.
const REMEMBERED_POINTS: usize = 64;

/// The LP of the module docs for one host DP table and one topology,
/// given by the leaf sides of its edges.
fn solve(sd: &SubsetSteiner<'_>, sides: &[u32], memory: Option<&Mutex<Vec<PackingPoint>>>) -> Option<Vec<Rational>> {
    let m = sd.terminals().len();
    let full = (1u32 << m) - 1;
    let edges = sides.len();
    let mut objective = Vec::new();
    let mut columns: Vec<u32> = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        // A proper subset the host cannot connect can never be matched.
        objective.push(sd.scaled(mask)?);
        columns.push(mask);
    }
    let scale = sd.scale();
    let Some(total) = sd.scaled(full) else {
        // Only covering constraints remain; any large enough lengths do.
        let top = objective.iter().copied().max().unwrap_or(0);
        let len = Rational::new(top, scale).max(Rational::ONE);
        return Some(vec![len; edges]);
    };
    if let Some(memory) = memory {
        let points = memory.lock().expect("no poisoning");
        let refuted = points.iter().any(|p| {
            let value: i128 = p.terms.iter().map(|&(j, y)| y * objective[j]).sum();
            value >= total * p.den
        });
        if refuted {
            return None;
        }
    }
    let rows: Vec<Vec<i128>> = sides
        .iter()
        .map(|&s| columns.iter().map(|&b| i128::from(b & s != 0 && b & !s != 0)).collect())
        .collect();
    let LpOutcome::Optimal(sol) = maximize_integral(objective, scale, rows, vec![1; edges]) else {
        unreachable!("the packing problem is bounded because every subset is separated by some edge")
    };
    if let Some(memory) = memory {
        let mut points = memory.lock().expect("no poisoning");
        if points.len() < REMEMBERED_POINTS {
            let den = Rational::common_denominator(&sol.primal);
            let terms = sol
                .primal
                .iter()
                .enumerate()
                .filter(|(_, y)| !y.is_zero())
                .map(|(j, y)| (j, y.scaled_to_integer(den)))
                .collect();
            points.push(PackingPoint { terms, den });
        }
    }
    let slack = Rational::new(total, scale) - sol.value;
    if !slack.is_positive() {
        return None;
    }
    let bump = slack / Rational::from(4 * edges);
    Some(sol.dual.into_iter().map(|x| x + bump).collect())
}

/// Distribution the free host lengths are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthGrid {
    /// `k / denominator` with `k` uniform in `1..=max_numerator`.
    Uniform { max_numerator: i64, denominator: i64 },
    /// With probability 1/2 the long length `2^max_exponent`, otherwise a
    /// short length `2^e` with `e` uniform in `0..max_exponent`.
    TwoScale { max_exponent: u32 },
}

impl LengthGrid {
    fn is_valid(&self) -> bool {
        match *self {
            LengthGrid::Uniform { max_numerator, denominator } => max_numerator >= 1 && denominator >= 1,
            LengthGrid::TwoScale { max_exponent } => (1..=60).contains(&max_exponent),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Rational {
        match *self {
            LengthGrid::Uniform { max_numerator, denominator } => {
                Rational::new(rng.gen_range(1..=max_numerator).into(), denominator.into())
            }
            LengthGrid::TwoScale { max_exponent } => {
                let e = if rng.gen_bool(0.5) { max_exponent } else { rng.gen_range(0..max_exponent) };
                Rational::from_integer(1 << e)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub min_leaves: usize,
    pub max_leaves: usize,
    /// Number of host length functions drawn from `grid`; zero keeps the
    /// host's own lengths.
    pub samples: usize,
    pub seed: u64,
    pub grid: LengthGrid,
    /// Refuse searches needing more LP solves than this.
    pub max_solves: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            min_leaves: 2,
            max_leaves: 6,
            samples: 0,
            seed: 0,
            grid: LengthGrid::TwoScale { max_exponent: 5 },
            max_solves: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    /// Certified shortcut trees in enumeration order (sample, leaf count,
    /// placement, topology).
    pub found: Vec<ShortcutTree>,
    pub solves: u64,
    /// The host length functions used, one per sample.
    pub hosts: Vec<WeightedMultigraph>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<VertexId>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Draws `samples` length functions for the edges of `host`.
pub fn sample_hosts(host: &WeightedMultigraph, samples: usize, seed: u64, grid: LengthGrid) -> Vec<WeightedMultigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let lengths: Vec<Rational> = (0..host.edge_count()).map(|_| grid.draw(&mut rng)).collect();
            host.with_lengths(&lengths).expect("grid lengths are positive")
        })
        .collect()
}

/// Every shortcut tree with `min_leaves..=max_leaves` leaves whose
/// topology has no degree-2 vertex, over all leaf placements and all
/// sampled host lengths. Each result is re-certified with
/// [`verify_sct`].
pub fn search_shortcut_trees(host: &WeightedMultigraph, config: &SearchConfig) -> Result<SearchOutcome> {
    if config.max_leaves > MAX_SEARCH_LEAVES || config.min_leaves < 2 {
        return Err(Error::SizeLimit(format!("leaf counts must lie in 2..={MAX_SEARCH_LEAVES}")));
    }
    if !config.grid.is_valid() {
        return Err(Error::Precondition("invalid length grid".into()));
    }
    let n = host.vertex_count();
    let counts: Vec<usize> = (config.min_leaves..=config.max_leaves.min(n)).collect();
    type Prepared = (Vec<TreeTopology>, Vec<Vec<u32>>, Vec<Mutex<Vec<PackingPoint>>>);
    let topologies: Vec<Prepared> = counts
        .iter()
        .map(|&m| {
            let t = enumerate_topologies(m).expect("bounded by MAX_SEARCH_LEAVES");
            let sides = t.iter().map(TreeTopology::leaf_sides).collect();
            let memory = t.iter().map(|_| Mutex::new(Vec::new())).collect();
            (t, sides, memory)
        })
        .collect();
    let placements: Vec<Vec<Vec<VertexId>>> = counts.iter().map(|&m| subsets(n, m)).collect();
    let per_host: u64 = placements
        .iter()
        .zip(&topologies)
        .map(|(p, (t, _, _))| (p.len() * t.len()) as u64)
        .sum();
    let hosts = if config.samples == 0 {
        vec![host.clone()]
    } else {
        sample_hosts(host, config.samples, config.seed, config.grid)
    };
    let solves = per_host.saturating_mul(hosts.len() as u64);
    if solves > config.max_solves {
        return Err(Error::SizeLimit(format!("search needs {solves} LP solves, cap is {}", config.max_solves)));
    }

    let jobs: Vec<(usize, usize, usize)> = (0..hosts.len())
        .flat_map(|h| {
            let placements = &placements;
            (0..counts.len()).flat_map(move |c| (0..placements[c].len()).map(move |p| (h, c, p)))
        })
        .collect();
    let found: Vec<Vec<ShortcutTree>> = jobs
        .par_iter()
        .map(|&(h, c, p)| {
            let g = &hosts[h];
            let placement = &placements[c][p];
            let sd = SubsetSteiner::compute(g, placement, counts[c]);
            let leaf_names: Vec<String> = placement.iter().map(|&v| g.name(v).to_string()).collect();
            let (topos, sides, memory) = &topologies[c];
            topos
                .iter()
                .zip(sides)
                .zip(memory)
                .filter_map(|((topo, s), mem)| {
                    let lengths = solve(&sd, s, Some(mem))?;
                    let tree = topo.to_graph(&leaf_names, &lengths).expect("sizes match");
                    let leaf_map = placement.iter().enumerate().map(|(i, &v)| (i, v)).collect();
                    let st = ShortcutTree::new(g.clone(), tree, leaf_map);
                    let report = verify_sct(&st).expect("well-formed instance");
                    assert!(report.is_valid(), "LP lengths failed exact certification: {report:?}");
                    Some(st)
                })
                .collect()
        })
        .collect();
    Ok(SearchOutcome { found: found.into_iter().flatten().collect(), solves, hosts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shortcut::tests::triangle_with_star;

    fn cycle(lengths: &[i64]) -> WeightedMultigraph {
        let n = lengths.len();
        let mut g = WeightedMultigraph::with_vertex_count(n);
        for (i, &l) in lengths.iter().enumerate() {
            g.add_edge(i, (i + 1) % n, Rational::from(l)).unwrap();
        }
        g
    }

    #[test]
    fn triangle_star_is_feasible() {
        let host = triangle_with_star(2, Rational::ONE).host;
        let star = &enumerate_topologies(3).unwrap()[0];
        let x = lp_feasible_lengths(&host, star, &[0, 1, 2]).unwrap().unwrap();
        // Minimum total 3 (each pair needs 2), slack 1 shared out.
        let bump = Rational::new(1, 12);
        assert_eq!(x, vec![Rational::ONE + bump; 3]);
    }

    #[test]
    fn two_leaves_always_work() {
        let host = cycle(&[3, 4, 5]);
        let edge = &enumerate_topologies(2).unwrap()[0];
        let x = lp_feasible_lengths(&host, edge, &[0, 2]).unwrap().unwrap();
        assert_eq!(x, vec![Rational::new(5, 4)]);
    }

    #[test]
    fn unit_square_with_four_leaf_star() {
        // Opposite corners are at distance 2, so the two pairs of opposite
        // spokes already total 4 > 3 = sd of all four corners.
        let host = cycle(&[1, 1, 1, 1]);
        let star = enumerate_topologies(4).unwrap().into_iter().find(|t| t.internal_count() == 1).unwrap();
        assert_eq!(lp_feasible_lengths(&host, &star, &[0, 1, 2, 3]).unwrap(), None);
    }

    #[test]
    fn disconnected_leaves() {
        let mut host = WeightedMultigraph::with_vertex_count(4);
        host.add_edge(0, 1, Rational::ONE).unwrap();
        host.add_edge(2, 3, Rational::ONE).unwrap();
        let edge = &enumerate_topologies(2).unwrap()[0];
        assert!(lp_feasible_lengths(&host, edge, &[0, 2]).unwrap().is_some());
        let star = &enumerate_topologies(3).unwrap()[0];
        assert_eq!(lp_feasible_lengths(&host, star, &[0, 1, 2]).unwrap(), None);
    }

    #[test]
    fn rejects_bad_placements() {
        let host = cycle(&[1, 1, 1]);
        let star = &enumerate_topologies(3).unwrap()[0];
        assert!(lp_feasible_lengths(&host, star, &[0, 0, 1]).is_err());
        assert!(lp_feasible_lengths(&host, star, &[0, 1]).is_err());
        assert!(lp_feasible_lengths(&host, star, &[0, 1, 7]).is_err());
    }

    #[test]
    fn search_on_triangle_finds_the_star() {
        let host = cycle(&[2, 2, 2]);
        let config = SearchConfig { min_leaves: 3, max_leaves: 3, ..SearchConfig::default() };
        let out = search_shortcut_trees(&host, &config).unwrap();
        assert_eq!(out.found.len(), 1);
        assert_eq!(out.found[0].leaf_count(), 3);
    }

    #[test]
    fn search_is_deterministic() {
        let host = cycle(&[1, 1, 1, 1, 1]);
        let config = SearchConfig { min_leaves: 3, max_leaves: 5, samples: 4, seed: 9, ..SearchConfig::default() };
        let a = search_shortcut_trees(&host, &config).unwrap();
        let b = search_shortcut_trees(&host, &config).unwrap();
        assert_eq!(a.found, b.found);
        assert_eq!(a.solves, 4 * (10 + 5 * 4 + 26));
    }

    #[test]
    fn search_respects_the_cap() {
        let host = cycle(&[1; 8]);
        let config = SearchConfig { max_leaves: 8, samples: 1000, max_solves: 1000, ..SearchConfig::default() };
        assert!(matches!(search_shortcut_trees(&host, &config), Err(Error::SizeLimit(_))));
    }
}
