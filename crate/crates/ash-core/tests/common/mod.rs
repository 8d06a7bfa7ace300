//! Shared test support: random hypergraph generators and independent
//! oracles (exhaustive walk enumeration, temporal node BFS, static s-line
//! construction, brute-force clique enumeration). The oracles deliberately
//! avoid the library's search and graph machinery so that agreement is
//! meaningful.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use ash_core::inference::DyadSnapshot;
use ash_core::s_analysis::Objective;
use ash_core::{Ash, EdgeId, NodeId};
use rand::prelude::*;

// ---------------------------------------------------------------------
// Random hypergraph generation
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_nodes: u64,
    pub max_edges: usize,
    pub max_instants: i64,
    pub dyadic_only: bool,
    /// Probability that a node gets attribute values.
    pub label_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_nodes: 8,
            max_edges: 12,
            max_instants: 6,
            dyadic_only: false,
            label_prob: 0.9,
        }
    }
}

pub const LABEL_VALUES: [&str; 3] = ["A", "B", "C"];

pub fn random_ash(rng: &mut StdRng, cfg: &GenConfig) -> Ash {
    let start = rng.gen_range(-2..=2i64);
    let end = start + rng.gen_range(1..=cfg.max_instants) - 1;
    let mut ash = Ash::new(start, end).expect("valid axis");
    let node_pool: Vec<NodeId> = (0..rng.gen_range(2..=cfg.max_nodes)).map(NodeId).collect();
    let edge_count = rng.gen_range(1..=cfg.max_edges);
    for _ in 0..edge_count {
        let size = if cfg.dyadic_only {
            2
        } else {
            rng.gen_range(2..=4usize.min(node_pool.len()))
        };
        let mut pool = node_pool.clone();
        pool.shuffle(rng);
        let members: Vec<NodeId> = pool.into_iter().take(size).collect();
        let lo = rng.gen_range(start..=end);
        let hi = (lo + rng.gen_range(0..=2)).min(end);
        ash.add_hyperedge(&members, (lo, hi)).expect("valid edge");
    }
    let nodes: Vec<NodeId> = ash.node_ids().collect();
    for u in nodes {
        if !rng.gen_bool(cfg.label_prob) {
            continue;
        }
        // Either constant over the axis or split at a random instant.
        let value = LABEL_VALUES[rng.gen_range(0..LABEL_VALUES.len())];
        if rng.gen_bool(0.3) && end > start {
            let split = rng.gen_range(start..end);
            let second = LABEL_VALUES[rng.gen_range(0..LABEL_VALUES.len())];
            ash.set_attribute(u, "x", (start, split), value).unwrap();
            ash.set_attribute(u, "x", (split + 1, end), second).unwrap();
        } else {
            ash.set_attribute(u, "x", (start, end), value).unwrap();
        }
    }
    ash
}

// ---------------------------------------------------------------------
// Exhaustive walk oracle
// ---------------------------------------------------------------------

/// Every achievable `(length, start, arrival)` triple of walks from
/// `source`, per reachable hyperedge, found by exhaustive layered
/// expansion of (instant, hyperedge) states up to `max_len` steps.
/// Two walks with the same endpoint state, length and start are
/// interchangeable for every objective, so the triples are lossless.
pub fn oracle_walks(
    ash: &Ash,
    source: EdgeId,
    s: usize,
    window: (i64, i64),
    max_gap: Option<i64>,
    max_len: usize,
) -> HashMap<EdgeId, Vec<(usize, i64, i64)>> {
    let (lo, hi) = window;
    // Enumerate all states and pairwise node intersections directly.
    let mut states: Vec<(i64, EdgeId)> = Vec::new();
    for edge in ash.hyperedges() {
        for t in edge.presence().instants_in(lo, hi) {
            states.push((t, edge.id()));
        }
    }
    let ids: Vec<EdgeId> = ash.hyperedges().map(|e| e.id()).collect();
    let mut inter: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
    for &a in &ids {
        for &b in &ids {
            let na: BTreeSet<NodeId> = ash.hyperedge(a).unwrap().nodes().iter().copied().collect();
            let nb: BTreeSet<NodeId> = ash.hyperedge(b).unwrap().nodes().iter().copied().collect();
            inter.insert((a, b), na.intersection(&nb).count());
        }
    }
    let successors: Vec<Vec<usize>> = states
        .iter()
        .map(|&(t, e)| {
            states
                .iter()
                .enumerate()
                .filter(|&(_, &(t2, e2))| {
                    t2 >= t && max_gap.is_none_or(|g| t2 - t <= g) && inter[&(e, e2)] >= s
                })
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let mut results: HashMap<EdgeId, Vec<(usize, i64, i64)>> = HashMap::new();
    let starts: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|&(_, &(_, e))| e == source)
        .map(|(i, _)| i)
        .collect();
    for &start_idx in &starts {
        let t0 = states[start_idx].0;
        let mut frontier = vec![false; states.len()];
        frontier[start_idx] = true;
        for k in 1..=max_len {
            let mut any = false;
            for (idx, &present) in frontier.iter().enumerate() {
                if present {
                    any = true;
                    let (t, e) = states[idx];
                    results.entry(e).or_default().push((k, t0, t));
                }
            }
            if !any || k == max_len {
                break;
            }
            let mut next = vec![false; states.len()];
            for (idx, &present) in frontier.iter().enumerate() {
                if present {
                    for &j in &successors[idx] {
                        next[j] = true;
                    }
                }
            }
            frontier = next;
        }
    }
    results
}

/// Optimal objective vector among the oracle triples, in the same encoding
/// as `walk_objective_value`.
pub fn oracle_optimum(triples: &[(usize, i64, i64)], objective: Objective) -> Option<[i64; 2]> {
    triples
        .iter()
        .map(|&(k, t0, arrival)| {
            let (k, d) = (k as i64, arrival - t0);
            match objective {
                Objective::Shortest => [k, 0],
                Objective::Fastest => [d, 0],
                Objective::FastestShortest => [k, d],
                Objective::ShortestFastest => [d, k],
                Objective::Foremost => [arrival, 0],
            }
        })
        .min()
}

/// Truly naive recursive enumeration of complete walks, for cross-checking
/// the layered oracle on small fixtures.
pub fn naive_walks(
    ash: &Ash,
    source: EdgeId,
    target: EdgeId,
    s: usize,
    window: (i64, i64),
    max_gap: Option<i64>,
    max_len: usize,
) -> Vec<Vec<(i64, EdgeId)>> {
    #[allow(clippy::too_many_arguments)]
    fn extend(
        ash: &Ash,
        target: EdgeId,
        s: usize,
        window: (i64, i64),
        max_gap: Option<i64>,
        max_len: usize,
        walk: &mut Vec<(i64, EdgeId)>,
        out: &mut Vec<Vec<(i64, EdgeId)>>,
    ) {
        let &(t, e) = walk.last().unwrap();
        if e == target {
            out.push(walk.clone());
        }
        if walk.len() == max_len {
            return;
        }
        for next in ash.hyperedges() {
            let na: BTreeSet<NodeId> = ash.hyperedge(e).unwrap().nodes().iter().copied().collect();
            let nb: BTreeSet<NodeId> = next.nodes().iter().copied().collect();
            if na.intersection(&nb).count() < s {
                continue;
            }
            for t2 in next.presence().instants_in(window.0, window.1) {
                if t2 < t || max_gap.is_some_and(|g| t2 - t > g) {
                    continue;
                }
                walk.push((t2, next.id()));
                extend(ash, target, s, window, max_gap, max_len, walk, out);
                walk.pop();
            }
        }
    }
    let mut out = Vec::new();
    let presence = ash.hyperedge(source).unwrap().presence().clone();
    for t0 in presence.instants_in(window.0, window.1) {
        let mut walk = vec![(t0, source)];
        extend(
            ash, target, s, window, max_gap, max_len, &mut walk, &mut out,
        );
    }
    out
}

// ---------------------------------------------------------------------
// Temporal node BFS oracle (dyadic streams)
// ---------------------------------------------------------------------

/// Classic time-respecting node reachability on a dyadic stream: minimum
/// hop count and earliest arrival per reachable node, via exhaustive BFS
/// over (instant, node) states.
pub fn temporal_node_bfs(
    ash: &Ash,
    x: NodeId,
    window: (i64, i64),
) -> HashMap<NodeId, (usize, i64)> {
    let (lo, hi) = window;
    // dyad -> (endpoints, active instants)
    let dyads: Vec<(NodeId, NodeId, Vec<i64>)> = ash
        .hyperedges()
        .map(|e| {
            assert_eq!(e.size(), 2, "oracle requires a dyadic stream");
            let ts: Vec<i64> = e.presence().instants_in(lo, hi).collect();
            (e.nodes()[0], e.nodes()[1], ts)
        })
        .collect();

    let mut best_hops: HashMap<(i64, NodeId), usize> = HashMap::new();
    let mut frontier: Vec<(i64, NodeId)> = Vec::new();
    for &(a, b, ref ts) in &dyads {
        for &t in ts {
            let step = if a == x {
                Some((t, b))
            } else if b == x {
                Some((t, a))
            } else {
                None
            };
            if let Some(state) = step {
                if let std::collections::hash_map::Entry::Vacant(slot) = best_hops.entry(state) {
                    slot.insert(1);
                    frontier.push(state);
                }
            }
        }
    }
    let mut hops = 1;
    while !frontier.is_empty() {
        hops += 1;
        let mut next = Vec::new();
        for &(t, v) in &frontier {
            for &(a, b, ref ts) in &dyads {
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                for &t2 in ts {
                    if t2 < t {
                        continue;
                    }
                    let state = (t2, other);
                    if let std::collections::hash_map::Entry::Vacant(slot) = best_hops.entry(state)
                    {
                        slot.insert(hops);
                        next.push(state);
                    }
                }
            }
        }
        frontier = next;
    }

    let mut out: HashMap<NodeId, (usize, i64)> = HashMap::new();
    for (&(t, v), &h) in &best_hops {
        out.entry(v)
            .and_modify(|(mh, ma)| {
                *mh = (*mh).min(h);
                *ma = (*ma).min(t);
            })
            .or_insert((h, t));
    }
    out
}

// ---------------------------------------------------------------------
// Static s-line oracle
// ---------------------------------------------------------------------

/// s-line adjacency by double loop over hyperedge pairs, components by
/// plain flood fill, all with raw collections.
pub struct StaticSOracle {
    pub adjacency: BTreeMap<EdgeId, BTreeSet<EdgeId>>,
}

impl StaticSOracle {
    pub fn build(ash: &Ash, s: usize) -> Self {
        let ids: Vec<EdgeId> = ash.hyperedges().map(|e| e.id()).collect();
        let mut adjacency: BTreeMap<EdgeId, BTreeSet<EdgeId>> =
            ids.iter().map(|&e| (e, BTreeSet::new())).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let na: BTreeSet<NodeId> =
                    ash.hyperedge(a).unwrap().nodes().iter().copied().collect();
                let nb: BTreeSet<NodeId> =
                    ash.hyperedge(b).unwrap().nodes().iter().copied().collect();
                if na.intersection(&nb).count() >= s {
                    adjacency.get_mut(&a).unwrap().insert(b);
                    adjacency.get_mut(&b).unwrap().insert(a);
                }
            }
        }
        StaticSOracle { adjacency }
    }

    pub fn components(&self) -> Vec<BTreeSet<EdgeId>> {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        let mut out = Vec::new();
        for &v in self.adjacency.keys() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                if !comp.insert(x) {
                    continue;
                }
                seen.insert(x);
                stack.extend(self.adjacency[&x].iter().copied());
            }
            out.push(comp);
        }
        out
    }

    pub fn distance(&self, a: EdgeId, b: EdgeId) -> Option<usize> {
        if a == b {
            return Some(0);
        }
        let mut dist: BTreeMap<EdgeId, usize> = BTreeMap::from([(a, 0)]);
        let mut frontier = vec![a];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in frontier {
                let d = dist[&v];
                for &n in &self.adjacency[&v] {
                    if n == b {
                        return Some(d + 1);
                    }
                    if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(n) {
                        slot.insert(d + 1);
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}

// ---------------------------------------------------------------------
// Brute-force clique oracle
// ---------------------------------------------------------------------

/// Every maximal clique of at least two nodes, by subset enumeration.
/// Only feasible for snapshots of at most ~16 nodes.
pub fn brute_force_maximal_cliques(snapshot: &DyadSnapshot) -> Vec<BTreeSet<NodeId>> {
    let nodes: Vec<NodeId> = snapshot
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(nodes.len() <= 16, "subset oracle is exponential");
    let has_edge = |a: NodeId, b: NodeId| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        snapshot.contains(&(lo, hi))
    };
    let is_complete = |members: &[NodeId]| {
        members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| has_edge(a, b)))
    };
    let mut cliques = Vec::new();
    for mask in 1u32..(1 << nodes.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<NodeId> = (0..nodes.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| nodes[i])
            .collect();
        if !is_complete(&members) {
            continue;
        }
        let maximal = nodes
            .iter()
            .filter(|n| !members.contains(n))
            .all(|&n| !members.iter().all(|&m| has_edge(m, n)));
        if maximal {
            cliques.push(members.into_iter().collect());
        }
    }
    cliques.sort();
    cliques
}

/// Random dyadic snapshot over at most `max_nodes` nodes.
pub fn random_snapshot(rng: &mut StdRng, max_nodes: u64, edge_prob: f64) -> DyadSnapshot {
    let n = rng.gen_range(2..=max_nodes);
    let mut snapshot = DyadSnapshot::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                snapshot.insert((NodeId(u), NodeId(v)));
            }
        }
    }
    snapshot
}

/// All hyperedge ids of a hypergraph.
pub fn edge_ids(ash: &Ash) -> Vec<EdgeId> {
    ash.hyperedges().map(|e| e.id()).collect()
}

/// Recomputed star and time indices by full scan, for coherence checks.
pub fn rescan_indices(
    ash: &Ash,
) -> (
    BTreeMap<NodeId, BTreeSet<EdgeId>>,
    BTreeMap<i64, BTreeSet<EdgeId>>,
) {
    let mut star: BTreeMap<NodeId, BTreeSet<EdgeId>> = BTreeMap::new();
    let mut time: BTreeMap<i64, BTreeSet<EdgeId>> = BTreeMap::new();
    for edge in ash.hyperedges() {
        for &u in edge.nodes() {
            star.entry(u).or_default().insert(edge.id());
        }
        for t in edge.presence().iter_instants() {
            time.entry(t).or_default().insert(edge.id());
        }
    }
    (star, time)
}

/// Convenience: set of labelled values seen on an attribute, for relabeling
/// tests.
pub fn relabel(ash: &Ash, mapping: &HashMap<String, String>) -> Ash {
    let mut out = ash.clone();
    let nodes: Vec<NodeId> = ash.node_ids().collect();
    for u in nodes {
        let Some(profile) = ash.node_profile(u) else {
            continue;
        };
        let spans: Vec<(String, i64, i64, String)> = profile
            .iter()
            .flat_map(|(attr, spans)| {
                spans
                    .iter()
                    .map(move |s| (attr.to_string(), s.lo, s.hi, s.value.clone()))
            })
            .collect();
        for (attr, lo, hi, value) in spans {
            let renamed = mapping.get(&value).cloned().unwrap_or(value);
            out.set_attribute(u, &attr, (lo, hi), &renamed).unwrap();
        }
    }
    // Rebuild from a document so stale domain entries vanish.
    ash_core::io::from_document(&ash_core::io::to_document(&out)).unwrap()
}

pub fn assert_close(a: f64, b: f64, tol: f64, context: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{context}: {a} vs {b} differ by {}",
        (a - b).abs()
    );
}

/// Drains undefined-measure errors to `None`, propagating real errors.
/// A generated hypergraph may have no labelled node at all, in which case
/// the attribute is unregistered; that also counts as undefined here.
pub fn defined(result: ash_core::Result<f64>) -> Option<f64> {
    match result {
        Ok(v) => Some(v),
        Err(ash_core::AshError::UndefinedMeasure(_)) => None,
        Err(ash_core::AshError::UnknownAttribute(_)) => None,
        Err(other) => panic!("unexpected error: {other}"),
    }
}

pub type StateSet = HashSet<(i64, EdgeId)>;
