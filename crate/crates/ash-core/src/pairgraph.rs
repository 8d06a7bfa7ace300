//! Minimal undirected pairwise graph, shared by the transform, s-analysis
//! and inference machinery. Vertices are any ordered copyable id type
//! (node ids, hyperedge ids).

use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairGraph<V> {
    adj: BTreeMap<V, BTreeSet<V>>,
}

impl<V: Ord + Copy> PairGraph<V> {
    pub fn new() -> Self {
        PairGraph {
            adj: BTreeMap::new(),
        }
    }

    pub fn add_node(&mut self, v: V) {
        self.adj.entry(v).or_default();
    }

    /// Undirected edge; self-loops are ignored.
    pub fn add_edge(&mut self, u: V, v: V) {
        if u == v {
            return;
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn contains_node(&self, v: V) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: V, v: V) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn nodes(&self) -> impl Iterator<Item = V> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: V) -> usize {
        self.adj.get(&v).map_or(0, |n| n.len())
    }

    /// Edges with endpoints ordered ascending, each reported once.
    pub fn edges(&self) -> impl Iterator<Item = (V, V)> + '_ {
        self.adj.iter().flat_map(|(&u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|n| n.len()).sum::<usize>() / 2
    }

    /// Connected components, each a sorted vertex set; includes isolated
    /// vertices.
    pub fn connected_components(&self) -> Vec<BTreeSet<V>> {
        let mut seen: BTreeSet<V> = BTreeSet::new();
        let mut components = Vec::new();
        for v in self.adj.keys().copied() {
            if seen.contains(&v) {
                continue;
            }
            let mut component = BTreeSet::new();
            let mut frontier = vec![v];
            while let Some(x) = frontier.pop() {
                if !component.insert(x) {
                    continue;
                }
                seen.insert(x);
                frontier.extend(self.neighbors(x).filter(|n| !component.contains(n)));
            }
            components.push(component);
        }
        components
    }

    /// Breadth-first hop distance from `source` to `target`.
    pub fn bfs_distance(&self, source: V, target: V) -> Option<usize> {
        if !self.contains_node(source) || !self.contains_node(target) {
            return None;
        }
        if source == target {
            return Some(0);
        }
        let mut seen = BTreeSet::from([source]);
        let mut frontier = vec![source];
        let mut dist = 0;
        while !frontier.is_empty() {
            dist += 1;
            let mut next = Vec::new();
            for v in frontier {
                for n in self.neighbors(v) {
                    if n == target {
                        return Some(dist);
                    }
                    if seen.insert(n) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}
