//! The attributed stream hypergraph container and its core operations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{AshError, Result};
use crate::profiles::NodeProfile;
use crate::timeline::{PresenceTimeline, TimeAxis};

/// Node identifier, unique within one [`Ash`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Hyperedge handle. Renders as `e<ordinal>`, the stable string id used in
/// documents and on the command line.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(u32);

impl EdgeId {
    pub fn index(&self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One hyperedge per distinct node set, active on a presence timeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalHyperedge {
    id: EdgeId,
    nodes: Vec<NodeId>,
    presence: PresenceTimeline,
}

impl TemporalHyperedge {
    pub fn id(&self) -> EdgeId {
        self.id
    }

    /// Member nodes, sorted ascending and deduplicated.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn presence(&self) -> &PresenceTimeline {
        &self.presence
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains_node(&self, u: NodeId) -> bool {
        self.nodes.binary_search(&u).is_ok()
    }

    pub fn active_at(&self, t: i64) -> bool {
        self.presence.contains(t)
    }

    /// Size of the node-set intersection with another hyperedge.
    pub fn intersection_size(&self, other: &TemporalHyperedge) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.nodes.len() && j < other.nodes.len() {
            match self.nodes[i].cmp(&other.nodes[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// Attributed stream hypergraph: a time axis, node presences, temporal
/// hyperedges and node attribute profiles, with node-to-star and
/// time-to-edge indices kept coherent under every mutation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ash {
    axis: Option<TimeAxis>,
    node_presence: BTreeMap<NodeId, PresenceTimeline>,
    edges: Vec<TemporalHyperedge>,
    node_set_index: BTreeMap<Vec<NodeId>, EdgeId>,
    star_index: BTreeMap<NodeId, BTreeSet<EdgeId>>,
    time_index: HashMap<i64, BTreeSet<EdgeId>>,
    pub(crate) profiles: BTreeMap<NodeId, NodeProfile>,
    pub(crate) domains: BTreeMap<String, BTreeSet<String>>,
}

impl Ash {
    /// Empty hypergraph over the closed instant interval `[start, end]`.
    pub fn new(start: i64, end: i64) -> Result<Ash> {
        let axis = TimeAxis::new(start, end)?;
        Ok(Ash {
            axis: Some(axis),
            ..Ash::default()
        })
    }

    pub fn axis(&self) -> TimeAxis {
        self.axis.expect("Ash is always constructed with an axis")
    }

    /// Adds (or extends) the hyperedge over `nodes`, active during
    /// `interval`. There is exactly one hyperedge per distinct node set;
    /// repeating a call merges the interval into its presence. Member node
    /// presences are extended so that a hyperedge is never active at an
    /// instant where one of its nodes is absent.
    pub fn add_hyperedge(&mut self, nodes: &[NodeId], interval: (i64, i64)) -> Result<EdgeId> {
        let (lo, hi) = interval;
        self.axis().check_interval(lo, hi)?;
        let mut members: Vec<NodeId> = nodes.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.len() < 2 {
            return Err(AshError::TooFewNodes(members.len()));
        }

        let id = match self.node_set_index.get(&members) {
            Some(&id) => {
                self.edges[id.index()].presence.insert(lo, hi);
                id
            }
            None => {
                let id = EdgeId(self.edges.len() as u32);
                let mut presence = PresenceTimeline::new();
                presence.insert(lo, hi);
                self.edges.push(TemporalHyperedge {
                    id,
                    nodes: members.clone(),
                    presence,
                });
                self.node_set_index.insert(members.clone(), id);
                for &u in &members {
                    self.star_index.entry(u).or_default().insert(id);
                }
                id
            }
        };

        for &u in &members {
            self.node_presence.entry(u).or_default().insert(lo, hi);
        }
        for t in lo..=hi {
            self.time_index.entry(t).or_default().insert(id);
        }
        Ok(id)
    }

    /// Temporal star `D(t, u)`: the hyperedges containing `u` that are
    /// active at `t`. Empty when `u` is absent at `t`.
    pub fn temporal_star(&self, t: i64, u: NodeId) -> Result<BTreeSet<EdgeId>> {
        self.axis().check_instant(t)?;
        let star = self.star_index.get(&u).ok_or(AshError::UnknownNode(u))?;
        Ok(star
            .iter()
            .copied()
            .filter(|e| self.edges[e.index()].active_at(t))
            .collect())
    }

    /// Fraction of the axis during which `u` is present.
    pub fn node_contribution(&self, u: NodeId) -> Result<f64> {
        let presence = self.node_presence(u)?;
        Ok(presence.instant_count() as f64 / self.axis().instant_count() as f64)
    }

    /// Fraction of the axis during which the hyperedge is active.
    pub fn hyperedge_contribution(&self, e: EdgeId) -> Result<f64> {
        let edge = self.hyperedge(e)?;
        Ok(edge.presence().instant_count() as f64 / self.axis().instant_count() as f64)
    }

    /// Jaccard overlap of two nodes' presence timelines; 1.0 when both are
    /// empty.
    pub fn uniformity(&self, u: NodeId, v: NodeId) -> Result<f64> {
        let a = self.node_presence(u)?;
        let b = self.node_presence(v)?;
        let union = a.union_count(b);
        if union == 0 {
            return Ok(1.0);
        }
        Ok(a.intersection_count(b) as f64 / union as f64)
    }

    /// Sub-hypergraph restricted to the instants `[lo, hi]`: presences are
    /// clipped, hyperedges left with no active instant are dropped (as are
    /// nodes), and surviving hyperedges are renumbered in original order.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<Ash> {
        if lo > hi {
            return Err(AshError::InvalidArgument(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        let axis = self.axis();
        if hi < axis.start() || lo > axis.end() {
            return Err(AshError::EmptySlice {
                lo,
                hi,
                start: axis.start(),
                end: axis.end(),
            });
        }
        let mut out = Ash::new(lo, hi)?;
        for (&u, presence) in &self.node_presence {
            let clipped = presence.clipped(lo, hi);
            if !clipped.is_empty() {
                out.node_presence.insert(u, clipped);
            }
        }
        for edge in &self.edges {
            let clipped = edge.presence.clipped(lo, hi);
            if !clipped.is_empty() {
                out.insert_edge_raw(edge.nodes.clone(), clipped);
            }
        }
        for (&u, profile) in &self.profiles {
            if !out.node_presence.contains_key(&u) {
                continue;
            }
            let restricted = profile.clipped(lo, hi);
            if !restricted.is_empty() {
                out.profiles.insert(u, restricted);
            }
        }
        out.rebuild_domains();
        Ok(out)
    }

    /// Sub-hypergraph induced by a node set: keeps hyperedges whose node
    /// set is contained in `keep`, plus the presences and profiles of the
    /// kept nodes.
    pub fn induced_sub(&self, keep: &BTreeSet<NodeId>) -> Ash {
        let axis = self.axis();
        let mut out = Ash::new(axis.start(), axis.end()).expect("axis already valid");
        for (&u, presence) in &self.node_presence {
            if keep.contains(&u) {
                out.node_presence.insert(u, presence.clone());
            }
        }
        for edge in &self.edges {
            if edge.nodes.iter().all(|u| keep.contains(u)) {
                out.insert_edge_raw(edge.nodes.clone(), edge.presence.clone());
            }
        }
        for (&u, profile) in &self.profiles {
            if keep.contains(&u) {
                out.profiles.insert(u, profile.clone());
            }
        }
        out.rebuild_domains();
        out
    }

    /// The temporally flattened hypergraph: the distinct node sets that are
    /// ever active, with time discarded.
    pub fn flatten(&self) -> BTreeSet<Vec<NodeId>> {
        self.edges.iter().map(|e| e.nodes.clone()).collect()
    }

    /// True when every known node is present at every instant of the axis.
    pub fn is_link_stream(&self) -> bool {
        let total = self.axis().instant_count();
        self.node_presence
            .values()
            .all(|p| p.instant_count() == total)
    }

    // ---- accessors -----------------------------------------------------

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_presence.keys().copied()
    }

    pub fn contains_node(&self, u: NodeId) -> bool {
        self.node_presence.contains_key(&u)
    }

    pub fn node_count(&self) -> usize {
        self.node_presence.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|W|`: total node-presence instants across the stream.
    pub fn temporal_node_count(&self) -> u64 {
        self.node_presence.values().map(|p| p.instant_count()).sum()
    }

    pub fn node_presence(&self, u: NodeId) -> Result<&PresenceTimeline> {
        self.node_presence.get(&u).ok_or(AshError::UnknownNode(u))
    }

    pub fn hyperedge(&self, e: EdgeId) -> Result<&TemporalHyperedge> {
        self.edges
            .get(e.index())
            .ok_or_else(|| AshError::UnknownHyperedge(e.to_string()))
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = &TemporalHyperedge> {
        self.edges.iter()
    }

    /// Resolves the string form `e<ordinal>` to a handle.
    pub fn resolve_edge(&self, id: &str) -> Result<EdgeId> {
        let unknown = || AshError::UnknownHyperedge(id.to_string());
        let ordinal: u32 = id
            .strip_prefix('e')
            .and_then(|rest| rest.parse().ok())
            .ok_or_else(unknown)?;
        if (ordinal as usize) < self.edges.len() {
            Ok(EdgeId(ordinal))
        } else {
            Err(unknown())
        }
    }

    /// Hyperedges active at instant `t`.
    pub fn edges_at(&self, t: i64) -> impl Iterator<Item = EdgeId> + '_ {
        self.time_index.get(&t).into_iter().flatten().copied()
    }

    /// Flattened star of `u`: every hyperedge containing it.
    pub fn star(&self, u: NodeId) -> Result<&BTreeSet<EdgeId>> {
        self.star_index.get(&u).ok_or(AshError::UnknownNode(u))
    }

    // ---- internal ------------------------------------------------------

    /// Inserts a hyperedge whose node set is already sorted, deduplicated
    /// and absent from the index, updating star and time indices. Node
    /// presences are the caller's responsibility.
    pub(crate) fn insert_edge_raw(
        &mut self,
        nodes: Vec<NodeId>,
        presence: PresenceTimeline,
    ) -> EdgeId {
        let id = EdgeId(self.edges.len() as u32);
        for &u in &nodes {
            self.star_index.entry(u).or_default().insert(id);
        }
        for t in presence.iter_instants() {
            self.time_index.entry(t).or_default().insert(id);
        }
        self.node_set_index.insert(nodes.clone(), id);
        self.edges.push(TemporalHyperedge {
            id,
            nodes,
            presence,
        });
        id
    }

    pub(crate) fn set_node_presence_raw(&mut self, u: NodeId, presence: PresenceTimeline) {
        self.node_presence.insert(u, presence);
    }

    pub(crate) fn node_set_index(&self) -> &BTreeMap<Vec<NodeId>, EdgeId> {
        &self.node_set_index
    }

    pub(crate) fn rebuild_domains(&mut self) {
        self.domains.clear();
        for profile in self.profiles.values() {
            for (attr, spans) in profile.iter() {
                let domain = self.domains.entry(attr.to_string()).or_default();
                for span in spans {
                    domain.insert(span.value.clone());
                }
            }
        }
    }
}

/// Test fixture used across the measure, s-analysis and transform tests:
/// four hyperedges on a four-instant axis.
#[cfg(test)]
pub(crate) fn fixture_f1() -> Ash {
    let mut ash = Ash::new(0, 3).unwrap();
    let nid = |vs: &[u64]| vs.iter().copied().map(NodeId).collect::<Vec<_>>();
    ash.add_hyperedge(&nid(&[1, 2, 3]), (0, 1)).unwrap();
    ash.add_hyperedge(&nid(&[3, 4]), (1, 2)).unwrap();
    ash.add_hyperedge(&nid(&[1, 2, 3, 4]), (2, 2)).unwrap();
    ash.add_hyperedge(&nid(&[4, 5]), (2, 3)).unwrap();
    ash
}
