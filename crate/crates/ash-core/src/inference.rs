//! Building a stream hypergraph from a timestamped dyadic contact stream.
//!
//! Interactions are binned into fixed-width windows; each window becomes
//! one instant holding a dyadic snapshot. High-order structure is then
//! inferred per snapshot, either by promoting fully connected cliques to
//! hyperedges or by taking every maximal clique.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{AshError, Result};
use crate::model::{Ash, NodeId};

/// One undirected contact between two distinct nodes at a raw timestamp.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Interaction {
    pub u: NodeId,
    pub v: NodeId,
    pub ts: i64,
}

/// Fixed-width aggregation window.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    width: i64,
    origin: i64,
}

impl WindowSpec {
    pub fn new(width: i64, origin: i64) -> Result<Self> {
        if width <= 0 {
            return Err(AshError::InvalidArgument(format!(
                "window width must be positive, got {width}"
            )));
        }
        Ok(WindowSpec { width, origin })
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Instant index of a timestamp: `floor((ts - origin) / width)`.
    pub fn instant_of(&self, ts: i64) -> Result<i64> {
        if ts < self.origin {
            return Err(AshError::TimestampBeforeOrigin {
                ts,
                origin: self.origin,
            });
        }
        Ok((ts - self.origin) / self.width)
    }
}

/// Distinct dyads observed in one window, endpoints ordered ascending.
pub type DyadSnapshot = BTreeSet<(NodeId, NodeId)>;

/// How hyperedges are inferred from each snapshot.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InferenceMethod {
    /// Promote maximal cliques of at least `min_size` nodes; leftover dyads
    /// stay as 2-hyperedges.
    PromoteCliques,
    /// Emit every maximal clique of at least two nodes.
    MaximalCliques,
}

impl std::str::FromStr for InferenceMethod {
    type Err = AshError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "promote" => Ok(InferenceMethod::PromoteCliques),
            "maximal" => Ok(InferenceMethod::MaximalCliques),
            other => Err(AshError::InvalidArgument(format!(
                "unknown method \"{other}\""
            ))),
        }
    }
}

/// Knobs for [`build_ash`].
#[derive(Copy, Clone, Debug)]
pub struct InferenceOptions {
    /// Smallest clique size eligible for promotion (promote method only).
    pub min_size: usize,
    /// Upper bound on maximal cliques per snapshot; exceeding it is an
    /// error rather than an unbounded enumeration.
    pub clique_cap: Option<usize>,
}

impl Default for InferenceOptions {
    fn default() -> Self {
        InferenceOptions {
            min_size: 2,
            clique_cap: None,
        }
    }
}

/// One attribute assignment destined for a node profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileAssignment {
    pub node: NodeId,
    pub attribute: String,
    pub lo: i64,
    pub hi: i64,
    pub value: String,
}

/// Bins a stream into per-instant dyadic snapshots. The resulting instant
/// axis is `[0, max index]`; windows without interactions are empty
/// snapshots.
pub fn aggregate_windows(stream: &[Interaction], spec: &WindowSpec) -> Result<Vec<DyadSnapshot>> {
    if stream.is_empty() {
        return Err(AshError::EmptyStream);
    }
    let mut by_instant: BTreeMap<i64, DyadSnapshot> = BTreeMap::new();
    let mut max_instant = 0;
    for interaction in stream {
        let i = spec.instant_of(interaction.ts)?;
        max_instant = max_instant.max(i);
        let (a, b) = if interaction.u < interaction.v {
            (interaction.u, interaction.v)
        } else {
            (interaction.v, interaction.u)
        };
        by_instant.entry(i).or_default().insert((a, b));
    }
    Ok((0..=max_instant)
        .map(|i| by_instant.remove(&i).unwrap_or_default())
        .collect())
}

fn snapshot_adjacency(snapshot: &DyadSnapshot) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for &(u, v) in snapshot {
        adj.entry(u).or_default().insert(v);
        adj.entry(v).or_default().insert(u);
    }
    adj
}

/// Bron–Kerbosch with pivoting over a degeneracy ordering. Cliques of a
/// single vertex are not reported. `cap` bounds the number of emitted
/// cliques; exceeding it aborts with an error.
fn maximal_cliques(
    adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    cap: Option<usize>,
) -> Result<Vec<BTreeSet<NodeId>>> {
    fn expand(
        adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
        r: &mut BTreeSet<NodeId>,
        mut p: BTreeSet<NodeId>,
        mut x: BTreeSet<NodeId>,
        cap: Option<usize>,
        out: &mut Vec<BTreeSet<NodeId>>,
    ) -> Result<()> {
        if p.is_empty() && x.is_empty() {
            if r.len() >= 2 {
                if cap.is_some_and(|c| out.len() >= c) {
                    return Err(AshError::CliqueCapExceeded { cap: cap.unwrap() });
                }
                out.push(r.clone());
            }
            return Ok(());
        }
        // Pivot on the candidate with the most neighbors in P.
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|v| (adj[v].intersection(&p).count(), std::cmp::Reverse(*v)))
            .expect("P or X is non-empty");
        let todo: Vec<NodeId> = p.difference(&adj[&pivot]).copied().collect();
        for v in todo {
            let neighbors = &adj[&v];
            r.insert(v);
            expand(
                adj,
                r,
                p.intersection(neighbors).copied().collect(),
                x.intersection(neighbors).copied().collect(),
                cap,
                out,
            )?;
            r.remove(&v);
            p.remove(&v);
            x.insert(v);
        }
        Ok(())
    }

    // Degeneracy ordering: repeatedly remove a minimum-degree vertex.
    let mut degrees: BTreeMap<NodeId, usize> = adj.iter().map(|(&v, n)| (v, n.len())).collect();
    let mut removed: BTreeSet<NodeId> = BTreeSet::new();
    let mut order = Vec::with_capacity(adj.len());
    while removed.len() < adj.len() {
        let &v = degrees
            .iter()
            .filter(|(v, _)| !removed.contains(v))
            .min_by_key(|(&v, &d)| (d, v))
            .map(|(v, _)| v)
            .expect("vertices remain");
        order.push(v);
        removed.insert(v);
        for n in &adj[&v] {
            if let Some(d) = degrees.get_mut(n) {
                *d = d.saturating_sub(1);
            }
        }
    }

    let position: BTreeMap<NodeId, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Vec::new();
    for &v in &order {
        let later: BTreeSet<NodeId> = adj[&v]
            .iter()
            .copied()
            .filter(|n| position[n] > position[&v])
            .collect();
        let earlier: BTreeSet<NodeId> = adj[&v]
            .iter()
            .copied()
            .filter(|n| position[n] < position[&v])
            .collect();
        let mut r = BTreeSet::from([v]);
        expand(adj, &mut r, later, earlier, cap, &mut out)?;
    }
    out.sort();
    Ok(out)
}

/// Promotes every maximal clique of at least `min_size` nodes to a
/// hyperedge; dyads not inside any promoted clique stay as 2-hyperedges.
pub fn promote_cliques(
    snapshot: &DyadSnapshot,
    min_size: usize,
    cap: Option<usize>,
) -> Result<Vec<BTreeSet<NodeId>>> {
    if min_size < 2 {
        return Err(AshError::InvalidArgument(format!(
            "minimum clique size must be at least 2, got {min_size}"
        )));
    }
    let adj = snapshot_adjacency(snapshot);
    let cliques = maximal_cliques(&adj, cap)?;
    let mut out: BTreeSet<BTreeSet<NodeId>> = cliques
        .into_iter()
        .filter(|c| c.len() >= min_size)
        .collect();
    for &(u, v) in snapshot {
        let covered = out.iter().any(|c| c.contains(&u) && c.contains(&v));
        if !covered {
            out.insert(BTreeSet::from([u, v]));
        }
    }
    Ok(out.into_iter().collect())
}

/// Every maximal clique of at least two nodes, one hyperedge each.
pub fn maximal_clique_hyperedges(
    snapshot: &DyadSnapshot,
    cap: Option<usize>,
) -> Result<Vec<BTreeSet<NodeId>>> {
    maximal_cliques(&snapshot_adjacency(snapshot), cap)
}

/// Aggregates a stream, infers hyperedges per instant with the chosen
/// method, and attaches profile assignments. Assignments whose node never
/// appears are skipped with a warning; assignment intervals are clipped to
/// the built axis. Output is deterministic for identical inputs.
pub fn build_ash(
    stream: &[Interaction],
    spec: &WindowSpec,
    method: InferenceMethod,
    profiles: &[ProfileAssignment],
    options: &InferenceOptions,
) -> Result<(Ash, Vec<String>)> {
    let snapshots = aggregate_windows(stream, spec)?;
    let mut ash = Ash::new(0, snapshots.len() as i64 - 1)?;
    for (i, snapshot) in snapshots.iter().enumerate() {
        if snapshot.is_empty() {
            continue;
        }
        let hyperedges = match method {
            InferenceMethod::PromoteCliques => {
                promote_cliques(snapshot, options.min_size, options.clique_cap)?
            }
            InferenceMethod::MaximalCliques => {
                maximal_clique_hyperedges(snapshot, options.clique_cap)?
            }
        };
        let t = i as i64;
        for members in hyperedges {
            let nodes: Vec<NodeId> = members.into_iter().collect();
            ash.add_hyperedge(&nodes, (t, t))?;
        }
    }

    let mut warnings = Vec::new();
    let axis = ash.axis();
    for assignment in profiles {
        if !ash.contains_node(assignment.node) {
            warnings.push(format!(
                "profile row for unknown node {} skipped",
                assignment.node
            ));
            continue;
        }
        let lo = assignment.lo.max(axis.start());
        let hi = assignment.hi.min(axis.end());
        if lo > hi {
            warnings.push(format!(
                "profile row for node {} lies outside the axis and was skipped",
                assignment.node
            ));
            continue;
        }
        ash.set_attribute(
            assignment.node,
            &assignment.attribute,
            (lo, hi),
            &assignment.value,
        )?;
    }
    Ok((ash, warnings))
}
