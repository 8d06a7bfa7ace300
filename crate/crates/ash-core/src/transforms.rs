//! Structure-preserving views: bipartite projection, dual hypergraph and
//! clique expansion. Each works on the flattened hypergraph or, given an
//! instant, on the hyperedges active there. Attributes are not carried
//! through.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::model::{Ash, EdgeId, NodeId};
use crate::pairgraph::PairGraph;

/// Node-to-hyperedge membership graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteView {
    /// Nodes incident to at least one included hyperedge, sorted.
    pub left: Vec<NodeId>,
    /// Included hyperedges, sorted.
    pub right: Vec<EdgeId>,
    /// Membership pairs `(node, hyperedge)`, sorted.
    pub edges: Vec<(NodeId, EdgeId)>,
}

impl BipartiteView {
    pub fn node_degree(&self, u: NodeId) -> usize {
        self.edges.iter().filter(|&&(n, _)| n == u).count()
    }

    pub fn edge_degree(&self, e: EdgeId) -> usize {
        self.edges.iter().filter(|&&(_, m)| m == e).count()
    }
}

fn included_edges(ash: &Ash, at: Option<i64>) -> Result<Vec<EdgeId>> {
    match at {
        Some(t) => {
            ash.axis().check_instant(t)?;
            let mut ids: Vec<EdgeId> = ash.edges_at(t).collect();
            ids.sort_unstable();
            Ok(ids)
        }
        None => Ok(ash.hyperedges().map(|e| e.id()).collect()),
    }
}

/// Membership bipartite graph over the flattened hypergraph, or over the
/// hyperedges active at `at`.
pub fn bipartite_projection(ash: &Ash, at: Option<i64>) -> Result<BipartiteView> {
    let right = included_edges(ash, at)?;
    let mut left: BTreeSet<NodeId> = BTreeSet::new();
    let mut edges = Vec::new();
    for &e in &right {
        for &u in ash.hyperedge(e)?.nodes() {
            left.insert(u);
            edges.push((u, e));
        }
    }
    edges.sort_unstable();
    Ok(BipartiteView {
        left: left.into_iter().collect(),
        right,
        edges,
    })
}

/// Dual hypergraph: one dual hyperedge per node, holding the hyperedges
/// incident to it. Nodes incident to nothing are omitted.
pub fn dual(ash: &Ash, at: Option<i64>) -> Result<BTreeMap<NodeId, BTreeSet<EdgeId>>> {
    let included = included_edges(ash, at)?;
    let mut out: BTreeMap<NodeId, BTreeSet<EdgeId>> = BTreeMap::new();
    for e in included {
        for &u in ash.hyperedge(e)?.nodes() {
            out.entry(u).or_default().insert(e);
        }
    }
    Ok(out)
}

/// Pairwise graph with an edge between every node pair co-appearing in an
/// included hyperedge.
pub fn clique_expansion(ash: &Ash, at: Option<i64>) -> Result<PairGraph<NodeId>> {
    let included = included_edges(ash, at)?;
    let mut graph = PairGraph::new();
    for e in included {
        let nodes = ash.hyperedge(e)?.nodes();
        for (i, &u) in nodes.iter().enumerate() {
            graph.add_node(u);
            for &v in &nodes[i + 1..] {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(graph)
}
