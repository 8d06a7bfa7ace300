//! File formats: the `ash-1` JSON document, interaction and profile CSV
//! input, and plot-ready CSV output.
//!
//! Document writes are canonical — node ids, hyperedge ordinals and
//! intervals all sorted — so writing the same hypergraph twice yields
//! byte-identical files, and `read(write(ash))` reproduces the structure
//! exactly. Loading validates every structural invariant and names the
//! violated one on failure.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{AshError, Result};
use crate::inference::{Interaction, ProfileAssignment};
use crate::model::{Ash, NodeId};
use crate::profiles::ValueSpan;
use crate::timeline::PresenceTimeline;

pub const SCHEMA_VERSION: &str = "ash-1";

/// Attribute rows of one node: attribute -> [lo, hi, value] entries.
pub type ProfileRows = BTreeMap<String, Vec<(i64, i64, String)>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AshDocument {
    pub schema_version: String,
    pub time: TimeDocument,
    pub nodes: Vec<NodeDocument>,
    pub hyperedges: Vec<HyperedgeDocument>,
    /// Keyed by node id in decimal string form.
    pub profiles: BTreeMap<String, ProfileRows>,
}

#[derive(Copy, Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TimeDocument {
    pub start: i64,
    pub end: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NodeDocument {
    pub id: u64,
    pub presence: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HyperedgeDocument {
    pub id: String,
    pub nodes: Vec<u64>,
    pub presence: Vec<(i64, i64)>,
}

/// Canonical document for a hypergraph.
pub fn to_document(ash: &Ash) -> AshDocument {
    let axis = ash.axis();
    let nodes = ash
        .node_ids()
        .map(|u| NodeDocument {
            id: u.0,
            presence: ash
                .node_presence(u)
                .expect("known node")
                .intervals()
                .to_vec(),
        })
        .collect();
    let hyperedges = ash
        .hyperedges()
        .map(|edge| HyperedgeDocument {
            id: edge.id().to_string(),
            nodes: edge.nodes().iter().map(|n| n.0).collect(),
            presence: edge.presence().intervals().to_vec(),
        })
        .collect();
    let mut profiles = BTreeMap::new();
    for u in ash.node_ids() {
        let Some(profile) = ash.node_profile(u) else {
            continue;
        };
        if profile.is_empty() {
            continue;
        }
        let mut attrs = ProfileRows::new();
        for (attr, spans) in profile.iter() {
            attrs.insert(
                attr.to_string(),
                spans
                    .iter()
                    .map(|s| (s.lo, s.hi, s.value.clone()))
                    .collect(),
            );
        }
        profiles.insert(u.0.to_string(), attrs);
    }
    AshDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        time: TimeDocument {
            start: axis.start(),
            end: axis.end(),
        },
        nodes,
        hyperedges,
        profiles,
    }
}

fn validation(msg: impl Into<String>) -> AshError {
    AshError::Validation(msg.into())
}

/// Reconstructs a hypergraph, validating every structural invariant.
pub fn from_document(doc: &AshDocument) -> Result<Ash> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(AshError::UnsupportedVersion(doc.schema_version.clone()));
    }
    let mut ash = Ash::new(doc.time.start, doc.time.end)?;
    let axis = ash.axis();

    let mut prev_node: Option<u64> = None;
    for node in &doc.nodes {
        if prev_node.is_some_and(|p| p >= node.id) {
            return Err(validation(format!(
                "node ids must be strictly ascending around {}",
                node.id
            )));
        }
        prev_node = Some(node.id);
        let presence = PresenceTimeline::from_canonical(node.presence.clone())
            .map_err(|e| validation(format!("node {}: {e}", node.id)))?;
        if !presence.within_axis(&axis) {
            return Err(validation(format!(
                "node {} presence leaves the time axis",
                node.id
            )));
        }
        ash.set_node_presence_raw(NodeId(node.id), presence);
    }

    for (ordinal, edge) in doc.hyperedges.iter().enumerate() {
        let expected = format!("e{ordinal}");
        if edge.id != expected {
            return Err(validation(format!(
                "hyperedge id \"{}\" out of order, expected \"{expected}\"",
                edge.id
            )));
        }
        if edge.nodes.len() < 2 {
            return Err(validation(format!(
                "hyperedge {} has fewer than two nodes",
                edge.id
            )));
        }
        if !edge.nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(validation(format!(
                "hyperedge {} nodes must be strictly ascending",
                edge.id
            )));
        }
        let presence = PresenceTimeline::from_canonical(edge.presence.clone())
            .map_err(|e| validation(format!("hyperedge {}: {e}", edge.id)))?;
        if presence.is_empty() {
            return Err(validation(format!(
                "hyperedge {} has an empty presence",
                edge.id
            )));
        }
        if !presence.within_axis(&axis) {
            return Err(validation(format!(
                "hyperedge {} presence leaves the time axis",
                edge.id
            )));
        }
        let members: Vec<NodeId> = edge.nodes.iter().map(|&n| NodeId(n)).collect();
        for &u in &members {
            let node_presence = ash.node_presence(u).map_err(|_| {
                validation(format!("hyperedge {} references unknown node {u}", edge.id))
            })?;
            if !node_presence.covers(&presence) {
                return Err(validation(format!(
                    "hyperedge {} is active while its node {u} is absent",
                    edge.id
                )));
            }
        }
        if ash.node_set_index().contains_key(&members) {
            return Err(validation(format!(
                "hyperedge {} duplicates another hyperedge's node set",
                edge.id
            )));
        }
        ash.insert_edge_raw(members, presence);
    }

    for (node_key, attrs) in &doc.profiles {
        let id: u64 = node_key
            .parse()
            .map_err(|_| validation(format!("profile key \"{node_key}\" is not a node id")))?;
        let u = NodeId(id);
        if !ash.contains_node(u) {
            return Err(validation(format!("profile for unknown node {u}")));
        }
        for (attr, rows) in attrs {
            if attr.is_empty() {
                return Err(validation(format!("node {u} has an empty attribute name")));
            }
            let mut prev_hi: Option<i64> = None;
            let mut spans = Vec::with_capacity(rows.len());
            for &(lo, hi, ref value) in rows {
                if lo > hi {
                    return Err(validation(format!(
                        "node {u} attribute \"{attr}\": interval [{lo}, {hi}] is empty"
                    )));
                }
                if !axis.contains_interval(lo, hi) {
                    return Err(validation(format!(
                        "node {u} attribute \"{attr}\": interval [{lo}, {hi}] leaves the time axis"
                    )));
                }
                if prev_hi.is_some_and(|p| lo <= p) {
                    return Err(validation(format!(
                        "node {u} attribute \"{attr}\": intervals overlap or are unsorted"
                    )));
                }
                prev_hi = Some(hi);
                spans.push(ValueSpan {
                    lo,
                    hi,
                    value: value.clone(),
                });
            }
            ash.profiles
                .entry(u)
                .or_default()
                .insert_spans_raw(attr.clone(), spans);
        }
    }
    ash.rebuild_domains();
    Ok(ash)
}

/// Canonical, newline-terminated JSON text.
pub fn ash_to_json_string(ash: &Ash) -> String {
    let mut text = serde_json::to_string_pretty(&to_document(ash)).expect("document serializes");
    text.push('\n');
    text
}

pub fn ash_from_json_str(text: &str) -> Result<Ash> {
    let doc: AshDocument = serde_json::from_str(text)?;
    from_document(&doc)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| annotate(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| annotate(path, e))
}

fn annotate(path: &Path, e: std::io::Error) -> AshError {
    AshError::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

pub fn write_ash_json(ash: &Ash, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &ash_to_json_string(ash))
}

pub fn read_ash_json(path: impl AsRef<Path>) -> Result<Ash> {
    ash_from_json_str(&read_file(path.as_ref())?)
}

fn parse_error(line: usize, msg: impl Into<String>) -> AshError {
    AshError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses interaction CSV text with header `u,v,ts`. Row order and
/// duplicate rows are preserved.
pub fn parse_interactions_csv(text: &str) -> Result<Vec<Interaction>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == "u,v,ts" => {}
        Some((_, header)) => {
            return Err(parse_error(
                1,
                format!("expected header \"u,v,ts\", got \"{header}\""),
            ))
        }
        None => return Err(parse_error(1, "missing header \"u,v,ts\"")),
    }
    let mut out = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim_end();
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_error(
                line,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        }
        let u: u64 = fields[0]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid node id \"{}\"", fields[0])))?;
        let v: u64 = fields[1]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid node id \"{}\"", fields[1])))?;
        let ts: i64 = fields[2]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid timestamp \"{}\"", fields[2])))?;
        if u == v {
            return Err(AshError::SelfLoop { line, node: u });
        }
        out.push(Interaction {
            u: NodeId(u),
            v: NodeId(v),
            ts,
        });
    }
    Ok(out)
}

pub fn read_interactions_csv(path: impl AsRef<Path>) -> Result<Vec<Interaction>> {
    parse_interactions_csv(&read_file(path.as_ref())?)
}

/// Parses profile CSV text with header `node,attribute,start,end,value`.
/// Rows apply in file order (last write wins on overlaps).
pub fn parse_profiles_csv(text: &str) -> Result<Vec<ProfileAssignment>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == "node,attribute,start,end,value" => {}
        Some((_, header)) => {
            return Err(parse_error(
                1,
                format!("expected header \"node,attribute,start,end,value\", got \"{header}\""),
            ))
        }
        None => {
            return Err(parse_error(
                1,
                "missing header \"node,attribute,start,end,value\"",
            ))
        }
    }
    let mut out = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim_end();
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_error(
                line,
                format!("expected 5 fields, got {}", fields.len()),
            ));
        }
        let node: u64 = fields[0]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid node id \"{}\"", fields[0])))?;
        if fields[1].is_empty() {
            return Err(parse_error(line, "empty attribute name"));
        }
        let lo: i64 = fields[2]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid start instant \"{}\"", fields[2])))?;
        let hi: i64 = fields[3]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid end instant \"{}\"", fields[3])))?;
        if lo > hi {
            return Err(parse_error(line, format!("interval [{lo}, {hi}] is empty")));
        }
        out.push(ProfileAssignment {
            node: NodeId(node),
            attribute: fields[1].to_string(),
            lo,
            hi,
            value: fields[4].to_string(),
        });
    }
    Ok(out)
}

pub fn read_profiles_csv(path: impl AsRef<Path>) -> Result<Vec<ProfileAssignment>> {
    parse_profiles_csv(&read_file(path.as_ref())?)
}

/// One `t,group,value` output row.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotRow {
    pub t: i64,
    pub group: String,
    pub value: f64,
}

impl PlotRow {
    pub fn new(t: i64, group: impl Into<String>, value: f64) -> Self {
        PlotRow {
            t,
            group: group.into(),
            value,
        }
    }
}

fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Plot CSV text: header `t,group,value`, rows sorted by `(t, group)`,
/// values printed with six decimal places (ties round half to even).
pub fn plot_csv_string(rows: &[PlotRow]) -> String {
    let mut sorted: Vec<&PlotRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (a.t, &a.group).cmp(&(b.t, &b.group)));
    let mut out = String::from("t,group,value\n");
    for row in sorted {
        out.push_str(&format!(
            "{},{},{:.6}\n",
            row.t,
            csv_field(&row.group),
            row.value
        ));
    }
    out
}

pub fn write_plot_csv(rows: &[PlotRow], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &plot_csv_string(rows))
}

/// Edge-list CSV text: header `src,dst`, rows sorted.
pub fn edges_csv_string(pairs: &[(String, String)]) -> String {
    let mut sorted: Vec<&(String, String)> = pairs.iter().collect();
    sorted.sort();
    let mut out = String::from("src,dst\n");
    for (src, dst) in sorted {
        out.push_str(&format!("{},{}\n", csv_field(src), csv_field(dst)));
    }
    out
}

pub fn write_edges_csv(pairs: &[(String, String)], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &edges_csv_string(pairs))
}
