//! Mixing-pattern measures over hyperedges, stars and the whole stream.
//!
//! Hyperedge-level measures (purity, entropy, characteristic value) look at
//! the attribute values of a hyperedge's members at one instant. Node-level
//! star homogeneity asks how often the hyperedges around a node are
//! dominated by the node's own value. Stream-level averages fold these over
//! active (instant, hyperedge) pairs or active nodes.
//!
//! Members with no assigned value are excluded from histograms; a hyperedge
//! whose members are all unassigned has undefined measures and is skipped
//! by averages.

use std::collections::BTreeMap;

use crate::error::{AshError, Result};
use crate::model::{Ash, EdgeId, NodeId};
use crate::pairgraph::PairGraph;

/// Counted attribute values within one context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelHistogram {
    counts: BTreeMap<String, usize>,
    total: usize,
}

impl LabelHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: &str) {
        self.add_count(value, 1);
    }

    pub fn add_count(&mut self, value: &str, count: usize) {
        if count == 0 {
            return;
        }
        *self.counts.entry(value.to_string()).or_insert(0) += count;
        self.total += count;
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> impl Iterator<Item = (&str, usize)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn max_count(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// Values attaining the maximum count, in lexicographic order.
    pub fn argmax(&self) -> Vec<&str> {
        let max = self.max_count();
        self.counts
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Relative frequency of the most frequent value.
    pub fn purity(&self) -> f64 {
        self.max_count() as f64 / self.total as f64
    }

    /// Shannon entropy in nats.
    pub fn entropy_nats(&self) -> f64 {
        self.counts
            .values()
            .map(|&c| {
                let p = c as f64 / self.total as f64;
                -p * p.ln()
            })
            .sum()
    }

    /// Entropy normalized by `ln(base)`, clamped to `[0, 1]`; zero when the
    /// base admits no disorder.
    pub fn normalized_entropy(&self, base: usize) -> f64 {
        if base <= 1 {
            return 0.0;
        }
        let h = self.entropy_nats();
        if h == 0.0 {
            return 0.0;
        }
        (h / (base as f64).ln()).clamp(0.0, 1.0)
    }
}

/// Most frequent attribute value within a hyperedge at an instant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicValue {
    /// Lexicographically smallest among tied maxima.
    pub value: String,
    pub frequency: usize,
    /// True when at least two values attain the maximum.
    pub tied: bool,
}

/// How a tied characteristic value matches a node's own label.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum TieRule {
    /// A hyperedge with a tied maximum matches when the node's value is
    /// among the tied values. The default.
    #[default]
    Inclusive,
    /// Only a unique maximum equal to the node's value matches.
    Strict,
}

/// Histogram of the assigned member labels of hyperedge `e` at instant `t`.
pub fn member_label_histogram(
    ash: &Ash,
    t: i64,
    e: EdgeId,
    attribute: &str,
) -> Result<LabelHistogram> {
    ash.axis().check_instant(t)?;
    let edge = ash.hyperedge(e)?;
    if !edge.active_at(t) {
        return Err(AshError::InactiveAtTime { edge: e, t });
    }
    if !ash.attribute_domain(attribute).is_some() {
        return Err(AshError::UnknownAttribute(attribute.to_string()));
    }
    let mut histogram = LabelHistogram::new();
    for &u in edge.nodes() {
        if let Some(profile) = ash.node_profile(u) {
            if let Some(value) = profile.value_at(attribute, t) {
                histogram.add(value);
            }
        }
    }
    Ok(histogram)
}

fn defined_histogram(ash: &Ash, t: i64, e: EdgeId, attribute: &str) -> Result<LabelHistogram> {
    let histogram = member_label_histogram(ash, t, e, attribute)?;
    if histogram.total() == 0 {
        return Err(AshError::UndefinedMeasure(format!(
            "no member of {e} has \"{attribute}\" assigned at instant {t}"
        )));
    }
    Ok(histogram)
}

/// Relative frequency of the most frequent member value of `e` at `t`.
pub fn hyperedge_purity(ash: &Ash, t: i64, e: EdgeId, attribute: &str) -> Result<f64> {
    Ok(defined_histogram(ash, t, e, attribute)?.purity())
}

/// Normalized entropy of the member-value distribution of `e` at `t`.
pub fn hyperedge_entropy(ash: &Ash, t: i64, e: EdgeId, attribute: &str) -> Result<f64> {
    let histogram = defined_histogram(ash, t, e, attribute)?;
    let base = ash.attribute_domain(attribute).map_or(0, |d| d.len());
    Ok(histogram.normalized_entropy(base))
}

/// Most frequent member value of `e` at `t`; ties break lexicographically
/// and are flagged.
pub fn characteristic_value(
    ash: &Ash,
    t: i64,
    e: EdgeId,
    attribute: &str,
) -> Result<CharacteristicValue> {
    let histogram = defined_histogram(ash, t, e, attribute)?;
    let argmax = histogram.argmax();
    Ok(CharacteristicValue {
        value: argmax[0].to_string(),
        frequency: histogram.max_count(),
        tied: argmax.len() > 1,
    })
}

/// Fraction of the hyperedges in the temporal star of `u` at `t` whose
/// characteristic value matches `u`'s own value, under the default
/// tie-inclusive rule.
pub fn star_homogeneity(ash: &Ash, t: i64, u: NodeId, attribute: &str) -> Result<f64> {
    star_homogeneity_with(ash, t, u, attribute, TieRule::Inclusive)
}

pub fn star_homogeneity_with(
    ash: &Ash,
    t: i64,
    u: NodeId,
    attribute: &str,
    rule: TieRule,
) -> Result<f64> {
    let star = ash.temporal_star(t, u)?;
    if star.is_empty() {
        return Err(AshError::UndefinedMeasure(format!(
            "node {u} has an empty star at instant {t}"
        )));
    }
    let own = ash.get_attribute(u, attribute, t)?.ok_or_else(|| {
        AshError::UndefinedMeasure(format!(
            "node {u} has no \"{attribute}\" value at instant {t}"
        ))
    })?;
    let own = own.to_string();
    let mut considered = 0u64;
    let mut matches = 0u64;
    for e in star {
        let histogram = member_label_histogram(ash, t, e, attribute)?;
        if histogram.total() == 0 {
            continue;
        }
        considered += 1;
        let argmax = histogram.argmax();
        let matched = match rule {
            TieRule::Inclusive => argmax.iter().any(|v| *v == own),
            TieRule::Strict => argmax.len() == 1 && argmax[0] == own,
        };
        if matched {
            matches += 1;
        }
    }
    if considered == 0 {
        return Err(AshError::UndefinedMeasure(format!(
            "every hyperedge around node {u} at instant {t} is unlabelled"
        )));
    }
    Ok(matches as f64 / considered as f64)
}

/// Fraction of `u`'s neighbors in a static pairwise graph sharing `u`'s
/// value at instant `t`. Neighbors with no assigned value are excluded.
pub fn pairwise_ego_homogeneity(
    ash: &Ash,
    graph: &PairGraph<NodeId>,
    t: i64,
    u: NodeId,
    attribute: &str,
) -> Result<f64> {
    let own = ash.get_attribute(u, attribute, t)?.ok_or_else(|| {
        AshError::UndefinedMeasure(format!(
            "node {u} has no \"{attribute}\" value at instant {t}"
        ))
    })?;
    let own = own.to_string();
    if graph.degree(u) == 0 {
        return Err(AshError::UndefinedMeasure(format!(
            "node {u} is isolated in the pairwise graph"
        )));
    }
    let mut assigned = 0u64;
    let mut shared = 0u64;
    for v in graph.neighbors(u) {
        if !ash.contains_node(v) {
            continue;
        }
        if let Some(value) = ash.get_attribute(v, attribute, t)? {
            assigned += 1;
            if value == own {
                shared += 1;
            }
        }
    }
    if assigned == 0 {
        return Err(AshError::UndefinedMeasure(format!(
            "no neighbor of node {u} has \"{attribute}\" assigned at instant {t}"
        )));
    }
    Ok(shared as f64 / assigned as f64)
}

fn check_window(ash: &Ash, window: Option<(i64, i64)>) -> Result<(i64, i64)> {
    let axis = ash.axis();
    match window {
        None => Ok((axis.start(), axis.end())),
        Some((lo, hi)) => {
            axis.check_interval(lo, hi)?;
            Ok((lo, hi))
        }
    }
}

fn average_over_active_pairs<F>(
    ash: &Ash,
    attribute: &str,
    window: Option<(i64, i64)>,
    measure: F,
) -> Result<f64>
where
    F: Fn(&Ash, i64, EdgeId) -> Result<f64>,
{
    let (lo, hi) = check_window(ash, window)?;
    if ash.attribute_domain(attribute).is_none() {
        return Err(AshError::UnknownAttribute(attribute.to_string()));
    }
    let mut sum = 0.0;
    let mut count = 0u64;
    for edge in ash.hyperedges() {
        for t in edge.presence().instants_in(lo, hi) {
            match measure(ash, t, edge.id()) {
                Ok(value) => {
                    sum += value;
                    count += 1;
                }
                Err(AshError::UndefinedMeasure(_)) => continue,
                Err(other) => return Err(other),
            }
        }
    }
    if count == 0 {
        return Err(AshError::UndefinedMeasure(format!(
            "no active (instant, hyperedge) pair has \"{attribute}\" defined in the window"
        )));
    }
    Ok(sum / count as f64)
}

/// Mean purity over every active (instant, hyperedge) pair in the window —
/// each hyperedge contributes once per instant it is active.
pub fn avg_purity(ash: &Ash, attribute: &str, window: Option<(i64, i64)>) -> Result<f64> {
    average_over_active_pairs(ash, attribute, window, |a, t, e| {
        hyperedge_purity(a, t, e, attribute)
    })
}

/// Mean normalized entropy over every active (instant, hyperedge) pair.
pub fn avg_entropy(ash: &Ash, attribute: &str, window: Option<(i64, i64)>) -> Result<f64> {
    average_over_active_pairs(ash, attribute, window, |a, t, e| {
        hyperedge_entropy(a, t, e, attribute)
    })
}

/// Nodes with at least one active hyperedge at `t`.
fn active_nodes_at(ash: &Ash, t: i64) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = ash
        .edges_at(t)
        .flat_map(|e| {
            ash.hyperedge(e)
                .expect("indexed edge exists")
                .nodes()
                .iter()
                .copied()
        })
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Mean star homogeneity at `t` over nodes with a non-empty star and an
/// assigned value.
pub fn avg_star_homogeneity(ash: &Ash, t: i64, attribute: &str) -> Result<f64> {
    avg_star_homogeneity_with(ash, t, attribute, TieRule::Inclusive)
}

pub fn avg_star_homogeneity_with(ash: &Ash, t: i64, attribute: &str, rule: TieRule) -> Result<f64> {
    ash.axis().check_instant(t)?;
    if ash.attribute_domain(attribute).is_none() {
        return Err(AshError::UnknownAttribute(attribute.to_string()));
    }
    let mut sum = 0.0;
    let mut count = 0u64;
    for u in active_nodes_at(ash, t) {
        match star_homogeneity_with(ash, t, u, attribute, rule) {
            Ok(value) => {
                sum += value;
                count += 1;
            }
            Err(AshError::UndefinedMeasure(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    if count == 0 {
        return Err(AshError::UndefinedMeasure(format!(
            "no node has a defined star homogeneity at instant {t}"
        )));
    }
    Ok(sum / count as f64)
}

/// Per-instant measures that can be rendered as a time series.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    AvgPurity,
    AvgEntropy,
    AvgStarHomogeneity,
}

impl std::str::FromStr for MeasureKind {
    type Err = AshError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "purity" => Ok(MeasureKind::AvgPurity),
            "entropy" => Ok(MeasureKind::AvgEntropy),
            "star-homogeneity" => Ok(MeasureKind::AvgStarHomogeneity),
            other => Err(AshError::InvalidArgument(format!(
                "unknown measure \"{other}\""
            ))),
        }
    }
}

/// Per-instant series of a measure over the window (default: full axis).
/// Instants where the measure is undefined are gaps: they are simply not
/// emitted, never interpolated.
///
/// With `group_by`, only entities of that attribute class contribute: nodes
/// whose own value matches for star homogeneity, hyperedges whose
/// characteristic value matches for purity and entropy.
pub fn measure_timeseries(
    ash: &Ash,
    kind: MeasureKind,
    attribute: &str,
    group_by: Option<&str>,
    window: Option<(i64, i64)>,
) -> Result<Vec<(i64, f64)>> {
    measure_timeseries_with(ash, kind, attribute, group_by, window, TieRule::Inclusive)
}

pub fn measure_timeseries_with(
    ash: &Ash,
    kind: MeasureKind,
    attribute: &str,
    group_by: Option<&str>,
    window: Option<(i64, i64)>,
    rule: TieRule,
) -> Result<Vec<(i64, f64)>> {
    let (lo, hi) = check_window(ash, window)?;
    if ash.attribute_domain(attribute).is_none() {
        return Err(AshError::UnknownAttribute(attribute.to_string()));
    }
    let mut series = Vec::new();
    for t in lo..=hi {
        let mut sum = 0.0;
        let mut count = 0u64;
        match kind {
            MeasureKind::AvgPurity | MeasureKind::AvgEntropy => {
                for e in ash.edges_at(t) {
                    if member_label_histogram(ash, t, e, attribute)?.total() == 0 {
                        continue;
                    }
                    if let Some(class) = group_by {
                        if characteristic_value(ash, t, e, attribute)?.value != class {
                            continue;
                        }
                    }
                    let value = match kind {
                        MeasureKind::AvgPurity => hyperedge_purity(ash, t, e, attribute)?,
                        _ => hyperedge_entropy(ash, t, e, attribute)?,
                    };
                    sum += value;
                    count += 1;
                }
            }
            MeasureKind::AvgStarHomogeneity => {
                for u in active_nodes_at(ash, t) {
                    if let Some(class) = group_by {
                        if ash.get_attribute(u, attribute, t)? != Some(class) {
                            continue;
                        }
                    }
                    match star_homogeneity_with(ash, t, u, attribute, rule) {
                        Ok(value) => {
                            sum += value;
                            count += 1;
                        }
                        Err(AshError::UndefinedMeasure(_)) => continue,
                        Err(other) => return Err(other),
                    }
                }
            }
        }
        if count > 0 {
            series.push((t, sum / count as f64));
        }
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NodeId;

    /// F1 with constant genders: 1=M, 2=F, 3=M, 4=M, 5=F.
    fn labelled_f1() -> Ash {
        let mut ash = crate::model::fixture_f1();
        for (node, value) in [(1, "M"), (2, "F"), (3, "M"), (4, "M"), (5, "F")] {
            ash.set_attribute(NodeId(node), "gender", (0, 3), value)
                .unwrap();
        }
        ash
    }

    fn edge(ash: &Ash, id: &str) -> EdgeId {
        ash.resolve_edge(id).unwrap()
    }

    #[test]
    fn purity_fixture_values() {
        let ash = labelled_f1();
        let p = |t, id| hyperedge_purity(&ash, t, edge(&ash, id), "gender").unwrap();
        assert!((p(0, "e0") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(p(1, "e1"), 1.0);
        assert_eq!(p(2, "e3"), 0.5);
    }

    #[test]
    fn purity_error_paths() {
        let ash = labelled_f1();
        assert!(matches!(
            hyperedge_purity(&ash, 3, edge(&ash, "e0"), "gender"),
            Err(AshError::InactiveAtTime { .. })
        ));
        assert!(matches!(
            hyperedge_purity(&ash, 0, edge(&ash, "e0"), "age"),
            Err(AshError::UnknownAttribute(_))
        ));
        let mut unlabelled = crate::model::fixture_f1();
        unlabelled
            .set_attribute(NodeId(5), "gender", (0, 3), "F")
            .unwrap();
        assert!(matches!(
            hyperedge_purity(&unlabelled, 0, edge(&unlabelled, "e0"), "gender"),
            Err(AshError::UndefinedMeasure(_))
        ));
    }

    #[test]
    fn entropy_fixture_values() {
        let ash = labelled_f1();
        let h = |t, id| hyperedge_entropy(&ash, t, edge(&ash, id), "gender").unwrap();
        assert_eq!(h(1, "e1"), 0.0);
        assert_eq!(h(2, "e3"), 1.0);
        assert!((h(0, "e0") - 0.918_295_834_054_489_6).abs() < 1e-12);
    }

    #[test]
    fn characteristic_values_and_ties() {
        let ash = labelled_f1();
        let cv = |t, id| characteristic_value(&ash, t, edge(&ash, id), "gender").unwrap();
        assert_eq!(
            cv(1, "e1"),
            CharacteristicValue {
                value: "M".into(),
                frequency: 2,
                tied: false
            }
        );
        assert_eq!(
            cv(2, "e3"),
            CharacteristicValue {
                value: "F".into(),
                frequency: 1,
                tied: true
            }
        );
        assert_eq!(
            cv(0, "e0"),
            CharacteristicValue {
                value: "M".into(),
                frequency: 2,
                tied: false
            }
        );
    }

    #[test]
    fn star_homogeneity_fixture() {
        let ash = labelled_f1();
        assert_eq!(star_homogeneity(&ash, 1, NodeId(3), "gender").unwrap(), 1.0);
        assert_eq!(star_homogeneity(&ash, 2, NodeId(4), "gender").unwrap(), 1.0);
        // Node 5's only hyperedge at t=2 is a perfect tie.
        assert_eq!(star_homogeneity(&ash, 2, NodeId(5), "gender").unwrap(), 1.0);
        assert_eq!(
            star_homogeneity_with(&ash, 2, NodeId(5), "gender", TieRule::Strict).unwrap(),
            0.0
        );
    }

    #[test]
    fn star_homogeneity_undefined_cases() {
        let ash = labelled_f1();
        // Node 5 has no active hyperedge at instant 0.
        assert!(matches!(
            star_homogeneity(&ash, 0, NodeId(5), "gender"),
            Err(AshError::UndefinedMeasure(_))
        ));
        let mut partial = crate::model::fixture_f1();
        partial
            .set_attribute(NodeId(1), "gender", (0, 3), "M")
            .unwrap();
        // Node 3 itself has no value at t=1.
        assert!(matches!(
            star_homogeneity(&partial, 1, NodeId(3), "gender"),
            Err(AshError::UndefinedMeasure(_))
        ));
    }

    #[test]
    fn pairwise_ego_cases() {
        let ash = labelled_f1();
        let mut graph = PairGraph::new();
        graph.add_edge(NodeId(3), NodeId(1)); // M
        graph.add_edge(NodeId(3), NodeId(4)); // M
        graph.add_edge(NodeId(3), NodeId(2)); // F
        let h = pairwise_ego_homogeneity(&ash, &graph, 0, NodeId(3), "gender").unwrap();
        assert!((h - 2.0 / 3.0).abs() < 1e-12);

        let mut same = PairGraph::new();
        same.add_edge(NodeId(3), NodeId(1));
        same.add_edge(NodeId(3), NodeId(4));
        assert_eq!(
            pairwise_ego_homogeneity(&ash, &same, 0, NodeId(3), "gender").unwrap(),
            1.0
        );

        let mut other = PairGraph::new();
        other.add_edge(NodeId(2), NodeId(1)); // F against M
        assert_eq!(
            pairwise_ego_homogeneity(&ash, &other, 0, NodeId(2), "gender").unwrap(),
            0.0
        );

        let mut isolated = PairGraph::new();
        isolated.add_node(NodeId(3));
        assert!(matches!(
            pairwise_ego_homogeneity(&ash, &isolated, 0, NodeId(3), "gender"),
            Err(AshError::UndefinedMeasure(_))
        ));
    }

    #[test]
    fn averages_fixture() {
        let ash = labelled_f1();
        // Seven active (instant, hyperedge) pairs in F1.
        assert!((avg_purity(&ash, "gender", None).unwrap() - 61.0 / 84.0).abs() < 1e-12);
        assert!(
            (avg_entropy(&ash, "gender", None).unwrap() - 0.663_981_398_938_301_7).abs() < 1e-12
        );
        assert_eq!(avg_star_homogeneity(&ash, 1, "gender").unwrap(), 0.75);
        assert!((avg_star_homogeneity(&ash, 2, "gender").unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn averages_simple_cases() {
        let mut ash = Ash::new(0, 1).unwrap();
        ash.add_hyperedge(&[NodeId(1), NodeId(2)], (0, 0)).unwrap();
        ash.add_hyperedge(&[NodeId(3), NodeId(4)], (1, 1)).unwrap();
        for (n, v) in [(1, "A"), (2, "A"), (3, "A"), (4, "B")] {
            ash.set_attribute(NodeId(n), "x", (0, 1), v).unwrap();
        }
        // One homogeneous pair, one perfect tie: (1.0 + 0.5) / 2.
        assert_eq!(avg_purity(&ash, "x", None).unwrap(), 0.75);
        assert_eq!(avg_purity(&ash, "x", Some((0, 0))).unwrap(), 1.0);
        assert_eq!(avg_entropy(&ash, "x", Some((0, 0))).unwrap(), 0.0);
        assert!(matches!(
            avg_purity(&ash, "x", Some((0, 9))),
            Err(AshError::IntervalOutOfRange { .. })
        ));
    }

    #[test]
    fn timeseries_fixture() {
        let ash = labelled_f1();
        let series =
            measure_timeseries(&ash, MeasureKind::AvgPurity, "gender", None, None).unwrap();
        let expected = [(0, 2.0 / 3.0), (1, 5.0 / 6.0), (2, 0.75), (3, 0.5)];
        assert_eq!(series.len(), 4);
        for ((t, v), (et, ev)) in series.iter().zip(expected) {
            assert_eq!(*t, et);
            assert!((v - ev).abs() < 1e-12);
        }
    }

    #[test]
    fn timeseries_gaps_and_groups() {
        let mut ash = Ash::new(0, 4).unwrap();
        ash.add_hyperedge(&[NodeId(1), NodeId(2)], (0, 1)).unwrap();
        ash.add_hyperedge(&[NodeId(1), NodeId(2)], (4, 4)).unwrap();
        ash.set_attribute(NodeId(1), "x", (0, 4), "A").unwrap();
        ash.set_attribute(NodeId(2), "x", (0, 4), "A").unwrap();
        let series =
            measure_timeseries(&ash, MeasureKind::AvgStarHomogeneity, "x", None, None).unwrap();
        // Instants 2 and 3 have no active hyperedge: two gaps.
        assert_eq!(series, vec![(0, 1.0), (1, 1.0), (4, 1.0)]);
        assert_eq!(series.len() as u64, ash.axis().instant_count() - 2);

        let ash = labelled_f1();
        let grouped = measure_timeseries(
            &ash,
            MeasureKind::AvgStarHomogeneity,
            "gender",
            Some("F"),
            None,
        )
        .unwrap();
        // F nodes: node 2 (t 0..2) and node 5 (t 2..3).
        assert_eq!(
            grouped.iter().map(|&(t, _)| t).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
        assert_eq!(grouped[0].1, 0.0);
        assert_eq!(grouped[3].1, 1.0);
    }
}
