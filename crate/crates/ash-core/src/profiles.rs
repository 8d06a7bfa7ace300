//! Time-varying categorical node attributes and consistency measures.
//!
//! A node profile maps attribute names to value timelines: sorted, disjoint
//! spans each carrying one categorical value. Assignments are
//! last-write-wins — re-setting an attribute over an interval replaces
//! whatever previous values overlapped it.

use std::collections::BTreeMap;

use crate::error::{AshError, Result};
use crate::measures::LabelHistogram;
use crate::model::{Ash, NodeId};

/// One attribute value held over a closed instant interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSpan {
    pub lo: i64,
    pub hi: i64,
    pub value: String,
}

/// Per-node attribute timelines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeProfile {
    attributes: BTreeMap<String, Vec<ValueSpan>>,
}

/// Normalization base for entropy-derived measures.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EntropyNorm {
    /// Log of the attribute's global domain size (every value observed
    /// anywhere in the hypergraph). The default.
    DomainSize,
    /// Log of the number of distinct values observed in the local context
    /// being measured.
    ObservedValues,
}

impl NodeProfile {
    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.attributes.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[ValueSpan])> {
        self.attributes
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn spans(&self, attribute: &str) -> Option<&[ValueSpan]> {
        self.attributes.get(attribute).map(|v| v.as_slice())
    }

    /// Value of `attribute` at instant `t`, if assigned.
    pub fn value_at(&self, attribute: &str, t: i64) -> Option<&str> {
        let rows = self.attributes.get(attribute)?;
        let idx = rows.partition_point(|span| span.hi < t);
        rows.get(idx)
            .filter(|span| span.lo <= t)
            .map(|span| span.value.as_str())
    }

    /// Last-write-wins assignment: the new span replaces any previous value
    /// on the instants it covers, truncating partially overlapped spans.
    pub(crate) fn assign(&mut self, attribute: &str, lo: i64, hi: i64, value: &str) {
        let rows = self.attributes.entry(attribute.to_string()).or_default();
        let mut out: Vec<ValueSpan> = Vec::with_capacity(rows.len() + 2);
        let mut inserted = false;
        for row in rows.drain(..) {
            if row.hi < lo {
                out.push(row);
            } else if row.lo > hi {
                if !inserted {
                    out.push(ValueSpan {
                        lo,
                        hi,
                        value: value.to_string(),
                    });
                    inserted = true;
                }
                out.push(row);
            } else {
                if row.lo < lo {
                    out.push(ValueSpan {
                        lo: row.lo,
                        hi: lo - 1,
                        value: row.value.clone(),
                    });
                }
                if !inserted {
                    out.push(ValueSpan {
                        lo,
                        hi,
                        value: value.to_string(),
                    });
                    inserted = true;
                }
                if row.hi > hi {
                    out.push(ValueSpan {
                        lo: hi + 1,
                        hi: row.hi,
                        value: row.value,
                    });
                }
            }
        }
        if !inserted {
            out.push(ValueSpan {
                lo,
                hi,
                value: value.to_string(),
            });
        }
        *rows = out;
    }

    /// Profile restricted to `[lo, hi]`; attributes left without spans are
    /// dropped.
    pub(crate) fn clipped(&self, lo: i64, hi: i64) -> NodeProfile {
        let mut out = NodeProfile::default();
        for (attr, rows) in &self.attributes {
            let clipped: Vec<ValueSpan> = rows
                .iter()
                .filter(|span| span.hi >= lo && span.lo <= hi)
                .map(|span| ValueSpan {
                    lo: span.lo.max(lo),
                    hi: span.hi.min(hi),
                    value: span.value.clone(),
                })
                .collect();
            if !clipped.is_empty() {
                out.attributes.insert(attr.clone(), clipped);
            }
        }
        out
    }

    pub(crate) fn insert_spans_raw(&mut self, attribute: String, spans: Vec<ValueSpan>) {
        self.attributes.insert(attribute, spans);
    }
}

impl Ash {
    /// Assigns `value` to attribute `attribute` of node `u` over the
    /// instants `[lo, hi]`, replacing previous values on the overlap and
    /// registering the value in the attribute's domain.
    pub fn set_attribute(
        &mut self,
        u: NodeId,
        attribute: &str,
        interval: (i64, i64),
        value: &str,
    ) -> Result<()> {
        let (lo, hi) = interval;
        self.axis().check_interval(lo, hi)?;
        if !self.contains_node(u) {
            return Err(AshError::UnknownNode(u));
        }
        self.profiles
            .entry(u)
            .or_default()
            .assign(attribute, lo, hi, value);
        self.domains
            .entry(attribute.to_string())
            .or_default()
            .insert(value.to_string());
        Ok(())
    }

    /// Value of `attribute` for node `u` at instant `t`, or `None` when the
    /// instant carries no assignment.
    pub fn get_attribute(&self, u: NodeId, attribute: &str, t: i64) -> Result<Option<&str>> {
        self.axis().check_instant(t)?;
        if !self.contains_node(u) {
            return Err(AshError::UnknownNode(u));
        }
        if !self.domains.contains_key(attribute) {
            return Err(AshError::UnknownAttribute(attribute.to_string()));
        }
        Ok(self
            .profiles
            .get(&u)
            .and_then(|profile| profile.value_at(attribute, t)))
    }

    /// Every attribute value ever observed for `attribute`.
    pub fn attribute_domain(&self, attribute: &str) -> Option<&std::collections::BTreeSet<String>> {
        self.domains.get(attribute)
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.domains.keys().map(|s| s.as_str())
    }

    pub fn node_profile(&self, u: NodeId) -> Option<&NodeProfile> {
        self.profiles.get(&u)
    }

    /// Consistency of node `u` for `attribute`: one minus the normalized
    /// entropy of the value distribution over the instants where `u` is
    /// present and the attribute is assigned. 1.0 means the value never
    /// changes; 0.0 means maximal disorder.
    pub fn node_consistency(&self, u: NodeId, attribute: &str) -> Result<f64> {
        self.node_consistency_with(u, attribute, EntropyNorm::DomainSize)
    }

    pub fn node_consistency_with(
        &self,
        u: NodeId,
        attribute: &str,
        norm: EntropyNorm,
    ) -> Result<f64> {
        let presence = self.node_presence(u)?.clone();
        let domain_size = self
            .domains
            .get(attribute)
            .ok_or_else(|| AshError::UnknownAttribute(attribute.to_string()))?
            .len();
        let mut histogram = LabelHistogram::new();
        if let Some(spans) = self.profiles.get(&u).and_then(|p| p.spans(attribute)) {
            for span in spans {
                let covered = presence.clipped(span.lo, span.hi).instant_count();
                if covered > 0 {
                    histogram.add_count(&span.value, covered as usize);
                }
            }
        }
        if histogram.total() == 0 {
            return Err(AshError::UndefinedMeasure(format!(
                "node {u} has no assigned instants for attribute \"{attribute}\""
            )));
        }
        let base = match norm {
            EntropyNorm::DomainSize => domain_size,
            EntropyNorm::ObservedValues => histogram.distinct(),
        };
        Ok((1.0 - histogram.normalized_entropy(base)).clamp(0.0, 1.0))
    }

    /// Mean node consistency over every node where it is defined.
    pub fn ash_consistency(&self, attribute: &str) -> Result<f64> {
        self.ash_consistency_with(attribute, EntropyNorm::DomainSize)
    }

    pub fn ash_consistency_with(&self, attribute: &str, norm: EntropyNorm) -> Result<f64> {
        if !self.domains.contains_key(attribute) {
            return Err(AshError::UnknownAttribute(attribute.to_string()));
        }
        let mut sum = 0.0;
        let mut count = 0u64;
        for u in self.node_ids() {
            match self.node_consistency_with(u, attribute, norm) {
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
                "no node has a defined consistency for attribute \"{attribute}\""
            )));
        }
        Ok(sum / count as f64)
    }
}
