//! Discrete time axis and presence timelines.
//!
//! Time is a closed integer interval `[start, end]`. A presence timeline is
//! the set of instants at which an entity (node or hyperedge) is active,
//! stored as sorted, pairwise disjoint, non-adjacent closed intervals.

use crate::error::{AshError, Result};

/// Closed interval of discrete instants.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimeAxis {
    start: i64,
    end: i64,
}

impl TimeAxis {
    pub fn new(start: i64, end: i64) -> Result<Self> {
        if start > end {
            return Err(AshError::InvalidTimeAxis { start, end });
        }
        Ok(TimeAxis { start, end })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    /// Number of instants in the axis (`end - start + 1`).
    pub fn instant_count(&self) -> u64 {
        (self.end as i128 - self.start as i128 + 1) as u64
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn contains_interval(&self, lo: i64, hi: i64) -> bool {
        lo <= hi && self.start <= lo && hi <= self.end
    }

    pub fn instants(&self) -> impl Iterator<Item = i64> {
        self.start..=self.end
    }

    /// Errors unless `t` lies on the axis.
    pub fn check_instant(&self, t: i64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(AshError::InstantOutOfRange {
                t,
                start: self.start,
                end: self.end,
            })
        }
    }

    /// Errors unless `[lo, hi]` is a non-empty interval on the axis.
    pub fn check_interval(&self, lo: i64, hi: i64) -> Result<()> {
        if lo > hi {
            return Err(AshError::InvalidArgument(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        if self.contains_interval(lo, hi) {
            Ok(())
        } else {
            Err(AshError::IntervalOutOfRange {
                lo,
                hi,
                start: self.start,
                end: self.end,
            })
        }
    }
}

/// Set of instants stored as merged closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PresenceTimeline {
    intervals: Vec<(i64, i64)>,
}

impl PresenceTimeline {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a timeline from intervals that must already be in canonical
    /// form: sorted ascending, pairwise disjoint, non-adjacent, each with
    /// `lo <= hi`. Used when loading documents, where a non-canonical list
    /// is a validation error rather than something to silently repair.
    pub fn from_canonical(intervals: Vec<(i64, i64)>) -> std::result::Result<Self, String> {
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if lo > hi {
                return Err(format!("interval [{lo}, {hi}] is empty"));
            }
            if i > 0 {
                let (_, prev_hi) = intervals[i - 1];
                if lo <= prev_hi {
                    return Err(format!(
                        "intervals overlap or are unsorted around [{lo}, {hi}]"
                    ));
                }
                if lo == prev_hi + 1 {
                    return Err(format!(
                        "adjacent intervals [.., {prev_hi}] and [{lo}, ..] must be merged"
                    ));
                }
            }
        }
        Ok(PresenceTimeline { intervals })
    }

    /// Inserts `[lo, hi]`, merging with any overlapping or adjacent
    /// intervals. Requires `lo <= hi`.
    pub fn insert(&mut self, lo: i64, hi: i64) {
        debug_assert!(lo <= hi);
        // Position of the first interval that could touch [lo, hi].
        let start = self.intervals.partition_point(|&(_, h)| h < lo - 1);
        let mut end = start;
        let mut new_lo = lo;
        let mut new_hi = hi;
        while end < self.intervals.len() && self.intervals[end].0 <= hi + 1 {
            new_lo = new_lo.min(self.intervals[end].0);
            new_hi = new_hi.max(self.intervals[end].1);
            end += 1;
        }
        self.intervals.splice(start..end, [(new_lo, new_hi)]);
    }

    pub fn contains(&self, t: i64) -> bool {
        let idx = self.intervals.partition_point(|&(_, h)| h < t);
        idx < self.intervals.len() && self.intervals[idx].0 <= t
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total number of instants covered.
    pub fn instant_count(&self) -> u64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| (hi as i128 - lo as i128 + 1) as u64)
            .sum()
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn first(&self) -> Option<i64> {
        self.intervals.first().map(|&(lo, _)| lo)
    }

    pub fn last(&self) -> Option<i64> {
        self.intervals.last().map(|&(_, hi)| hi)
    }

    pub fn iter_instants(&self) -> impl Iterator<Item = i64> + '_ {
        self.intervals.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    /// Instants of the timeline falling inside `[lo, hi]`.
    pub fn instants_in(&self, lo: i64, hi: i64) -> impl Iterator<Item = i64> + '_ {
        self.intervals
            .iter()
            .skip_while(move |&&(_, h)| h < lo)
            .take_while(move |&&(l, _)| l <= hi)
            .flat_map(move |&(l, h)| l.max(lo)..=h.min(hi))
    }

    /// Restriction of the timeline to `[lo, hi]`.
    pub fn clipped(&self, lo: i64, hi: i64) -> PresenceTimeline {
        let intervals = self
            .intervals
            .iter()
            .filter(|&&(l, h)| h >= lo && l <= hi)
            .map(|&(l, h)| (l.max(lo), h.min(hi)))
            .collect();
        PresenceTimeline { intervals }
    }

    pub fn intersection(&self, other: &PresenceTimeline) -> PresenceTimeline {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a_lo, a_hi) = self.intervals[i];
            let (b_lo, b_hi) = other.intervals[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Intersections of canonical timelines may leave adjacent pieces.
        let mut merged: Vec<(i64, i64)> = Vec::with_capacity(out.len());
        for (lo, hi) in out {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        PresenceTimeline { intervals: merged }
    }

    pub fn intersection_count(&self, other: &PresenceTimeline) -> u64 {
        self.intersection(other).instant_count()
    }

    pub fn union_count(&self, other: &PresenceTimeline) -> u64 {
        self.instant_count() + other.instant_count() - self.intersection_count(other)
    }

    /// True when every instant of `other` is also in `self`.
    pub fn covers(&self, other: &PresenceTimeline) -> bool {
        other.intervals.iter().all(|&(lo, hi)| {
            let idx = self.intervals.partition_point(|&(_, h)| h < lo);
            idx < self.intervals.len() && self.intervals[idx].0 <= lo && hi <= self.intervals[idx].1
        })
    }

    pub fn within_axis(&self, axis: &TimeAxis) -> bool {
        self.intervals
            .iter()
            .all(|&(lo, hi)| axis.contains_interval(lo, hi))
    }
}
