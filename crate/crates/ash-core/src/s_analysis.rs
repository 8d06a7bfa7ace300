//! s-analysis: s-incidence, s-line graphs, s-connected components,
//! s-distances and time-respecting s-walks.
//!
//! Two hyperedges are s-incident when their node sets share at least `s`
//! nodes. A time-respecting s-walk is a sequence of (instant, hyperedge)
//! steps with non-decreasing instants and every consecutive node-set
//! intersection of size at least `s`; it has a length (number of steps), a
//! width (minimum consecutive intersection) and a duration (last instant
//! minus first). Walks may revisit hyperedges, including waiting on the
//! same hyperedge across instants; a simple mode without revisits is
//! available on the query.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::str::FromStr;

use crate::error::{AshError, Result};
use crate::model::{Ash, EdgeId};
use crate::pairgraph::PairGraph;

/// Optimality criterion for a walk query.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Minimal length (number of hyperedges crossed).
    Shortest,
    /// Minimal duration (arrival minus start instant).
    Fastest,
    /// Minimal duration among the minimal-length walks.
    FastestShortest,
    /// Minimal length among the minimal-duration walks.
    ShortestFastest,
    /// Earliest arrival instant, regardless of length and duration.
    Foremost,
}

impl FromStr for Objective {
    type Err = AshError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shortest" => Ok(Objective::Shortest),
            "fastest" => Ok(Objective::Fastest),
            "fastest-shortest" => Ok(Objective::FastestShortest),
            "shortest-fastest" => Ok(Objective::ShortestFastest),
            "foremost" => Ok(Objective::Foremost),
            other => Err(AshError::InvalidArgument(format!(
                "unknown objective \"{other}\""
            ))),
        }
    }
}

/// A walk query between two hyperedges.
#[derive(Clone, Debug)]
pub struct WalkQuery {
    pub source: EdgeId,
    pub target: EdgeId,
    /// Minimum width: every consecutive node-set intersection must have at
    /// least this many nodes.
    pub s: usize,
    /// Instant window the whole walk must stay within; `None` means the
    /// full axis.
    pub window: Option<(i64, i64)>,
    /// Maximum gap between consecutive step instants; `None` means
    /// unbounded. A gap of 1 restricts steps to adjacent instants.
    pub max_gap: Option<i64>,
    pub objective: Objective,
    /// Upper bound on walk length; `None` means unbounded.
    pub max_length: Option<usize>,
    /// Forbid revisiting a hyperedge. Off by default: these are walks.
    pub simple: bool,
}

impl WalkQuery {
    pub fn new(source: EdgeId, target: EdgeId, s: usize, objective: Objective) -> Self {
        WalkQuery {
            source,
            target,
            s,
            window: None,
            max_gap: None,
            objective,
            max_length: None,
            simple: false,
        }
    }
}

/// A concrete time-respecting s-walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SWalk {
    steps: Vec<(i64, EdgeId)>,
}

impl SWalk {
    fn from_steps(steps: Vec<(i64, EdgeId)>) -> Self {
        debug_assert!(!steps.is_empty());
        SWalk { steps }
    }

    pub fn steps(&self) -> &[(i64, EdgeId)] {
        &self.steps
    }

    /// Number of hyperedges crossed (`k`).
    pub fn length(&self) -> usize {
        self.steps.len()
    }

    pub fn start(&self) -> i64 {
        self.steps[0].0
    }

    pub fn arrival(&self) -> i64 {
        self.steps[self.steps.len() - 1].0
    }

    /// Arrival minus start instant (`d`).
    pub fn duration(&self) -> i64 {
        self.arrival() - self.start()
    }

    /// Minimum node-set intersection along consecutive steps, or `None`
    /// for a single-step walk.
    pub fn width(&self, ash: &Ash) -> Result<Option<usize>> {
        let mut width: Option<usize> = None;
        for pair in self.steps.windows(2) {
            let a = ash.hyperedge(pair[0].1)?;
            let b = ash.hyperedge(pair[1].1)?;
            let n = a.intersection_size(b);
            width = Some(width.map_or(n, |w| w.min(n)));
        }
        Ok(width)
    }

    /// Re-checks every walk invariant against the hypergraph and query,
    /// independently of how the walk was produced.
    pub fn validate(&self, ash: &Ash, q: &WalkQuery) -> Result<()> {
        let fail = |msg: String| Err(AshError::InvalidArgument(msg));
        if self.steps.is_empty() {
            return fail("walk has no steps".into());
        }
        if self.steps[0].1 != q.source || self.steps[self.steps.len() - 1].1 != q.target {
            return fail("walk endpoints do not match the query".into());
        }
        let axis = ash.axis();
        let (lo, hi) = q.window.unwrap_or((axis.start(), axis.end()));
        for &(t, e) in &self.steps {
            if t < lo || t > hi {
                return fail(format!("step instant {t} outside window [{lo}, {hi}]"));
            }
            if !ash.hyperedge(e)?.active_at(t) {
                return fail(format!("hyperedge {e} inactive at instant {t}"));
            }
        }
        for pair in self.steps.windows(2) {
            let ((t0, e0), (t1, e1)) = (pair[0], pair[1]);
            if t1 < t0 {
                return fail(format!("instants decrease from {t0} to {t1}"));
            }
            if let Some(gap) = q.max_gap {
                if t1 - t0 > gap {
                    return fail(format!("gap {} exceeds maximum {gap}", t1 - t0));
                }
            }
            let n = ash.hyperedge(e0)?.intersection_size(ash.hyperedge(e1)?);
            if n < q.s {
                return fail(format!(
                    "intersection of {e0} and {e1} has width {n} < {}",
                    q.s
                ));
            }
        }
        if let Some(cap) = q.max_length {
            if self.length() > cap {
                return fail(format!("length {} exceeds maximum {cap}", self.length()));
            }
        }
        if q.simple {
            let distinct: HashSet<EdgeId> = self.steps.iter().map(|&(_, e)| e).collect();
            if distinct.len() != self.steps.len() {
                return fail("walk revisits a hyperedge in simple mode".into());
            }
        }
        Ok(())
    }
}

/// True when the two hyperedges share at least `s` nodes.
pub fn s_incident(ash: &Ash, e1: EdgeId, e2: EdgeId, s: usize) -> Result<bool> {
    check_width(s)?;
    if e1 == e2 {
        return Err(AshError::InvalidArgument(
            "s-incidence is defined between distinct hyperedges".into(),
        ));
    }
    let a = ash.hyperedge(e1)?;
    let b = ash.hyperedge(e2)?;
    Ok(a.intersection_size(b) >= s)
}

fn check_width(s: usize) -> Result<()> {
    if s == 0 {
        return Err(AshError::InvalidArgument(
            "width s must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Pairwise graph over hyperedges, with an edge between every s-incident
/// pair. Vertices are all hyperedges, or only those active at `at`.
pub fn s_line_graph(ash: &Ash, s: usize, at: Option<i64>) -> Result<PairGraph<EdgeId>> {
    check_width(s)?;
    let vertices: Vec<EdgeId> = match at {
        Some(t) => {
            ash.axis().check_instant(t)?;
            ash.edges_at(t).collect()
        }
        None => ash.hyperedges().map(|e| e.id()).collect(),
    };
    let vertex_set: BTreeSet<EdgeId> = vertices.iter().copied().collect();
    let mut graph = PairGraph::new();
    for &v in &vertices {
        graph.add_node(v);
    }
    for &v in &vertices {
        let edge = ash.hyperedge(v)?;
        let mut candidates: BTreeSet<EdgeId> = BTreeSet::new();
        for &u in edge.nodes() {
            candidates.extend(ash.star(u)?.iter().copied());
        }
        for c in candidates {
            if c <= v || !vertex_set.contains(&c) {
                continue;
            }
            if edge.intersection_size(ash.hyperedge(c)?) >= s {
                graph.add_edge(v, c);
            }
        }
    }
    Ok(graph)
}

/// Connected components of the s-line graph.
pub fn s_components(ash: &Ash, s: usize, at: Option<i64>) -> Result<Vec<BTreeSet<EdgeId>>> {
    Ok(s_line_graph(ash, s, at)?.connected_components())
}

/// Hop distance between two hyperedges in the flattened s-line graph:
/// the number of hyperedges crossed minus one, `Some(0)` for a hyperedge
/// and itself, `None` when unreachable.
pub fn s_distance(ash: &Ash, e1: EdgeId, e2: EdgeId, s: usize) -> Result<Option<usize>> {
    check_width(s)?;
    ash.hyperedge(e1)?;
    ash.hyperedge(e2)?;
    Ok(s_line_graph(ash, s, None)?.bfs_distance(e1, e2))
}

/// Lexicographic cost vector; components depend on the objective.
type Cost = [i64; 2];

fn initial_cost(objective: Objective, t0: i64) -> Cost {
    match objective {
        Objective::Shortest => [1, 0],
        Objective::Fastest => [0, 0],
        Objective::FastestShortest => [1, 0],
        Objective::ShortestFastest => [0, 1],
        Objective::Foremost => [t0, 0],
    }
}

fn step_cost(objective: Objective, t: i64, t_next: i64) -> Cost {
    let gap = t_next - t;
    match objective {
        Objective::Shortest => [1, 0],
        Objective::Fastest => [gap, 0],
        Objective::FastestShortest => [1, gap],
        Objective::ShortestFastest => [gap, 1],
        Objective::Foremost => [gap, 0],
    }
}

fn add_cost(a: Cost, b: Cost) -> Cost {
    [a[0] + b[0], a[1] + b[1]]
}

/// Objective value of a finished walk, as the same lexicographic vector the
/// search minimizes.
pub fn walk_objective_value(objective: Objective, walk: &SWalk) -> Cost {
    let (k, d, arrival) = (walk.length() as i64, walk.duration(), walk.arrival());
    match objective {
        Objective::Shortest => [k, 0],
        Objective::Fastest => [d, 0],
        Objective::FastestShortest => [k, d],
        Objective::ShortestFastest => [d, k],
        Objective::Foremost => [arrival, 0],
    }
}

struct WalkSearch<'a> {
    ash: &'a Ash,
    s: usize,
    lo: i64,
    hi: i64,
    max_gap: Option<i64>,
    max_length: Option<usize>,
    objective: Objective,
    /// Lazily computed s-neighbors per hyperedge, self included when the
    /// hyperedge itself is wide enough to wait on.
    adjacency: HashMap<EdgeId, Vec<EdgeId>>,
}

type StateKey = (i64, EdgeId, u32);
/// Best settled cost and key per reachable hyperedge.
type Arrivals = HashMap<EdgeId, (Cost, StateKey)>;
type Parents = HashMap<StateKey, Option<StateKey>>;

impl<'a> WalkSearch<'a> {
    fn new(ash: &'a Ash, q: &WalkQuery) -> Result<Self> {
        check_width(q.s)?;
        ash.hyperedge(q.source)?;
        ash.hyperedge(q.target)?;
        let axis = ash.axis();
        let (lo, hi) = match q.window {
            Some((lo, hi)) => {
                axis.check_interval(lo, hi)?;
                (lo, hi)
            }
            None => (axis.start(), axis.end()),
        };
        if q.max_gap.is_some_and(|g| g < 0) {
            return Err(AshError::InvalidArgument(
                "max gap must be non-negative".into(),
            ));
        }
        if q.max_length == Some(0) {
            return Err(AshError::InvalidArgument(
                "max length must be at least 1".into(),
            ));
        }
        Ok(WalkSearch {
            ash,
            s: q.s,
            lo,
            hi,
            max_gap: q.max_gap,
            max_length: q.max_length,
            objective: q.objective,
            adjacency: HashMap::new(),
        })
    }

    fn neighbors(&mut self, e: EdgeId) -> Vec<EdgeId> {
        if let Some(cached) = self.adjacency.get(&e) {
            return cached.clone();
        }
        let edge = self.ash.hyperedge(e).expect("validated id");
        let mut candidates: BTreeSet<EdgeId> = BTreeSet::new();
        for &u in edge.nodes() {
            candidates.extend(self.ash.star(u).expect("member exists").iter().copied());
        }
        let list: Vec<EdgeId> = candidates
            .into_iter()
            .filter(|&c| {
                if c == e {
                    edge.size() >= self.s
                } else {
                    edge.intersection_size(self.ash.hyperedge(c).expect("indexed")) >= self.s
                }
            })
            .collect();
        self.adjacency.insert(e, list.clone());
        list
    }

    fn key(&self, t: i64, e: EdgeId, steps: u32) -> StateKey {
        if self.max_length.is_some() {
            (t, e, steps)
        } else {
            (t, e, 0)
        }
    }

    /// Dijkstra over (instant, hyperedge) states with lexicographic costs.
    /// Stops at the first settled state on `target` when given, otherwise
    /// settles everything and reports the best cost per hyperedge.
    fn run(&mut self, source: EdgeId, target: Option<EdgeId>) -> (Arrivals, Parents) {
        let mut best: HashMap<StateKey, Cost> = HashMap::new();
        let mut parents: Parents = HashMap::new();
        let mut settled: HashSet<StateKey> = HashSet::new();
        let mut arrivals: Arrivals = HashMap::new();
        let mut heap: BinaryHeap<Reverse<(Cost, i64, EdgeId, u32)>> = BinaryHeap::new();

        let start_instants: Vec<i64> = self
            .ash
            .hyperedge(source)
            .expect("validated id")
            .presence()
            .instants_in(self.lo, self.hi)
            .collect();
        for t0 in start_instants {
            let cost = initial_cost(self.objective, t0);
            let key = self.key(t0, source, 1);
            if best.get(&key).is_none_or(|&c| cost < c) {
                best.insert(key, cost);
                parents.insert(key, None);
                heap.push(Reverse((cost, t0, source, 1)));
            }
        }

        while let Some(Reverse((cost, t, e, steps))) = heap.pop() {
            let key = self.key(t, e, steps);
            if settled.contains(&key) || best.get(&key) != Some(&cost) {
                continue;
            }
            settled.insert(key);
            arrivals.entry(e).or_insert((cost, key));
            if target == Some(e) {
                break;
            }
            if self.max_length.is_some_and(|cap| steps as usize >= cap) {
                continue;
            }
            let upper = match self.max_gap {
                Some(gap) => self.hi.min(t.saturating_add(gap)),
                None => self.hi,
            };
            for next_edge in self.neighbors(e) {
                let presence = self
                    .ash
                    .hyperedge(next_edge)
                    .expect("validated id")
                    .presence()
                    .clone();
                for t_next in presence.instants_in(t, upper) {
                    let next_cost = add_cost(cost, step_cost(self.objective, t, t_next));
                    let next_key = self.key(t_next, next_edge, steps + 1);
                    if settled.contains(&next_key) {
                        continue;
                    }
                    if best.get(&next_key).is_none_or(|&c| next_cost < c) {
                        best.insert(next_key, next_cost);
                        parents.insert(next_key, Some(key));
                        heap.push(Reverse((next_cost, t_next, next_edge, steps + 1)));
                    }
                }
            }
        }
        (arrivals, parents)
    }

    fn reconstruct(&self, parents: &Parents, end: StateKey) -> SWalk {
        let mut steps = Vec::new();
        let mut cursor = Some(end);
        while let Some(key) = cursor {
            steps.push((key.0, key.1));
            cursor = parents[&key];
        }
        steps.reverse();
        SWalk::from_steps(steps)
    }
}

/// An optimal time-respecting s-walk under the query's objective, or `None`
/// when no walk exists. A single-step walk (source equal to target, active
/// in the window) is valid at any width.
pub fn time_respecting_s_walk(ash: &Ash, q: &WalkQuery) -> Result<Option<SWalk>> {
    let mut search = WalkSearch::new(ash, q)?;
    if q.simple {
        return Ok(simple_search(ash, q, &mut search));
    }
    let (arrivals, parents) = search.run(q.source, Some(q.target));
    Ok(arrivals
        .get(&q.target)
        .map(|&(_, key)| search.reconstruct(&parents, key)))
}

/// Exhaustive best-first search over simple walks (no hyperedge revisits).
/// Exponential in the worst case; intended for focused queries.
fn simple_search(ash: &Ash, q: &WalkQuery, search: &mut WalkSearch) -> Option<SWalk> {
    struct Frame {
        path: Vec<(i64, EdgeId)>,
        used: BTreeSet<EdgeId>,
        cost: Cost,
    }
    let mut best: Option<(Cost, Vec<(i64, EdgeId)>)> = None;
    let start_instants: Vec<i64> = ash
        .hyperedge(q.source)
        .expect("validated id")
        .presence()
        .instants_in(search.lo, search.hi)
        .collect();
    let mut stack: Vec<Frame> = start_instants
        .into_iter()
        .map(|t0| Frame {
            path: vec![(t0, q.source)],
            used: BTreeSet::from([q.source]),
            cost: initial_cost(q.objective, t0),
        })
        .collect();
    while let Some(frame) = stack.pop() {
        if let Some((best_cost, _)) = &best {
            if frame.cost >= *best_cost {
                continue;
            }
        }
        let &(t, e) = frame.path.last().expect("frames are non-empty");
        if e == q.target {
            best = Some((frame.cost, frame.path));
            continue;
        }
        if q.max_length.is_some_and(|cap| frame.path.len() >= cap) {
            continue;
        }
        let upper = match search.max_gap {
            Some(gap) => search.hi.min(t.saturating_add(gap)),
            None => search.hi,
        };
        for next_edge in search.neighbors(e) {
            if frame.used.contains(&next_edge) {
                continue;
            }
            let presence = ash
                .hyperedge(next_edge)
                .expect("validated id")
                .presence()
                .clone();
            for t_next in presence.instants_in(t, upper) {
                let mut path = frame.path.clone();
                path.push((t_next, next_edge));
                let mut used = frame.used.clone();
                used.insert(next_edge);
                stack.push(Frame {
                    path,
                    used,
                    cost: add_cost(frame.cost, step_cost(q.objective, t, t_next)),
                });
            }
        }
    }
    best.map(|(_, steps)| SWalk::from_steps(steps))
}

/// One ordered reachable pair in a walk-metrics table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkMetricsRow {
    pub source: EdgeId,
    pub target: EdgeId,
    /// Length of a shortest walk.
    pub length: usize,
    /// Minimal duration among the shortest walks.
    pub duration: i64,
    /// Earliest possible arrival instant (foremost).
    pub arrival: i64,
}

/// Shortest-walk length, its minimal duration, and the foremost arrival for
/// every ordered reachable pair of distinct hyperedges. Unreachable pairs
/// are omitted.
pub fn walk_metrics(
    ash: &Ash,
    sources: Option<&[EdgeId]>,
    s: usize,
    window: Option<(i64, i64)>,
) -> Result<Vec<WalkMetricsRow>> {
    let all: Vec<EdgeId>;
    let sources = match sources {
        Some(list) => list,
        None => {
            all = ash.hyperedges().map(|e| e.id()).collect();
            &all
        }
    };
    let mut rows = Vec::new();
    for &source in sources {
        let mut query = WalkQuery::new(source, source, s, Objective::FastestShortest);
        query.window = window;
        let mut shortest = WalkSearch::new(ash, &query)?;
        let (by_length, _) = shortest.run(source, None);
        query.objective = Objective::Foremost;
        let mut foremost = WalkSearch::new(ash, &query)?;
        let (by_arrival, _) = foremost.run(source, None);
        for (&target, &([length, duration], _)) in &by_length {
            if target == source {
                continue;
            }
            let ([arrival, _], _) = by_arrival[&target];
            rows.push(WalkMetricsRow {
                source,
                target,
                length: length as usize,
                duration,
                arrival,
            });
        }
    }
    rows.sort_by_key(|r| (r.source, r.target));
    Ok(rows)
}
