//! Path decompositions: validation, nice-ification, exact search via the
//! vertex-separation formulation, a greedy layout heuristic, and the `.pd`
//! file format.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::graph::Graph;

/// A sequence of bags covering all vertices and edges, with each vertex's
/// bags forming a contiguous interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<Vec<usize>>,
}

/// First violated condition found by [`validate`], with a witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("bag {bag} contains vertex {vertex}, out of range for {n} vertices")]
    VertexOutOfRange { bag: usize, vertex: usize, n: usize },
    #[error("vertex {0} appears in no bag")]
    MissingVertex(usize),
    #[error("edge ({0}, {1}) has no bag containing both endpoints")]
    UncoveredEdge(usize, usize),
    #[error("vertex {vertex} leaves the bags at index {gap} and reappears later")]
    IntervalGap { vertex: usize, gap: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid path decomposition: {0}")]
pub struct InvalidDecomposition(#[from] pub Violation);

impl PathDecomposition {
    /// Bags are sorted and deduplicated; the sequence itself is kept as given.
    pub fn new(bags: Vec<Vec<usize>>) -> PathDecomposition {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    /// Largest bag size minus one; 0 for an empty decomposition.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Parse the `.pd` format: header `s pd <r> <width+1> <n>`, then `r`
    /// lines `b <i> <v1> <v2> ...` with 1-indexed vertices in path order.
    /// Returns the decomposition and the declared vertex count.
    pub fn parse(text: &str) -> Result<(PathDecomposition, usize), PdParseError> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut bags: Vec<Vec<usize>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let line_no = idx + 1;
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            match header {
                None => {
                    let mut it = line.split_ascii_whitespace();
                    let ok = it.next() == Some("s") && it.next() == Some("pd");
                    let r = it.next().and_then(|t| t.parse::<usize>().ok());
                    let w1 = it.next().and_then(|t| t.parse::<usize>().ok());
                    let n = it.next().and_then(|t| t.parse::<usize>().ok());
                    match (ok, r, w1, n, it.next()) {
                        (true, Some(r), Some(w1), Some(n), None) => header = Some((r, w1, n)),
                        _ => return Err(PdParseError::MalformedHeader { line: line_no }),
                    }
                }
                Some((r, _, n)) => {
                    let mut it = line.split_ascii_whitespace();
                    if it.next() != Some("b") {
                        return Err(PdParseError::MalformedBag { line: line_no });
                    }
                    let index = it
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or(PdParseError::MalformedBag { line: line_no })?;
                    if index != bags.len() + 1 {
                        return Err(PdParseError::BagOutOfOrder {
                            line: line_no,
                            expected: bags.len() + 1,
                        });
                    }
                    if bags.len() == r {
                        return Err(PdParseError::TooManyBags { line: line_no, declared: r });
                    }
                    let mut bag = Vec::new();
                    for tok in it {
                        let v = tok
                            .parse::<usize>()
                            .map_err(|_| PdParseError::MalformedBag { line: line_no })?;
                        if v == 0 || v > n {
                            return Err(PdParseError::VertexOutOfRange {
                                line: line_no,
                                vertex: v,
                                n,
                            });
                        }
                        bag.push(v - 1);
                    }
                    bags.push(bag);
                }
            }
        }
        let (r, w1, n) = header.ok_or(PdParseError::MalformedHeader { line: 1 })?;
        if bags.len() != r {
            return Err(PdParseError::BagCountMismatch {
                declared: r,
                found: bags.len(),
            });
        }
        let pd = PathDecomposition::new(bags);
        let actual_w1 = pd.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        if actual_w1 != w1 {
            return Err(PdParseError::WidthMismatch {
                declared: w1,
                found: actual_w1,
            });
        }
        Ok((pd, n))
    }

    /// Serialize to the `.pd` format for a graph on `n` vertices.
    pub fn to_pd(&self, n: usize) -> String {
        let mut out = String::new();
        let w1 = self.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        writeln!(out, "s pd {} {} {}", self.bags.len(), w1, n).unwrap();
        for (i, bag) in self.bags.iter().enumerate() {
            write!(out, "b {}", i + 1).unwrap();
            for &v in bag {
                write!(out, " {}", v + 1).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdParseError {
    #[error("line {line}: missing or malformed header, expected `s pd <r> <width+1> <n>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed bag line, expected `b <i> <v1> <v2> ...`")]
    MalformedBag { line: usize },
    #[error("line {line}: bag index out of order, expected {expected}")]
    BagOutOfOrder { line: usize, expected: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: more bags than the declared {declared}")]
    TooManyBags { line: usize, declared: usize },
    #[error("expected {declared} bags, found {found}")]
    BagCountMismatch { declared: usize, found: usize },
    #[error("header declares max bag size {declared}, bags have max size {found}")]
    WidthMismatch { declared: usize, found: usize },
}

/// Check the three path-decomposition conditions against `g`. Returns the
/// width on success, or the first violated condition with a witness.
pub fn validate(g: &Graph, pd: &PathDecomposition) -> Result<usize, Violation> {
    let n = g.n();
    for (i, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::VertexOutOfRange { bag: i, vertex: v, n });
            }
        }
    }
    let mut first = vec![usize::MAX; n];
    let mut last = vec![usize::MAX; n];
    for (i, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            if first[v] == usize::MAX {
                first[v] = i;
            }
            last[v] = i;
        }
    }
    for v in 0..n {
        if first[v] == usize::MAX {
            return Err(Violation::MissingVertex(v));
        }
    }
    for v in 0..n {
        for i in first[v]..=last[v] {
            if pd.bags[i].binary_search(&v).is_err() {
                return Err(Violation::IntervalGap { vertex: v, gap: i });
            }
        }
    }
    for &(a, b) in g.edges() {
        // Intervals are contiguous at this point, so coverage is an
        // interval-intersection test.
        if first[a].max(first[b]) > last[a].min(last[b]) {
            return Err(Violation::UncoveredEdge(a, b));
        }
    }
    Ok(pd.width())
}

/// One refinement event: exactly one vertex enters or leaves the bag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Insert(usize),
    Remove(usize),
}

impl Event {
    pub fn vertex(&self) -> usize {
        match *self {
            Event::Insert(v) | Event::Remove(v) => v,
        }
    }
}

/// A path decomposition refined into `2n` single-vertex insert/remove
/// events. This is the form every dynamic program in the crate consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NicePathDecomposition {
    events: Vec<Event>,
    width: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NiceViolation {
    #[error("expected {expected} events for {n} vertices, found {found}")]
    EventCountMismatch { expected: usize, n: usize, found: usize },
    #[error("vertex {0} inserted while already in the bag, or inserted twice")]
    DoubleInsert(usize),
    #[error("vertex {0} removed while not in the bag")]
    RemoveAbsent(usize),
    #[error("vertex {0} never inserted")]
    NeverInserted(usize),
    #[error("vertex {0} never removed")]
    NeverRemoved(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({0}, {1}) never has both endpoints in the bag")]
    UncoveredEdge(usize, usize),
    #[error("stored width {stored} differs from induced width {induced}")]
    WidthMismatch { stored: usize, induced: usize },
}

impl NicePathDecomposition {
    /// Wrap an event sequence, checking the event-sequence invariants
    /// (single insert/remove per vertex, insert before remove). Coverage
    /// against a concrete graph is checked by [`Self::validate_for`].
    pub fn from_events(events: Vec<Event>) -> Result<NicePathDecomposition, NiceViolation> {
        let width = Self::shape_check(&events, None)?;
        Ok(NicePathDecomposition { events, width })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of vertices: half the event count.
    pub fn n(&self) -> usize {
        self.events.len() / 2
    }

    fn shape_check(events: &[Event], n: Option<usize>) -> Result<usize, NiceViolation> {
        if let Some(n) = n {
            for &e in events {
                if e.vertex() >= n {
                    return Err(NiceViolation::VertexOutOfRange { vertex: e.vertex(), n });
                }
            }
        }
        let bound = n.unwrap_or_else(|| {
            events.iter().map(|e| e.vertex() + 1).max().unwrap_or(0)
        });
        let mut in_bag = vec![false; bound];
        let mut inserted = vec![false; bound];
        let mut removed = vec![false; bound];
        let mut bag_size = 0usize;
        let mut max_bag = 0usize;
        for &e in events {
            match e {
                Event::Insert(v) => {
                    if inserted[v] || in_bag[v] {
                        return Err(NiceViolation::DoubleInsert(v));
                    }
                    inserted[v] = true;
                    in_bag[v] = true;
                    bag_size += 1;
                    max_bag = max_bag.max(bag_size);
                }
                Event::Remove(v) => {
                    if !in_bag[v] {
                        return Err(NiceViolation::RemoveAbsent(v));
                    }
                    in_bag[v] = false;
                    removed[v] = true;
                    bag_size -= 1;
                }
            }
        }
        if let Some(v) = (0..bound).find(|&v| inserted[v] && !removed[v]) {
            return Err(NiceViolation::NeverRemoved(v));
        }
        if let Some(n) = n {
            if events.len() != 2 * n {
                return Err(NiceViolation::EventCountMismatch {
                    expected: 2 * n,
                    n,
                    found: events.len(),
                });
            }
            if let Some(v) = (0..n).find(|&v| !inserted[v]) {
                return Err(NiceViolation::NeverInserted(v));
            }
        }
        Ok(max_bag.saturating_sub(1))
    }

    /// Full validity check against a graph: event-sequence invariants,
    /// every vertex covered, every edge covered, width consistent.
    pub fn validate_for(&self, g: &Graph) -> Result<(), NiceViolation> {
        let induced = Self::shape_check(&self.events, Some(g.n()))?;
        if induced != self.width {
            return Err(NiceViolation::WidthMismatch {
                stored: self.width,
                induced,
            });
        }
        // Edge coverage: both endpoints share a bag iff their event-index
        // intervals intersect.
        let iv = self.intervals();
        for &(a, b) in g.edges() {
            let (ia, ja) = iv.get(a);
            let (ib, jb) = iv.get(b);
            if ia.max(ib) > ja.min(jb) {
                return Err(NiceViolation::UncoveredEdge(a, b));
            }
        }
        Ok(())
    }

    /// The induced bag sequence (one bag per event).
    pub fn to_path_decomposition(&self) -> PathDecomposition {
        let mut bags = Vec::with_capacity(self.events.len());
        let mut bag: Vec<usize> = Vec::new();
        for &e in &self.events {
            match e {
                Event::Insert(v) => {
                    let pos = bag.partition_point(|&u| u < v);
                    bag.insert(pos, v);
                }
                Event::Remove(v) => {
                    let pos = bag.binary_search(&v).unwrap();
                    bag.remove(pos);
                }
            }
            bags.push(bag.clone());
        }
        PathDecomposition { bags }
    }

    /// Per-vertex event-index intervals (see [`VertexIntervals`]).
    pub fn intervals(&self) -> VertexIntervals {
        intervals(self)
    }
}

/// Closed per-vertex intervals `[i_v, j_v]` over 1-based event indices:
/// `v` is in the bag after event `t` exactly when `i_v ≤ t ≤ j_v` (so `v`
/// is inserted at `i_v` and removed at `j_v + 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexIntervals {
    intervals: Vec<(usize, usize)>,
}

impl VertexIntervals {
    pub fn get(&self, v: usize) -> (usize, usize) {
        self.intervals[v]
    }

    pub fn all(&self) -> &[(usize, usize)] {
        &self.intervals
    }
}

/// Read off each vertex's interval from the event sequence.
pub fn intervals(npd: &NicePathDecomposition) -> VertexIntervals {
    let n = npd.n();
    let mut intervals = vec![(0, 0); n];
    for (idx, &e) in npd.events().iter().enumerate() {
        let t = idx + 1;
        match e {
            Event::Insert(v) => intervals[v].0 = t,
            Event::Remove(v) => intervals[v].1 = t - 1,
        }
    }
    VertexIntervals { intervals }
}

/// Refine a valid path decomposition into exactly `2n` single-vertex
/// events, preserving the width. Between consecutive bags, departing
/// vertices are removed before arriving vertices are inserted, each group
/// ordered by vertex id.
pub fn to_nice(g: &Graph, pd: &PathDecomposition) -> Result<NicePathDecomposition, InvalidDecomposition> {
    let width = validate(g, pd).map_err(InvalidDecomposition)?;
    let mut events = Vec::with_capacity(2 * g.n());
    let empty: Vec<usize> = Vec::new();
    let r = pd.bags.len();
    for i in 0..=r {
        let prev = if i == 0 { &empty } else { &pd.bags[i - 1] };
        let next = if i == r { &empty } else { &pd.bags[i] };
        // Bags are sorted, so set differences by merge keep vertex-id order.
        for &v in prev {
            if next.binary_search(&v).is_err() {
                events.push(Event::Remove(v));
            }
        }
        for &v in next {
            if prev.binary_search(&v).is_err() {
                events.push(Event::Insert(v));
            }
        }
    }
    debug_assert_eq!(events.len(), 2 * g.n());
    let npd = NicePathDecomposition { events, width };
    debug_assert!(npd.validate_for(g).is_ok());
    Ok(npd)
}

/// Node/time budget for the exact search. The node budget is deterministic;
/// the optional wall-clock budget is a safety net for interactive use.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_states: u64,
    pub max_millis: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 8_000_000,
            max_millis: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("decomposition search budget exhausted ({0})")]
pub struct BudgetExceeded(pub String);

/// Decide whether `pw(g) ≤ max_width`, returning a witness decomposition
/// of width ≤ `max_width` if so and `None` if not (an exact answer, unlike
/// [`greedy_decomposition`]).
///
/// The search runs over vertex layouts: `pw(g)` equals the vertex
/// separation number, the minimum over orderings of the maximum number of
/// placed vertices that still have an unplaced neighbor. States are sets
/// of placed vertices, deduplicated; the walk is breadth-first with
/// vertices tried in increasing id, so the result is deterministic.
pub fn find_decomposition(
    g: &Graph,
    max_width: usize,
) -> Result<Option<PathDecomposition>, BudgetExceeded> {
    find_decomposition_with_budget(g, max_width, &Budget::default())
}

pub fn find_decomposition_with_budget(
    g: &Graph,
    max_width: usize,
    budget: &Budget,
) -> Result<Option<PathDecomposition>, BudgetExceeded> {
    let n = g.n();
    if n == 0 {
        return Ok(Some(PathDecomposition::new(Vec::new())));
    }
    if n > 64 {
        return Err(BudgetExceeded(format!(
            "exact search supports at most 64 vertices, graph has {n}"
        )));
    }
    let masks: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let boundary = |s: u64| -> u32 {
        let outside = full & !s;
        (0..n)
            .filter(|&v| s >> v & 1 == 1 && masks[v] & outside != 0)
            .count() as u32
    };

    let start = Instant::now();
    let mut parents: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut queue: VecDeque<u64> = VecDeque::new();
    parents.insert(0, (0, usize::MAX));
    queue.push_back(0);
    let mut visited: u64 = 1;
    while let Some(s) = queue.pop_front() {
        if s == full {
            // Reconstruct the layout, then turn it into bags.
            let mut layout = Vec::with_capacity(n);
            let mut cur = full;
            while cur != 0 {
                let (prev, v) = parents[&cur];
                layout.push(v);
                cur = prev;
            }
            layout.reverse();
            return Ok(Some(layout_to_decomposition(g, &layout)));
        }
        for v in 0..n {
            if s >> v & 1 == 1 {
                continue;
            }
            let next = s | (1 << v);
            if parents.contains_key(&next) {
                continue;
            }
            if boundary(next) as usize > max_width {
                continue;
            }
            visited += 1;
            if visited > budget.max_states {
                return Err(BudgetExceeded(format!(
                    "node budget of {} states exhausted",
                    budget.max_states
                )));
            }
            if let Some(ms) = budget.max_millis {
                if visited.is_multiple_of(4096) && start.elapsed().as_millis() as u64 > ms {
                    return Err(BudgetExceeded(format!("time budget of {ms} ms exhausted")));
                }
            }
            parents.insert(next, (s, v));
            queue.push_back(next);
        }
    }
    Ok(None)
}

/// Smallest-width decomposition the exact search can certify within the
/// budget: tries widths 0, 1, … until [`find_decomposition`] succeeds.
pub fn exact_decomposition(g: &Graph, budget: &Budget) -> Result<PathDecomposition, BudgetExceeded> {
    for width in 0..g.n().max(1) {
        if let Some(pd) = find_decomposition_with_budget(g, width, budget)? {
            return Ok(pd);
        }
    }
    Ok(PathDecomposition::new(vec![(0..g.n()).collect()]))
}

/// Deterministic layout heuristic: repeatedly place the vertex that
/// minimizes the resulting boundary size (ties broken by vertex id), then
/// convert the layout to bags. The width is an upper bound on `pw(g)`.
///
/// Placing `v` changes the boundary by [v still has an unplaced neighbor]
/// minus the number of placed vertices whose last unplaced neighbor was
/// `v`. The latter ("closer") counts are maintained incrementally, so the
/// whole layout costs O((n + m) log n) — a vertex enters the closer role
/// at most once, when its unplaced degree drops to one.
pub fn greedy_decomposition(g: &Graph) -> PathDecomposition {
    let n = g.n();
    if n == 0 {
        return PathDecomposition::new(Vec::new());
    }
    // outside_deg[u]: neighbors of u not yet placed.
    // closers[w]: placed neighbors of w whose only unplaced neighbor is w.
    let mut outside_deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut closers: Vec<usize> = vec![0; n];
    let mut placed = vec![false; n];
    let key = |v: usize, outside_deg: &[usize], closers: &[usize]| -> i64 {
        (outside_deg[v] > 0) as i64 - closers[v] as i64
    };
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<(i64, usize)>> = (0..n)
        .map(|v| std::cmp::Reverse((key(v, &outside_deg, &closers), v)))
        .collect();
    let mut layout = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse((k, v))) = heap.pop() {
        if placed[v] {
            continue;
        }
        // Stale entry: the key may have changed since this was pushed.
        let fresh = key(v, &outside_deg, &closers);
        if fresh != k {
            heap.push(std::cmp::Reverse((fresh, v)));
            continue;
        }
        placed[v] = true;
        layout.push(v);
        for &u in g.neighbors(v) {
            outside_deg[u] -= 1;
            // A placed u whose unplaced degree just hit one starts closing
            // its single remaining unplaced neighbor. (Hitting zero needs
            // no undo: the neighbor it was closing is v, already placed.)
            if placed[u] && outside_deg[u] == 1 {
                for &w in g.neighbors(u) {
                    if !placed[w] {
                        closers[w] += 1;
                        heap.push(std::cmp::Reverse((key(w, &outside_deg, &closers), w)));
                    }
                }
            }
            if !placed[u] {
                heap.push(std::cmp::Reverse((key(u, &outside_deg, &closers), u)));
            }
        }
        if outside_deg[v] == 1 {
            for &w in g.neighbors(v) {
                if !placed[w] {
                    closers[w] += 1;
                    heap.push(std::cmp::Reverse((key(w, &outside_deg, &closers), w)));
                }
            }
        }
    }
    layout_to_decomposition(g, &layout)
}

/// Bags from a vertex layout: bag `j` holds the `j`-th vertex plus every
/// earlier vertex that still has a neighbor outside the first `j - 1`.
/// Vertex `u` is in exactly the bags from its own position through the
/// position of its last-placed neighbor, so the bags are filled interval
/// by interval in time linear in their total content.
fn layout_to_decomposition(g: &Graph, layout: &[usize]) -> PathDecomposition {
    let n = g.n();
    let mut position = vec![0usize; n];
    for (i, &v) in layout.iter().enumerate() {
        position[v] = i;
    }
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in 0..n {
        let last = g
            .neighbors(u)
            .iter()
            .map(|&w| position[w])
            .max()
            .unwrap_or(position[u])
            .max(position[u]);
        for bag in &mut bags[position[u]..=last] {
            bag.push(u);
        }
    }
    for bag in &mut bags {
        bag.sort_unstable();
    }
    let pd = PathDecomposition { bags };
    debug_assert!(validate(g, &pd).is_ok());
    pd
}
