//! Graph representation, `.gr` parsing/serialization, DAG checks, and the
//! deterministic generators used by tests and the CLI.
//!
//! Vertices are dense integers `0..n-1` internally and 1-indexed in files
//! (PACE convention). Only simple graphs are supported: self-loops and
//! parallel edges are rejected at construction.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

/// A directed or undirected simple graph.
///
/// Immutable after construction; edges are kept in a canonical sorted order
/// (undirected edges stored with `tail < head`), so serialization is
/// deterministic and `parse ∘ serialize` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
    /// Undirected view: neighbors of each vertex regardless of orientation.
    adj: Vec<Vec<usize>>,
    /// Successors per vertex; empty lists when the graph is undirected.
    succ: Vec<Vec<usize>>,
    /// Predecessors per vertex; empty lists when the graph is undirected.
    pred: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {vertex} out of range for {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("invalid size for generator {family}: {message}")]
    InvalidSize {
        family: &'static str,
        message: String,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing or malformed header, expected `p graph <n> <m> <u|d>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge, expected two 1-indexed endpoints")]
    MalformedEdge { line: usize },
    #[error("line {line}: endpoint {vertex} out of range 1..={n}")]
    EndpointOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({a}, {b})")]
    DuplicateEdge { line: usize, a: usize, b: usize },
    #[error("line {line}: unexpected extra edge, header declared {declared}")]
    TooManyEdges { line: usize, declared: usize },
    #[error("expected {declared} edges, found {found}")]
    MissingEdges { declared: usize, found: usize },
}

impl Graph {
    /// Build an undirected graph. Edges may be given in either orientation;
    /// they are canonicalized to `tail < head` and sorted.
    pub fn undirected(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph, GraphError> {
        Self::build(n, edges, false)
    }

    /// Build a directed graph. Anti-parallel pairs (`u→v` and `v→u`) are
    /// allowed; repeated ordered pairs are not.
    pub fn directed(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph, GraphError> {
        Self::build(n, edges, true)
    }

    fn build(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        directed: bool,
    ) -> Result<Graph, GraphError> {
        let mut canonical = Vec::new();
        let mut seen = HashSet::new();
        for (a, b) in edges {
            if a >= n {
                return Err(GraphError::EndpointOutOfRange { vertex: a, n });
            }
            if b >= n {
                return Err(GraphError::EndpointOutOfRange { vertex: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = if directed { (a, b) } else { (a.min(b), a.max(b)) };
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            canonical.push(e);
        }
        canonical.sort_unstable();

        let mut adj = vec![Vec::new(); n];
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(a, b) in &canonical {
            adj[a].push(b);
            adj[b].push(a);
            if directed {
                succ[a].push(b);
                pred[b].push(a);
            }
        }
        for lists in [&mut adj, &mut succ, &mut pred] {
            for l in lists.iter_mut() {
                l.sort_unstable();
                l.dedup();
            }
        }
        Ok(Graph {
            n,
            directed,
            edges: canonical,
            adj,
            succ,
            pred,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges in canonical sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in the undirected view (for directed graphs: tails
    /// and heads of all incident edges), sorted and deduplicated.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Successors of `v`; empty for undirected graphs.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// Predecessors of `v`; empty for undirected graphs.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// True if `u` and `v` are joined by an edge in either orientation.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// True if the directed edge `u → v` is present (undirected graphs:
    /// same as [`adjacent`](Self::adjacent)).
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if self.directed {
            self.succ[u].binary_search(&v).is_ok()
        } else {
            self.adjacent(u, v)
        }
    }

    /// Subgraph induced by `vertices`, with vertices relabeled by their
    /// position in the (sorted, deduplicated) input list.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut verts: Vec<usize> = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let index_of: std::collections::HashMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (index_of.get(&a), index_of.get(&b)) {
                (Some(&ia), Some(&ib)) => Some((ia, ib)),
                _ => None,
            })
            .collect();
        Self::build(verts.len(), edges, self.directed).expect("induced subgraph of a simple graph")
    }

    /// Parse the `.gr` format: header `p graph <n> <m> <u|d>`, then `m`
    /// lines `<a> <b>` with 1-indexed endpoints. Lines starting with `c`
    /// are comments.
    pub fn parse(text: &str) -> Result<Graph, ParseError> {
        let mut header: Option<(usize, usize, bool)> = None;
        let mut raw_edges: Vec<(usize, usize, usize)> = Vec::new(); // (a, b, line)
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            match header {
                None => {
                    let mut it = line.split_ascii_whitespace();
                    let ok = it.next() == Some("p") && it.next() == Some("graph");
                    let n = it.next().and_then(|t| t.parse::<usize>().ok());
                    let m = it.next().and_then(|t| t.parse::<usize>().ok());
                    let dir = match it.next() {
                        Some("u") => Some(false),
                        Some("d") => Some(true),
                        _ => None,
                    };
                    match (ok, n, m, dir, it.next()) {
                        (true, Some(n), Some(m), Some(d), None) => header = Some((n, m, d)),
                        _ => return Err(ParseError::MalformedHeader { line: line_no }),
                    }
                }
                Some((n, m, _)) => {
                    if raw_edges.len() == m {
                        return Err(ParseError::TooManyEdges {
                            line: line_no,
                            declared: m,
                        });
                    }
                    let mut it = line.split_ascii_whitespace();
                    let a = it.next().and_then(|t| t.parse::<usize>().ok());
                    let b = it.next().and_then(|t| t.parse::<usize>().ok());
                    let (a, b) = match (a, b, it.next()) {
                        (Some(a), Some(b), None) => (a, b),
                        _ => return Err(ParseError::MalformedEdge { line: line_no }),
                    };
                    for v in [a, b] {
                        if v == 0 || v > n {
                            return Err(ParseError::EndpointOutOfRange {
                                line: line_no,
                                vertex: v,
                                n,
                            });
                        }
                    }
                    raw_edges.push((a - 1, b - 1, line_no));
                }
            }
        }
        let (n, m, directed) = header.ok_or(ParseError::MalformedHeader { line: 1 })?;
        if raw_edges.len() != m {
            return Err(ParseError::MissingEdges {
                declared: m,
                found: raw_edges.len(),
            });
        }
        // Re-run the per-edge checks so diagnostics can name the line.
        let mut seen = HashSet::new();
        for &(a, b, line) in &raw_edges {
            if a == b {
                return Err(ParseError::SelfLoop {
                    line,
                    vertex: a + 1,
                });
            }
            let e = if directed { (a, b) } else { (a.min(b), a.max(b)) };
            if !seen.insert(e) {
                return Err(ParseError::DuplicateEdge {
                    line,
                    a: a + 1,
                    b: b + 1,
                });
            }
        }
        let graph = Self::build(n, raw_edges.iter().map(|&(a, b, _)| (a, b)), directed)
            .expect("edge list already validated");
        Ok(graph)
    }

    /// Serialize to the `.gr` format: sorted edges, 1-indexed endpoints,
    /// LF line endings.
    pub fn to_gr(&self) -> String {
        let mut out = String::new();
        let dir = if self.directed { "d" } else { "u" };
        writeln!(out, "p graph {} {} {}", self.n, self.edges.len(), dir).unwrap();
        for &(a, b) in &self.edges {
            writeln!(out, "{} {}", a + 1, b + 1).unwrap();
        }
        out
    }
}

/// A vertex permutation witnessing acyclicity: every directed edge points
/// forward in the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalOrder {
    order: Vec<usize>,
}

impl TopologicalOrder {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of each vertex in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DagError {
    #[error("check_dag requires a directed graph")]
    NotDirected,
    #[error("directed cycle found: {0:?}")]
    CycleFound(Vec<usize>),
}

/// Check acyclicity of a directed graph, returning the lexicographically
/// smallest topological order, or one directed cycle as a vertex list.
pub fn check_dag(g: &Graph) -> Result<TopologicalOrder, DagError> {
    if !g.is_directed() {
        return Err(DagError::NotDirected);
    }
    let n = g.n();
    let mut indegree: Vec<usize> = (0..n).map(|v| g.predecessors(v).len()).collect();
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in g.successors(v) {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                heap.push(std::cmp::Reverse(w));
            }
        }
    }
    if order.len() == n {
        return Ok(TopologicalOrder { order });
    }
    // Some vertices remain. Strip those not on any cycle (no successor
    // left inside the set), then walk successors until a vertex repeats.
    let mut remaining: HashSet<usize> = (0..n).filter(|&v| indegree[v] > 0).collect();
    loop {
        let dead: Vec<usize> = remaining
            .iter()
            .filter(|&&v| !g.successors(v).iter().any(|w| remaining.contains(w)))
            .copied()
            .collect();
        if dead.is_empty() {
            break;
        }
        for v in dead {
            remaining.remove(&v);
        }
    }
    let start = *remaining.iter().min().unwrap();
    let mut path = vec![start];
    let mut on_path: HashSet<usize> = [start].into();
    loop {
        let cur = *path.last().unwrap();
        let next = *g
            .successors(cur)
            .iter()
            .find(|w| remaining.contains(w))
            .expect("vertex with positive residual indegree set has a successor in it");
        if on_path.contains(&next) {
            let from = path.iter().position(|&v| v == next).unwrap();
            return Err(DagError::CycleFound(path[from..].to_vec()));
        }
        on_path.insert(next);
        path.push(next);
    }
}

/// Deterministic graph families for tests and the CLI.
pub mod generate {
    use super::{Graph, GraphError};

    fn size_error(family: &'static str, message: impl Into<String>) -> GraphError {
        GraphError::InvalidSize {
            family,
            message: message.into(),
        }
    }

    /// Undirected path on `n ≥ 1` vertices.
    pub fn path(n: usize) -> Result<Graph, GraphError> {
        if n < 1 {
            return Err(size_error("path", "need n >= 1"));
        }
        Graph::undirected(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Undirected cycle on `n ≥ 3` vertices.
    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        if n < 3 {
            return Err(size_error("cycle", "need n >= 3"));
        }
        Graph::undirected(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Complete undirected graph on `n ≥ 1` vertices.
    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        if n < 1 {
            return Err(size_error("complete", "need n >= 1"));
        }
        Graph::undirected(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    /// `rows × cols` grid; vertex `(r, c)` is `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Graph, GraphError> {
        if rows < 1 || cols < 1 {
            return Err(size_error("grid", "need rows >= 1 and cols >= 1"));
        }
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::undirected(rows * cols, edges)
    }

    /// Directed path `0 → 1 → … → n-1` on `n ≥ 1` vertices.
    pub fn chain_dag(n: usize) -> Result<Graph, GraphError> {
        if n < 1 {
            return Err(size_error("chain_dag", "need n >= 1"));
        }
        Graph::directed(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Edgeless DAG on `n ≥ 1` vertices.
    pub fn antichain_dag(n: usize) -> Result<Graph, GraphError> {
        if n < 1 {
            return Err(size_error("antichain_dag", "need n >= 1"));
        }
        Graph::directed(n, std::iter::empty())
    }
}
