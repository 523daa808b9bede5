//! Edge-universal labeling problems: validity of a vertex labeling is
//! decided by one `c × c` Boolean predicate evaluated independently on
//! every edge. Proper colorings, independent sets, and downsets are the
//! built-in instances.

use thiserror::Error;

use crate::graph::Graph;

/// An alphabet size `c` plus a `c × c` predicate table. For directed
/// semantics the predicate is evaluated as `P(label(tail), label(head))`;
/// undirected problems must have symmetric tables so a single evaluation
/// per edge is well-defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingProblem {
    name: String,
    c: usize,
    table: Vec<bool>,
    directed: bool,
    requires_dag: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("predicate table must be {c}x{c}, row {row} has {len} entries")]
    DimensionMismatch { c: usize, row: usize, len: usize },
    #[error("undirected problem has asymmetric predicate: P({a},{b}) != P({b},{a})")]
    AsymmetricUndirectedPredicate { a: usize, b: usize },
    #[error("line {line}: malformed predicate file")]
    MalformedFile { line: usize },
    #[error(
        "problem `{problem}` has {problem_kind} semantics but the graph is {graph_kind}"
    )]
    GraphMismatch {
        problem: String,
        problem_kind: &'static str,
        graph_kind: &'static str,
    },
    #[error("labeling has {len} entries, graph has {n} vertices")]
    LengthMismatch { len: usize, n: usize },
    #[error("vertex {vertex} labeled {label}, alphabet size is {c}")]
    LabelOutOfRange { vertex: usize, label: usize, c: usize },
}

impl LabelingProblem {
    /// Proper `c`-coloring: labels of adjacent vertices differ.
    pub fn coloring(c: usize) -> Result<LabelingProblem, ProblemError> {
        if c == 0 {
            return Err(ProblemError::EmptyAlphabet);
        }
        let table = (0..c * c).map(|i| i / c != i % c).collect();
        Ok(LabelingProblem {
            name: format!("coloring:{c}"),
            c,
            table,
            directed: false,
            requires_dag: false,
        })
    }

    /// Independent set: adjacent vertices are not both labeled 1.
    pub fn independent_set() -> LabelingProblem {
        LabelingProblem {
            name: "independent_set".to_string(),
            c: 2,
            table: vec![true, true, true, false],
            directed: false,
            requires_dag: false,
        }
    }

    /// Downset of a DAG: a head labeled 1 forces its tail to be labeled 1,
    /// so the 1-labeled set is closed under predecessors.
    pub fn downset() -> LabelingProblem {
        // P(tail, head): only (0, 1) is forbidden.
        LabelingProblem {
            name: "downset".to_string(),
            c: 2,
            table: vec![true, false, true, true],
            directed: true,
            requires_dag: true,
        }
    }

    /// A user-supplied predicate table (`table[a][b]` = `P(a, b)`).
    pub fn custom(
        c: usize,
        table: &[Vec<bool>],
        directed: bool,
        name: impl Into<String>,
    ) -> Result<LabelingProblem, ProblemError> {
        if c == 0 {
            return Err(ProblemError::EmptyAlphabet);
        }
        if table.len() != c {
            return Err(ProblemError::DimensionMismatch {
                c,
                row: table.len(),
                len: 0,
            });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != c {
                return Err(ProblemError::DimensionMismatch { c, row, len: r.len() });
            }
        }
        if !directed {
            for a in 0..c {
                for b in a + 1..c {
                    if table[a][b] != table[b][a] {
                        return Err(ProblemError::AsymmetricUndirectedPredicate { a, b });
                    }
                }
            }
        }
        Ok(LabelingProblem {
            name: name.into(),
            c,
            table: table.iter().flatten().copied().collect(),
            directed,
            requires_dag: false,
        })
    }

    /// Parse a predicate file: line 1 `c <c> <u|d>`, then `c` lines of `c`
    /// space-separated bits.
    pub fn parse(text: &str, name: impl Into<String>) -> Result<LabelingProblem, ProblemError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(ProblemError::MalformedFile { line: 1 })?;
        let mut it = header.split_ascii_whitespace();
        if it.next() != Some("c") {
            return Err(ProblemError::MalformedFile { line: line_no });
        }
        let c = it
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or(ProblemError::MalformedFile { line: line_no })?;
        let directed = match (it.next(), it.next()) {
            (Some("u"), None) => false,
            (Some("d"), None) => true,
            _ => return Err(ProblemError::MalformedFile { line: line_no }),
        };
        let mut table = Vec::with_capacity(c);
        for _ in 0..c {
            let (line_no, row) = lines
                .next()
                .ok_or(ProblemError::MalformedFile { line: line_no })?;
            let bits: Option<Vec<bool>> = row
                .split_ascii_whitespace()
                .map(|t| match t {
                    "0" => Some(false),
                    "1" => Some(true),
                    _ => None,
                })
                .collect();
            let bits = bits.ok_or(ProblemError::MalformedFile { line: line_no })?;
            table.push(bits);
        }
        Self::custom(c, &table, directed, name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Alphabet size; labels are `0..c-1`.
    pub fn alphabet_size(&self) -> usize {
        self.c
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Whether engines must verify the input graph is a DAG first (true
    /// only for the downset built-in).
    pub fn requires_dag(&self) -> bool {
        self.requires_dag
    }

    /// Predicate lookup: `P(a, b)` with `a` the tail label for directed
    /// semantics.
    pub fn satisfied(&self, a: usize, b: usize) -> bool {
        self.table[a * self.c + b]
    }

    /// Check orientation compatibility with a graph.
    pub fn check_graph(&self, g: &Graph) -> Result<(), ProblemError> {
        if self.directed != g.is_directed() {
            let kind = |d: bool| if d { "directed" } else { "undirected" };
            return Err(ProblemError::GraphMismatch {
                problem: self.name.clone(),
                problem_kind: kind(self.directed),
                graph_kind: kind(g.is_directed()),
            });
        }
        Ok(())
    }
}

/// A total assignment of labels to vertices, in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    values: Vec<usize>,
}

impl Labeling {
    pub fn new(values: Vec<usize>) -> Labeling {
        Labeling { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, v: usize) -> usize {
        self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Vertices labeled 1 — the set view used for independent sets and
    /// downsets.
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, &l)| (l == 1).then_some(v))
            .collect()
    }
}

impl From<Vec<usize>> for Labeling {
    fn from(values: Vec<usize>) -> Labeling {
        Labeling::new(values)
    }
}

/// A per-vertex assignment where some vertices may be unassigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLabeling {
    values: Vec<Option<usize>>,
}

impl PartialLabeling {
    /// All `n` vertices unassigned.
    pub fn unassigned(n: usize) -> PartialLabeling {
        PartialLabeling {
            values: vec![None; n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> PartialLabeling {
        let mut k = Self::unassigned(n);
        for (v, label) in pairs {
            k.set(v, label);
        }
        k
    }

    pub fn set(&mut self, v: usize, label: usize) {
        self.values[v] = Some(label);
    }

    pub fn clear(&mut self, v: usize) {
        self.values[v] = None;
    }

    /// The extension `self ∪ {v ↦ label}` as a new value.
    pub fn with(&self, v: usize, label: usize) -> PartialLabeling {
        let mut out = self.clone();
        out.set(v, label);
        out
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn assigned(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, l)| l.map(|l| (v, l)))
    }

    /// Convert to a total labeling; `None` if any vertex is unassigned.
    pub fn to_total(&self) -> Option<Labeling> {
        self.values
            .iter()
            .copied()
            .collect::<Option<Vec<usize>>>()
            .map(Labeling::new)
    }
}

/// Evaluate the predicate on every edge: true iff all are satisfied.
/// Undirected edges are checked once; symmetry of the table makes the
/// orientation irrelevant.
pub fn check_labeling(
    g: &Graph,
    prob: &LabelingProblem,
    labeling: &Labeling,
) -> Result<bool, ProblemError> {
    prob.check_graph(g)?;
    if labeling.len() != g.n() {
        return Err(ProblemError::LengthMismatch {
            len: labeling.len(),
            n: g.n(),
        });
    }
    for (v, &l) in labeling.values().iter().enumerate() {
        if l >= prob.alphabet_size() {
            return Err(ProblemError::LabelOutOfRange {
                vertex: v,
                label: l,
                c: prob.alphabet_size(),
            });
        }
    }
    Ok(g.edges()
        .iter()
        .all(|&(a, b)| prob.satisfied(labeling.get(a), labeling.get(b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn builtin_tables() {
        let col2 = LabelingProblem::coloring(2).unwrap();
        assert!(!col2.satisfied(0, 0));
        assert!(col2.satisfied(0, 1));
        assert!(col2.satisfied(1, 0));
        assert!(!col2.satisfied(1, 1));

        let indep = LabelingProblem::independent_set();
        assert!(indep.satisfied(0, 0));
        assert!(indep.satisfied(0, 1));
        assert!(indep.satisfied(1, 0));
        assert!(!indep.satisfied(1, 1));

        let down = LabelingProblem::downset();
        assert!(!down.satisfied(0, 1));
        assert!(down.satisfied(0, 0));
        assert!(down.satisfied(1, 0));
        assert!(down.satisfied(1, 1));
        assert!(down.requires_dag());
    }

    #[test]
    fn coloring_rejects_empty_alphabet() {
        assert_eq!(
            LabelingProblem::coloring(0),
            Err(ProblemError::EmptyAlphabet)
        );
    }

    #[test]
    fn custom_all_ones_is_vacuous() {
        let p =
            LabelingProblem::custom(2, &[vec![true, true], vec![true, true]], false, "any").unwrap();
        let g = generate::path(3).unwrap();
        for bits in 0..8usize {
            let lab = Labeling::new((0..3).map(|v| bits >> v & 1).collect());
            assert!(check_labeling(&g, &p, &lab).unwrap());
        }
    }

    #[test]
    fn custom_rejects_asymmetric_undirected() {
        let err = LabelingProblem::custom(2, &[vec![true, false], vec![true, true]], false, "bad")
            .unwrap_err();
        assert_eq!(
            err,
            ProblemError::AsymmetricUndirectedPredicate { a: 0, b: 1 }
        );
    }

    #[test]
    fn custom_rejects_wrong_dimensions() {
        assert!(matches!(
            LabelingProblem::custom(2, &[vec![true, true]], false, "short"),
            Err(ProblemError::DimensionMismatch { c: 2, .. })
        ));
        assert!(matches!(
            LabelingProblem::custom(2, &[vec![true], vec![true, true]], false, "ragged"),
            Err(ProblemError::DimensionMismatch { c: 2, row: 0, len: 1 })
        ));
    }

    #[test]
    fn custom_single_label_rejecting_edges() {
        let p = LabelingProblem::custom(1, &[vec![false]], false, "never").unwrap();
        let g = generate::path(2).unwrap();
        assert!(!check_labeling(&g, &p, &Labeling::new(vec![0, 0])).unwrap());
    }

    #[test]
    fn check_labeling_examples() {
        let g = generate::path(2).unwrap();
        let col2 = LabelingProblem::coloring(2).unwrap();
        assert!(check_labeling(&g, &col2, &Labeling::new(vec![0, 1])).unwrap());
        let indep = LabelingProblem::independent_set();
        assert!(!check_labeling(&g, &indep, &Labeling::new(vec![1, 1])).unwrap());

        let chain = generate::chain_dag(2).unwrap();
        let down = LabelingProblem::downset();
        assert!(!check_labeling(&chain, &down, &Labeling::new(vec![0, 1])).unwrap());
        assert!(check_labeling(&chain, &down, &Labeling::new(vec![1, 0])).unwrap());
    }

    #[test]
    fn check_labeling_rejects_orientation_mismatch() {
        let g = generate::path(2).unwrap();
        let down = LabelingProblem::downset();
        assert!(matches!(
            check_labeling(&g, &down, &Labeling::new(vec![0, 0])),
            Err(ProblemError::GraphMismatch { .. })
        ));
        let chain = generate::chain_dag(2).unwrap();
        let indep = LabelingProblem::independent_set();
        assert!(matches!(
            check_labeling(&chain, &indep, &Labeling::new(vec![0, 0])),
            Err(ProblemError::GraphMismatch { .. })
        ));
    }

    #[test]
    fn predicate_file_round_trip() {
        let text = "c 2 u\n1 1\n1 0\n";
        let p = LabelingProblem::parse(text, "indep-from-file").unwrap();
        assert_eq!(p.alphabet_size(), 2);
        assert!(!p.is_directed());
        assert!(!p.satisfied(1, 1));
        assert!(LabelingProblem::parse("c 2 u\n1 0\n1 1\n", "bad").is_err());
        assert!(LabelingProblem::parse("c 2 q\n1 1\n1 1\n", "bad").is_err());
    }

    #[test]
    fn partial_labeling_basics() {
        let mut k = PartialLabeling::unassigned(3);
        assert_eq!(k.to_total(), None);
        k.set(1, 1);
        assert_eq!(k.get(1), Some(1));
        assert_eq!(k.assigned().collect::<Vec<_>>(), vec![(1, 1)]);
        let k2 = k.with(0, 0).with(2, 0);
        assert_eq!(k2.to_total().unwrap().values(), &[0, 1, 0]);
        assert_eq!(k.assigned().count(), 1);
    }
}
