//! The core dynamic program over a nice path decomposition: exact counting
//! of valid labelings and of extensions of a partial labeling, plus two
//! exactly-uniform samplers.
//!
//! The state after each event is a layer table mapping bag labelings
//! (mixed-radix codes over the sorted bag) to arbitrary-precision counts:
//! entry `L_i` holds the number of valid labelings of the graph seen so
//! far whose restriction to the current bag equals `L_i`. Insertion of a
//! vertex filters by the edge predicates against its neighbors inside the
//! bag; removal sums the vertex's label out.
//!
//! All counts are arbitrary-precision from the start — downset counts
//! already exceed 64 bits on an edgeless 70-vertex DAG — and all random
//! choices are made by exact integer arithmetic, so both samplers are
//! exactly uniform, not merely approximately so.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

use crate::decomposition::{Event, NicePathDecomposition, NiceViolation};
use crate::graph::{check_dag, DagError, Graph};
use crate::problems::{Labeling, LabelingProblem, PartialLabeling, ProblemError};

/// Exact nonnegative count; never truncated or rounded.
pub type Count = BigUint;

/// Largest layer table the engine will allocate.
const MAX_TABLE: usize = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid nice path decomposition: {0}")]
    InvalidDecomposition(#[from] NiceViolation),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("downset problems require a DAG; found directed cycle {0:?}")]
    NotADag(Vec<usize>),
    #[error("no valid labeling exists")]
    NoValidLabeling,
    #[error("layer table with {bag_size} bag vertices and {c} labels exceeds the size limit")]
    TableTooLarge { bag_size: usize, c: usize },
}

/// One layer of the dynamic program: the sorted bag after an event and the
/// dense count table indexed by mixed-radix code `Σ label(bag[j]) · c^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTable {
    c: usize,
    bag: Vec<usize>,
    counts: Vec<Count>,
}

impl LayerTable {
    pub fn bag(&self) -> &[usize] {
        &self.bag
    }

    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    /// Sum over all bag labelings: the number of valid labelings of the
    /// subgraph induced by everything seen so far.
    pub fn total(&self) -> Count {
        self.counts.iter().sum()
    }

    /// Code of a bag labeling given as one label per bag vertex, in bag
    /// order.
    pub fn code_of(&self, labels: &[usize]) -> usize {
        assert_eq!(labels.len(), self.bag.len());
        labels
            .iter()
            .rev()
            .fold(0, |acc, &l| acc * self.c + l)
    }

    pub fn count_for(&self, labels: &[usize]) -> &Count {
        &self.counts[self.code_of(labels)]
    }
}

/// All layer tables of one forward pass, enabling repeated backward
/// sampling without re-running the dynamic program.
#[derive(Debug, Clone)]
pub struct DpTrace {
    c: usize,
    events: Vec<Event>,
    layers: Vec<LayerTable>,
    total: Count,
}

#[derive(Debug, Clone, Copy)]
struct NeighborCheck {
    pos: u32,
    /// Evaluate `P(label(v), label(w))` — the inserted vertex is the tail
    /// (or the problem is undirected).
    tail_check: bool,
    /// Evaluate `P(label(w), label(v))` — the inserted vertex is the head.
    head_check: bool,
}

#[derive(Debug, Clone, Copy)]
struct PlannedStep {
    event: Event,
    /// Insert: position of the vertex in the bag after the event. Remove:
    /// its position in the bag before the event.
    pos: u32,
    bag_len_after: u32,
    size_after: usize,
    /// Range into the shared neighbor-check pool (insertions only).
    neighbors: (u32, u32),
}

/// Precomputed per-event metadata: bag positions, table sizes, and the
/// bag-local adjacency of each inserted vertex, flattened into two
/// arrays to keep repeated passes cache-friendly.
struct EventPlan {
    c: usize,
    n: usize,
    pred: Vec<bool>,
    steps: Vec<PlannedStep>,
    neighbor_pool: Vec<NeighborCheck>,
}

fn checked_table_size(c: usize, bag_size: usize) -> Result<usize, EngineError> {
    let mut size = 1usize;
    for _ in 0..bag_size {
        size = size
            .checked_mul(c)
            .filter(|&s| s <= MAX_TABLE)
            .ok_or(EngineError::TableTooLarge { bag_size, c })?;
    }
    Ok(size)
}

impl EventPlan {
    fn build(g: &Graph, npd: &NicePathDecomposition, prob: &LabelingProblem) -> Result<EventPlan, EngineError> {
        prob.check_graph(g)?;
        if prob.requires_dag() {
            match check_dag(g) {
                Ok(_) => {}
                Err(DagError::CycleFound(cycle)) => return Err(EngineError::NotADag(cycle)),
                Err(DagError::NotDirected) => unreachable!("orientation already checked"),
            }
        }
        npd.validate_for(g)?;
        let c = prob.alphabet_size();
        let mut bag: Vec<usize> = Vec::new();
        let mut steps = Vec::with_capacity(npd.events().len());
        let mut neighbor_pool: Vec<NeighborCheck> = Vec::new();
        for &event in npd.events() {
            match event {
                Event::Insert(v) => {
                    let pos = bag.partition_point(|&u| u < v);
                    bag.insert(pos, v);
                    let start = neighbor_pool.len() as u32;
                    for (w_pos, &w) in bag.iter().enumerate() {
                        if w == v || !g.adjacent(v, w) {
                            continue;
                        }
                        neighbor_pool.push(if g.is_directed() {
                            NeighborCheck {
                                pos: w_pos as u32,
                                tail_check: g.has_edge(v, w),
                                head_check: g.has_edge(w, v),
                            }
                        } else {
                            NeighborCheck {
                                pos: w_pos as u32,
                                tail_check: true,
                                head_check: false,
                            }
                        });
                    }
                    steps.push(PlannedStep {
                        event,
                        pos: pos as u32,
                        bag_len_after: bag.len() as u32,
                        size_after: checked_table_size(c, bag.len())?,
                        neighbors: (start, neighbor_pool.len() as u32),
                    });
                }
                Event::Remove(v) => {
                    let pos = bag.binary_search(&v).expect("validated event sequence");
                    bag.remove(pos);
                    steps.push(PlannedStep {
                        event,
                        pos: pos as u32,
                        bag_len_after: bag.len() as u32,
                        size_after: checked_table_size(c, bag.len())?,
                        neighbors: (0, 0),
                    });
                }
            }
        }
        Ok(EventPlan {
            c,
            n: g.n(),
            pred: (0..c * c).map(|i| prob.satisfied(i / c, i % c)).collect(),
            steps,
            neighbor_pool,
        })
    }

    #[inline]
    fn pred(&self, a: usize, b: usize) -> bool {
        self.pred[a * self.c + b]
    }

    /// One forward pass. `partial` zeroes inconsistent entries at each
    /// insertion; `trace` collects every layer table.
    ///
    /// The layer table is split into an arena of distinct big-integer
    /// values and a dense index vector: insertion only filters and
    /// relocates entries, so it moves `u32` indices; the actual additions
    /// happen at removals, where fresh sums are materialized. Index 0 is
    /// the structural zero.
    fn run(&self, partial: Option<&PartialLabeling>, mut trace: Option<&mut Vec<LayerTable>>) -> Count {
        let c = self.c;
        let mut arena: Vec<Count> = vec![Count::zero(), Count::one()];
        let mut idx: Vec<u32> = vec![1];
        let mut digits: Vec<usize> = Vec::new();
        // The sorted bag is only needed to label trace layers.
        let mut bag: Vec<usize> = Vec::new();
        for step in &self.steps {
            match step.event {
                Event::Insert(v) => {
                    let pos = step.pos as usize;
                    let stride = c.pow(step.pos);
                    let wide_stride = stride * c;
                    let forced = partial.and_then(|p| p.get(v));
                    let checks =
                        &self.neighbor_pool[step.neighbors.0 as usize..step.neighbors.1 as usize];
                    let mut next: Vec<u32> = Vec::with_capacity(step.size_after);
                    digits.clear();
                    digits.resize(step.bag_len_after as usize, 0);
                    for code in 0..step.size_after {
                        let label_v = digits[pos];
                        let ok = forced.is_none_or(|f| f == label_v)
                            && checks.iter().all(|nc| {
                                let label_w = digits[nc.pos as usize];
                                (!nc.tail_check || self.pred(label_v, label_w))
                                    && (!nc.head_check || self.pred(label_w, label_v))
                            });
                        if ok {
                            let old_code = code % stride + code / wide_stride * stride;
                            next.push(idx[old_code]);
                        } else {
                            next.push(0);
                        }
                        // Odometer over base-c digit vectors.
                        for d in digits.iter_mut() {
                            *d += 1;
                            if *d < c {
                                break;
                            }
                            *d = 0;
                        }
                    }
                    idx = next;
                }
                Event::Remove(_) => {
                    let stride = c.pow(step.pos);
                    let mut next_arena: Vec<Count> = Vec::with_capacity(step.size_after + 1);
                    next_arena.push(Count::zero());
                    let mut next: Vec<u32> = Vec::with_capacity(step.size_after);
                    for code in 0..step.size_after {
                        let low = code % stride;
                        let high = code / stride;
                        let base = low + high * stride * c;
                        let mut acc = if c == 1 {
                            arena[idx[base] as usize].clone()
                        } else {
                            &arena[idx[base] as usize] + &arena[idx[base + stride] as usize]
                        };
                        for sigma in 2..c {
                            acc += &arena[idx[base + sigma * stride] as usize];
                        }
                        next.push(next_arena.len() as u32);
                        next_arena.push(acc);
                    }
                    arena = next_arena;
                    idx = next;
                }
            }
            if let Some(out) = trace.as_deref_mut() {
                match step.event {
                    Event::Insert(v) => bag.insert(step.pos as usize, v),
                    Event::Remove(_) => {
                        bag.remove(step.pos as usize);
                    }
                }
                out.push(LayerTable {
                    c,
                    bag: bag.clone(),
                    counts: idx.iter().map(|&i| arena[i as usize].clone()).collect(),
                });
            }
        }
        debug_assert_eq!(idx.len(), 1);
        arena[idx[0] as usize].clone()
    }

    fn check_partial(&self, k: &PartialLabeling) -> Result<(), EngineError> {
        if k.len() != self.n {
            return Err(ProblemError::LengthMismatch {
                len: k.len(),
                n: self.n,
            }
            .into());
        }
        for (v, label) in k.assigned() {
            if label >= self.c {
                return Err(ProblemError::LabelOutOfRange {
                    vertex: v,
                    label,
                    c: self.c,
                }
                .into());
            }
        }
        Ok(())
    }
}

/// Exact number of labelings `L` with every edge predicate satisfied.
pub fn count_valid_labelings(
    g: &Graph,
    npd: &NicePathDecomposition,
    prob: &LabelingProblem,
) -> Result<Count, EngineError> {
    let plan = EventPlan::build(g, npd, prob)?;
    Ok(plan.run(None, None))
}

/// Exact number of valid labelings agreeing with `k` on every assigned
/// vertex. With `k` fully unassigned this equals [`count_valid_labelings`].
pub fn count_extensions(
    g: &Graph,
    npd: &NicePathDecomposition,
    prob: &LabelingProblem,
    k: &PartialLabeling,
) -> Result<Count, EngineError> {
    let plan = EventPlan::build(g, npd, prob)?;
    plan.check_partial(k)?;
    Ok(plan.run(Some(k), None))
}

/// Forward pass retaining every layer table, for repeated backward
/// sampling.
pub fn trace(
    g: &Graph,
    npd: &NicePathDecomposition,
    prob: &LabelingProblem,
) -> Result<DpTrace, EngineError> {
    let plan = EventPlan::build(g, npd, prob)?;
    let mut layers = Vec::with_capacity(plan.steps.len());
    let total = plan.run(None, Some(&mut layers));
    Ok(DpTrace {
        c: plan.c,
        events: npd.events().to_vec(),
        layers,
        total,
    })
}

/// The reference sampler: assigns vertices one at a time in id order,
/// drawing each label in proportion to the exact number of valid
/// extensions. Every valid labeling is returned with probability exactly
/// `1/N`.
pub fn sample_labeling<R: RngCore + ?Sized>(
    g: &Graph,
    npd: &NicePathDecomposition,
    prob: &LabelingProblem,
    rng: &mut R,
) -> Result<Labeling, EngineError> {
    let plan = EventPlan::build(g, npd, prob)?;
    let c = plan.c;
    let mut k = PartialLabeling::unassigned(g.n());
    for v in 0..g.n() {
        let mut weights = Vec::with_capacity(c);
        for sigma in 0..c {
            k.set(v, sigma);
            weights.push(plan.run(Some(&k), None));
        }
        k.clear(v);
        if weights.iter().all(Zero::is_zero) {
            // Only reachable on the first vertex; afterwards the previous
            // draw guarantees a positive extension count.
            return Err(EngineError::NoValidLabeling);
        }
        let tau = weighted_choice(rng, &weights);
        k.set(v, tau);
    }
    Ok(k.to_total().unwrap_or_else(|| Labeling::new(Vec::new())))
}

/// Single-pass sampler: one forward pass storing the trace, then a
/// backward event replay drawing each removed vertex's label from the
/// stored counts. Distribution identical to [`sample_labeling`].
pub fn sample_labeling_fast<R: RngCore + ?Sized>(
    g: &Graph,
    npd: &NicePathDecomposition,
    prob: &LabelingProblem,
    rng: &mut R,
) -> Result<Labeling, EngineError> {
    trace(g, npd, prob)?.sample(rng)
}

impl DpTrace {
    pub fn total(&self) -> &Count {
        &self.total
    }

    pub fn layers(&self) -> &[LayerTable] {
        &self.layers
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Draw one exactly-uniform valid labeling by replaying the events
    /// backward: a vertex's label is decided at its removal event, in
    /// proportion to the counts the forward pass stored just before that
    /// removal.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Labeling, EngineError> {
        if self.total.is_zero() {
            return Err(EngineError::NoValidLabeling);
        }
        let c = self.c;
        let n = self.events.len() / 2;
        let mut labels = vec![0usize; n];
        // Digits of the current bag labeling, aligned with the sorted bag
        // of the layer being walked.
        let mut digits: Vec<usize> = Vec::new();
        for t in (0..self.events.len()).rev() {
            match self.events[t] {
                Event::Remove(v) => {
                    let prev = &self.layers[t - 1];
                    let pos = prev.bag.binary_search(&v).expect("v in bag before removal");
                    let stride = c.pow(pos as u32);
                    let code: usize = digits.iter().rev().fold(0, |acc, &d| acc * c + d);
                    let low = code % stride;
                    let high = code / stride;
                    let base = low + high * stride * c;
                    let sigma = {
                        let weights: Vec<&Count> =
                            (0..c).map(|s| &prev.counts[base + s * stride]).collect();
                        weighted_choice_by_ref(rng, &weights)
                    };
                    labels[v] = sigma;
                    digits.insert(pos, sigma);
                }
                Event::Insert(v) => {
                    let bag = &self.layers[t].bag;
                    let pos = bag.binary_search(&v).expect("v in bag after insertion");
                    digits.remove(pos);
                }
            }
        }
        Ok(Labeling::new(labels))
    }
}

/// Uniform arbitrary-precision integer in `[0, bound)` by rejection from
/// uniform random bits.
pub(crate) fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: &Count) -> Count {
    assert!(!bound.is_zero(), "uniform_below requires a positive bound");
    if bound.is_one() {
        return Count::zero();
    }
    let bits = bound.bits();
    let chunks = bits.div_ceil(32) as usize;
    let top_mask: u32 = if bits.is_multiple_of(32) {
        u32::MAX
    } else {
        (1u32 << (bits % 32)) - 1
    };
    loop {
        let mut words: Vec<u32> = (0..chunks).map(|_| rng.next_u32()).collect();
        *words.last_mut().unwrap() &= top_mask;
        let candidate = Count::from_slice(&words);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Index drawn with probability `weights[i] / Σ weights`, by prefix sums
/// over a uniform draw below the total. At least one weight must be
/// positive.
pub(crate) fn weighted_choice<R: RngCore + ?Sized>(rng: &mut R, weights: &[Count]) -> usize {
    let total: Count = weights.iter().sum();
    let mut x = uniform_below(rng, &total);
    for (i, w) in weights.iter().enumerate() {
        if &x < w {
            return i;
        }
        x -= w;
    }
    unreachable!("x < total ensures some bucket matches")
}

pub(crate) fn weighted_choice_by_ref<R: RngCore + ?Sized>(rng: &mut R, weights: &[&Count]) -> usize {
    let total: Count = weights.iter().copied().sum();
    let mut x = uniform_below(rng, &total);
    for (i, w) in weights.iter().enumerate() {
        if &&x < w {
            return i;
        }
        x -= *w;
    }
    unreachable!("x < total ensures some bucket matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{greedy_decomposition, to_nice};
    use crate::graph::generate;
    use crate::problems::check_labeling;

    fn nice(g: &Graph) -> NicePathDecomposition {
        to_nice(g, &greedy_decomposition(g)).unwrap()
    }

    #[test]
    fn count_independent_sets_path3() {
        let g = generate::path(3).unwrap();
        let count = count_valid_labelings(&g, &nice(&g), &LabelingProblem::independent_set()).unwrap();
        assert_eq!(count, Count::from(5u32));
    }

    #[test]
    fn count_colorings_triangle() {
        let g = generate::complete(3).unwrap();
        let prob = LabelingProblem::coloring(3).unwrap();
        assert_eq!(
            count_valid_labelings(&g, &nice(&g), &prob).unwrap(),
            Count::from(6u32)
        );
    }

    #[test]
    fn count_colorings_square() {
        let g = generate::cycle(4).unwrap();
        let prob = LabelingProblem::coloring(3).unwrap();
        assert_eq!(
            count_valid_labelings(&g, &nice(&g), &prob).unwrap(),
            Count::from(18u32)
        );
    }

    #[test]
    fn count_single_vertex() {
        let g = Graph::undirected(1, []).unwrap();
        let prob = LabelingProblem::coloring(3).unwrap();
        assert_eq!(
            count_valid_labelings(&g, &nice(&g), &prob).unwrap(),
            Count::from(3u32)
        );
    }

    #[test]
    fn count_downsets_of_chain_and_antichain() {
        let chain = generate::chain_dag(3).unwrap();
        let down = LabelingProblem::downset();
        assert_eq!(
            count_valid_labelings(&chain, &nice(&chain), &down).unwrap(),
            Count::from(4u32)
        );
        let anti = generate::antichain_dag(5).unwrap();
        assert_eq!(
            count_valid_labelings(&anti, &nice(&anti), &down).unwrap(),
            Count::from(32u32)
        );
    }

    #[test]
    fn count_empty_graph() {
        let g = Graph::undirected(0, []).unwrap();
        let npd = NicePathDecomposition::from_events(Vec::new()).unwrap();
        let prob = LabelingProblem::coloring(2).unwrap();
        assert_eq!(count_valid_labelings(&g, &npd, &prob).unwrap(), Count::one());
    }

    #[test]
    fn downset_on_cycle_is_rejected() {
        let g = Graph::directed(2, [(0, 1), (1, 0)]).unwrap();
        let npd = NicePathDecomposition::from_events(vec![
            Event::Insert(0),
            Event::Insert(1),
            Event::Remove(0),
            Event::Remove(1),
        ])
        .unwrap();
        assert_eq!(
            count_valid_labelings(&g, &npd, &LabelingProblem::downset()),
            Err(EngineError::NotADag(vec![0, 1]))
        );
    }

    #[test]
    fn oversized_layer_table_is_rejected() {
        let g = generate::complete(60).unwrap();
        let npd = nice(&g);
        let prob = LabelingProblem::coloring(3).unwrap();
        assert!(matches!(
            count_valid_labelings(&g, &npd, &prob),
            Err(EngineError::TableTooLarge { .. })
        ));
    }

    #[test]
    fn mismatched_decomposition_is_rejected() {
        let g = generate::path(3).unwrap();
        let other = generate::path(2).unwrap();
        let npd = nice(&other);
        assert!(matches!(
            count_valid_labelings(&g, &npd, &LabelingProblem::independent_set()),
            Err(EngineError::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn extensions_forced_middle_vertex() {
        let g = generate::path(3).unwrap();
        let prob = LabelingProblem::independent_set();
        let k = PartialLabeling::from_pairs(3, [(1, 1)]);
        assert_eq!(
            count_extensions(&g, &nice(&g), &prob, &k).unwrap(),
            Count::one()
        );
    }

    #[test]
    fn extensions_of_empty_partial_equal_count() {
        let g = generate::cycle(4).unwrap();
        let prob = LabelingProblem::coloring(3).unwrap();
        let npd = nice(&g);
        assert_eq!(
            count_extensions(&g, &npd, &prob, &PartialLabeling::unassigned(4)).unwrap(),
            count_valid_labelings(&g, &npd, &prob).unwrap()
        );
    }

    #[test]
    fn extensions_violating_fixed_edge() {
        let g = generate::path(2).unwrap();
        let prob = LabelingProblem::independent_set();
        let k = PartialLabeling::from_pairs(2, [(0, 1), (1, 1)]);
        assert_eq!(
            count_extensions(&g, &nice(&g), &prob, &k).unwrap(),
            Count::zero()
        );
    }

    #[test]
    fn extension_label_out_of_range() {
        let g = generate::path(2).unwrap();
        let prob = LabelingProblem::independent_set();
        let k = PartialLabeling::from_pairs(2, [(0, 7)]);
        assert!(matches!(
            count_extensions(&g, &nice(&g), &prob, &k),
            Err(EngineError::Problem(ProblemError::LabelOutOfRange { .. }))
        ));
    }

    #[test]
    fn samplers_return_valid_labelings() {
        use rand::SeedableRng;
        let g = generate::cycle(4).unwrap();
        let prob = LabelingProblem::coloring(3).unwrap();
        let npd = nice(&g);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let lab = sample_labeling(&g, &npd, &prob, &mut rng).unwrap();
            assert!(check_labeling(&g, &prob, &lab).unwrap());
            let lab = sample_labeling_fast(&g, &npd, &prob, &mut rng).unwrap();
            assert!(check_labeling(&g, &prob, &lab).unwrap());
        }
    }

    #[test]
    fn sampler_rejects_unsatisfiable() {
        use rand::SeedableRng;
        let g = generate::path(2).unwrap();
        let prob = LabelingProblem::coloring(1).unwrap();
        let npd = nice(&g);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        assert_eq!(
            sample_labeling(&g, &npd, &prob, &mut rng),
            Err(EngineError::NoValidLabeling)
        );
        assert_eq!(
            sample_labeling_fast(&g, &npd, &prob, &mut rng),
            Err(EngineError::NoValidLabeling)
        );
    }

    #[test]
    fn fixed_seed_reproduces_labeling() {
        use rand::SeedableRng;
        let g = generate::cycle(5).unwrap();
        let prob = LabelingProblem::coloring(3).unwrap();
        let npd = nice(&g);
        let draw = || {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
            sample_labeling(&g, &npd, &prob, &mut rng).unwrap()
        };
        assert_eq!(draw(), draw());
        let draw_fast = || {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
            sample_labeling_fast(&g, &npd, &prob, &mut rng).unwrap()
        };
        assert_eq!(draw_fast(), draw_fast());
    }

    #[test]
    fn sample_empty_graph() {
        use rand::SeedableRng;
        let g = Graph::undirected(0, []).unwrap();
        let npd = NicePathDecomposition::from_events(Vec::new()).unwrap();
        let prob = LabelingProblem::independent_set();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        assert!(sample_labeling(&g, &npd, &prob, &mut rng).unwrap().is_empty());
        assert!(sample_labeling_fast(&g, &npd, &prob, &mut rng)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_vertex_two_labels_is_a_coin_flip() {
        use rand::SeedableRng;
        let g = Graph::undirected(1, []).unwrap();
        let prob = LabelingProblem::coloring(2).unwrap();
        let npd = nice(&g);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let mut ones = 0usize;
        let n = 20_000;
        for _ in 0..n {
            ones += sample_labeling_fast(&g, &npd, &prob, &mut rng).unwrap().get(0);
        }
        let dev = (ones as f64 - n as f64 / 2.0).abs();
        // 6 sigma of Binomial(n, 1/2).
        assert!(dev < 6.0 * (n as f64 * 0.25).sqrt(), "ones = {ones}");
    }

    #[test]
    fn layer_tables_expose_bag_and_counts() {
        let g = generate::path(2).unwrap();
        let npd = NicePathDecomposition::from_events(vec![
            Event::Insert(0),
            Event::Insert(1),
            Event::Remove(0),
            Event::Remove(1),
        ])
        .unwrap();
        let prob = LabelingProblem::independent_set();
        let tr = trace(&g, &npd, &prob).unwrap();
        assert_eq!(tr.total(), &Count::from(3u32));
        let after_insert_both = &tr.layers()[1];
        assert_eq!(after_insert_both.bag(), &[0, 1]);
        assert_eq!(after_insert_both.counts().len(), 4);
        assert_eq!(after_insert_both.count_for(&[1, 1]), &Count::zero());
        assert_eq!(after_insert_both.count_for(&[0, 1]), &Count::one());
        assert_eq!(after_insert_both.total(), Count::from(3u32));
    }

    #[test]
    fn uniform_below_stays_below() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let bound = Count::from(97u32);
        for _ in 0..1000 {
            assert!(uniform_below(&mut rng, &bound) < bound);
        }
        let one = Count::one();
        assert!(uniform_below(&mut rng, &one).is_zero());
    }

    /// Feeds every 3-bit word in sequence, so the rejection behavior is
    /// fully enumerable.
    struct CountingRng(u32);

    impl RngCore for CountingRng {
        fn next_u32(&mut self) -> u32 {
            let x = self.0;
            self.0 = (self.0 + 1) % 8;
            x
        }
        fn next_u64(&mut self) -> u64 {
            self.next_u32() as u64
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            dest.fill(0);
        }
    }

    #[test]
    fn uniform_below_is_exactly_uniform_over_the_tape() {
        // bound 5 needs 3 random bits; of the 8 words, 0..=4 are accepted
        // and 5..=7 rejected, so one cycle of the tape yields each value
        // exactly once.
        let bound = Count::from(5u32);
        let mut rng = CountingRng(0);
        let mut hits = [0u32; 5];
        // Ten draws walk the tape 0,1,2,3,4, then reject 5,6,7 and accept
        // 0, then 1,2,3,4 again: every accepted value appears exactly
        // twice and the tape ends where the accepted prefix ends.
        for _ in 0..10 {
            let x = uniform_below(&mut rng, &bound);
            hits[usize::try_from(&x).unwrap()] += 1;
        }
        assert_eq!(hits, [2, 2, 2, 2, 2]);
        assert_eq!(rng.0, 5, "thirteen words consumed");
    }
}
