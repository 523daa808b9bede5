//! Clique counting and uniform sampling. Every clique lives inside some
//! bag, so it can be charged to its last-inserted vertex and enumerated
//! within that vertex's insertion bag.

use num_traits::Zero;
use rand::RngCore;
use thiserror::Error;

use crate::decomposition::{Event, NicePathDecomposition, NiceViolation};
use crate::engine::{uniform_below, weighted_choice, Count};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliqueError {
    #[error("clique engine requires an undirected graph")]
    DirectedGraph,
    #[error("invalid nice path decomposition: {0}")]
    InvalidDecomposition(#[from] NiceViolation),
}

/// Per-vertex and total clique counts. `count_of(v)` is the number of
/// cliques whose last-inserted vertex is `v`; every vertex contributes at
/// least the singleton `{v}`, and the per-vertex counts sum to the number
/// of nonempty cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCounts {
    per_vertex: Vec<Count>,
    total: Count,
}

impl CliqueCounts {
    pub fn total(&self) -> &Count {
        &self.total
    }

    pub fn per_vertex(&self) -> &[Count] {
        &self.per_vertex
    }

    pub fn count_of(&self, v: usize) -> &Count {
        &self.per_vertex[v]
    }
}

/// The bag at each vertex's insertion event, with the vertex's bag-local
/// adjacency as bitmasks over bag positions.
struct InsertionBags {
    /// Per vertex: (bag at insertion, adjacency masks over bag positions,
    /// position of the vertex itself).
    bags: Vec<(Vec<usize>, Vec<u64>, usize)>,
}

impl InsertionBags {
    fn build(g: &Graph, npd: &NicePathDecomposition) -> Result<InsertionBags, CliqueError> {
        if g.is_directed() {
            return Err(CliqueError::DirectedGraph);
        }
        npd.validate_for(g)?;
        let mut bags = vec![(Vec::new(), Vec::new(), 0); g.n()];
        let mut bag: Vec<usize> = Vec::new();
        for &event in npd.events() {
            match event {
                Event::Insert(v) => {
                    let pos = bag.partition_point(|&u| u < v);
                    bag.insert(pos, v);
                    let masks: Vec<u64> = bag
                        .iter()
                        .map(|&u| {
                            bag.iter()
                                .enumerate()
                                .filter(|&(_, &w)| w != u && g.adjacent(u, w))
                                .fold(0u64, |m, (j, _)| m | (1 << j))
                        })
                        .collect();
                    bags[v] = (bag.clone(), masks, pos);
                }
                Event::Remove(v) => {
                    let pos = bag.binary_search(&v).expect("validated event sequence");
                    bag.remove(pos);
                }
            }
        }
        Ok(InsertionBags { bags })
    }

    /// Visit every clique in `v`'s insertion bag that contains `v`, as a
    /// bitmask over bag positions.
    fn for_each_clique(&self, v: usize, mut visit: impl FnMut(u64)) {
        let (bag, masks, pos) = &self.bags[v];
        let k = bag.len();
        let others: Vec<usize> = (0..k).filter(|&j| j != *pos).collect();
        let v_bit = 1u64 << *pos;
        for sub in 0..(1u64 << others.len()) {
            let mut mask = v_bit;
            for (i, &j) in others.iter().enumerate() {
                if sub >> i & 1 == 1 {
                    mask |= 1 << j;
                }
            }
            // S is a clique iff every member's bag adjacency covers the rest.
            let ok = (0..k)
                .filter(|&j| mask >> j & 1 == 1)
                .all(|j| mask & !(1 << j) & !masks[j] == 0);
            if ok {
                visit(mask);
            }
        }
    }

    fn members(&self, v: usize, mask: u64) -> Vec<usize> {
        let (bag, _, _) = &self.bags[v];
        (0..bag.len())
            .filter(|&j| mask >> j & 1 == 1)
            .map(|j| bag[j])
            .collect()
    }
}

/// Count the nonempty cliques of `g`: each clique is counted exactly once,
/// at the insertion event of its last-inserted vertex.
pub fn count_cliques(g: &Graph, npd: &NicePathDecomposition) -> Result<CliqueCounts, CliqueError> {
    let bags = InsertionBags::build(g, npd)?;
    let mut per_vertex = Vec::with_capacity(g.n());
    let mut total = Count::zero();
    for v in 0..g.n() {
        let mut count = 0u64;
        bags.for_each_clique(v, |_| count += 1);
        let count = Count::from(count);
        total += &count;
        per_vertex.push(count);
    }
    Ok(CliqueCounts { per_vertex, total })
}

/// Uniformly random nonempty clique: draw the charged vertex in proportion
/// to its count, then one of its bag-local cliques uniformly. Exact
/// integer arithmetic throughout.
pub fn sample_clique<R: RngCore + ?Sized>(
    g: &Graph,
    npd: &NicePathDecomposition,
    rng: &mut R,
) -> Result<Vec<usize>, CliqueError> {
    let bags = InsertionBags::build(g, npd)?;
    let mut per_vertex = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let mut count = 0u64;
        bags.for_each_clique(v, |_| count += 1);
        per_vertex.push(Count::from(count));
    }
    let v = weighted_choice(rng, &per_vertex);
    let index = uniform_below(rng, &per_vertex[v]);
    let index = u64::try_from(&index).expect("bag-local clique counts fit in u64");
    let mut chosen = None;
    let mut seen = 0u64;
    bags.for_each_clique(v, |mask| {
        if seen == index {
            chosen = Some(mask);
        }
        seen += 1;
    });
    Ok(bags.members(v, chosen.expect("index drawn below the count")))
}
