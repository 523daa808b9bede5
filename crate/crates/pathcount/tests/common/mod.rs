//! Shared helpers for the integration suites: seeded random graphs, DAGs,
//! and stable matching instances. Each test binary uses its own subset.
#![allow(dead_code)]

use pathcount::decomposition::{greedy_decomposition, to_nice, NicePathDecomposition};
use pathcount::graph::Graph;
use pathcount::matching::SmInstance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Undirected graph where each possible edge is present with probability
/// `density`.
pub fn random_graph(n: usize, density: f64, rng: &mut ChaCha12Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < density {
                edges.push((a, b));
            }
        }
    }
    Graph::undirected(n, edges).unwrap()
}

/// Random DAG: random edges oriented along a random topological order.
pub fn random_dag(n: usize, density: f64, rng: &mut ChaCha12Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                edges.push((order[i], order[j]));
            }
        }
    }
    Graph::directed(n, edges).unwrap()
}

/// Random directed graph (not necessarily acyclic); anti-parallel pairs
/// allowed.
pub fn random_digraph(n: usize, density: f64, rng: &mut ChaCha12Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random::<f64>() < density {
                edges.push((a, b));
            }
        }
    }
    Graph::directed(n, edges).unwrap()
}

/// Every labeled undirected graph on `n` vertices, by edge-set bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::undirected(n, edges).unwrap()
    })
}

pub fn nice(g: &Graph) -> NicePathDecomposition {
    to_nice(g, &greedy_decomposition(g)).unwrap()
}

/// Uniformly random complete-list instance.
pub fn random_instance(n: usize, rng: &mut ChaCha12Rng) -> SmInstance {
    let mut lists = |_: usize| -> Vec<Vec<usize>> {
        (0..n)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(rng);
                p
            })
            .collect()
    };
    let men = lists(0);
    let women = lists(1);
    SmInstance::new(men, women).unwrap()
}
