use pathcount::decomposition::{greedy_decomposition, validate};
use pathcount::graph::Graph;
use std::time::Instant;

fn main() {
    for n in [20_000usize, 40_000] {
        let star = Graph::undirected(n, (1..n).map(|i| (0, i))).unwrap();
        let t = Instant::now();
        let pd = greedy_decomposition(&star);
        let el = t.elapsed();
        println!("star({n}): width {} in {el:?}", validate(&star, &pd).unwrap());
    }
}
