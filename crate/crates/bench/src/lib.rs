//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monopart::generate::{gen_coloring, GenMode};
use monopart::graph::VertexPair;
use monopart::{ColoredCompleteGraph, Graph};

pub fn random_coloring(n: usize, p: f64, seed: u64) -> ColoredCompleteGraph {
    gen_coloring(n, &GenMode::Random { p }, seed).expect("valid parameters").coloring
}

pub fn split_coloring(n: usize, s: usize) -> ColoredCompleteGraph {
    gen_coloring(n, &GenMode::BipartiteSplit { s }, 0).expect("valid parameters").coloring
}

/// Random bipartite graph on `0..a` and `a..a+b` with edge probability `p`,
/// returned with its sides.
pub fn random_pair(a: usize, b: usize, p: f64, seed: u64) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(a + b);
    for u in 0..a {
        for v in a..a + b {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    (g, (0..a).collect(), (a..a + b).collect())
}

pub fn pair<'g>(g: &'g Graph, a: &[usize], b: &[usize]) -> VertexPair<'g> {
    VertexPair::new(g, a.to_vec(), b.to_vec()).expect("disjoint sides")
}
