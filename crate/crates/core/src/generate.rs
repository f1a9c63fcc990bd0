//! Instance generators.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredCompleteGraph, Graph};
use crate::search::{self, Limits};

#[derive(Clone, Debug)]
pub enum GenMode {
    /// Each edge red with probability `p`.
    Random { p: f64 },
    /// Vertices `0..s` against the rest: crossing edges red, the rest blue.
    BipartiteSplit { s: usize },
    /// Local search (single edge flips) minimizing the number of
    /// monochromatic copies of `pattern`, for `budget` proposals.
    Adversarial { pattern: Arc<Graph>, budget: usize },
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub coloring: ColoredCompleteGraph,
    /// Monochromatic copies of the pattern left (adversarial mode only).
    pub residual: Option<u64>,
}

/// Unlabeled monochromatic copies of `pattern` in `g`, both colors.
pub fn count_mono_copies(g: &ColoredCompleteGraph, pattern: &Graph) -> u64 {
    let k = pattern.vertex_count();
    if k == 0 {
        return 0;
    }
    let (aut, _) = search::count_embeddings(pattern, pattern, &BitSet::full(k), Limits::unlimited());
    let all = BitSet::full(g.vertex_count());
    Color::BOTH
        .iter()
        .map(|&c| search::count_embeddings(pattern, g.class(c), &all, Limits::unlimited()).0)
        .sum::<u64>()
        / aut
}

pub fn gen_coloring(n: usize, mode: &GenMode, seed: u64) -> Result<Generated> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        GenMode::Random { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Domain(format!("p = {p} must lie in [0, 1]")));
            }
            let coloring = ColoredCompleteGraph::from_fn(n, |_, _| if rng.gen_bool(*p) { Color::Red } else { Color::Blue })?;
            Ok(Generated { coloring, residual: None })
        }
        GenMode::BipartiteSplit { s } => {
            if *s > n {
                return Err(Error::Domain(format!("split size {s} exceeds n = {n}")));
            }
            let coloring = ColoredCompleteGraph::from_fn(n, |u, v| if (u < *s) != (v < *s) { Color::Red } else { Color::Blue })?;
            Ok(Generated { coloring, residual: None })
        }
        GenMode::Adversarial { pattern, budget } => {
            if pattern.vertex_count() == 0 {
                return Err(Error::Domain("adversarial pattern must have vertices".into()));
            }
            let mut g = ColoredCompleteGraph::from_fn(n, |_, _| if rng.gen_bool(0.5) { Color::Red } else { Color::Blue })?;
            let mut cost = count_mono_copies(&g, pattern);
            for _ in 0..*budget {
                if cost == 0 || n < 2 {
                    break;
                }
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                let old = g.color(u, v);
                g.set_color(u, v, old.other());
                let new_cost = count_mono_copies(&g, pattern);
                // sideways moves allowed
                if new_cost <= cost {
                    cost = new_cost;
                } else {
                    g.set_color(u, v, old);
                }
            }
            Ok(Generated {
                coloring: g,
                residual: Some(cost),
            })
        }
    }
}
