//! Extraction of monochromatic family copies, one at a time or iterated until
//! only a small remainder is left.

use std::sync::Arc;
use std::time::Instant;

use crate::bitset::BitSet;
use crate::embedding::Embedding;
use crate::error::{Error, Partial, Result};
use crate::families::GraphFamily;
use crate::graph::{Color, ColoredCompleteGraph, Graph, Rational};
use crate::search::{self, Limits, Outcome};

#[derive(Clone, Copy, Debug)]
pub struct CopyOptions {
    /// Search nodes allowed per color.
    pub node_budget: u64,
    pub deadline: Option<Instant>,
}

impl Default for CopyOptions {
    fn default() -> Self {
        CopyOptions {
            node_budget: 50_000,
            deadline: None,
        }
    }
}

/// Tries each `(color, pattern)` in turn inside `subset`; the first copy found
/// wins. Errors with not-found when every search is exhausted or runs out of
/// budget.
pub fn find_mono_copy_in_order(
    g: &ColoredCompleteGraph,
    subset: &[usize],
    tries: &[(Color, Arc<Graph>)],
    opts: CopyOptions,
) -> Result<(Color, Embedding)> {
    let allowed = BitSet::from_iter_in(g.vertex_count(), subset.iter().copied());
    let mut budget_hit = false;
    for (color, f) in tries {
        if f.vertex_count() > allowed.len() {
            continue;
        }
        let limits = Limits {
            nodes: opts.node_budget,
            deadline: opts.deadline,
            shuffle: None,
        };
        match search::embed_into_set(f, g.class(*color), &allowed, limits) {
            Outcome::Found(map) => {
                let e = Embedding::new(f.clone(), map, Some(*color));
                debug_assert_eq!(e.check_colored(g), Ok(()));
                return Ok((*color, e));
            }
            Outcome::Exhausted => {}
            Outcome::OutOfBudget => budget_hit = true,
        }
    }
    Err(Error::NotFound(if budget_hit {
        "no monochromatic copy found within the search budget".into()
    } else {
        "no monochromatic copy exists".into()
    }))
}

/// A red copy of `f1`, or failing that a blue copy of `f2`.
pub fn find_mono_copy(
    g: &ColoredCompleteGraph,
    subset: &[usize],
    f1: &Arc<Graph>,
    f2: &Arc<Graph>,
    opts: CopyOptions,
) -> Result<(Color, Embedding)> {
    find_mono_copy_in_order(g, subset, &[(Color::Red, f1.clone()), (Color::Blue, f2.clone())], opts)
}

/// Pieces found so far and the vertices they leave uncovered.
#[derive(Clone, Debug, Default)]
pub struct Cover {
    pub pieces: Vec<Embedding>,
    pub leftovers: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct CoverOptions {
    /// First target size is `⌈ratio · remaining⌉`.
    pub ratio: Rational,
    pub piece_budget: usize,
    pub copy: CopyOptions,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            ratio: Rational::new(1, 4),
            piece_budget: 4096,
            copy: CopyOptions::default(),
        }
    }
}

fn ceil_mul(r: Rational, n: usize) -> usize {
    let num = *r.numer() as i128 * n as i128;
    let den = *r.denom() as i128;
    ((num + den - 1) / den).max(0) as usize
}

/// Extracts copies of `fam_red.member(t)` in red or `fam_blue.member(t)` in
/// blue from `subset` until at most `eps · |subset|` vertices remain. Target
/// sizes start at `⌈ratio · remaining⌉` and halve whenever no copy is found;
/// size 1 always succeeds. The color tried first is the one preferred by the
/// remaining vertex set. `eps = 0` covers everything.
pub fn cover_most(
    g: &ColoredCompleteGraph,
    subset: &[usize],
    fam_red: &GraphFamily,
    fam_blue: &GraphFamily,
    eps: Rational,
    opts: CoverOptions,
) -> Result<Cover> {
    let zero = Rational::from_integer(0);
    if eps < zero || eps > Rational::from_integer(1) {
        return Err(Error::Domain(format!("eps = {eps} must lie in [0, 1]")));
    }
    if opts.ratio <= zero || opts.ratio > Rational::from_integer(1) {
        return Err(Error::Domain(format!("ratio = {} must lie in (0, 1]", opts.ratio)));
    }
    let mut remaining: Vec<usize> = subset.to_vec();
    remaining.sort_unstable();
    remaining.dedup();
    // remaining > eps * total  <=>  remaining * den > num * total
    let total = remaining.len() as i128;
    let over = |r: usize| r as i128 * *eps.denom() as i128 > *eps.numer() as i128 * total;
    let mut cover = Cover::default();
    let mut cap = usize::MAX;
    while over(remaining.len()) {
        if cover.pieces.len() >= opts.piece_budget {
            cover.leftovers = remaining;
            return Err(Error::Budget {
                reason: format!("piece budget {} reached before the cover was complete", opts.piece_budget),
                partial: Box::new(Partial::Cover(cover)),
            });
        }
        let first = g.preferred_color(&remaining);
        let mut t = ceil_mul(opts.ratio, remaining.len()).clamp(1, remaining.len()).min(cap);
        let (_, piece) = loop {
            let fam = |c: Color| if c == Color::Red { fam_red } else { fam_blue };
            let tries = [
                (first, fam(first).member(t)?),
                (first.other(), fam(first.other()).member(t)?),
            ];
            match find_mono_copy_in_order(g, &remaining, &tries, opts.copy) {
                Ok(found) => break found,
                Err(Error::NotFound(_)) if t > 1 => t /= 2,
                Err(e) => return Err(e),
            }
        };
        cap = t;
        let used: std::collections::HashSet<usize> = piece.map.iter().copied().collect();
        remaining.retain(|v| !used.contains(v));
        cover.pieces.push(piece);
    }
    cover.leftovers = remaining;
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coloring(n: usize, p: f64, seed: u64) -> ColoredCompleteGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ColoredCompleteGraph::from_fn(n, |_, _| if rng.gen_bool(p) { Color::Red } else { Color::Blue }).unwrap()
    }

    fn split33() -> ColoredCompleteGraph {
        ColoredCompleteGraph::from_fn(6, |u, v| if (u < 3) != (v < 3) { Color::Red } else { Color::Blue }).unwrap()
    }

    #[test]
    fn all_red_path() {
        let g = ColoredCompleteGraph::monochromatic(7, Color::Red).unwrap();
        let p5 = GraphFamily::paths().member(5).unwrap();
        let (c, e) = find_mono_copy(&g, &(0..7).collect::<Vec<_>>(), &p5, &p5, CopyOptions::default()).unwrap();
        assert_eq!(c, Color::Red);
        assert_eq!(e.check_colored(&g), Ok(()));
    }

    #[test]
    fn split_coloring_has_red_but_no_blue_c4() {
        let g = split33();
        let c4 = GraphFamily::cycles().member(4).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let (c, e) = find_mono_copy(&g, &all, &c4, &c4, CopyOptions::default()).unwrap();
        assert_eq!(c, Color::Red);
        assert_eq!(e.check_colored(&g), Ok(()));
        let blue_only = find_mono_copy_in_order(&g, &all, &[(Color::Blue, c4)], CopyOptions::default());
        assert!(matches!(blue_only, Err(Error::NotFound(m)) if m.contains("exists")));
    }

    #[test]
    fn pattern_larger_than_subset() {
        let g = ColoredCompleteGraph::monochromatic(6, Color::Red).unwrap();
        let p5 = GraphFamily::paths().member(5).unwrap();
        assert!(matches!(
            find_mono_copy(&g, &[0, 1, 2], &p5, &p5, CopyOptions::default()),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn cover_edge_cases() {
        let g = random_coloring(20, 0.5, 1);
        let all: Vec<usize> = (0..20).collect();
        let c = cover_most(&g, &all, &GraphFamily::paths(), &GraphFamily::paths(), rational(1.0), CoverOptions::default()).unwrap();
        assert!(c.pieces.is_empty());
        assert_eq!(c.leftovers, all);

        let red = ColoredCompleteGraph::monochromatic(20, Color::Red).unwrap();
        let opts = CoverOptions {
            ratio: Rational::from_integer(1),
            ..CoverOptions::default()
        };
        let c = cover_most(&red, &all, &GraphFamily::paths(), &GraphFamily::cycles(), rational(0.3), opts).unwrap();
        assert_eq!(c.pieces.len(), 1);
        assert_eq!(c.pieces[0].len(), 20);
        assert!(c.leftovers.is_empty());
    }

    #[test]
    fn cover_random_coloring() {
        let g = random_coloring(200, 0.5, 3);
        let all: Vec<usize> = (0..200).collect();
        let c = cover_most(&g, &all, &GraphFamily::cycles(), &GraphFamily::cycles(), rational(0.05), CoverOptions::default()).unwrap();
        assert!(c.leftovers.len() <= 10);
        let mut seen = vec![false; 200];
        for p in &c.pieces {
            assert_eq!(p.check_colored(&g), Ok(()));
            for &v in &p.map {
                assert!(!seen[v]);
                seen[v] = true;
            }
        }
        for &v in &c.leftovers {
            assert!(!seen[v]);
            seen[v] = true;
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn budget_error_carries_partial_cover() {
        let g = random_coloring(30, 0.5, 2);
        let all: Vec<usize> = (0..30).collect();
        let opts = CoverOptions {
            piece_budget: 1,
            ..CoverOptions::default()
        };
        match cover_most(&g, &all, &GraphFamily::cycles(), &GraphFamily::cycles(), rational(0.0), opts) {
            Err(Error::Budget { partial, .. }) => match *partial {
                Partial::Cover(c) => {
                    assert_eq!(c.pieces.len(), 1);
                    assert_eq!(c.pieces[0].len() + c.leftovers.len(), 30);
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }
}
