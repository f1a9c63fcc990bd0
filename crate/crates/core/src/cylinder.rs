//! Finding a monochromatic, dense, witness-free cylinder: split a sample into
//! candidate parts, color each pair of parts by its majority color, take a
//! monochromatic clique of parts, then repair bad pairs by local swaps.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{density, Color, ColoredCompleteGraph, Graph, Rational, VertexPair};
use crate::regularity::{check_regularity, CheckOptions, Cylinder, Witness};
use crate::seed;

/// Lexicographically smallest `k`-clique of `g`.
fn smallest_clique(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn grow(g: &Graph, k: usize, cur: &mut Vec<usize>, cand: &BitSet) -> bool {
        if cur.len() == k {
            return true;
        }
        let verts = cand.to_vec();
        for (i, &v) in verts.iter().enumerate() {
            if cur.len() + (verts.len() - i) < k {
                return false;
            }
            let mut next = cand.clone();
            next.intersect_with(g.neighbors(v));
            for &u in &verts[..=i] {
                next.remove(u);
            }
            cur.push(v);
            if grow(g, k, cur, &next) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::with_capacity(k);
    grow(g, k, &mut cur, &BitSet::full(g.vertex_count())).then_some(cur)
}

/// A monochromatic `k`-clique of `parts` (a coloring of the complete graph on
/// part indices). Exact search; the lexicographically smallest clique over
/// both colors wins.
pub fn find_mono_clique(parts: &ColoredCompleteGraph, k: usize) -> Result<(Color, Vec<usize>)> {
    let n = parts.vertex_count();
    if k == 0 {
        return Err(Error::Precondition("clique size must be at least 1".into()));
    }
    if k > n {
        return Err(Error::NotFound(format!("no {k}-clique among {n} indices")));
    }
    let red = smallest_clique(parts.class(Color::Red), k);
    let blue = smallest_clique(parts.class(Color::Blue), k);
    match (red, blue) {
        (Some(r), Some(b)) if r == b => {
            let c = parts.preferred_color(&r);
            Ok((c, r))
        }
        (Some(r), Some(b)) => Ok(if r < b { (Color::Red, r) } else { (Color::Blue, b) }),
        (Some(r), None) => Ok((Color::Red, r)),
        (None, Some(b)) => Ok((Color::Blue, b)),
        (None, None) => Err(Error::NotFound(format!("no monochromatic {k}-clique"))),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CylinderOptions {
    /// Requested part size (clamped to `n / k`).
    pub part_size: usize,
    pub min_part: usize,
    /// Every pair must have at least this density in the cylinder color.
    pub density: Rational,
    /// Allowed shortfall below `density`.
    pub slack: Rational,
    pub seed: u64,
    pub attempts: usize,
    pub swap_rounds: usize,
    pub check: CheckOptions,
    /// Enforce `n >= 2^(2k)`.
    pub theoretical_mode: bool,
}

impl Default for CylinderOptions {
    fn default() -> Self {
        CylinderOptions {
            part_size: 8,
            min_part: 8,
            density: Rational::new(1, 2),
            slack: Rational::from_integer(0),
            seed: 0,
            attempts: 16,
            swap_rounds: 200,
            check: CheckOptions::default(),
            theoretical_mode: false,
        }
    }
}

/// Majority color between two parts; an exact tie goes to the color of the
/// edge between their smallest vertices.
fn majority(g: &ColoredCompleteGraph, a: &[usize], b: &[usize]) -> Color {
    let n = g.vertex_count();
    let b_set = BitSet::from_iter_in(n, b.iter().copied());
    let red: usize = a.iter().map(|&v| g.class(Color::Red).degree_into(v, &b_set)).sum();
    let total = a.len() * b.len();
    match (2 * red).cmp(&total) {
        std::cmp::Ordering::Greater => Color::Red,
        std::cmp::Ordering::Less => Color::Blue,
        std::cmp::Ordering::Equal => {
            g.color(*a.iter().min().unwrap(), *b.iter().min().unwrap())
        }
    }
}

enum PairState {
    Ok,
    Sparse(usize, usize),
    /// A vertex of part `.0` with under half the pair density into some
    /// other part.
    LowDegree(usize, usize),
    Witness(usize, usize, Witness),
}

struct Repair<'a> {
    graph: &'a Graph,
    eps: Rational,
    threshold: Rational,
    check: CheckOptions,
    parts: Vec<Vec<usize>>,
    pool: Vec<usize>,
}

impl Repair<'_> {
    fn sets(&self) -> Vec<BitSet> {
        let n = self.graph.vertex_count();
        self.parts
            .iter()
            .map(|p| BitSet::from_iter_in(n, p.iter().copied()))
            .collect()
    }

    fn first_bad_pair(&self, round: usize) -> Result<PairState> {
        let k = self.parts.len();
        let mut worst: Option<(Rational, usize, usize)> = None;
        for i in 0..k {
            for j in i + 1..k {
                let pair = VertexPair::new(self.graph, self.parts[i].clone(), self.parts[j].clone())?;
                let d = density(&pair)?;
                if d < self.threshold && worst.is_none_or(|(w, ..)| d < w) {
                    worst = Some((d, i, j));
                }
            }
        }
        if let Some((_, i, j)) = worst {
            return Ok(PairState::Sparse(i, j));
        }
        let sets = self.sets();
        let mut lowest: Option<(usize, usize, usize)> = None;
        for i in 0..k {
            for j in (0..k).filter(|&j| j != i) {
                let e: usize = self.parts[i].iter().map(|&v| self.graph.degree_into(v, &sets[j])).sum();
                for &v in &self.parts[i] {
                    let deg = self.graph.degree_into(v, &sets[j]);
                    // deg < (e / (|V_i||V_j|)) |V_j| / 2
                    if 2 * deg * self.parts[i].len() < e && lowest.is_none_or(|(d, ..)| deg < d) {
                        lowest = Some((deg, i, v));
                    }
                }
            }
        }
        if let Some((_, i, v)) = lowest {
            return Ok(PairState::LowDegree(i, v));
        }
        for i in 0..k {
            for j in i + 1..k {
                let pair = VertexPair::new(self.graph, self.parts[i].clone(), self.parts[j].clone())?;
                let opts = CheckOptions {
                    seed: seed::derive(self.check.seed, (round * k * k + i * k + j) as u64),
                    ..self.check
                };
                let verdict = check_regularity(&pair, self.eps, opts);
                if verdict.is_refuted() {
                    if let Some(w) = verdict.witness {
                        return Ok(PairState::Witness(i, j, w));
                    }
                }
            }
        }
        Ok(PairState::Ok)
    }

    /// Swaps the weakest vertex among `out_candidates` (lowest color degree
    /// into the other parts) for the strongest of a pool sample. Returns false
    /// when no swap strictly improves.
    fn swap(&mut self, part: usize, out_candidates: &[usize], rng: &mut ChaCha8Rng) -> bool {
        let sets = self.sets();
        let score = |v: usize, own: usize| -> usize {
            (0..self.parts.len())
                .filter(|&q| q != own)
                .map(|q| self.graph.degree_into(v, &sets[q]))
                .sum()
        };
        let Some(&x) = out_candidates.iter().min_by_key(|&&v| (score(v, part), v)) else {
            return false;
        };
        let sample: Vec<usize> = self.pool.iter().copied().choose_multiple(rng, 48);
        let Some(&y) = sample.iter().max_by_key(|&&v| (score(v, part), std::cmp::Reverse(v))) else {
            return false;
        };
        if score(y, part) <= score(x, part) {
            return false;
        }
        let xi = self.parts[part].iter().position(|&v| v == x).unwrap();
        self.parts[part][xi] = y;
        let yi = self.pool.iter().position(|&v| v == y).unwrap();
        self.pool[yi] = x;
        true
    }
}

/// A `k`-cylinder with equal parts, dense in one color and with no pair
/// refuted at `eps`. Failure is reported as not-found, never as a proof that
/// no such cylinder exists.
pub fn find_regular_cylinder(g: &ColoredCompleteGraph, k: usize, eps: Rational, opts: CylinderOptions) -> Result<Cylinder> {
    let n = g.vertex_count();
    if k < 2 {
        return Err(Error::Precondition(format!("a cylinder needs k >= 2, got {k}")));
    }
    if opts.theoretical_mode {
        let need = 1u128.checked_shl(2 * k as u32).unwrap_or(u128::MAX);
        if (n as u128) < need {
            return Err(Error::Precondition(format!("need at least 2^(2k) = {need} vertices for k = {k}, have {n}")));
        }
    }
    if n < k * opts.min_part {
        return Err(Error::Precondition(format!(
            "need at least k * min_part = {} vertices, have {n}",
            k * opts.min_part
        )));
    }
    let s = opts.part_size.max(opts.min_part).min(n / k);
    let ramsey_parts = 1usize.checked_shl(2 * k as u32).unwrap_or(usize::MAX);
    let m = (n / s).min(ramsey_parts);
    let threshold = opts.density - opts.slack;

    for attempt in 0..opts.attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(opts.seed, attempt as u64));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let candidates: Vec<Vec<usize>> = order.chunks(s).take(m).filter(|c| c.len() == s).map(<[usize]>::to_vec).collect();
        let reduced = ColoredCompleteGraph::from_fn(candidates.len(), |i, j| majority(g, &candidates[i], &candidates[j]))?;
        let Ok((color, chosen)) = find_mono_clique(&reduced, k) else {
            continue;
        };
        let mut in_cyl = vec![false; n];
        let parts: Vec<Vec<usize>> = chosen.iter().map(|&i| candidates[i].clone()).collect();
        for &v in parts.iter().flatten() {
            in_cyl[v] = true;
        }
        let mut repair = Repair {
            graph: g.class(color),
            eps,
            threshold,
            check: CheckOptions {
                seed: seed::derive(opts.seed, 1 << 32 | attempt as u64),
                ..opts.check
            },
            parts,
            pool: (0..n).filter(|&v| !in_cyl[v]).collect(),
        };
        let mut found = false;
        for round in 0..=opts.swap_rounds {
            let state = repair.first_bad_pair(round)?;
            let (part, outs) = match state {
                PairState::Ok => {
                    found = true;
                    break;
                }
                _ if round == opts.swap_rounds => break,
                PairState::Sparse(i, j) => {
                    let side = if rng.gen_bool(0.5) { i } else { j };
                    (side, repair.parts[side].clone())
                }
                PairState::LowDegree(i, v) => (i, vec![v]),
                PairState::Witness(i, j, w) => {
                    if rng.gen_bool(0.5) {
                        (i, w.x)
                    } else {
                        (j, w.y)
                    }
                }
            };
            // the witness side may be the dense one; then try the whole part
            let whole = repair.parts[part].clone();
            if !repair.swap(part, &outs, &mut rng) && !repair.swap(part, &whole, &mut rng) {
                break;
            }
        }
        if found {
            let mut parts = repair.parts;
            for p in parts.iter_mut() {
                p.sort_unstable();
            }
            return Cylinder::new(parts, color, eps, opts.density, Rational::from_integer(0));
        }
    }
    Err(Error::NotFound(format!(
        "no {k}-cylinder with parts of size {s} after {} attempts",
        opts.attempts
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rational;

    fn random_coloring(n: usize, p: f64, seed: u64) -> ColoredCompleteGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ColoredCompleteGraph::from_fn(n, |_, _| if rng.gen_bool(p) { Color::Red } else { Color::Blue }).unwrap()
    }

    fn is_mono_clique(g: &ColoredCompleteGraph, c: Color, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| g.color(u, v) == c))
    }

    #[test]
    fn k6_always_has_a_mono_triangle() {
        for seed in 0..200 {
            let g = random_coloring(6, 0.5, seed);
            let (c, t) = find_mono_clique(&g, 3).unwrap();
            assert_eq!(t.len(), 3);
            assert!(is_mono_clique(&g, c, &t), "seed {seed}");
        }
    }

    #[test]
    fn clique_edge_cases() {
        let red = ColoredCompleteGraph::monochromatic(4, Color::Red).unwrap();
        assert_eq!(find_mono_clique(&red, 4).unwrap(), (Color::Red, vec![0, 1, 2, 3]));
        let (_, one) = find_mono_clique(&random_coloring(5, 0.5, 3), 1).unwrap();
        assert_eq!(one, vec![0]);
        assert!(matches!(find_mono_clique(&red, 5), Err(Error::NotFound(_))));
        // C5 / complement: no mono triangle
        let c5 = ColoredCompleteGraph::from_fn(5, |u, v| if (v - u) % 5 == 1 || (v - u) % 5 == 4 { Color::Red } else { Color::Blue }).unwrap();
        assert!(matches!(find_mono_clique(&c5, 3), Err(Error::NotFound(_))));
    }

    #[test]
    fn lexicographically_smallest_over_both_colors() {
        let g = random_coloring(9, 0.5, 17);
        let (c, set) = find_mono_clique(&g, 3).unwrap();
        let mut best: Option<Vec<usize>> = None;
        for a in 0..9 {
            for b in a + 1..9 {
                for d in b + 1..9 {
                    let t = vec![a, b, d];
                    if best.is_none() && (is_mono_clique(&g, Color::Red, &t) || is_mono_clique(&g, Color::Blue, &t)) {
                        best = Some(t);
                    }
                }
            }
        }
        assert_eq!(Some(set.clone()), best);
        assert!(is_mono_clique(&g, c, &set));
        let (c2, set2) = find_mono_clique(&g.swapped(), 3).unwrap();
        assert_eq!((c2, set2), (c.other(), set));
    }

    #[test]
    fn all_red_gives_dense_parts() {
        let g = ColoredCompleteGraph::monochromatic(30, Color::Red).unwrap();
        let opts = CylinderOptions {
            part_size: 10,
            ..CylinderOptions::default()
        };
        let cyl = find_regular_cylinder(&g, 3, rational(0.2), opts).unwrap();
        assert_eq!(cyl.color, Color::Red);
        assert_eq!(cyl.sizes(), vec![10, 10, 10]);
    }

    #[test]
    fn theoretical_mode_needs_many_vertices() {
        let g = ColoredCompleteGraph::monochromatic(63, Color::Red).unwrap();
        let opts = CylinderOptions {
            theoretical_mode: true,
            ..CylinderOptions::default()
        };
        assert!(matches!(find_regular_cylinder(&g, 3, rational(0.2), opts), Err(Error::Precondition(_))));
        let g = ColoredCompleteGraph::monochromatic(64, Color::Red).unwrap();
        assert!(find_regular_cylinder(&g, 3, rational(0.2), opts).is_ok());
    }

    #[test]
    fn random_coloring_cylinder_is_reverified() {
        let g = random_coloring(120, 0.5, 5);
        let eps = rational(0.45);
        let opts = CylinderOptions {
            part_size: 10,
            seed: 9,
            ..CylinderOptions::default()
        };
        let cyl = find_regular_cylinder(&g, 3, eps, opts).unwrap();
        assert_eq!(cyl.sizes(), vec![10, 10, 10]);
        let host = g.class(cyl.color);
        for i in 0..3 {
            for j in i + 1..3 {
                let pair = VertexPair::new(host, cyl.parts[i].clone(), cyl.parts[j].clone()).unwrap();
                assert!(density(&pair).unwrap() >= Rational::new(45, 100));
                assert!(!check_regularity(&pair, eps, CheckOptions { seed: 77, ..CheckOptions::default() }).is_refuted());
            }
        }
        let again = find_regular_cylinder(&g, 3, eps, opts).unwrap();
        assert_eq!(again, cyl);
    }

    #[test]
    fn color_swap_symmetry() {
        let g = random_coloring(60, 0.5, 8);
        let opts = CylinderOptions {
            part_size: 8,
            seed: 4,
            ..CylinderOptions::default()
        };
        let a = find_regular_cylinder(&g, 3, rational(0.45), opts).unwrap();
        let b = find_regular_cylinder(&g.swapped(), 3, rational(0.45), opts).unwrap();
        assert_eq!(a.parts, b.parts);
        assert_eq!(a.color, b.color.other());
    }
}
