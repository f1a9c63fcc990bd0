//! The two embedding engines: greedy extension into a nearly complete
//! bipartite host, and a budgeted backtracking embedder for cylinders.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::bitset::BitSet;
use crate::equitable::color_with_sizes;
use crate::error::{Error, Result};
use crate::families::GraphFamily;
use crate::graph::{Color, ColoredCompleteGraph, Graph};
use crate::regularity::Cylinder;
use crate::search::{self, Limits, Outcome};
use crate::seed;

/// Injective map of `source` into some host; `map[v]` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub source: Arc<Graph>,
    pub map: Vec<usize>,
    pub color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Length { expected: usize, found: usize },
    OutOfRange { vertex: usize, image: usize },
    NotInjective { first: usize, second: usize, image: usize },
    MissingEdge { u: usize, v: usize },
    WrongColor { u: usize, v: usize, expected: Color },
    NoColor,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Length { expected, found } => write!(f, "map has {found} entries, source has {expected} vertices"),
            Violation::OutOfRange { vertex, image } => write!(f, "vertex {vertex} maps to {image}, outside the host"),
            Violation::NotInjective { first, second, image } => {
                write!(f, "vertices {first} and {second} both map to {image}")
            }
            Violation::MissingEdge { u, v } => write!(f, "edge {u}-{v} maps to a non-edge"),
            Violation::WrongColor { u, v, expected } => write!(f, "edge {u}-{v} does not map to a {expected} edge"),
            Violation::NoColor => write!(f, "embedding into a colored host has no color"),
        }
    }
}

impl Embedding {
    pub fn new(source: Arc<Graph>, map: Vec<usize>, color: Option<Color>) -> Self {
        Embedding { source, map, color }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Image of the source vertex set, sorted.
    pub fn target_vertices(&self) -> Vec<usize> {
        let mut t = self.map.clone();
        t.sort_unstable();
        t
    }

    fn check_map(&self, host_n: usize) -> std::result::Result<(), Violation> {
        let n = self.source.vertex_count();
        if self.map.len() != n {
            return Err(Violation::Length {
                expected: n,
                found: self.map.len(),
            });
        }
        let mut owner = vec![usize::MAX; host_n];
        for (v, &h) in self.map.iter().enumerate() {
            if h >= host_n {
                return Err(Violation::OutOfRange { vertex: v, image: h });
            }
            if owner[h] != usize::MAX {
                return Err(Violation::NotInjective {
                    first: owner[h],
                    second: v,
                    image: h,
                });
            }
            owner[h] = v;
        }
        Ok(())
    }

    /// Injective, and every source edge lands on a host edge.
    pub fn check(&self, host: &Graph) -> std::result::Result<(), Violation> {
        self.check_map(host.vertex_count())?;
        match self.source.edges().find(|&(u, v)| !host.has_edge(self.map[u], self.map[v])) {
            Some((u, v)) => Err(Violation::MissingEdge { u, v }),
            None => Ok(()),
        }
    }

    /// Injective, and every source edge lands on a host edge of `self.color`.
    pub fn check_colored(&self, host: &ColoredCompleteGraph) -> std::result::Result<(), Violation> {
        let color = self.color.ok_or(Violation::NoColor)?;
        self.check_map(host.vertex_count())?;
        match self
            .source
            .edges()
            .find(|&(u, v)| host.color(self.map[u], self.map[v]) != color)
        {
            Some((u, v)) => Err(Violation::WrongColor { u, v, expected: color }),
            None => Ok(()),
        }
    }
}

/// One side-labelled bipartite graph: `a` and `b` partition the vertices
/// that matter, and every edge runs between them.
#[derive(Clone, Copy, Debug)]
pub struct Bipartite<'a> {
    pub graph: &'a Graph,
    pub a: &'a [usize],
    pub b: &'a [usize],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Verify the degree and size hypotheses first.
    Checked,
    /// Skip them; report the first vertex that cannot be placed.
    Unchecked,
}

/// Extends `phi` (`phi[i]` is the image of `h.a[i]`) to an injective
/// homomorphism of `h` into `host`, placing `h.b` in order, each on the
/// lowest-index unused vertex of `host.b` adjacent to the images of all its
/// neighbours. `max_degree` bounds the degrees of `h.b`.
pub fn greedy_bipartite_extend(
    h: Bipartite<'_>,
    host: Bipartite<'_>,
    phi: &[usize],
    max_degree: usize,
    mode: Mode,
) -> Result<Embedding> {
    let n = h.graph.vertex_count();
    let hn = host.graph.vertex_count();
    let mut side = vec![0u8; n];
    for &v in h.a {
        side[v] = 1;
    }
    for &v in h.b {
        if side[v] != 0 {
            return Err(Error::Precondition(format!("vertex {v} is on both sides of H")));
        }
        side[v] = 2;
    }
    if let Some(v) = side.iter().position(|&s| s == 0) {
        return Err(Error::Precondition(format!("vertex {v} of H is on neither side")));
    }
    if let Some((u, v)) = h.graph.edges().find(|&(u, v)| side[u] == side[v]) {
        return Err(Error::InvalidGraph(format!("H edge {u}-{v} does not cross the bipartition")));
    }
    if phi.len() != h.a.len() {
        return Err(Error::Precondition(format!("phi has {} images for |A| = {}", phi.len(), h.a.len())));
    }
    let a_set = BitSet::from_iter_in(hn, host.a.iter().copied());
    let b_set = BitSet::from_iter_in(hn, host.b.iter().copied());
    if !a_set.is_disjoint(&b_set) {
        return Err(Error::Precondition("host sides A' and B' overlap".into()));
    }
    let mut used = BitSet::new(hn);
    for &x in phi {
        if !a_set.contains(x) {
            return Err(Error::Precondition(format!("phi maps into {x}, which is not in A'")));
        }
        if !used.insert(x) {
            return Err(Error::Precondition(format!("phi is not injective at {x}")));
        }
    }
    used.clear();

    if mode == Mode::Checked {
        if max_degree == 0 {
            return Err(Error::Precondition("degree bound must be at least 1".into()));
        }
        if let Some(&b) = h.b.iter().find(|&&b| h.graph.degree(b) > max_degree) {
            return Err(Error::Precondition(format!(
                "deg_H(b{b}) = {} exceeds the bound {max_degree}",
                h.graph.degree(b)
            )));
        }
        if host.b.len() < 2 * h.b.len() {
            return Err(Error::Precondition(format!(
                "|B'| = {} is below 2|B| = {}",
                host.b.len(),
                2 * h.b.len()
            )));
        }
        // deg >= (1 - 1/(2Δ))|B'|  <=>  2Δ deg >= (2Δ - 1)|B'|
        let need = (2 * max_degree - 1) * host.b.len();
        if let Some(&x) = host
            .a
            .iter()
            .find(|&&x| 2 * max_degree * host.graph.degree_into(x, &b_set) < need)
        {
            return Err(Error::Precondition(format!(
                "A' vertex {x} has degree {} into B', below (1 - 1/(2*{max_degree}))*{}",
                host.graph.degree_into(x, &b_set),
                host.b.len()
            )));
        }
    }

    let mut map = vec![usize::MAX; n];
    for (i, &v) in h.a.iter().enumerate() {
        map[v] = phi[i];
    }
    for &b in h.b {
        let mut cand = b_set.clone();
        cand.difference_with(&used);
        for u in h.graph.neighbors(b).iter() {
            cand.intersect_with(host.graph.neighbors(map[u]));
        }
        let x = cand.first().ok_or(Error::Stuck { vertex: b })?;
        map[b] = x;
        used.insert(x);
    }
    Ok(Embedding::new(Arc::new(h.graph.clone()), map, None))
}

#[derive(Clone, Copy, Debug)]
pub struct EmbedOptions {
    pub seed: u64,
    pub node_budget: u64,
    /// Attempts after the first (deterministic, lowest-index) one.
    pub restarts: usize,
    pub deadline: Option<Instant>,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            seed: 0,
            node_budget: 20_000,
            restarts: 8,
            deadline: None,
        }
    }
}

/// Reorders `hint` so its class sizes line up with `quota`, if they are the
/// same multiset.
fn align_classes(hint: &[Vec<usize>], quota: &[usize]) -> Option<Vec<Vec<usize>>> {
    if hint.len() != quota.len() {
        return None;
    }
    let mut by_size: Vec<usize> = (0..hint.len()).collect();
    by_size.sort_by_key(|&c| (std::cmp::Reverse(hint[c].len()), c));
    let mut parts: Vec<usize> = (0..quota.len()).collect();
    parts.sort_by_key(|&p| (std::cmp::Reverse(quota[p]), p));
    let mut out = vec![Vec::new(); quota.len()];
    for (&c, &p) in by_size.iter().zip(&parts) {
        if hint[c].len() != quota[p] {
            return None;
        }
        out[p] = hint[c].clone();
    }
    Some(out)
}

/// Embeds `f` into the cylinder's color class with exactly `quota[i]`
/// vertices in part `i`. `hint` is an optional proper coloring of `f` used as
/// the starting class assignment.
pub fn cylinder_embed(
    f: &Arc<Graph>,
    cyl: &Cylinder,
    quota: &[usize],
    host: &ColoredCompleteGraph,
    hint: Option<&[Vec<usize>]>,
    opts: EmbedOptions,
) -> Result<Embedding> {
    let k = cyl.k();
    let n = f.vertex_count();
    if quota.len() != k {
        return Err(Error::Precondition(format!("{} quotas for {k} parts", quota.len())));
    }
    if quota.iter().sum::<usize>() != n {
        return Err(Error::Precondition(format!(
            "quotas sum to {}, F has {n} vertices",
            quota.iter().sum::<usize>()
        )));
    }
    if let Some(i) = (0..k).find(|&i| quota[i] > cyl.parts[i].len()) {
        return Err(Error::Precondition(format!(
            "quota {} exceeds |V_{}| = {}",
            quota[i],
            i + 1,
            cyl.parts[i].len()
        )));
    }
    let start = hint.and_then(|h| align_classes(h, quota));
    let classes = color_with_sizes(f, quota, start.as_deref())
        .ok_or_else(|| Error::Precondition(format!("F has no proper coloring with class sizes {quota:?}")))?;

    let hn = host.vertex_count();
    let part_sets: Vec<BitSet> = cyl
        .parts
        .iter()
        .map(|p| BitSet::from_iter_in(hn, p.iter().copied()))
        .collect();
    let mut domains = vec![BitSet::new(hn); n];
    for (i, class) in classes.iter().enumerate() {
        for &v in class {
            domains[v] = part_sets[i].clone();
        }
    }
    let graph = host.class(cyl.color);
    for attempt in 0..=opts.restarts {
        let limits = Limits {
            nodes: opts.node_budget,
            deadline: opts.deadline,
            shuffle: (attempt > 0).then(|| seed::derive(opts.seed, attempt as u64)),
        };
        match search::embed(f, graph, &domains, None, limits) {
            Outcome::Found(map) => return Ok(Embedding::new(f.clone(), map, Some(cyl.color))),
            Outcome::Exhausted => break,
            Outcome::OutOfBudget => {
                if opts.deadline.is_some_and(|d| Instant::now() > d) {
                    break;
                }
            }
        }
    }
    Err(Error::NotFound(format!(
        "no embedding of a {n}-vertex graph into the cylinder with quotas {quota:?}"
    )))
}

/// Correction sizes for a cylinder with part sizes `sizes`: entry `i` is
/// `w = v - v_i`, used by the subset of all parts except `i`.
pub fn correction_sizes(sizes: &[usize]) -> Vec<usize> {
    let v = sizes.iter().copied().max().unwrap_or(0);
    sizes.iter().map(|&s| v - s).collect()
}

/// What part `i` holds after every correction copy not avoiding it took `w`
/// vertices: `v_i - Σ_{j != i} w_j`.
pub fn residues(sizes: &[usize], w: &[usize]) -> Vec<i64> {
    let total: i64 = w.iter().map(|&x| x as i64).sum();
    sizes
        .iter()
        .zip(w)
        .map(|(&s, &wi)| s as i64 - (total - wi as i64))
        .collect()
}

/// Covers every vertex of `cyl` with at most `k + 1` copies of members of
/// `fam` in the cylinder's color: one correction copy per part that is
/// smaller than the largest, then one copy on the equalized remainder.
pub fn cover_cylinder(
    cyl: &Cylinder,
    fam: &GraphFamily,
    host: &ColoredCompleteGraph,
    opts: EmbedOptions,
) -> Result<Vec<Embedding>> {
    let k = cyl.k();
    let sizes = cyl.sizes();
    if sizes.iter().all(|&s| s == 0) {
        return Ok(Vec::new());
    }
    let w = correction_sizes(&sizes);
    let res = residues(&sizes, &w);
    let r = res[0];
    if r < 0 {
        return Err(Error::Precondition(format!(
            "cylinder with part sizes {sizes:?} is too unbalanced to equalize"
        )));
    }
    let r = r as usize;

    let mut remaining: Vec<Vec<usize>> = cyl.parts.iter().map(|p| {
        let mut p = p.clone();
        p.sort_unstable();
        p
    }).collect();
    let mut pieces = Vec::new();
    // (k-1)-subsets in lexicographic order are those missing k-1, k-2, ..., 0
    for missing in (0..k).rev() {
        let ws = w[missing];
        if ws == 0 {
            continue;
        }
        let m = (k - 1) * ws;
        let mut quota = vec![ws; k];
        quota[missing] = 0;
        let piece = embed_piece(fam, m, k - 1, &remaining, &quota, cyl, host, opts, pieces.len())?;
        remove_used(&mut remaining, &piece.map);
        pieces.push(piece);
    }
    debug_assert!(remaining.iter().all(|p| p.len() == r));
    if r > 0 {
        let piece = embed_piece(fam, k * r, k, &remaining, &vec![r; k], cyl, host, opts, pieces.len())?;
        pieces.push(piece);
    }
    Ok(pieces)
}

#[allow(clippy::too_many_arguments)]
fn embed_piece(
    fam: &GraphFamily,
    m: usize,
    classes: usize,
    parts: &[Vec<usize>],
    quota: &[usize],
    cyl: &Cylinder,
    host: &ColoredCompleteGraph,
    opts: EmbedOptions,
    index: usize,
) -> Result<Embedding> {
    let f = fam.member(m)?;
    let hint = fam.equitable_coloring_with(m, classes).ok();
    let sub = Cylinder {
        parts: parts.to_vec(),
        ..cyl.clone()
    };
    let opts = EmbedOptions {
        seed: seed::derive(opts.seed, index as u64),
        ..opts
    };
    cylinder_embed(&f, &sub, quota, host, hint.as_deref(), opts)
}

fn remove_used(parts: &mut [Vec<usize>], used: &[usize]) {
    let used: std::collections::HashSet<usize> = used.iter().copied().collect();
    for p in parts {
        p.retain(|v| !used.contains(v));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cyl(parts: Vec<Vec<usize>>, color: Color) -> Cylinder {
        Cylinder::new(parts, color, rational(0.1), rational(0.5), rational(0.0)).unwrap()
    }

    #[test]
    fn checker_catches_each_violation() {
        let path = Arc::new(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let host = ColoredCompleteGraph::from_fn(4, |u, v| if u + v == 5 { Color::Blue } else { Color::Red }).unwrap();
        let ok = Embedding::new(path.clone(), vec![0, 1, 2], Some(Color::Red));
        assert_eq!(ok.check_colored(&host), Ok(()));
        let e = Embedding::new(path.clone(), vec![0, 0, 2], Some(Color::Red));
        assert!(matches!(e.check_colored(&host), Err(Violation::NotInjective { image: 0, .. })));
        let e = Embedding::new(path.clone(), vec![0, 2, 3], Some(Color::Red));
        assert_eq!(
            e.check_colored(&host),
            Err(Violation::WrongColor {
                u: 1,
                v: 2,
                expected: Color::Red
            })
        );
        let e = Embedding::new(path.clone(), vec![0, 1], Some(Color::Red));
        assert!(matches!(e.check_colored(&host), Err(Violation::Length { .. })));
        let e = Embedding::new(path.clone(), vec![0, 1, 9], Some(Color::Red));
        assert!(matches!(e.check_colored(&host), Err(Violation::OutOfRange { .. })));
        let e = Embedding::new(path, vec![0, 1, 2], None);
        assert_eq!(e.check_colored(&host), Err(Violation::NoColor));
    }

    fn complete_bipartite(host_a: &[usize], host_b: &[usize], n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for &a in host_a {
            for &b in host_b {
                g.insert_edge(a, b);
            }
        }
        g
    }

    #[test]
    fn greedy_matching_example() {
        // H: a0-b2, a1-b3; host A' = {0,1}, B' = {2..5}
        let h = Graph::from_edges(4, [(0, 2), (1, 3)]).unwrap();
        let host = complete_bipartite(&[0, 1], &[2, 3, 4, 5], 6);
        let e = greedy_bipartite_extend(
            Bipartite { graph: &h, a: &[0, 1], b: &[2, 3] },
            Bipartite { graph: &host, a: &[0, 1], b: &[2, 3, 4, 5] },
            &[0, 1],
            1,
            Mode::Checked,
        )
        .unwrap();
        assert_eq!(e.map, vec![0, 1, 2, 3]);
        assert_eq!(e.check(&host), Ok(()));

        let err = greedy_bipartite_extend(
            Bipartite { graph: &h, a: &[0, 1], b: &[2, 3] },
            Bipartite { graph: &host, a: &[0, 1], b: &[2, 3, 4] },
            &[0, 1],
            1,
            Mode::Checked,
        );
        assert!(matches!(err, Err(Error::Precondition(m)) if m.contains("2|B|")));
    }

    #[test]
    fn unchecked_mode_reports_stuck_vertex() {
        // b3 needs a common neighbour of 0 and 1 in B', there is none
        let h = Graph::from_edges(4, [(0, 2), (0, 3), (1, 3)]).unwrap();
        let host = Graph::from_edges(6, [(0, 2), (0, 4), (1, 5)]).unwrap();
        let err = greedy_bipartite_extend(
            Bipartite { graph: &h, a: &[0, 1], b: &[2, 3] },
            Bipartite { graph: &host, a: &[0, 1], b: &[2, 4, 5] },
            &[0, 1],
            2,
            Mode::Unchecked,
        );
        assert!(matches!(err, Err(Error::Stuck { vertex: 3 })));
    }

    #[test]
    fn greedy_low_degree_precondition() {
        let h = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mut host = complete_bipartite(&[0], &[1, 2, 3, 4], 5);
        host.remove_edge(0, 1);
        host.remove_edge(0, 2);
        host.remove_edge(0, 3);
        let err = greedy_bipartite_extend(
            Bipartite { graph: &h, a: &[0], b: &[1] },
            Bipartite { graph: &host, a: &[0], b: &[1, 2, 3, 4] },
            &[0],
            1,
            Mode::Checked,
        );
        assert!(matches!(err, Err(Error::Precondition(m)) if m.contains("degree")));
    }

    #[test]
    fn single_vertex_goes_to_lowest_index() {
        let host = ColoredCompleteGraph::monochromatic(10, Color::Red).unwrap();
        let c = cyl(vec![vec![7, 3, 5], vec![0, 1], vec![2]], Color::Red);
        let e = cylinder_embed(&Arc::new(Graph::empty(1)), &c, &[1, 0, 0], &host, None, EmbedOptions::default()).unwrap();
        assert_eq!(e.map, vec![3]);
    }

    #[test]
    fn c6_into_complete_tripartite() {
        let host = ColoredCompleteGraph::monochromatic(9, Color::Red).unwrap();
        let c = cyl(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]], Color::Red);
        let f = GraphFamily::cycles().member(6).unwrap();
        let e = cylinder_embed(&f, &c, &[2, 2, 2], &host, None, EmbedOptions::default()).unwrap();
        assert_eq!(e.check_colored(&host), Ok(()));
        let per_part: Vec<usize> = c.parts.iter().map(|p| p.iter().filter(|v| e.map.contains(v)).count()).collect();
        assert_eq!(per_part, vec![2, 2, 2]);
    }

    #[test]
    fn infeasible_quota_is_a_precondition_error() {
        let host = ColoredCompleteGraph::monochromatic(9, Color::Red).unwrap();
        let c = cyl(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]], Color::Red);
        let tri = GraphFamily::cycles().member(3).unwrap();
        let err = cylinder_embed(&tri, &c, &[2, 1, 0], &host, None, EmbedOptions::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = cylinder_embed(&tri, &c, &[1, 1, 2], &host, None, EmbedOptions::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn dense_random_cylinder_takes_a_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let host = ColoredCompleteGraph::from_fn(30, |_, _| {
            if rng.gen_bool(0.93) {
                Color::Red
            } else {
                Color::Blue
            }
        })
        .unwrap();
        let c = cyl(vec![(0..10).collect(), (10..20).collect(), (20..30).collect()], Color::Red);
        let p = GraphFamily::paths().member(12).unwrap();
        let e = cylinder_embed(&p, &c, &[4, 4, 4], &host, None, EmbedOptions::default()).unwrap();
        assert_eq!(e.check_colored(&host), Ok(()));
    }

    #[test]
    fn correction_arithmetic_example() {
        let sizes = [5, 5, 4];
        let w = correction_sizes(&sizes);
        assert_eq!(w, vec![0, 0, 1]);
        assert_eq!(residues(&sizes, &w), vec![4, 4, 4]);
    }

    #[test]
    fn cover_cylinder_counts() {
        let host = ColoredCompleteGraph::monochromatic(14, Color::Blue).unwrap();
        let c = cyl(vec![(0..5).collect(), (5..10).collect(), (10..14).collect()], Color::Blue);
        let pieces = cover_cylinder(&c, &GraphFamily::paths(), &host, EmbedOptions::default()).unwrap();
        assert_eq!(pieces.iter().map(Embedding::len).collect::<Vec<_>>(), vec![2, 12]);
        let mut all: Vec<usize> = pieces.iter().flat_map(|p| p.map.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..14).collect::<Vec<_>>());
        for p in &pieces {
            assert_eq!(p.check_colored(&host), Ok(()));
        }
        // the correction copy draws the lowest-index vertices of V_1, V_2
        assert_eq!(pieces[0].target_vertices(), vec![0, 5]);

        let balanced = cyl(vec![(0..4).collect(), (4..8).collect(), (8..12).collect()], Color::Blue);
        let pieces = cover_cylinder(&balanced, &GraphFamily::cycles(), &host, EmbedOptions::default()).unwrap();
        assert_eq!(pieces.len(), 1);
        let empty = cyl(vec![vec![], vec![], vec![]], Color::Blue);
        assert!(cover_cylinder(&empty, &GraphFamily::paths(), &host, EmbedOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn cover_cylinder_rejects_lopsided_parts() {
        let host = ColoredCompleteGraph::monochromatic(14, Color::Red).unwrap();
        let c = cyl(vec![(0..10).collect(), (10..12).collect(), (12..14).collect()], Color::Red);
        assert!(matches!(
            cover_cylinder(&c, &GraphFamily::paths(), &host, EmbedOptions::default()),
            Err(Error::Precondition(_))
        ));
    }
}
