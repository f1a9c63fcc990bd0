//! The absorbing partition procedure: reserve a dense cylinder, cover the
//! rest greedily, push the leftovers into the cylinder, peel off the vertices
//! the cylinder cannot absorb and solve them recursively against a family
//! with one color class removed, glue the removed classes back in through the
//! cylinder, and cover what remains of the cylinder. Every stage that fails
//! in practice falls back to plain iterated extraction.

use std::collections::HashSet;
use std::time::Instant;

use crate::bitset::BitSet;
use crate::certificate::{CertificatePiece, PartitionCertificate};
use crate::cylinder::{find_regular_cylinder, CylinderOptions};
use crate::embedding::{cover_cylinder, greedy_bipartite_extend, Bipartite, EmbedOptions, Embedding, Mode};
use crate::error::{Error, Partial, Result};
use crate::families::{doubled_family, family_minus_class, GraphFamily};
use crate::graph::{Color, ColoredCompleteGraph, Graph, Rational};
use crate::oracle::{min_partition_exact, ORACLE_CAP};
use crate::params::PipelineParams;
use crate::ramsey::{cover_most, find_mono_copy_in_order, CopyOptions, CoverOptions};
use crate::regularity::Cylinder;
use crate::seed;

/// Vertices of a cylinder that can be absorbed (`good`) and, for each part
/// `i`, those that fail first at `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodBadReport {
    pub good: Vec<usize>,
    pub bad: Vec<Vec<usize>>,
}

/// `v` is good for `i` if it lies in `V_i` or has at least `δ|V_i|/2`
/// neighbours in `V_i` in the cylinder's color.
pub fn classify_good(cyl: &Cylinder, host: &ColoredCompleteGraph, delta: Rational) -> GoodBadReport {
    let n = host.vertex_count();
    let graph = host.class(cyl.color);
    let sets: Vec<BitSet> = cyl
        .parts
        .iter()
        .map(|p| BitSet::from_iter_in(n, p.iter().copied()))
        .collect();
    let (num, den) = (*delta.numer() as i128, *delta.denom() as i128);
    let mut good = Vec::new();
    let mut bad = vec![Vec::new(); cyl.k()];
    let mut all: Vec<usize> = cyl.vertices().collect();
    all.sort_unstable();
    for v in all {
        // deg >= δ|V_i|/2  <=>  2·deg·den >= num·|V_i|
        let fail = (0..cyl.k()).find(|&i| {
            !sets[i].contains(v) && 2 * graph.degree_into(v, &sets[i]) as i128 * den < num * cyl.parts[i].len() as i128
        });
        match fail {
            Some(i) => bad[i].push(v),
            None => good.push(v),
        }
    }
    GoodBadReport { good, bad }
}

/// Counters describing which path a run took.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineStats {
    pub short_circuits: usize,
    pub exact_solves: usize,
    pub independent_pieces: usize,
    pub cylinders: usize,
    pub cylinder_misses: usize,
    pub bad_vertices: usize,
    pub glued: usize,
    pub glue_failures: usize,
    pub cylinder_covers: usize,
    pub cylinder_cover_failures: usize,
    pub fallbacks: usize,
    pub max_depth: usize,
}

#[derive(Clone, Debug)]
pub struct PartitionOutcome {
    pub certificate: PartitionCertificate,
    pub stats: PipelineStats,
}

#[derive(Clone, Debug)]
struct Piece {
    family: GraphFamily,
    emb: Embedding,
}

impl Piece {
    fn color(&self) -> Color {
        self.emb.color.expect("pipeline pieces are colored")
    }
}

struct Run<'a> {
    g: &'a ColoredCompleteGraph,
    params: &'a PipelineParams,
    deadline: Option<Instant>,
    stats: PipelineStats,
    calls: u64,
}

fn other_idx(c: Color) -> usize {
    match c {
        Color::Red => 1,
        Color::Blue => 0,
    }
}

fn idx(c: Color) -> usize {
    1 - other_idx(c)
}

impl Run<'_> {
    fn sub_seed(&mut self, tag: u64) -> u64 {
        self.calls += 1;
        seed::derive(self.params.seed, tag << 32 | self.calls)
    }

    fn copy_opts(&self) -> CopyOptions {
        CopyOptions {
            node_budget: self.params.copy_node_budget,
            deadline: self.deadline,
        }
    }

    fn piece(&self, family: &GraphFamily, color: Color, map: Vec<usize>) -> Result<Piece> {
        let source = family.member(map.len())?;
        Ok(Piece {
            family: family.clone(),
            emb: Embedding::new(source, map, Some(color)),
        })
    }

    /// Iterated extraction down to nothing; always succeeds unless the piece
    /// budget runs out.
    fn extract_all(&mut self, u: &[usize], fams: &[GraphFamily; 2]) -> Result<Vec<Piece>> {
        let opts = CoverOptions {
            ratio: self.params.ratio,
            piece_budget: self.params.piece_budget,
            copy: self.copy_opts(),
        };
        let cover = cover_most(self.g, u, &fams[0], &fams[1], Rational::from_integer(0), opts)?;
        Ok(cover
            .pieces
            .into_iter()
            .map(|emb| {
                let family = fams[idx(emb.color.unwrap())].clone();
                Piece { family, emb }
            })
            .collect())
    }

    fn solve(&mut self, u: &[usize], fams: &[GraphFamily; 2], depth: usize) -> Result<Vec<Piece>> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let m = u.len();
        if m == 0 {
            return Ok(Vec::new());
        }
        // one copy covering everything
        let first = self.g.preferred_color(u);
        let mut tries = Vec::new();
        for c in [first, first.other()] {
            if let Ok(f) = fams[idx(c)].member(m) {
                tries.push((c, f));
            }
        }
        if let Ok((c, emb)) = find_mono_copy_in_order(self.g, u, &tries, self.copy_opts()) {
            self.stats.short_circuits += 1;
            return Ok(vec![Piece {
                family: fams[idx(c)].clone(),
                emb,
            }]);
        }
        // independent members cover any vertex set
        for c in [first, first.other()] {
            let fam = &fams[idx(c)];
            if fam.chi() == 1 && fam.member(m).is_ok_and(|f| f.edge_count() == 0) {
                self.stats.independent_pieces += 1;
                return Ok(vec![self.piece(fam, c, u.to_vec())?]);
            }
        }
        if m < self.params.small_n_threshold {
            return self.solve_small(u, fams);
        }
        match self.absorb(u, fams, depth)? {
            Some(pieces) => Ok(pieces),
            None => {
                self.stats.fallbacks += 1;
                self.extract_all(u, fams)
            }
        }
    }

    fn solve_small(&mut self, u: &[usize], fams: &[GraphFamily; 2]) -> Result<Vec<Piece>> {
        if u.len() <= self.params.oracle_cap.min(ORACLE_CAP) {
            let sub = self.g.induced(u);
            let (_, cert) = min_partition_exact(&sub, &fams[0], &fams[1])?;
            self.stats.exact_solves += 1;
            return cert
                .pieces
                .iter()
                .map(|p| {
                    let mut map = vec![0; p.n];
                    for &(f, h) in &p.pairs {
                        map[f] = u[h];
                    }
                    self.piece(&fams[idx(p.color)], p.color, map)
                })
                .collect();
        }
        u.iter()
            .map(|&v| {
                let c = self.g.preferred_color(&[v]);
                self.piece(&fams[idx(c)], c, vec![v])
            })
            .collect()
    }

    /// The cylinder route. `Ok(None)` asks the caller to fall back.
    fn absorb(&mut self, u: &[usize], fams: &[GraphFamily; 2], depth: usize) -> Result<Option<Vec<Piece>>> {
        let p = self.params;
        let max_degree = fams[0].max_degree().max(fams[1].max_degree());
        let k = p.k_for(max_degree).max(2);
        if u.len() < k * p.min_part {
            return Ok(None);
        }
        let part_size = p.part_size.unwrap_or((u.len() / (3 * k)).max(p.min_part));
        let local = self.g.induced(u);
        let opts = CylinderOptions {
            part_size,
            min_part: p.min_part,
            density: p.density,
            slack: Rational::from_integer(0),
            seed: self.sub_seed(1),
            attempts: p.cylinder_attempts,
            swap_rounds: 200,
            check: p.check,
            theoretical_mode: p.theoretical_mode,
        };
        let cyl = match find_regular_cylinder(&local, k, p.epsilon, opts) {
            Ok(c) => c,
            Err(Error::NotFound(_) | Error::Precondition(_)) => {
                self.stats.cylinder_misses += 1;
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        self.stats.cylinders += 1;
        let c = cyl.color;
        let o = c.other();
        let mut parts: Vec<Vec<usize>> = cyl.parts.iter().map(|q| q.iter().map(|&i| u[i]).collect()).collect();
        let s = parts[0].len();

        // cover the complement, leaving at most what the cylinder can absorb
        let in_cyl: HashSet<usize> = parts.iter().flatten().copied().collect();
        let rest: Vec<usize> = u.iter().copied().filter(|v| !in_cyl.contains(v)).collect();
        let per_part = floor_mul(p.epsilon, s);
        let capacity = k * per_part;
        let mut pieces = Vec::new();
        let mut leftovers = Vec::new();
        if !rest.is_empty() {
            let eps = Rational::new(capacity.min(rest.len()) as i64, rest.len() as i64);
            let cover_opts = CoverOptions {
                ratio: p.ratio,
                piece_budget: p.piece_budget,
                copy: self.copy_opts(),
            };
            let cover = cover_most(self.g, &rest, &fams[0], &fams[1], eps, cover_opts)?;
            for emb in cover.pieces {
                let family = fams[idx(emb.color.unwrap())].clone();
                pieces.push(Piece { family, emb });
            }
            leftovers = cover.leftovers;
        }
        // leftovers go to the smallest part, lowest index first
        let mut added = vec![0usize; k];
        for v in leftovers {
            let i = (0..k)
                .filter(|&i| added[i] < per_part)
                .min_by_key(|&i| (parts[i].len(), i))
                .expect("cover left no more than the cylinder can absorb");
            parts[i].push(v);
            added[i] += 1;
        }
        for q in parts.iter_mut() {
            q.sort_unstable();
        }
        let cyl = Cylinder::new(parts, c, p.epsilon, p.density, Rational::from_integer(0))?;

        // peel off vertices with too few neighbours in some part
        let delta = p.delta_for(max_degree);
        let report = classify_good(&cyl, self.g, delta);
        let bad: HashSet<usize> = report.bad.iter().flatten().copied().collect();
        self.stats.bad_vertices += bad.len();
        let mut inner: Vec<Vec<usize>> = cyl
            .parts
            .iter()
            .map(|q| q.iter().copied().filter(|v| !bad.contains(v)).collect())
            .collect();

        let reduced_fam = if fams[idx(o)].chi() >= 2 {
            Some(family_minus_class(&fams[idx(o)], fams[idx(o)].chi())?)
        } else {
            None
        };
        for (i, b) in report.bad.iter().enumerate() {
            if b.is_empty() {
                continue;
            }
            let Some(reduced) = &reduced_fam else {
                // the other family is independent: B_i is one piece of it
                pieces.extend(self.solve(b, fams, depth + 1)?);
                continue;
            };
            let mut sub_fams = fams.clone();
            sub_fams[idx(o)] = reduced.clone();
            let sub = self.solve(b, &sub_fams, depth + 1)?;
            for piece in sub {
                if piece.color() == c {
                    pieces.push(piece);
                    continue;
                }
                if piece.emb.len() == 1 {
                    pieces.push(self.piece(&fams[idx(o)], o, piece.emb.map.clone())?);
                    continue;
                }
                match self.glue(&piece, reduced, &fams[idx(o)], o, i, &mut inner, max_degree)? {
                    Some(full) => {
                        self.stats.glued += 1;
                        pieces.push(full);
                    }
                    None => {
                        self.stats.glue_failures += 1;
                        pieces.extend(self.extract_all(&piece.emb.map, fams)?);
                    }
                }
            }
        }

        // what is left of the cylinder
        let remaining = Cylinder::new(inner, c, p.epsilon, p.density, Rational::from_integer(0))?;
        let embed_opts = EmbedOptions {
            seed: self.sub_seed(2),
            node_budget: p.embed_node_budget,
            restarts: p.embed_restarts,
            deadline: self.deadline,
        };
        match cover_cylinder(&remaining, &fams[idx(c)], self.g, embed_opts) {
            Ok(embs) => {
                self.stats.cylinder_covers += 1;
                for emb in embs {
                    pieces.push(Piece {
                        family: fams[idx(c)].clone(),
                        emb,
                    });
                }
            }
            Err(Error::NotFound(_) | Error::Precondition(_)) => {
                self.stats.cylinder_cover_failures += 1;
                let verts: Vec<usize> = remaining.vertices().collect();
                pieces.extend(self.extract_all(&verts, fams)?);
            }
            Err(e) => return Err(e),
        }
        Ok(Some(pieces))
    }

    /// Turns a copy of a reduced member back into a copy of the full member
    /// by placing the removed class inside a cylinder part, part `home` first.
    #[allow(clippy::too_many_arguments)]
    fn glue(
        &self,
        piece: &Piece,
        reduced: &GraphFamily,
        full: &GraphFamily,
        color: Color,
        home: usize,
        inner: &mut [Vec<usize>],
        max_degree: usize,
    ) -> Result<Option<Piece>> {
        let d = reduced.derivation(piece.emb.len())?;
        let src = &d.source;
        let removed: HashSet<usize> = d.removed.iter().copied().collect();
        // H keeps only the edges into the removed class
        let h = Graph::from_edges(
            src.vertex_count(),
            src.edges().filter(|(a, b)| removed.contains(a) || removed.contains(b)),
        )?;
        let phi: Vec<usize> = (0..d.kept.len()).map(|i| piece.emb.map[i]).collect();
        let order = std::iter::once(home).chain((0..inner.len()).filter(|&j| j != home));
        for j in order {
            let target = inner[j].clone();
            let attempt = greedy_bipartite_extend(
                Bipartite {
                    graph: &h,
                    a: &d.kept,
                    b: &d.removed,
                },
                Bipartite {
                    graph: self.g.class(color),
                    a: &piece.emb.map,
                    b: &target,
                },
                &phi,
                max_degree.max(1),
                Mode::Unchecked,
            );
            match attempt {
                Ok(e) => {
                    let used: HashSet<usize> = d.removed.iter().map(|&v| e.map[v]).collect();
                    inner[j].retain(|v| !used.contains(v));
                    let glued = Embedding::new(src.clone(), e.map, Some(color));
                    debug_assert_eq!(glued.check_colored(self.g), Ok(()));
                    return Ok(Some(Piece {
                        family: full.clone(),
                        emb: glued,
                    }));
                }
                Err(Error::Stuck { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }
}

fn floor_mul(r: Rational, n: usize) -> usize {
    (*r.numer() as i128 * n as i128 / *r.denom() as i128).max(0) as usize
}

fn to_certificate(n: usize, pieces: &[Piece]) -> PartitionCertificate {
    let mut cert = PartitionCertificate::new(n);
    for p in pieces {
        cert.pieces
            .push(CertificatePiece::from_map(p.color(), p.family.name(), &p.emb.map));
    }
    cert
}

fn run_pipeline(
    g: &ColoredCompleteGraph,
    fams: [GraphFamily; 2],
    params: &PipelineParams,
) -> Result<(Vec<Piece>, PipelineStats)> {
    let mut run = Run {
        g,
        params,
        deadline: params.time_limit.map(|d| Instant::now() + d),
        stats: PipelineStats::default(),
        calls: 0,
    };
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let pieces = match run.solve(&all, &fams, 0) {
        Ok(p) => p,
        Err(Error::Budget { reason, partial }) => {
            let partial = match *partial {
                Partial::Cover(c) => {
                    let ps: Vec<Piece> = c
                        .pieces
                        .into_iter()
                        .map(|emb| Piece {
                            family: fams[idx(emb.color.unwrap())].clone(),
                            emb,
                        })
                        .collect();
                    Partial::Certificate(to_certificate(g.vertex_count(), &ps))
                }
                other => other,
            };
            return Err(Error::Budget {
                reason,
                partial: Box::new(partial),
            });
        }
        Err(e) => return Err(e),
    };
    if pieces.len() > params.piece_budget {
        let cert = to_certificate(g.vertex_count(), &pieces[..params.piece_budget]);
        return Err(Error::Budget {
            reason: format!("{} pieces exceed the budget of {}", pieces.len(), params.piece_budget),
            partial: Box::new(Partial::Certificate(cert)),
        });
    }
    Ok((pieces, run.stats))
}

/// Partition into red copies from `fam1` and blue copies from `fam2`.
pub fn partition_with_stats(
    g: &ColoredCompleteGraph,
    fam1: &GraphFamily,
    fam2: &GraphFamily,
    params: &PipelineParams,
) -> Result<PartitionOutcome> {
    let (pieces, stats) = run_pipeline(g, [fam1.clone(), fam2.clone()], params)?;
    Ok(PartitionOutcome {
        certificate: to_certificate(g.vertex_count(), &pieces),
        stats,
    })
}

pub fn partition(
    g: &ColoredCompleteGraph,
    fam1: &GraphFamily,
    fam2: &GraphFamily,
    params: &PipelineParams,
) -> Result<PartitionCertificate> {
    partition_with_stats(g, fam1, fam2, params).map(|o| o.certificate)
}

/// Bipartite variant: both colors use the doubled family with a 3-part
/// cylinder, and every doubled piece is split back into at most three copies
/// of `fam`.
pub fn partition_bipartite_with_stats(
    g: &ColoredCompleteGraph,
    fam: &GraphFamily,
    params: &PipelineParams,
) -> Result<PartitionOutcome> {
    let doubled = doubled_family(fam)?;
    let params = PipelineParams {
        k: Some(3),
        ..params.clone()
    };
    let (pieces, stats) = run_pipeline(g, [doubled.clone(), doubled.clone()], &params)?;
    let mut cert = PartitionCertificate::new(g.vertex_count());
    for p in &pieces {
        let parts = p
            .family
            .decomposition(p.emb.len())
            .ok_or_else(|| Error::InvalidGraph(format!("{} piece has no decomposition", p.family.name())))?;
        for comp in parts {
            let map = &p.emb.map[comp.offset..comp.offset + comp.base_n];
            cert.pieces.push(CertificatePiece::from_map(p.color(), fam.name(), map));
        }
    }
    Ok(PartitionOutcome { certificate: cert, stats })
}

pub fn partition_bipartite(g: &ColoredCompleteGraph, fam: &GraphFamily, params: &PipelineParams) -> Result<PartitionCertificate> {
    partition_bipartite_with_stats(g, fam, params).map(|o| o.certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rational;
    use crate::verify::verify_certificate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coloring(n: usize, p: f64, seed: u64) -> ColoredCompleteGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ColoredCompleteGraph::from_fn(n, |_, _| if rng.gen_bool(p) { Color::Red } else { Color::Blue }).unwrap()
    }

    #[test]
    fn classify_all_red() {
        let g = ColoredCompleteGraph::monochromatic(12, Color::Red).unwrap();
        let cyl = Cylinder::new(vec![(0..4).collect(), (4..8).collect(), (8..12).collect()], Color::Red, rational(0.1), rational(0.5), rational(0.0)).unwrap();
        let r = classify_good(&cyl, &g, Rational::new(1, 4));
        assert_eq!(r.good.len(), 12);
        assert!(r.bad.iter().all(Vec::is_empty));
    }

    #[test]
    fn classify_boundary_is_inclusive() {
        // δ = 1/4, |V_1| = 8: threshold δ|V_1|/2 = 1
        let mut g = ColoredCompleteGraph::monochromatic(24, Color::Red).unwrap();
        for u in 0..8 {
            g.set_color(u, 16, Color::Blue);
            if u > 0 {
                g.set_color(u, 17, Color::Blue);
            }
        }
        let cyl = Cylinder::new(vec![(0..8).collect(), (8..16).collect(), (16..24).collect()], Color::Red, rational(0.1), rational(0.5), rational(0.0)).unwrap();
        let r = classify_good(&cyl, &g, Rational::new(1, 4));
        assert_eq!(r.bad[0], vec![16]);
        assert!(r.good.contains(&17));
    }

    #[test]
    fn trivial_inputs() {
        let p = PipelineParams::default();
        let one = ColoredCompleteGraph::monochromatic(1, Color::Red).unwrap();
        let cert = partition(&one, &GraphFamily::paths(), &GraphFamily::paths(), &p).unwrap();
        assert_eq!(cert.len(), 1);
        let red = ColoredCompleteGraph::monochromatic(50, Color::Red).unwrap();
        let cert = partition(&red, &GraphFamily::cycles(), &GraphFamily::paths(), &p).unwrap();
        assert_eq!(cert.len(), 1);
        assert_eq!(cert.pieces[0].n, 50);
        assert!(verify_certificate(&red, &GraphFamily::cycles(), &GraphFamily::paths(), &cert).accepted());
    }

    #[test]
    fn random_cycles_verified() {
        let g = random_coloring(150, 0.5, 1);
        let fam = GraphFamily::cycles();
        let out = partition_with_stats(&g, &fam, &fam, &PipelineParams::with_seed(3)).unwrap();
        let report = verify_certificate(&g, &fam, &fam, &out.certificate);
        assert!(report.accepted(), "{:?}", report.violations);
        eprintln!("{} pieces, {:?}", out.certificate.len(), out.stats);
    }

    #[test]
    fn bad_vertices_are_glued_back() {
        // blue clique on 120 vertices, 10 vertices joined to everything in red
        let g = ColoredCompleteGraph::from_fn(130, |u, v| if u < 10 || v < 10 { Color::Red } else { Color::Blue }).unwrap();
        let fam = GraphFamily::cycles();
        let out = partition_with_stats(&g, &fam, &fam, &PipelineParams::default()).unwrap();
        assert!(out.stats.cylinders >= 1);
        assert!(out.stats.glued >= 1, "{:?}", out.stats);
        assert_eq!(out.stats.cylinder_cover_failures, 0);
        let report = verify_certificate(&g, &fam, &fam, &out.certificate);
        assert!(report.accepted(), "{:?}", report.violations);
    }

    #[test]
    fn split_coloring_uses_the_cylinder() {
        let g = ColoredCompleteGraph::from_fn(300, |u, v| if (u < 90) != (v < 90) { Color::Red } else { Color::Blue }).unwrap();
        let fam = GraphFamily::paths();
        let out = partition_with_stats(&g, &fam, &fam, &PipelineParams::with_seed(1)).unwrap();
        assert_eq!(out.stats.fallbacks, 0, "{:?}", out.stats);
        assert!(verify_certificate(&g, &fam, &fam, &out.certificate).accepted());
    }

    #[test]
    fn budget_returns_partial_certificate() {
        let g = ColoredCompleteGraph::from_fn(60, |u, v| if (u < 20) != (v < 20) { Color::Red } else { Color::Blue }).unwrap();
        let params = PipelineParams {
            piece_budget: 2,
            ..PipelineParams::default()
        };
        match partition(&g, &GraphFamily::cycles(), &GraphFamily::cycles(), &params) {
            Err(Error::Budget { partial, .. }) => match *partial {
                Partial::Certificate(c) => assert!(c.len() <= 2),
                other => panic!("unexpected partial {other:?}"),
            },
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn bipartite_variant() {
        let blue = ColoredCompleteGraph::monochromatic(20, Color::Blue).unwrap();
        let paths = GraphFamily::paths();
        let cert = partition_bipartite(&blue, &paths, &PipelineParams::default()).unwrap();
        assert!(cert.len() <= 3);
        assert!(verify_certificate(&blue, &paths, &paths, &cert).accepted());

        let g = random_coloring(120, 0.5, 2);
        let cert = partition_bipartite(&g, &paths, &PipelineParams::with_seed(1)).unwrap();
        let report = verify_certificate(&g, &paths, &paths, &cert);
        assert!(report.accepted(), "{:?}", report.violations);
        assert!(cert.pieces.iter().all(|p| p.family == "paths"));
    }
}
