//! Exact minimum monochromatic partitions for small hosts.

use crate::bitset::BitSet;
use crate::certificate::{CertificatePiece, PartitionCertificate};
use crate::error::{Error, Result};
use crate::families::GraphFamily;
use crate::graph::{Color, ColoredCompleteGraph};
use crate::search::{self, Limits, Outcome};

pub const ORACLE_CAP: usize = 12;

/// A monochromatic copy of `member(vertices.len())` spanning `vertices`;
/// `map[i]` is the host image of family vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoCopy {
    pub color: Color,
    pub vertices: Vec<usize>,
    pub map: Vec<usize>,
}

fn check_cap(g: &ColoredCompleteGraph) -> Result<()> {
    let n = g.vertex_count();
    if n > ORACLE_CAP {
        return Err(Error::TooLarge {
            what: "oracle host",
            size: n,
            limit: ORACLE_CAP,
        });
    }
    Ok(())
}

fn mask_vertices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Copies in one color, as `(mask, map)`, for every vertex subset of size at
/// most `max_n`. Sizes the family cannot produce are skipped.
fn colored_copies(g: &ColoredCompleteGraph, fam: &GraphFamily, color: Color, max_n: usize) -> Vec<(u32, Vec<usize>)> {
    let n = g.vertex_count();
    let host = g.class(color);
    let members: Vec<_> = (0..=max_n.min(n)).map(|m| if m == 0 { None } else { fam.member(m).ok() }).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let m = mask.count_ones() as usize;
        let Some(Some(f)) = members.get(m) else {
            continue;
        };
        let verts = mask_vertices(mask);
        if m == 1 {
            out.push((mask, verts));
            continue;
        }
        let allowed = BitSet::from_iter_in(n, verts);
        if let Outcome::Found(map) = search::embed_into_set(f, host, &allowed, Limits::unlimited()) {
            out.push((mask, map));
        }
    }
    out
}

/// Every monochromatic copy of a member of `fam` on at most `max_n` vertices,
/// one witness per (color, vertex set). Single vertices count in both colors.
pub fn enumerate_mono_copies(g: &ColoredCompleteGraph, fam: &GraphFamily, max_n: usize) -> Result<Vec<MonoCopy>> {
    check_cap(g)?;
    let mut out = Vec::new();
    for color in Color::BOTH {
        for (mask, map) in colored_copies(g, fam, color, max_n) {
            out.push(MonoCopy {
                color,
                vertices: mask_vertices(mask),
                map,
            });
        }
    }
    Ok(out)
}

struct Bnb {
    /// Candidate pieces containing each vertex as their lowest vertex,
    /// largest first.
    by_low: Vec<Vec<usize>>,
    masks: Vec<u32>,
    max_size: usize,
    best: Vec<usize>,
    cur: Vec<usize>,
}

impl Bnb {
    fn go(&mut self, uncovered: u32) {
        if uncovered == 0 {
            if self.cur.len() < self.best.len() {
                self.best = self.cur.clone();
            }
            return;
        }
        let left = uncovered.count_ones() as usize;
        if self.cur.len() + left.div_ceil(self.max_size) >= self.best.len() {
            return;
        }
        let low = uncovered.trailing_zeros() as usize;
        for i in 0..self.by_low[low].len() {
            let p = self.by_low[low][i];
            if self.masks[p] & !uncovered == 0 {
                self.cur.push(p);
                self.go(uncovered & !self.masks[p]);
                self.cur.pop();
            }
        }
    }
}

/// Minimum number of vertex-disjoint pieces, red copies from `fam1` and blue
/// copies from `fam2`, covering every vertex; with one optimal certificate.
pub fn min_partition_exact(
    g: &ColoredCompleteGraph,
    fam1: &GraphFamily,
    fam2: &GraphFamily,
) -> Result<(usize, PartitionCertificate)> {
    check_cap(g)?;
    let n = g.vertex_count();
    let mut pieces: Vec<(u32, Color, Vec<usize>)> = Vec::new();
    for (color, fam) in [(Color::Red, fam1), (Color::Blue, fam2)] {
        for (mask, map) in colored_copies(g, fam, color, n) {
            pieces.push((mask, color, map));
        }
    }
    // one entry per vertex set; a set valid in both colors keeps the color
    // the host prefers on it, so swapping colors swaps the answer
    pieces.sort_by_key(|&(mask, color, _)| (mask, color != g.preferred_color(&mask_vertices(mask))));
    pieces.dedup_by_key(|p| p.0);
    let masks: Vec<u32> = pieces.iter().map(|p| p.0).collect();
    let mut by_low = vec![Vec::new(); n];
    for (i, &m) in masks.iter().enumerate() {
        by_low[m.trailing_zeros() as usize].push(i);
    }
    for list in by_low.iter_mut() {
        list.sort_by_key(|&i| (std::cmp::Reverse(masks[i].count_ones()), masks[i]));
    }
    let max_size = masks.iter().map(|m| m.count_ones() as usize).max().unwrap_or(1);
    // singletons always exist, so this is a valid starting solution
    let singletons: Vec<usize> = (0..n)
        .map(|v| masks.iter().position(|&m| m == 1 << v).expect("singleton piece"))
        .collect();
    let mut bnb = Bnb {
        by_low,
        masks,
        max_size,
        best: singletons.clone(),
        cur: Vec::new(),
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    bnb.go(full);
    let mut cert = PartitionCertificate::new(n);
    for &i in &bnb.best {
        let (_, color, map) = &pieces[i];
        let fam = if *color == Color::Red { fam1 } else { fam2 };
        cert.pieces.push(CertificatePiece::from_map(*color, fam.name(), map));
    }
    Ok((bnb.best.len(), cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_red_edge() -> ColoredCompleteGraph {
        ColoredCompleteGraph::from_fn(3, |u, v| if (u, v) == (0, 1) { Color::Red } else { Color::Blue }).unwrap()
    }

    fn sets(copies: &[MonoCopy], color: Color) -> Vec<Vec<usize>> {
        copies.iter().filter(|c| c.color == color).map(|c| c.vertices.clone()).collect()
    }

    #[test]
    fn all_red_triangle_cycles() {
        let g = ColoredCompleteGraph::monochromatic(3, Color::Red).unwrap();
        let copies = enumerate_mono_copies(&g, &GraphFamily::cycles(), 3).unwrap();
        let mut red = sets(&copies, Color::Red);
        red.sort();
        assert_eq!(red, vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![1], vec![1, 2], vec![2]]);
        assert_eq!(sets(&copies, Color::Blue), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn single_edge_matchings() {
        let g = ColoredCompleteGraph::monochromatic(2, Color::Red).unwrap();
        let copies = enumerate_mono_copies(&g, &GraphFamily::matchings(), 2).unwrap();
        assert!(sets(&copies, Color::Red).contains(&vec![0, 1]));
        assert!(!sets(&copies, Color::Blue).contains(&vec![0, 1]));
        assert_eq!(sets(&copies, Color::Blue).len(), 2);
    }

    #[test]
    fn matching_plus_free_vertex_in_both_colors() {
        let copies = enumerate_mono_copies(&one_red_edge(), &GraphFamily::matchings(), 3).unwrap();
        assert!(sets(&copies, Color::Red).contains(&vec![0, 1, 2]));
        assert!(sets(&copies, Color::Blue).contains(&vec![0, 1, 2]));
        let (count, cert) = min_partition_exact(&one_red_edge(), &GraphFamily::matchings(), &GraphFamily::matchings()).unwrap();
        assert_eq!(count, 1);
        assert_eq!(cert.len(), 1);
    }

    #[test]
    fn blue_k4_is_one_cycle() {
        let g = ColoredCompleteGraph::monochromatic(4, Color::Blue).unwrap();
        let (count, cert) = min_partition_exact(&g, &GraphFamily::paths(), &GraphFamily::cycles()).unwrap();
        assert_eq!(count, 1);
        assert_eq!(cert.pieces[0].color, Color::Blue);
        assert_eq!(cert.pieces[0].family, "cycles");
    }

    #[test]
    fn cap_is_enforced() {
        let g = ColoredCompleteGraph::monochromatic(13, Color::Blue).unwrap();
        assert!(matches!(
            min_partition_exact(&g, &GraphFamily::paths(), &GraphFamily::paths()),
            Err(Error::TooLarge { .. })
        ));
    }
}
