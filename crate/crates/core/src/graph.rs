//! Simple graphs, 2-edge-colored complete graphs and pair densities.

use std::fmt;

use num_rational::Ratio;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Exact rational used for densities and every threshold they are compared to.
pub type Rational = Ratio<i64>;

/// Converts a decimal parameter such as `0.2` to the nearest small rational.
pub fn rational(x: f64) -> Rational {
    Ratio::approximate_float(x).unwrap_or_else(|| panic!("{x} is not representable"))
}

/// Smallest integer `s` with `s > eps * size`.
pub fn min_size_above(eps: Rational, size: usize) -> usize {
    let num = *eps.numer() as i128 * size as i128;
    let den = *eps.denom() as i128;
    (num.div_euclid(den) + 1).max(0) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            'R' => Some(Color::Red),
            'B' => Some(Color::Blue),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Undirected simple graph on vertices `0..n` with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BitSet>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BitSet::new(n); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// Rejects loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
        }
        self.insert_edge(u, v);
        Ok(())
    }

    /// Adds `uv` if absent; returns whether it was added. Panics on loops.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-loop");
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.edge_count += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if self.adj[u].remove(v) {
            self.adj[v].remove(u);
            self.edge_count -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// `deg(v, U)`: number of neighbours of `v` inside `set`.
    #[inline]
    pub fn degree_into(&self, v: usize, set: &BitSet) -> usize {
        self.adj[v].intersection_len(set)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Disjoint union; `other` is relabelled to follow `self`'s vertices.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.vertex_count();
        let mut g = Graph::empty(offset + other.vertex_count());
        for (u, v) in self.edges() {
            g.insert_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.insert_edge(u + offset, v + offset);
        }
        g
    }

    /// Induced subgraph on `vertices`, relabelled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.insert_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for v in self.adj[u].iter() {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A proper 2-coloring (`false`/`true` per vertex) if the graph is bipartite.
    /// The smallest vertex of each component gets `false`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for v in self.adj[u].iter() {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            stack.push(v);
                        }
                        Some(sv) if sv == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Vertex order where each vertex has few neighbours earlier in the order
    /// (reverse of repeated min-degree removal).
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .unwrap();
            removed[v] = true;
            order.push(v);
            for u in self.adj[v].iter() {
                if !removed[u] {
                    deg[u] -= 1;
                }
            }
        }
        order.reverse();
        order
    }

    /// True if `self`'s edges are a subset of `other`'s on the same labels.
    pub fn is_labeled_subgraph_of(&self, other: &Graph) -> bool {
        self.vertex_count() <= other.vertex_count()
            && self.edges().all(|(u, v)| other.has_edge(u, v))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A 2-edge-coloring of `K_n`. Each color class is kept as a [`Graph`] so the
/// same kernels serve both colors.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredCompleteGraph {
    red: Graph,
    blue: Graph,
}

impl ColoredCompleteGraph {
    pub fn from_fn<F: FnMut(usize, usize) -> Color>(n: usize, mut color: F) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a colored complete graph needs n >= 1".into()));
        }
        let mut red = Graph::empty(n);
        let mut blue = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                match color(u, v) {
                    Color::Red => red.insert_edge(u, v),
                    Color::Blue => blue.insert_edge(u, v),
                };
            }
        }
        Ok(ColoredCompleteGraph { red, blue })
    }

    pub fn monochromatic(n: usize, color: Color) -> Result<Self> {
        Self::from_fn(n, |_, _| color)
    }

    /// Builds the coloring whose red class is `red` and blue class its complement.
    pub fn from_red_graph(red: &Graph) -> Result<Self> {
        Self::from_fn(red.vertex_count(), |u, v| {
            if red.has_edge(u, v) {
                Color::Red
            } else {
                Color::Blue
            }
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.red.vertex_count()
    }

    /// Color of the edge `uv`; panics on `u == v`.
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> Color {
        assert_ne!(u, v, "no edge at a single vertex");
        if self.red.has_edge(u, v) {
            Color::Red
        } else {
            Color::Blue
        }
    }

    #[inline]
    pub fn class(&self, color: Color) -> &Graph {
        match color {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    pub fn set_color(&mut self, u: usize, v: usize, color: Color) {
        let (to, from) = match color {
            Color::Red => (&mut self.red, &mut self.blue),
            Color::Blue => (&mut self.blue, &mut self.red),
        };
        from.remove_edge(u, v);
        to.insert_edge(u, v);
    }

    /// Same graph with every edge color flipped.
    pub fn swapped(&self) -> Self {
        ColoredCompleteGraph {
            red: self.blue.clone(),
            blue: self.red.clone(),
        }
    }

    /// Restriction to `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        ColoredCompleteGraph {
            red: self.red.induced(vertices),
            blue: self.blue.induced(vertices),
        }
    }

    /// Color-neutral preference used wherever a tie between the colors must be
    /// broken: the majority color inside `vertices`, then the color of the edge
    /// between the two smallest vertices. A single vertex looks at the edge to
    /// its successor (cyclically).
    pub fn preferred_color(&self, vertices: &[usize]) -> Color {
        let n = self.vertex_count();
        if n == 1 {
            return Color::Red;
        }
        let set = BitSet::from_iter_in(n, vertices.iter().copied());
        let red: usize = set.iter().map(|v| self.red.degree_into(v, &set)).sum();
        let blue: usize = set.iter().map(|v| self.blue.degree_into(v, &set)).sum();
        if red != blue {
            return if red > blue { Color::Red } else { Color::Blue };
        }
        let mut it = set.iter();
        match (it.next(), it.next()) {
            (Some(a), Some(b)) => self.color(a, b),
            (Some(a), None) => self.color(a, (a + 1) % n),
            _ => Color::Red,
        }
    }
}

impl fmt::Debug for ColoredCompleteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredCompleteGraph")
            .field("n", &self.vertex_count())
            .field("red_edges", &self.red.edge_count())
            .field("blue_edges", &self.blue.edge_count())
            .finish()
    }
}

/// Two disjoint vertex sets of a host graph (for colored hosts, pass one
/// color class).
#[derive(Clone, Debug)]
pub struct VertexPair<'g> {
    host: &'g Graph,
    a: Vec<usize>,
    b: Vec<usize>,
    a_set: BitSet,
    b_set: BitSet,
}

impl<'g> VertexPair<'g> {
    pub fn new(host: &'g Graph, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        let n = host.vertex_count();
        let mut a_set = BitSet::new(n);
        let mut b_set = BitSet::new(n);
        for &v in &a {
            if v >= n || !a_set.insert(v) {
                return Err(Error::Domain(format!("bad or repeated vertex {v} in A")));
            }
        }
        for &v in &b {
            if v >= n || !b_set.insert(v) {
                return Err(Error::Domain(format!("bad or repeated vertex {v} in B")));
            }
        }
        if !a_set.is_disjoint(&b_set) {
            return Err(Error::Domain("A and B must be disjoint".into()));
        }
        Ok(VertexPair {
            host,
            a,
            b,
            a_set,
            b_set,
        })
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn a_set(&self) -> &BitSet {
        &self.a_set
    }

    pub fn b_set(&self) -> &BitSet {
        &self.b_set
    }

    /// `e(A, B)`.
    pub fn edge_count(&self) -> usize {
        self.a
            .iter()
            .map(|&v| self.host.degree_into(v, &self.b_set))
            .sum()
    }

    pub fn swapped(&self) -> VertexPair<'g> {
        VertexPair {
            host: self.host,
            a: self.b.clone(),
            b: self.a.clone(),
            a_set: self.b_set.clone(),
            b_set: self.a_set.clone(),
        }
    }
}

/// `d(A,B) = e(A,B) / (|A||B|)`, exactly.
pub fn density(pair: &VertexPair<'_>) -> Result<Rational> {
    subset_density(pair.host, pair.a(), pair.b())
}

/// Density between two arbitrary nonempty vertex lists of `host`.
pub fn subset_density(host: &Graph, a: &[usize], b: &[usize]) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("density of an empty set is undefined".into()));
    }
    let b_set = BitSet::from_iter_in(host.vertex_count(), b.iter().copied());
    let e: usize = a.iter().map(|&v| host.degree_into(v, &b_set)).sum();
    Ok(Rational::new(e as i64, (a.len() * b.len()) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_bipartite(p: usize, q: usize) -> Graph {
        let mut g = Graph::empty(p + q);
        for u in 0..p {
            for v in p..p + q {
                g.insert_edge(u, v);
            }
        }
        g
    }

    #[test]
    fn density_examples() {
        let g = complete_bipartite(3, 4);
        let pair = VertexPair::new(&g, vec![0, 1, 2], vec![3, 4, 5, 6]).unwrap();
        assert_eq!(density(&pair).unwrap(), Rational::from_integer(1));

        let empty = Graph::empty(7);
        let pair = VertexPair::new(&empty, vec![0, 1, 2], vec![3, 4, 5, 6]).unwrap();
        assert_eq!(density(&pair).unwrap(), Rational::from_integer(0));

        let g = Graph::from_edges(5, [(0, 2), (0, 3), (1, 4)]).unwrap();
        let pair = VertexPair::new(&g, vec![0, 1], vec![2, 3, 4]).unwrap();
        assert_eq!(density(&pair).unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn density_rejects_empty_side() {
        let g = Graph::empty(3);
        let pair = VertexPair::new(&g, vec![], vec![1]).unwrap();
        assert!(matches!(density(&pair), Err(Error::Domain(_))));
    }

    #[test]
    fn pair_rejects_overlap() {
        let g = Graph::empty(3);
        assert!(VertexPair::new(&g, vec![0, 1], vec![1, 2]).is_err());
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn min_size_above_is_strict() {
        assert_eq!(min_size_above(Rational::new(1, 5), 8), 2);
        assert_eq!(min_size_above(Rational::new(1, 4), 8), 3);
        assert_eq!(min_size_above(Rational::new(1, 2), 10), 6);
    }

    #[test]
    fn rational_from_decimal() {
        assert_eq!(rational(0.2), Rational::new(1, 5));
        assert_eq!(rational(0.45), Rational::new(9, 20));
    }

    #[test]
    fn colored_classes_complement() {
        let g = ColoredCompleteGraph::from_fn(6, |u, v| {
            if (u < 3) != (v < 3) {
                Color::Red
            } else {
                Color::Blue
            }
        })
        .unwrap();
        assert_eq!(g.class(Color::Red).edge_count(), 9);
        assert_eq!(g.class(Color::Blue).edge_count(), 6);
        assert_eq!(g.color(0, 4), Color::Red);
        let s = g.swapped();
        assert_eq!(s.color(0, 4), Color::Blue);
    }

    #[test]
    fn bipartition_and_degeneracy() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(!c5.is_bipartite());
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(p4.bipartition().unwrap(), vec![false, true, false, true]);
        let order = c5.degeneracy_order();
        assert_eq!(order.len(), 5);
    }
}
