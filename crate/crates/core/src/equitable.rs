//! Equitable proper colorings with at least `Δ + 1` colors, plus proper
//! colorings with prescribed class sizes (used to assign embedded graphs to
//! cylinder parts).
//!
//! The construction starts from a balanced greedy coloring and rebalances by
//! shifting vertices along paths of the class accessibility digraph: class `X`
//! points to class `Y` when some vertex of `X` has no neighbour in `Y`.
//! Shifting along a path from a largest class to a smaller one keeps the
//! coloring proper and lowers `Σ |class|²`. When no such path exists the
//! coloring is perturbed with size-preserving swaps and the shift is retried.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Graphs up to this size fall back to exhaustive search when rebalancing stalls.
const EXHAUSTIVE_LIMIT: usize = 10;
const RESTARTS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitableColoring {
    pub classes: Vec<Vec<usize>>,
}

impl EquitableColoring {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn is_equitable(&self) -> bool {
        let sizes = self.sizes();
        match (sizes.iter().max(), sizes.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo <= 1,
            _ => true,
        }
    }

    /// Classes partition the vertices and are independent.
    pub fn is_proper_partition_of(&self, g: &Graph) -> bool {
        is_proper_partition(g, &self.classes)
    }
}

pub fn is_proper_partition(g: &Graph, classes: &[Vec<usize>]) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for class in classes {
        for &v in class {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        for (i, &u) in class.iter().enumerate() {
            if class[i + 1..].iter().any(|&v| g.has_edge(u, v)) {
                return false;
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Equitable proper coloring with exactly `r` classes (some empty when `r > n`).
/// Requires `r >= Δ(g) + 1`.
pub fn equitable_color(g: &Graph, r: usize) -> Result<EquitableColoring> {
    let delta = g.max_degree();
    if r <= delta {
        return Err(Error::Unsupported(format!(
            "equitable coloring needs r >= Δ + 1 = {}, got r = {r}",
            delta + 1
        )));
    }
    let n = g.vertex_count();
    for attempt in 0..RESTARTS {
        let mut state = State::greedy(g, r, None, attempt);
        if state.rebalance(Goal::Equitable, attempt) {
            return Ok(EquitableColoring {
                classes: state.classes(),
            });
        }
    }
    if n <= EXHAUSTIVE_LIMIT {
        let sizes = equitable_sizes(n, r);
        if let Some(classes) = exhaustive_with_sizes(g, &sizes) {
            return Ok(EquitableColoring { classes });
        }
    }
    Err(Error::NotFound(format!(
        "no equitable {r}-coloring found for a graph with n = {n}, Δ = {delta}"
    )))
}

/// `n mod r` classes of size `⌈n/r⌉`, the rest `⌊n/r⌋`, largest first.
pub fn equitable_sizes(n: usize, r: usize) -> Vec<usize> {
    (0..r).map(|i| n / r + usize::from(i < n % r)).collect()
}

/// A proper coloring whose class `i` has exactly `targets[i]` vertices.
///
/// Two nonzero targets on a bipartite graph are solved exactly by
/// subset-sum over components; otherwise the shifting engine is run from a
/// greedy start, or from `start` (a proper coloring) when given.
pub fn color_with_sizes(g: &Graph, targets: &[usize], start: Option<&[Vec<usize>]>) -> Option<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if targets.iter().sum::<usize>() != n {
        return None;
    }
    let nonzero: Vec<usize> = (0..targets.len()).filter(|&i| targets[i] > 0).collect();
    let mut out = vec![Vec::new(); targets.len()];
    match nonzero.len() {
        0 => return Some(out),
        1 => {
            if g.edge_count() > 0 {
                return None;
            }
            out[nonzero[0]] = (0..n).collect();
            return Some(out);
        }
        2 if g.is_bipartite() => {
            let (i, j) = (nonzero[0], nonzero[1]);
            let [x, y] = two_coloring_with_sizes(g, targets[i])?;
            out[i] = x;
            out[j] = y;
            return Some(out);
        }
        _ => {}
    }
    for attempt in 0..RESTARTS {
        let mut state = match (attempt, start) {
            (0, Some(s)) => State::from_classes(g, targets.len(), s)?,
            _ => State::greedy(g, targets.len(), Some(targets), attempt),
        };
        if !state.complete {
            continue;
        }
        if state.rebalance(Goal::Sizes(targets), attempt) {
            return Some(state.classes());
        }
    }
    if n <= EXHAUSTIVE_LIMIT {
        return exhaustive_with_sizes(g, targets);
    }
    None
}

/// Proper 2-coloring of a bipartite graph with exactly `size0` vertices in the
/// first class, found by subset-sum over component orientations.
pub fn two_coloring_with_sizes(g: &Graph, size0: usize) -> Option<[Vec<usize>; 2]> {
    let side = g.bipartition()?;
    let n = g.vertex_count();
    if size0 > n {
        return None;
    }
    let comps = g.components();
    // (count of side-false vertices, count of side-true vertices)
    let counts: Vec<(usize, usize)> = comps
        .iter()
        .map(|c| {
            let f = c.iter().filter(|&&v| !side[v]).count();
            (f, c.len() - f)
        })
        .collect();
    // reach[i][s]: using components 0..i, class 0 can have exactly s vertices
    let mut reach = vec![vec![false; n + 1]; comps.len() + 1];
    reach[0][0] = true;
    for (i, &(f, t)) in counts.iter().enumerate() {
        for s in 0..=n {
            if reach[i][s] {
                if s + f <= n {
                    reach[i + 1][s + f] = true;
                }
                if s + t <= n {
                    reach[i + 1][s + t] = true;
                }
            }
        }
    }
    if !reach[comps.len()][size0] {
        return None;
    }
    let mut classes = [Vec::new(), Vec::new()];
    let mut s = size0;
    for i in (0..comps.len()).rev() {
        let (f, t) = counts[i];
        // prefer the natural orientation
        let flip = !(s >= f && reach[i][s - f]);
        let take = if flip { t } else { f };
        debug_assert!(s >= take && reach[i][s - take]);
        s -= take;
        for &v in &comps[i] {
            let in_zero = side[v] == flip;
            classes[usize::from(!in_zero)].push(v);
        }
    }
    classes[0].sort_unstable();
    classes[1].sort_unstable();
    Some(classes)
}

/// Backtracking over all assignments; only for tiny graphs.
fn exhaustive_with_sizes(g: &Graph, targets: &[usize]) -> Option<Vec<Vec<usize>>> {
    fn go(g: &Graph, v: usize, targets: &[usize], classes: &mut Vec<Vec<usize>>) -> bool {
        if v == g.vertex_count() {
            return true;
        }
        for c in 0..targets.len() {
            if classes[c].len() < targets[c] && classes[c].iter().all(|&u| !g.has_edge(u, v)) {
                classes[c].push(v);
                if go(g, v + 1, targets, classes) {
                    return true;
                }
                classes[c].pop();
            }
        }
        false
    }
    let mut classes = vec![Vec::new(); targets.len()];
    go(g, 0, targets, &mut classes).then_some(classes)
}

#[derive(Clone, Copy)]
enum Goal<'a> {
    Equitable,
    Sizes(&'a [usize]),
}

struct State<'g> {
    g: &'g Graph,
    color: Vec<usize>,
    sizes: Vec<usize>,
    /// `nbr[v * r + c]`: neighbours of `v` in class `c`.
    nbr: Vec<u32>,
    r: usize,
    complete: bool,
}

impl<'g> State<'g> {
    fn empty(g: &'g Graph, r: usize) -> Self {
        let n = g.vertex_count();
        State {
            g,
            color: vec![usize::MAX; n],
            sizes: vec![0; r],
            nbr: vec![0; n * r],
            r,
            complete: true,
        }
    }

    fn place(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        self.sizes[c] += 1;
        for u in self.g.neighbors(v).iter() {
            self.nbr[u * self.r + c] += 1;
        }
    }

    fn relocate(&mut self, v: usize, c: usize) {
        let old = self.color[v];
        debug_assert_eq!(self.nbr[v * self.r + c], 0);
        self.sizes[old] -= 1;
        for u in self.g.neighbors(v).iter() {
            self.nbr[u * self.r + old] -= 1;
        }
        self.place(v, c);
    }

    #[inline]
    fn nbrs_in(&self, v: usize, c: usize) -> u32 {
        self.nbr[v * self.r + c]
    }

    /// Degeneracy-order greedy; each vertex takes the allowed class with the
    /// largest remaining deficit (smallest size for the equitable goal).
    /// Later attempts shuffle the order.
    fn greedy(g: &'g Graph, r: usize, targets: Option<&[usize]>, attempt: u64) -> Self {
        let mut s = Self::empty(g, r);
        let mut order = g.degeneracy_order();
        if attempt > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(attempt);
            order.shuffle(&mut rng);
        }
        for v in order {
            let key = |c: usize| match targets {
                Some(t) => (s.sizes[c] as i64 - t[c] as i64, c),
                None => (s.sizes[c] as i64, c),
            };
            match (0..r).filter(|&c| s.nbrs_in(v, c) == 0).min_by_key(|&c| key(c)) {
                Some(c) => s.place(v, c),
                None => {
                    s.complete = false;
                    return s;
                }
            }
        }
        s
    }

    fn from_classes(g: &'g Graph, r: usize, classes: &[Vec<usize>]) -> Option<Self> {
        if classes.len() > r || !is_proper_partition(g, classes) {
            return None;
        }
        let mut s = Self::empty(g, r);
        for (c, class) in classes.iter().enumerate() {
            for &v in class {
                s.place(v, c);
            }
        }
        Some(s)
    }

    fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.r];
        for (v, &c) in self.color.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    fn done(&self, goal: Goal<'_>) -> bool {
        match goal {
            Goal::Equitable => {
                let hi = self.sizes.iter().max().copied().unwrap_or(0);
                let lo = self.sizes.iter().min().copied().unwrap_or(0);
                hi - lo <= 1
            }
            Goal::Sizes(t) => self.sizes == t,
        }
    }

    fn sources(&self, goal: Goal<'_>) -> Vec<usize> {
        match goal {
            Goal::Equitable => {
                let hi = self.sizes.iter().max().copied().unwrap_or(0);
                (0..self.r).filter(|&c| self.sizes[c] == hi).collect()
            }
            Goal::Sizes(t) => (0..self.r).filter(|&c| self.sizes[c] > t[c]).collect(),
        }
    }

    fn is_sink(&self, goal: Goal<'_>, source: usize, c: usize) -> bool {
        match goal {
            Goal::Equitable => self.sizes[c] + 2 <= self.sizes[source],
            Goal::Sizes(t) => self.sizes[c] < t[c],
        }
    }

    /// One shift along an accessibility path from a source class to a sink
    /// class. Returns false when no source reaches a sink.
    fn shift(&mut self, goal: Goal<'_>) -> bool {
        let n = self.g.vertex_count();
        for src in self.sources(goal) {
            // BFS over classes; parent[c] = (previous class, mover vertex)
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.r];
            let mut visited = vec![false; self.r];
            visited[src] = true;
            let mut queue = std::collections::VecDeque::from([src]);
            let mut found = None;
            'bfs: while let Some(x) = queue.pop_front() {
                for y in 0..self.r {
                    if visited[y] {
                        continue;
                    }
                    let mover = (0..n).find(|&v| self.color[v] == x && self.nbrs_in(v, y) == 0);
                    if let Some(m) = mover {
                        visited[y] = true;
                        parent[y] = Some((x, m));
                        if self.is_sink(goal, src, y) {
                            found = Some(y);
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if let Some(mut y) = found {
                while let Some((x, m)) = parent[y] {
                    self.relocate(m, y);
                    y = x;
                }
                return true;
            }
        }
        false
    }

    /// Random size-preserving swaps of adjacent vertices `v`, `u` where each is
    /// the other's only neighbour in the destination class, plus free moves
    /// between classes of equal size.
    fn perturb<R: Rng>(&mut self, rng: &mut R, steps: usize) {
        let n = self.g.vertex_count();
        if n == 0 {
            return;
        }
        for _ in 0..steps {
            let v = rng.gen_range(0..n);
            let cv = self.color[v];
            let c = rng.gen_range(0..self.r);
            if c == cv {
                continue;
            }
            match self.nbrs_in(v, c) {
                0 if self.sizes[c] + 1 == self.sizes[cv] => {
                    // equal sizes after the move
                    self.relocate(v, c);
                }
                1 => {
                    let u = self
                        .g
                        .neighbors(v)
                        .iter()
                        .find(|&u| self.color[u] == c)
                        .expect("one neighbour in class");
                    if self.nbrs_in(u, cv) == 1 {
                        // swap: move u first into cv (its only neighbour there is v)
                        self.sizes[cv] -= 1;
                        for w in self.g.neighbors(v).iter() {
                            self.nbr[w * self.r + cv] -= 1;
                        }
                        self.color[v] = usize::MAX;
                        self.relocate(u, cv);
                        self.place(v, c);
                    }
                }
                _ => {}
            }
        }
    }

    fn rebalance(&mut self, goal: Goal<'_>, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ede9_u64);
        let n = self.g.vertex_count();
        let mut stalls = 0;
        while !self.done(goal) {
            if self.shift(goal) {
                continue;
            }
            stalls += 1;
            if stalls > 200 {
                return false;
            }
            self.perturb(&mut rng, 4 * n.max(4));
        }
        true
    }
}
