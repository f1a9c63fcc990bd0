//! Backtracking subgraph embedding shared by the copy finder, the cylinder
//! embedder and the oracle.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `map[v]` is the host image of pattern vertex `v`.
    Found(Vec<usize>),
    /// The whole search space was explored: no embedding exists.
    Exhausted,
    /// Node budget or deadline hit first.
    OutOfBudget,
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub nodes: u64,
    pub deadline: Option<Instant>,
    /// `None`: candidates in increasing host index. `Some(seed)`: shuffled.
    pub shuffle: Option<u64>,
}

impl Limits {
    pub fn nodes(nodes: u64) -> Self {
        Limits {
            nodes,
            deadline: None,
            shuffle: None,
        }
    }

    pub fn unlimited() -> Self {
        Self::nodes(u64::MAX)
    }
}

/// Pattern order: start at the highest-degree vertex (lowest index on ties),
/// then repeatedly take the vertex with most already-ordered neighbours, then
/// highest degree, then lowest index.
pub fn pattern_order(pattern: &Graph) -> Vec<usize> {
    let n = pattern.vertex_count();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (links[v], pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for u in pattern.neighbors(v).iter() {
            links[u] += 1;
        }
    }
    order
}

struct Search<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    domains: &'a [BitSet],
    /// `None`: pick the unplaced vertex with fewest candidates at each step.
    order: Option<Vec<usize>>,
    map: Vec<usize>,
    used: BitSet,
    nodes: u64,
    limits: Limits,
    rng: Option<ChaCha8Rng>,
    out_of_budget: bool,
    /// Counting mode: record every complete map and keep going.
    found: Option<u64>,
}

impl Search<'_> {
    fn candidates(&self, v: usize) -> BitSet {
        let mut c = self.domains[v].clone();
        c.difference_with(&self.used);
        for u in self.pattern.neighbors(v).iter() {
            if self.map[u] != usize::MAX {
                c.intersect_with(self.host.neighbors(self.map[u]));
            }
        }
        c
    }

    /// Every unplaced neighbour of `v` still has somewhere to go.
    fn forward_ok(&self, v: usize) -> bool {
        self.pattern
            .neighbors(v)
            .iter()
            .filter(|&w| self.map[w] == usize::MAX)
            .all(|w| !self.candidates(w).is_empty())
    }

    /// Fewest candidates first, then most placed neighbours, higher degree,
    /// lower index. `None` when some unplaced vertex has no candidate left.
    fn most_constrained(&self) -> Option<(usize, BitSet)> {
        let mut best: Option<((usize, std::cmp::Reverse<usize>, std::cmp::Reverse<usize>, usize), BitSet)> = None;
        for v in 0..self.map.len() {
            if self.map[v] != usize::MAX {
                continue;
            }
            let c = self.candidates(v);
            if c.is_empty() {
                return None;
            }
            let placed = self.pattern.neighbors(v).iter().filter(|&u| self.map[u] != usize::MAX).count();
            let key = (
                c.len(),
                std::cmp::Reverse(placed),
                std::cmp::Reverse(self.pattern.degree(v)),
                v,
            );
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, c));
            }
        }
        best.map(|((.., v), c)| (v, c))
    }

    fn go(&mut self, depth: usize) -> bool {
        if depth == self.map.len() {
            if let Some(c) = self.found.as_mut() {
                *c += 1;
                return false;
            }
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.limits.nodes
            || (self.nodes.is_multiple_of(1024) && self.limits.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.out_of_budget = true;
            return false;
        }
        let (v, cands) = match &self.order {
            Some(order) => (order[depth], self.candidates(order[depth])),
            None => match self.most_constrained() {
                Some(pick) => pick,
                None => return false,
            },
        };
        let mut cands = cands.to_vec();
        if let Some(rng) = self.rng.as_mut() {
            cands.shuffle(rng);
        }
        for h in cands {
            self.map[v] = h;
            self.used.insert(h);
            if (self.order.is_none() || self.forward_ok(v)) && self.go(depth + 1) {
                return true;
            }
            self.used.remove(h);
            self.map[v] = usize::MAX;
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

/// Injective homomorphism from `pattern` into `host` with pattern vertex `v`
/// restricted to `domains[v]`. Pattern vertices are visited in `order`, or
/// most-constrained first when `order` is `None`.
pub fn embed(pattern: &Graph, host: &Graph, domains: &[BitSet], order: Option<Vec<usize>>, limits: Limits) -> Outcome {
    let n = pattern.vertex_count();
    assert_eq!(domains.len(), n);
    assert!(order.as_ref().is_none_or(|o| o.len() == n));
    if n == 0 {
        return Outcome::Found(Vec::new());
    }
    let Some(pruned) = prune(pattern, host, domains) else {
        return Outcome::Exhausted;
    };
    let mut s = Search::new(pattern, host, &pruned, order, limits);
    if s.go(0) {
        Outcome::Found(s.map)
    } else if s.out_of_budget {
        Outcome::OutOfBudget
    } else {
        Outcome::Exhausted
    }
}

/// Number of injective homomorphisms of `pattern` into `host` with every
/// vertex mapped into `allowed`, and whether the count is complete (false if
/// the limits cut the enumeration short).
pub fn count_embeddings(pattern: &Graph, host: &Graph, allowed: &BitSet, limits: Limits) -> (u64, bool) {
    let n = pattern.vertex_count();
    if n == 0 {
        return (1, true);
    }
    let domains = vec![allowed.clone(); n];
    let Some(pruned) = prune(pattern, host, &domains) else {
        return (0, true);
    };
    let mut s = Search::new(pattern, host, &pruned, Some(pattern_order(pattern)), limits);
    s.found = Some(0);
    s.go(0);
    (s.found.unwrap(), !s.out_of_budget)
}

impl<'a> Search<'a> {
    fn new(pattern: &'a Graph, host: &'a Graph, domains: &'a [BitSet], order: Option<Vec<usize>>, limits: Limits) -> Self {
        Search {
            pattern,
            host,
            domains,
            order,
            map: vec![usize::MAX; pattern.vertex_count()],
            used: BitSet::new(host.vertex_count()),
            nodes: 0,
            limits,
            rng: limits.shuffle.map(ChaCha8Rng::seed_from_u64),
            out_of_budget: false,
            found: None,
        }
    }
}

/// Drops host vertices whose degree inside the reachable set is below the
/// pattern degree; `None` if some domain empties.
fn prune(pattern: &Graph, host: &Graph, domains: &[BitSet]) -> Option<Vec<BitSet>> {
    let n = pattern.vertex_count();
    // cheap degree pruning
    let mut pruned: Vec<BitSet> = Vec::with_capacity(n);
    let mut reachable = BitSet::new(host.vertex_count());
    for d in domains {
        reachable.union_with(d);
    }
    if reachable.len() < n {
        return None;
    }
    for (v, d) in domains.iter().enumerate() {
        let need = pattern.degree(v);
        let mut p = d.clone();
        if need > 0 {
            for h in d.iter() {
                if host.degree_into(h, &reachable) < need {
                    p.remove(h);
                }
            }
        }
        if p.is_empty() {
            return None;
        }
        pruned.push(p);
    }
    Some(pruned)
}

/// Every vertex of `pattern` may go anywhere in `allowed`.
pub fn embed_into_set(pattern: &Graph, host: &Graph, allowed: &BitSet, limits: Limits) -> Outcome {
    let domains = vec![allowed.clone(); pattern.vertex_count()];
    embed(pattern, host, &domains, Some(pattern_order(pattern)), limits)
}
