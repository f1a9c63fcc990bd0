//! ε-regularity of vertex pairs: exact refutation search for small parts, a
//! seeded witness hunt for large ones, super-regularity reports, slicing
//! arithmetic and the cylinder type.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::graph::{density, min_size_above, subset_density, Color, Graph, Rational, VertexPair};
use crate::error::{Error, Result};

/// Largest part size accepted by [`check_regularity_exact`].
pub const EXACT_CHECK_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    Irregular,
    Unknown,
}

/// Subsets `X ⊆ A`, `Y ⊆ B` whose density deviates from `d(A,B)` by at least ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub checked_exactly: bool,
}

impl RegularityVerdict {
    fn irregular(witness: Witness, checked_exactly: bool) -> Self {
        RegularityVerdict {
            verdict: Verdict::Irregular,
            witness: Some(witness),
            checked_exactly,
        }
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Irregular
    }
}

/// Re-derives a witness from scratch: sizes above the ε thresholds and a
/// density gap of at least ε.
pub fn witness_violates(pair: &VertexPair<'_>, eps: Rational, w: &Witness) -> bool {
    let in_a = w.x.iter().all(|v| pair.a_set().contains(*v));
    let in_b = w.y.iter().all(|v| pair.b_set().contains(*v));
    if !in_a || !in_b || w.x.is_empty() || w.y.is_empty() {
        return false;
    }
    if w.x.len() < min_size_above(eps, pair.a().len()) || w.y.len() < min_size_above(eps, pair.b().len()) {
        return false;
    }
    let whole = match density(pair) {
        Ok(d) => d,
        Err(_) => return false,
    };
    let part = subset_density(pair.host(), &w.x, &w.y).expect("nonempty witness");
    let gap = if part > whole { part - whole } else { whole - part };
    gap >= eps
}

/// `q * |sum*ab - e*x*t| >= p * x*t*ab` with `eps = p/q`: the sub-pair of sizes
/// `x`, `t` spanning `sum` edges deviates by at least ε from `e/(ab)`.
#[inline]
fn deviates(sum: u64, x: u64, t: u64, e: u64, ab: u64, eps: Rational) -> bool {
    let lhs = (sum as i128 * ab as i128 - e as i128 * x as i128 * t as i128).abs();
    let p = *eps.numer() as i128;
    let q = *eps.denom() as i128;
    q * lhs >= p * (x * t * ab) as i128
}

/// Exhaustive check of Definition-1 regularity for parts of at most
/// [`EXACT_CHECK_CAP`] vertices.
///
/// For each `X ⊆ A` the extreme `e(X, Y)` over `|Y| = t` come from the `t`
/// vertices of `B` with the fewest / most neighbours in `X`, so only `2^|A|`
/// subsets need enumerating.
pub fn check_regularity_exact(pair: &VertexPair<'_>, eps: Rational) -> Result<RegularityVerdict> {
    check_regularity_exact_capped(pair, eps, EXACT_CHECK_CAP)
}

pub fn check_regularity_exact_capped(pair: &VertexPair<'_>, eps: Rational, cap: usize) -> Result<RegularityVerdict> {
    let (a, b) = (pair.a(), pair.b());
    for (what, size) in [("|A|", a.len()), ("|B|", b.len())] {
        if size > cap.min(24) {
            return Err(Error::TooLarge {
                what,
                size,
                limit: cap.min(24),
            });
        }
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("regularity needs nonempty parts".into()));
    }
    let host = pair.host();
    // adjacency of each B vertex as a mask over A indices
    let masks: Vec<u32> = b
        .iter()
        .map(|&y| {
            a.iter()
                .enumerate()
                .filter(|&(_, &x)| host.has_edge(x, y))
                .fold(0u32, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let e: u64 = masks.iter().map(|m| m.count_ones() as u64).sum();
    let ab = (a.len() * b.len()) as u64;
    let min_x = min_size_above(eps, a.len());
    let min_y = min_size_above(eps, b.len());
    if min_x <= a.len() && min_y <= b.len() {
        let mut cnt = vec![0u64; b.len()];
        let mut low: Vec<usize> = (0..b.len()).collect();
        let mut high = low.clone();
        for xmask in 1u32..(1u32 << a.len()) {
            let xs = xmask.count_ones() as usize;
            if xs < min_x {
                continue;
            }
            for (c, m) in cnt.iter_mut().zip(&masks) {
                *c = (m & xmask).count_ones() as u64;
            }
            low.sort_by_key(|&j| (cnt[j], j));
            high.sort_by_key(|&j| (std::cmp::Reverse(cnt[j]), j));
            let (mut lo_sum, mut hi_sum) = (0u64, 0u64);
            for t in 1..=b.len() {
                lo_sum += cnt[low[t - 1]];
                hi_sum += cnt[high[t - 1]];
                if t < min_y {
                    continue;
                }
                for (sum, order) in [(lo_sum, &low), (hi_sum, &high)] {
                    if deviates(sum, xs as u64, t as u64, e, ab, eps) {
                        let mut x: Vec<usize> = (0..a.len()).filter(|i| xmask >> i & 1 == 1).map(|i| a[i]).collect();
                        let mut y: Vec<usize> = order[..t].iter().map(|&j| b[j]).collect();
                        x.sort_unstable();
                        y.sort_unstable();
                        return Ok(RegularityVerdict::irregular(Witness { x, y }, true));
                    }
                }
            }
        }
    }
    Ok(RegularityVerdict {
        verdict: Verdict::Regular,
        witness: None,
        checked_exactly: true,
    })
}

/// Best `Y ⊆ side` (any size `>= min`) against a fixed `X`, for one direction.
/// Returns the chosen set and its density.
fn best_response(host: &Graph, fixed: &BitSet, fixed_len: usize, side: &[usize], min: usize, high: bool) -> (Vec<usize>, Rational) {
    let mut scored: Vec<(usize, usize)> = side.iter().map(|&v| (host.degree_into(v, fixed), v)).collect();
    if high {
        scored.sort_by_key(|&(c, v)| (std::cmp::Reverse(c), v));
    } else {
        scored.sort_by_key(|&(c, v)| (c, v));
    }
    let mut best: Option<(usize, Rational)> = None;
    let mut sum = 0usize;
    for t in 1..=scored.len() {
        sum += scored[t - 1].0;
        if t < min {
            continue;
        }
        let d = Rational::new(sum as i64, (t * fixed_len) as i64);
        let better = match best {
            None => true,
            Some((_, bd)) => (high && d > bd) || (!high && d < bd),
        };
        if better {
            best = Some((t, d));
        }
    }
    let (t, d) = best.expect("min <= side length");
    let mut chosen: Vec<usize> = scored[..t].iter().map(|&(_, v)| v).collect();
    chosen.sort_unstable();
    (chosen, d)
}

/// Seeded witness hunt: random starting subsets improved by alternating best
/// responses. Never claims regularity; returns `Unknown` when no witness is
/// found. Deterministic per seed.
pub fn check_regularity_heuristic(pair: &VertexPair<'_>, eps: Rational, seed: u64, trials: usize) -> RegularityVerdict {
    let unknown = RegularityVerdict {
        verdict: Verdict::Unknown,
        witness: None,
        checked_exactly: false,
    };
    let (a, b) = (pair.a(), pair.b());
    if a.is_empty() || b.is_empty() {
        return unknown;
    }
    let min_x = min_size_above(eps, a.len());
    let min_y = min_size_above(eps, b.len());
    if min_x > a.len() || min_y > b.len() {
        return unknown;
    }
    let whole = density(pair).expect("nonempty parts");
    let host = pair.host();
    let n = host.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let high = trial % 2 == 0;
        let size = rng.gen_range(min_x..=a.len());
        let mut x: Vec<usize> = a.choose_multiple(&mut rng, size).copied().collect();
        x.sort_unstable();
        let mut last: Option<Rational> = None;
        for _ in 0..16 {
            let x_set = BitSet::from_iter_in(n, x.iter().copied());
            let (y, _) = best_response(host, &x_set, x.len(), b, min_y, high);
            let y_set = BitSet::from_iter_in(n, y.iter().copied());
            let (nx, d) = best_response(host, &y_set, y.len(), a, min_x, high);
            let gap = if d > whole { d - whole } else { whole - d };
            if gap >= eps {
                let w = Witness { x: nx, y };
                debug_assert!(witness_violates(pair, eps, &w));
                return RegularityVerdict::irregular(w, false);
            }
            if last.is_some_and(|l| l >= gap) {
                break;
            }
            last = Some(gap);
            x = nx;
        }
    }
    unknown
}

/// Options for checks that pick between the exact and the heuristic kernel.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub exact_cap: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            exact_cap: EXACT_CHECK_CAP,
            seed: 0,
            trials: 64,
        }
    }
}

/// Exact when both parts fit under the cap, heuristic otherwise.
pub fn check_regularity(pair: &VertexPair<'_>, eps: Rational, opts: CheckOptions) -> RegularityVerdict {
    if pair.a().len() <= opts.exact_cap && pair.b().len() <= opts.exact_cap {
        if let Ok(v) = check_regularity_exact_capped(pair, eps, opts.exact_cap) {
            return v;
        }
    }
    check_regularity_heuristic(pair, eps, opts.seed, opts.trials)
}

/// The three super-regularity conditions, reported separately.
#[derive(Clone, Debug)]
pub struct SuperRegularReport {
    pub regularity: RegularityVerdict,
    pub density: Rational,
    pub density_ok: bool,
    /// Vertices of `A` with `deg(a, B) < δ|B|`.
    pub low_degree_a: Vec<usize>,
    /// Vertices of `B` with `deg(b, A) < δ|A|`.
    pub low_degree_b: Vec<usize>,
}

impl SuperRegularReport {
    /// True when nothing was refuted; an `Unknown` regularity verdict does not
    /// count against the pair.
    pub fn holds(&self) -> bool {
        !self.regularity.is_refuted() && self.density_ok && self.low_degree_a.is_empty() && self.low_degree_b.is_empty()
    }
}

fn below_fraction(deg: usize, delta: Rational, size: usize) -> bool {
    // deg < delta * size
    (deg as i128) * (*delta.denom() as i128) < (*delta.numer() as i128) * size as i128
}

pub fn check_super_regular(pair: &VertexPair<'_>, eps: Rational, d: Rational, delta: Rational, opts: CheckOptions) -> Result<SuperRegularReport> {
    let dens = density(pair)?;
    let host = pair.host();
    let low_degree_a = pair
        .a()
        .iter()
        .copied()
        .filter(|&v| below_fraction(host.degree_into(v, pair.b_set()), delta, pair.b().len()))
        .collect();
    let low_degree_b = pair
        .b()
        .iter()
        .copied()
        .filter(|&v| below_fraction(host.degree_into(v, pair.a_set()), delta, pair.a().len()))
        .collect();
    Ok(SuperRegularReport {
        regularity: check_regularity(pair, eps, opts),
        density: dens,
        density_ok: dens >= d,
        low_degree_a,
        low_degree_b,
    })
}

/// Parameters inherited by a slice `(A', B')` of an `(ε, d, 0)`-super-regular
/// pair with `|A'| >= β|A|`, `|B'| >= β|B|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceParams {
    pub eps_prime: Rational,
    /// Open interval containing the slice density.
    pub d_low: Rational,
    pub d_high: Rational,
}

pub fn slice_params(eps: Rational, d: Rational, beta: Rational) -> Result<SliceParams> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    for (name, v) in [("eps", eps), ("d", d), ("beta", beta)] {
        if v <= zero || v >= one {
            return Err(Error::Precondition(format!("{name} = {v} must lie in (0, 1)")));
        }
    }
    if beta <= eps {
        return Err(Error::Precondition(format!("slicing needs beta > eps (beta = {beta}, eps = {eps})")));
    }
    let two_eps = eps * 2;
    let ratio = eps / beta;
    Ok(SliceParams {
        eps_prime: if ratio > two_eps { ratio } else { two_eps },
        d_low: d - eps,
        d_high: d + eps,
    })
}

/// Ordered disjoint vertex sets `V_1, ..., V_k` dense in one color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub parts: Vec<Vec<usize>>,
    pub color: Color,
    pub eps: Rational,
    pub d: Rational,
    pub delta: Rational,
}

impl Cylinder {
    pub fn new(parts: Vec<Vec<usize>>, color: Color, eps: Rational, d: Rational, delta: Rational) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::Precondition(format!("a cylinder needs k >= 2 parts, got {}", parts.len())));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &parts {
            for &v in p {
                if !seen.insert(v) {
                    return Err(Error::Precondition(format!("vertex {v} lies in two cylinder parts")));
                }
            }
        }
        Ok(Cylinder {
            parts,
            color,
            eps,
            d,
            delta,
        })
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.iter().flatten().copied()
    }

    /// `||V_i| - |V_j|| <= α min(|V_i|, |V_j|)` for every pair of parts.
    pub fn is_balanced(&self, alpha: Rational) -> bool {
        let sizes = self.sizes();
        sizes.iter().enumerate().all(|(i, &si)| {
            sizes[i + 1..].iter().all(|&sj| {
                let gap = si.abs_diff(sj) as i128;
                gap * (*alpha.denom() as i128) <= (*alpha.numer() as i128) * si.min(sj) as i128
            })
        })
    }
}
