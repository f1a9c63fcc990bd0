//! Δ-bounded graph sequences `F_1, F_2, ...`: built-in families, the
//! doubling-based lower-bound family, and the two derived families used by the
//! pipeline (one equitable class removed; two copies glued side by side).

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equitable::{equitable_color, two_coloring_with_sizes};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;

/// How a member of a minus-class family was cut out of its source member.
#[derive(Clone, Debug)]
pub struct Derivation {
    /// The `m`-vertex member.
    pub graph: Arc<Graph>,
    /// The source member it was cut from.
    pub source: Arc<Graph>,
    /// `kept[i]` is the source vertex that became vertex `i`.
    pub kept: Vec<usize>,
    /// Source vertices of the deleted class (independent in `source`).
    pub removed: Vec<usize>,
    /// Equitable coloring of `graph` by the remaining classes.
    pub classes: Vec<Vec<usize>>,
}

/// One original-family copy inside a doubled member: `base_n` vertices
/// starting at `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub base_n: usize,
    pub offset: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBoundFamilySpec {
    pub max_degree: usize,
    pub base_seed: u64,
}

enum Kind {
    Paths,
    Cycles,
    CyclePower(usize),
    Matchings,
    RandomBounded { seed: u64 },
    LowerBound { seed: u64 },
    MinusClass { base: GraphFamily, chi: usize },
    Doubled { base: GraphFamily },
    Directory { path: PathBuf, members: HashMap<usize, Arc<Graph>> },
}

struct Inner {
    name: String,
    max_degree: usize,
    bipartite: bool,
    chi: usize,
    kind: Kind,
    members: Mutex<HashMap<usize, Arc<Graph>>>,
    derivations: Mutex<HashMap<usize, Arc<Derivation>>>,
}

/// A Δ-bounded graph sequence. Cheap to clone; members are memoized.
#[derive(Clone)]
pub struct GraphFamily(Arc<Inner>);

impl fmt::Debug for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphFamily")
            .field("name", &self.0.name)
            .field("max_degree", &self.0.max_degree)
            .field("bipartite", &self.0.bipartite)
            .field("chi", &self.0.chi)
            .finish()
    }
}

impl GraphFamily {
    fn build(name: String, max_degree: usize, bipartite: bool, chi: usize, kind: Kind) -> Self {
        GraphFamily(Arc::new(Inner {
            name,
            max_degree,
            bipartite,
            chi,
            kind,
            members: Mutex::new(HashMap::new()),
            derivations: Mutex::new(HashMap::new()),
        }))
    }

    pub fn paths() -> Self {
        Self::build("paths".into(), 2, true, 2, Kind::Paths)
    }

    /// Cycles, with `K_1` and `K_2` counted as cycles.
    pub fn cycles() -> Self {
        Self::build("cycles".into(), 2, false, 3, Kind::Cycles)
    }

    /// `k`-th powers of cycles.
    pub fn cycle_power(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("cycle power needs k >= 1".into()));
        }
        Ok(Self::build(format!("cycle_power({k})"), 2 * k, false, 2 * k + 1, Kind::CyclePower(k)))
    }

    /// `⌊n/2⌋` disjoint edges plus an isolated vertex when `n` is odd.
    pub fn matchings() -> Self {
        Self::build("matchings".into(), 1, true, 2, Kind::Matchings)
    }

    pub fn random_bounded(max_degree: usize, seed: u64) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::Domain("random_bounded needs Δ >= 1".into()));
        }
        Ok(Self::build(
            format!("random_bounded({max_degree},{seed})"),
            max_degree,
            false,
            max_degree + 1,
            Kind::RandomBounded { seed },
        ))
    }

    /// Built-in family by name; `param` is `k` for `cycle_power` and `(Δ, seed)`
    /// for `random_bounded`.
    pub fn builtin(name: &str, param: Option<(usize, u64)>) -> Result<Self> {
        match (name, param) {
            ("paths", _) => Ok(Self::paths()),
            ("cycles", _) => Ok(Self::cycles()),
            ("matchings", _) => Ok(Self::matchings()),
            ("cycle_power", Some((k, _))) => Self::cycle_power(k),
            ("random_bounded", Some((d, s))) => Self::random_bounded(d, s),
            _ => Err(Error::UnknownFamily(name.to_string())),
        }
    }

    /// Parses family descriptors such as `paths`, `cycle_power(2)`,
    /// `random_bounded(3,7)`, `lower_bound(3,7)`, `doubled(paths)`,
    /// `minus(cycles,3)` or `dir:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("dir:") {
            return Self::from_directory(path);
        }
        let (head, args) = match spec.find('(') {
            Some(open) if spec.ends_with(')') => (&spec[..open], Some(&spec[open + 1..spec.len() - 1])),
            _ => (spec, None),
        };
        let unknown = || Error::UnknownFamily(spec.to_string());
        let ints = |s: &str| -> Result<Vec<u64>> {
            s.split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| unknown()))
                .collect()
        };
        match (head, args) {
            ("paths" | "cycles" | "matchings", None) => Self::builtin(head, None),
            ("cycle_power", Some(a)) => match ints(a)?.as_slice() {
                [k] => Self::cycle_power(*k as usize),
                _ => Err(unknown()),
            },
            ("random_bounded", Some(a)) => match ints(a)?.as_slice() {
                [d, s] => Self::random_bounded(*d as usize, *s),
                _ => Err(unknown()),
            },
            ("lower_bound", Some(a)) => match ints(a)?.as_slice() {
                [d, s] => lower_bound_family(LowerBoundFamilySpec {
                    max_degree: *d as usize,
                    base_seed: *s,
                }),
                _ => Err(unknown()),
            },
            ("doubled", Some(a)) => doubled_family(&Self::parse(a)?),
            ("minus", Some(a)) => {
                let comma = a.rfind(',').ok_or_else(unknown)?;
                let chi = a[comma + 1..].trim().parse::<usize>().map_err(|_| unknown())?;
                family_minus_class(&Self::parse(&a[..comma])?, chi)
            }
            _ => Err(unknown()),
        }
    }

    /// Loads `F<n>.edges` files from a directory. Each file starts with
    /// `<n> <m>` followed by `m` lines `<u> <v>` (1-indexed).
    pub fn from_directory<P: AsRef<Path>>(dir: P) -> Result<Self> {
        let dir = dir.as_ref();
        let mut members = HashMap::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            let Some(fname) = path.file_name().and_then(|f| f.to_str()) else {
                continue;
            };
            let Some(n) = fname
                .strip_prefix('F')
                .and_then(|r| r.strip_suffix(".edges"))
                .and_then(|d| d.parse::<usize>().ok())
            else {
                continue;
            };
            let g = crate::io::read_edges(&fs::read_to_string(&path)?)?;
            if g.vertex_count() != n {
                return Err(Error::InvalidGraph(format!(
                    "{} declares {} vertices",
                    path.display(),
                    g.vertex_count()
                )));
            }
            members.insert(n, Arc::new(g));
        }
        let max_degree = members.values().map(|g| g.max_degree()).max().unwrap_or(0).max(1);
        let bipartite = members.values().all(|g| g.is_bipartite());
        let name = format!("dir:{}", dir.display());
        Ok(Self::build(
            name,
            max_degree,
            bipartite,
            max_degree + 1,
            Kind::Directory {
                path: dir.to_path_buf(),
                members,
            },
        ))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn max_degree(&self) -> usize {
        self.0.max_degree
    }

    pub fn is_bipartite(&self) -> bool {
        self.0.bipartite
    }

    /// Number of colors in the equitable proper coloring every member is known to have.
    pub fn chi(&self) -> usize {
        self.0.chi
    }

    /// Built-in id or source of the family.
    pub fn provenance(&self) -> String {
        match &self.0.kind {
            Kind::Directory { path, .. } => format!("directory {}", path.display()),
            Kind::MinusClass { base, chi } => format!("{} minus one of {chi} equitable classes", base.provenance()),
            Kind::Doubled { base } => format!("doubled {}", base.provenance()),
            _ => format!("builtin {}", self.0.name),
        }
    }

    /// Same family with a different stored equitable chromatic bound.
    pub fn with_chi(&self, chi: usize) -> Result<Self> {
        if chi == 0 {
            return Err(Error::Domain("chi must be positive".into()));
        }
        let kind = match &self.0.kind {
            Kind::Paths => Kind::Paths,
            Kind::Cycles => Kind::Cycles,
            Kind::CyclePower(k) => Kind::CyclePower(*k),
            Kind::Matchings => Kind::Matchings,
            Kind::RandomBounded { seed } => Kind::RandomBounded { seed: *seed },
            Kind::LowerBound { seed } => Kind::LowerBound { seed: *seed },
            Kind::MinusClass { .. } | Kind::Doubled { .. } => {
                return Err(Error::Unsupported("chi of a derived family is fixed by its construction".into()))
            }
            Kind::Directory { path, members } => Kind::Directory {
                path: path.clone(),
                members: members.clone(),
            },
        };
        Ok(Self::build(self.0.name.clone(), self.0.max_degree, self.0.bipartite, chi, kind))
    }

    /// `F_n`, validated to have `n` vertices, maximum degree at most Δ and,
    /// for bipartite families, a proper 2-coloring.
    pub fn member(&self, n: usize) -> Result<Arc<Graph>> {
        if n == 0 {
            return Err(Error::Domain("families are indexed from n = 1".into()));
        }
        if let Some(g) = self.0.members.lock().unwrap().get(&n) {
            return Ok(g.clone());
        }
        let g = self.generate(n)?;
        if g.vertex_count() != n || g.max_degree() > self.0.max_degree {
            return Err(Error::InvalidGraph(format!(
                "{} member {n} has {} vertices and Δ = {}",
                self.0.name,
                g.vertex_count(),
                g.max_degree()
            )));
        }
        if self.0.bipartite && !g.is_bipartite() {
            return Err(Error::InvalidGraph(format!("{} member {n} is not bipartite", self.0.name)));
        }
        self.0.members.lock().unwrap().insert(n, g.clone());
        Ok(g)
    }

    fn generate(&self, n: usize) -> Result<Arc<Graph>> {
        let g = match &self.0.kind {
            Kind::Paths => Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))?,
            Kind::Cycles => cycle_power_graph(n, 1),
            Kind::CyclePower(k) => cycle_power_graph(n, *k),
            Kind::Matchings => Graph::from_edges(n, (0..n / 2).map(|i| (2 * i, 2 * i + 1)))?,
            Kind::RandomBounded { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(*seed, n as u64));
                random_bounded_graph(n, self.0.max_degree, &mut rng)
            }
            Kind::LowerBound { seed } => return self.lower_bound_member(n, *seed),
            Kind::MinusClass { .. } => return Ok(self.derivation(n)?.graph.clone()),
            Kind::Doubled { base } => {
                let mut g = Graph::empty(0);
                for c in doubled_components(n) {
                    g = g.disjoint_union(&*base.member(c.base_n)?);
                }
                g
            }
            Kind::Directory { path, members } => {
                return members.get(&n).cloned().ok_or_else(|| {
                    Error::NotFound(format!("{} has no F{n}.edges", path.display()))
                })
            }
        };
        Ok(Arc::new(g))
    }

    fn lower_bound_member(&self, n: usize, base_seed: u64) -> Result<Arc<Graph>> {
        let top = 1usize << (usize::BITS - 1 - n.leading_zeros());
        let g = if n == 1 {
            // G_1
            Graph::empty(1)
        } else if top == n {
            let half = n / 2;
            let prev = self.member(half)?;
            prev.disjoint_union(&lower_bound_base(half, self.0.max_degree, base_seed))
        } else {
            self.member(top)?.disjoint_union(&Graph::empty(n - top))
        };
        Ok(Arc::new(g))
    }

    /// Cut-out record for member `m` of a minus-class family.
    pub fn derivation(&self, m: usize) -> Result<Arc<Derivation>> {
        let Kind::MinusClass { base, chi } = &self.0.kind else {
            return Err(Error::Unsupported(format!("{} is not a minus-class family", self.0.name)));
        };
        if m == 0 {
            return Err(Error::Domain("families are indexed from n = 1".into()));
        }
        if let Some(d) = self.0.derivations.lock().unwrap().get(&m) {
            return Ok(d.clone());
        }
        let chi = *chi;
        let class_size = m.div_ceil(chi - 1);
        let source_n = m + class_size;
        let source = base.member(source_n)?;
        let classes = base.equitable_coloring_with(source_n, chi)?;
        let drop = classes
            .iter()
            .position(|c| c.len() == class_size)
            .ok_or_else(|| Error::NotFound(format!("no class of size {class_size} in {}", base.name())))?;
        let removed = classes[drop].clone();
        let mut kept: Vec<usize> = classes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .flat_map(|(_, c)| c.iter().copied())
            .collect();
        kept.sort_unstable();
        let mut relabel = vec![usize::MAX; source_n];
        for (i, &v) in kept.iter().enumerate() {
            relabel[v] = i;
        }
        let graph = Arc::new(source.induced(&kept));
        let new_classes = classes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, c)| {
                let mut c: Vec<usize> = c.iter().map(|&v| relabel[v]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let d = Arc::new(Derivation {
            graph,
            source,
            kept,
            removed,
            classes: new_classes,
        });
        self.0.derivations.lock().unwrap().insert(m, d.clone());
        Ok(d)
    }

    /// Layout of the original-family copies inside member `n` of a doubled family.
    pub fn decomposition(&self, n: usize) -> Option<Vec<Component>> {
        match &self.0.kind {
            Kind::Doubled { .. } if n > 0 => Some(doubled_components(n)),
            _ => None,
        }
    }

    /// The family this one was derived from, if any.
    pub fn base(&self) -> Option<&GraphFamily> {
        match &self.0.kind {
            Kind::MinusClass { base, .. } | Kind::Doubled { base } => Some(base),
            _ => None,
        }
    }

    /// Equitable proper coloring of `member(n)` with [`chi`](Self::chi) classes.
    pub fn equitable_coloring(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        self.equitable_coloring_with(n, self.0.chi)
    }

    /// Equitable proper coloring of `member(n)` with exactly `chi` classes,
    /// using the family's structure when `chi` is below `Δ + 1`.
    pub fn equitable_coloring_with(&self, n: usize, chi: usize) -> Result<Vec<Vec<usize>>> {
        let g = self.member(n)?;
        if chi == self.0.chi {
            match &self.0.kind {
                Kind::MinusClass { .. } => return Ok(self.derivation(n)?.classes.clone()),
                Kind::Doubled { base } => return doubled_coloring(base, n),
                _ => {}
            }
        }
        if chi > g.max_degree() {
            return Ok(equitable_color(&g, chi)?.classes);
        }
        match chi {
            1 if g.edge_count() == 0 => Ok(vec![(0..n).collect()]),
            2 => two_coloring_with_sizes(&g, n.div_ceil(2))
                .map(|[a, b]| vec![a, b])
                .ok_or_else(|| Error::NotFound(format!("{} member {n} has no equitable 2-coloring", self.0.name))),
            _ => Err(Error::Unsupported(format!(
                "no equitable {chi}-coloring available for {} member {n}",
                self.0.name
            ))),
        }
    }
}

/// Vertices `0..n` on a cycle, joined when their cyclic distance is at most `k`.
fn cycle_power_graph(n: usize, k: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let d = (v - u).min(n - (v - u));
            if d <= k {
                g.insert_edge(u, v);
            }
        }
    }
    g
}

/// Near-Δ-regular random graph: Δ rounds of random perfect pairings, each
/// pair kept when both ends still have spare degree.
pub fn random_bounded_graph<R: rand::Rng>(n: usize, max_degree: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..max_degree {
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if g.degree(u) < max_degree && g.degree(v) < max_degree {
                g.insert_edge(u, v);
            }
        }
    }
    g
}

/// Random bipartite graph on sides `0..⌊n/2⌋` and `⌊n/2⌋..n` with degrees at
/// most Δ, built from Δ rounds of random cross pairings.
pub fn random_bipartite_bounded<R: rand::Rng>(n: usize, max_degree: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    let half = n / 2;
    let mut left: Vec<usize> = (0..half).collect();
    let mut right: Vec<usize> = (half..n).collect();
    for _ in 0..max_degree {
        left.shuffle(rng);
        right.shuffle(rng);
        for (&u, &v) in left.iter().zip(&right) {
            if g.degree(u) < max_degree && g.degree(v) < max_degree {
                g.insert_edge(u, v);
            }
        }
    }
    g
}

/// Base graph `G_n` of the lower-bound family.
fn lower_bound_base(n: usize, max_degree: usize, base_seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(base_seed, n as u64));
    random_bipartite_bounded(n, max_degree, &mut rng)
}

/// `F_1 = G_1`, `F_{2^i} = F_{2^{i-1}} ⊔ G_{2^{i-1}}`,
/// `F_{2^i + j} = F_{2^i} ⊔ (j isolated vertices)`. Each member is a labeled
/// subgraph of every later member.
pub fn lower_bound_family(spec: LowerBoundFamilySpec) -> Result<GraphFamily> {
    if spec.max_degree == 0 {
        return Err(Error::Domain("lower-bound family needs Δ >= 1".into()));
    }
    Ok(GraphFamily::build(
        format!("lower_bound({},{})", spec.max_degree, spec.base_seed),
        spec.max_degree,
        true,
        spec.max_degree + 1,
        Kind::LowerBound { seed: spec.base_seed },
    ))
}

/// Member `m` is `fam.member(⌈χm/(χ-1)⌉)` with one class of size `⌈m/(χ-1)⌉`
/// of an equitable χ-coloring deleted; it keeps an equitable (χ-1)-coloring.
pub fn family_minus_class(fam: &GraphFamily, chi: usize) -> Result<GraphFamily> {
    if chi < 2 {
        return Err(Error::Domain(format!(
            "removing a class from a {chi}-colorable family is trivial: every member is an independent set"
        )));
    }
    Ok(GraphFamily::build(
        format!("minus({},{chi})", fam.name()),
        fam.max_degree(),
        fam.is_bipartite() || chi == 2,
        chi - 1,
        Kind::MinusClass { base: fam.clone(), chi },
    ))
}

/// Member `n` is two copies of `F_{n/2}` (even `n`) or two copies of
/// `F_{(n-1)/2}` plus `F_1` (odd `n`); member 1 is `K_1`.
pub fn doubled_family(fam: &GraphFamily) -> Result<GraphFamily> {
    if !fam.is_bipartite() {
        return Err(Error::Precondition(format!("doubling needs a bipartite family, {} is not", fam.name())));
    }
    Ok(GraphFamily::build(
        format!("doubled({})", fam.name()),
        fam.max_degree(),
        true,
        2,
        Kind::Doubled { base: fam.clone() },
    ))
}

fn doubled_components(n: usize) -> Vec<Component> {
    if n == 1 {
        return vec![Component { base_n: 1, offset: 0 }];
    }
    let half = n / 2;
    let mut out = vec![
        Component { base_n: half, offset: 0 },
        Component {
            base_n: half,
            offset: half,
        },
    ];
    if n % 2 == 1 {
        out.push(Component {
            base_n: 1,
            offset: 2 * half,
        });
    }
    out
}

/// Copy one keeps its bipartition, copy two is flipped, the spare `F_1` joins
/// class 0: the classes differ by at most one.
fn doubled_coloring(base: &GraphFamily, n: usize) -> Result<Vec<Vec<usize>>> {
    let mut classes = vec![Vec::new(), Vec::new()];
    for (i, c) in doubled_components(n).into_iter().enumerate() {
        let g = base.member(c.base_n)?;
        let side = g
            .bipartition()
            .ok_or_else(|| Error::InvalidGraph(format!("{} member {} is not bipartite", base.name(), c.base_n)))?;
        for (v, s) in side.into_iter().enumerate() {
            let flip = i == 1;
            classes[usize::from(s != flip)].push(c.offset + v);
        }
    }
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    Ok(classes)
}
