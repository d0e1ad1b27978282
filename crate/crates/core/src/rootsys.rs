//! Crystallographic root systems in exact rational coordinates.
//!
//! Every irreducible factor uses the standard (Bourbaki) realization: `A_n`
//! inside the sum-zero hyperplane of `ℚ^{n+1}`, `B_n`, `C_n`, `D_n` in `ℚ^n`,
//! `G_2` in the sum-zero hyperplane of `ℚ^3`, `E_6`, `E_7`, `E_8` in `ℚ^8` and
//! `F_4` in `ℚ^4`. Products are realized in the direct sum of the factors'
//! ambient spaces. The working space `V` is the span of the roots; the
//! ambient dot product is Weyl invariant in all of these realizations.
//!
//! Weyl group computations never materialize the group. Orbit questions go
//! through dominant representatives, orbit sizes through closure under the
//! simple reflections.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{dot, frac, q, QVec, Q};

pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn supported_ranks(self) -> std::ops::RangeInclusive<usize> {
        match self {
            Family::A => 1..=8,
            Family::B | Family::C => 2..=8,
            Family::D => 4..=8,
            Family::E => 6..=8,
            Family::F => 4..=4,
            Family::G => 2..=2,
        }
    }
}

/// One irreducible factor, e.g. `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanFactor {
    pub family: Family,
    pub rank: usize,
}

impl CartanFactor {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let f = CartanFactor { family, rank };
        if !family.supported_ranks().contains(&rank) {
            return Err(Error::Config(format!(
                "unsupported root system {f}; {}",
                SUPPORTED_TYPES_HELP
            )));
        }
        Ok(f)
    }

    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |m: u128| (1..=m).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for CartanFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

pub const SUPPORTED_TYPES_HELP: &str =
    "valid types are A1-A8, B2-B8, C2-C8, D4-D8, E6-E8, F4, G2, \
     and products joined by 'x' (e.g. A2xA1)";

/// A product of irreducible Cartan types, addressed by labels such as `"A2xA1"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanType(pub Vec<CartanFactor>);

impl CartanType {
    pub fn rank(&self) -> usize {
        self.0.iter().map(|f| f.rank).sum()
    }

    pub fn weyl_order(&self) -> u128 {
        self.0.iter().map(CartanFactor::weyl_order).product()
    }

    pub fn root_count(&self) -> usize {
        self.0.iter().map(CartanFactor::root_count).sum()
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Config(format!(
                "unknown root system label {s:?}; {SUPPORTED_TYPES_HELP}"
            ))
        };
        let mut factors = Vec::new();
        for part in s.trim().split(['x', 'X', '×']) {
            let part = part.trim();
            let mut chars = part.chars();
            let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
                Some('A') => Family::A,
                Some('B') => Family::B,
                Some('C') => Family::C,
                Some('D') => Family::D,
                Some('E') => Family::E,
                Some('F') => Family::F,
                Some('G') => Family::G,
                _ => return Err(bad()),
            };
            let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
            factors.push(CartanFactor::new(family, rank).map_err(|_| bad())?);
        }
        if factors.is_empty() {
            return Err(bad());
        }
        Ok(CartanType(factors))
    }
}

/// A W₀-orbit of roots. Named `long`/`short` for an irreducible system;
/// prefixed with the 1-based factor index (`2.long`) for products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthClass {
    pub id: String,
    pub factor: usize,
    pub norm: Q,
    pub short: bool,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan: CartanType,
    pub ambient_dim: usize,
    /// All roots: positive roots ordered by height, then their negatives in
    /// the same order.
    pub roots: Vec<QVec>,
    /// Indices of the simple roots, in Bourbaki order per factor.
    pub simple: Vec<usize>,
    pub positive: Vec<usize>,
    pub classes: Vec<LengthClass>,
    /// Length class of each root.
    pub class_of: Vec<usize>,
    /// Coordinates of each root in the basis of simple roots.
    pub simple_coords: Vec<Vec<Q>>,
    /// Basis of the orthogonal complement of `V = span(roots)` in the ambient space.
    pub complement: Vec<QVec>,
    neg_of: Vec<usize>,
    norms: Vec<Q>,
}

pub fn build_root_system(cartan: &CartanType) -> Result<RootSystem> {
    let mut ambient_dim = 0;
    let mut blocks: Vec<(usize, usize, Vec<QVec>, Vec<QVec>)> = Vec::new();
    for f in &cartan.0 {
        CartanFactor::new(f.family, f.rank)?;
        let (dim, roots, simple) = factor_realization(*f);
        blocks.push((ambient_dim, dim, roots, simple));
        ambient_dim += dim;
    }

    let embed = |offset: usize, v: &QVec| {
        let mut w = vec![Q::zero(); ambient_dim];
        w[offset..offset + v.len()].clone_from_slice(v);
        w
    };

    let multi = cartan.0.len() > 1;
    let mut classes: Vec<LengthClass> = Vec::new();
    let mut all: Vec<(QVec, usize, usize)> = Vec::new(); // (root, factor, class)
    let mut simple_vecs: Vec<QVec> = Vec::new();
    for (fi, (offset, _, roots, simple)) in blocks.iter().enumerate() {
        let mut norms: Vec<Q> = roots.iter().map(|r| dot(r, r)).collect();
        norms.sort();
        norms.dedup();
        let first_class = classes.len();
        let n_norms = norms.len();
        for (ci, n) in norms.iter().rev().enumerate() {
            let short = n_norms > 1 && ci == 1;
            let base = if short { "short" } else { "long" };
            let id = if multi {
                format!("{}.{}", fi + 1, base)
            } else {
                base.to_string()
            };
            classes.push(LengthClass {
                id,
                factor: fi,
                norm: n.clone(),
                short,
            });
        }
        for r in roots {
            let n = dot(r, r);
            let ci = first_class
                + classes[first_class..]
                    .iter()
                    .position(|c| c.norm == n)
                    .unwrap();
            all.push((embed(*offset, r), fi, ci));
        }
        simple_vecs.extend(simple.iter().map(|s| embed(*offset, s)));
    }

    // Coordinates in the simple-root basis via the Gram system.
    let gram: Vec<QVec> = simple_vecs
        .iter()
        .map(|a| simple_vecs.iter().map(|b| dot(a, b)).collect())
        .collect();
    let coords_of = |v: &QVec| -> Vec<Q> {
        let rhs: Vec<Q> = simple_vecs.iter().map(|s| dot(s, v)).collect();
        linalg::solve_square(&gram, &rhs).expect("simple roots are independent")
    };

    let mut pos: Vec<(QVec, usize, Vec<Q>)> = Vec::new();
    for (r, _, ci) in &all {
        let c = coords_of(r);
        let nonneg = c.iter().all(|x| !x.is_negative());
        let nonpos = c.iter().all(|x| !x.is_positive());
        assert!(
            nonneg || nonpos,
            "root {r:?} is neither positive nor negative"
        );
        if nonneg {
            pos.push((r.clone(), *ci, c));
        }
    }
    pos.sort_by(|a, b| {
        let ha: Q = a.2.iter().sum();
        let hb: Q = b.2.iter().sum();
        ha.cmp(&hb).then_with(|| b.2.cmp(&a.2))
    });
    let np = pos.len();
    let mut roots = Vec::with_capacity(2 * np);
    let mut class_of = Vec::with_capacity(2 * np);
    let mut simple_coords = Vec::with_capacity(2 * np);
    for (r, ci, c) in &pos {
        roots.push(r.clone());
        class_of.push(*ci);
        simple_coords.push(c.clone());
    }
    for (r, ci, c) in &pos {
        roots.push(r.iter().map(|x| -x).collect());
        class_of.push(*ci);
        simple_coords.push(c.iter().map(|x| -x).collect());
    }
    let simple: Vec<usize> = simple_vecs
        .iter()
        .map(|s| roots.iter().position(|r| r == s).unwrap())
        .collect();
    let neg_of = (0..2 * np).map(|i| (i + np) % (2 * np)).collect();
    let norms = roots.iter().map(|r| dot(r, r)).collect();
    let complement = linalg::nullspace(&simple_vecs, ambient_dim);

    let rs = RootSystem {
        cartan: cartan.clone(),
        ambient_dim,
        positive: (0..np).collect(),
        roots,
        simple,
        classes,
        class_of,
        simple_coords,
        complement,
        neg_of,
        norms,
    };
    debug_assert_eq!(rs.roots.len(), cartan.root_count());
    Ok(rs)
}

impl RootSystem {
    pub fn from_label(label: &str) -> Result<Self> {
        build_root_system(&label.parse()?)
    }

    pub fn label(&self) -> String {
        self.cartan.label()
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// `dim V`, the dimension of the span of the roots.
    pub fn dim(&self) -> usize {
        self.rank()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> &QVec {
        &self.roots[i]
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg_of[i]
    }

    pub fn norm2(&self, i: usize) -> &Q {
        &self.norms[i]
    }

    pub fn simple_root(&self, i: usize) -> &QVec {
        &self.roots[self.simple[i]]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.positive.len()
    }

    pub fn class_index(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.id == id)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.classes.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn weyl_order(&self) -> u128 {
        self.cartan.weyl_order()
    }

    /// Reflection in the hyperplane orthogonal to root `i`.
    pub fn reflect(&self, i: usize, v: &[Q]) -> QVec {
        let a = &self.roots[i];
        let c = dot(a, v) * q(2) / &self.norms[i];
        if c.is_zero() {
            return v.to_vec();
        }
        v.iter().zip(a).map(|(x, y)| x - &c * y).collect()
    }

    pub fn reflect_simple(&self, s: usize, v: &[Q]) -> QVec {
        self.reflect(self.simple[s], v)
    }

    /// Applies a word of simple reflections, first letter first.
    pub fn apply_word(&self, word: &[usize], v: &[Q]) -> QVec {
        word.iter()
            .fold(v.to_vec(), |acc, &s| self.reflect_simple(s, &acc))
    }

    pub fn is_dominant(&self, v: &[Q]) -> bool {
        self.simple
            .iter()
            .all(|&s| !dot(&self.roots[s], v).is_negative())
    }

    /// The unique dominant point of `W₀v`, with a word of simple reflections
    /// (first letter applied first) carrying `v` to it.
    ///
    /// Each step reflects in a simple root pairing negatively with the
    /// current point, which strictly increases the pairing with ρ.
    pub fn dominant_representative(&self, v: &[Q]) -> (QVec, Vec<usize>) {
        let mut cur = v.to_vec();
        let mut word = Vec::new();
        loop {
            let neg = (0..self.rank()).find(|&s| dot(self.simple_root(s), &cur).is_negative());
            match neg {
                Some(s) => {
                    cur = self.reflect_simple(s, &cur);
                    word.push(s);
                }
                None => return (cur, word),
            }
        }
    }

    pub fn same_orbit(&self, v: &[Q], w: &[Q]) -> bool {
        self.dominant_representative(v).0 == self.dominant_representative(w).0
    }

    /// The orbit `W₀v`, by closure under simple reflections.
    pub fn orbit(&self, v: &[Q], cap: usize) -> Result<Vec<QVec>> {
        let mut seen: HashSet<QVec> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(v.to_vec());
        queue.push_back(v.to_vec());
        while let Some(x) = queue.pop_front() {
            for s in 0..self.rank() {
                let y = self.reflect_simple(s, &x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::OrbitCap { limit: cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    pub fn orbit_size(&self, v: &[Q]) -> Result<usize> {
        self.orbit_size_capped(v, DEFAULT_ORBIT_CAP)
    }

    pub fn orbit_size_capped(&self, v: &[Q], cap: usize) -> Result<usize> {
        self.orbit(v, cap).map(|o| o.len())
    }

    /// `R_L`: roots vanishing on every vector of `direction`, i.e. roots
    /// constant along any coset of that linear subspace.
    pub fn parabolic_subsystem(&self, direction: &[QVec]) -> Subsystem {
        let roots = (0..self.len())
            .filter(|&i| direction.iter().all(|d| dot(&self.roots[i], d).is_zero()))
            .collect();
        let dir_rank = if direction.is_empty() {
            0
        } else {
            linalg::rank(direction, self.ambient_dim)
        };
        Subsystem {
            roots,
            space_dim: self.dim() - dir_rank,
        }
    }

    /// A vector `h ∈ V` with `αᵢ(h) = 1` for every simple root.
    pub fn rho_check(&self) -> QVec {
        // h = Σ cⱼ αⱼ with Gram · c = 1.
        let gram: Vec<QVec> = (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| dot(self.simple_root(i), self.simple_root(j)))
                    .collect()
            })
            .collect();
        let c = linalg::solve_square(&gram, &vec![Q::one(); self.rank()]).unwrap();
        let mut h = vec![Q::zero(); self.ambient_dim];
        for (j, cj) in c.iter().enumerate() {
            for (x, y) in h.iter_mut().zip(self.simple_root(j)) {
                *x += cj * y;
            }
        }
        h
    }

    /// The `m`-th irreducible factor's root indices.
    pub fn factor_roots(&self, m: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.classes[self.class_of[i]].factor == m)
            .collect()
    }

    /// Root indices grouped by length class.
    pub fn roots_by_class(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in self.class_of.iter().enumerate() {
            m.entry(c).or_default().push(i);
        }
        m
    }

    pub fn in_span(&self, v: &[Q]) -> bool {
        self.complement.iter().all(|c| dot(c, v).is_zero())
    }
}

/// A parabolic subsystem `R_L ⊂ R₀`, held as indices into the parent system
/// so that length classes and parameters are inherited. `space_dim` is
/// `dim V_L`, the dimension of the space it acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub roots: Vec<usize>,
    pub space_dim: usize,
}

impl Subsystem {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rank(&self, rs: &RootSystem) -> usize {
        let vs: Vec<QVec> = self.roots.iter().map(|&i| rs.roots[i].clone()).collect();
        if vs.is_empty() {
            0
        } else {
            linalg::rank(&vs, rs.ambient_dim)
        }
    }

    /// Cartan type label such as `"A1xA1"`; empty string for the empty system.
    pub fn cartan_label(&self, rs: &RootSystem) -> String {
        let vs: Vec<QVec> = self.roots.iter().map(|&i| rs.roots[i].clone()).collect();
        identify_type(&vs, rs.ambient_dim)
    }
}

/// Identifies the Cartan type of a (closed) root subsystem from its
/// irreducible components' rank, size and root lengths.
pub fn identify_type(roots: &[QVec], ambient_dim: usize) -> String {
    let n = roots.len();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if comp[j] == usize::MAX && !dot(&roots[i], &roots[j]).is_zero() {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        comps.push(members);
    }
    let mut names: Vec<CartanFactor> = comps
        .iter()
        .map(|members| {
            let vs: Vec<QVec> = members.iter().map(|&i| roots[i].clone()).collect();
            let r = linalg::rank(&vs, ambient_dim);
            let norms: Vec<Q> = vs.iter().map(|v| dot(v, v)).collect();
            let max = norms.iter().max().unwrap().clone();
            let short = norms.iter().filter(|x| **x != max).count();
            let count = vs.len();
            let family = if short == 0 {
                if r == 1 || count == r * (r + 1) {
                    Family::A
                } else if count == 2 * r * (r - 1) {
                    Family::D
                } else {
                    Family::E
                }
            } else if r == 2 && count == 12 {
                Family::G
            } else if r == 4 && count == 48 {
                Family::F
            } else if short == 2 * r {
                Family::B
            } else {
                Family::C
            };
            CartanFactor { family, rank: r }
        })
        .collect();
    names.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.family.cmp(&b.family)));
    names
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

fn unit(n: usize, i: usize) -> QVec {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn comb(n: usize, terms: &[(usize, i64)]) -> QVec {
    let mut v = vec![Q::zero(); n];
    for &(i, c) in terms {
        v[i] += q(c);
    }
    v
}

/// (ambient dimension, all roots, simple roots) of one irreducible factor.
fn factor_realization(f: CartanFactor) -> (usize, Vec<QVec>, Vec<QVec>) {
    let n = f.rank;
    match f.family {
        Family::A => {
            let d = n + 1;
            let mut roots = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        roots.push(comb(d, &[(i, 1), (j, -1)]));
                    }
                }
            }
            let simple = (0..n).map(|i| comb(d, &[(i, 1), (i + 1, -1)])).collect();
            (d, roots, simple)
        }
        Family::B | Family::C | Family::D => {
            let mut roots = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        roots.push(comb(n, &[(i, si), (j, sj)]));
                    }
                }
                let m = match f.family {
                    Family::B => 1,
                    Family::C => 2,
                    _ => 0,
                };
                if m > 0 {
                    roots.push(comb(n, &[(i, m)]));
                    roots.push(comb(n, &[(i, -m)]));
                }
            }
            let mut simple: Vec<QVec> = (0..n - 1)
                .map(|i| comb(n, &[(i, 1), (i + 1, -1)]))
                .collect();
            simple.push(match f.family {
                Family::B => unit(n, n - 1),
                Family::C => comb(n, &[(n - 1, 2)]),
                _ => comb(n, &[(n - 2, 1), (n - 1, 1)]),
            });
            (n, roots, simple)
        }
        Family::G => {
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(comb(3, &[(i, 1), (j, -1)]));
                    }
                }
                let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
                roots.push(comb(3, &[(i, 2), (others[0], -1), (others[1], -1)]));
                roots.push(comb(3, &[(i, -2), (others[0], 1), (others[1], 1)]));
            }
            let simple = vec![
                comb(3, &[(0, 1), (1, -1)]),
                comb(3, &[(0, -2), (1, 1), (2, 1)]),
            ];
            (3, roots, simple)
        }
        Family::F => {
            let mut roots = Vec::new();
            for i in 0..4 {
                roots.push(comb(4, &[(i, 1)]));
                roots.push(comb(4, &[(i, -1)]));
                for j in (i + 1)..4 {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        roots.push(comb(4, &[(i, si), (j, sj)]));
                    }
                }
            }
            for signs in 0..16u32 {
                roots.push(
                    (0..4)
                        .map(|i| {
                            if signs >> i & 1 == 1 {
                                frac(-1, 2)
                            } else {
                                frac(1, 2)
                            }
                        })
                        .collect(),
                );
            }
            let h = frac(1, 2);
            let simple = vec![
                comb(4, &[(1, 1), (2, -1)]),
                comb(4, &[(2, 1), (3, -1)]),
                unit(4, 3),
                vec![h.clone(), -h.clone(), -h.clone(), -h],
            ];
            (4, roots, simple)
        }
        Family::E => {
            let mut e8 = Vec::new();
            for i in 0..8 {
                for j in (i + 1)..8 {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        e8.push(comb(8, &[(i, si), (j, sj)]));
                    }
                }
            }
            for signs in 0..256u32 {
                if signs.count_ones() % 2 == 0 {
                    e8.push(
                        (0..8)
                            .map(|i| {
                                if signs >> i & 1 == 1 {
                                    frac(-1, 2)
                                } else {
                                    frac(1, 2)
                                }
                            })
                            .collect(),
                    );
                }
            }
            let h = frac(1, 2);
            let mut a1 = vec![-h.clone(); 8];
            a1[0] = h.clone();
            a1[7] = h;
            let mut simple = vec![a1, comb(8, &[(0, 1), (1, 1)])];
            for i in 0..6 {
                simple.push(comb(8, &[(i + 1, 1), (i, -1)]));
            }
            // E7 ⟂ e7+e8; E6 additionally ⟂ e6+e8.
            let mut cuts = Vec::new();
            if n <= 7 {
                cuts.push(comb(8, &[(6, 1), (7, 1)]));
            }
            if n <= 6 {
                cuts.push(comb(8, &[(5, 1), (7, 1)]));
            }
            let roots = e8
                .into_iter()
                .filter(|r| cuts.iter().all(|c| dot(r, c).is_zero()))
                .collect();
            simple.truncate(n);
            (8, roots, simple)
        }
    }
}

/// Parameter function `k`: one rational value per length class, hence
/// W₀-invariant by construction. Any value, including 0 and negatives, is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterFunction {
    pub values: Vec<Q>,
}

impl ParameterFunction {
    pub fn equal(rs: &RootSystem, k: Q) -> Self {
        ParameterFunction {
            values: vec![k; rs.classes.len()],
        }
    }

    /// Builds `k` from `class id → value` pairs. The key `all` sets every
    /// class; in products a bare `long`/`short` sets that class in every
    /// factor. Later, more specific keys override earlier broad ones.
    pub fn from_pairs(rs: &RootSystem, pairs: &[(String, Q)]) -> Result<Self> {
        let mut values: Vec<Option<Q>> = vec![None; rs.classes.len()];
        let mut broad: Vec<&(String, Q)> = Vec::new();
        let mut exact: Vec<(usize, &Q)> = Vec::new();
        for p in pairs {
            if let Some(ci) = rs.class_index(&p.0) {
                exact.push((ci, &p.1));
            } else if p.0 == "all"
                || ((p.0 == "long" || p.0 == "short")
                    && rs
                        .classes
                        .iter()
                        .any(|c| c.id.ends_with(&format!(".{}", p.0))))
            {
                broad.push(p);
            } else {
                return Err(Error::Config(format!(
                    "unknown parameter class {:?} for {}; classes are {}",
                    p.0,
                    rs.label(),
                    class_list(rs)
                )));
            }
        }
        for (key, val) in broad {
            for (ci, c) in rs.classes.iter().enumerate() {
                if key == "all" || c.id.ends_with(&format!(".{key}")) {
                    values[ci] = Some(val.clone());
                }
            }
        }
        for (ci, val) in exact {
            values[ci] = Some(val.clone());
        }
        let missing: Vec<&str> = values
            .iter()
            .zip(&rs.classes)
            .filter(|(v, _)| v.is_none())
            .map(|(_, c)| c.id.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Config(format!(
                "missing parameter for class(es) {} of {}; classes are {}",
                missing.join(", "),
                rs.label(),
                class_list(rs)
            )));
        }
        Ok(ParameterFunction {
            values: values.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Parses `"long=1,short=1/2"` (or `"all=1"`).
    pub fn parse(rs: &RootSystem, params: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item.split_once('=').ok_or_else(|| {
                Error::Config(format!("parameter {item:?} is not of the form class=value"))
            })?;
            pairs.push((
                key.trim().to_string(),
                crate::rational::parse_fraction(val)?,
            ));
        }
        Self::from_pairs(rs, &pairs)
    }

    /// `long = 1` and every short class equal to `ratio`. For systems with
    /// no short roots but several classes, every class after the first gets
    /// `ratio`; with a single class `ratio` is ignored.
    pub fn from_ratio(rs: &RootSystem, ratio: &Q) -> Self {
        let any_short = rs.classes.iter().any(|c| c.short);
        let values = rs
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (any_short && c.short) || (!any_short && i > 0) {
                    ratio.clone()
                } else {
                    Q::one()
                }
            })
            .collect();
        ParameterFunction { values }
    }

    pub fn of_root(&self, rs: &RootSystem, i: usize) -> &Q {
        &self.values[rs.class_of[i]]
    }

    pub fn is_equal(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn scaled(&self, c: &Q) -> Self {
        ParameterFunction {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn as_map(&self, rs: &RootSystem) -> BTreeMap<String, Q> {
        rs.classes
            .iter()
            .zip(&self.values)
            .map(|(c, v)| (c.id.clone(), v.clone()))
            .collect()
    }
}

fn class_list(rs: &RootSystem) -> String {
    rs.classes
        .iter()
        .map(|c| c.id.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, qvec};

    fn rs(label: &str) -> RootSystem {
        RootSystem::from_label(label).unwrap()
    }

    #[test]
    fn small_systems_have_expected_shape() {
        let a1 = rs("A1");
        assert_eq!((a1.len(), a1.rank(), a1.classes.len()), (2, 1, 1));

        let b2 = rs("B2");
        assert_eq!(b2.len(), 8);
        assert_eq!(b2.classes.len(), 2);
        for r in [
            [1, 0],
            [0, 1],
            [1, 1],
            [1, -1],
            [-1, 0],
            [0, -1],
            [-1, -1],
            [-1, 1],
        ] {
            assert!(b2.roots.contains(&qvec(&r)), "{r:?}");
        }

        let g2 = rs("G2");
        assert_eq!(g2.len(), 12);
        assert_eq!(g2.class_sizes(), vec![6, 6]);
    }

    #[test]
    fn all_supported_types_match_standard_counts() {
        for label in [
            "A1", "A2", "A3", "A4", "A8", "B2", "B3", "B8", "C2", "C3", "C8", "D4", "D5", "D8",
            "E6", "E7", "E8", "F4", "G2", "A2xA1", "A1xA1",
        ] {
            let r = rs(label);
            assert_eq!(r.len(), r.cartan.root_count(), "{label}");
            let simply_laced = r.cartan.0.iter().all(CartanFactor::is_simply_laced);
            let factors = r.cartan.0.len();
            if simply_laced {
                assert_eq!(r.classes.len(), factors, "{label}");
            }
            for i in 0..r.len() {
                assert_eq!(
                    r.roots[r.neg(i)],
                    r.roots[i].iter().map(|x| -x).collect::<QVec>()
                );
            }
            // positive roots are nonnegative integer combinations of simple roots
            for &i in &r.positive {
                assert!(r.simple_coords[i]
                    .iter()
                    .all(|c| !c.is_negative() && c.is_integer()));
            }
            assert_eq!(r.positive.len() * 2, r.len());
        }
        assert_eq!(rs("F4").classes.len(), 2);
        assert_eq!(rs("B5").classes.len(), 2);
        assert_eq!(rs("E6").len(), 72);
    }

    #[test]
    fn rejects_unsupported_labels() {
        for bad in ["Q9", "A0", "A9", "B1", "D3", "E5", "F3", "G3", "", "A2x"] {
            let e = RootSystem::from_label(bad).unwrap_err();
            assert!(e.to_string().contains("valid types"), "{bad}: {e}");
        }
    }

    #[test]
    fn dominant_representative_examples() {
        let a1 = rs("A1");
        let v = vec![frac(-3, 2), frac(3, 2)];
        let (d, w) = a1.dominant_representative(&v);
        assert_eq!(d, vec![frac(3, 2), frac(-3, 2)]);
        assert_eq!(w.len(), 1);

        let b2 = rs("B2");
        let (d, w) = b2.dominant_representative(&qvec(&[-1, 2]));
        assert_eq!(d, qvec(&[2, 1]));
        assert_eq!(b2.apply_word(&w, &qvec(&[-1, 2])), d);

        let (d, w) = b2.dominant_representative(&qvec(&[3, 1]));
        assert_eq!(d, qvec(&[3, 1]));
        assert!(w.is_empty());
    }

    #[test]
    fn b2_dominant_representative_agrees_with_brute_force_orbit() {
        // All 8 signed permutations of (-1, 2); exactly one is dominant.
        let b2 = rs("B2");
        let mut images = Vec::new();
        for (x, y) in [(-1, 2), (2, -1)] {
            for sx in [1, -1] {
                for sy in [1, -1] {
                    images.push(qvec(&[sx * x, sy * y]));
                }
            }
        }
        let dominant: Vec<_> = images.iter().filter(|v| b2.is_dominant(v)).collect();
        assert_eq!(dominant, vec![&qvec(&[2, 1])]);
    }

    #[test]
    fn same_orbit_examples() {
        let a1 = rs("A1");
        let v = vec![frac(1, 2), frac(-1, 2)];
        assert!(a1.same_orbit(&v, &[frac(-1, 2), frac(1, 2)]));

        let a2 = rs("A2");
        assert!(a2.same_orbit(&qvec(&[1, 0, -1]), &qvec(&[-1, 0, 1])));
        assert!(!a2.same_orbit(&qvec(&[1, 0, -1]), &qvec(&[2, 0, -2])));

        let b2 = rs("B2");
        assert!(b2.same_orbit(&qvec(&[2, 1]), &qvec(&[2, -1])));
        let orbit = b2.orbit(&qvec(&[2, 1]), 100).unwrap();
        assert!(orbit.contains(&qvec(&[2, -1])));
    }

    #[test]
    fn parabolic_subsystem_examples() {
        let b2 = rs("B2");
        let all = b2.parabolic_subsystem(&[qvec(&[1, 0]), qvec(&[0, 1])]);
        assert!(all.is_empty());
        assert_eq!(all.space_dim, 0);
        let whole = b2.parabolic_subsystem(&[]);
        assert_eq!(whole.len(), 8);
        assert_eq!(whole.space_dim, 2);
        let line = b2.parabolic_subsystem(&[qvec(&[1, 1])]);
        let roots: Vec<QVec> = line.roots.iter().map(|&i| b2.roots[i].clone()).collect();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&qvec(&[1, -1])) && roots.contains(&qvec(&[-1, 1])));
        assert!(line
            .roots
            .iter()
            .all(|&i| !b2.classes[b2.class_of[i]].short));
        assert_eq!(line.cartan_label(&b2), "A1");
        assert_eq!(line.space_dim, 1);
    }

    #[test]
    fn orbit_size_examples() {
        let a2 = rs("A2");
        assert_eq!(a2.orbit_size(&qvec(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(a2.orbit_size(&qvec(&[2, 1, -3])).unwrap(), 6);
        let b2 = rs("B2");
        assert_eq!(b2.orbit_size(&qvec(&[1, 0])).unwrap(), 4);
        assert!(matches!(
            b2.orbit_size_capped(&qvec(&[2, 1]), 3),
            Err(Error::OrbitCap { limit: 3 })
        ));
    }

    #[test]
    fn type_identification() {
        for label in ["A1", "A3", "B3", "C3", "D4", "G2", "F4", "E6", "B2"] {
            let r = rs(label);
            assert_eq!(identify_type(&r.roots, r.ambient_dim), label);
        }
        let r = rs("A2xA1");
        assert_eq!(identify_type(&r.roots, r.ambient_dim), "A2xA1");
    }

    #[test]
    fn parameter_parsing() {
        let b2 = rs("B2");
        let k = ParameterFunction::parse(&b2, "long=1,short=2").unwrap();
        assert_eq!(k.values, vec![q(1), q(2)]);
        let k = ParameterFunction::parse(&b2, "all=1/2").unwrap();
        assert!(k.is_equal());
        assert!(ParameterFunction::parse(&b2, "long=1").is_err());
        assert!(ParameterFunction::parse(&b2, "long=1,short=0.5").is_err());
        assert!(ParameterFunction::parse(&b2, "long=1,medium=3").is_err());
        let a1a1 = rs("A1xA1");
        let k = ParameterFunction::parse(&a1a1, "long=1,2.long=3").unwrap();
        assert_eq!(k.values, vec![q(1), q(3)]);
    }

    #[test]
    fn rho_check_pairs_to_one_on_simple_roots() {
        for label in ["A3", "B3", "G2", "F4", "E6"] {
            let r = rs(label);
            let h = r.rho_check();
            for s in 0..r.rank() {
                assert_eq!(dot(r.simple_root(s), &h), q(1));
            }
            assert!(r.in_span(&h));
        }
    }
}
