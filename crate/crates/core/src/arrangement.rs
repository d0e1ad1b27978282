//! Affine flats of the shifted root arrangement `{α(v) = k_α}` and the
//! order functions `o(v)` and `o_L`.
//!
//! A flat lives in the ambient space of its root system and always carries
//! the equations cutting out `V = span(R₀)`, so every flat is a subset of
//! `V`. Its canonical form is the reduced row echelon form of the augmented
//! system `[normals | offsets]`, which is unique for the solution set; flats
//! compare and hash by it.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_traits::Zero;

use crate::linalg;
use crate::rational::{dot, QVec, Q};
use crate::rootsys::{ParameterFunction, RootSystem, Subsystem};

#[derive(Clone, Debug)]
pub struct AffineFlat {
    ambient_dim: usize,
    /// Reduced row echelon rows `[normal…, offset]`.
    equations: Vec<QVec>,
    direction: Vec<QVec>,
    offset_point: QVec,
    center: OnceLock<QVec>,
}

impl PartialEq for AffineFlat {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.equations == other.equations
    }
}

impl Eq for AffineFlat {}

impl Hash for AffineFlat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.equations.hash(state);
    }
}

impl PartialOrd for AffineFlat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineFlat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient_dim
            .cmp(&other.ambient_dim)
            .then_with(|| self.equations.len().cmp(&other.equations.len()))
            .then_with(|| self.equations.cmp(&other.equations))
    }
}

/// Result of cutting a flat with one more hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Flat(AffineFlat),
    /// The hyperplane contains the flat.
    Contains,
    /// The hyperplane is parallel to the flat and misses it.
    Disjoint,
}

impl AffineFlat {
    /// Canonical flat cut out by `normal · x = offset` equations in
    /// `ℚ^ambient_dim`. Returns `None` for an inconsistent (empty) system.
    pub fn from_equations(ambient_dim: usize, equations: &[(QVec, Q)]) -> Option<Self> {
        let rows: Vec<QVec> = equations
            .iter()
            .map(|(n, c)| {
                debug_assert_eq!(n.len(), ambient_dim);
                let mut r = n.clone();
                r.push(c.clone());
                r
            })
            .collect();
        Self::from_rows(ambient_dim, rows)
    }

    fn from_rows(ambient_dim: usize, mut rows: Vec<QVec>) -> Option<Self> {
        let pivots = linalg::rref(&mut rows, ambient_dim);
        if rows.len() > pivots.len() {
            return None;
        }
        let direction = linalg::nullspace_from_rref(&rows, &pivots, ambient_dim);
        let mut offset_point = vec![Q::zero(); ambient_dim];
        for (row, &p) in rows.iter().zip(&pivots) {
            offset_point[p] = row[ambient_dim].clone();
        }
        Some(AffineFlat {
            ambient_dim,
            equations: rows,
            direction,
            offset_point,
            center: OnceLock::new(),
        })
    }

    /// The flat `point + span(direction)`.
    pub fn from_point_direction(point: &[Q], direction: &[QVec]) -> Self {
        let n = point.len();
        let normals = if direction.is_empty() {
            (0..n)
                .map(|i| {
                    let mut e = vec![Q::zero(); n];
                    e[i] = num_traits::One::one();
                    e
                })
                .collect()
        } else {
            linalg::nullspace(direction, n)
        };
        let eqs: Vec<(QVec, Q)> = normals
            .into_iter()
            .map(|nv| {
                let c = dot(&nv, point);
                (nv, c)
            })
            .collect();
        Self::from_equations(n, &eqs).expect("a point-direction flat is nonempty")
    }

    /// The whole working space `V = span(R₀)`.
    pub fn whole_space(rs: &RootSystem) -> Self {
        let eqs: Vec<(QVec, Q)> = rs
            .complement
            .iter()
            .map(|c| (c.clone(), Q::zero()))
            .collect();
        Self::from_equations(rs.ambient_dim, &eqs).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Codimension inside `V`.
    pub fn codim(&self, rs: &RootSystem) -> usize {
        rs.dim() - self.dim()
    }

    pub fn equations(&self) -> &[QVec] {
        &self.equations
    }

    pub fn direction(&self) -> &[QVec] {
        &self.direction
    }

    pub fn offset_point(&self) -> &QVec {
        &self.offset_point
    }

    /// `v_L`, the point of `L` orthogonal to the direction space.
    pub fn center(&self) -> &QVec {
        self.center.get_or_init(|| {
            let n = self.ambient_dim;
            let normals: Vec<QVec> = self.equations.iter().map(|r| r[..n].to_vec()).collect();
            let offsets: Vec<Q> = self.equations.iter().map(|r| r[n].clone()).collect();
            linalg::min_norm_solution(&normals, &offsets, n)
        })
    }

    pub fn contains_point(&self, v: &[Q]) -> bool {
        let n = self.ambient_dim;
        self.equations.iter().all(|r| dot(&r[..n], v) == r[n])
    }

    /// `a · x` is constant on the flat.
    pub fn is_constant(&self, a: &[Q]) -> bool {
        self.direction.iter().all(|d| dot(a, d).is_zero())
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &AffineFlat) -> bool {
        other.contains_point(&self.offset_point)
            && self.direction.iter().all(|d| {
                let n = other.ambient_dim;
                other.equations.iter().all(|r| dot(&r[..n], d).is_zero())
            })
    }

    /// Cuts the flat with `{x : a · x = c}`.
    pub fn intersect(&self, a: &[Q], c: &Q) -> Intersection {
        if self.is_constant(a) {
            return if dot(a, &self.offset_point) == *c {
                Intersection::Contains
            } else {
                Intersection::Disjoint
            };
        }
        let mut rows = self.equations.clone();
        let mut r = a.to_vec();
        r.push(c.clone());
        rows.push(r);
        Intersection::Flat(Self::from_rows(self.ambient_dim, rows).expect("cut is consistent"))
    }

    /// Image under an orthogonal map given as a function on vectors that is
    /// its own inverse (a reflection).
    pub fn map_involution(&self, f: impl Fn(&[Q]) -> QVec) -> Self {
        let n = self.ambient_dim;
        let rows: Vec<QVec> = self
            .equations
            .iter()
            .map(|r| {
                let mut m = f(&r[..n]);
                m.push(r[n].clone());
                m
            })
            .collect();
        Self::from_rows(n, rows).unwrap()
    }

    pub fn reflect(&self, rs: &RootSystem, root: usize) -> Self {
        self.map_involution(|v| rs.reflect(root, v))
    }

    pub fn reflect_simple(&self, rs: &RootSystem, s: usize) -> Self {
        self.reflect(rs, rs.simple[s])
    }

    pub fn apply_word(&self, rs: &RootSystem, word: &[usize]) -> Self {
        word.iter()
            .fold(self.clone(), |acc, &s| acc.reflect_simple(rs, s))
    }

    /// The image under `v ↦ c·v`.
    pub fn scaled(&self, c: &Q) -> Self {
        let n = self.ambient_dim;
        let rows: Vec<QVec> = self
            .equations
            .iter()
            .map(|r| {
                let mut m = r.clone();
                m[n] = &r[n] * c;
                m
            })
            .collect();
        Self::from_rows(n, rows).unwrap()
    }

    pub fn parabolic(&self, rs: &RootSystem) -> Subsystem {
        rs.parabolic_subsystem(&self.direction)
    }
}

/// Counts behind `o_L`: roots constantly equal to `k_α` on `L` (`hits`),
/// roots vanishing on `L` (`zeros`), `i_L = hits − zeros` and
/// `o_L = i_L − codim L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexReport {
    pub hits: usize,
    pub zeros: usize,
    pub codim: usize,
    pub i: i64,
    pub o: i64,
}

impl IndexReport {
    fn new(hits: usize, zeros: usize, codim: usize) -> Self {
        let i = hits as i64 - zeros as i64;
        IndexReport {
            hits,
            zeros,
            codim,
            i,
            o: i - codim as i64,
        }
    }
}

/// `o(v) = |{α : α(v) = k_α}| − |{α : α(v) = 0}| − dim V` for the full system.
pub fn order_point(rs: &RootSystem, k: &ParameterFunction, v: &[Q]) -> i64 {
    order_point_report(rs, k, v).o
}

pub fn order_point_report(rs: &RootSystem, k: &ParameterFunction, v: &[Q]) -> IndexReport {
    order_in(rs, k, 0..rs.len(), rs.dim(), v)
}

/// `o(R', V', k|R'; v)` for a set of roots `R'` acting on a space of
/// dimension `space_dim`.
pub fn order_in(
    rs: &RootSystem,
    k: &ParameterFunction,
    roots: impl IntoIterator<Item = usize>,
    space_dim: usize,
    v: &[Q],
) -> IndexReport {
    let (mut hits, mut zeros) = (0, 0);
    for i in roots {
        let val = dot(rs.root(i), v);
        if &val == k.of_root(rs, i) {
            hits += 1;
        }
        if val.is_zero() {
            zeros += 1;
        }
    }
    IndexReport::new(hits, zeros, space_dim)
}

/// `o_L` from the flat directly: a root counts when it is constant on `L`
/// with the relevant value.
pub fn order_flat(rs: &RootSystem, k: &ParameterFunction, flat: &AffineFlat) -> IndexReport {
    let (mut hits, mut zeros) = (0, 0);
    for i in 0..rs.len() {
        let a = rs.root(i);
        if !flat.is_constant(a) {
            continue;
        }
        let val = dot(a, flat.offset_point());
        if &val == k.of_root(rs, i) {
            hits += 1;
        }
        if val.is_zero() {
            zeros += 1;
        }
    }
    IndexReport::new(hits, zeros, flat.codim(rs))
}

/// `o(R_L, V_L, k|_{R_L}; v_L)`: the same quantity computed through the
/// parabolic subsystem and the center.
pub fn order_flat_reduced(
    rs: &RootSystem,
    k: &ParameterFunction,
    flat: &AffineFlat,
) -> IndexReport {
    let sub = flat.parabolic(rs);
    order_in(
        rs,
        k,
        sub.roots.iter().copied(),
        sub.space_dim,
        flat.center(),
    )
}

/// The hyperplanes `{α(v) = k_α}` as `(root index, offset)`, one per root.
pub fn shifted_hyperplanes(rs: &RootSystem, k: &ParameterFunction) -> Vec<(usize, Q)> {
    (0..rs.len())
        .map(|i| (i, k.of_root(rs, i).clone()))
        .collect()
}

/// Every flat of the intersection lattice of `{α(v) = k_α}` with
/// codimension at most `max_codim`, by closure from `V`.
pub fn intersection_lattice(
    rs: &RootSystem,
    k: &ParameterFunction,
    max_codim: usize,
) -> Vec<AffineFlat> {
    let hyper = shifted_hyperplanes(rs, k);
    let mut all: BTreeSet<AffineFlat> = BTreeSet::new();
    let mut level = vec![AffineFlat::whole_space(rs)];
    all.insert(level[0].clone());
    for _ in 0..max_codim.min(rs.dim()) {
        let mut next: BTreeSet<AffineFlat> = BTreeSet::new();
        for f in &level {
            for (i, c) in &hyper {
                if let Intersection::Flat(g) = f.intersect(rs.root(*i), c) {
                    if !all.contains(&g) {
                        next.insert(g);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next.into_iter().collect();
        if level.is_empty() {
            break;
        }
    }
    all.into_iter().collect()
}
