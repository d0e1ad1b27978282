//! Brute-force residual flats for differential testing of the enumerator.
//!
//! Shares only flats and order functions with [`crate::residual`]. Flats are
//! found by running over subsets of the shifted hyperplanes; points by
//! solving every square subsystem.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;

use crate::arrangement::{order_flat, order_point, shifted_hyperplanes, AffineFlat, Intersection};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{display_vec, QVec, Q};
use crate::rootsys::{ParameterFunction, RootSystem};

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub max_rank: usize,
    /// Upper bound on the number of hyperplane subsets visited.
    pub max_subsets: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_rank: 4,
            max_subsets: 20_000_000,
        }
    }
}

fn binomial_prefix_sum(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c * (n - j) as u128 / (j + 1) as u128;
    }
    total
}

fn check_budget(rs: &RootSystem, size: usize, config: &OracleConfig) -> Result<()> {
    if rs.dim() > config.max_rank {
        return Err(Error::Resource(format!(
            "oracle limited to rank {}; {} has rank {}",
            config.max_rank,
            rs.label(),
            rs.dim()
        )));
    }
    let subsets = binomial_prefix_sum(rs.len(), size);
    if subsets > config.max_subsets {
        return Err(Error::Resource(format!(
            "oracle would visit up to {subsets} hyperplane subsets (cap {})",
            config.max_subsets
        )));
    }
    Ok(())
}

/// Every flat of the intersection lattice cut out by at most `max_codim`
/// shifted hyperplanes, deduplicated by canonical form.
///
/// Subsets are visited in increasing index order; a hyperplane that contains
/// the current flat or misses it is skipped, since adding it reproduces an
/// already visited flat or the empty set.
pub fn lattice_by_subsets(
    rs: &RootSystem,
    k: &ParameterFunction,
    max_codim: usize,
    config: &OracleConfig,
) -> Result<Vec<AffineFlat>> {
    lattice_from_hyperplanes(rs, &shifted_hyperplanes(rs, k), max_codim, config)
}

/// As [`lattice_by_subsets`], for an explicit list of `(root, shift)`
/// hyperplanes in the order given. The result does not depend on that order.
pub fn lattice_from_hyperplanes(
    rs: &RootSystem,
    hyper: &[(usize, Q)],
    max_codim: usize,
    config: &OracleConfig,
) -> Result<Vec<AffineFlat>> {
    let max_codim = max_codim.min(rs.dim());
    check_budget(rs, max_codim, config)?;
    let top = AffineFlat::whole_space(rs);

    fn descend(
        rs: &RootSystem,
        hyper: &[(usize, Q)],
        flat: &AffineFlat,
        from: usize,
        depth_left: usize,
        out: &mut BTreeSet<AffineFlat>,
    ) {
        if depth_left == 0 {
            return;
        }
        for j in from..hyper.len() {
            let (a, c) = &hyper[j];
            if let Intersection::Flat(g) = flat.intersect(rs.root(*a), c) {
                descend(rs, hyper, &g, j + 1, depth_left - 1, out);
                out.insert(g);
            }
        }
    }

    let branches: Vec<BTreeSet<AffineFlat>> = (0..hyper.len())
        .into_par_iter()
        .map(|j| {
            let mut out = BTreeSet::new();
            if max_codim == 0 {
                return out;
            }
            let (a, c) = &hyper[j];
            if let Intersection::Flat(g) = top.intersect(rs.root(*a), c) {
                descend(rs, hyper, &g, j + 1, max_codim - 1, &mut out);
                out.insert(g);
            }
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    all.insert(top);
    for b in branches {
        all.extend(b);
    }
    Ok(all.into_iter().collect())
}

/// Flats with `o_L ≥ 0` among all intersections of at most `max_codim`
/// shifted hyperplanes. Any flat with `o_L > 0` is an error.
pub fn brute_force_flats(
    rs: &RootSystem,
    k: &ParameterFunction,
    max_codim: usize,
) -> Result<Vec<AffineFlat>> {
    brute_force_flats_with(rs, k, max_codim, &OracleConfig::default())
}

pub fn brute_force_flats_with(
    rs: &RootSystem,
    k: &ParameterFunction,
    max_codim: usize,
    config: &OracleConfig,
) -> Result<Vec<AffineFlat>> {
    let lattice = lattice_by_subsets(rs, k, max_codim, config)?;
    let orders: Vec<i64> = lattice.par_iter().map(|f| order_flat(rs, k, f).o).collect();
    if let Some((f, o)) = lattice.iter().zip(&orders).find(|(_, o)| **o > 0) {
        return Err(Error::Verification(format!(
            "oracle found a flat with o_L = {o} > 0 through {}",
            display_vec(f.center())
        )));
    }
    Ok(lattice
        .into_iter()
        .zip(orders)
        .filter(|(_, o)| *o >= 0)
        .map(|(f, _)| f)
        .collect())
}

/// All points `v ∈ V` with `o(v) = 0`, by solving every system of
/// `dim V` shifted hyperplanes with independent normals.
pub fn brute_force_points(rs: &RootSystem, k: &ParameterFunction) -> Result<Vec<QVec>> {
    brute_force_points_with(rs, k, &OracleConfig::default())
}

pub fn brute_force_points_with(
    rs: &RootSystem,
    k: &ParameterFunction,
    config: &OracleConfig,
) -> Result<Vec<QVec>> {
    let n = rs.dim();
    check_budget(rs, n, config)?;
    let hyper = shifted_hyperplanes(rs, k);
    let comp = &rs.complement;

    // Subsets with a fixed first element, one parallel task per first element.
    let found: Vec<BTreeSet<QVec>> = (0..hyper.len())
        .into_par_iter()
        .map(|first| {
            let mut out = BTreeSet::new();
            let mut idx = vec![first];
            combos(&hyper, first + 1, n, &mut idx, &mut |subset| {
                let mut m: Vec<QVec> = subset
                    .iter()
                    .map(|&j| rs.root(hyper[j].0).clone())
                    .collect();
                let mut b: Vec<Q> = subset.iter().map(|&j| hyper[j].1.clone()).collect();
                m.extend(comp.iter().cloned());
                b.extend(comp.iter().map(|_| Q::zero()));
                if let Some(v) = linalg::solve_square(&m, &b) {
                    if order_point(rs, k, &v) == 0 {
                        out.insert(v);
                    }
                }
            });
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    for f in found {
        all.extend(f);
    }
    Ok(all.into_iter().collect())
}

fn combos(
    hyper: &[(usize, Q)],
    from: usize,
    size: usize,
    idx: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if idx.len() == size {
        visit(idx);
        return;
    }
    for j in from..hyper.len() {
        idx.push(j);
        combos(hyper, j + 1, size, idx, visit);
        idx.pop();
    }
}

/// Symmetric difference of two flat sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlatDiff {
    pub only_left: Vec<AffineFlat>,
    pub only_right: Vec<AffineFlat>,
}

impl FlatDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

pub fn diff_flats<'a>(
    left: impl IntoIterator<Item = &'a AffineFlat>,
    right: impl IntoIterator<Item = &'a AffineFlat>,
) -> FlatDiff {
    let l: BTreeSet<&AffineFlat> = left.into_iter().collect();
    let r: BTreeSet<&AffineFlat> = right.into_iter().collect();
    FlatDiff {
        only_left: l.difference(&r).map(|f| (*f).clone()).collect(),
        only_right: r.difference(&l).map(|f| (*f).clone()).collect(),
    }
}
