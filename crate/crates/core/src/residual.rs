//! Enumeration of residual affine subspaces, their W₀-orbits, and checks of
//! the structural properties they satisfy.
//!
//! The enumerator descends from `V` one codimension at a time: a flat `L`
//! of codimension `c + 1` is residual when it is `M ∩ {α(v) = k_α}` for a
//! residual `M` of codimension `c` with `i_L ≥ i_M + 1`. Only the shifted
//! hyperplanes are ever cut with; zero hyperplanes enter through `i_L`.
//!
//! Each level is expanded in parallel and merged sequentially in a fixed
//! order (parents in canonical order, roots in index order), so the table
//! and every witness chain are independent of the thread count.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{
    intersection_lattice, order_flat, order_flat_reduced, order_in, order_point, AffineFlat,
    IndexReport, Intersection,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{display_vec, neg, QVec, Q};
use crate::rootsys::{ParameterFunction, RootSystem, Subsystem};

/// `(i_M, parent index, root index)` for one way of reaching a child flat.
type ParentCut = (i64, usize, usize);

pub const DEFAULT_MAX_FLATS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub max_flats: usize,
    pub time_limit: Option<Duration>,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            max_flats: DEFAULT_MAX_FLATS,
            time_limit: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResidualCoset {
    pub flat: AffineFlat,
    pub report: IndexReport,
    /// Index of the flat one codimension up that this one was cut from,
    /// with the root used. `None` for `V` itself.
    pub parent: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct OrbitEntry {
    /// Index into [`OrbitTable::cosets`]: the member with dominant center
    /// and smallest canonical equations.
    pub representative: usize,
    pub members: Vec<usize>,
    pub dim: usize,
    pub i: i64,
}

impl OrbitEntry {
    pub fn orbit_size(&self) -> usize {
        self.members.len()
    }
}

/// All residual flats for `(R₀, k)` grouped into W₀-orbits.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub label: String,
    pub params: ParameterFunction,
    /// Sorted by codimension, then canonical form.
    pub cosets: Vec<ResidualCoset>,
    pub orbits: Vec<OrbitEntry>,
    /// Reflections of table flats that left the table (should stay empty).
    pub closure_violations: Vec<(usize, usize)>,
    index: HashMap<AffineFlat, usize>,
}

impl OrbitTable {
    pub fn get(&self, flat: &AffineFlat) -> Option<usize> {
        self.index.get(flat).copied()
    }

    pub fn contains(&self, flat: &AffineFlat) -> bool {
        self.index.contains_key(flat)
    }

    pub fn flats(&self) -> impl Iterator<Item = &AffineFlat> {
        self.cosets.iter().map(|c| &c.flat)
    }

    pub fn representative(&self, orbit: usize) -> &ResidualCoset {
        &self.cosets[self.orbits[orbit].representative]
    }

    /// `V = M₀ ⊃ M₁ ⊃ … ⊃ L`, the descent that first reached `L`.
    pub fn witness_chain(&self, idx: usize) -> Vec<&AffineFlat> {
        let mut chain = vec![&self.cosets[idx].flat];
        let mut cur = idx;
        while let Some((p, _)) = self.cosets[cur].parent {
            chain.push(&self.cosets[p].flat);
            cur = p;
        }
        chain.reverse();
        chain
    }

    pub fn orbit_counts_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for o in &self.orbits {
            *m.entry(o.dim).or_insert(0) += 1;
        }
        m
    }

    pub fn point_orbits(&self) -> impl Iterator<Item = &OrbitEntry> {
        self.orbits.iter().filter(|o| o.dim == 0)
    }
}

pub fn enumerate_residual(rs: &RootSystem, k: &ParameterFunction) -> Result<OrbitTable> {
    enumerate_residual_with(rs, k, &EnumerationConfig::default())
}

pub fn enumerate_residual_with(
    rs: &RootSystem,
    k: &ParameterFunction,
    config: &EnumerationConfig,
) -> Result<OrbitTable> {
    let started = Instant::now();
    let top = AffineFlat::whole_space(rs);
    let top_report = order_flat(rs, k, &top);
    let mut cosets = vec![ResidualCoset {
        flat: top,
        report: top_report,
        parent: None,
    }];
    let mut level: Vec<usize> = vec![0];

    for _codim in 0..rs.dim() {
        if let Some(limit) = config.time_limit {
            if started.elapsed() > limit {
                return Err(Error::Resource(format!(
                    "time limit of {limit:?} reached with {} flats",
                    cosets.len()
                )));
            }
        }
        let cuts: Vec<Vec<(AffineFlat, usize)>> = level
            .par_iter()
            .map(|&m| {
                let flat = &cosets[m].flat;
                (0..rs.len())
                    .filter_map(|a| match flat.intersect(rs.root(a), k.of_root(rs, a)) {
                        Intersection::Flat(l) => Some((l, a)),
                        _ => None,
                    })
                    .collect()
            })
            .collect();

        // For each distinct child, the first parent (in level order) for
        // every distinct parent index i_M.
        let mut candidates: BTreeMap<AffineFlat, Vec<ParentCut>> = BTreeMap::new();
        for (&m, cut) in level.iter().zip(cuts) {
            let im = cosets[m].report.i;
            for (l, a) in cut {
                let parents = candidates.entry(l).or_default();
                if parents.iter().all(|p| p.0 != im) {
                    parents.push((im, m, a));
                }
            }
        }
        let candidates: Vec<(AffineFlat, Vec<ParentCut>)> = candidates.into_iter().collect();
        let reports: Vec<IndexReport> = candidates
            .par_iter()
            .map(|(l, _)| order_flat(rs, k, l))
            .collect();

        let children: Vec<(AffineFlat, (usize, usize), IndexReport)> = candidates
            .into_iter()
            .zip(reports)
            .filter_map(|((l, parents), report)| {
                parents
                    .iter()
                    .filter(|p| report.i > p.0)
                    .min_by_key(|p| p.1)
                    .map(|p| (l, (p.1, p.2), report))
            })
            .collect();
        if cosets.len() + children.len() > config.max_flats {
            let frontier = level.iter().map(|&m| cosets[m].flat.clone()).collect();
            return Err(Error::FlatCap {
                limit: config.max_flats,
                found: cosets.len(),
                frontier,
            });
        }

        let mut next = Vec::with_capacity(children.len());
        for (l, parent, report) in children {
            next.push(cosets.len());
            cosets.push(ResidualCoset {
                flat: l,
                report,
                parent: Some(parent),
            });
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }

    Ok(group_orbits(rs, k, cosets))
}

fn group_orbits(rs: &RootSystem, k: &ParameterFunction, cosets: Vec<ResidualCoset>) -> OrbitTable {
    let index: HashMap<AffineFlat, usize> = cosets
        .iter()
        .enumerate()
        .map(|(i, c)| (c.flat.clone(), i))
        .collect();

    // Simple-reflection images, computed in parallel.
    let images: Vec<Vec<Option<usize>>> = cosets
        .par_iter()
        .map(|c| {
            (0..rs.rank())
                .map(|s| index.get(&c.flat.reflect_simple(rs, s)).copied())
                .collect()
        })
        .collect();

    let mut closure_violations = Vec::new();
    for (i, row) in images.iter().enumerate() {
        for (s, img) in row.iter().enumerate() {
            if img.is_none() {
                closure_violations.push((i, s));
            }
        }
    }

    let mut orbit_of = vec![usize::MAX; cosets.len()];
    let mut orbits = Vec::new();
    for start in 0..cosets.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in images[x].iter().flatten() {
                if orbit_of[*y] == usize::MAX {
                    orbit_of[*y] = id;
                    members.push(*y);
                    queue.push_back(*y);
                }
            }
        }
        members.sort_unstable();
        let representative = members
            .iter()
            .copied()
            .filter(|&m| rs.is_dominant(cosets[m].flat.center()))
            .min_by(|&a, &b| cosets[a].flat.cmp(&cosets[b].flat))
            .unwrap_or(members[0]);
        orbits.push(OrbitEntry {
            representative,
            dim: cosets[start].flat.dim(),
            i: cosets[start].report.i,
            members,
        });
    }
    orbits.sort_by(|a, b| {
        b.dim.cmp(&a.dim).then_with(|| {
            cosets[a.representative]
                .flat
                .cmp(&cosets[b.representative].flat)
        })
    });

    OrbitTable {
        label: rs.label(),
        params: k.clone(),
        cosets,
        orbits,
        closure_violations,
        index,
    }
}

/// A W₀-orbit of residual points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOrbit {
    pub dominant: QVec,
    pub points: Vec<QVec>,
}

pub fn residual_points(rs: &RootSystem, k: &ParameterFunction) -> Result<Vec<PointOrbit>> {
    Ok(point_orbits_of(&enumerate_residual(rs, k)?))
}

pub fn point_orbits_of(table: &OrbitTable) -> Vec<PointOrbit> {
    table
        .point_orbits()
        .map(|o| PointOrbit {
            dominant: table.cosets[o.representative].flat.center().clone(),
            points: o
                .members
                .iter()
                .map(|&m| table.cosets[m].flat.center().clone())
                .collect(),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Check {
    /// Every flat of the intersection lattice has `o_L ≤ 0`.
    T1a,
    /// Residual points form a finite W₀-stable set.
    T1b,
    /// Every residual point `v` has `-v ∈ W₀v`.
    T2,
    /// Centers of positive-dimensional residual flats are not residual points.
    T3,
    /// Every enumerated flat has `o_L = 0`, agreeing with the reduction to `(R_L, v_L)`.
    T5B,
    /// Every residual point lies on a residual line.
    L41,
    /// Every witness chain raises codimension and `i` by one per step, and
    /// every flat is the full intersection of the hit hyperplanes containing it.
    Chain,
    /// The whole table is stable under the simple reflections.
    Closure,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::T1a,
        Check::T1b,
        Check::T2,
        Check::T3,
        Check::T5B,
        Check::L41,
        Check::Chain,
        Check::Closure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::T1a => "T1a",
            Check::T1b => "T1b",
            Check::T2 => "T2",
            Check::T3 => "T3",
            Check::T5B => "T5B",
            Check::L41 => "L4.1",
            Check::Chain => "CHAIN",
            Check::Closure => "CLOSURE",
        }
    }

    pub fn parse(s: &str) -> Result<Check> {
        let t = s.trim().to_ascii_uppercase();
        Check::ALL
            .into_iter()
            .find(|c| c.name().to_ascii_uppercase() == t || (t == "L41" && *c == Check::L41))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown check {s:?}; checks are {}",
                    Check::ALL.map(Check::name).join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub description: String,
    pub center: Vec<String>,
    pub dim: usize,
    pub hits: usize,
    pub zeros: usize,
    pub i: i64,
    pub o: i64,
}

impl Counterexample {
    fn new(description: impl Into<String>, flat: &AffineFlat, report: IndexReport) -> Self {
        Counterexample {
            description: description.into(),
            center: crate::rational::fmt_vec(flat.center()),
            dim: flat.dim(),
            hits: report.hits,
            zeros: report.zeros,
            i: report.i,
            o: report.o,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub passed: bool,
    /// Number of objects examined.
    pub examined: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, check: Check) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check.name())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub checks: Vec<Check>,
    /// Codimension cap for the exhaustive lattice sweep of `T1a`.
    pub lattice_codim: usize,
}

impl VerifyOptions {
    /// All checks; the lattice sweep is exhaustive up to rank 4 and stops at
    /// codimension 2 above that.
    pub fn for_system(rs: &RootSystem) -> Self {
        VerifyOptions {
            checks: Check::ALL.to_vec(),
            lattice_codim: if rs.dim() <= 4 { rs.dim() } else { 2 },
        }
    }
}

pub fn verify_all(
    rs: &RootSystem,
    k: &ParameterFunction,
    table: &OrbitTable,
) -> VerificationReport {
    verify_with(rs, k, table, &VerifyOptions::for_system(rs))
}

const MAX_REPORTED: usize = 20;

pub fn verify_with(
    rs: &RootSystem,
    k: &ParameterFunction,
    table: &OrbitTable,
    opts: &VerifyOptions,
) -> VerificationReport {
    let mut checks: Vec<Check> = opts.checks.clone();
    checks.sort();
    checks.dedup();
    let checks = checks
        .into_iter()
        .map(|c| {
            let (examined, mut bad) = match c {
                Check::T1a => check_lattice_bound(rs, k, opts.lattice_codim),
                Check::T1b => check_points_closed(rs, table),
                Check::T2 => check_minus_in_orbit(rs, k, table),
                Check::T3 => check_centers_not_residual(rs, k, table),
                Check::T5B => check_order_zero(rs, k, table),
                Check::L41 => check_points_on_lines(rs, k, table),
                Check::Chain => check_chains(rs, k, table),
                Check::Closure => check_closure(rs, k, table),
            };
            let passed = bad.is_empty();
            bad.truncate(MAX_REPORTED);
            CheckResult {
                check: c.name(),
                passed,
                examined,
                counterexamples: bad,
            }
        })
        .collect();
    VerificationReport { checks }
}

fn check_lattice_bound(
    rs: &RootSystem,
    k: &ParameterFunction,
    max_codim: usize,
) -> (usize, Vec<Counterexample>) {
    let lattice = intersection_lattice(rs, k, max_codim);
    let bad = lattice
        .par_iter()
        .filter_map(|f| {
            let r = order_flat(rs, k, f);
            (r.o > 0).then(|| Counterexample::new("o_L > 0", f, r))
        })
        .collect();
    (lattice.len(), bad)
}

fn points(table: &OrbitTable) -> Vec<&ResidualCoset> {
    table.cosets.iter().filter(|c| c.flat.dim() == 0).collect()
}

fn check_points_closed(rs: &RootSystem, table: &OrbitTable) -> (usize, Vec<Counterexample>) {
    let pts = points(table);
    let set: HashSet<&QVec> = pts.iter().map(|c| c.flat.center()).collect();
    let mut bad = Vec::new();
    for c in &pts {
        for s in 0..rs.rank() {
            let img = rs.reflect_simple(s, c.flat.center());
            if !set.contains(&img) {
                bad.push(Counterexample::new(
                    format!("reflection s{} leaves the point set", s + 1),
                    &c.flat,
                    c.report,
                ));
            }
        }
    }
    (pts.len(), bad)
}

fn check_minus_in_orbit(
    rs: &RootSystem,
    _k: &ParameterFunction,
    table: &OrbitTable,
) -> (usize, Vec<Counterexample>) {
    let pts = points(table);
    let bad = pts
        .par_iter()
        .filter_map(|c| {
            let v = c.flat.center();
            (!rs.same_orbit(v, &neg(v)))
                .then(|| Counterexample::new("-v not in W0 v", &c.flat, c.report))
        })
        .collect();
    (pts.len(), bad)
}

fn check_centers_not_residual(
    rs: &RootSystem,
    k: &ParameterFunction,
    table: &OrbitTable,
) -> (usize, Vec<Counterexample>) {
    let positive: Vec<&ResidualCoset> = table.cosets.iter().filter(|c| c.flat.dim() > 0).collect();
    let bad = positive
        .par_iter()
        .filter_map(|c| {
            let o = order_point(rs, k, c.flat.center());
            (o >= 0)
                .then(|| Counterexample::new(format!("center has o(v_L) = {o}"), &c.flat, c.report))
        })
        .collect();
    (positive.len(), bad)
}

fn check_order_zero(
    rs: &RootSystem,
    k: &ParameterFunction,
    table: &OrbitTable,
) -> (usize, Vec<Counterexample>) {
    let bad = table
        .cosets
        .par_iter()
        .filter_map(|c| {
            let direct = order_flat(rs, k, &c.flat);
            let reduced = order_flat_reduced(rs, k, &c.flat);
            if direct != c.report {
                Some(Counterexample::new(
                    "stored report is stale",
                    &c.flat,
                    direct,
                ))
            } else if direct.o != 0 {
                Some(Counterexample::new("o_L != 0", &c.flat, direct))
            } else if reduced.o != direct.o || reduced.i != direct.i {
                Some(Counterexample::new(
                    format!("reduction gives o = {}", reduced.o),
                    &c.flat,
                    direct,
                ))
            } else {
                None
            }
        })
        .collect();
    (table.cosets.len(), bad)
}

fn check_points_on_lines(
    _rs: &RootSystem,
    _k: &ParameterFunction,
    table: &OrbitTable,
) -> (usize, Vec<Counterexample>) {
    let lines: Vec<&AffineFlat> = table.flats().filter(|f| f.dim() == 1).collect();
    let pts = points(table);
    let bad = pts
        .par_iter()
        .filter_map(|c| {
            let on_line = lines.iter().any(|l| l.contains_point(c.flat.center()));
            (!on_line).then(|| Counterexample::new("not on any residual line", &c.flat, c.report))
        })
        .collect();
    (pts.len(), bad)
}

fn check_chains(
    rs: &RootSystem,
    k: &ParameterFunction,
    table: &OrbitTable,
) -> (usize, Vec<Counterexample>) {
    let bad = (0..table.cosets.len())
        .into_par_iter()
        .filter_map(|idx| {
            let c = &table.cosets[idx];
            let chain = table.witness_chain(idx);
            for (j, w) in chain.windows(2).enumerate() {
                let (m, l) = (w[0], w[1]);
                let rm = order_flat(rs, k, m);
                let rl = order_flat(rs, k, l);
                if l.codim(rs) != j + 1 || rl.i != rm.i + 1 || !l.is_subset_of(m) {
                    return Some(Counterexample::new(
                        format!("witness step {j} does not raise codim and i by one"),
                        &c.flat,
                        c.report,
                    ));
                }
            }
            // Maximality: the hit hyperplanes through L cut out exactly L.
            let hits: Vec<(QVec, Q)> = (0..rs.len())
                .filter(|&a| {
                    c.flat.is_constant(rs.root(a))
                        && crate::rational::dot(rs.root(a), c.flat.center()) == *k.of_root(rs, a)
                })
                .map(|a| (rs.root(a).clone(), k.of_root(rs, a).clone()))
                .chain(rs.complement.iter().map(|v| (v.clone(), Q::zero())))
                .collect();
            let span = AffineFlat::from_equations(rs.ambient_dim, &hits);
            if span.as_ref() != Some(&c.flat) {
                return Some(Counterexample::new(
                    "hit hyperplanes through L cut out a larger flat",
                    &c.flat,
                    c.report,
                ));
            }
            None
        })
        .collect();
    (table.cosets.len(), bad)
}

fn check_closure(
    _rs: &RootSystem,
    _k: &ParameterFunction,
    table: &OrbitTable,
) -> (usize, Vec<Counterexample>) {
    let bad = table
        .closure_violations
        .iter()
        .map(|&(i, s)| {
            let c = &table.cosets[i];
            Counterexample::new(
                format!("reflection s{} maps the flat outside the table", s + 1),
                &c.flat,
                c.report,
            )
        })
        .collect();
    (table.cosets.len(), bad)
}

/// A residual flat recorded as its parabolic subsystem and center.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairRep {
    /// Sorted root indices of `R_L`.
    pub parabolic: Vec<usize>,
    pub parabolic_type: String,
    /// `r_L = v_L`, an `R_L`-residual point of `V_L`.
    pub point: QVec,
}

pub fn pair_representation(rs: &RootSystem, table: &OrbitTable) -> Vec<PairRep> {
    table
        .cosets
        .iter()
        .map(|c| {
            let sub = c.flat.parabolic(rs);
            PairRep {
                parabolic_type: sub.cartan_label(rs),
                parabolic: sub.roots,
                point: c.flat.center().clone(),
            }
        })
        .collect()
}

/// Rebuilds `L = r_L + V^L` from a pair, with `V^L` the orthogonal
/// complement of `span(R_L)` inside `V`.
pub fn flat_from_pair(rs: &RootSystem, pair: &PairRep) -> AffineFlat {
    let mut normals: Vec<QVec> = pair.parabolic.iter().map(|&i| rs.root(i).clone()).collect();
    normals.extend(rs.complement.iter().cloned());
    let direction = if normals.is_empty() {
        (0..rs.ambient_dim)
            .map(|i| {
                let mut e = vec![Q::zero(); rs.ambient_dim];
                e[i] = num_traits::One::one();
                e
            })
            .collect()
    } else {
        linalg::nullspace(&normals, rs.ambient_dim)
    };
    AffineFlat::from_point_direction(&pair.point, &direction)
}

/// Checks that flat ↦ (R_L, r_L) is a bijection onto its image: pairs are
/// distinct, each `r_L` is residual for `R_L` on `V_L`, and the flat is
/// recovered from its pair. Returns the offending flats' descriptions.
pub fn verify_pairing(rs: &RootSystem, k: &ParameterFunction, table: &OrbitTable) -> Vec<String> {
    let pairs = pair_representation(rs, table);
    let mut problems = Vec::new();
    let mut seen: HashMap<&PairRep, usize> = HashMap::new();
    for (idx, (c, p)) in table.cosets.iter().zip(&pairs).enumerate() {
        if let Some(prev) = seen.insert(p, idx) {
            problems.push(format!(
                "flats {} and {} share the pair ({}, {})",
                display_vec(table.cosets[prev].flat.center()),
                display_vec(c.flat.center()),
                p.parabolic_type,
                display_vec(&p.point)
            ));
        }
        let sub = Subsystem {
            roots: p.parabolic.clone(),
            space_dim: c.flat.codim(rs),
        };
        if order_in(rs, k, sub.roots.iter().copied(), sub.space_dim, &p.point).o != 0 {
            problems.push(format!(
                "center {} is not residual for its parabolic {}",
                display_vec(&p.point),
                p.parabolic_type
            ));
        }
        if flat_from_pair(rs, p) != c.flat {
            problems.push(format!(
                "pair ({}, {}) does not reconstruct its flat",
                p.parabolic_type,
                display_vec(&p.point)
            ));
        }
    }
    problems
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub ratio: String,
    /// Orbit counts indexed by dimension `0..=rank`.
    pub counts_by_dim: Vec<usize>,
    pub total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub label: String,
    pub rows: Vec<ScanRow>,
    /// Grid ratios whose counts differ from both neighbours.
    pub walls: Vec<String>,
    /// Consecutive grid ratios between which the counts change.
    pub changes: Vec<(String, String)>,
}

/// Parameters used at `ratio` by [`scan_parameters`]: `long = 1`, short
/// classes `= ratio` for two-class systems; a global scale `k ≡ ratio` for
/// single-class systems.
pub fn scan_params(rs: &RootSystem, ratio: &Q) -> ParameterFunction {
    if rs.classes.len() == 1 {
        ParameterFunction::equal(rs, ratio.clone())
    } else {
        ParameterFunction::from_ratio(rs, ratio)
    }
}

pub fn scan_parameters(rs: &RootSystem, ratios: &[Q]) -> Result<ScanReport> {
    let mut rows = Vec::with_capacity(ratios.len());
    for r in ratios {
        let table = enumerate_residual(rs, &scan_params(rs, r))?;
        let mut counts = vec![0; rs.dim() + 1];
        for o in &table.orbits {
            counts[o.dim] += 1;
        }
        rows.push(ScanRow {
            ratio: crate::rational::fmt_q(r),
            total: table.orbits.len(),
            counts_by_dim: counts,
        });
    }
    let walls = (1..rows.len().saturating_sub(1))
        .filter(|&j| {
            rows[j].counts_by_dim != rows[j - 1].counts_by_dim
                && rows[j].counts_by_dim != rows[j + 1].counts_by_dim
        })
        .map(|j| rows[j].ratio.clone())
        .collect();
    let changes = rows
        .windows(2)
        .filter(|w| w[0].counts_by_dim != w[1].counts_by_dim)
        .map(|w| (w[0].ratio.clone(), w[1].ratio.clone()))
        .collect();
    Ok(ScanReport {
        label: rs.label(),
        rows,
        walls,
        changes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q, qvec};
    use num_traits::Signed;

    fn rs(label: &str) -> RootSystem {
        RootSystem::from_label(label).unwrap()
    }

    fn table(label: &str, params: &str) -> (RootSystem, ParameterFunction, OrbitTable) {
        let r = rs(label);
        let k = ParameterFunction::parse(&r, params).unwrap();
        let t = enumerate_residual(&r, &k).unwrap();
        (r, k, t)
    }

    #[test]
    fn a1_has_whole_space_and_point_pair() {
        let (_, _, t) = table("A1", "all=1");
        assert_eq!(t.orbits.len(), 2);
        assert_eq!(t.orbits[0].dim, 1);
        assert_eq!(t.orbits[1].dim, 0);
        assert_eq!(t.orbits[1].orbit_size(), 2);
        assert_eq!(
            t.representative(1).flat.center(),
            &vec![frac(1, 2), frac(-1, 2)]
        );
    }

    #[test]
    fn a2_has_three_orbits() {
        let (r, _, t) = table("A2", "all=1");
        let dims: Vec<usize> = t.orbits.iter().map(|o| o.dim).collect();
        assert_eq!(dims, vec![2, 1, 0]);
        assert_eq!(t.orbits[2].orbit_size(), 6);
        let p = t.representative(2).flat.center();
        assert_eq!(p, &qvec(&[1, 0, -1]));
        assert_eq!(
            t.representative(1).flat.parabolic(&r).cartan_label(&r),
            "A1"
        );
    }

    #[test]
    fn zero_parameters_leave_only_the_whole_space() {
        for label in ["A2", "B2", "G2", "A1xA1"] {
            let (_, _, t) = table(label, "all=0");
            assert_eq!(t.orbits.len(), 1, "{label}");
            assert_eq!(t.cosets.len(), 1);
        }
    }

    #[test]
    fn residual_point_examples() {
        let r = rs("B2");
        let pts = residual_points(&r, &ParameterFunction::equal(&r, q(1))).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].dominant, qvec(&[2, 1]));
        assert_eq!(pts[0].points.len(), 8);

        let g = rs("G2");
        let pts = residual_points(&g, &ParameterFunction::equal(&g, q(1))).unwrap();
        assert_eq!(pts.len(), 2);

        let aa = rs("A1xA1");
        let pts = residual_points(&aa, &ParameterFunction::equal(&aa, q(1))).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].points.len(), 4);
    }

    #[test]
    fn verification_passes_on_examples() {
        for (label, params) in [("A2", "all=1"), ("B2", "long=1,short=2"), ("B2", "all=0")] {
            let (r, k, t) = table(label, params);
            let rep = verify_all(&r, &k, &t);
            assert!(rep.all_passed(), "{label} {params}: {rep:#?}");
        }
    }

    #[test]
    fn verification_reports_a_planted_bad_flat() {
        let (r, k, mut t) = table("A2", "all=1");
        // A generic point that is not residual.
        let bogus = AffineFlat::from_point_direction(&qvec(&[7, 2, -9]), &[]);
        let report = order_flat(&r, &k, &bogus);
        t.cosets.push(ResidualCoset {
            flat: bogus,
            report,
            parent: Some((0, 0)),
        });
        let rep = verify_with(
            &r,
            &k,
            &t,
            &VerifyOptions {
                checks: vec![Check::T5B, Check::L41, Check::Chain],
                lattice_codim: 2,
            },
        );
        assert!(!rep.all_passed());
        assert!(!rep.get(Check::T5B).unwrap().passed);
        assert!(!rep.get(Check::L41).unwrap().passed);
    }

    #[test]
    fn pair_representation_examples() {
        let (r, k, t) = table("A2", "all=1");
        let pairs = pair_representation(&r, &t);
        assert!(pairs[0].parabolic.is_empty());
        assert!(pairs[0].point.iter().all(Zero::is_zero));
        let line = &pairs[t.orbits[1].representative];
        assert_eq!(line.parabolic_type, "A1");
        // α(r_L) = ±1 for the two roots of R_L.
        let a = r.root(line.parabolic[0]);
        assert_eq!(crate::rational::dot(a, &line.point).abs(), q(1));
        assert!(verify_pairing(&r, &k, &t).is_empty());

        let (r, k, t) = table("B2", "all=1");
        let pairs = pair_representation(&r, &t);
        let p = &pairs[t.orbits.last().unwrap().representative];
        assert_eq!(p.parabolic.len(), 8);
        assert_eq!(p.point, qvec(&[2, 1]));
        assert!(verify_pairing(&r, &k, &t).is_empty());
    }

    #[test]
    fn scan_single_class_is_constant_on_positive_ratios() {
        let r = rs("A2");
        let rep = scan_parameters(&r, &[frac(1, 3), q(1), q(5)]).unwrap();
        assert!(rep
            .rows
            .windows(2)
            .all(|w| w[0].counts_by_dim == w[1].counts_by_dim));
        assert!(rep.walls.is_empty());
    }

    #[test]
    fn witness_chains_descend_from_whole_space() {
        let (r, _, t) = table("B2", "all=1");
        for idx in 0..t.cosets.len() {
            let chain = t.witness_chain(idx);
            assert_eq!(chain.len(), t.cosets[idx].flat.codim(&r) + 1);
            assert_eq!(chain[0], &AffineFlat::whole_space(&r));
        }
    }

    #[test]
    fn flat_cap_carries_frontier() {
        let r = rs("B2");
        let k = ParameterFunction::equal(&r, q(1));
        let err = enumerate_residual_with(
            &r,
            &k,
            &EnumerationConfig {
                max_flats: 3,
                time_limit: None,
            },
        )
        .unwrap_err();
        match err {
            Error::FlatCap {
                limit,
                found,
                frontier,
            } => {
                assert_eq!(limit, 3);
                assert_eq!(found, 1);
                assert!(!frontier.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }
}
