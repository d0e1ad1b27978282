//! Weighted Dynkin diagrams of equal-parameter residual points, and orbit
//! counts compared against Bala–Carter numerology.
//!
//! Diagrams are normalized to `k ≡ 2`, so a residual point `v` at equal
//! parameter `c` is rescaled by `2/c` before the simple roots are evaluated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dot, fmt_q, q, scale, to_qstr_vec, QVec, Q};
use crate::residual::OrbitTable;
use crate::rootsys::{ParameterFunction, RootSystem};

/// Labels `α_i(v_dom)` on the simple roots, in the order of `rs.simple`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightedDiagram {
    pub labels: Vec<Q>,
    /// Dominant center the labels were read from, after normalization.
    pub source: QVec,
}

impl WeightedDiagram {
    pub fn is_zero(&self) -> bool {
        self.labels.iter().all(Zero::is_zero)
    }

    /// Whether every label is 0 or 2.
    pub fn is_even(&self) -> bool {
        let two = q(2);
        self.labels.iter().all(|l| l.is_zero() || *l == two)
    }

    pub fn labels_string(&self) -> String {
        let parts: Vec<String> = self.labels.iter().map(crate::rational::display_q).collect();
        format!("({})", parts.join(","))
    }

    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        let bonds: Vec<serde_json::Value> = bonds(rs)
            .into_iter()
            .map(|(i, j, m, arrow)| {
                serde_json::json!({"from": i, "to": j, "multiplicity": m, "long_to_short": arrow})
            })
            .collect();
        serde_json::json!({
            "type": rs.label(),
            "labels": self.labels.iter().map(fmt_q).collect::<Vec<_>>(),
            "source": to_qstr_vec(&self.source),
            "bonds": bonds,
        })
    }

    /// Graphviz rendering; multiple bonds point from the long to the short root.
    pub fn to_dot(&self, rs: &RootSystem) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", rs.label());
        let _ = writeln!(s, "  node [shape=circle];");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(
                s,
                "  a{i} [label=\"{}\", xlabel=\"α{}\"];",
                crate::rational::display_q(l),
                i + 1
            );
        }
        for (i, j, m, long_to_short) in bonds(rs) {
            let (a, b) = if long_to_short == Some(false) {
                (j, i)
            } else {
                (i, j)
            };
            let dir = if long_to_short.is_some() {
                ", dir=forward"
            } else {
                ""
            };
            let _ = writeln!(s, "  a{a} -- a{b} [label=\"{m}\"{dir}];");
        }
        s.push_str("}\n");
        s
    }
}

/// Edges `(i, j, multiplicity, long_to_short)` of the Dynkin diagram with
/// `i < j`. The flag is `Some(true)` when `α_i` is the longer root of a
/// multiple bond, `Some(false)` when `α_j` is, `None` for simple bonds.
pub fn bonds(rs: &RootSystem) -> Vec<(usize, usize, u32, Option<bool>)> {
    let n = rs.simple.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (rs.simple_root(i), rs.simple_root(j));
            let ab = dot(a, b);
            if ab.is_zero() {
                continue;
            }
            let (na, nb) = (dot(a, a), dot(b, b));
            let m = q(4) * &ab * &ab / (&na * &nb);
            let m = m.to_integer().to_u32().unwrap_or(0);
            let arrow = if na == nb { None } else { Some(na > nb) };
            out.push((i, j, m, arrow));
        }
    }
    out
}

/// The common parameter value, or a domain error for unequal parameters.
fn equal_value(k: &ParameterFunction) -> Result<Q> {
    if !k.is_equal() {
        return Err(Error::Domain(
            "weighted Dynkin diagrams are only defined for equal parameters".into(),
        ));
    }
    Ok(k.values.first().cloned().unwrap_or_else(Q::zero))
}

/// `α_i(v_dom)` without any normalization.
pub fn raw_labels(rs: &RootSystem, v: &[Q]) -> Vec<Q> {
    let (dom, _) = rs.dominant_representative(v);
    (0..rs.simple.len())
        .map(|i| dot(rs.simple_root(i), &dom))
        .collect()
}

/// The weighted diagram of `center` for the equal parameter `k`, rescaled to
/// `k ≡ 2` and read off the dominant representative.
pub fn weighted_diagram(
    rs: &RootSystem,
    k: &ParameterFunction,
    center: &[Q],
) -> Result<WeightedDiagram> {
    let c = equal_value(k)?;
    let normalized = if c.is_zero() {
        if center.iter().any(|x| !x.is_zero()) {
            return Err(Error::Domain(
                "at k = 0 only the origin is residual; cannot normalize".into(),
            ));
        }
        center.to_vec()
    } else {
        scale(&(q(2) / c), center)
    };
    let (dom, _) = rs.dominant_representative(&normalized);
    let labels = (0..rs.simple.len())
        .map(|i| dot(rs.simple_root(i), &dom))
        .collect();
    Ok(WeightedDiagram {
        labels,
        source: dom,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub distinguished: usize,
    pub nilpotent: usize,
    pub source: String,
}

const FIXTURE: &str = include_str!("../fixtures/bala_carter.json");

pub fn fixture() -> BTreeMap<String, FixtureEntry> {
    serde_json::from_str(FIXTURE).expect("bundled fixture is valid JSON")
}

/// Expected `(distinguished, nilpotent)` for a type. Products multiply,
/// since both orbit sets are products over the factors.
pub fn expected_counts(rs: &RootSystem) -> Result<(usize, usize)> {
    let table = fixture();
    let mut d = 1;
    let mut n = 1;
    for f in &rs.cartan.0 {
        let e = table
            .get(&f.to_string())
            .ok_or_else(|| Error::Config(format!("no Bala-Carter fixture entry for {f}")))?;
        d *= e.distinguished;
        n *= e.nilpotent;
    }
    Ok((d, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalaCarterReport {
    #[serde(rename = "type")]
    pub type_label: String,
    pub distinguished_expected: usize,
    pub nilpotent_expected: usize,
    pub distinguished_found: usize,
    pub total_orbits_found: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Point-orbit diagrams, e.g. `"(2,0,2)"`, in table order.
    pub diagrams: Vec<String>,
    /// Diagrams with a label outside `{0, 2}`, or shared by two point orbits.
    /// Reported rather than treated as failures.
    pub findings: Vec<String>,
}

pub fn bala_carter_counts(rs: &RootSystem, table: &OrbitTable) -> Result<BalaCarterReport> {
    let (distinguished_expected, nilpotent_expected) = expected_counts(rs)?;
    let diagrams = point_diagrams(rs, table)?;
    let mut findings = Vec::new();
    let mut seen = BTreeSet::new();
    for d in &diagrams {
        if !d.is_even() {
            findings.push(format!(
                "diagram {} has a label outside {{0, 2}}",
                d.labels_string()
            ));
        }
        if !seen.insert(d.labels.clone()) {
            findings.push(format!(
                "diagram {} occurs for two point orbits",
                d.labels_string()
            ));
        }
    }
    let distinguished_found = diagrams.len();
    let total_orbits_found = table.orbits.len();
    Ok(BalaCarterReport {
        type_label: rs.label(),
        distinguished_expected,
        nilpotent_expected,
        distinguished_found,
        total_orbits_found,
        matches: distinguished_found == distinguished_expected
            && total_orbits_found == nilpotent_expected,
        diagrams: diagrams
            .iter()
            .map(WeightedDiagram::labels_string)
            .collect(),
        findings,
    })
}

/// Diagrams of the point orbits of an equal-parameter table.
pub fn point_diagrams(rs: &RootSystem, table: &OrbitTable) -> Result<Vec<WeightedDiagram>> {
    table
        .point_orbits()
        .map(|o| {
            weighted_diagram(
                rs,
                &table.params,
                table.cosets[o.representative].flat.center(),
            )
        })
        .collect()
}

/// Regular-orbit check: `ρ∨`-type point with every label equal to 2.
pub fn is_regular(d: &WeightedDiagram) -> bool {
    let two = q(2);
    d.labels.iter().all(|l| *l == two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;
    use crate::residual::enumerate_residual;

    fn rs(label: &str) -> RootSystem {
        RootSystem::from_label(label).unwrap()
    }

    #[test]
    fn a2_regular_point() {
        let r = rs("A2");
        let k = ParameterFunction::equal(&r, q(2));
        let d = weighted_diagram(&r, &k, &qvec(&[2, 0, -2])).unwrap();
        assert_eq!(d.labels, vec![q(2), q(2)]);
        assert!(is_regular(&d));
    }

    #[test]
    fn origin_is_zero_diagram() {
        for label in ["A3", "B2", "G2", "F4"] {
            let r = rs(label);
            let k = ParameterFunction::equal(&r, q(1));
            let d = weighted_diagram(&r, &k, &vec![Q::zero(); r.ambient_dim]).unwrap();
            assert!(d.is_zero(), "{label}");
        }
    }

    #[test]
    fn b2_scaled_point() {
        let r = rs("B2");
        let k = ParameterFunction::equal(&r, q(2));
        let d = weighted_diagram(&r, &k, &qvec(&[4, 2])).unwrap();
        assert_eq!(d.labels, vec![q(2), q(2)]);
        // Same point at k = 1 normalizes to the same diagram.
        let k1 = ParameterFunction::equal(&r, q(1));
        assert_eq!(weighted_diagram(&r, &k1, &qvec(&[2, 1])).unwrap(), d);
    }

    #[test]
    fn unequal_parameters_rejected() {
        let r = rs("B2");
        let k = ParameterFunction::parse(&r, "long=1,short=2").unwrap();
        assert!(matches!(
            weighted_diagram(&r, &k, &qvec(&[0, 0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn constant_on_orbits() {
        let r = rs("B2");
        let k = ParameterFunction::equal(&r, q(1));
        let base = weighted_diagram(&r, &k, &qvec(&[2, 1])).unwrap();
        for p in r.orbit(&qvec(&[2, 1]), 100).unwrap() {
            assert_eq!(weighted_diagram(&r, &k, &p).unwrap(), base);
        }
    }

    #[test]
    fn doubling_k_doubles_raw_labels() {
        for label in ["A3", "B3", "C3", "G2"] {
            let r = rs(label);
            let t1 = enumerate_residual(&r, &ParameterFunction::equal(&r, q(1))).unwrap();
            let t2 = enumerate_residual(&r, &ParameterFunction::equal(&r, q(2))).unwrap();
            let mut l1: Vec<Vec<Q>> = t1
                .point_orbits()
                .map(|o| {
                    raw_labels(&r, t1.cosets[o.representative].flat.center())
                        .iter()
                        .map(|x| x * q(2))
                        .collect()
                })
                .collect();
            let mut l2: Vec<Vec<Q>> = t2
                .point_orbits()
                .map(|o| raw_labels(&r, t2.cosets[o.representative].flat.center()))
                .collect();
            l1.sort();
            l2.sort();
            assert_eq!(l1, l2, "{label}");
        }
    }

    #[test]
    fn counts_match_fixture_small_types() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "A2xA1"] {
            let r = rs(label);
            let t = enumerate_residual(&r, &ParameterFunction::equal(&r, q(2))).unwrap();
            let rep = bala_carter_counts(&r, &t).unwrap();
            assert!(rep.matches, "{label}: {rep:?}");
            assert!(rep.findings.is_empty(), "{label}: {:?}", rep.findings);
        }
    }

    #[test]
    fn g2_diagrams() {
        let r = rs("G2");
        let t = enumerate_residual(&r, &ParameterFunction::equal(&r, q(2))).unwrap();
        let mut ds = bala_carter_counts(&r, &t).unwrap().diagrams;
        ds.sort();
        assert_eq!(ds, vec!["(0,2)", "(2,2)"]);
    }

    #[test]
    fn dot_has_triple_bond_for_g2() {
        let r = rs("G2");
        let d =
            weighted_diagram(&r, &ParameterFunction::equal(&r, q(2)), &[q(0), q(0), q(0)]).unwrap();
        let dot = d.to_dot(&r);
        assert!(dot.contains("label=\"3\", dir=forward"), "{dot}");
    }

    // Classical fixture entries, re-derived from partitions.
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for k in (1..=n.min(max)).rev() {
            for mut p in partitions(n - k, k) {
                p.insert(0, k);
                out.push(p);
            }
        }
        out
    }

    fn classical(n: usize, bad_parity: usize, very_even_twice: bool) -> (usize, usize) {
        let (mut dist, mut total) = (0, 0);
        for p in partitions(n, n) {
            let mut mult = BTreeMap::new();
            for &x in &p {
                *mult.entry(x).or_insert(0usize) += 1;
            }
            if mult.iter().any(|(x, m)| x % 2 == bad_parity && m % 2 == 1) {
                continue;
            }
            total += if very_even_twice && mult.keys().all(|x| x % 2 == 0) {
                2
            } else {
                1
            };
            if mult.values().all(|&m| m == 1) {
                dist += 1;
            }
        }
        (dist, total)
    }

    #[test]
    fn fixture_matches_partition_counts() {
        let f = fixture();
        let get = |k: &str| (f[k].distinguished, f[k].nilpotent);
        for n in 1..=8 {
            assert_eq!(get(&format!("A{n}")), (1, partitions(n + 1, n + 1).len()));
        }
        for n in 2..=8 {
            assert_eq!(get(&format!("B{n}")), classical(2 * n + 1, 0, false));
            assert_eq!(get(&format!("C{n}")), classical(2 * n, 1, false));
        }
        for n in 4..=8 {
            assert_eq!(get(&format!("D{n}")), classical(2 * n, 0, true));
        }
    }

    #[test]
    fn missing_fixture_is_config_error() {
        let r = rs("B2");
        let mut fake = r.clone();
        fake.cartan.0[0].rank = 9;
        assert!(matches!(expected_counts(&fake), Err(Error::Config(_))));
    }
}
