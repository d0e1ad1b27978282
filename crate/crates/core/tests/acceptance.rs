//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use residual_core::io::TableRecord;
use residual_core::oracle::{brute_force_flats, diff_flats};
use residual_core::plancherel1::{
    cross_check_support, decompose, exact_point_mass, trace_of_one, TOL,
};
use residual_core::rational::{fmt_q, frac, q, to_f64, Q};
use residual_core::residual::{enumerate_residual, verify_with, Check, OrbitTable, VerifyOptions};
use residual_core::{ParameterFunction, RootSystem};

struct Run {
    rs: RootSystem,
    k: ParameterFunction,
    table: OrbitTable,
}

impl Run {
    fn name(&self) -> String {
        let ks: Vec<String> = self.k.values.iter().map(fmt_q).collect();
        format!("{}[{}]", self.rs.label(), ks.join(","))
    }
}

fn grid() -> Vec<(RootSystem, ParameterFunction)> {
    let mut out = Vec::new();
    for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1"] {
        let rs = RootSystem::from_label(label).unwrap();
        out.push((rs.clone(), ParameterFunction::equal(&rs, q(1))));
        if rs.classes.len() == 2 {
            for r in [frac(1, 3), frac(1, 2), q(1), q(2), q(3)] {
                let k = ParameterFunction::from_ratio(&rs, &r);
                if !out
                    .iter()
                    .any(|(s, kk)| s.label() == rs.label() && *kk == k)
                {
                    out.push((rs.clone(), k));
                }
            }
        }
    }
    out
}

fn enumerate_grid() -> Vec<Run> {
    grid()
        .into_iter()
        .map(|(rs, k)| {
            let table = enumerate_residual(&rs, &k).unwrap();
            Run { rs, k, table }
        })
        .collect()
}

fn grid_bytes() -> String {
    enumerate_grid()
        .iter()
        .map(|r| TableRecord::from_table(&r.rs, &r.table).to_json().unwrap())
        .collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn report(n: usize, title: &str, o: &Outcome) {
    println!(
        "criterion {n}: {} — {title}: {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.detail
    );
}

fn check_runs(runs: &[&Run], checks: &[Check]) -> (usize, usize, Vec<String>) {
    let mut examined = 0;
    let mut bad = 0;
    let mut notes = Vec::new();
    for r in runs {
        let mut opts = VerifyOptions::for_system(&r.rs);
        opts.checks = checks.to_vec();
        let rep = verify_with(&r.rs, &r.k, &r.table, &opts);
        for c in &rep.checks {
            examined += c.examined;
            bad += c.counterexamples.len();
            if !c.passed {
                notes.push(format!("{} {}", r.name(), c.check));
            }
        }
    }
    (examined, bad, notes)
}

fn main() {
    let mut all = true;
    let mut record = |n: usize, title: &str, o: Outcome| {
        all &= o.passed;
        report(n, title, &o);
    };

    // 1. Enumerator against the brute-force oracle.
    let t0 = Instant::now();
    let runs = enumerate_grid();
    let mut mismatches = Vec::new();
    for r in &runs {
        match brute_force_flats(&r.rs, &r.k, r.rs.dim()) {
            Ok(flats) => {
                let d = diff_flats(r.table.flats(), &flats);
                if !d.is_empty() {
                    mismatches.push(format!(
                        "{} (+{} -{})",
                        r.name(),
                        d.only_left.len(),
                        d.only_right.len()
                    ));
                }
            }
            Err(e) => mismatches.push(format!("{}: {e}", r.name())),
        }
    }
    let elapsed = t0.elapsed();
    record(
        1,
        "enumerator equals oracle",
        Outcome {
            passed: mismatches.is_empty() && elapsed < Duration::from_secs(60),
            detail: format!(
                "{} configurations, {} mismatches{}, {:.1}s",
                runs.len(),
                mismatches.len(),
                if mismatches.is_empty() {
                    String::new()
                } else {
                    format!(" {mismatches:?}")
                },
                elapsed.as_secs_f64()
            ),
        },
    );

    // 2. o_L ≤ 0 on the whole lattice; finitely many residual points.
    let grid_refs: Vec<&Run> = runs.iter().collect();
    let (examined, bad, notes) = check_runs(&grid_refs, &[Check::T1a, Check::T1b]);
    let points: usize = runs
        .iter()
        .map(|r| r.table.cosets.iter().filter(|c| c.flat.dim() == 0).count())
        .sum();
    record(
        2,
        "lattice bound o_L <= 0",
        Outcome {
            passed: bad == 0,
            detail: format!("{examined} flats and points examined, {bad} counterexamples, {points} residual points in total {notes:?}"),
        },
    );

    // F4 at equal parameters joins the grid for criteria 3-5.
    let f4 = RootSystem::from_label("F4").unwrap();
    let f4k = ParameterFunction::equal(&f4, q(1));
    let f4_start = Instant::now();
    let f4_table = enumerate_residual(&f4, &f4k).unwrap();
    let f4_time = f4_start.elapsed();
    let f4_run = Run {
        rs: f4.clone(),
        k: f4k.clone(),
        table: f4_table,
    };
    let mut with_f4 = grid_refs.clone();
    with_f4.push(&f4_run);

    let (examined, bad, notes) = check_runs(&with_f4, &[Check::T2]);
    record(
        3,
        "-v lies in W0 v for residual points",
        Outcome {
            passed: bad == 0,
            detail: format!("{examined} points, {bad} counterexamples {notes:?}"),
        },
    );

    let (examined, bad, notes) = check_runs(&with_f4, &[Check::T3]);
    record(
        4,
        "centers of positive-dimensional residual flats have o < 0",
        Outcome {
            passed: bad == 0,
            detail: format!("{examined} flats, {bad} counterexamples {notes:?}"),
        },
    );

    let (examined, bad, notes) = check_runs(&with_f4, &[Check::T5B, Check::L41]);
    record(
        5,
        "o_L = 0 on the table; points lie on residual lines",
        Outcome {
            passed: bad == 0,
            detail: format!("{examined} items, {bad} counterexamples {notes:?}"),
        },
    );

    // 6. Equal-parameter orbit counts.
    let counts = |t: &OrbitTable| (t.point_orbits().count(), t.orbits.len());
    let mut failures = Vec::new();
    for (label, expected) in [
        ("A2", (1, 3)),
        ("B2", (1, 4)),
        ("G2", (2, 5)),
        ("A3", (1, 5)),
    ] {
        let r = runs
            .iter()
            .find(|r| r.rs.label() == label && r.k.values.iter().all(|v| *v == q(1)))
            .unwrap();
        let got = counts(&r.table);
        if got != expected {
            failures.push(format!("{label}: {got:?} != {expected:?}"));
        }
    }
    let f4_first = counts(&f4_run.table);
    let f4_second = counts(&enumerate_residual(&f4, &f4k).unwrap());
    if f4_first != f4_second {
        failures.push(format!("F4 unstable: {f4_first:?} vs {f4_second:?}"));
    }
    match brute_force_flats(&f4, &f4k, f4.dim()) {
        Ok(flats) => {
            let d = diff_flats(f4_run.table.flats(), &flats);
            if !d.is_empty() {
                failures.push(format!(
                    "F4 differs from oracle (+{} -{})",
                    d.only_left.len(),
                    d.only_right.len()
                ));
            }
        }
        Err(e) => failures.push(format!("F4 oracle: {e}")),
    }
    if f4_time >= Duration::from_secs(600) {
        failures.push(format!("F4 took {:.0}s", f4_time.as_secs_f64()));
    }
    record(
        6,
        "equal-parameter orbit counts",
        Outcome {
            passed: failures.is_empty(),
            detail: format!(
                "A2 (1,3), B2 (1,4), G2 (2,5), A3 (1,5); F4 {:?} twice, {} flats equal to oracle, enumerated in {:.1}s {failures:?}",
                f4_first,
                f4_run.table.cosets.len(),
                f4_time.as_secs_f64()
            ),
        },
    );

    // 7. Rank one Plancherel decomposition.
    let mut failures = Vec::new();
    let qs = [frac(1, 3), frac(1, 2), q(1), q(2), q(3), q(10)];
    for qv in &qs {
        let qf = to_f64(qv);
        let bound = 1f64.min(qf).min(1.0 / qf);
        for f in [0.2, 0.5, 0.8] {
            match trace_of_one(qv, bound * f) {
                Ok(v) if (v - 1.0).abs() < TOL => {}
                other => failures.push(format!("trace q={} p={}: {other:?}", fmt_q(qv), bound * f)),
            }
        }
        let spectrum = match decompose(qv) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("decompose q={}: {e}", fmt_q(qv)));
                continue;
            }
        };
        let one = Q::from_integer(1.into());
        let closed = if *qv > one {
            Some(to_f64(&((qv - &one) / (qv + &one))))
        } else if *qv < one {
            Some(to_f64(&((&one - qv) / (&one + qv))))
        } else {
            None
        };
        let symbolic = exact_point_mass(qv).unwrap().map(|(_, _, m)| to_f64(&m));
        let numeric = spectrum.point_masses.first().map(|m| m.mass);
        let agree = match (closed, symbolic, numeric) {
            (None, None, None) => true,
            (Some(c), Some(s), Some(n)) => (c - s).abs() < TOL && (s - n).abs() < TOL,
            _ => false,
        };
        if !agree {
            failures.push(format!(
                "mass q={}: closed {closed:?} symbolic {symbolic:?} numeric {numeric:?}",
                fmt_q(qv)
            ));
        }
        if (spectrum.total - 1.0).abs() >= TOL {
            failures.push(format!("total q={}: {}", fmt_q(qv), spectrum.total));
        }
        if spectrum.density.len() < 1 << 10 || spectrum.density.iter().any(|(_, v)| *v < 0.0) {
            failures.push(format!("density q={}", fmt_q(qv)));
        }
    }
    let a1 = RootSystem::from_label("A1").unwrap();
    for (qv, k) in [(frac(1, 2), q(-1)), (q(1), q(0)), (q(2), q(1))] {
        let t = enumerate_residual(&a1, &ParameterFunction::equal(&a1, k)).unwrap();
        if !cross_check_support(&qv, &t).unwrap_or(false) {
            failures.push(format!("support q={}", fmt_q(&qv)));
        }
    }
    record(
        7,
        "rank one Plancherel decomposition",
        Outcome {
            passed: failures.is_empty(),
            detail: format!(
                "{} values of q, 3 radii each, 1024 density samples, support for q in {{1/2, 1, 2}} {failures:?}",
                qs.len()
            ),
        },
    );

    // 8. Determinism across runs and thread counts.
    let pool = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
    };
    let first = pool(1).install(grid_bytes);
    let second = pool(1).install(grid_bytes);
    let four = pool(4).install(grid_bytes);
    let distinct: BTreeSet<&String> = [&first, &second, &four].into_iter().collect();
    record(
        8,
        "byte-identical output across runs and thread counts",
        Outcome {
            passed: distinct.len() == 1 && !first.is_empty(),
            detail: format!(
                "{} bytes, threads 1, 1, 4: {} distinct outputs",
                first.len(),
                distinct.len()
            ),
        },
    );

    if !all {
        std::process::exit(1);
    }
}
