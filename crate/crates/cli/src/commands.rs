use std::fmt::Write as _;
use std::fs;

use serde::Serialize;
use serde_json::json;

use residual_core::dynkin::{bala_carter_counts, point_diagrams};
use residual_core::io::{params_record, FlatSetRecord, ResultCache, TableRecord, SCHEMA_VERSION};
use residual_core::oracle::{brute_force_flats, diff_flats};
use residual_core::plancherel1::decompose;
use residual_core::rational::{fmt_q, parse_fraction, parse_q, Q};
use residual_core::residual::{
    enumerate_residual_with, scan_parameters, verify_with, Check, EnumerationConfig, OrbitTable,
    VerifyOptions,
};
use residual_core::{Error, ParameterFunction, Result, RootSystem};

use crate::{
    DiffOracleArgs, DynkinArgs, EnumerateArgs, Format, OutputArgs, PlancherelArgs, ScanArgs,
    SystemArgs, VerifyArgs,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 3;

pub fn exit_code(e: &Error) -> u8 {
    if e.is_resource() {
        2
    } else if matches!(e, Error::Verification(_)) {
        3
    } else {
        1
    }
}

fn emit(out: &OutputArgs, body: &str) -> Result<()> {
    match &out.out {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn json_string<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn unsupported(fmt: Format, cmd: &str) -> Error {
    Error::Config(format!("format {fmt:?} is not available for {cmd}").to_lowercase())
}

/// Validates the type before anything else, then the parameters.
fn load_system(a: &SystemArgs) -> Result<(RootSystem, ParameterFunction)> {
    let rs = RootSystem::from_label(&a.type_label)?;
    let params = a.params.as_deref().ok_or_else(|| {
        let classes: Vec<&str> = rs.classes.iter().map(|c| c.id.as_str()).collect();
        Error::Config(format!(
            "--params is required; {} has length classes {}",
            rs.label(),
            classes.join(", ")
        ))
    })?;
    let k = ParameterFunction::parse(&rs, params)?;
    Ok((rs, k))
}

fn enumeration_config(a: &SystemArgs) -> EnumerationConfig {
    let mut c = EnumerationConfig::default();
    if let Some(m) = a.max_flats {
        c.max_flats = m;
    }
    c
}

fn enumerate_table(a: &SystemArgs, rs: &RootSystem, k: &ParameterFunction) -> Result<OrbitTable> {
    enumerate_residual_with(rs, k, &enumeration_config(a))
}

pub fn enumerate(a: &EnumerateArgs) -> Result<u8> {
    let (rs, k) = load_system(&a.system)?;
    let cache = ResultCache::resolve(a.cache_dir.as_deref());
    let record = match cache.as_ref().and_then(|c| c.load(&rs, &k)) {
        Some(r) => r,
        None => {
            let table = enumerate_table(&a.system, &rs, &k)?;
            let r = TableRecord::from_table(&rs, &table);
            if let Some(c) = &cache {
                c.store(&rs, &k, &r)?;
            }
            r
        }
    };
    let body = match a.output.format {
        Format::Json => record.to_json()?,
        Format::Csv => record.to_csv()?,
        Format::Text => record.to_text(),
        f => return Err(unsupported(f, "enumerate")),
    };
    emit(&a.output, &body)?;
    Ok(EXIT_OK)
}

fn parse_checks(s: &str) -> Result<Vec<Check>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(Check::parse)
        .collect()
}

pub fn verify(a: &VerifyArgs) -> Result<u8> {
    let (rs, k) = load_system(&a.system)?;
    let mut opts = VerifyOptions::for_system(&rs);
    if let Some(c) = &a.checks {
        opts.checks = parse_checks(c)?;
    }
    let table = enumerate_table(&a.system, &rs, &k)?;
    let report = verify_with(&rs, &k, &table, &opts);

    let oracle = if a.oracle {
        let flats = brute_force_flats(&rs, &k, rs.dim())?;
        let diff = diff_flats(table.flats(), &flats);
        Some(json!({
            "enumerator_flats": table.cosets.len(),
            "oracle_flats": flats.len(),
            "identical": diff.is_empty(),
            "only_enumerator": FlatSetRecord::new(&rs, &k, &diff.only_left).flats,
            "only_oracle": FlatSetRecord::new(&rs, &k, &diff.only_right).flats,
        }))
    } else {
        None
    };
    let oracle_ok = oracle
        .as_ref()
        .is_none_or(|o| o["identical"].as_bool() == Some(true));
    let passed = report.all_passed() && oracle_ok;

    let body = match a.output.format {
        Format::Json => {
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "type": rs.label(),
                "params": params_record(&rs, &k),
                "all_passed": passed,
                "checks": report.checks,
            });
            if let Some(o) = oracle {
                v["oracle"] = o;
            }
            json_string(&v)?
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{} with {}", rs.label(), fmt_params(&rs, &k));
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "{:<8} {}  ({} examined, {} counterexamples)",
                    c.check,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.examined,
                    c.counterexamples.len()
                );
                for x in &c.counterexamples {
                    let _ = writeln!(s, "         {}", x.description);
                }
            }
            if let Some(o) = &oracle {
                let _ = writeln!(
                    s,
                    "ORACLE   {}  ({} enumerated, {} brute force)",
                    if o["identical"].as_bool() == Some(true) {
                        "PASS"
                    } else {
                        "FAIL"
                    },
                    o["enumerator_flats"],
                    o["oracle_flats"]
                );
            }
            s
        }
        f => return Err(unsupported(f, "verify")),
    };
    emit(&a.output, &body)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}

fn fmt_params(rs: &RootSystem, k: &ParameterFunction) -> String {
    params_record(rs, k)
        .iter()
        .map(|(c, v)| format!("{c}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn scan(a: &ScanArgs) -> Result<u8> {
    let rs = RootSystem::from_label(&a.type_label)?;
    let ratios: Vec<Q> = a
        .ratios
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_fraction)
        .collect::<Result<_>>()?;
    if ratios.is_empty() {
        return Err(Error::Config("--ratios needs at least one value".into()));
    }
    let report = scan_parameters(&rs, &ratios)?;
    let body = match a.output.format {
        Format::Json => json_string(&json!({
            "schema_version": SCHEMA_VERSION,
            "type": report.label,
            "rows": report.rows,
            "walls": report.walls,
            "changes": report.changes,
        }))?,
        Format::Csv => {
            let mut s = String::from("schema_version,type,ratio,total");
            for d in 0..=rs.dim() {
                let _ = write!(s, ",dim{d}");
            }
            s.push('\n');
            for r in &report.rows {
                let _ = write!(
                    s,
                    "{SCHEMA_VERSION},{},{},{}",
                    report.label, r.ratio, r.total
                );
                for c in &r.counts_by_dim {
                    let _ = write!(s, ",{c}");
                }
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} orbit counts by ratio\n", report.label);
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{:>8}  total {:>4}  by dim {:?}",
                    r.ratio, r.total, r.counts_by_dim
                );
            }
            let walls: Vec<String> = report
                .changes
                .iter()
                .map(|(a, b)| format!("({a}, {b})"))
                .collect();
            let _ = writeln!(
                s,
                "changes between {}",
                if walls.is_empty() {
                    "-".into()
                } else {
                    walls.join(" ")
                }
            );
            s
        }
        f => return Err(unsupported(f, "scan")),
    };
    emit(&a.output, &body)?;
    Ok(EXIT_OK)
}

pub fn dynkin(a: &DynkinArgs) -> Result<u8> {
    let rs = RootSystem::from_label(&a.type_label)?;
    let k = ParameterFunction::equal(&rs, Q::from_integer(2.into()));
    let table = enumerate_residual_with(&rs, &k, &EnumerationConfig::default())?;
    let counts = bala_carter_counts(&rs, &table)?;
    let diagrams = point_diagrams(&rs, &table)?;
    let body = match a.output.format {
        Format::Json => json_string(&json!({
            "schema_version": SCHEMA_VERSION,
            "type": rs.label(),
            "params": params_record(&rs, &k),
            "counts": counts,
            "diagrams": diagrams.iter().map(|d| d.to_json(&rs)).collect::<Vec<_>>(),
        }))?,
        Format::Dot => diagrams.iter().map(|d| d.to_dot(&rs)).collect(),
        Format::Text => {
            let mut s = format!("{} at k = 2\n", rs.label());
            for d in &diagrams {
                let _ = writeln!(s, "diagram {}", d.labels_string());
            }
            let _ = writeln!(
                s,
                "counts ({},{}) expected ({},{}) {}",
                counts.distinguished_found,
                counts.total_orbits_found,
                counts.distinguished_expected,
                counts.nilpotent_expected,
                if counts.matches { "match" } else { "MISMATCH" }
            );
            for f in &counts.findings {
                let _ = writeln!(s, "finding: {f}");
            }
            s
        }
        f => return Err(unsupported(f, "dynkin")),
    };
    emit(&a.output, &body)?;
    Ok(if counts.matches { EXIT_OK } else { EXIT_VERIFY })
}

pub fn plancherel(a: &PlancherelArgs) -> Result<u8> {
    let qv = parse_q(&a.q)?;
    let spectrum = decompose(&qv)?;
    if let Some(p) = &a.csv {
        fs::write(p, spectrum.to_csv())?;
    }
    let body = match a.output.format {
        Format::Json => json_string(&json!({
            "schema_version": SCHEMA_VERSION,
            "q": spectrum.q,
            "point_masses": spectrum.point_masses,
            "continuous_total": spectrum.continuous_total,
            "density": spectrum.density,
            "total": spectrum.total,
        }))?,
        Format::Csv => spectrum.to_csv(),
        Format::Text => {
            let mut s = format!("q = {}\n", fmt_q(&qv));
            for m in &spectrum.point_masses {
                let _ = writeln!(
                    s,
                    "point mass at t = {}: {} (exact {})",
                    m.t, m.mass, m.exact
                );
            }
            let _ = writeln!(s, "continuous part: {}", spectrum.continuous_total);
            let _ = writeln!(s, "total: {}", spectrum.total);
            s
        }
        f => return Err(unsupported(f, "plancherel")),
    };
    emit(&a.output, &body)?;
    Ok(EXIT_OK)
}

pub fn diff_oracle(a: &DiffOracleArgs) -> Result<u8> {
    let (rs, k) = load_system(&a.system)?;
    let table = enumerate_table(&a.system, &rs, &k)?;
    let flats = brute_force_flats(&rs, &k, rs.dim())?;
    let diff = diff_flats(table.flats(), &flats);
    let body = match a.output.format {
        Format::Json => json_string(&json!({
            "schema_version": SCHEMA_VERSION,
            "type": rs.label(),
            "params": params_record(&rs, &k),
            "enumerator_flats": table.cosets.len(),
            "oracle_flats": flats.len(),
            "identical": diff.is_empty(),
            "only_enumerator": FlatSetRecord::new(&rs, &k, &diff.only_left).flats,
            "only_oracle": FlatSetRecord::new(&rs, &k, &diff.only_right).flats,
        }))?,
        Format::Text => format!(
            "{} with {}: {} enumerated, {} brute force, {} only enumerated, {} only brute force\n",
            rs.label(),
            fmt_params(&rs, &k),
            table.cosets.len(),
            flats.len(),
            diff.only_left.len(),
            diff.only_right.len()
        ),
        f => return Err(unsupported(f, "diff-oracle")),
    };
    emit(&a.output, &body)?;
    Ok(if diff.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}
