//! Serialized forms of orbit tables and flats, and an on-disk result cache.
//!
//! Every file written carries `schema_version`. Rationals are `"p/q"`
//! strings with an explicit denominator, so records round-trip exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arrangement::{order_flat, AffineFlat};
use crate::error::{Error, Result};
use crate::rational::{display_vec, fmt_q, fmt_vec, Q};
use crate::residual::OrbitTable;
use crate::rootsys::{ParameterFunction, RootSystem};

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "RESIDUAL_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub dim: usize,
    pub i: i64,
    pub o: i64,
    pub center: Vec<String>,
    pub direction_basis: Vec<Vec<String>>,
    pub orbit_size: usize,
    pub parabolic_type: String,
    pub witness_chain_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub params: BTreeMap<String, String>,
    pub flat_count: usize,
    pub orbits: Vec<OrbitRecord>,
}

pub fn params_record(rs: &RootSystem, k: &ParameterFunction) -> BTreeMap<String, String> {
    k.as_map(rs)
        .iter()
        .map(|(c, v)| (c.clone(), fmt_q(v)))
        .collect()
}

impl TableRecord {
    pub fn from_table(rs: &RootSystem, table: &OrbitTable) -> Self {
        let orbits = table
            .orbits
            .iter()
            .map(|o| {
                let rep = &table.cosets[o.representative];
                OrbitRecord {
                    dim: o.dim,
                    i: rep.report.i,
                    o: rep.report.o,
                    center: fmt_vec(rep.flat.center()),
                    direction_basis: rep.flat.direction().iter().map(|d| fmt_vec(d)).collect(),
                    orbit_size: o.orbit_size(),
                    parabolic_type: rep.flat.parabolic(rs).cartan_label(rs),
                    witness_chain_dims: table
                        .witness_chain(o.representative)
                        .iter()
                        .map(|f| f.dim())
                        .collect(),
                }
            })
            .collect();
        TableRecord {
            schema_version: SCHEMA_VERSION,
            type_label: rs.label(),
            rank: rs.rank(),
            params: params_record(rs, &table.params),
            flat_count: table.cosets.len(),
            orbits,
        }
    }

    pub fn point_orbits(&self) -> usize {
        self.orbits.iter().filter(|o| o.dim == 0).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: TableRecord = serde_json::from_str(s)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }

    /// One row per orbit; vectors as space-separated `p/q`, bases joined by `;`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "schema_version",
            "type",
            "params",
            "dim",
            "i",
            "o",
            "orbit_size",
            "parabolic_type",
            "center",
            "direction_basis",
            "witness_chain_dims",
        ])
        .map_err(csv_err)?;
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        for o in &self.orbits {
            w.write_record([
                self.schema_version.to_string(),
                self.type_label.clone(),
                params.clone(),
                o.dim.to_string(),
                o.i.to_string(),
                o.o.to_string(),
                o.orbit_size.to_string(),
                o.parabolic_type.clone(),
                o.center.join(" "),
                o.direction_basis
                    .iter()
                    .map(|b| b.join(" "))
                    .collect::<Vec<_>>()
                    .join(";"),
                o.witness_chain_dims
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(s, "{} (rank {}), k: {}", self.type_label, self.rank, params);
        let _ = writeln!(
            s,
            "{} residual flats in {} orbits ({} point orbits)",
            self.flat_count,
            self.orbits.len(),
            self.point_orbits()
        );
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:>6} {:>10}  {:<10} center",
            "dim", "i", "o", "size", "R_L"
        );
        for o in &self.orbits {
            let ty = if o.parabolic_type.is_empty() {
                "-"
            } else {
                &o.parabolic_type
            };
            let _ = writeln!(
                s,
                "{:>4} {:>4} {:>6} {:>10}  {:<10} ({})",
                o.dim,
                o.i,
                o.o,
                o.orbit_size,
                ty,
                o.center.join(", ")
            );
        }
        s
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// A single flat: canonical equations `[a₁ … a_n | c]` meaning `a·v = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatRecord {
    pub equations: Vec<Vec<String>>,
    pub center: Vec<String>,
    pub dim: usize,
    pub i: i64,
    pub o: i64,
}

impl FlatRecord {
    pub fn new(rs: &RootSystem, k: &ParameterFunction, flat: &AffineFlat) -> Self {
        let rep = order_flat(rs, k, flat);
        FlatRecord {
            equations: flat.equations().iter().map(|e| fmt_vec(e)).collect(),
            center: fmt_vec(flat.center()),
            dim: flat.dim(),
            i: rep.i,
            o: rep.o,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatSetRecord {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub type_label: String,
    pub params: BTreeMap<String, String>,
    pub flats: Vec<FlatRecord>,
}

impl FlatSetRecord {
    pub fn new<'a>(
        rs: &RootSystem,
        k: &ParameterFunction,
        flats: impl IntoIterator<Item = &'a AffineFlat>,
    ) -> Self {
        let mut sorted: Vec<&AffineFlat> = flats.into_iter().collect();
        sorted.sort();
        FlatSetRecord {
            schema_version: SCHEMA_VERSION,
            type_label: rs.label(),
            params: params_record(rs, k),
            flats: sorted
                .into_iter()
                .map(|f| FlatRecord::new(rs, k, f))
                .collect(),
        }
    }
}

/// One-line summary of a flat for human-readable reports.
pub fn describe_flat(flat: &AffineFlat) -> String {
    format!("dim {} through {}", flat.dim(), display_vec(flat.center()))
}

/// Cached [`TableRecord`]s, one JSON file per `(type, rank, params)`.
#[derive(Clone, Debug)]
pub struct ResultCache {
    pub dir: PathBuf,
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResultCache { dir: dir.into() }
    }

    /// `explicit`, else the directory named by [`CACHE_DIR_ENV`], else none.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .map(ResultCache::new)
    }

    pub fn key(rs: &RootSystem, k: &ParameterFunction) -> String {
        let mut h = Sha256::new();
        h.update(format!("v{SCHEMA_VERSION}\n"));
        for (c, v) in k.as_map(rs) {
            h.update(format!("{c}={}\n", fmt_q(&v)));
        }
        let digest = h.finalize();
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        format!("{}-r{}-{hex}", rs.label(), rs.rank())
    }

    pub fn path(&self, rs: &RootSystem, k: &ParameterFunction) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(rs, k)))
    }

    /// A cached record, if present and readable; unreadable files are misses.
    pub fn load(&self, rs: &RootSystem, k: &ParameterFunction) -> Option<TableRecord> {
        let s = fs::read_to_string(self.path(rs, k)).ok()?;
        let rec = TableRecord::from_json(&s).ok()?;
        (rec.type_label == rs.label() && rec.params == params_record(rs, k)).then_some(rec)
    }

    pub fn store(&self, rs: &RootSystem, k: &ParameterFunction, rec: &TableRecord) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(rs, k);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, rec.to_json()?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Exact parameter map from a record, for reloading.
pub fn params_from_record(
    rs: &RootSystem,
    params: &BTreeMap<String, String>,
) -> Result<ParameterFunction> {
    let pairs: Vec<(String, Q)> = params
        .iter()
        .map(|(c, v)| Ok((c.clone(), crate::rational::parse_fraction(v)?)))
        .collect::<Result<_>>()?;
    ParameterFunction::from_pairs(rs, &pairs)
}
