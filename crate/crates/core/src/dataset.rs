//! Fixture corpus: one JSON file per polytope carrying the reference data
//! (half-space representation, vertices, rays, degree matrix, candidate
//! collection, expected verdicts) plus a validator that recomputes the whole
//! pipeline and cross-checks every provided field.

use crate::cohomology::CohomologyEngine;
use crate::divisor::{validate_degree_matrix_for_fan, DegreeMatrixCheck, DivisorClass};
use crate::fan::{certify_complete, certify_smooth, normal_fan, reorder_rays, Fan, ToricVariety};
use crate::lattice::IntMatrix;
use crate::polytope::{enumerate_vertices, parse_hrep, primitive_inner_normals, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;

pub const KNOWN_FLAGS: &[&str] =
    &["degree_matrix_inconsistent", "coordinates_unverifiable", "id_ambiguous"];

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {file}: {source}")]
    Io { file: String, source: std::io::Error },
    #[error("parse error in {file}: {source}")]
    Parse { file: String, source: serde_json::Error },
    #[error("schema error in {file}, field {field}: {reason}")]
    Schema { file: String, field: String, reason: String },
}

/// A rational number serialized as a JSON integer or a string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatField(pub Rat);

impl Serialize for RatField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.denom() == &BigInt::from(1) {
            match i64::try_from(self.0.numer()) {
                Ok(v) => return s.serialize_i64(v),
                Err(_) => {}
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(RatField(Rat::from_integer(v.into()))),
            Raw::Str(txt) => BigRational::from_str(txt.trim())
                .map(RatField)
                .map_err(|e| D::Error::custom(format!("bad rational {txt:?}: {e}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedVerdict {
    Orderable,
    NotOrderable,
}

/// Printed witness data for a non-orderable collection: a pair of bundles
/// with nonzero Homs in both directions.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessFixture {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    /// degree -> rank of Hom(source, target[degree])
    pub forward: BTreeMap<usize, u64>,
    /// degree -> rank of Hom(target, source[degree])
    pub backward: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum BondalExpected {
    Pass,
    Fail {
        /// Ray generators spanning the offending wall.
        wall_rays: Vec<Vec<i64>>,
        /// Expected coefficients on specific wall rays.
        coefficients: Vec<BondalCoefficient>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BondalCoefficient {
    pub ray: Vec<i64>,
    pub value: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub schema_version: u32,
    pub id: String,
    pub dim: usize,
    /// Half-space rows `(a_0, a_1, ..., a_d)` encoding `a_0 + a.x >= 0`.
    #[serde(default)]
    pub hrep: Option<Vec<Vec<RatField>>>,
    /// Vertex coordinates, one vertex per row.
    #[serde(default)]
    pub vertices: Option<Vec<Vec<RatField>>>,
    pub rays: Vec<Vec<i64>>,
    pub degree_matrix: Vec<Vec<i64>>,
    pub rank_sequence: Vec<i64>,
    pub collection: Vec<Vec<i64>>,
    pub expected_verdict: ExpectedVerdict,
    #[serde(default)]
    pub hom_matrix: Option<Vec<Vec<u64>>>,
    #[serde(default)]
    pub witness: Option<WitnessFixture>,
    #[serde(default)]
    pub bondal_expected: Option<BondalExpected>,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default)]
    pub notes: String,
}

impl Fixture {
    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    pub fn collection_classes(&self) -> Vec<DivisorClass> {
        self.collection.iter().map(|c| DivisorClass(c.clone())).collect()
    }

    pub fn degree_matrix_int(&self) -> IntMatrix {
        IntMatrix::from_rows_i64(&self.degree_matrix)
    }

    /// Builds the certified variety from the fixture's rays and cones derived
    /// from the degree matrix. The fan structure is reconstructed by taking
    /// maximal cones to be the `d`-subsets of rays whose determinant is
    /// a unit and that share no strictly separating hyperplane with another
    /// ray; for the fixtures in scope the hrep-derived fan is used when the
    /// hrep is present, otherwise the cones are recovered from scratch.
    pub fn variety(&self) -> Result<ToricVariety, String> {
        let fan = self.fan()?;
        let dm = self.degree_matrix_int();
        match validate_degree_matrix_for_fan(&fan, &dm) {
            DegreeMatrixCheck::Valid => {
                ToricVariety::with_degree_matrix(fan, dm).map_err(|e| e.to_string())
            }
            DegreeMatrixCheck::Inconsistent(_) if self.has_flag("degree_matrix_inconsistent") => {
                ToricVariety::from_fan(fan).map_err(|e| e.to_string())
            }
            DegreeMatrixCheck::Inconsistent(reason) => {
                Err(format!("degree matrix inconsistent and unflagged: {reason}"))
            }
        }
    }

    /// The fan on the fixture's rays, in the fixture's ray order.
    pub fn fan(&self) -> Result<Fan, String> {
        if let Some(hrep) = &self.hrep {
            let rows: Vec<Vec<Rat>> =
                hrep.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
            let (h, _) = parse_hrep(&rows, self.dim).map_err(|e| e.to_string())?;
            let p = enumerate_vertices(&h).map_err(|e| e.to_string())?;
            let fan = normal_fan(&p).map_err(|e| e.to_string())?;
            reorder_rays(&fan, &self.rays).map_err(|e| e.to_string())
        } else {
            reconstruct_fan(self.dim, &self.rays)
        }
    }
}

/// Recovers the fan from rays alone, for fixtures that print no half-space
/// data. The rays of a smooth Fano variety are the vertices of a lattice
/// polytope whose face fan is the fan of the variety, so the maximal cones
/// are exactly the facets of `conv(rays)`: `d`-subsets `S` admitting a
/// hyperplane `<w, x> = 1` through all of `S` with every other ray strictly
/// below it.
fn reconstruct_fan(dim: usize, rays: &[Vec<i64>]) -> Result<Fan, String> {
    let n = rays.len();
    let one = BigRational::from_integer(BigInt::from(1));
    let mut cones = Vec::new();
    for subset in crate::polytope::subsets(n, dim) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&r| rays[r].clone()).collect();
        let m = IntMatrix::from_rows_i64(&rows);
        if m.rank() < dim {
            continue;
        }
        let rhs: Vec<BigInt> = vec![BigInt::from(1); dim];
        let Some(w) = crate::lattice::solve_rational(&m, &rhs) else {
            continue;
        };
        let facet = (0..n).filter(|r| !subset.contains(r)).all(|r| {
            let dot: BigRational = rays[r]
                .iter()
                .zip(&w)
                .map(|(&a, b)| BigRational::from_integer(BigInt::from(a)) * b)
                .sum();
            dot < one
        });
        if facet {
            cones.push(subset);
        }
    }
    let fan = Fan::new(dim, rays.to_vec(), cones);
    if certify_smooth(&fan) && certify_complete(&fan) {
        return Ok(fan);
    }
    Err("could not reconstruct a smooth complete fan from rays alone".into())
}

/// Loads every fixture file (`*.json`) under the directory, sorted by id.
pub fn load_fixtures(path: &Path) -> Result<Vec<Fixture>, DatasetError> {
    let mut fixtures = Vec::new();
    let entries = std::fs::read_dir(path).map_err(|e| DatasetError::Io {
        file: path.display().to_string(),
        source: e,
    })?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    for file in files {
        fixtures.push(load_fixture_file(&file)?);
    }
    fixtures.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(fixtures)
}

pub fn load_fixture_file(file: &Path) -> Result<Fixture, DatasetError> {
    let name = file.display().to_string();
    let text = std::fs::read_to_string(file)
        .map_err(|e| DatasetError::Io { file: name.clone(), source: e })?;
    let fixture: Fixture = serde_json::from_str(&text)
        .map_err(|e| DatasetError::Parse { file: name.clone(), source: e })?;
    check_schema(&fixture, &name)?;
    Ok(fixture)
}

fn check_schema(f: &Fixture, file: &str) -> Result<(), DatasetError> {
    let err = |field: &str, reason: String| DatasetError::Schema {
        file: file.to_string(),
        field: field.to_string(),
        reason,
    };
    if f.schema_version != SCHEMA_VERSION {
        return Err(err(
            "schema_version",
            format!("got {}, expected {}", f.schema_version, SCHEMA_VERSION),
        ));
    }
    for flag in &f.flags {
        if !KNOWN_FLAGS.contains(&flag.as_str()) {
            return Err(err("flags", format!("unknown flag {flag:?}")));
        }
    }
    // Alternating sum of the resolution ranks must vanish.
    let alt: i64 = f
        .rank_sequence
        .iter()
        .enumerate()
        .map(|(k, &r)| if k % 2 == 0 { r } else { -r })
        .sum();
    if alt != 0 {
        return Err(err("rank_sequence", format!("alternating sum {alt}, expected 0")));
    }
    let n = f.rays.len();
    if n <= f.dim {
        return Err(err("rays", format!("{n} rays in dimension {}", f.dim)));
    }
    for ray in &f.rays {
        if ray.len() != f.dim {
            return Err(err("rays", format!("ray {ray:?} has wrong dimension")));
        }
        let g = ray.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        if g != 1 {
            return Err(err("rays", format!("ray {ray:?} is not primitive")));
        }
    }
    let rank = n - f.dim;
    if f.degree_matrix.len() != rank || f.degree_matrix.iter().any(|r| r.len() != n) {
        return Err(err("degree_matrix", format!("expected shape {rank}x{n}")));
    }
    if f.collection.is_empty() {
        return Err(err("collection", "empty collection".into()));
    }
    for c in &f.collection {
        if c.len() != rank {
            return Err(err("collection", format!("class {c:?} has wrong length")));
        }
    }
    if let Some(m) = &f.hom_matrix {
        let k = f.collection.len();
        if m.len() != k || m.iter().any(|r| r.len() != k) {
            return Err(err("hom_matrix", format!("expected shape {k}x{k}")));
        }
    }
    Ok(())
}

/// Per-field validation outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldStatus {
    Match,
    Mismatch(String),
    Flagged(String),
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct FixtureReport {
    pub id: String,
    pub fields: Vec<(String, FieldStatus)>,
}

impl FixtureReport {
    pub fn all_consistent(&self) -> bool {
        !self
            .fields
            .iter()
            .any(|(_, s)| matches!(s, FieldStatus::Mismatch(_)))
    }
}

/// Recomputes the pipeline from the fixture inputs and cross-checks every
/// provided field, reporting MATCH/MISMATCH/FLAGGED per field.
pub fn validate_fixture(f: &Fixture) -> FixtureReport {
    let mut fields: Vec<(String, FieldStatus)> = Vec::new();
    let mut push = |name: &str, status: FieldStatus| fields.push((name.to_string(), status));

    if f.has_flag("id_ambiguous") {
        push("id", FieldStatus::Flagged("prose names a different polytope".into()));
    } else {
        push("id", FieldStatus::Match);
    }

    // Polytope-level checks when an hrep is present.
    let mut fan: Option<Fan> = None;
    if let Some(hrep_rows) = &f.hrep {
        let rows: Vec<Vec<Rat>> =
            hrep_rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
        match parse_hrep(&rows, f.dim).and_then(|(h, _)| Ok((enumerate_vertices(&h)?, h))) {
            Ok((p, h)) => {
                // Vertex set comparison.
                if let Some(vmat) = &f.vertices {
                    let mut expect: Vec<Vec<Rat>> = vmat
                        .iter()
                        .map(|r| r.iter().map(|x| x.0.clone()).collect())
                        .collect();
                    expect.sort();
                    if expect == p.vertices {
                        push("vertices", FieldStatus::Match);
                    } else {
                        push(
                            "vertices",
                            FieldStatus::Mismatch(format!(
                                "computed {} vertices, listed {}",
                                p.vertices.len(),
                                expect.len()
                            )),
                        );
                    }
                } else {
                    push("vertices", FieldStatus::Skipped("not provided".into()));
                }
                // Ray set comparison.
                let normals = primitive_inner_normals(&h).expect("parsed hrep");
                let mut computed: Vec<Vec<i64>> = normals
                    .iter()
                    .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
                    .collect();
                computed.sort();
                let mut listed = f.rays.clone();
                listed.sort();
                if computed == listed {
                    push("rays", FieldStatus::Match);
                } else {
                    push("rays", FieldStatus::Mismatch("ray sets differ".into()));
                }
                match normal_fan(&p).and_then(|nf| reorder_rays(&nf, &f.rays)) {
                    Ok(nf) => {
                        // Number of maximal cones must match the number of
                        // vertices.
                        if nf.max_cones.len() == p.vertices.len() {
                            push("max_cones", FieldStatus::Match);
                        } else {
                            push(
                                "max_cones",
                                FieldStatus::Mismatch(format!(
                                    "{} cones vs {} vertices",
                                    nf.max_cones.len(),
                                    p.vertices.len()
                                )),
                            );
                        }
                        fan = Some(nf);
                    }
                    Err(e) => push("fan", FieldStatus::Mismatch(e.to_string())),
                }
            }
            Err(e) => push("hrep", FieldStatus::Mismatch(e.to_string())),
        }
    } else {
        push("hrep", FieldStatus::Skipped("not provided".into()));
        match reconstruct_fan(f.dim, &f.rays) {
            Ok(nf) => fan = Some(nf),
            Err(e) => push("fan", FieldStatus::Mismatch(e)),
        }
    }

    if let Some(fan) = &fan {
        push(
            "smooth",
            if certify_smooth(fan) {
                FieldStatus::Match
            } else {
                FieldStatus::Mismatch("fan is not smooth".into())
            },
        );
        push(
            "complete",
            if certify_complete(fan) {
                FieldStatus::Match
            } else {
                FieldStatus::Mismatch("fan is not complete".into())
            },
        );
        let dm = f.degree_matrix_int();
        match validate_degree_matrix_for_fan(fan, &dm) {
            DegreeMatrixCheck::Valid => push("degree_matrix", FieldStatus::Match),
            DegreeMatrixCheck::Inconsistent(reason) => {
                if f.has_flag("degree_matrix_inconsistent") {
                    push("degree_matrix", FieldStatus::Flagged(reason));
                } else {
                    push("degree_matrix", FieldStatus::Mismatch(reason));
                }
            }
        }
    }

    // Exceptionality of each bundle (independent of coordinate questions only
    // when the degree matrix is usable).
    if let Ok(v) = f.variety() {
        if let Ok(engine) = CohomologyEngine::new(&v) {
            let ok = f.collection_classes().iter().all(|c| {
                engine
                    .hom_table(c, c)
                    .map(|t| t.rank(0) == 1 && t.total_rank() == 1)
                    .unwrap_or(false)
            });
            push(
                "collection_exceptional",
                if ok {
                    FieldStatus::Match
                } else {
                    FieldStatus::Mismatch("some bundle is not exceptional".into())
                },
            );
        }
    }

    FixtureReport { id: f.id.clone(), fields }
}
