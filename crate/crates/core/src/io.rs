//! Versioned JSON file formats.
//!
//! All files carry `"schema": "trace-lab/1"`. Doubles round-trip losslessly:
//! serialization uses the shortest decimal that parses back to the same bits
//! (at most 17 significant digits). Schema violations are reported with the
//! JSON pointer path of the offending field.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::covering::{CoverConstants, CoverStage, Covering};
use crate::divdiff::ValuedSet;
use crate::error::{Error, Result};
use crate::geometry::{Cplx, Metric, PartedSet, Point, PointSet};
use crate::separation::{Cluster, ClusterFamily};
use crate::weight::{GridTable, Weight, WeightKind};

pub const SCHEMA: &str = "trace-lab/1";

fn check_schema(schema: &str) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Schema {
            path: "/schema".into(),
            message: format!("expected \"{SCHEMA}\", got \"{schema}\""),
        });
    }
    Ok(())
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: format!("/{}", e.path().to_string().replace('.', "/")),
        message: e.inner().to_string(),
    })
}

fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    parse(&text)
}

fn write_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl ComplexJson {
    pub fn to_complex(self) -> Cplx {
        Cplx::new(self.re, self.im)
    }

    pub fn from_complex(z: Cplx) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

/// A point set with optional values and part labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetFile {
    pub schema: String,
    pub metric: Metric,
    pub points: Vec<ComplexJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<ComplexJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<Vec<usize>>>,
}

impl SetFile {
    pub fn from_point_set(set: &PointSet) -> Self {
        SetFile {
            schema: SCHEMA.into(),
            metric: set.metric(),
            points: set
                .points()
                .iter()
                .map(|p| ComplexJson { re: p.re, im: p.im })
                .collect(),
            values: None,
            parts: None,
        }
    }

    pub fn from_valued_set(v: &ValuedSet) -> Self {
        let mut f = SetFile::from_point_set(v.set());
        f.values = Some(v.values().iter().map(|&z| ComplexJson::from_complex(z)).collect());
        f
    }

    pub fn with_parts(mut self, parts: Vec<Vec<usize>>) -> Self {
        self.parts = Some(parts);
        self
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f: SetFile = read_file(path)?;
        check_schema(&f.schema)?;
        f.to_point_set()?; // validates domain and distinctness
        if let Some(values) = &f.values {
            if values.len() != f.points.len() {
                return Err(Error::Schema {
                    path: "/values".into(),
                    message: format!(
                        "{} values for {} points",
                        values.len(),
                        f.points.len()
                    ),
                });
            }
        }
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self)
    }

    pub fn to_point_set(&self) -> Result<PointSet> {
        let points = self
            .points
            .iter()
            .map(|c| Point::new(c.re, c.im))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(points, self.metric)
    }

    pub fn to_valued_set(&self) -> Result<ValuedSet> {
        let values = self
            .values
            .as_ref()
            .ok_or_else(|| Error::Schema {
                path: "/values".into(),
                message: "file carries no values".into(),
            })?
            .iter()
            .map(|c| c.to_complex())
            .collect();
        ValuedSet::new(self.to_point_set()?, values)
    }

    pub fn to_parted_set(&self) -> Result<PartedSet> {
        let parts = self.parts.clone().ok_or_else(|| Error::Schema {
            path: "/parts".into(),
            message: "file carries no part labels".into(),
        })?;
        PartedSet::new(self.to_point_set()?, parts)
    }
}

/// Weight descriptor: `{"kind", "params", "K", "D0", "E0", "metric", "r0"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightFile {
    pub schema: String,
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub metric: Metric,
    pub r0: f64,
}

impl WeightFile {
    pub fn from_weight(w: &Weight) -> Self {
        let params = match &w.kind {
            WeightKind::PowerAbs { a } => serde_json::json!({ "a": a }),
            WeightKind::CustomTable(t) => serde_json::to_value(t.as_ref()).unwrap_or_default(),
            _ => serde_json::json!({}),
        };
        WeightFile {
            schema: SCHEMA.into(),
            kind: w.kind.name().into(),
            params,
            k: w.k,
            d0: w.d0,
            e0: w.e0,
            metric: w.metric,
            r0: w.r0,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f: WeightFile = read_file(path)?;
        check_schema(&f.schema)?;
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self)
    }

    pub fn to_weight(&self) -> Result<Weight> {
        let kind = match self.kind.as_str() {
            "log_one_plus_sq" => WeightKind::LogOnePlusSq,
            "power_abs" => {
                let a = self
                    .params
                    .get("a")
                    .and_then(|v| v.as_f64())
                    .ok_or_else(|| Error::Schema {
                        path: "/params/a".into(),
                        message: "power_abs needs a numeric exponent".into(),
                    })?;
                WeightKind::PowerAbs { a }
            }
            "nonisotropic" => WeightKind::Nonisotropic,
            "korenblum" => WeightKind::Korenblum,
            "custom_table" => {
                let table: GridTable =
                    serde_json::from_value(self.params.clone()).map_err(|e| Error::Schema {
                        path: "/params".into(),
                        message: e.to_string(),
                    })?;
                WeightKind::CustomTable(Arc::new(table))
            }
            other => {
                return Err(Error::Schema {
                    path: "/kind".into(),
                    message: format!("unknown weight kind \"{other}\""),
                })
            }
        };
        Weight::new(kind, self.k, self.d0, self.e0, self.metric, self.r0)
    }
}

/// Decomposition output: part indices plus the shrunken parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartsFile {
    pub schema: String,
    pub parts: Vec<Vec<usize>>,
    pub eps_prime: f64,
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
}

impl PartsFile {
    pub fn load(path: &Path) -> Result<Self> {
        let f: PartsFile = read_file(path)?;
        check_schema(&f.schema)?;
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterJson {
    pub center: ComplexJson,
    pub satellites: Vec<ComplexJson>,
    pub l: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClustersFile {
    pub schema: String,
    pub metric: Metric,
    #[serde(rename = "C")]
    pub c: f64,
    pub clusters: Vec<ClusterJson>,
}

impl ClustersFile {
    pub fn from_family(family: &ClusterFamily) -> Self {
        ClustersFile {
            schema: SCHEMA.into(),
            metric: family.metric,
            c: family.c,
            clusters: family
                .clusters
                .iter()
                .map(|cl| ClusterJson {
                    center: ComplexJson { re: cl.center.re, im: cl.center.im },
                    satellites: cl
                        .satellites
                        .iter()
                        .map(|s| ComplexJson { re: s.re, im: s.im })
                        .collect(),
                    l: cl.scale,
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f: ClustersFile = read_file(path)?;
        check_schema(&f.schema)?;
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self)
    }

    pub fn to_family(&self) -> Result<ClusterFamily> {
        let clusters = self
            .clusters
            .iter()
            .map(|cl| {
                Ok(Cluster {
                    center: Point::new(cl.center.re, cl.center.im)?,
                    satellites: cl
                        .satellites
                        .iter()
                        .map(|s| Point::new(s.re, s.im))
                        .collect::<Result<Vec<_>>>()?,
                    scale: cl.l,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClusterFamily { clusters, metric: self.metric, c: self.c })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverConstantsJson {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    #[serde(rename = "B2")]
    pub b2: f64,
    pub eps: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverStageJson {
    pub stage: usize,
    #[serde(rename = "C_k")]
    pub c_k: f64,
    #[serde(rename = "B_k")]
    pub b_k: f64,
    pub members: Vec<usize>,
    pub radii: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverFile {
    pub schema: String,
    pub centers: Vec<usize>,
    pub radii: Vec<f64>,
    pub constants: CoverConstantsJson,
    pub trace: Vec<CoverStageJson>,
}

impl CoverFile {
    pub fn from_covering(cov: &Covering) -> Self {
        CoverFile {
            schema: SCHEMA.into(),
            centers: cov.centers.clone(),
            radii: cov.radii.clone(),
            constants: CoverConstantsJson {
                a: cov.constants.a,
                b: cov.constants.b,
                b1: cov.constants.b1,
                b2: cov.constants.b2,
                eps: cov.constants.eps,
            },
            trace: cov
                .trace
                .iter()
                .map(|st| CoverStageJson {
                    stage: st.stage,
                    c_k: st.c_k,
                    b_k: st.b_k,
                    members: st.members.clone(),
                    radii: st.radii.clone(),
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f: CoverFile = read_file(path)?;
        check_schema(&f.schema)?;
        if f.centers.len() != f.radii.len() {
            return Err(Error::Schema {
                path: "/radii".into(),
                message: format!("{} radii for {} centers", f.radii.len(), f.centers.len()),
            });
        }
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self)
    }

    /// Reattaches the covering to its point set, recomputing memberships.
    pub fn to_covering(&self, set: &PointSet) -> Result<Covering> {
        let mut point_center = vec![usize::MAX; set.len()];
        let mut disk_members = vec![Vec::new(); self.centers.len()];
        for i in 0..set.len() {
            for (rank, &lam) in self.centers.iter().enumerate() {
                if lam >= set.len() {
                    return Err(Error::Schema {
                        path: "/centers".into(),
                        message: format!("center index {lam} out of bounds"),
                    });
                }
                if set.distance(lam, i) <= self.radii[rank] {
                    if point_center[i] != usize::MAX {
                        return Err(Error::Verification(format!(
                            "point {i} lies in two disks"
                        )));
                    }
                    point_center[i] = rank;
                }
            }
            if point_center[i] == usize::MAX {
                return Err(Error::Verification(format!(
                    "point {i} is not covered by any disk"
                )));
            }
            disk_members[point_center[i]].push(i);
        }
        Ok(Covering {
            centers: self.centers.clone(),
            radii: self.radii.clone(),
            constants: CoverConstants {
                a: self.constants.a,
                b: self.constants.b,
                b1: self.constants.b1,
                b2: self.constants.b2,
                eps: self.constants.eps,
            },
            trace: self
                .trace
                .iter()
                .map(|st| CoverStage {
                    stage: st.stage,
                    c_k: st.c_k,
                    b_k: st.b_k,
                    members: st.members.clone(),
                    radii: st.radii.clone(),
                })
                .collect(),
            disk_members,
            point_center,
        })
    }
}

/// Assembled-interpolant metadata (expressions themselves stay in memory).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleFile {
    pub schema: String,
    #[serde(rename = "D")]
    pub d: f64,
    pub max_rel_residual: f64,
    pub max_leakage: f64,
    pub b_measured: f64,
    pub coeff_sum: f64,
    pub residuals: Vec<f64>,
    pub foreign_leakage: Vec<f64>,
    /// `(p-level, max |f|)` pairs on the standard grid.
    pub growth: Vec<(f64, f64)>,
    pub centers: Vec<BundleCenterJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleCenterJson {
    pub center: usize,
    pub members: Vec<usize>,
    pub radius: f64,
}

impl BundleFile {
    pub fn from_bundle(bundle: &crate::interpolate::InterpolantBundle) -> Self {
        BundleFile {
            schema: SCHEMA.into(),
            d: bundle.d,
            max_rel_residual: bundle.max_rel_residual,
            max_leakage: bundle.max_leakage,
            b_measured: bundle.b_measured,
            coeff_sum: bundle.coeff_sum,
            residuals: bundle.residuals.clone(),
            foreign_leakage: bundle.foreign_leakage.clone(),
            growth: bundle.growth.clone(),
            centers: bundle
                .summaries
                .iter()
                .map(|s| BundleCenterJson {
                    center: s.center,
                    members: s.members.clone(),
                    radius: s.radius,
                })
                .collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f: BundleFile = read_file(path)?;
        check_schema(&f.schema)?;
        Ok(f)
    }
}

/// Serializes any report value with a trailing newline (stable bytes).
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, value)
}
