//! Weight functions and their axioms.
//!
//! A weight is a nonnegative function `p` on the plane (or `phi` on the unit
//! disk) with a logarithmic growth floor and slow local variation:
//!
//! * growth floor: `p(z) >= K ln(1 + |z|^2)` (plane) or
//!   `phi(z) >= K ln(1 / (1 - |z|))` (disk);
//! * local comparability: `p(z) <= D0 p(w) + E0` whenever the metric distance
//!   from `z` to `w` is at most `r0`.
//!
//! The constants `(K, D0, E0, r0)` are stored data; [`Weight::certify`] checks
//! them against a sample. Downstream constructions consume them symbolically.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Metric, Point, PointSet};

/// Absolute tolerance used for axiom comparisons.
pub const AXIOM_TOL: f64 = 1e-12;

/// A rectangular grid of sampled weight values, interpolated bilinearly.
/// Evaluation outside the grid is a domain error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridTable {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major `ny * nx` values, row `iy` spanning `y0 + iy*dy`.
    pub values: Vec<f64>,
}

impl GridTable {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidInput("grid table needs at least 2x2 samples".into()));
        }
        if !(self.dx > 0.0 && self.dy > 0.0) {
            return Err(Error::InvalidInput("grid table steps must be positive".into()));
        }
        if self.values.len() != self.nx * self.ny {
            return Err(Error::InvalidInput(format!(
                "grid table has {} values, expected {}",
                self.values.len(),
                self.nx * self.ny
            )));
        }
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "grid table values must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let fx = (x - self.x0) / self.dx;
        let fy = (y - self.y0) / self.dy;
        if fx < 0.0 || fy < 0.0 || fx > (self.nx - 1) as f64 || fy > (self.ny - 1) as f64 {
            return Err(Error::Domain(format!("point ({x}, {y}) outside the sampled grid")));
        }
        let ix = (fx.floor() as usize).min(self.nx - 2);
        let iy = (fy.floor() as usize).min(self.ny - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let v = |i: usize, j: usize| self.values[j * self.nx + i];
        let top = v(ix, iy) * (1.0 - tx) + v(ix + 1, iy) * tx;
        let bot = v(ix, iy + 1) * (1.0 - tx) + v(ix + 1, iy + 1) * tx;
        Ok(top * (1.0 - ty) + bot * ty)
    }
}

#[derive(Clone, Debug)]
pub enum WeightKind {
    /// `p(z) = ln(1 + |z|^2)` on the plane.
    LogOnePlusSq,
    /// `p(z) = |z|^a`, `a > 0`, on the plane.
    PowerAbs { a: f64 },
    /// `p(z) = |Im z| + ln(1 + |z|)` on the plane.
    Nonisotropic,
    /// `phi(z) = ln(1 / (1 - |z|))` on the disk.
    Korenblum,
    /// Bilinear interpolation of tabulated samples.
    CustomTable(Arc<GridTable>),
}

impl WeightKind {
    pub fn name(&self) -> &'static str {
        match self {
            WeightKind::LogOnePlusSq => "log_one_plus_sq",
            WeightKind::PowerAbs { .. } => "power_abs",
            WeightKind::Nonisotropic => "nonisotropic",
            WeightKind::Korenblum => "korenblum",
            WeightKind::CustomTable(_) => "custom_table",
        }
    }
}

/// A weight descriptor plus its certified constants and metric.
#[derive(Clone, Debug)]
pub struct Weight {
    pub kind: WeightKind,
    /// Growth-floor constant `K > 0`.
    pub k: f64,
    /// Comparability factor `D0 >= 1`.
    pub d0: f64,
    /// Comparability offset `E0 >= 0`.
    pub e0: f64,
    pub metric: Metric,
    /// Neighborhood radius for the comparability axiom.
    pub r0: f64,
}

impl Weight {
    pub fn new(kind: WeightKind, k: f64, d0: f64, e0: f64, metric: Metric, r0: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidInput(format!("K must be positive, got {k}")));
        }
        if !(d0 >= 1.0 && d0.is_finite()) {
            return Err(Error::InvalidInput(format!("D0 must be >= 1, got {d0}")));
        }
        if !(e0 >= 0.0 && e0.is_finite()) {
            return Err(Error::InvalidInput(format!("E0 must be >= 0, got {e0}")));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidInput(format!("r0 must be positive, got {r0}")));
        }
        if let WeightKind::PowerAbs { a } = kind {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidInput(format!("power exponent must be positive, got {a}")));
            }
        }
        if let WeightKind::CustomTable(ref t) = kind {
            t.validate()?;
        }
        if matches!(kind, WeightKind::Korenblum) && metric != Metric::Disk {
            return Err(Error::InvalidInput("korenblum weight requires the disk metric".into()));
        }
        Ok(Weight { kind, k, d0, e0, metric, r0 })
    }

    /// `ln(1 + |z|^2)` with `K = 1`, `D0 = 1`, `E0 = 1`, `r0 = 1`.
    pub fn log_plane() -> Self {
        Weight::new(WeightKind::LogOnePlusSq, 1.0, 1.0, 1.0, Metric::Plane, 1.0).unwrap()
    }

    /// `|Im z| + ln(1 + |z|)` with `K = 1/2`, `D0 = 1`, `E0 = 1.7`, `r0 = 1`.
    pub fn nonisotropic_plane() -> Self {
        Weight::new(WeightKind::Nonisotropic, 0.5, 1.0, 1.7, Metric::Plane, 1.0).unwrap()
    }

    /// `|z|^a` with `D0 = 1`, `E0 = 1`, `r0 = 1` and caller-supplied `K`.
    pub fn power_plane(a: f64, k: f64) -> Result<Self> {
        Weight::new(WeightKind::PowerAbs { a }, k, 1.0, 1.0, Metric::Plane, 1.0)
    }

    /// `ln(1 / (1 - |z|))` with `K = 1`, `D0 = 1`, `E0 = 1.1`, `r0 = 1/2`.
    /// The offset covers `ln 3`, the comparability constant at distance 1/2.
    pub fn korenblum_disk() -> Self {
        Weight::new(WeightKind::Korenblum, 1.0, 1.0, 1.1, Metric::Disk, 0.5).unwrap()
    }

    pub fn eval(&self, z: Point) -> Result<f64> {
        self.metric.check(z)?;
        let r = z.abs();
        let v = match &self.kind {
            WeightKind::LogOnePlusSq => z.to_complex().norm_sqr().ln_1p(),
            WeightKind::PowerAbs { a } => r.powf(*a),
            WeightKind::Nonisotropic => z.im.abs() + r.ln_1p(),
            WeightKind::Korenblum => -(-r).ln_1p(),
            WeightKind::CustomTable(t) => t.eval(z.re, z.im)?,
        };
        debug_assert!(v >= 0.0, "weight must be nonnegative");
        Ok(v)
    }

    pub fn eval_many(&self, points: &[Point]) -> Result<Vec<f64>> {
        points.iter().map(|p| self.eval(*p)).collect()
    }

    pub fn eval_sum(&self, points: &[Point]) -> Result<f64> {
        Ok(self.eval_many(points)?.iter().sum())
    }

    /// The growth floor required at `z`.
    pub fn floor_at(&self, z: Point) -> f64 {
        match self.metric {
            Metric::Plane => self.k * z.to_complex().norm_sqr().ln_1p(),
            Metric::Disk => self.k * -(-z.abs()).ln_1p(),
        }
    }

    /// Checks the growth floor at every sample point and the comparability
    /// axiom on every ordered pair within `pair_radius`. Passing `self.r0`
    /// certifies the axioms exactly as stored.
    pub fn certify(&self, sample: &PointSet, pair_radius: f64) -> Result<AxiomReport> {
        if sample.is_empty() {
            return Err(Error::InvalidInput("certification requires a nonempty sample".into()));
        }
        if sample.metric() != self.metric {
            return Err(Error::InvalidInput("sample metric differs from weight metric".into()));
        }
        let p = self.eval_many(sample.points())?;

        let mut lower_bound_witness = None;
        for (i, pt) in sample.points().iter().enumerate() {
            let required = self.floor_at(*pt);
            if p[i] + AXIOM_TOL < required {
                lower_bound_witness = Some(LowerBoundWitness {
                    index: i,
                    value: p[i],
                    required,
                });
                break;
            }
        }

        let mut comparability_witness = None;
        'outer: for i in 0..sample.len() {
            for j in 0..sample.len() {
                if i == j {
                    continue;
                }
                if sample.distance(i, j) <= pair_radius {
                    let bound = self.d0 * p[j] + self.e0;
                    if p[i] > bound + AXIOM_TOL {
                        comparability_witness = Some(ComparabilityWitness {
                            from: i,
                            to: j,
                            value: p[i],
                            bound,
                        });
                        break 'outer;
                    }
                }
            }
        }

        Ok(AxiomReport {
            lower_bound_ok: lower_bound_witness.is_none(),
            comparability_ok: comparability_witness.is_none(),
            lower_bound_witness,
            comparability_witness,
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerBoundWitness {
    pub index: usize,
    pub value: f64,
    pub required: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComparabilityWitness {
    pub from: usize,
    pub to: usize,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AxiomReport {
    pub lower_bound_ok: bool,
    pub comparability_ok: bool,
    pub lower_bound_witness: Option<LowerBoundWitness>,
    pub comparability_witness: Option<ComparabilityWitness>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.lower_bound_ok && self.comparability_ok
    }
}

/// The claim `|g(z)| <= A exp(B p(z))` (componentwise over tuples where used).
/// `A = 0` is allowed: it is the measured bound of an identically zero sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub a: f64,
    pub b: f64,
}

impl GrowthBound {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0 && b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "growth bound constants must be finite and nonnegative, got A={a}, B={b}"
            )));
        }
        Ok(GrowthBound { a, b })
    }
}
