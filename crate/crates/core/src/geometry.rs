//! Points, metrics and point sets.
//!
//! Two metrics are supported: the Euclidean distance on the plane and the
//! pseudo-hyperbolic distance `|z - w| / |1 - conj(w) z|` on the unit disk.
//! Distances are evaluated in a canonical argument order so that
//! `distance(a, b)` and `distance(b, a)` are bit-identical.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Cplx = Complex64;

/// A point with finite coordinates. Under the disk metric the point must
/// additionally satisfy `|z| < 1`; that is enforced where the metric is known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl Point {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Domain(format!("non-finite point ({re}, {im})")));
        }
        Ok(Point { re, im })
    }

    pub fn from_complex(z: Cplx) -> Result<Self> {
        Point::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Cplx {
        Cplx::new(self.re, self.im)
    }

    pub fn abs(self) -> f64 {
        self.to_complex().norm()
    }

    /// Lexicographic key used for canonical ordering and tie-breaking.
    fn lex_key(self) -> (f64, f64) {
        (self.re, self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Plane,
    Disk,
}

impl Metric {
    pub fn contains(self, p: Point) -> bool {
        match self {
            Metric::Plane => true,
            Metric::Disk => p.abs() < 1.0,
        }
    }

    pub fn check(self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "point ({}, {}) is not inside the unit disk",
                p.re, p.im
            )))
        }
    }

    /// The difference factor with root `base`: `z - base` on the plane and the
    /// Blaschke factor `(z - base) / (1 - conj(base) z)` on the disk. Its
    /// modulus at `z` is the metric distance from `base` to `z`.
    pub fn diff_factor(self, base: Cplx, z: Cplx) -> Cplx {
        match self {
            Metric::Plane => z - base,
            Metric::Disk => (z - base) / (Cplx::new(1.0, 0.0) - base.conj() * z),
        }
    }

    /// Metric distance. Arguments are swapped into lexicographic order before
    /// evaluating, so the result is exactly symmetric.
    pub fn distance(self, a: Point, b: Point) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    /// Same as [`Metric::distance`] for points already known to be in domain.
    pub fn distance_unchecked(self, a: Point, b: Point) -> f64 {
        let (lo, hi) = if b.lex_key() < a.lex_key() { (b, a) } else { (a, b) };
        self.diff_factor(lo.to_complex(), hi.to_complex()).norm()
    }
}

/// The Moebius involution `z -> (a - z) / (1 - conj(a) z)` of the unit disk.
pub fn mobius(a: Cplx, z: Cplx) -> Cplx {
    (a - z) / (Cplx::new(1.0, 0.0) - a.conj() * z)
}

/// An ordered list of pairwise distinct points together with the metric they
/// live in. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    metric: Metric,
}

impl PointSet {
    pub fn new(points: Vec<Point>, metric: Metric) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !metric.contains(*p) {
                return Err(Error::Domain(format!(
                    "point {i} = ({}, {}) is not inside the unit disk",
                    p.re, p.im
                )));
            }
        }
        if let Some((i, j)) = find_duplicate(&points) {
            return Err(Error::InvalidInput(format!(
                "duplicate points at indices {i} and {j}"
            )));
        }
        Ok(PointSet { points, metric })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn complex(&self, i: usize) -> Cplx {
        self.points[i].to_complex()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric.distance_unchecked(self.points[i], self.points[j])
    }

    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let mut pts = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.points.len() {
                return Err(Error::InvalidInput(format!(
                    "index {i} out of bounds for set of size {}",
                    self.points.len()
                )));
            }
            pts.push(self.points[i]);
        }
        PointSet::new(pts, self.metric)
    }
}

/// Returns the indices of one duplicated pair, if any (exact coordinate match).
fn find_duplicate(points: &[Point]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .re
            .total_cmp(&points[b].re)
            .then(points[a].im.total_cmp(&points[b].im))
    });
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        if points[i] == points[j] {
            return Some((i.min(j), i.max(j)));
        }
    }
    None
}

/// A point set split into labelled parts that partition it.
#[derive(Clone, Debug)]
pub struct PartedSet {
    set: PointSet,
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl PartedSet {
    pub fn new(set: PointSet, parts: Vec<Vec<usize>>) -> Result<Self> {
        let n = set.len();
        let mut part_of = vec![usize::MAX; n];
        for (j, part) in parts.iter().enumerate() {
            for &i in part {
                if i >= n {
                    return Err(Error::InvalidInput(format!(
                        "part {j} references index {i} out of bounds ({n} points)"
                    )));
                }
                if part_of[i] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "index {i} appears in parts {} and {j}",
                        part_of[i]
                    )));
                }
                part_of[i] = j;
            }
        }
        if let Some(i) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidInput(format!(
                "index {i} is not covered by any part"
            )));
        }
        Ok(PartedSet { set, parts, part_of })
    }

    /// Builds the union set from separate per-part point sets, concatenated in
    /// the given order. All parts must share one metric.
    pub fn from_part_sets(parts: Vec<PointSet>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("no parts given".into()));
        }
        let metric = parts[0].metric();
        let mut points = Vec::new();
        let mut index_parts = Vec::with_capacity(parts.len());
        for part in &parts {
            if part.metric() != metric {
                return Err(Error::InvalidInput("parts use different metrics".into()));
            }
            let start = points.len();
            points.extend_from_slice(part.points());
            index_parts.push((start..points.len()).collect());
        }
        let set = PointSet::new(points, metric)?;
        PartedSet::new(set, index_parts)
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn n_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, j: usize) -> &[usize] {
        &self.parts[j]
    }

    pub fn part_of(&self, i: usize) -> usize {
        self.part_of[i]
    }

    pub fn part_set(&self, j: usize) -> Result<PointSet> {
        self.set.subset(&self.parts[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im).unwrap()
    }

    #[test]
    fn plane_distance_is_euclidean() {
        let d = Metric::Plane.distance(pt(0.0, 0.0), pt(3.0, 4.0)).unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn disk_distance_from_origin_is_modulus() {
        let z = pt(0.3, -0.4);
        let d = Metric::Disk.distance(pt(0.0, 0.0), z).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn disk_distance_zero_iff_equal() {
        let z = pt(0.5, 0.0);
        assert_eq!(Metric::Disk.distance(z, z).unwrap(), 0.0);
    }

    #[test]
    fn disk_rejects_outside_points() {
        assert!(Metric::Disk.distance(pt(1.5, 0.0), pt(0.0, 0.0)).is_err());
        assert!(PointSet::new(vec![pt(1.0, 0.0)], Metric::Disk).is_err());
    }

    #[test]
    fn duplicate_points_rejected_with_indices() {
        let err = PointSet::new(vec![pt(0.0, 0.0), pt(1.0, 2.0), pt(0.0, 0.0)], Metric::Plane)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('0') && msg.contains('2'), "{msg}");
    }

    #[test]
    fn nonfinite_points_rejected() {
        assert!(Point::new(f64::NAN, 0.0).is_err());
        assert!(Point::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn parted_set_requires_partition() {
        let set = PointSet::new(vec![pt(0.0, 0.0), pt(1.0, 0.0)], Metric::Plane).unwrap();
        assert!(PartedSet::new(set.clone(), vec![vec![0]]).is_err());
        assert!(PartedSet::new(set.clone(), vec![vec![0, 1], vec![1]]).is_err());
        let ok = PartedSet::new(set, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(ok.part_of(1), 1);
    }
}
