//! Inductive disk covering of a union of weakly separated parts.
//!
//! Given parts `P_1, ..., P_n` whose within-part gaps satisfy
//! `d(x, y) >= eps * exp(-(C/D0)(p(x) - E0))`, the builder produces disks
//! centered at a subset of the union such that
//!
//! * every union point is covered,
//! * radii are pinned between `a eps exp(-B1 p)` and `b eps exp(-B2 p)`,
//! * distinct disks stay `a eps exp(-B1 p)` apart,
//! * no disk holds two points of one part,
//!
//! with the explicit constants `a = 2^{-3n} exp(-B_n)`, `b = 2/7`,
//! `B1 = C_n`, `B2 = C`. Stages absorb one part at a time: centers whose
//! slightly inflated disk reaches the new part grow by the inflation, other
//! centers keep their radius, and unreached new points join as fresh centers
//! with the next stage's scale. The stage scales `(C_k, B_k)` follow the
//! minimal recurrence `C_{k+1} = D0 C_k`, `B_{k+1} = B_k + C_k E0`, which the
//! comparability axiom makes monotone across close pairs.
//!
//! The verifier re-checks every clause numerically; the builder treats a
//! verification failure as an internal bug.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PartedSet;
use crate::weight::Weight;

/// Relative slack for radius-bound comparisons; absolute slack for the
/// disk-separation distances.
const VERIFY_REL_TOL: f64 = 1e-12;
const VERIFY_ABS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoverConstants {
    pub a: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub eps: f64,
}

/// Per-stage scales `(C_k, B_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StageConstants {
    pub c: Vec<f64>,
    pub b: Vec<f64>,
}

/// `C_1 = C`, `B_1 = 0`, then `C_{k+1} = D0 C_k` and `B_{k+1} = B_k + C_k E0`.
pub fn stage_constants(w: &Weight, c: f64, n: usize) -> StageConstants {
    let mut cs = Vec::with_capacity(n);
    let mut bs = Vec::with_capacity(n);
    let mut ck = c;
    let mut bk = 0.0;
    for _ in 0..n {
        cs.push(ck);
        bs.push(bk);
        let next_b = bk + ck * w.e0;
        let next_c = w.d0 * ck;
        ck = next_c;
        bk = next_b;
    }
    StageConstants { c: cs, b: bs }
}

/// Snapshot of one construction stage.
#[derive(Clone, Debug, Serialize)]
pub struct CoverStage {
    pub stage: usize,
    pub c_k: f64,
    pub b_k: f64,
    /// Center indices into the union set, in insertion order.
    pub members: Vec<usize>,
    pub radii: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Covering {
    /// Center indices into the union set, in insertion order.
    pub centers: Vec<usize>,
    pub radii: Vec<f64>,
    pub constants: CoverConstants,
    pub trace: Vec<CoverStage>,
    /// Union points covered by each disk (center rank -> union indices).
    pub disk_members: Vec<Vec<usize>>,
    /// Covering center rank for each union point.
    pub point_center: Vec<usize>,
}

impl Covering {
    /// Rank of the (unique) disk covering union point `i`.
    pub fn center_of(&self, i: usize) -> usize {
        self.point_center[i]
    }
}

/// Checks the within-part gap hypothesis; returns the offending pair on
/// failure.
pub fn check_separation_hypothesis(
    parted: &PartedSet,
    w: &Weight,
    eps: f64,
    c: f64,
) -> Result<()> {
    let set = parted.set();
    let p = w.eval_many(set.points())?;
    for (j, part) in parted.parts().iter().enumerate() {
        for (ai, &i1) in part.iter().enumerate() {
            for &i2 in &part[ai + 1..] {
                let d = set.distance(i1, i2);
                let need = (eps * (-(c / w.d0) * (p[i1] - w.e0)).exp())
                    .max(eps * (-(c / w.d0) * (p[i2] - w.e0)).exp());
                if d < need {
                    return Err(Error::Precondition(format!(
                        "part {j}: points {i1} and {i2} at distance {d} violate the \
                         separation hypothesis (need {need})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Largest `eps` (capped below 1) for which the separation hypothesis holds
/// at the given `C`, shrunk by a small safety factor.
pub fn covering_params(parted: &PartedSet, w: &Weight, c: f64) -> Result<f64> {
    let set = parted.set();
    let p = w.eval_many(set.points())?;
    let mut feasible = f64::INFINITY;
    for part in parted.parts() {
        for (ai, &i1) in part.iter().enumerate() {
            for &i2 in &part[ai + 1..] {
                let d = set.distance(i1, i2);
                let unit = (-(c / w.d0) * (p[i1] - w.e0))
                    .exp()
                    .max((-(c / w.d0) * (p[i2] - w.e0)).exp());
                feasible = feasible.min(d / unit);
            }
        }
    }
    let eps = (0.95 * feasible).min(0.95);
    if eps <= 0.0 || eps.is_nan() {
        return Err(Error::Precondition(
            "parts admit no positive separation scale".into(),
        ));
    }
    Ok(eps)
}

pub fn build_covering(parted: &PartedSet, w: &Weight, eps: f64, c: f64) -> Result<Covering> {
    let set = parted.set();
    if set.metric() != w.metric {
        return Err(Error::InvalidInput("set metric differs from weight metric".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInput(format!("eps must be in (0, 1], got {eps}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!("C must be positive, got {c}")));
    }
    if parted.n_parts() == 0 {
        return Err(Error::InvalidInput("need at least one part".into()));
    }
    check_separation_hypothesis(parted, w, eps, c)?;

    let n = parted.n_parts();
    let p = w.eval_many(set.points())?;
    let scales = stage_constants(w, c, n);

    // stage 1: every point of the first part, radius eps e^{-C p} / 4
    let mut centers: Vec<usize> = parted.part(0).to_vec();
    let mut radii: Vec<f64> = centers.iter().map(|&i| eps * (-c * p[i]).exp() / 4.0).collect();
    let mut trace = vec![CoverStage {
        stage: 1,
        c_k: scales.c[0],
        b_k: scales.b[0],
        members: centers.clone(),
        radii: radii.clone(),
    }];

    for k in 1..n {
        let (c_k, b_k) = (scales.c[k - 1], scales.b[k - 1]);
        let (c_k1, b_k1) = (scales.c[k], scales.b[k]);
        let inflate =
            |idx: usize| 2f64.powi(-(3 * k as i32) - 2) * eps * (-c_k * p[idx] - b_k).exp();

        // which existing disks reach the new part, and which new points they capture
        let mut captured = vec![false; set.len()];
        let mut grow = vec![false; centers.len()];
        for (rank, &lam) in centers.iter().enumerate() {
            let reach = radii[rank] + inflate(lam);
            for &nu in parted.part(k) {
                if set.distance(lam, nu) <= reach {
                    grow[rank] = true;
                    captured[nu] = true;
                }
            }
        }
        for (rank, &lam) in centers.iter().enumerate() {
            if grow[rank] {
                radii[rank] += inflate(lam);
            }
        }
        for &nu in parted.part(k) {
            if !captured[nu] {
                centers.push(nu);
                radii.push(2f64.powi(-(3 * k as i32) - 3) * eps * (-c_k1 * p[nu] - b_k1).exp());
            }
        }
        trace.push(CoverStage {
            stage: k + 1,
            c_k: c_k1,
            b_k: b_k1,
            members: centers.clone(),
            radii: radii.clone(),
        });
    }

    let b_n = scales.b[n - 1];
    let constants = CoverConstants {
        a: 2f64.powi(-(3 * n as i32)) * (-b_n).exp(),
        b: 2.0 / 7.0,
        b1: scales.c[n - 1],
        b2: c,
        eps,
    };

    // locate every union point in its (unique) disk
    let mut point_center = vec![usize::MAX; set.len()];
    let mut disk_members = vec![Vec::new(); centers.len()];
    for i in 0..set.len() {
        for (rank, &lam) in centers.iter().enumerate() {
            if set.distance(lam, i) <= radii[rank] {
                if point_center[i] != usize::MAX {
                    return Err(Error::Verification(format!(
                        "point {i} lies in two disks (centers {} and {lam})",
                        centers[point_center[i]]
                    )));
                }
                point_center[i] = rank;
            }
        }
        if point_center[i] == usize::MAX {
            return Err(Error::Verification(format!("point {i} is not covered by any disk")));
        }
        disk_members[point_center[i]].push(i);
    }

    let cov = Covering {
        centers,
        radii,
        constants,
        trace,
        disk_members,
        point_center,
    };
    let report = verify_covering(&cov, parted, w)?;
    if !report.all_pass() {
        return Err(Error::Verification(format!(
            "covering failed its own verification: {}",
            report.first_failure().unwrap_or_default()
        )));
    }
    Ok(cov)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseResult {
    pub pass: bool,
    pub witness: Option<String>,
}

impl ClauseResult {
    fn ok() -> Self {
        ClauseResult { pass: true, witness: None }
    }

    fn fail(witness: String) -> Self {
        ClauseResult { pass: false, witness: Some(witness) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub coverage: ClauseResult,
    pub radius_bounds: ClauseResult,
    pub disk_separation: ClauseResult,
    pub single_hit: ClauseResult,
    pub stage_bounds: ClauseResult,
    pub monotone_radii: ClauseResult,
}

impl CoverReport {
    pub fn all_pass(&self) -> bool {
        self.coverage.pass
            && self.radius_bounds.pass
            && self.disk_separation.pass
            && self.single_hit.pass
            && self.stage_bounds.pass
            && self.monotone_radii.pass
    }

    pub fn first_failure(&self) -> Option<String> {
        let clauses = [
            ("coverage", &self.coverage),
            ("radius_bounds", &self.radius_bounds),
            ("disk_separation", &self.disk_separation),
            ("single_hit", &self.single_hit),
            ("stage_bounds", &self.stage_bounds),
            ("monotone_radii", &self.monotone_radii),
        ];
        for (name, clause) in clauses {
            if !clause.pass {
                return Some(format!(
                    "{name}: {}",
                    clause.witness.clone().unwrap_or_default()
                ));
            }
        }
        None
    }
}

pub fn verify_covering(cov: &Covering, parted: &PartedSet, w: &Weight) -> Result<CoverReport> {
    let set = parted.set();
    let p = w.eval_many(set.points())?;
    let k = &cov.constants;

    // (i) every union point is inside some disk
    let mut coverage = ClauseResult::ok();
    'cov: for i in 0..set.len() {
        for (rank, &lam) in cov.centers.iter().enumerate() {
            if set.distance(lam, i) <= cov.radii[rank] {
                continue 'cov;
            }
        }
        coverage = ClauseResult::fail(format!("point {i} is uncovered"));
        break;
    }

    // (ii) radius window
    let mut radius_bounds = ClauseResult::ok();
    for (rank, &lam) in cov.centers.iter().enumerate() {
        let lo = k.a * k.eps * (-k.b1 * p[lam]).exp();
        let hi = k.b * k.eps * (-k.b2 * p[lam]).exp();
        let r = cov.radii[rank];
        if r < lo * (1.0 - VERIFY_REL_TOL) || r > hi * (1.0 + VERIFY_REL_TOL) {
            radius_bounds =
                ClauseResult::fail(format!("center {lam}: radius {r} outside [{lo}, {hi}]"));
            break;
        }
    }

    // (iii) inter-disk gaps, lower bound taken at both centers
    let mut disk_separation = ClauseResult::ok();
    'sep: for (ra, &la) in cov.centers.iter().enumerate() {
        for (rb, &lb) in cov.centers.iter().enumerate().skip(ra + 1) {
            let gap = set.distance(la, lb) - cov.radii[ra] - cov.radii[rb];
            let need =
                (k.a * k.eps * (-k.b1 * p[la]).exp()).max(k.a * k.eps * (-k.b1 * p[lb]).exp());
            if gap < need - VERIFY_ABS_TOL {
                disk_separation = ClauseResult::fail(format!(
                    "disks at {la} and {lb}: gap {gap} below {need}"
                ));
                break 'sep;
            }
        }
    }

    // (iv) at most one point of each part per disk
    let mut single_hit = ClauseResult::ok();
    'hit: for (rank, &lam) in cov.centers.iter().enumerate() {
        for (j, part) in parted.parts().iter().enumerate() {
            let mut count = 0usize;
            for &i in part {
                if set.distance(lam, i) <= cov.radii[rank] {
                    count += 1;
                }
            }
            if count > 1 {
                single_hit = ClauseResult::fail(format!(
                    "disk at {lam} holds {count} points of part {j}"
                ));
                break 'hit;
            }
        }
    }

    // per-stage window 2^{-3k} e^{-C_k p - B_k} eps <= R <= (2/7) e^{-C p} eps
    let mut stage_bounds = ClauseResult::ok();
    'stage: for st in &cov.trace {
        let scale = 2f64.powi(-(3 * st.stage as i32));
        for (rank, &lam) in st.members.iter().enumerate() {
            let r = st.radii[rank];
            let lo = scale * (-st.c_k * p[lam] - st.b_k).exp() * k.eps;
            let hi = (2.0 / 7.0) * (-k.b2 * p[lam]).exp() * k.eps;
            if r < lo * (1.0 - VERIFY_REL_TOL) || r > hi * (1.0 + VERIFY_REL_TOL) {
                stage_bounds = ClauseResult::fail(format!(
                    "stage {}: center {lam} radius {r} outside [{lo}, {hi}]",
                    st.stage
                ));
                break 'stage;
            }
        }
    }

    // radii never shrink for surviving centers
    let mut monotone_radii = ClauseResult::ok();
    'mono: for pair in cov.trace.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        for (rank, &lam) in prev.members.iter().enumerate() {
            debug_assert_eq!(next.members[rank], lam);
            if next.radii[rank] < prev.radii[rank] {
                monotone_radii = ClauseResult::fail(format!(
                    "stage {}: radius at {lam} shrank",
                    next.stage
                ));
                break 'mono;
            }
        }
    }

    Ok(CoverReport {
        coverage,
        radius_bounds,
        disk_separation,
        single_hit,
        stage_bounds,
        monotone_radii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Metric, Point, PointSet};

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im).unwrap()
    }

    fn plane_set(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(coords.iter().map(|&(a, b)| pt(a, b)).collect(), Metric::Plane).unwrap()
    }

    #[test]
    fn stage_constants_constant_weight() {
        let w = Weight::new(
            crate::weight::WeightKind::LogOnePlusSq,
            1.0,
            1.0,
            0.0,
            Metric::Plane,
            1.0,
        )
        .unwrap();
        let s = stage_constants(&w, 2.0, 4);
        assert_eq!(s.c, vec![2.0; 4]);
        assert_eq!(s.b, vec![0.0; 4]);
    }

    #[test]
    fn stage_constants_recurrence() {
        let w = Weight::new(
            crate::weight::WeightKind::LogOnePlusSq,
            1.0,
            2.0,
            1.0,
            Metric::Plane,
            1.0,
        )
        .unwrap();
        let s = stage_constants(&w, 1.0, 3);
        assert_eq!(s.c, vec![1.0, 2.0, 4.0]);
        assert_eq!(s.b, vec![0.0, 1.0, 3.0]);
    }

    #[test]
    fn stage_constants_are_monotone_on_close_pairs() {
        // C_k p(x) + B_k <= C_{k+1} p(y) + B_{k+1} whenever d(x, y) <= r0
        let w = Weight::log_plane();
        let s = stage_constants(&w, 0.5, 3);
        let pts: Vec<Point> = (0..40)
            .map(|i| pt(0.11 * i as f64, (0.07 * i as f64).sin()))
            .collect();
        for a in &pts {
            for b in &pts {
                if Metric::Plane.distance_unchecked(*a, *b) <= w.r0 {
                    let pa = w.eval(*a).unwrap();
                    let pb = w.eval(*b).unwrap();
                    for k in 0..2 {
                        assert!(
                            s.c[k] * pa + s.b[k] <= s.c[k + 1] * pb + s.b[k + 1] + 1e-12,
                            "k={k} pa={pa} pb={pb}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_part_base_case() {
        let set = plane_set(&[(0.0, 0.0), (3.0, 0.0), (0.0, 3.0)]);
        let parted = PartedSet::new(set, vec![vec![0, 1, 2]]).unwrap();
        let w = Weight::log_plane();
        let c = 0.5;
        let eps = covering_params(&parted, &w, c).unwrap();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        assert_eq!(cov.centers, vec![0, 1, 2]);
        let p = w.eval_many(parted.set().points()).unwrap();
        for (rank, &i) in cov.centers.iter().enumerate() {
            let expect = eps * (-c * p[i]).exp() / 4.0;
            assert_eq!(cov.radii[rank], expect);
        }
        let report = verify_covering(&cov, &parted, &w).unwrap();
        assert!(report.all_pass(), "{:?}", report.first_failure());
    }

    #[test]
    fn close_second_part_point_is_absorbed() {
        // second part point within the inflated stage-1 disk: center count stays 1
        let w = Weight::log_plane();
        let c = 0.5;
        let eps = 0.8;
        // stage-1 radius at 0 is eps/4 = 0.2; inflation is 2^{-5} eps e^{-C_1 p - B_1} = 0.025
        let d = 0.21;
        let set = plane_set(&[(0.0, 0.0), (d, 0.0)]);
        let parted = PartedSet::new(set, vec![vec![0], vec![1]]).unwrap();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        assert_eq!(cov.centers, vec![0]);
        let grown = eps / 4.0 + 2f64.powi(-5) * eps;
        assert!((cov.radii[0] - grown).abs() < 1e-15);
        assert_eq!(cov.disk_members[0], vec![0, 1]);
    }

    #[test]
    fn far_second_part_point_becomes_center() {
        let w = Weight::log_plane();
        let c = 0.5;
        let eps = 0.8;
        let set = plane_set(&[(0.0, 0.0), (2.0, 0.0)]);
        let parted = PartedSet::new(set, vec![vec![0], vec![1]]).unwrap();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        assert_eq!(cov.centers, vec![0, 1]);
        let scales = stage_constants(&w, c, 2);
        let p1 = w.eval(pt(2.0, 0.0)).unwrap();
        let expect = 2f64.powi(-6) * eps * (-scales.c[1] * p1 - scales.b[1]).exp();
        assert_eq!(cov.radii[1], expect);
    }

    #[test]
    fn verifier_rejects_zeroed_radius_and_overlap() {
        let set = plane_set(&[(0.0, 0.0), (3.0, 0.0), (6.0, 0.0)]);
        let parted = PartedSet::new(set, vec![vec![0, 1, 2]]).unwrap();
        let w = Weight::log_plane();
        let cov = build_covering(&parted, &w, 0.9, 0.5).unwrap();

        let mut zeroed = cov.clone();
        zeroed.radii[1] = 0.0;
        let report = verify_covering(&zeroed, &parted, &w).unwrap();
        assert!(!report.coverage.pass || !report.radius_bounds.pass);

        let mut overlapping = cov.clone();
        overlapping.radii[0] = 2.0;
        let report = verify_covering(&overlapping, &parted, &w).unwrap();
        assert!(!report.disk_separation.pass || !report.radius_bounds.pass);
    }

    #[test]
    fn construction_is_deterministic() {
        let set = plane_set(&[
            (0.0, 0.0),
            (0.1, 0.0),
            (3.0, 0.2),
            (3.1, 0.2),
            (0.2, 3.0),
            (6.0, 1.0),
        ]);
        let parted = PartedSet::new(set, vec![vec![0, 2, 4, 5], vec![1, 3]]).unwrap();
        let w = Weight::log_plane();
        let c = 0.5;
        let eps = covering_params(&parted, &w, c).unwrap();
        let cov1 = build_covering(&parted, &w, eps, c).unwrap();
        let cov2 = build_covering(&parted, &w, eps, c).unwrap();
        assert_eq!(cov1.centers, cov2.centers);
        assert_eq!(cov1.radii, cov2.radii);
        assert_eq!(cov1.trace.len(), cov2.trace.len());
    }

    #[test]
    fn hypothesis_violation_names_the_pair() {
        let set = plane_set(&[(0.0, 0.0), (1e-9, 0.0)]);
        let parted = PartedSet::new(set, vec![vec![0, 1]]).unwrap();
        let w = Weight::log_plane();
        let err = build_covering(&parted, &w, 0.9, 0.5).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("points 0 and 1"), "{msg}");
    }
}
