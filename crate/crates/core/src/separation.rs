//! Weak separation, the counting condition and greedy decomposition.
//!
//! A set is weakly separated for `(eps, C)` when the disks
//! `D(p, eps * exp(-C p(lambda)))` are pairwise disjoint, i.e. every pair is
//! at least the sum of the two radii apart. The counting condition bounds how
//! many points any single such disk can capture. `decompose` splits a set
//! whose count is at most `n` into `n` weakly separated parts by repeated
//! greedy maximal extraction, with the shrunken parameters
//! `eps' = exp(-E0 C) eps / 2`, `C' = D0 C` inherited from the weight's
//! comparability constants.

use serde::{Deserialize, Serialize};

use crate::divdiff::{divided_difference_nodes, ValuedSet};
use crate::error::{Error, Result};
use crate::geometry::{Cplx, Metric, Point, PointSet};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationParams {
    pub eps: f64,
    pub c: f64,
}

impl SeparationParams {
    pub fn new(eps: f64, c: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("C must be nonnegative, got {c}")));
        }
        Ok(SeparationParams { eps, c })
    }

    /// The shrunken parameters used by one greedy extraction level.
    pub fn translated(&self, w: &Weight) -> SeparationParams {
        SeparationParams {
            eps: (-self.c * w.e0).exp() * self.eps / 2.0,
            c: w.d0 * self.c,
        }
    }

    pub fn radius(&self, p_value: f64) -> f64 {
        self.eps * (-self.c * p_value).exp()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeparationReport {
    pub separated: bool,
    /// Closest strictly violating pair, if any.
    pub witness: Option<(usize, usize)>,
    /// A pair whose disks touch exactly (distance equals the radius sum).
    pub touching: Option<(usize, usize)>,
    /// Minimum of `distance - (r_i + r_j)` over all pairs (+inf for singletons).
    pub min_margin: f64,
}

/// Disjointness of all separation disks: every pair must satisfy
/// `d(p_i, p_j) >= r_i + r_j`.
pub fn is_weakly_separated(
    s: &PointSet,
    w: &Weight,
    params: &SeparationParams,
) -> Result<SeparationReport> {
    if s.metric() != w.metric {
        return Err(Error::InvalidInput("set metric differs from weight metric".into()));
    }
    let radii: Vec<f64> = w
        .eval_many(s.points())?
        .into_iter()
        .map(|p| params.radius(p))
        .collect();
    let mut min_margin = f64::INFINITY;
    let mut worst: Option<(usize, usize)> = None;
    let mut touching = None;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let margin = s.distance(i, j) - (radii[i] + radii[j]);
            if margin < min_margin {
                min_margin = margin;
                worst = Some((i, j));
            }
            if margin == 0.0 && touching.is_none() {
                touching = Some((i, j));
            }
        }
    }
    let separated = min_margin >= 0.0;
    Ok(SeparationReport {
        separated,
        witness: if separated { None } else { worst },
        touching,
        min_margin,
    })
}

/// Largest `eps` for which the set is weakly separated at the given `C`:
/// the minimum over pairs of `d / (exp(-C p_i) + exp(-C p_j))`. Sets with at
/// most one point return `+inf` (every `eps` works).
pub fn max_eps(s: &PointSet, w: &Weight, c: f64) -> Result<f64> {
    if s.metric() != w.metric {
        return Err(Error::InvalidInput("set metric differs from weight metric".into()));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!("C must be nonnegative, got {c}")));
    }
    let p = w.eval_many(s.points())?;
    let mut best = f64::INFINITY;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let unit = (-c * p[i]).exp() + (-c * p[j]).exp();
            best = best.min(s.distance(i, j) / unit);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CountReport {
    /// Max over centers of the number of set points inside the open disk
    /// `D(center, eps * exp(-C p(center)))`, the center included.
    pub max_count: usize,
    pub witness_center: usize,
}

pub fn count_condition(s: &PointSet, w: &Weight, params: &SeparationParams) -> Result<CountReport> {
    if s.metric() != w.metric {
        return Err(Error::InvalidInput("set metric differs from weight metric".into()));
    }
    if s.is_empty() {
        return Ok(CountReport { max_count: 0, witness_center: 0 });
    }
    let p = w.eval_many(s.points())?;
    let mut max_count = 0usize;
    let mut witness_center = 0usize;
    for (i, p_i) in p.iter().enumerate() {
        let r = params.radius(*p_i);
        let mut count = 0usize;
        for j in 0..s.len() {
            if i == j || s.distance(i, j) < r {
                count += 1;
            }
        }
        if count > max_count {
            max_count = count;
            witness_center = i;
        }
    }
    Ok(CountReport { max_count, witness_center })
}

/// A split of the input into parts, each weakly separated for `params_prime`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Per-part indices into the input set, ascending within each part.
    pub parts: Vec<Vec<usize>>,
    pub params_prime: SeparationParams,
}

/// Splits `s` into `n` weakly separated parts, provided every counting disk
/// for `params` holds at most `n` points. Parts are extracted greedily in
/// order of increasing weight (ties by lexicographic coordinates): a point
/// joins the current part when its shrunken disk is disjoint from all disks
/// already accepted into that part. The trailing part absorbs the remainder,
/// which the counting hypothesis leaves weakly separated.
pub fn decompose(
    s: &PointSet,
    w: &Weight,
    params: &SeparationParams,
    n: usize,
) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one part".into()));
    }
    let count = count_condition(s, w, params)?;
    if count.max_count > n {
        return Err(Error::Precondition(format!(
            "counting condition fails: disk at index {} holds {} > {n} points",
            count.witness_center, count.max_count
        )));
    }
    let p = w.eval_many(s.points())?;
    let prime = params.translated(w);

    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| {
        p[a].total_cmp(&p[b])
            .then(s.point(a).re.total_cmp(&s.point(b).re))
            .then(s.point(a).im.total_cmp(&s.point(b).im))
    });

    let mut assigned = vec![false; s.len()];
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(n);
    for level in 0..n {
        let mut part: Vec<usize> = Vec::new();
        if level + 1 == n {
            part.extend(order.iter().copied().filter(|&i| !assigned[i]));
            for &i in &part {
                assigned[i] = true;
            }
        } else {
            for &i in &order {
                if assigned[i] {
                    continue;
                }
                let ri = prime.radius(p[i]);
                let disjoint = part
                    .iter()
                    .all(|&j| s.distance(i, j) >= ri + prime.radius(p[j]));
                if disjoint {
                    part.push(i);
                    assigned[i] = true;
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    debug_assert!(assigned.iter().all(|&a| a));

    // The greedy parts are separated by construction; the trailing part is
    // separated because extraction lowers the counting bound one level per
    // pass, which needs the comparability axiom at distances up to eps.
    // Verify rather than trust it (eps beyond r0 voids the argument).
    for (level, part) in parts.iter().enumerate() {
        let sub = s.subset(part)?;
        let report = is_weakly_separated(&sub, w, &prime)?;
        if !report.separated {
            return Err(Error::Verification(format!(
                "part {level} of the decomposition is not weakly separated \
                 (check eps <= r0 = {})",
                w.r0
            )));
        }
    }
    Ok(Decomposition { parts, params_prime: prime })
}

/// One cluster of the counterexample family: a center with nearby satellites,
/// sorted by increasing distance, all inside the shrinking disk
/// `D(center, (1/scale) exp(-C p(center)))`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cluster {
    pub center: Point,
    pub satellites: Vec<Point>,
    /// The shrink index `l >= 1`.
    pub scale: usize,
}

#[derive(Clone, Debug)]
pub struct ClusterFamily {
    pub clusters: Vec<Cluster>,
    pub metric: Metric,
    /// The exponent used in the shrinking radii.
    pub c: f64,
}

impl ClusterFamily {
    pub fn validate(&self, w: &Weight) -> Result<()> {
        if w.metric != self.metric {
            return Err(Error::InvalidInput("family metric differs from weight metric".into()));
        }
        for (idx, cl) in self.clusters.iter().enumerate() {
            if cl.scale == 0 {
                return Err(Error::InvalidInput(format!("cluster {idx} has scale 0")));
            }
            if cl.satellites.is_empty() {
                return Err(Error::InvalidInput(format!("cluster {idx} has no satellites")));
            }
            let p_center = w.eval(cl.center)?;
            let radius = (1.0 / cl.scale as f64) * (-self.c * p_center).exp();
            let mut last = 0.0f64;
            for (k, sat) in cl.satellites.iter().enumerate() {
                let d = self.metric.distance(cl.center, *sat)?;
                if d == 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "cluster {idx} satellite {k} coincides with the center"
                    )));
                }
                if d > radius {
                    return Err(Error::InvalidInput(format!(
                        "cluster {idx} satellite {k} at distance {d} outside radius {radius}"
                    )));
                }
                if d < last {
                    return Err(Error::InvalidInput(format!(
                        "cluster {idx} satellites are not sorted by distance"
                    )));
                }
                last = d;
            }
        }
        Ok(())
    }
}

/// Index bookkeeping for one cluster inside the flattened counterexample set.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterTuple {
    pub center: usize,
    pub satellites: Vec<usize>,
    pub scale: usize,
}

/// The counterexample values on a cluster family, flattened into one set.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub valued: ValuedSet,
    pub tuples: Vec<ClusterTuple>,
    pub order: usize,
}

/// Values that keep order-`(n-1)` differences bounded while order-`n`
/// differences blow up with the cluster scale: each center carries the
/// product of its distances to the first `n - 1` satellites (as difference
/// factors of the ambient metric) and every satellite carries zero.
pub fn counterexample_sequence(family: &ClusterFamily, n: usize) -> Result<Counterexample> {
    if n == 0 {
        return Err(Error::InvalidInput("order count n must be >= 1".into()));
    }
    for (idx, cl) in family.clusters.iter().enumerate() {
        if cl.satellites.len() < n {
            return Err(Error::InvalidInput(format!(
                "cluster {idx} has {} satellites, need {n}",
                cl.satellites.len()
            )));
        }
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut tuples = Vec::with_capacity(family.clusters.len());
    for cl in &family.clusters {
        let center_index = points.len();
        points.push(cl.center);
        let alpha = cl.center.to_complex();
        let mut omega = Cplx::new(1.0, 0.0);
        for sat in cl.satellites.iter().take(n.saturating_sub(1)) {
            omega *= family.metric.diff_factor(sat.to_complex(), alpha);
        }
        values.push(omega);
        let mut sat_idx = Vec::with_capacity(cl.satellites.len());
        for sat in &cl.satellites {
            sat_idx.push(points.len());
            points.push(*sat);
            values.push(Cplx::new(0.0, 0.0));
        }
        tuples.push(ClusterTuple {
            center: center_index,
            satellites: sat_idx,
            scale: cl.scale,
        });
    }
    let set = PointSet::new(points, family.metric)?;
    let valued = ValuedSet::new(set, values)?;
    Ok(Counterexample { valued, tuples, order: n })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlowupPoint {
    pub scale: usize,
    pub value: f64,
}

/// For each cluster, the damped modulus of the order-`n` difference over
/// `(satellite_1, ..., satellite_n, center)`. When the family was built with
/// `C = B (n D0 + 1)` these values are at least `scale * exp(-B n E0)`.
pub fn blowup_curve(
    cx: &Counterexample,
    w: &Weight,
    n: usize,
    b: f64,
) -> Result<Vec<BlowupPoint>> {
    if n > cx.order {
        return Err(Error::InvalidInput(format!(
            "counterexample was built for order {}, requested {n}",
            cx.order
        )));
    }
    let metric = cx.valued.set().metric();
    if w.metric != metric {
        return Err(Error::InvalidInput("weight metric differs from set metric".into()));
    }
    let mut out = Vec::with_capacity(cx.tuples.len());
    for tuple in &cx.tuples {
        let mut idx: Vec<usize> = tuple.satellites[..n].to_vec();
        idx.push(tuple.center);
        let nodes: Vec<Cplx> = idx.iter().map(|&i| cx.valued.set().complex(i)).collect();
        let vals: Vec<Cplx> = idx.iter().map(|&i| cx.valued.value(i)).collect();
        let dd = divided_difference_nodes(&nodes, &vals, metric);
        let points: Vec<Point> = idx.iter().map(|&i| cx.valued.set().point(i)).collect();
        let psum = w.eval_sum(&points)?;
        out.push(BlowupPoint {
            scale: tuple.scale,
            value: dd.norm() * (-b * psum).exp(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divdiff::DivDiffRequest;

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im).unwrap()
    }

    fn plane_set(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(coords.iter().map(|&(a, b)| pt(a, b)).collect(), Metric::Plane).unwrap()
    }

    #[test]
    fn singleton_is_always_separated() {
        let s = plane_set(&[(0.0, 0.0)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(100.0, 0.0).unwrap();
        let r = is_weakly_separated(&s, &w, &params).unwrap();
        assert!(r.separated);
        assert!(r.witness.is_none());
    }

    #[test]
    fn zero_and_three_are_separated_for_unit_params() {
        // required gap = e^0 + e^{-ln 10} = 1.1 <= 3
        let s = plane_set(&[(0.0, 0.0), (3.0, 0.0)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(1.0, 1.0).unwrap();
        let r = is_weakly_separated(&s, &w, &params).unwrap();
        assert!(r.separated, "{r:?}");
        // brute-force the single pair by hand
        let p0 = w.eval(pt(0.0, 0.0)).unwrap();
        let p1 = w.eval(pt(3.0, 0.0)).unwrap();
        let needed = (-p0).exp() + (-p1).exp();
        assert!((needed - 1.1).abs() < 1e-12);
    }

    #[test]
    fn near_coincident_pair_is_not_separated() {
        let s = plane_set(&[(0.0, 0.0), (1e-6, 0.0)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(1.0, 1.0).unwrap();
        let r = is_weakly_separated(&s, &w, &params).unwrap();
        assert!(!r.separated);
        assert_eq!(r.witness, Some((0, 1)));
    }

    #[test]
    fn max_eps_pair_at_c_zero() {
        let s = plane_set(&[(0.0, 0.0), (3.0, 0.0)]);
        let w = Weight::log_plane();
        assert!((max_eps(&s, &w, 0.0).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn max_eps_governed_by_nearest_pair() {
        let s = plane_set(&[(0.0, 0.0), (3.0, 0.0), (6.0, 0.0)]);
        let w = Weight::log_plane();
        assert!((max_eps(&s, &w, 0.0).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn max_eps_of_singleton_is_infinite() {
        let s = plane_set(&[(2.0, 1.0)]);
        let w = Weight::log_plane();
        assert!(max_eps(&s, &w, 1.0).unwrap().is_infinite());
    }

    #[test]
    fn max_eps_matches_brute_force_on_random_points() {
        // fixed pseudo-random 20-point cloud
        let mut coords = Vec::new();
        let mut x = 0.123f64;
        for _ in 0..20 {
            x = (x * 997.0 + 0.31).fract();
            let y = (x * 613.0 + 0.17).fract();
            coords.push((6.0 * x - 3.0, 6.0 * y - 3.0));
        }
        let s = plane_set(&coords);
        let w = Weight::log_plane();
        let c = 0.8;
        let got = max_eps(&s, &w, c).unwrap();
        // independent pair loop
        let p = w.eval_many(s.points()).unwrap();
        let mut expect = f64::INFINITY;
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i < j {
                    let d = s.distance(i, j);
                    expect = expect.min(d / ((-c * p[i]).exp() + (-c * p[j]).exp()));
                }
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn max_eps_is_the_separation_threshold() {
        let s = plane_set(&[(0.0, 0.0), (1.2, 0.4), (3.0, -0.8), (-2.0, 2.0), (4.5, 3.0)]);
        let w = Weight::log_plane();
        let c = 0.7;
        let threshold = max_eps(&s, &w, c).unwrap();
        let below = SeparationParams::new(threshold * (1.0 - 1e-9), c).unwrap();
        let above = SeparationParams::new(threshold * (1.0 + 1e-9), c).unwrap();
        assert!(is_weakly_separated(&s, &w, &below).unwrap().separated);
        assert!(!is_weakly_separated(&s, &w, &above).unwrap().separated);
    }

    #[test]
    fn count_is_one_on_separated_sets() {
        let s = plane_set(&[(0.0, 0.0), (3.0, 0.0), (6.0, 0.0)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(1.0, 1.0).unwrap();
        assert!(is_weakly_separated(&s, &w, &params).unwrap().separated);
        assert_eq!(count_condition(&s, &w, &params).unwrap().max_count, 1);
    }

    #[test]
    fn count_sees_clustered_points() {
        let w = Weight::log_plane();
        let params = SeparationParams::new(1.0, 0.0).unwrap();
        let s = plane_set(&[(0.0, 0.0), (0.3, 0.0)]);
        assert_eq!(count_condition(&s, &w, &params).unwrap().max_count, 2);
        let m = plane_set(&[(0.0, 0.0), (0.2, 0.0), (0.0, 0.2), (0.2, 0.2)]);
        assert_eq!(count_condition(&m, &w, &params).unwrap().max_count, 4);
    }

    #[test]
    fn decompose_separated_set_is_identity() {
        let s = plane_set(&[(0.0, 0.0), (3.0, 0.0), (6.0, 0.0)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(1.0, 1.0).unwrap();
        let d = decompose(&s, &w, &params, 1).unwrap();
        assert_eq!(d.parts, vec![vec![0, 1, 2]]);
        let part = s.subset(&d.parts[0]).unwrap();
        assert!(is_weakly_separated(&part, &w, &d.params_prime).unwrap().separated);
    }

    #[test]
    fn decompose_two_interleaved_pairs() {
        let s = plane_set(&[(0.0, 0.0), (0.05, 0.0), (3.0, 0.0), (3.05, 0.0)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(0.5, 0.5).unwrap();
        assert!(count_condition(&s, &w, &params).unwrap().max_count <= 2);
        let d = decompose(&s, &w, &params, 2).unwrap();
        assert_eq!(d.parts.len(), 2);
        let mut all: Vec<usize> = d.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
        for part in &d.parts {
            let sub = s.subset(part).unwrap();
            assert!(
                is_weakly_separated(&sub, &w, &d.params_prime).unwrap().separated,
                "part {part:?}"
            );
        }
    }

    #[test]
    fn decompose_rejects_excess_count() {
        let s = plane_set(&[(0.0, 0.0), (0.01, 0.0), (0.0, 0.01)]);
        let w = Weight::log_plane();
        let params = SeparationParams::new(1.0, 0.0).unwrap();
        let err = decompose(&s, &w, &params, 2).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    fn small_family(n: usize, levels: usize, c: f64) -> ClusterFamily {
        let w = Weight::log_plane();
        let mut clusters = Vec::new();
        for l in 1..=levels {
            let theta = 2.0 * std::f64::consts::PI * l as f64 / levels as f64;
            let center = pt(1.5 * theta.cos(), 1.5 * theta.sin());
            let p = w.eval(center).unwrap();
            let radius = (1.0 / l as f64) * (-c * p).exp();
            let mut satellites = Vec::new();
            for k in 1..=n {
                let frac = 0.4 + 0.5 * k as f64 / n as f64;
                let phi = theta + 0.3 * k as f64;
                satellites.push(
                    Point::new(
                        center.re + frac * radius * phi.cos(),
                        center.im + frac * radius * phi.sin(),
                    )
                    .unwrap(),
                );
            }
            clusters.push(Cluster { center, satellites, scale: l });
        }
        ClusterFamily { clusters, metric: Metric::Plane, c }
    }

    #[test]
    fn counterexample_moduli_match_closed_forms() {
        let n = 2;
        let b = 1.0;
        let w = Weight::log_plane();
        let c = b * (n as f64 * w.d0 + 1.0);
        let family = small_family(n, 5, c);
        family.validate(&w).unwrap();
        let cx = counterexample_sequence(&family, n).unwrap();
        let set = cx.valued.set().clone();
        for tuple in &cx.tuples {
            // order n-1 over (sat_1..sat_{n-1}, center) has modulus exactly 1
            let mut idx: Vec<usize> = tuple.satellites[..n - 1].to_vec();
            idx.push(tuple.center);
            let req = DivDiffRequest::new(idx).unwrap();
            let dd = crate::divdiff::divided_difference(&cx.valued, &req, Metric::Plane).unwrap();
            assert!((dd.norm() - 1.0).abs() < 1e-12, "{}", dd.norm());

            // order n over (sat_1..sat_n, center) has modulus 1/|center - sat_n|
            let mut idx: Vec<usize> = tuple.satellites[..n].to_vec();
            idx.push(tuple.center);
            let req = DivDiffRequest::new(idx.clone()).unwrap();
            let dd = crate::divdiff::divided_difference(&cx.valued, &req, Metric::Plane).unwrap();
            let gap = (set.complex(tuple.center) - set.complex(tuple.satellites[n - 1])).norm();
            assert!((dd.norm() - 1.0 / gap).abs() < 1e-9 / gap);
        }
    }

    #[test]
    fn all_satellite_tuples_have_zero_difference() {
        let family = small_family(3, 4, 2.0);
        let cx = counterexample_sequence(&family, 3).unwrap();
        let idx = cx.tuples[0].satellites.clone();
        let req = DivDiffRequest::new(idx).unwrap();
        let dd = crate::divdiff::divided_difference(&cx.valued, &req, Metric::Plane).unwrap();
        assert_eq!(dd.norm(), 0.0);
    }

    #[test]
    fn blowup_curve_diverges_linearly() {
        let n = 2;
        let b = 1.0;
        let w = Weight::log_plane();
        let c = b * (n as f64 * w.d0 + 1.0);
        let family = small_family(n, 12, c);
        family.validate(&w).unwrap();
        let cx = counterexample_sequence(&family, n).unwrap();
        let curve = blowup_curve(&cx, &w, n, b).unwrap();
        let floor = (-b * n as f64 * w.e0).exp();
        for bp in &curve {
            assert!(
                bp.value >= bp.scale as f64 * floor * (1.0 - 1e-6),
                "scale {} value {} floor {}",
                bp.scale,
                bp.value,
                bp.scale as f64 * floor
            );
        }
    }

    #[test]
    fn blowup_without_damping_is_the_inverse_gap() {
        let n = 2;
        let family = small_family(n, 3, 3.0);
        let cx = counterexample_sequence(&family, n).unwrap();
        let curve = blowup_curve(&cx, &Weight::log_plane(), n, 0.0).unwrap();
        for (tuple, bp) in cx.tuples.iter().zip(&curve) {
            let set = cx.valued.set();
            let gap = (set.complex(tuple.center) - set.complex(tuple.satellites[n - 1])).norm();
            assert!((bp.value - 1.0 / gap).abs() <= 1e-9 / gap);
        }
    }
}
