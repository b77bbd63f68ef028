//! Scenario generators and the suite runner.
//!
//! Scenarios are deterministic functions of `(kind, seed)` via a seeded
//! ChaCha8 stream, so identical invocations produce byte-identical reports.
//! Suites drive the library pipelines over generated families and emit one
//! pass/fail record per invariant per instance. Wall-clock measurements are
//! never written into reports.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covering::{build_covering, covering_params, stage_constants, verify_covering};
use crate::divdiff::{
    contour_oracle, divided_difference_nodes, seminorm, SeminormMode, ValuedSet,
};
use crate::error::{Error, Result};
use crate::expr::FunctionExpr;
use crate::geometry::{Cplx, Metric, PartedSet, Point, PointSet};
use crate::interpolate::{assemble, extend_values, DPolicy};
use crate::separation::{
    blowup_curve, count_condition, counterexample_sequence, decompose, is_weakly_separated,
    max_eps, Cluster, ClusterFamily, SeparationParams,
};
use crate::weight::Weight;

pub const PRNG_NAME: &str = "chacha8";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScenarioKind {
    /// Square lattice `(i step, j step)` with `0 <= i step, j step <= extent`.
    Lattice { step: f64, extent: f64 },
    /// Lattice with per-point jitter of magnitude `jitter * step`.
    PerturbedLattice { step: f64, extent: f64, jitter: f64 },
    /// Rings `|z| = 1 - 2^{-k}` with `2^k` points each, `k = 1..=rings`.
    RadialDisk { rings: usize },
    /// `levels` shrinking clusters of `n` satellites with exponent
    /// `C = n D0 + 1` (the damping level is pinned to 1).
    Clustered { n: usize, levels: usize },
    /// Union of `n` interleaved near-lattice parts.
    UnionOfSeparated { n: usize, bases: usize, metric: Metric },
}

#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub set: PointSet,
    pub parts: Option<Vec<Vec<usize>>>,
    pub clusters: Option<ClusterFamily>,
    /// Parameters for which the instance satisfies the counting condition.
    pub suggested: Option<SeparationParams>,
}

impl Generated {
    pub fn parted(&self) -> Result<PartedSet> {
        let parts = self
            .parts
            .clone()
            .ok_or_else(|| Error::InvalidInput("scenario has no part annotation".into()))?;
        PartedSet::new(self.set.clone(), parts)
    }
}

/// The exponent scale used by generated multi-part instances.
pub const INSTANCE_C: f64 = 0.25;

pub fn generate(s: &Scenario, w: &Weight) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    match s.kind {
        ScenarioKind::Lattice { step, extent } => {
            if !(step > 0.0 && extent >= 0.0) {
                return Err(Error::InvalidInput("lattice needs step > 0, extent >= 0".into()));
            }
            let n = (extent / step).floor() as i64;
            let mut pts = Vec::new();
            for i in 0..=n {
                for j in 0..=n {
                    pts.push(Point::new(i as f64 * step, j as f64 * step)?);
                }
            }
            Ok(Generated {
                set: PointSet::new(pts, Metric::Plane)?,
                parts: None,
                clusters: None,
                suggested: Some(SeparationParams::new(1.0, 0.0)?),
            })
        }
        ScenarioKind::PerturbedLattice { step, extent, jitter } => {
            if !(step > 0.0 && extent >= 0.0 && (0.0..0.4).contains(&jitter)) {
                return Err(Error::InvalidInput(
                    "perturbed lattice needs step > 0 and jitter in [0, 0.4)".into(),
                ));
            }
            let n = (extent / step).floor() as i64;
            let mut pts = Vec::new();
            for i in 0..=n {
                for j in 0..=n {
                    let r = jitter * step * rng.random::<f64>();
                    let th = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                    pts.push(Point::new(
                        i as f64 * step + r * th.cos(),
                        j as f64 * step + r * th.sin(),
                    )?);
                }
            }
            Ok(Generated {
                set: PointSet::new(pts, Metric::Plane)?,
                parts: None,
                clusters: None,
                suggested: None,
            })
        }
        ScenarioKind::RadialDisk { rings } => {
            if rings == 0 || rings > 20 {
                return Err(Error::InvalidInput("radial disk needs 1..=20 rings".into()));
            }
            let mut pts = Vec::new();
            for k in 1..=rings {
                let r = 1.0 - 0.5f64.powi(k as i32);
                let m = 1usize << k;
                let rot = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                for j in 0..m {
                    let th = rot + 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    pts.push(Point::new(r * th.cos(), r * th.sin())?);
                }
            }
            Ok(Generated {
                set: PointSet::new(pts, Metric::Disk)?,
                parts: None,
                clusters: None,
                suggested: None,
            })
        }
        ScenarioKind::Clustered { n, levels } => {
            if n == 0 || levels == 0 {
                return Err(Error::InvalidInput("clustered needs n >= 1 and levels >= 1".into()));
            }
            let c = n as f64 * w.d0 + 1.0;
            let mut clusters = Vec::with_capacity(levels);
            for l in 1..=levels {
                let theta = 2.0 * std::f64::consts::PI * l as f64 / levels as f64
                    + 0.1 * rng.random::<f64>();
                let center = Point::new(1.5 * theta.cos(), 1.5 * theta.sin())?;
                let p = w.eval(center)?;
                let radius = (1.0 / l as f64) * (-c * p).exp();
                if radius < 1e-300 {
                    return Err(Error::InvalidInput(format!(
                        "cluster radius underflows at level {l}"
                    )));
                }
                let mut satellites = Vec::with_capacity(n);
                for k in 1..=n {
                    let frac = 0.4 + 0.5 * k as f64 / n as f64;
                    let phi = theta + 0.8 * k as f64 + 0.1 * rng.random::<f64>();
                    satellites.push(Point::new(
                        center.re + frac * radius * phi.cos(),
                        center.im + frac * radius * phi.sin(),
                    )?);
                }
                clusters.push(Cluster { center, satellites, scale: l });
            }
            let family = ClusterFamily { clusters, metric: Metric::Plane, c };
            family.validate(w)?;
            let mut pts = Vec::new();
            for cl in &family.clusters {
                pts.push(cl.center);
                pts.extend_from_slice(&cl.satellites);
            }
            Ok(Generated {
                set: PointSet::new(pts, family.metric)?,
                parts: None,
                clusters: Some(family),
                suggested: None,
            })
        }
        ScenarioKind::UnionOfSeparated { n, bases, metric } => {
            if n == 0 || n > 4 {
                return Err(Error::InvalidInput("union scenario needs 1 <= n <= 4".into()));
            }
            if bases == 0 || bases > 64 {
                return Err(Error::InvalidInput("union scenario needs 1..=64 bases".into()));
            }
            let base_points = base_sites(metric, bases, &mut rng)?;
            let mut points = Vec::new();
            let mut parts = vec![Vec::new(); n];
            for base in &base_points {
                let p = w.eval(*base)?;
                let scale = match metric {
                    Metric::Plane => (-INSTANCE_C * p).exp(),
                    Metric::Disk => (1.0 - base.abs()) * (-INSTANCE_C * p).exp(),
                };
                for (j, part) in parts.iter_mut().enumerate() {
                    let point = if j == 0 {
                        *base
                    } else {
                        let r = (0.04 + 0.02 * j as f64 + 0.01 * rng.random::<f64>()) * scale;
                        let th = 2.0 * std::f64::consts::PI
                            * (j as f64 / n as f64 + 0.1 * rng.random::<f64>());
                        Point::new(base.re + r * th.cos(), base.im + r * th.sin())?
                    };
                    part.push(points.len());
                    points.push(point);
                }
            }
            Ok(Generated {
                set: PointSet::new(points, metric)?,
                parts: Some(parts),
                clusters: None,
                suggested: Some(SeparationParams::new(0.45, INSTANCE_C)?),
            })
        }
    }
}

/// Well-separated base sites: a lattice for the plane, rings for the disk.
fn base_sites(metric: Metric, bases: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let mut out = Vec::with_capacity(bases);
    match metric {
        Metric::Plane => {
            // centered lattice keeps the weight moderate across the instance
            let cols = (bases as f64).sqrt().ceil() as usize;
            let rows = bases.div_ceil(cols);
            let x0 = -1.5 * (cols - 1) as f64;
            let y0 = -1.5 * (rows - 1) as f64;
            for b in 0..bases {
                let x = x0 + 3.0 * (b % cols) as f64 + 0.3 * rng.random::<f64>();
                let y = y0 + 3.0 * (b / cols) as f64 + 0.3 * rng.random::<f64>();
                out.push(Point::new(x, y)?);
            }
        }
        Metric::Disk => {
            let rot = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
            let rings = [(0.0f64, 1usize), (0.35, 6), (0.65, 10), (0.8, 14)];
            let mut placed = 0;
            'outer: for (r, m) in rings {
                for j in 0..m {
                    if placed == bases {
                        break 'outer;
                    }
                    let th = rot + 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    out.push(Point::new(r * th.cos(), r * th.sin())?);
                    placed += 1;
                }
            }
            if placed < bases {
                return Err(Error::InvalidInput(format!(
                    "disk union scenario supports at most 31 bases, got {bases}"
                )));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Equiv,
    Cover,
    Trace,
    Hyperbolic,
    All,
}

impl std::str::FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equiv" => Ok(SuiteName::Equiv),
            "cover" => Ok(SuiteName::Cover),
            "trace" => Ok(SuiteName::Trace),
            "hyperbolic" => Ok(SuiteName::Hyperbolic),
            "all" => Ok(SuiteName::All),
            other => Err(Error::InvalidInput(format!(
                "unknown suite '{other}' (expected equiv|cover|trace|hyperbolic|all)"
            ))),
        }
    }
}

impl SuiteName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Equiv => "equiv",
            SuiteName::Cover => "cover",
            SuiteName::Trace => "trace",
            SuiteName::Hyperbolic => "hyperbolic",
            SuiteName::All => "all",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRecord {
    pub trial: usize,
    pub scenario: String,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub prng: String,
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<SuiteRecord>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_suite(name: SuiteName, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut records = Vec::new();
    match name {
        SuiteName::Equiv => {
            for t in 0..trials {
                equiv_trial(t, trial_seed(seed, t), &mut records)?;
            }
        }
        SuiteName::Cover => {
            for t in 0..trials {
                cover_trial(t, trial_seed(seed, t), &mut records)?;
            }
        }
        SuiteName::Trace => {
            for t in 0..trials {
                trace_trial(t, trial_seed(seed, t), &mut records)?;
            }
        }
        SuiteName::Hyperbolic => {
            for t in 0..trials {
                hyperbolic_trial(t, trial_seed(seed, t), &mut records)?;
            }
        }
        SuiteName::All => {
            for t in 0..trials {
                equiv_trial(t, trial_seed(seed, t), &mut records)?;
                cover_trial(t, trial_seed(seed, t), &mut records)?;
                trace_trial(t, trial_seed(seed, t), &mut records)?;
                hyperbolic_trial(t, trial_seed(seed, t), &mut records)?;
            }
        }
    }
    let passed = records.iter().filter(|r| r.pass).count();
    let failed = records.len() - passed;
    Ok(SuiteReport {
        schema: "trace-lab/1".into(),
        suite: name.as_str().into(),
        trials,
        seed,
        prng: PRNG_NAME.into(),
        passed,
        failed,
        records,
    })
}

fn push(
    records: &mut Vec<SuiteRecord>,
    trial: usize,
    scenario: &str,
    check: &str,
    pass: bool,
    detail: String,
) {
    records.push(SuiteRecord {
        trial,
        scenario: scenario.to_string(),
        check: check.to_string(),
        pass,
        detail,
    });
}

fn equiv_trial(trial: usize, seed: u64, records: &mut Vec<SuiteRecord>) -> Result<()> {
    let w = Weight::log_plane();
    let n = 2 + trial % 2;
    let scenario = Scenario {
        kind: ScenarioKind::UnionOfSeparated { n, bases: 9, metric: Metric::Plane },
        seed,
    };
    let gen = generate(&scenario, &w)?;
    let label = format!("union_of_separated(n={n})");
    let params = gen.suggested.expect("union scenario suggests parameters");

    let count = count_condition(&gen.set, &w, &params)?;
    push(
        records,
        trial,
        &label,
        "equiv.count_within_bound",
        count.max_count <= n,
        format!("count={} bound={n}", count.max_count),
    );

    let dec = decompose(&gen.set, &w, &params, n)?;
    let mut sound = true;
    let mut union: Vec<usize> = Vec::new();
    for part in &dec.parts {
        union.extend_from_slice(part);
        let sub = gen.set.subset(part)?;
        if !is_weakly_separated(&sub, &w, &dec.params_prime)?.separated {
            sound = false;
        }
    }
    union.sort_unstable();
    let partition_ok = union == (0..gen.set.len()).collect::<Vec<_>>();
    push(
        records,
        trial,
        &label,
        "equiv.decompose_soundness",
        sound && partition_ok,
        format!(
            "parts={} eps'={:.6e} C'={:.6e} partition={partition_ok}",
            dec.parts.len(),
            dec.params_prime.eps,
            dec.params_prime.c
        ),
    );

    let translated = dec.params_prime.translated(&w);
    let dual = count_condition(&gen.set, &w, &translated)?;
    push(
        records,
        trial,
        &label,
        "equiv.count_duality",
        dual.max_count <= n,
        format!("count={} at translated params", dual.max_count),
    );

    // shrinking clusters: bounded low-order differences, diverging high order
    let levels = 8;
    let cluster_scenario = Scenario {
        kind: ScenarioKind::Clustered { n, levels },
        seed: seed ^ 0xABCD,
    };
    let cgen = generate(&cluster_scenario, &w)?;
    let family = cgen.clusters.expect("clustered scenario yields a family");
    let clabel = format!("clustered(n={n},levels={levels})");
    let cx = counterexample_sequence(&family, n)?;
    let b = 1.0;

    let mut bounded_ok = true;
    let mut worst_bounded = 0.0f64;
    for tuple in &cx.tuples {
        let mut idx: Vec<usize> = tuple.satellites[..n - 1].to_vec();
        idx.push(tuple.center);
        let nodes: Vec<Cplx> = idx.iter().map(|&i| cx.valued.set().complex(i)).collect();
        let vals: Vec<Cplx> = idx.iter().map(|&i| cx.valued.value(i)).collect();
        let dd = divided_difference_nodes(&nodes, &vals, Metric::Plane).norm();
        worst_bounded = worst_bounded.max((dd - 1.0).abs());
        if (dd - 1.0).abs() > 1e-9 {
            bounded_ok = false;
        }
    }
    push(
        records,
        trial,
        &clabel,
        "equiv.counterexample_bounded",
        bounded_ok,
        format!("max |modulus - 1| = {worst_bounded:.6e}"),
    );

    let curve = blowup_curve(&cx, &w, n, b)?;
    let floor = (-b * n as f64 * w.e0).exp();
    let mut blowup_ok = true;
    for bp in &curve {
        if bp.value < bp.scale as f64 * floor * (1.0 - 1e-6) {
            blowup_ok = false;
        }
    }
    push(
        records,
        trial,
        &clabel,
        "equiv.blowup_divergence",
        blowup_ok,
        format!(
            "last value {:.6e} >= {:.6e}",
            curve.last().map(|bp| bp.value).unwrap_or(0.0),
            levels as f64 * floor
        ),
    );

    let mut violation_ok = true;
    for (cl, tuple) in family.clusters.iter().zip(&cx.tuples) {
        let p_center = w.eval(cl.center)?;
        let radius = (1.0 / cl.scale as f64) * (-family.c * p_center).exp();
        let mut inside = 1usize; // the center itself
        for &s in &tuple.satellites {
            if Metric::Plane.distance_unchecked(cl.center, cx.valued.set().point(s)) < radius {
                inside += 1;
            }
        }
        if inside < n + 1 {
            violation_ok = false;
        }
    }
    push(
        records,
        trial,
        &clabel,
        "equiv.cluster_count_violation",
        violation_ok,
        format!("every cluster disk holds at least {} points", n + 1),
    );

    // the extracted centers form a weakly separated subsequence
    let centers: Vec<Point> = family.clusters.iter().map(|cl| cl.center).collect();
    let center_set = PointSet::new(centers, Metric::Plane)?;
    let eps_centers = max_eps(&center_set, &w, family.c)?;
    push(
        records,
        trial,
        &clabel,
        "equiv.centers_separated",
        eps_centers > 0.0,
        format!("max feasible eps {eps_centers:.6e}"),
    );
    Ok(())
}

fn cover_trial(trial: usize, seed: u64, records: &mut Vec<SuiteRecord>) -> Result<()> {
    let w = Weight::log_plane();
    let n = 2 + trial % 2;
    let scenario = Scenario {
        kind: ScenarioKind::UnionOfSeparated { n, bases: 9, metric: Metric::Plane },
        seed,
    };
    let gen = generate(&scenario, &w)?;
    let parted = gen.parted()?;
    let label = format!("union_of_separated(n={n})");

    let c = INSTANCE_C * w.d0;
    let eps = covering_params(&parted, &w, c)?;
    let cov = build_covering(&parted, &w, eps, c)?;
    let report = verify_covering(&cov, &parted, &w)?;
    push(
        records,
        trial,
        &label,
        "cover.clauses",
        report.all_pass(),
        report.first_failure().unwrap_or_else(|| "all clauses hold".into()),
    );

    let scales = stage_constants(&w, c, n);
    let expect_a = 2f64.powi(-(3 * n as i32)) * (-scales.b[n - 1]).exp();
    let constants_ok = cov.constants.a == expect_a
        && cov.constants.b == 2.0 / 7.0
        && cov.constants.b1 == scales.c[n - 1]
        && cov.constants.b2 == c;
    push(
        records,
        trial,
        &label,
        "cover.constants",
        constants_ok,
        format!(
            "a={:.6e} b={:.6e} B1={:.6e} B2={:.6e}",
            cov.constants.a, cov.constants.b, cov.constants.b1, cov.constants.b2
        ),
    );

    let again = build_covering(&parted, &w, eps, c)?;
    let deterministic = again.centers == cov.centers
        && again
            .radii
            .iter()
            .zip(&cov.radii)
            .all(|(x, y)| x.to_bits() == y.to_bits());
    push(
        records,
        trial,
        &label,
        "cover.determinism",
        deterministic,
        format!("{} centers", cov.centers.len()),
    );
    Ok(())
}

fn trace_trial(trial: usize, seed: u64, records: &mut Vec<SuiteRecord>) -> Result<()> {
    let w = Weight::log_plane();
    let n = 2 + trial % 2;
    let scenario = Scenario {
        kind: ScenarioKind::UnionOfSeparated { n, bases: 9, metric: Metric::Plane },
        seed,
    };
    let gen = generate(&scenario, &w)?;
    let parted = gen.parted()?;
    let label = format!("union_of_separated(n={n})");
    let set = parted.set();

    let c = INSTANCE_C * w.d0;
    let eps = covering_params(&parted, &w, c)?;
    let cov = build_covering(&parted, &w, eps, c)?;
    let p = w.eval_many(set.points())?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5151);
    let values: Vec<Cplx> = (0..set.len())
        .map(|i| {
            let modulus = rng.random::<f64>() * p[i].exp();
            let phase = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
            Cplx::from_polar(modulus, phase)
        })
        .collect();
    let omega = ValuedSet::new(set.clone(), values)?;
    let bundle = assemble(&omega, &parted, &cov, &w, DPolicy::Fixed(0.0), 1e-6)?;
    push(
        records,
        trial,
        &label,
        "trace.residual",
        bundle.max_rel_residual <= 1e-6,
        format!("max relative residual {:.6e}", bundle.max_rel_residual),
    );
    push(
        records,
        trial,
        &label,
        "trace.leakage",
        bundle.max_leakage <= 1e-7,
        format!("max foreign-term leakage {:.6e}", bundle.max_leakage),
    );

    // necessity pipeline on one part
    let j = trial % n;
    let part = parted.part(j);
    let part_values: Vec<Cplx> = part
        .iter()
        .map(|&i| {
            let modulus = rng.random::<f64>() * p[i].exp();
            let phase = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
            Cplx::from_polar(modulus, phase)
        })
        .collect();
    let extended = extend_values(&parted, j, &part_values, &cov)?;

    let mut constant_ok = true;
    for members in &cov.disk_members {
        if members.len() >= 2 {
            let nodes: Vec<Cplx> = members.iter().map(|&i| set.complex(i)).collect();
            let vals: Vec<Cplx> = members.iter().map(|&i| extended.value(i)).collect();
            if divided_difference_nodes(&nodes, &vals, set.metric()).norm() != 0.0 {
                constant_ok = false;
            }
        }
    }
    push(
        records,
        trial,
        &label,
        "trace.extension_constant_disks",
        constant_ok,
        "within-disk differences vanish exactly".into(),
    );

    let s1 = seminorm(&extended, &w, n.min(extended.len()), 1.0, SeminormMode::Exact)?;
    push(
        records,
        trial,
        &label,
        "trace.extension_seminorm_finite",
        s1.is_finite(),
        format!("S = {s1:.6e} at B = 1"),
    );

    let bundle = assemble(&extended, &parted, &cov, &w, DPolicy::Fixed(0.0), 1e-6)?;
    let mut worst = 0.0f64;
    for (slot, &i) in part.iter().enumerate() {
        let err = (bundle.f.eval(set.complex(i)) - part_values[slot]).norm();
        worst = worst.max(err / (1.0 + part_values[slot].norm()));
    }
    push(
        records,
        trial,
        &label,
        "trace.necessity_recovery",
        worst <= 1e-6,
        format!("max relative recovery error {worst:.6e}"),
    );
    Ok(())
}

fn hyperbolic_trial(trial: usize, seed: u64, records: &mut Vec<SuiteRecord>) -> Result<()> {
    let w = Weight::korenblum_disk();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9d15);
    let label = "disk_instances";

    // divided differences of disk-factor products against the contour oracle
    let mut contour_worst = 0.0f64;
    for _ in 0..10 {
        let mut roots = Vec::new();
        for _ in 0..3 {
            let r = 0.6 * rng.random::<f64>();
            let th = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            roots.push(Cplx::from_polar(r, th));
        }
        let f = FunctionExpr::sum(vec![
            FunctionExpr::product(
                roots.iter().map(|&r| FunctionExpr::factor(Metric::Disk, r)).collect(),
            ),
            FunctionExpr::poly(&[
                Cplx::new(rng.random::<f64>() - 0.5, 0.0),
                Cplx::new(0.0, rng.random::<f64>() - 0.5),
                Cplx::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            ]),
        ]);
        let k = 2 + (rng.random::<u32>() % 3) as usize;
        let tuple = sample_disk_tuple(&mut rng, k, 0.62);
        let nodes: Vec<Cplx> = tuple.iter().map(|p| p.to_complex()).collect();
        let vals: Vec<Cplx> = nodes.iter().map(|&z| f.eval(z)).collect();
        let recursion = divided_difference_nodes(&nodes, &vals, Metric::Plane);
        let oracle = contour_oracle(&f, &tuple, 1.2, 512)?;
        let rel = (recursion - oracle).norm() / (1.0 + oracle.norm());
        contour_worst = contour_worst.max(rel);
    }
    push(
        records,
        trial,
        label,
        "hyperbolic.contour_agreement",
        contour_worst <= 1e-8,
        format!("max relative deviation {contour_worst:.6e}"),
    );

    // order-one hyperbolic differences: swap invariance and reduction at 0
    let mut swap_worst = 0.0f64;
    let mut reduce_worst = 0.0f64;
    for _ in 0..50 {
        let pts = sample_disk_tuple(&mut rng, 2, 0.9);
        let vals = [
            Cplx::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            Cplx::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
        ];
        let nodes = [pts[0].to_complex(), pts[1].to_complex()];
        let fwd = divided_difference_nodes(&nodes, &vals, Metric::Disk).norm();
        let bwd =
            divided_difference_nodes(&[nodes[1], nodes[0]], &[vals[1], vals[0]], Metric::Disk)
                .norm();
        swap_worst = swap_worst.max((fwd - bwd).abs() / (1.0 + fwd));

        let zero_based = [Cplx::new(0.0, 0.0), nodes[1]];
        let hyp = divided_difference_nodes(&zero_based, &vals, Metric::Disk);
        let euc = divided_difference_nodes(&zero_based, &vals, Metric::Plane);
        reduce_worst = reduce_worst.max((hyp - euc).norm() / (1.0 + euc.norm()));
    }
    push(
        records,
        trial,
        label,
        "hyperbolic.order1_invariance",
        swap_worst <= 1e-10,
        format!("max modulus deviation {swap_worst:.6e}"),
    );
    push(
        records,
        trial,
        label,
        "hyperbolic.order1_reduction",
        reduce_worst <= 1e-12,
        format!("max deviation from euclidean {reduce_worst:.6e}"),
    );

    // assembled interpolant on a two-part disk instance
    let scenario = Scenario {
        kind: ScenarioKind::UnionOfSeparated { n: 2, bases: 9, metric: Metric::Disk },
        seed,
    };
    let gen = generate(&scenario, &w)?;
    let parted = gen.parted()?;
    let set = parted.set();
    let c = INSTANCE_C * w.d0;
    let eps = covering_params(&parted, &w, c)?;
    let cov = build_covering(&parted, &w, eps, c)?;
    let report = verify_covering(&cov, &parted, &w)?;
    push(
        records,
        trial,
        "union_of_separated(disk,n=2)",
        "hyperbolic.cover_clauses",
        report.all_pass(),
        report.first_failure().unwrap_or_else(|| "all clauses hold".into()),
    );
    let p = w.eval_many(set.points())?;
    let values: Vec<Cplx> = (0..set.len())
        .map(|i| {
            let modulus = rng.random::<f64>() * p[i].exp();
            let phase = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
            Cplx::from_polar(modulus, phase)
        })
        .collect();
    let omega = ValuedSet::new(set.clone(), values)?;
    let bundle = assemble(&omega, &parted, &cov, &w, DPolicy::Fixed(0.0), 1e-6)?;
    push(
        records,
        trial,
        "union_of_separated(disk,n=2)",
        "hyperbolic.residual",
        bundle.max_rel_residual <= 1e-6,
        format!("max relative residual {:.6e}", bundle.max_rel_residual),
    );
    push(
        records,
        trial,
        "union_of_separated(disk,n=2)",
        "hyperbolic.leakage",
        bundle.max_leakage <= 1e-7,
        format!("max foreign-term leakage {:.6e}", bundle.max_leakage),
    );

    // area sum of separation disks under the boundary-distance weight
    let radial = Scenario { kind: ScenarioKind::RadialDisk { rings: 5 }, seed: seed ^ 0x77 };
    let rgen = generate(&radial, &w)?;
    let mut ok = true;
    let mut detail = String::new();
    for c_level in [1.0f64, 2.0] {
        let mut sum = 0.0f64;
        for pt in rgen.set.points() {
            let phi = w.eval(*pt)?;
            sum += (1.0 - pt.abs()).powi(2) * (-2.0 * c_level * phi).exp();
        }
        if sum > 4.0 {
            ok = false;
        }
        detail.push_str(&format!("C={c_level}: sum={sum:.6e}; "));
    }
    push(records, trial, "radial_disk(rings=5)", "hyperbolic.area_sum", ok, detail);
    Ok(())
}

fn sample_disk_tuple(rng: &mut ChaCha8Rng, k: usize, cap: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(k);
    while out.len() < k {
        let r = cap * rng.random::<f64>();
        let th = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        let cand = Point { re: r * th.cos(), im: r * th.sin() };
        if out
            .iter()
            .all(|q| Metric::Plane.distance_unchecked(*q, cand) > 0.05)
        {
            out.push(cand);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_has_sixteen_points_and_is_separated() {
        let w = Weight::log_plane();
        let s = Scenario { kind: ScenarioKind::Lattice { step: 3.0, extent: 9.0 }, seed: 0 };
        let gen = generate(&s, &w).unwrap();
        assert_eq!(gen.set.len(), 16);
        let eps = max_eps(&gen.set, &w, 0.0).unwrap();
        assert!(eps >= 1.0, "max eps {eps}");
        let params = gen.suggested.unwrap();
        assert!(is_weakly_separated(&gen.set, &w, &params).unwrap().separated);
    }

    #[test]
    fn clustered_scenario_satisfies_family_contract() {
        let w = Weight::log_plane();
        let s = Scenario { kind: ScenarioKind::Clustered { n: 2, levels: 5 }, seed: 3 };
        let gen = generate(&s, &w).unwrap();
        let family = gen.clusters.unwrap();
        assert_eq!(family.clusters.len(), 5);
        assert_eq!(family.c, 2.0 * w.d0 + 1.0);
        family.validate(&w).unwrap();
        for cl in &family.clusters {
            assert_eq!(cl.satellites.len(), 2);
        }
    }

    #[test]
    fn radial_disk_points_stay_inside() {
        let w = Weight::korenblum_disk();
        let s = Scenario { kind: ScenarioKind::RadialDisk { rings: 3 }, seed: 9 };
        let gen = generate(&s, &w).unwrap();
        assert_eq!(gen.set.len(), 2 + 4 + 8);
        assert!(gen.set.points().iter().all(|p| p.abs() < 1.0));
    }

    #[test]
    fn union_scenario_counts_match_parts() {
        let w = Weight::log_plane();
        let s = Scenario {
            kind: ScenarioKind::UnionOfSeparated { n: 3, bases: 4, metric: Metric::Plane },
            seed: 5,
        };
        let gen = generate(&s, &w).unwrap();
        let parted = gen.parted().unwrap();
        assert_eq!(parted.n_parts(), 3);
        assert_eq!(parted.set().len(), 12);
        let params = gen.suggested.unwrap();
        let count = count_condition(parted.set(), &w, &params).unwrap();
        assert!(count.max_count <= 3, "count {}", count.max_count);
    }

    #[test]
    fn generation_is_deterministic() {
        let w = Weight::log_plane();
        let s = Scenario {
            kind: ScenarioKind::PerturbedLattice { step: 3.0, extent: 6.0, jitter: 0.2 },
            seed: 42,
        };
        let a = generate(&s, &w).unwrap();
        let b = generate(&s, &w).unwrap();
        assert_eq!(a.set.points(), b.set.points());
    }

    #[test]
    fn suite_reports_are_byte_identical() {
        let a = run_suite(SuiteName::Equiv, 2, 7).unwrap();
        let b = run_suite(SuiteName::Equiv, 2, 7).unwrap();
        let ja = serde_json::to_vec(&a).unwrap();
        let jb = serde_json::to_vec(&b).unwrap();
        assert_eq!(ja, jb);
        assert!(
            a.all_pass(),
            "{:#?}",
            a.records.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        );
    }

    #[test]
    fn cover_suite_passes() {
        let r = run_suite(SuiteName::Cover, 2, 11).unwrap();
        assert!(
            r.all_pass(),
            "{:#?}",
            r.records.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        );
    }

    #[test]
    fn trace_suite_passes() {
        let r = run_suite(SuiteName::Trace, 1, 13).unwrap();
        assert!(
            r.all_pass(),
            "{:#?}",
            r.records.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        );
    }

    #[test]
    fn hyperbolic_suite_passes() {
        let r = run_suite(SuiteName::Hyperbolic, 1, 17).unwrap();
        assert!(
            r.all_pass(),
            "{:#?}",
            r.records.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        );
    }
}
