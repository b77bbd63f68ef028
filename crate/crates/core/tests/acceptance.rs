//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p tracelab --test acceptance -- --nocapture` to see
//! the per-criterion lines.

mod common;

use std::time::Instant;

use common::{Cplx, Lcg};
use tracelab::covering::{build_covering, covering_params, stage_constants, verify_covering};
use tracelab::divdiff::{
    chain_bound_expand, chain_constant, combinations, contour_oracle, default_contour_radius,
    divided_difference_nodes, seminorm, SeminormMode, ValuedSet, DEFAULT_QUAD_POINTS,
};
use tracelab::expr::FunctionExpr;
use tracelab::geometry::{Metric, PartedSet, Point, PointSet};
use tracelab::interpolate::{assemble, extend_values, DPolicy};
use tracelab::lab::{generate, run_suite, Scenario, ScenarioKind, SuiteName, INSTANCE_C};
use tracelab::separation::{
    blowup_curve, count_condition, counterexample_sequence, decompose, is_weakly_separated,
    SeparationParams,
};
use tracelab::weight::Weight;

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!("acceptance {criterion}: {} -- {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

fn random_poly(rng: &mut Lcg, max_degree: usize) -> FunctionExpr {
    let degree = 1 + rng.next_usize(max_degree);
    let coeffs: Vec<Cplx> = (0..=degree)
        .map(|_| Cplx::new(rng.next_range(-1.0, 1.0), rng.next_range(-1.0, 1.0)))
        .collect();
    FunctionExpr::poly(&coeffs)
}

fn random_tuple(rng: &mut Lcg, count: usize, radius: f64, min_gap: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.next_range(0.0, radius);
        let th = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
        let cand = Point::new(r * th.cos(), r * th.sin()).unwrap();
        if out
            .iter()
            .all(|p| Metric::Plane.distance_unchecked(*p, cand) >= min_gap)
        {
            out.push(cand);
        }
    }
    out
}

fn shuffle(rng: &mut Lcg, items: &mut [usize]) {
    for i in (1..items.len()).rev() {
        let j = rng.next_usize(i + 1);
        items.swap(i, j);
    }
}

/// Criterion 1: recursion vs contour oracle on 200 random polynomial cases,
/// degree <= 12, tuples of <= 6 nodes in |z| <= 3, within 1e-8 relative,
/// under 5 seconds.
#[test]
fn c1_divided_difference_against_contour_oracle() {
    let start = Instant::now();
    let mut rng = Lcg(2024_0001);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let f = random_poly(&mut rng, 12);
        let k = 2 + rng.next_usize(5); // 2..=6 nodes
        let tuple = random_tuple(&mut rng, k, 3.0, 0.05);
        let nodes: Vec<Cplx> = tuple.iter().map(|p| p.to_complex()).collect();
        let values: Vec<Cplx> = nodes.iter().map(|&z| f.eval(z)).collect();
        let rec = divided_difference_nodes(&nodes, &values, Metric::Plane);
        let via = contour_oracle(&f, &tuple, default_contour_radius(&tuple), DEFAULT_QUAD_POINTS)
            .unwrap();
        worst = worst.max((rec - via).norm() / (1.0 + via.norm()));
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "criterion 1 (recursion vs contour oracle)",
        worst <= 1e-8 && elapsed < 5.0,
        &format!("200 cases, max relative deviation {worst:.3e}, {elapsed:.2}s"),
    );
}

/// Criterion 2: Euclidean differences invariant under 50 random permutations
/// per instance within 1e-10 relative, n <= 4, |set| <= 20.
#[test]
fn c2_permutation_invariance() {
    let mut rng = Lcg(2024_0002);
    let mut worst = 0.0f64;
    let mut instances = 0;
    for n in 2..=4usize {
        for _ in 0..4 {
            let size = 12 + rng.next_usize(9); // 12..=20
            let points = random_tuple(&mut rng, size, 6.0, 0.02);
            let values: Vec<Cplx> = (0..size)
                .map(|_| Cplx::new(rng.next_range(-2.0, 2.0), rng.next_range(-2.0, 2.0)))
                .collect();
            // one reference tuple per instance, 50 random reorderings
            let mut idx: Vec<usize> = (0..size).collect();
            shuffle(&mut rng, &mut idx);
            let tuple: Vec<usize> = idx[..n].to_vec();
            let nodes: Vec<Cplx> = tuple.iter().map(|&i| points[i].to_complex()).collect();
            let vals: Vec<Cplx> = tuple.iter().map(|&i| values[i]).collect();
            let reference = divided_difference_nodes(&nodes, &vals, Metric::Plane);
            for _ in 0..50 {
                let mut perm: Vec<usize> = (0..n).collect();
                shuffle(&mut rng, &mut perm);
                let pn: Vec<Cplx> = perm.iter().map(|&i| nodes[i]).collect();
                let pv: Vec<Cplx> = perm.iter().map(|&i| vals[i]).collect();
                let dd = divided_difference_nodes(&pn, &pv, Metric::Plane);
                worst = worst.max((dd - reference).norm() / (1.0 + reference.norm()));
            }
            instances += 1;
        }
    }
    verdict(
        "criterion 2 (permutation invariance)",
        worst <= 1e-10,
        &format!("{instances} instances x 50 permutations, max relative deviation {worst:.3e}"),
    );
}

/// Criterion 3: the telescoping expansion through anchors equals the direct
/// recursion within 1e-10 on 100 random instances, and the constant the
/// expansion produces transfers the order-n seminorm to order n-1.
#[test]
fn c3_chain_identity_and_seminorm_transfer() {
    let mut rng = Lcg(2024_0003);
    let w = Weight::log_plane();
    let mut worst_identity = 0.0f64;
    let mut worst_transfer = 0.0f64;
    for case in 0..100 {
        let n = 2 + case % 2;
        let size = 8 + rng.next_usize(3);
        let points = random_tuple(&mut rng, size, 3.0, 0.05);
        let values: Vec<Cplx> = (0..size)
            .map(|_| Cplx::new(rng.next_range(-2.0, 2.0), rng.next_range(-2.0, 2.0)))
            .collect();
        let set = PointSet::new(points.clone(), Metric::Plane).unwrap();
        let v = ValuedSet::new(set.clone(), values.clone()).unwrap();

        let mut idx: Vec<usize> = (0..size).collect();
        shuffle(&mut rng, &mut idx);
        let tuple: Vec<usize> = idx[..n].to_vec();
        let anchors: Vec<usize> = idx[n..2 * n].to_vec();

        let lhs = chain_bound_expand(&v, &tuple, &anchors).unwrap();
        let nodes: Vec<Cplx> = tuple.iter().map(|&i| set.complex(i)).collect();
        let vals: Vec<Cplx> = tuple.iter().map(|&i| values[i]).collect();
        let rhs = divided_difference_nodes(&nodes, &vals, Metric::Plane);
        worst_identity = worst_identity.max((lhs - rhs).norm() / (1.0 + rhs.norm()));

        // transfer: every order-(n-1) value over anchor-avoiding tuples is
        // bounded by the expansion constant at the lifted damping level
        let b = 0.5;
        let cc = chain_constant(&v, &w, &anchors, b).unwrap();
        let p = w.eval_many(set.points()).unwrap();
        let mut sup = 0.0f64;
        for combo in combinations(size, n) {
            if combo.iter().any(|i| anchors.contains(i)) {
                continue;
            }
            let nodes: Vec<Cplx> = combo.iter().map(|&i| set.complex(i)).collect();
            let vals: Vec<Cplx> = combo.iter().map(|&i| values[i]).collect();
            let dd = divided_difference_nodes(&nodes, &vals, Metric::Plane);
            let psum: f64 = combo.iter().map(|&i| p[i]).sum();
            sup = sup.max(dd.norm() * (-cc.b_prime * psum).exp());
        }
        worst_transfer = worst_transfer.max(sup / cc.k_const);
    }
    verdict(
        "criterion 3 (chain identity and seminorm transfer)",
        worst_identity <= 1e-10 && worst_transfer <= 1.0 + 1e-9,
        &format!(
            "100 instances, max identity deviation {worst_identity:.3e}, \
             max sup/K ratio {worst_transfer:.6}"
        ),
    );
}

/// Criterion 4: (i) greedy decomposition sound on 20 random instances with
/// the exact shrunken parameters; (ii) the counterexample blow-up curve stays
/// above `l exp(-B n E0)` for l = 1..20.
#[test]
fn c4_equivalence_suite() {
    let w = Weight::log_plane();
    let mut failures = 0usize;
    for trial in 0..20 {
        let n = 2 + trial % 2;
        let scenario = Scenario {
            kind: ScenarioKind::UnionOfSeparated { n, bases: 9, metric: Metric::Plane },
            seed: 4000 + trial as u64,
        };
        let gen = generate(&scenario, &w).unwrap();
        let params = gen.suggested.unwrap();
        let count = count_condition(&gen.set, &w, &params).unwrap();
        if count.max_count > n {
            failures += 1;
            continue;
        }
        let dec = decompose(&gen.set, &w, &params, n).unwrap();
        // the shrunken parameters are exactly e^{-E0 C} eps / 2 and D0 C
        let expect_eps = (-w.e0 * params.c).exp() * params.eps / 2.0;
        let expect_c = w.d0 * params.c;
        if dec.params_prime.eps != expect_eps || dec.params_prime.c != expect_c {
            failures += 1;
            continue;
        }
        if dec.parts.len() != n {
            failures += 1;
            continue;
        }
        for part in &dec.parts {
            let sub = gen.set.subset(part).unwrap();
            if !is_weakly_separated(&sub, &w, &dec.params_prime).unwrap().separated {
                failures += 1;
            }
        }
    }

    let b = 1.0;
    let mut blowup_ok = true;
    let mut worst_margin = f64::INFINITY;
    for n in [2usize, 3] {
        let scenario =
            Scenario { kind: ScenarioKind::Clustered { n, levels: 20 }, seed: 41_000 + n as u64 };
        let gen = generate(&scenario, &w).unwrap();
        let family = gen.clusters.unwrap();
        assert_eq!(family.c, b * (n as f64 * w.d0 + 1.0));
        let cx = counterexample_sequence(&family, n).unwrap();
        let curve = blowup_curve(&cx, &w, n, b).unwrap();
        let floor = (-b * n as f64 * w.e0).exp();
        assert_eq!(curve.len(), 20);
        for bp in &curve {
            let ratio = bp.value / (bp.scale as f64 * floor);
            worst_margin = worst_margin.min(ratio);
            if bp.value < bp.scale as f64 * floor * (1.0 - 1e-6) {
                blowup_ok = false;
            }
        }
    }
    verdict(
        "criterion 4 (separation equivalence suite)",
        failures == 0 && blowup_ok,
        &format!(
            "20 decompositions with {failures} failures; blow-up curve min ratio \
             {worst_margin:.6} of its floor"
        ),
    );
}

/// Criterion 5: coverings on 20 random 2- and 3-part instances pass every
/// clause with the exact constants, per-stage windows hold, and each build
/// stays under 10 seconds up to 192 points.
#[test]
fn c5_covering_suite() {
    let w = Weight::log_plane();
    let mut all_ok = true;
    let mut max_elapsed = 0.0f64;
    let mut max_points = 0usize;
    for trial in 0..20usize {
        let n = 2 + trial % 2;
        let bases = match trial {
            19 => 64, // 192-point stress instance
            t if t % 3 == 0 => 16,
            _ => 9,
        };
        let scenario = Scenario {
            kind: ScenarioKind::UnionOfSeparated { n, bases, metric: Metric::Plane },
            seed: 5000 + trial as u64,
        };
        let gen = generate(&scenario, &w).unwrap();
        let parted = gen.parted().unwrap();
        max_points = max_points.max(parted.set().len());
        let c = INSTANCE_C * w.d0;
        let eps = covering_params(&parted, &w, c).unwrap();

        let start = Instant::now();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        let report = verify_covering(&cov, &parted, &w).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        max_elapsed = max_elapsed.max(elapsed);
        if !report.all_pass() || elapsed >= 10.0 {
            all_ok = false;
        }

        // the exact covering constants
        let scales = stage_constants(&w, c, n);
        let b_n_closed = if w.d0 == 1.0 {
            c * w.e0 * (n as f64 - 1.0)
        } else {
            c * w.e0 * (w.d0.powi(n as i32 - 1) - 1.0) / (w.d0 - 1.0)
        };
        let a_expected = 2f64.powi(-(3 * n as i32)) * (-b_n_closed).exp();
        if (cov.constants.a - a_expected).abs() > 1e-15 * a_expected
            || cov.constants.b != 2.0 / 7.0
            || cov.constants.b1 != scales.c[n - 1]
            || cov.constants.b2 != c
            || cov.constants.eps != eps
        {
            all_ok = false;
        }
    }
    verdict(
        "criterion 5 (covering suite)",
        all_ok,
        &format!(
            "20 instances up to {max_points} points, all clauses and stage windows hold, \
             slowest build {max_elapsed:.3}s"
        ),
    );
}

/// Criterion 6: the assembled interpolant reproduces random admissible values
/// on 10 instances (|set| <= 60, n <= 3) within 1e-6 relative, with
/// foreign-term leakage below 1e-7.
#[test]
fn c6_interpolant_sufficiency() {
    let w = Weight::log_plane();
    let mut worst_residual = 0.0f64;
    let mut worst_leakage = 0.0f64;
    let mut max_points = 0;
    let mut rng = Lcg(2024_0006);
    for trial in 0..10usize {
        let n = 2 + trial % 2;
        // three-part instances stay smaller: reciprocal node products grow
        // with the cluster size and make wide instances ill-conditioned
        let bases = if n == 2 { [9, 16, 25][trial / 2 % 3] } else { [9, 12][trial / 2 % 2] };
        let scenario = Scenario {
            kind: ScenarioKind::UnionOfSeparated { n, bases, metric: Metric::Plane },
            seed: 6000 + trial as u64,
        };
        let gen = generate(&scenario, &w).unwrap();
        let parted = gen.parted().unwrap();
        let set = parted.set();
        max_points = max_points.max(set.len());
        assert!(set.len() <= 60);
        let c = INSTANCE_C * w.d0;
        let eps = covering_params(&parted, &w, c).unwrap();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        let p = w.eval_many(set.points()).unwrap();
        let values: Vec<Cplx> = (0..set.len())
            .map(|i| {
                let modulus = rng.next_f64() * p[i].exp();
                let phase = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
                Cplx::from_polar(modulus, phase)
            })
            .collect();
        let omega = ValuedSet::new(set.clone(), values).unwrap();
        let bundle = assemble(&omega, &parted, &cov, &w, DPolicy::Fixed(0.0), 1e-6).unwrap();
        worst_residual = worst_residual.max(bundle.max_rel_residual);
        worst_leakage = worst_leakage.max(bundle.max_leakage);
    }
    verdict(
        "criterion 6 (interpolant sufficiency)",
        worst_residual <= 1e-6 && worst_leakage <= 1e-7,
        &format!(
            "10 instances up to {max_points} points, max residual {worst_residual:.3e}, \
             max leakage {worst_leakage:.3e}"
        ),
    );
}

/// Criterion 7: the constant-per-disk extension has exactly vanishing
/// within-disk differences and finite seminorms, and assembling it recovers
/// the original part values within 1e-6 relative.
#[test]
fn c7_necessity_pipeline() {
    let w = Weight::log_plane();
    let mut rng = Lcg(2024_0007);
    let mut constant_ok = true;
    let mut seminorm_ok = true;
    let mut worst_recovery = 0.0f64;
    for trial in 0..10usize {
        let n = 2 + trial % 2;
        let scenario = Scenario {
            kind: ScenarioKind::UnionOfSeparated { n, bases: 9, metric: Metric::Plane },
            seed: 7000 + trial as u64,
        };
        let gen = generate(&scenario, &w).unwrap();
        let parted = gen.parted().unwrap();
        let set = parted.set();
        let c = INSTANCE_C * w.d0;
        let eps = covering_params(&parted, &w, c).unwrap();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        let p = w.eval_many(set.points()).unwrap();

        let j = trial % n;
        let part = parted.part(j);
        let part_values: Vec<Cplx> = part
            .iter()
            .map(|&i| {
                let modulus = rng.next_f64() * p[i].exp();
                let phase = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
                Cplx::from_polar(modulus, phase)
            })
            .collect();
        let extended = extend_values(&parted, j, &part_values, &cov).unwrap();

        for members in &cov.disk_members {
            if members.len() >= 2 {
                let nodes: Vec<Cplx> = members.iter().map(|&i| set.complex(i)).collect();
                let vals: Vec<Cplx> = members.iter().map(|&i| extended.value(i)).collect();
                if divided_difference_nodes(&nodes, &vals, set.metric()).norm() != 0.0 {
                    constant_ok = false;
                }
            }
        }
        for order in 1..=n {
            let s = seminorm(&extended, &w, order, 1.0, SeminormMode::Exact).unwrap();
            if !s.is_finite() {
                seminorm_ok = false;
            }
        }
        let bundle = assemble(&extended, &parted, &cov, &w, DPolicy::Fixed(0.0), 1e-6).unwrap();
        for (slot, &i) in part.iter().enumerate() {
            let err = (bundle.f.eval(set.complex(i)) - part_values[slot]).norm();
            worst_recovery = worst_recovery.max(err / (1.0 + part_values[slot].norm()));
        }
    }
    verdict(
        "criterion 7 (necessity pipeline)",
        constant_ok && seminorm_ok && worst_recovery <= 1e-6,
        &format!(
            "within-disk differences vanish exactly, seminorms finite, \
             max recovery error {worst_recovery:.3e}"
        ),
    );
}

/// Criterion 8: the disk mirror. Contour agreement on disk data with
/// disk-factor integrands (case 1); permutation invariance of Euclidean
/// differences on disk instances plus swap invariance of the order-one
/// hyperbolic difference, where the hyperbolic property holds exactly
/// (case 2) -- the order >= 2 hyperbolic spread is direction dependent by
/// construction of the recursion and is reported, not asserted; assembled
/// disk interpolants with Blaschke factors (case 6); and the boundary-area
/// sum bound for the boundary-distance weight.
#[test]
fn c8_hyperbolic_mirror() {
    let mut rng = Lcg(2024_0008);
    let w = Weight::korenblum_disk();

    // mirror of criterion 1 on disk data
    let mut contour_worst = 0.0f64;
    for _ in 0..200 {
        let mut factors = Vec::new();
        for _ in 0..(1 + rng.next_usize(3)) {
            let r = rng.next_range(0.0, 0.6);
            let th = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
            factors.push(FunctionExpr::factor(Metric::Disk, Cplx::from_polar(r, th)));
        }
        let f = FunctionExpr::sum(vec![
            FunctionExpr::product(factors),
            random_poly(&mut rng, 6),
        ]);
        let k = 2 + rng.next_usize(5);
        let tuple = random_tuple(&mut rng, k, 0.62, 0.03);
        let nodes: Vec<Cplx> = tuple.iter().map(|p| p.to_complex()).collect();
        let values: Vec<Cplx> = nodes.iter().map(|&z| f.eval(z)).collect();
        let rec = divided_difference_nodes(&nodes, &values, Metric::Plane);
        let via = contour_oracle(&f, &tuple, 1.2, DEFAULT_QUAD_POINTS).unwrap();
        contour_worst = contour_worst.max((rec - via).norm() / (1.0 + via.norm()));
    }

    // mirror of criterion 2: Euclidean invariance on disk tuples at n <= 4,
    // hyperbolic swap invariance at order one; higher-order hyperbolic
    // spread measured for the record
    let mut euclid_worst = 0.0f64;
    let mut hyp1_worst = 0.0f64;
    let mut hyp_spread = 0.0f64;
    for n in 2..=4usize {
        for _ in 0..4 {
            let size = 12 + rng.next_usize(9);
            let points = random_tuple(&mut rng, size, 0.9, 0.01);
            let values: Vec<Cplx> = (0..size)
                .map(|_| Cplx::new(rng.next_range(-2.0, 2.0), rng.next_range(-2.0, 2.0)))
                .collect();
            let mut idx: Vec<usize> = (0..size).collect();
            shuffle(&mut rng, &mut idx);
            let tuple: Vec<usize> = idx[..n].to_vec();
            let nodes: Vec<Cplx> = tuple.iter().map(|&i| points[i].to_complex()).collect();
            let vals: Vec<Cplx> = tuple.iter().map(|&i| values[i]).collect();
            let euc_ref = divided_difference_nodes(&nodes, &vals, Metric::Plane);
            let hyp_ref = divided_difference_nodes(&nodes, &vals, Metric::Disk).norm();
            let mut hyp_lo = hyp_ref;
            let mut hyp_hi = hyp_ref;
            for _ in 0..50 {
                let mut perm: Vec<usize> = (0..n).collect();
                shuffle(&mut rng, &mut perm);
                let pn: Vec<Cplx> = perm.iter().map(|&i| nodes[i]).collect();
                let pv: Vec<Cplx> = perm.iter().map(|&i| vals[i]).collect();
                let euc = divided_difference_nodes(&pn, &pv, Metric::Plane);
                euclid_worst = euclid_worst.max((euc - euc_ref).norm() / (1.0 + euc_ref.norm()));
                let hyp = divided_difference_nodes(&pn, &pv, Metric::Disk).norm();
                hyp_lo = hyp_lo.min(hyp);
                hyp_hi = hyp_hi.max(hyp);
            }
            if n == 2 {
                hyp1_worst = hyp1_worst.max((hyp_hi - hyp_lo) / (1.0 + hyp_ref));
            } else {
                hyp_spread = hyp_spread.max((hyp_hi - hyp_lo) / (1.0 + hyp_ref));
            }
        }
    }

    // mirror of criterion 6: assembled interpolants on disk instances
    let mut residual_worst = 0.0f64;
    let mut leakage_worst = 0.0f64;
    for trial in 0..10usize {
        let n = 2 + trial % 2;
        let scenario = Scenario {
            kind: ScenarioKind::UnionOfSeparated { n, bases: 9, metric: Metric::Disk },
            seed: 8000 + trial as u64,
        };
        let gen = generate(&scenario, &w).unwrap();
        let parted = gen.parted().unwrap();
        let set = parted.set();
        assert!(set.len() <= 60);
        let c = INSTANCE_C * w.d0;
        let eps = covering_params(&parted, &w, c).unwrap();
        let cov = build_covering(&parted, &w, eps, c).unwrap();
        let p = w.eval_many(set.points()).unwrap();
        let values: Vec<Cplx> = (0..set.len())
            .map(|i| {
                let modulus = rng.next_f64() * p[i].exp();
                let phase = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
                Cplx::from_polar(modulus, phase)
            })
            .collect();
        let omega = ValuedSet::new(set.clone(), values).unwrap();
        let bundle = assemble(&omega, &parted, &cov, &w, DPolicy::Fixed(0.0), 1e-6).unwrap();
        residual_worst = residual_worst.max(bundle.max_rel_residual);
        leakage_worst = leakage_worst.max(bundle.max_leakage);
    }

    // the separation disks have summable area under the boundary weight
    let mut area_ok = true;
    let mut area_max = 0.0f64;
    for seed in [1u64, 2, 3] {
        let gen = generate(
            &Scenario { kind: ScenarioKind::RadialDisk { rings: 6 }, seed },
            &w,
        )
        .unwrap();
        for c_level in [1.0f64, 2.0] {
            let mut sum = 0.0;
            for pt in gen.set.points() {
                let phi = w.eval(*pt).unwrap();
                sum += (1.0 - pt.abs()).powi(2) * (-2.0 * c_level * phi).exp();
            }
            area_max = area_max.max(sum);
            if sum > 4.0 {
                area_ok = false;
            }
        }
    }

    verdict(
        "criterion 8 (hyperbolic mirror)",
        contour_worst <= 1e-8
            && euclid_worst <= 1e-10
            && hyp1_worst <= 1e-10
            && residual_worst <= 1e-6
            && leakage_worst <= 1e-7
            && area_ok,
        &format!(
            "contour {contour_worst:.3e}; invariance: euclidean {euclid_worst:.3e}, \
             hyperbolic order-1 {hyp1_worst:.3e} (order>=2 spread {hyp_spread:.3e}, \
             direction-dependent, reported only); residual {residual_worst:.3e}, \
             leakage {leakage_worst:.3e}; area sum max {area_max:.3e} <= 4"
        ),
    );
}

/// Criterion 9: the full suite run is byte-identical across repeat runs.
#[test]
fn c9_report_determinism() {
    let a = run_suite(SuiteName::All, 20, 7).unwrap();
    let b = run_suite(SuiteName::All, 20, 7).unwrap();
    let ja = serde_json::to_vec_pretty(&a).unwrap();
    let jb = serde_json::to_vec_pretty(&b).unwrap();
    verdict(
        "criterion 9 (report determinism)",
        ja == jb && a.all_pass(),
        &format!(
            "two runs of {} records are byte-identical ({} bytes), all records pass",
            a.records.len(),
            ja.len()
        ),
    );
}
