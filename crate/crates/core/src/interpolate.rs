//! Per-disk Newton interpolants, indicator and level factors, and the
//! assembled global interpolant.
//!
//! For a covering disk `D` with nodes `a_1, ..., a_k` the pieces are:
//!
//! * `P`: the Newton-form interpolant of the target values on the disk nodes
//!   (difference factors of the ambient metric);
//! * `F`: a product over parts of `1 - prod_i (z - a_i) f_j(z)`, where each
//!   `f_j` interpolates the reciprocal node products on the part's points
//!   outside the disk. `F` is exactly 1 on the disk nodes and vanishes on
//!   every other disk's nodes;
//! * `G`: built by the triangular correction recursion so that it equals
//!   `exp(D p(center))` at every disk node.
//!
//! The interpolant is `f = sum_disks F G P exp(-D p(center))`: at a node the
//! own-disk term reduces to the node value and all foreign terms are killed
//! by `F`. The interpolation identity holds for every damping exponent `D`;
//! `D` only trades growth between factors, so it defaults to zero and is
//! exposed for growth experiments.
//!
//! Single-node oracle requests return constants; larger requests use
//! barycentric Lagrange interpolation, with a Lebesgue-constant estimate as
//! the conditioning guard.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::covering::{build_covering, covering_params, Covering};
use crate::divdiff::{divided_difference_prefixes, ValuedSet};
use crate::error::{Error, Result};
use crate::expr::{BarycentricForm, FunctionExpr};
use crate::geometry::{Cplx, Metric, PartedSet, Point, PointSet};
use crate::weight::{GrowthBound, Weight};

/// Default tolerance for interpolation residuals, relative to `1 + |value|`.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-6;

/// Lebesgue-constant guard for oracle interpolation.
pub const LEBESGUE_LIMIT: f64 = 1e12;

/// Node-value tolerance for the indicator/level factors, relative.
const FACTOR_TOL: f64 = 1e-8;

/// Instance-size guardrails; beyond them double-precision conditioning is
/// not trustworthy.
pub const MAX_POINTS: usize = 200;
pub const MAX_PART_POINTS: usize = 100;
pub const MAX_PARTS: usize = 4;

#[derive(Clone, Debug)]
pub struct OracleRequest {
    pub nodes: PointSet,
    pub values: Vec<Cplx>,
    /// Exponent level the measured supremum is reported against.
    pub target: GrowthBound,
}

impl OracleRequest {
    pub fn new(nodes: PointSet, values: Vec<Cplx>, target: GrowthBound) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput("oracle values must be finite".into()));
        }
        Ok(OracleRequest { nodes, values, target })
    }
}

#[derive(Clone, Debug)]
pub struct OracleInterpolant {
    pub expr: FunctionExpr,
    /// `sup |f| exp(-target.b p)` over the standard grid.
    pub measured_sup: f64,
    /// Max of the pointwise Lebesgue function over the standard grid.
    pub lebesgue: f64,
}

/// Deterministic evaluation grid around a node family: a square lattice for
/// the plane, rings inside the unit disk otherwise.
pub fn standard_grid(metric: Metric, nodes: &[Point]) -> Vec<Point> {
    let max_abs = nodes.iter().map(|p| p.abs()).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(100);
    match metric {
        Metric::Plane => {
            let r = 1.5 * max_abs.max(1.0);
            for i in 0..10 {
                for j in 0..10 {
                    let x = -r + 2.0 * r * i as f64 / 9.0;
                    let y = -r + 2.0 * r * j as f64 / 9.0;
                    out.push(Point { re: x, im: y });
                }
            }
        }
        Metric::Disk => {
            let cap = (0.5 * (1.0 + max_abs)).min(0.95);
            for i in 0..10 {
                let r = cap * (i as f64 + 1.0) / 10.0;
                for j in 0..10 {
                    let th = 2.0 * std::f64::consts::PI * j as f64 / 10.0 + 0.05;
                    out.push(Point { re: r * th.cos(), im: r * th.sin() });
                }
            }
        }
    }
    out
}

/// Grid over the node bounding box, the region the Lebesgue constant speaks
/// about (the wide grid would measure extrapolation instead).
fn node_box_grid(nodes: &[Point]) -> Vec<Point> {
    let mut min_re = f64::INFINITY;
    let mut max_re = f64::NEG_INFINITY;
    let mut min_im = f64::INFINITY;
    let mut max_im = f64::NEG_INFINITY;
    for p in nodes {
        min_re = min_re.min(p.re);
        max_re = max_re.max(p.re);
        min_im = min_im.min(p.im);
        max_im = max_im.max(p.im);
    }
    let pad_re = 0.05 * (max_re - min_re).max(1e-9);
    let pad_im = 0.05 * (max_im - min_im).max(1e-9);
    let mut out = Vec::with_capacity(100);
    for i in 0..10 {
        for j in 0..10 {
            out.push(Point {
                re: min_re - pad_re + (max_re - min_re + 2.0 * pad_re) * i as f64 / 9.0,
                im: min_im - pad_im + (max_im - min_im + 2.0 * pad_im) * j as f64 / 9.0,
            });
        }
    }
    out
}

/// Exact interpolant through the requested nodes: a constant for a single
/// node, barycentric Lagrange otherwise. Errors out when the Lebesgue
/// estimate over the node region exceeds [`LEBESGUE_LIMIT`].
pub fn oracle_interpolate(req: &OracleRequest, w: &Weight) -> Result<OracleInterpolant> {
    if req.nodes.is_empty() {
        return Err(Error::InvalidInput("oracle request needs at least one node".into()));
    }
    let grid = standard_grid(req.nodes.metric(), req.nodes.points());
    let (expr, lebesgue) = if req.nodes.len() == 1 {
        (FunctionExpr::constant(req.values[0]), 1.0)
    } else {
        let nodes: Vec<Cplx> = req.nodes.points().iter().map(|p| p.to_complex()).collect();
        let form = BarycentricForm::new(nodes, req.values.clone())?;
        let mut leb = 1.0f64;
        for g in node_box_grid(req.nodes.points()) {
            leb = leb.max(form.lebesgue_at(g.to_complex()));
        }
        if !leb.is_finite() || leb > LEBESGUE_LIMIT {
            return Err(Error::Conditioning(format!(
                "Lebesgue estimate {leb:.3e} exceeds {LEBESGUE_LIMIT:.0e}; \
                 use a smaller or better-spread instance"
            )));
        }
        (FunctionExpr::Barycentric(std::sync::Arc::new(form)), leb)
    };
    let mut measured_sup = 0.0f64;
    for g in &grid {
        if w.metric.contains(*g) {
            let damp = (-req.target.b * w.eval(*g)?).exp();
            measured_sup = measured_sup.max(expr.eval(g.to_complex()).norm() * damp);
        }
    }
    Ok(OracleInterpolant { expr, measured_sup, lebesgue })
}

/// Newton-form interpolant of `values` on the nodes selected by `ordering`.
///
/// On the plane the coefficients are the prefix divided differences. On the
/// disk the factor basis is the Blaschke products of the leading nodes, and
/// the coefficients come from the triangular system those products induce
/// (they agree with the hyperbolic differences at order one; at higher order
/// the recursion and the basis diverge and interpolation is the contract
/// that wins).
pub fn newton_polynomial(values: &ValuedSet, ordering: &[usize]) -> Result<FunctionExpr> {
    if ordering.is_empty() {
        return Err(Error::InvalidInput("empty node ordering".into()));
    }
    let mut seen = ordering.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("ordering indices must be distinct".into()));
    }
    let metric = values.set().metric();
    let nodes: Vec<Cplx> = ordering.iter().map(|&i| values.set().complex(i)).collect();
    let vals: Vec<Cplx> = ordering.iter().map(|&i| values.value(i)).collect();

    let coeffs = match metric {
        Metric::Plane => divided_difference_prefixes(&nodes, &vals, metric),
        Metric::Disk => triangular_coefficients(&nodes, &vals, metric),
    };
    let expr = FunctionExpr::newton(nodes.clone(), coeffs, metric);

    for (i, (x, v)) in nodes.iter().zip(&vals).enumerate() {
        let err = (expr.eval(*x) - v).norm();
        if err > 1e-10 * (1.0 + v.norm()) {
            return Err(Error::Conditioning(format!(
                "newton interpolant misses node {i} by {err:.3e}"
            )));
        }
    }
    Ok(expr)
}

/// Forward substitution for the generalized Newton basis
/// `phi_m(z) = prod_{i <= m} factor(nodes[i], z)`.
fn triangular_coefficients(nodes: &[Cplx], values: &[Cplx], metric: Metric) -> Vec<Cplx> {
    let k = nodes.len();
    let mut coeffs: Vec<Cplx> = Vec::with_capacity(k);
    for m in 0..k {
        let z = nodes[m];
        let mut acc = Cplx::new(0.0, 0.0);
        let mut phi = Cplx::new(1.0, 0.0);
        for j in 0..m {
            acc += coeffs[j] * phi;
            phi *= metric.diff_factor(nodes[j], z);
        }
        coeffs.push((values[m] - acc) / phi);
    }
    coeffs
}

/// Extends values given on part `j` to the whole union: every point in a disk
/// receives the value of the disk's unique part-`j` node, or zero when the
/// disk misses the part. The output is constant on each disk.
pub fn extend_values(
    parted: &PartedSet,
    j: usize,
    values_on_part: &[Cplx],
    cov: &Covering,
) -> Result<ValuedSet> {
    if j >= parted.n_parts() {
        return Err(Error::InvalidInput(format!("part {j} out of range")));
    }
    let part = parted.part(j);
    if part.len() != values_on_part.len() {
        return Err(Error::InvalidInput(format!(
            "part {j} has {} points but {} values were given",
            part.len(),
            values_on_part.len()
        )));
    }
    let set = parted.set();
    if cov.point_center.len() != set.len() {
        return Err(Error::InvalidInput("covering does not match the point set".into()));
    }
    let mut value_of_point = vec![None; set.len()];
    for (slot, &i) in part.iter().enumerate() {
        value_of_point[i] = Some(values_on_part[slot]);
    }
    // per disk: the value of its unique part-j member, if any
    let mut disk_value = vec![Cplx::new(0.0, 0.0); cov.centers.len()];
    for (rank, members) in cov.disk_members.iter().enumerate() {
        let mut found = None;
        for &i in members {
            if let Some(v) = value_of_point[i] {
                if found.is_some() {
                    return Err(Error::Verification(format!(
                        "disk {rank} holds two points of part {j}"
                    )));
                }
                found = Some(v);
            }
        }
        if let Some(v) = found {
            disk_value[rank] = v;
        }
    }
    let mut out = Vec::with_capacity(set.len());
    for i in 0..set.len() {
        let rank = cov.point_center[i];
        if rank == usize::MAX {
            return Err(Error::Precondition(format!(
                "point {i} is not covered; the covering contract is violated"
            )));
        }
        out.push(disk_value[rank]);
    }
    ValuedSet::new(set.clone(), out)
}

/// The indicator factor for one disk: 1 at its nodes, 0 at every other
/// disk's nodes.
pub fn build_indicator(
    parted: &PartedSet,
    cov: &Covering,
    w: &Weight,
    center_rank: usize,
) -> Result<FunctionExpr> {
    let set = parted.set();
    let metric = set.metric();
    let members = &cov.disk_members[center_rank];
    let n_parts = parted.n_parts();

    let node_factors: Vec<FunctionExpr> = members
        .iter()
        .map(|&i| FunctionExpr::factor(metric, set.complex(i)))
        .collect();

    let mut brackets = Vec::new();
    for j in 0..n_parts {
        let outside: Vec<usize> = parted
            .part(j)
            .iter()
            .copied()
            .filter(|i| cov.point_center[*i] != center_rank)
            .collect();
        if outside.is_empty() {
            continue;
        }
        let mut values = Vec::with_capacity(outside.len());
        for &i in &outside {
            let mut prod = Cplx::new(1.0, 0.0);
            for &m in members {
                prod *= metric.diff_factor(set.complex(m), set.complex(i));
            }
            values.push(prod.inv());
        }
        let nodes = set.subset(&outside)?;
        let target = GrowthBound::new(
            (cov.constants.a * cov.constants.eps)
                .powi(-(n_parts as i32))
                .min(f64::MAX),
            n_parts as f64 * cov.constants.b1,
        )?;
        let oracle = oracle_interpolate(&OracleRequest::new(nodes, values, target)?, w)?;
        let mut kill = node_factors.clone();
        kill.push(oracle.expr);
        brackets.push(FunctionExpr::sum(vec![
            FunctionExpr::one(),
            FunctionExpr::scaled(Cplx::new(-1.0, 0.0), FunctionExpr::product(kill)),
        ]));
    }
    let f = if brackets.is_empty() {
        FunctionExpr::one()
    } else {
        FunctionExpr::product(brackets)
    };

    for &i in members {
        let v = f.eval(set.complex(i));
        if (v - Cplx::new(1.0, 0.0)).norm() > FACTOR_TOL {
            return Err(Error::Verification(format!(
                "indicator is {v} instead of 1 at own node {i}"
            )));
        }
    }
    Ok(f)
}

/// The level factor for one disk: `exp(D p(center))` at every disk node,
/// built by the triangular correction recursion with constant oracle pieces.
pub fn build_level(
    parted: &PartedSet,
    cov: &Covering,
    w: &Weight,
    center_rank: usize,
    d: f64,
) -> Result<FunctionExpr> {
    if d < 0.0 {
        return Err(Error::InvalidInput(format!("damping exponent must be >= 0, got {d}")));
    }
    let set = parted.set();
    let metric = set.metric();
    let center_point = set.point(cov.centers[center_rank]);
    let target_value = (d * w.eval(center_point)?).exp();

    // disk nodes in part order, one per part where present
    let mut alphas: Vec<usize> = cov.disk_members[center_rank].clone();
    alphas.sort_by_key(|&i| parted.part_of(i));
    if alphas.is_empty() {
        return Err(Error::InvalidInput("disk has no nodes".into()));
    }

    let t = Cplx::new(target_value, 0.0);
    let first = set.subset(&alphas[..1])?;
    let oracle = oracle_interpolate(
        &OracleRequest::new(first, vec![t], GrowthBound::new(target_value, 0.0)?)?,
        w,
    )?;
    let mut h = oracle.expr;
    for m in 1..alphas.len() {
        let zm = set.complex(alphas[m]);
        let mut denom = Cplx::new(1.0, 0.0);
        for &prev in &alphas[..m] {
            denom *= metric.diff_factor(set.complex(prev), zm);
        }
        let correction = (t - h.eval(zm)) / denom;
        let node = set.subset(&alphas[m..m + 1])?;
        let oracle = oracle_interpolate(
            &OracleRequest::new(
                node,
                vec![correction],
                GrowthBound::new(correction.norm(), 0.0)?,
            )?,
            w,
        )?;
        let mut factors = vec![oracle.expr];
        for &prev in &alphas[..m] {
            factors.push(FunctionExpr::factor(metric, set.complex(prev)));
        }
        h = FunctionExpr::sum(vec![h, FunctionExpr::product(factors)]);
    }

    for &i in &alphas {
        let v = h.eval(set.complex(i));
        if (v - t).norm() > FACTOR_TOL * (1.0 + t.norm()) {
            return Err(Error::Verification(format!(
                "level factor is {v} instead of {t} at node {i}"
            )));
        }
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug)]
pub enum DPolicy {
    Fixed(f64),
    /// `D = measured component exponent + margin`.
    Auto { margin: f64 },
}

impl Default for DPolicy {
    fn default() -> Self {
        DPolicy::Fixed(0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterSummary {
    pub center: usize,
    pub members: Vec<usize>,
    pub radius: f64,
}

#[derive(Clone, Debug)]
pub struct CenterComponent {
    pub center_rank: usize,
    pub p_expr: FunctionExpr,
    pub f_expr: FunctionExpr,
    pub g_expr: FunctionExpr,
    pub damping: f64,
}

#[derive(Clone, Debug)]
pub struct InterpolantBundle {
    pub d: f64,
    pub f: FunctionExpr,
    pub components: Vec<CenterComponent>,
    pub summaries: Vec<CenterSummary>,
    /// `|f(a) - omega(a)|` per union point.
    pub residuals: Vec<f64>,
    /// Residuals relative to `1 + |omega(a)|`.
    pub rel_residuals: Vec<f64>,
    pub max_rel_residual: f64,
    /// Sum over foreign disks of `|term(a)|`, relative to `1 + |omega(a)|`.
    pub foreign_leakage: Vec<f64>,
    pub max_leakage: f64,
    /// Measured exponent of the components over the standard grid.
    pub b_measured: f64,
    /// `sum over centers of exp((b_measured - D) p(center))`.
    pub coeff_sum: f64,
    /// `(p(z), |f(z)|)` on the standard grid, sorted by weight level.
    pub growth: Vec<(f64, f64)>,
}

/// Builds the per-disk components and the assembled interpolant, then checks
/// it reproduces the target values.
pub fn assemble(
    omega: &ValuedSet,
    parted: &PartedSet,
    cov: &Covering,
    w: &Weight,
    policy: DPolicy,
    tol: f64,
) -> Result<InterpolantBundle> {
    let set = parted.set();
    if omega.set() != set {
        return Err(Error::InvalidInput("values are not on the union set".into()));
    }
    check_guardrails(parted)?;

    let d = match policy {
        DPolicy::Fixed(d) => d,
        DPolicy::Auto { .. } => 0.0, // measured after a first pass below
    };
    let components = build_components(omega, parted, cov, w, d)?;

    let grid = standard_grid(set.metric(), set.points());
    let b_measured = measure_exponent(&components, w, &grid)?;
    let (d, components) = match policy {
        DPolicy::Fixed(_) => (d, components),
        DPolicy::Auto { margin } => {
            let d = b_measured + margin;
            (d, build_components(omega, parted, cov, w, d)?)
        }
    };

    let p_centers: Vec<f64> = cov
        .centers
        .iter()
        .map(|&i| w.eval(set.point(i)))
        .collect::<Result<_>>()?;
    let terms: Vec<FunctionExpr> = components
        .iter()
        .map(|comp| {
            FunctionExpr::scaled(
                Cplx::new((-d * p_centers[comp.center_rank]).exp(), 0.0),
                FunctionExpr::product(vec![
                    comp.f_expr.clone(),
                    comp.g_expr.clone(),
                    comp.p_expr.clone(),
                ]),
            )
        })
        .collect();
    let f = FunctionExpr::sum(terms.clone());

    // residuals and foreign leakage at every node
    let evals: Vec<(f64, f64)> = (0..set.len())
        .into_par_iter()
        .map(|i| {
            let z = set.complex(i);
            let own = cov.point_center[i];
            let mut total = Cplx::new(0.0, 0.0);
            let mut foreign = 0.0f64;
            for (rank, term) in terms.iter().enumerate() {
                let v = term.eval(z);
                total += v;
                if rank != own {
                    foreign += v.norm();
                }
            }
            let scale = 1.0 + omega.value(i).norm();
            ((total - omega.value(i)).norm(), foreign / scale)
        })
        .collect();

    let residuals: Vec<f64> = evals.iter().map(|e| e.0).collect();
    let foreign_leakage: Vec<f64> = evals.iter().map(|e| e.1).collect();
    let rel_residuals: Vec<f64> = residuals
        .iter()
        .zip(omega.values())
        .map(|(r, v)| r / (1.0 + v.norm()))
        .collect();
    let max_rel_residual = rel_residuals.iter().copied().fold(0.0, f64::max);
    let max_leakage = foreign_leakage.iter().copied().fold(0.0, f64::max);

    if max_rel_residual > tol {
        let worst = rel_residuals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(Error::Conditioning(format!(
            "residual {max_rel_residual:.3e} at point {worst} exceeds {tol:.1e}"
        )));
    }

    let coeff_sum = p_centers.iter().map(|p| ((b_measured - d) * p).exp()).sum();
    let mut growth: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    for g in &grid {
        if w.metric.contains(*g) {
            growth.push((w.eval(*g)?, f.eval(g.to_complex()).norm()));
        }
    }
    growth.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let summaries = cov
        .centers
        .iter()
        .enumerate()
        .map(|(rank, &c)| CenterSummary {
            center: c,
            members: cov.disk_members[rank].clone(),
            radius: cov.radii[rank],
        })
        .collect();

    Ok(InterpolantBundle {
        d,
        f,
        components,
        summaries,
        residuals,
        rel_residuals,
        max_rel_residual,
        foreign_leakage,
        max_leakage,
        b_measured,
        coeff_sum,
        growth,
    })
}

fn check_guardrails(parted: &PartedSet) -> Result<()> {
    if parted.set().len() > MAX_POINTS {
        return Err(Error::Budget(format!(
            "{} points exceed the {MAX_POINTS}-point guardrail",
            parted.set().len()
        )));
    }
    if parted.n_parts() > MAX_PARTS {
        return Err(Error::Budget(format!(
            "{} parts exceed the {MAX_PARTS}-part guardrail",
            parted.n_parts()
        )));
    }
    if let Some(j) = (0..parted.n_parts()).find(|&j| parted.part(j).len() > MAX_PART_POINTS) {
        return Err(Error::Budget(format!(
            "part {j} exceeds the {MAX_PART_POINTS}-point guardrail"
        )));
    }
    Ok(())
}

fn build_components(
    omega: &ValuedSet,
    parted: &PartedSet,
    cov: &Covering,
    w: &Weight,
    d: f64,
) -> Result<Vec<CenterComponent>> {
    (0..cov.centers.len())
        .into_par_iter()
        .map(|rank| {
            let members = &cov.disk_members[rank];
            let p_expr = newton_polynomial(omega, members)?;
            let f_expr = build_indicator(parted, cov, w, rank)?;
            let g_expr = build_level(parted, cov, w, rank, d)?;
            Ok(CenterComponent {
                center_rank: rank,
                p_expr,
                f_expr,
                g_expr,
                damping: d,
            })
        })
        .collect()
}

/// Measured growth exponent of the component products over a grid:
/// `max ln(1 + |F G P|) / max(p, 1/2)`.
fn measure_exponent(components: &[CenterComponent], w: &Weight, grid: &[Point]) -> Result<f64> {
    let mut b = 0.0f64;
    for g in grid {
        if !w.metric.contains(*g) {
            continue;
        }
        let p = w.eval(*g)?.max(0.5);
        let z = g.to_complex();
        for comp in components {
            let v = comp.f_expr.eval(z) * comp.g_expr.eval(z) * comp.p_expr.eval(z);
            b = b.max(v.norm().ln_1p() / p);
        }
    }
    Ok(b)
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub trial: usize,
    pub direction: &'static str,
    pub max_rel_residual: f64,
    pub max_leakage: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub records: Vec<TraceRecord>,
    pub all_pass: bool,
}

/// End-to-end check on one parted instance: random admissible values are
/// interpolated by the assembled `f` (sufficiency), and values on a single
/// part survive the constant-per-disk extension and are recovered at the
/// part (necessity). Random moduli stay below `exp(p)`.
pub fn verify_trace_identity(
    parted: &PartedSet,
    w: &Weight,
    trials: usize,
    seed: u64,
    base_c: f64,
    tol: f64,
) -> Result<TraceReport> {
    let set = parted.set();
    let c = base_c * w.d0;
    let eps = covering_params(parted, w, c)?;
    let cov = build_covering(parted, w, eps, c)?;
    let p = w.eval_many(set.points())?;

    let mut records = Vec::with_capacity(2 * trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        // sufficiency: random values on the whole union
        let values: Vec<Cplx> = (0..set.len())
            .map(|i| {
                let modulus = rng.random::<f64>() * p[i].exp();
                let phase = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                Cplx::from_polar(modulus, phase)
            })
            .collect();
        let omega = ValuedSet::new(set.clone(), values)?;
        let bundle = assemble(&omega, parted, &cov, w, DPolicy::Fixed(0.0), tol)?;
        records.push(TraceRecord {
            trial,
            direction: "sufficiency",
            max_rel_residual: bundle.max_rel_residual,
            max_leakage: bundle.max_leakage,
            pass: bundle.max_rel_residual <= tol,
        });

        // necessity: random values on one part, extended then recovered
        let j = trial % parted.n_parts();
        let part = parted.part(j);
        let part_values: Vec<Cplx> = part
            .iter()
            .map(|&i| {
                let modulus = rng.random::<f64>() * p[i].exp();
                let phase = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                Cplx::from_polar(modulus, phase)
            })
            .collect();
        let extended = extend_values(parted, j, &part_values, &cov)?;
        let bundle = assemble(&extended, parted, &cov, w, DPolicy::Fixed(0.0), tol)?;
        let mut worst = 0.0f64;
        for (slot, &i) in part.iter().enumerate() {
            let err = (bundle.f.eval(set.complex(i)) - part_values[slot]).norm();
            worst = worst.max(err / (1.0 + part_values[slot].norm()));
        }
        records.push(TraceRecord {
            trial,
            direction: "necessity",
            max_rel_residual: worst,
            max_leakage: bundle.max_leakage,
            pass: worst <= tol,
        });
    }
    let all_pass = records.iter().all(|r| r.pass);
    Ok(TraceReport { records, all_pass })
}
