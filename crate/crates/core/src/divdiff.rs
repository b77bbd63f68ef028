//! Divided differences, trace-space seminorms and independent oracles.
//!
//! The order-`j` divided difference over `j + 1` distinct nodes is computed by
//! the standard triangular recursion; under the disk metric every denominator
//! is the Blaschke factor of its window ends instead of the plain difference,
//! which keeps the recursion on a single hyperbolic scale.
//!
//! Two cross-checks are provided: a contour-integral oracle (the order-`j`
//! difference of an analytic `f` equals `1/(2 pi i) \oint f / prod (zeta -
//! z_i)` over a circle enclosing the nodes) and a telescoping expansion of a
//! difference through a fixed anchor tuple, which reproduces the recursion
//! exactly and yields an explicit constant relating consecutive seminorms.

use rand::seq::index::sample as rand_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::FunctionExpr;
use crate::geometry::{Cplx, Metric, Point, PointSet};
use crate::weight::{GrowthBound, Weight};

/// Work cap for exact seminorm enumeration: `|set|^order_points <= 1e7`.
pub const EXACT_TUPLE_BUDGET: f64 = 1e7;

/// A point set with one complex value per point.
#[derive(Clone, Debug)]
pub struct ValuedSet {
    set: PointSet,
    values: Vec<Cplx>,
}

impl ValuedSet {
    pub fn new(set: PointSet, values: Vec<Cplx>) -> Result<Self> {
        if set.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} values",
                set.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput("values must be finite".into()));
        }
        Ok(ValuedSet { set, values })
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn values(&self) -> &[Cplx] {
        &self.values
    }

    pub fn value(&self, i: usize) -> Cplx {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An ordered tuple of distinct indices into a [`ValuedSet`]. The difference
/// order is `len - 1`.
#[derive(Clone, Debug)]
pub struct DivDiffRequest {
    indices: Vec<usize>,
}

impl DivDiffRequest {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("empty tuple".into()));
        }
        let mut seen = indices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("tuple indices must be distinct".into()));
        }
        Ok(DivDiffRequest { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn order(&self) -> usize {
        self.indices.len() - 1
    }
}

/// Triangular recursion over raw nodes/values. Nodes must be pairwise
/// distinct; under the disk metric they must lie in the unit disk.
pub fn divided_difference_nodes(nodes: &[Cplx], values: &[Cplx], metric: Metric) -> Cplx {
    debug_assert_eq!(nodes.len(), values.len());
    let n = nodes.len();
    let mut c = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let denom = metric.diff_factor(nodes[i - j], nodes[i]);
            c[i] = (c[i] - c[i - 1]) / denom;
        }
    }
    c[n - 1]
}

/// All prefix differences `[f(x0), dd(x0,x1), dd(x0,x1,x2), ...]`, i.e. the
/// Newton coefficients of the interpolant on the nodes in the given order.
pub fn divided_difference_prefixes(nodes: &[Cplx], values: &[Cplx], metric: Metric) -> Vec<Cplx> {
    let n = nodes.len();
    let mut c = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let denom = metric.diff_factor(nodes[i - j], nodes[i]);
            c[i] = (c[i] - c[i - 1]) / denom;
        }
    }
    c
}

/// The order-`(len-1)` divided difference of the requested tuple.
pub fn divided_difference(v: &ValuedSet, req: &DivDiffRequest, metric: Metric) -> Result<Cplx> {
    let mut nodes = Vec::with_capacity(req.indices.len());
    let mut values = Vec::with_capacity(req.indices.len());
    for &i in &req.indices {
        if i >= v.len() {
            return Err(Error::InvalidInput(format!(
                "index {i} out of bounds for set of size {}",
                v.len()
            )));
        }
        metric.check(v.set.point(i))?;
        nodes.push(v.set.complex(i));
        values.push(v.value(i));
    }
    Ok(divided_difference_nodes(&nodes, &values, metric))
}

/// Divided difference of a function expression over raw points.
pub fn divided_difference_fn(f: &FunctionExpr, tuple: &[Point], metric: Metric) -> Result<Cplx> {
    let nodes: Vec<Cplx> = tuple.iter().map(|p| p.to_complex()).collect();
    for (i, a) in nodes.iter().enumerate() {
        metric.check(tuple[i])?;
        for b in &nodes[i + 1..] {
            if (a - b).norm_sqr() == 0.0 {
                return Err(Error::InvalidInput("tuple points must be distinct".into()));
            }
        }
    }
    let values: Vec<Cplx> = nodes.iter().map(|&z| f.eval(z)).collect();
    Ok(divided_difference_nodes(&nodes, &values, metric))
}

/// Independent oracle: trapezoidal quadrature of
/// `1/(2 pi i) \oint_{|zeta| = radius} f(zeta) / prod_i (zeta - z_i) dzeta`.
///
/// `f` must be analytic inside the contour (checked against the expression's
/// known poles) and the contour must strictly enclose every tuple point.
pub fn contour_oracle(
    f: &FunctionExpr,
    tuple: &[Point],
    radius: f64,
    quad_points: usize,
) -> Result<Cplx> {
    if tuple.is_empty() {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    if quad_points < 64 {
        return Err(Error::InvalidInput(format!(
            "quad_points must be >= 64, got {quad_points}"
        )));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let tol = 1e-12 * radius.max(1.0);
    for (i, p) in tuple.iter().enumerate() {
        let r = p.abs();
        if (r - radius).abs() <= tol {
            return Err(Error::Domain(format!("contour passes through node {i}")));
        }
        if r > radius {
            return Err(Error::Precondition(format!(
                "node {i} lies outside the contour (|z| = {r} > {radius})"
            )));
        }
    }
    for pole in f.poles() {
        if pole.norm() <= radius * (1.0 + 1e-9) {
            return Err(Error::Precondition(format!(
                "integrand pole at ({}, {}) inside or on the contour",
                pole.re, pole.im
            )));
        }
    }
    let nodes: Vec<Cplx> = tuple.iter().map(|p| p.to_complex()).collect();
    let mut acc = Cplx::new(0.0, 0.0);
    for m in 0..quad_points {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / quad_points as f64;
        let zeta = Cplx::from_polar(radius, theta);
        let mut denom = Cplx::new(1.0, 0.0);
        for z in &nodes {
            denom *= zeta - z;
        }
        acc += f.eval(zeta) * zeta / denom;
    }
    Ok(acc / quad_points as f64)
}

/// Default contour radius: comfortably around the tuple.
pub fn default_contour_radius(tuple: &[Point]) -> f64 {
    2.0 + tuple.iter().map(|p| p.abs()).fold(0.0, f64::max)
}

pub const DEFAULT_QUAD_POINTS: usize = 512;

#[derive(Clone, Copy, Debug)]
pub enum SeminormMode {
    /// Enumerate every tuple (guarded by [`EXACT_TUPLE_BUDGET`]).
    Exact,
    /// Lower bound from `tuples` random ordered tuples.
    Sampled { tuples: usize, seed: u64 },
}

/// `sup |dd^{n-1} omega| exp(-B sum p)` over distinct `n`-point tuples.
///
/// Euclidean differences are permutation invariant, so exact mode enumerates
/// each unordered support once; hyperbolic differences are direction
/// dependent and every ordering is visited. Ties resolve to the
/// lexicographically first tuple, making the parallel reduction deterministic.
pub fn seminorm(v: &ValuedSet, w: &Weight, n: usize, b: f64, mode: SeminormMode) -> Result<f64> {
    let metric = v.set.metric();
    if w.metric != metric {
        return Err(Error::InvalidInput("weight metric differs from set metric".into()));
    }
    if n < 1 {
        return Err(Error::InvalidInput("order count n must be >= 1".into()));
    }
    if n > v.len() {
        return Err(Error::InvalidInput(format!(
            "n = {n} exceeds the {} available points",
            v.len()
        )));
    }
    if !b.is_finite() {
        return Err(Error::InvalidInput("damping exponent must be finite".into()));
    }
    let p = w.eval_many(v.set.points())?;

    match mode {
        SeminormMode::Exact => {
            if (v.len() as f64).powi(n as i32) > EXACT_TUPLE_BUDGET {
                return Err(Error::Budget(format!(
                    "{} points at n = {n} exceed the exact enumeration budget; \
                     use sampled mode",
                    v.len()
                )));
            }
            let combos = combinations(v.len(), n);
            let best = combos
                .par_chunks(4096)
                .map(|chunk| {
                    let mut local: Option<(f64, &[usize])> = None;
                    for combo in chunk {
                        let val = tuple_value(v, &p, combo, b, metric);
                        if local.is_none_or(|(cur, _)| val > cur) {
                            local = Some((val, combo));
                        }
                    }
                    local
                })
                .reduce(
                    || None,
                    |a, b| match (a, b) {
                        (None, x) | (x, None) => x,
                        (Some((va, ta)), Some((vb, tb))) => {
                            if vb > va || (vb == va && tb < ta) {
                                Some((vb, tb))
                            } else {
                                Some((va, ta))
                            }
                        }
                    },
                );
            Ok(best.map_or(0.0, |(val, _)| val))
        }
        SeminormMode::Sampled { tuples, seed } => {
            if tuples == 0 {
                return Ok(0.0);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0.0f64;
            for _ in 0..tuples {
                let combo: Vec<usize> = rand_sample(&mut rng, v.len(), n).into_vec();
                let val = ordered_tuple_value(v, &p, &combo, b, metric);
                best = best.max(val);
            }
            Ok(best)
        }
    }
}

/// Value of one unordered support: for the plane a single representative
/// ordering suffices; for the disk all orderings are taken.
fn tuple_value(v: &ValuedSet, p: &[f64], combo: &[usize], b: f64, metric: Metric) -> f64 {
    match metric {
        Metric::Plane => ordered_tuple_value(v, p, combo, b, metric),
        Metric::Disk => {
            let mut perm = combo.to_vec();
            let mut best = 0.0f64;
            for_each_permutation(&mut perm, &mut |ordering| {
                best = best.max(ordered_tuple_value(v, p, ordering, b, metric));
            });
            best
        }
    }
}

fn ordered_tuple_value(v: &ValuedSet, p: &[f64], tuple: &[usize], b: f64, metric: Metric) -> f64 {
    let nodes: Vec<Cplx> = tuple.iter().map(|&i| v.set.complex(i)).collect();
    let values: Vec<Cplx> = tuple.iter().map(|&i| v.value(i)).collect();
    let dd = divided_difference_nodes(&nodes, &values, metric);
    let psum: f64 = tuple.iter().map(|&i| p[i]).sum();
    dd.norm() * (-b * psum).exp()
}

/// A sampled seminorm curve `B -> S_B`.
///
/// Finiteness is meaningless on a finite set; the curve is the observable,
/// and membership at a target bound `A` is the first sampled level whose
/// value drops to `A` or below.
#[derive(Clone, Debug)]
pub struct SeminormCurve {
    pub n: usize,
    pub samples: Vec<(f64, f64)>,
}

impl SeminormCurve {
    pub fn first_level_below(&self, a: f64) -> Option<f64> {
        self.samples.iter().find(|(_, s)| *s <= a).map(|(b, _)| *b)
    }
}

pub fn seminorm_curve(
    v: &ValuedSet,
    w: &Weight,
    n: usize,
    bs: &[f64],
    mode: SeminormMode,
) -> Result<SeminormCurve> {
    let mut samples = Vec::with_capacity(bs.len());
    for &b in bs {
        samples.push((b, seminorm(v, w, n, b, mode)?));
    }
    Ok(SeminormCurve { n, samples })
}

/// Telescoping expansion of `dd^{n-1}(tuple)` through the anchor tuple: the
/// sum of `dd^n` terms over mixed anchor/tuple windows times their closing
/// factors, plus the pure anchor difference. Algebraically identical to the
/// direct recursion; used as an identity check and to derive seminorm
/// transfer constants.
pub fn chain_bound_expand(v: &ValuedSet, tuple: &[usize], anchors: &[usize]) -> Result<Cplx> {
    let n = tuple.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    if anchors.len() != n {
        return Err(Error::InvalidInput(format!(
            "need {n} anchors for an {n}-point tuple, got {}",
            anchors.len()
        )));
    }
    let mut all = Vec::with_capacity(2 * n);
    all.extend_from_slice(tuple);
    all.extend_from_slice(anchors);
    DivDiffRequest::new(all)?; // distinctness across tuple and anchors
    for &i in tuple.iter().chain(anchors) {
        if i >= v.len() {
            return Err(Error::InvalidInput(format!("index {i} out of bounds")));
        }
    }
    let metric = v.set.metric();

    let mut acc = Cplx::new(0.0, 0.0);
    for i in 1..=n {
        // window: (anchor_i, ..., anchor_1, tuple_1, ..., tuple_{n-i+1})
        let mut idx = Vec::with_capacity(n + 1);
        idx.extend(anchors[..i].iter().rev());
        idx.extend_from_slice(&tuple[..n - i + 1]);
        let nodes: Vec<Cplx> = idx.iter().map(|&j| v.set.complex(j)).collect();
        let values: Vec<Cplx> = idx.iter().map(|&j| v.value(j)).collect();
        let dd = divided_difference_nodes(&nodes, &values, metric);
        let closing = metric.diff_factor(v.set.complex(anchors[i - 1]), v.set.complex(tuple[n - i]));
        acc += dd * closing;
    }
    let rev: Vec<usize> = anchors.iter().rev().copied().collect();
    let nodes: Vec<Cplx> = rev.iter().map(|&j| v.set.complex(j)).collect();
    let values: Vec<Cplx> = rev.iter().map(|&j| v.value(j)).collect();
    acc += divided_difference_nodes(&nodes, &values, metric);
    Ok(acc)
}

/// Constant produced by the expansion: whenever the order-`n` seminorm at
/// level `B` is `S`, every order-`(n-1)` difference over a tuple avoiding the
/// anchors is bounded by `K exp(B' sum p)` with the returned `(K, B')`.
///
/// On the plane the closing factors grow like the points themselves; the
/// growth floor absorbs them into `B' = B + 1/(2K_w)`. On the disk the
/// factors have modulus below one and `B' = B`.
#[derive(Clone, Copy, Debug)]
pub struct ChainConstant {
    pub k_const: f64,
    pub b_prime: f64,
}

pub fn chain_constant(v: &ValuedSet, w: &Weight, anchors: &[usize], b: f64) -> Result<ChainConstant> {
    let n = anchors.len();
    if n == 0 {
        return Err(Error::InvalidInput("need at least one anchor".into()));
    }
    let metric = v.set.metric();
    let s_high = seminorm(v, w, n + 1, b, SeminormMode::Exact)?;
    let anchor_points: Vec<Point> = anchors.iter().map(|&i| v.set.point(i)).collect();
    let p_sum = w.eval_sum(&anchor_points)?;
    let rev: Vec<usize> = anchors.iter().rev().copied().collect();
    let nodes: Vec<Cplx> = rev.iter().map(|&j| v.set.complex(j)).collect();
    let values: Vec<Cplx> = rev.iter().map(|&j| v.value(j)).collect();
    let anchor_dd = divided_difference_nodes(&nodes, &values, metric).norm();
    let (k_const, b_prime) = match metric {
        Metric::Plane => {
            let max_abs = anchor_points.iter().map(|p| p.abs()).fold(0.0, f64::max);
            let k = 2.0 * n as f64 * (1.0 + max_abs) * (b * p_sum).exp() * s_high + anchor_dd;
            (k, b + 1.0 / (2.0 * w.k))
        }
        Metric::Disk => {
            let k = n as f64 * (b * p_sum).exp() * s_high + anchor_dd;
            (k, b)
        }
    };
    Ok(ChainConstant { k_const, b_prime })
}

/// Measured growth certificate for order-`j` differences of `f`.
///
/// Given `|f| <= A exp(B_f p)` on the sampled region, each difference step
/// trades one division for a comparability factor, so the certified exponent
/// is `B_f + j D0` and the constant is the measured supremum ratio.
pub fn growth_certificate(
    f: &FunctionExpr,
    w: &Weight,
    j: usize,
    tuples: &[Vec<Point>],
    b_f: f64,
) -> Result<GrowthBound> {
    let b_prime = b_f + j as f64 * w.d0;
    let mut a_prime = 0.0f64;
    for tuple in tuples {
        if tuple.len() != j + 1 {
            return Err(Error::InvalidInput(format!(
                "order-{j} certificate needs {} points per tuple, got {}",
                j + 1,
                tuple.len()
            )));
        }
        let dd = divided_difference_fn(f, tuple, w.metric)?;
        let psum = w.eval_sum(tuple)?;
        a_prime = a_prime.max(dd.norm() * (-b_prime * psum).exp());
    }
    GrowthBound::new(a_prime, b_prime)
}

/// Lexicographic `k`-combinations of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Heap's algorithm; visits every permutation of `items` exactly once.
pub fn for_each_permutation<T: Copy>(items: &mut [T], visit: &mut impl FnMut(&[T])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
