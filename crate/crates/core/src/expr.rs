//! Lazily evaluated function expressions.
//!
//! Interpolants are kept as expression trees (sums and products of linear or
//! Blaschke factors, Newton forms evaluated by Horner, barycentric Lagrange
//! forms) and never expanded into global coefficient lists: expanded degrees
//! of the assembled interpolant are numerically hostile, the factored forms
//! are not. Trees are immutable and cheap to share across threads.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Cplx, Metric};

#[derive(Clone, Debug)]
pub enum FunctionExpr {
    Const(Cplx),
    /// `z - root`.
    Linear { root: Cplx },
    /// `(z - root) / (1 - conj(root) z)`, the disk factor.
    Blaschke { root: Cplx },
    Scaled { coeff: Cplx, inner: Arc<FunctionExpr> },
    Sum(Vec<Arc<FunctionExpr>>),
    Product(Vec<Arc<FunctionExpr>>),
    Newton(Arc<NewtonForm>),
    Barycentric(Arc<BarycentricForm>),
}

/// `c0 + c1 f1(z) + c2 f1(z) f2(z) + ...` where `fi` is the difference factor
/// rooted at `nodes[i-1]` for the form's metric. Evaluated by Horner.
#[derive(Clone, Debug)]
pub struct NewtonForm {
    pub nodes: Vec<Cplx>,
    pub coeffs: Vec<Cplx>,
    pub metric: Metric,
}

/// Barycentric Lagrange form on distinct nodes. Weights are pre-scaled by the
/// node diameter so their common magnitude stays near 1; the common factor
/// cancels in the evaluation ratio.
#[derive(Clone, Debug)]
pub struct BarycentricForm {
    pub nodes: Vec<Cplx>,
    pub values: Vec<Cplx>,
    pub weights: Vec<Cplx>,
}

impl BarycentricForm {
    pub fn new(nodes: Vec<Cplx>, values: Vec<Cplx>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidInput("node/value length mismatch".into()));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput("barycentric form needs at least one node".into()));
        }
        let mut diameter: f64 = 0.0;
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                diameter = diameter.max((nodes[i] - nodes[j]).norm());
            }
        }
        if nodes.len() > 1 && diameter == 0.0 {
            return Err(Error::InvalidInput("barycentric nodes must be distinct".into()));
        }
        let scale = if diameter > 0.0 { 2.0 / diameter } else { 1.0 };
        let mut weights = Vec::with_capacity(nodes.len());
        for i in 0..nodes.len() {
            let mut prod = Cplx::new(1.0, 0.0);
            for j in 0..nodes.len() {
                if i != j {
                    let d = (nodes[i] - nodes[j]) * scale;
                    if d.norm_sqr() == 0.0 {
                        return Err(Error::InvalidInput(format!(
                            "barycentric nodes {j} and {i} coincide"
                        )));
                    }
                    prod *= d;
                }
            }
            if !prod.norm().is_finite() || prod.norm() == 0.0 {
                return Err(Error::Conditioning(
                    "barycentric weight overflowed; use a smaller instance".into(),
                ));
            }
            weights.push(prod.inv());
        }
        Ok(BarycentricForm { nodes, values, weights })
    }

    pub fn eval(&self, z: Cplx) -> Cplx {
        // At a node the formula has a removable singularity; return the value.
        for (i, x) in self.nodes.iter().enumerate() {
            if (z - x).norm_sqr() == 0.0 {
                return self.values[i];
            }
        }
        let mut num = Cplx::new(0.0, 0.0);
        let mut den = Cplx::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            let t = self.weights[i] / (z - self.nodes[i]);
            num += t * self.values[i];
            den += t;
        }
        num / den
    }

    /// `sum_i |l_i(z)|`, the pointwise Lebesgue function.
    pub fn lebesgue_at(&self, z: Cplx) -> f64 {
        for (i, x) in self.nodes.iter().enumerate() {
            let _ = i;
            if (z - x).norm_sqr() == 0.0 {
                return 1.0;
            }
        }
        let mut den = Cplx::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        for i in 0..self.nodes.len() {
            let t = self.weights[i] / (z - self.nodes[i]);
            den += t;
            abs_sum += t.norm();
        }
        if den.norm() == 0.0 {
            return f64::INFINITY;
        }
        abs_sum / den.norm()
    }
}

impl FunctionExpr {
    pub fn constant(c: Cplx) -> Self {
        FunctionExpr::Const(c)
    }

    pub fn zero() -> Self {
        FunctionExpr::Const(Cplx::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        FunctionExpr::Const(Cplx::new(1.0, 0.0))
    }

    /// The metric's difference factor rooted at `root`.
    pub fn factor(metric: Metric, root: Cplx) -> Self {
        match metric {
            Metric::Plane => FunctionExpr::Linear { root },
            Metric::Disk => FunctionExpr::Blaschke { root },
        }
    }

    pub fn scaled(coeff: Cplx, inner: FunctionExpr) -> Self {
        FunctionExpr::Scaled { coeff, inner: Arc::new(inner) }
    }

    pub fn sum(terms: Vec<FunctionExpr>) -> Self {
        FunctionExpr::Sum(terms.into_iter().map(Arc::new).collect())
    }

    pub fn product(factors: Vec<FunctionExpr>) -> Self {
        FunctionExpr::Product(factors.into_iter().map(Arc::new).collect())
    }

    /// Polynomial `c0 + c1 z + c2 z^2 + ...` as a Newton form on zero nodes.
    pub fn poly(coeffs: &[Cplx]) -> Self {
        FunctionExpr::Newton(Arc::new(NewtonForm {
            nodes: vec![Cplx::new(0.0, 0.0); coeffs.len()],
            coeffs: coeffs.to_vec(),
            metric: Metric::Plane,
        }))
    }

    pub fn newton(nodes: Vec<Cplx>, coeffs: Vec<Cplx>, metric: Metric) -> Self {
        FunctionExpr::Newton(Arc::new(NewtonForm { nodes, coeffs, metric }))
    }

    pub fn barycentric(nodes: Vec<Cplx>, values: Vec<Cplx>) -> Result<Self> {
        Ok(FunctionExpr::Barycentric(Arc::new(BarycentricForm::new(nodes, values)?)))
    }

    pub fn eval(&self, z: Cplx) -> Cplx {
        match self {
            FunctionExpr::Const(c) => *c,
            FunctionExpr::Linear { root } => z - root,
            FunctionExpr::Blaschke { root } => {
                (z - root) / (Cplx::new(1.0, 0.0) - root.conj() * z)
            }
            FunctionExpr::Scaled { coeff, inner } => coeff * inner.eval(z),
            FunctionExpr::Sum(terms) => terms.iter().map(|t| t.eval(z)).sum(),
            FunctionExpr::Product(factors) => {
                let mut acc = Cplx::new(1.0, 0.0);
                for f in factors {
                    acc *= f.eval(z);
                }
                acc
            }
            FunctionExpr::Newton(form) => {
                let k = form.coeffs.len();
                if k == 0 {
                    return Cplx::new(0.0, 0.0);
                }
                let mut acc = form.coeffs[k - 1];
                for i in (0..k - 1).rev() {
                    acc = acc * form.metric.diff_factor(form.nodes[i], z) + form.coeffs[i];
                }
                acc
            }
            FunctionExpr::Barycentric(form) => form.eval(z),
        }
    }

    /// Pole locations of the expression (Blaschke factors only; everything
    /// else is entire). Used to validate contour placement.
    pub fn poles(&self) -> Vec<Cplx> {
        let mut out = Vec::new();
        self.collect_poles(&mut out);
        out
    }

    fn collect_poles(&self, out: &mut Vec<Cplx>) {
        match self {
            FunctionExpr::Const(_) | FunctionExpr::Linear { .. } | FunctionExpr::Barycentric(_) => {}
            FunctionExpr::Blaschke { root } => {
                if root.norm_sqr() > 0.0 {
                    out.push(root.conj().inv());
                }
            }
            FunctionExpr::Scaled { inner, .. } => inner.collect_poles(out),
            FunctionExpr::Sum(terms) => terms.iter().for_each(|t| t.collect_poles(out)),
            FunctionExpr::Product(factors) => factors.iter().for_each(|f| f.collect_poles(out)),
            FunctionExpr::Newton(form) => {
                if form.metric == Metric::Disk {
                    for (i, node) in form.nodes.iter().enumerate() {
                        // Node i is a factor root only when a later coefficient uses it.
                        if i + 1 < form.coeffs.len() && node.norm_sqr() > 0.0 {
                            out.push(node.conj().inv());
                        }
                    }
                }
            }
        }
    }
}
