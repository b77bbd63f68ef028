//! Independent brute-force oracles for cross-checking the library.
//!
//! Everything here is deliberately written the slow, obvious way and must not
//! share code with the implementation paths it checks.
#![allow(dead_code)] // each test target uses its own subset

use num_complex::Complex64;

pub type Cplx = Complex64;

/// Direct recursive definition of the divided difference: order 0 is the
/// value, order j differences the two order-(j-1) sub-tuples and divides by
/// the span of the endpoints (Blaschke span when `hyperbolic`).
pub fn naive_divided_difference(nodes: &[Cplx], values: &[Cplx], hyperbolic: bool) -> Cplx {
    assert_eq!(nodes.len(), values.len());
    let k = nodes.len();
    if k == 1 {
        return values[0];
    }
    let upper = naive_divided_difference(&nodes[1..], &values[1..], hyperbolic);
    let lower = naive_divided_difference(&nodes[..k - 1], &values[..k - 1], hyperbolic);
    let span = if hyperbolic {
        (nodes[k - 1] - nodes[0]) / (Cplx::new(1.0, 0.0) - nodes[0].conj() * nodes[k - 1])
    } else {
        nodes[k - 1] - nodes[0]
    };
    (upper - lower) / span
}

/// Exhaustive ordered-tuple supremum of `|dd| exp(-b sum p)`.
pub fn naive_seminorm(
    nodes: &[Cplx],
    values: &[Cplx],
    p: &[f64],
    n: usize,
    b: f64,
    hyperbolic: bool,
) -> f64 {
    let mut best = 0.0f64;
    let mut tuple = Vec::with_capacity(n);
    let mut used = vec![false; nodes.len()];
    fn rec(
        nodes: &[Cplx],
        values: &[Cplx],
        p: &[f64],
        n: usize,
        b: f64,
        hyperbolic: bool,
        tuple: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut f64,
    ) {
        if tuple.len() == n {
            let tn: Vec<Cplx> = tuple.iter().map(|&i| nodes[i]).collect();
            let tv: Vec<Cplx> = tuple.iter().map(|&i| values[i]).collect();
            let dd = naive_divided_difference(&tn, &tv, hyperbolic);
            let psum: f64 = tuple.iter().map(|&i| p[i]).sum();
            let val = dd.norm() * (-b * psum).exp();
            if val > *best {
                *best = val;
            }
            return;
        }
        for i in 0..nodes.len() {
            if !used[i] {
                used[i] = true;
                tuple.push(i);
                rec(nodes, values, p, n, b, hyperbolic, tuple, used, best);
                tuple.pop();
                used[i] = false;
            }
        }
    }
    rec(nodes, values, p, n, b, hyperbolic, &mut tuple, &mut used, &mut best);
    best
}

/// Textbook Lagrange sum formula.
pub fn naive_lagrange(nodes: &[Cplx], values: &[Cplx], z: Cplx) -> Cplx {
    let mut acc = Cplx::new(0.0, 0.0);
    for i in 0..nodes.len() {
        let mut term = values[i];
        for j in 0..nodes.len() {
            if i != j {
                term *= (z - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        acc += term;
    }
    acc
}

/// Pairwise check that the separation disks are disjoint.
pub fn naive_weak_separation(nodes: &[Cplx], radii: &[f64]) -> bool {
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] - nodes[j]).norm() < radii[i] + radii[j] {
                return false;
            }
        }
    }
    true
}

/// Small deterministic generator, decoupled from the library's PRNG choice.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64)
    }

    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_usize(&mut self, bound: usize) -> usize {
        (self.next_f64() * bound as f64) as usize % bound
    }
}
