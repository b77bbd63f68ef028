//! Trace-space laboratory for weighted interpolation on discrete point sets.
//!
//! The library implements, at finite scale, the constructive machinery behind
//! divided-difference trace spaces: weights and their axioms, Euclidean and
//! pseudo-hyperbolic divided differences with their seminorms, weak-separation
//! tests and greedy decompositions, an inductive disk covering, and the
//! explicit interpolant assembled from per-disk Newton polynomials with
//! indicator-style correction factors. Every construction ships with a
//! verifier, and the `lab` module drives them over generated scenario
//! families with seeded, reproducible reports.

pub mod covering;
pub mod divdiff;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod interpolate;
pub mod io;
pub mod lab;
pub mod separation;
pub mod svg;
pub mod weight;

pub use error::{Error, Result};
pub use geometry::{mobius, Cplx, Metric, PartedSet, Point, PointSet};
pub use weight::{GrowthBound, Weight, WeightKind};

/// Caps the rayon worker count from the `TRACELAB_THREADS` environment
/// variable, if set. Call once at program start; later calls are no-ops.
pub fn configure_threads_from_env() {
    if let Ok(v) = std::env::var("TRACELAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
