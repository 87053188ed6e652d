//! Numerical convex geometry driven by support functions.
//!
//! The crate evaluates support functions of a small family of convex bodies,
//! forms their `p`-mean combinations and Wulff shapes, computes intrinsic
//! volumes (by spherical quadrature for smooth bodies and in closed form for
//! balls and boxes), and uses these to probe the `p`-Brunn-Minkowski
//! inequality for intrinsic volumes:
//!
//! * [`variation`] follows paths `h_s = h e^{sψ}` through smooth support
//!   functions and tests log-concavity of `s ↦ V_k(K_s)` near the ball;
//! * [`counterexamples`] certifies failure of the inequality for small `p`
//!   with the embedded-cube construction and its enclosing-box bound.
//!
//! Everything is `f64`; dimensions are small (`n ≤ 8`) and matrices are dense.

pub mod bodies;
pub mod counterexamples;
pub mod error;
pub mod intrinsic;
pub mod sphere;
pub mod variation;

mod util;

pub use error::{Error, Result};

/// Library version stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
