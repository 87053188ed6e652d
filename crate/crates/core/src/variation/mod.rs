//! Variations `h_s = h e^{sψ}` of smooth support functions.
//!
//! Along such a path `f_k(s) = (1/k) ∫ h_s S_{k−1}(Q[h_s])` equals
//! `κ_{n−k} V_k(K_s)`, and its derivatives are integrals of
//! `ḣ_s = h_s ψ`, `ḧ_s = h_s ψ²`, `⃛h_s = h_s ψ³` against the
//! cofactors of `Q[h_s]`. Log-concavity of `f_k` near the ball is the local
//! `p`-Brunn-Minkowski inequality for `V_k`.

mod checks;
mod concavity;
mod functional;
mod path;

pub use checks::{
    center_test_function, centering_identity_defect, christoffel_max_residual,
    christoffel_residual, ibp_check, poincare_check, IbpResiduals, PoincareRatio, PoincareReport,
};
pub use concavity::{
    concavity_scan, concavity_scan_with_strictness, linspace, ConcavityReport, ConcavityVerdict,
};
pub use functional::{CurvatureFunctional, IntrinsicVolumeFunctional};
pub use path::{ball_closed_forms, BallClosedForms, Derivatives, VariationPath, VALIDITY_SAMPLES};
