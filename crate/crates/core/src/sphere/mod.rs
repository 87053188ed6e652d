//! Discretizations of the unit sphere `S^{n-1}`: quadrature grids, tangent
//! frames, second-order jets of ambient functions, and the polynomial test
//! functions used as perturbations.

mod frame;
mod grid;
mod jet;
mod quadrature;
mod testfn;

pub use frame::{tangent_frame, TangentFrame};
pub use grid::{sphere_area, GridDocument, GridMethod, SphericalGrid, GRID_SCHEMA_VERSION};
pub use jet::{Jet, SmoothField};
pub use quadrature::gauss_legendre;
pub use testfn::{Monomial, Polynomial, TestFunction};
