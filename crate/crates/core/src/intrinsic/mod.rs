//! Elementary symmetric functions of symmetric matrices, the matrix
//! `Q[h] = (h_ij + h δ_ij)`, and intrinsic volumes.
//!
//! For a smooth body with support function `h`,
//!
//! ```text
//! V_k(K) = 1/(k κ_{n−k}) ∫_{S^{n−1}} h S_{k−1}(Q[h]) dx,
//! ```
//!
//! while boxes and balls have closed forms.

mod symfn;
mod volumes;

pub use symfn::{
    cofactor, cofactor_general, elem_sym, elem_sym_all, elem_sym_all_general, second_cofactor,
    second_cofactor_general, SecondCofactor, SymMatrix,
};
pub use volumes::{
    area_measure_density, intrinsic_volume, kappa, q_matrix, q_matrix_fd, vk_ball, vk_box,
    vk_quadrature, IntrinsicVolumeResult, QMatrix, VolumeMethod,
};
