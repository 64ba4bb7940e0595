//! Classic ENO machinery: undivided differences, stencil selection,
//! coefficient tables and grid-level prediction/reconstruction.

pub mod coeffs;
pub mod ghost;
pub mod grid;
pub mod predict;
pub mod stencil;

pub use coeffs::{interp_coeffs, interp_coeffs_exact, rec_coeffs, rec_coeffs_exact, Rational};
pub use ghost::{GhostPolicy, Layout};
pub use grid::GridHierarchy;
pub use predict::{
    predict_fine_level, predict_fine_level_with, reconstruct_interfaces, reconstruct_padded,
    scale_input, scale_input_into, EnoSelector, ShiftSelector,
};
pub use stencil::{
    eno_interp_shift, eno_rec_shift, interp_shift_unchecked, rec_shift_unchecked,
    undivided_differences, DifferenceTable, StencilInput, StencilKind, StencilShift,
};
