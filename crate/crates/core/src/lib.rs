//! Essentially non-oscillatory (ENO) interpolation and reconstruction, the
//! second-order ENO-SR sub-cell resolution interpolant, and ReLU networks that
//! reproduce both exactly.
//!
//! The crate is organized as
//!
//! - [`eno_core`]: undivided differences, stencil selection, coefficient tables
//!   and grid-level prediction / interface reconstruction.
//! - [`eno_sr`]: interval labelling, singularity localization and the indicator
//!   pipeline of the adapted second-order ENO-SR method.
//! - [`relunet`]: a small feedforward ReLU inference engine together with
//!   builders that compile the stencil-selection procedures into networks.
//! - [`multires`]: multiresolution encoding / decoding with thresholding, 2D
//!   tensor-product extension and PGM image support.
//! - [`claw`]: a finite-difference ENO solver for the 1D Euler equations.
//! - [`cli`]: the experiment front end used by the `enonet` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod claw;
pub mod cli;
pub mod eno_core;
pub mod eno_sr;
pub mod error;
pub mod functions;
pub mod multires;
pub mod relunet;
pub mod study;

pub use error::{Error, Result};
