//! Equivalent effect functions (EEF) and fast intrinsic mode decomposition.
//!
//! An EEF `e(t)` of a sampled signal `f(t)` has the same running integral as
//! `f` at a chosen set of control points. It is obtained by interpolating the
//! cumulative integral of `f` at the control points with a polynomial spline
//! `E(t)` and differentiating it. Picking control points between the
//! inflexion points of the data makes `e` a smooth trend, and `f - e` the
//! fluctuation. Repeating on the trend yields a multi-scale decomposition.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line front end live in the `fastimd-cli` crate.

#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod banded;
pub mod eef;
mod error;
pub mod image;
pub mod imd;
mod math;
pub mod poly;
pub mod series;
pub mod spline;

pub use analysis::{fit_control_points, fit_curve, sample_eef, select_control, FitResult, Selector};
pub use eef::{
    build_eef, build_eef_with, chain_eef, cumulative_integral, cumulative_integral_with, difference_partition_sums,
    EefOptions, EefResult, IntegralRule,
};
pub use error::{Error, Result};
pub use image::{
    decompose_direction, decompose_direction_independent, decompose_image, decompose_image_with,
    inter_slice_smoothness, Direction, GrayImage, ImageMode, ScanOrder,
};
pub use imd::{
    decompose, decompose_with, discrete_derivative, estimate_trend, find_extrema, find_inflexions, imd_step,
    imd_step_with, Mode, ModeStack, Termination,
};
pub use poly::PiecewisePoly;
pub use series::{ControlPoints, Series};
pub use spline::{build_even_spline, build_odd_spline, BoundaryCondition, KnotPlacement};
