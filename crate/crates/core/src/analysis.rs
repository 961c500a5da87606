//! Curve fitting and equivalent-effect sampling with EEFs.

use alloc::vec::Vec;

use crate::eef::{build_eef_with, local_slope, EefOptions, EefResult, IntegralRule};
use crate::error::{Error, Result};
use crate::imd::{discrete_derivative, find_extrema};
use crate::math::rms;
use crate::poly::PiecewisePoly;
use crate::series::{ControlPoints, Series};
use crate::spline::{min_points, BoundaryCondition};

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub control: ControlPoints,
    /// The fitted EEF.
    pub fitted: PiecewisePoly,
    /// Fitted values at the sample times.
    pub fitted_samples: Series,
    pub rms_error: f64,
    /// Control point count over sample count.
    pub compression_ratio: f64,
}

/// Control point selection for [`sample_eef`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// Every `stride`-th sample from index 0, plus the last sample.
    Periodic(usize),
    /// These indices plus both ends.
    Explicit(Vec<usize>),
}

/// Extrema of `|f'|` plus both ends. Minima of `|f'|` are the extrema of the
/// data and maxima its inflexion points.
pub fn fit_control_points(series: &Series) -> Result<ControlPoints> {
    if series.len() < 4 {
        return Err(Error::DegenerateSeries);
    }
    let slope: Vec<f64> = discrete_derivative(series).values().iter().map(|d| d.abs()).collect();
    ControlPoints::with_endpoints(find_extrema(&slope), series.len())
}

/// Fits the data with the EEF over [`fit_control_points`].
///
/// The running integral uses the local quartic rule and the spline ends are
/// clamped to the data: `E' = f` at both ends, and for the quintic also
/// `E'' = f'` from a five-point local slope. A quintic fit with only the two
/// end control points gets the middle sample added.
pub fn fit_curve(series: &Series, degree: usize) -> Result<FitResult> {
    if degree != 3 && degree != 5 {
        return Err(Error::UnsupportedDegree(degree));
    }
    let mut control = fit_control_points(series)?;
    let n = series.len();
    if control.len() < min_points(degree) {
        control = ControlPoints::with_endpoints(alloc::vec![(n - 1) / 2], n)?;
    }
    let v = series.values();
    let (left, right) = if degree == 5 {
        (
            BoundaryCondition::FirstAndSecondDeriv(v[0], local_slope(series, 0)),
            BoundaryCondition::FirstAndSecondDeriv(v[n - 1], local_slope(series, n - 1)),
        )
    } else {
        (
            BoundaryCondition::FirstDeriv(v[0]),
            BoundaryCondition::FirstDeriv(v[n - 1]),
        )
    };
    let options = EefOptions {
        degree,
        left,
        right,
        rule: IntegralRule::LocalQuartic,
        ..EefOptions::default()
    };
    let eef = build_eef_with(series, &control, &options)?;
    let rms_error = rms(eef.difference.values());
    let compression_ratio = control.len() as f64 / n as f64;
    Ok(FitResult {
        control,
        fitted: eef.eef,
        fitted_samples: eef.eef_samples,
        rms_error,
        compression_ratio,
    })
}

/// Resolves a selector to control points for a series of length `len`.
pub fn select_control(selector: &Selector, len: usize, degree: usize) -> Result<ControlPoints> {
    let control = match selector {
        Selector::Periodic(0) => return Err(Error::InvalidStride),
        Selector::Periodic(stride) => {
            if *stride >= len {
                return Err(Error::StrideTooLarge);
            }
            let c = ControlPoints::with_endpoints((0..len).step_by(*stride).collect(), len)?;
            if c.len() < min_points(degree) {
                return Err(Error::StrideTooLarge);
            }
            c
        }
        Selector::Explicit(indices) => ControlPoints::with_endpoints(indices.clone(), len)?,
    };
    Ok(control)
}

/// EEF over a periodic or explicit subset of the samples, with the
/// trapezoidal running integral and natural ends.
pub fn sample_eef(series: &Series, selector: &Selector, degree: usize) -> Result<EefResult> {
    if degree != 3 && degree != 5 {
        return Err(Error::UnsupportedDegree(degree));
    }
    let control = select_control(selector, series.len(), degree)?;
    build_eef_with(series, &control, &EefOptions::with_degree(degree))
}
