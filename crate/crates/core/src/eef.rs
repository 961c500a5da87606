//! Equivalent effect functions.
//!
//! Given samples `f(t_k)` and control indices `i`, the EEF `e(t)` is the
//! derivative of a spline `E(t)` interpolating the running integral
//! `F(t_i)` of the data. `E(t_i) = F(t_i)` at every control point, so the
//! difference `d = f - e` integrates to zero between control points.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::PiecewisePoly;
use crate::series::{ControlPoints, Series};
use crate::spline::{build_spline, min_points, BoundaryCondition, KnotPlacement, Point};

/// How the running integral of the samples is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegralRule {
    /// Exact integral of the piecewise-linear interpolant.
    #[default]
    Trapezoid,
    /// Exact integral of local degree-4 interpolants through five
    /// neighbouring samples, averaged over the two windows centred on each
    /// interval. Exact for quartic data.
    LocalQuartic,
}

/// Spline settings for [`build_eef_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EefOptions {
    pub degree: usize,
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub placement: KnotPlacement,
    pub rule: IntegralRule,
}

impl Default for EefOptions {
    fn default() -> Self {
        Self {
            degree: 5,
            left: BoundaryCondition::Natural,
            right: BoundaryCondition::Natural,
            placement: KnotPlacement::default(),
            rule: IntegralRule::Trapezoid,
        }
    }
}

impl EefOptions {
    pub fn with_degree(degree: usize) -> Self {
        Self {
            degree,
            ..Self::default()
        }
    }
}

/// Output of [`build_eef`].
#[derive(Debug, Clone, PartialEq)]
pub struct EefResult {
    /// `e(t)`, the derivative of `integral_spline`.
    pub eef: PiecewisePoly,
    /// `E(t)`, interpolating the running integral at the control points.
    pub integral_spline: PiecewisePoly,
    /// Running integral `F` of the data at every sample time.
    pub cumulative: Vec<f64>,
    /// `e` at the sample times.
    pub eef_samples: Series,
    /// `f - e` at the sample times.
    pub difference: Series,
}

/// Trapezoidal running integral, starting at 0.
pub fn cumulative_integral(series: &Series) -> Vec<f64> {
    cumulative_integral_with(series, IntegralRule::Trapezoid)
}

pub fn cumulative_integral_with(series: &Series, rule: IntegralRule) -> Vec<f64> {
    let t = series.times();
    let v = series.values();
    let mut out = Vec::with_capacity(series.len());
    let mut acc = 0.0;
    out.push(acc);
    for k in 0..series.len() - 1 {
        acc += match rule {
            IntegralRule::Trapezoid => 0.5 * (t[k + 1] - t[k]) * (v[k] + v[k + 1]),
            IntegralRule::LocalQuartic => quartic_interval_integral(t, v, k),
        };
        out.push(acc);
    }
    out
}

/// Builds the EEF with the trapezoidal running integral and default knot
/// placement.
pub fn build_eef(
    series: &Series,
    control: &ControlPoints,
    degree: usize,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<EefResult> {
    let options = EefOptions {
        degree,
        left,
        right,
        ..EefOptions::default()
    };
    build_eef_with(series, control, &options)
}

pub fn build_eef_with(series: &Series, control: &ControlPoints, options: &EefOptions) -> Result<EefResult> {
    if !(2..=5).contains(&options.degree) {
        return Err(Error::UnsupportedDegree(options.degree));
    }
    if control.indices().last() != Some(&(series.len() - 1)) {
        return Err(Error::InvalidControlPoints);
    }
    let needed = min_points(options.degree);
    if control.len() < needed {
        return Err(Error::TooFewControlPoints {
            needed,
            got: control.len(),
        });
    }

    let cumulative = cumulative_integral_with(series, options.rule);
    let points: Vec<Point> = control
        .indices()
        .iter()
        .map(|&i| Point::new(series.times()[i], cumulative[i]))
        .collect();
    let integral_spline = build_spline(&points, options.degree, options.placement, options.left, options.right)?;
    let eef = integral_spline.derivative();
    let samples = eef.evaluate_many(series.times())?;
    let difference: Vec<f64> = series.values().iter().zip(&samples).map(|(f, e)| f - e).collect();
    Ok(EefResult {
        eef,
        integral_spline,
        cumulative,
        eef_samples: series.with_values(samples)?,
        difference: series.with_values(difference)?,
    })
}

/// Trapezoidal integral of the difference series between each pair of
/// consecutive control points.
pub fn difference_partition_sums(result: &EefResult, control: &ControlPoints) -> Vec<f64> {
    let t = result.difference.times();
    let d = result.difference.values();
    control
        .indices()
        .windows(2)
        .map(|w| (w[0]..w[1]).map(|k| 0.5 * (t[k + 1] - t[k]) * (d[k] + d[k + 1])).sum())
        .collect()
}

/// Builds quintic EEFs over abutting segments. Each segment after the first
/// takes its left boundary from the value and slope of the previous EEF at
/// the join, so the concatenated EEF has a continuous first derivative.
pub fn chain_eef(segments: &[(Series, ControlPoints)], options: &EefOptions) -> Result<Vec<EefResult>> {
    if options.degree != 5 {
        return Err(Error::UnsupportedDegree(options.degree));
    }
    for (k, w) in segments.windows(2).enumerate() {
        if w[0].0.end() != w[1].0.start() {
            return Err(Error::NonAbuttingSegments { segment: k + 1 });
        }
    }
    let mut out: Vec<EefResult> = Vec::with_capacity(segments.len());
    for (series, control) in segments {
        let mut opts = *options;
        if let Some(prev) = out.last() {
            let end = prev.eef.end();
            let value = prev.eef.evaluate(end)?;
            let slope = prev.eef.evaluate_derivative(end, 1)?;
            opts.left = BoundaryCondition::FirstAndSecondDeriv(value, slope);
        }
        out.push(build_eef_with(series, control, &opts)?);
    }
    Ok(out)
}

// Gauss-Legendre, three nodes on [-1, 1]; exact up to degree 5
const GL_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

fn quartic_interval_integral(t: &[f64], v: &[f64], k: usize) -> f64 {
    let n = t.len();
    let w = n.min(5);
    let starts = [k.saturating_sub(2).min(n - w), k.saturating_sub(1).min(n - w)];
    let (a, b) = (t[k], t[k + 1]);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let integrate = |start: usize| {
        let local = NewtonPoly::fit(&t[start..start + w], &v[start..start + w]);
        half * GL_NODES
            .iter()
            .zip(GL_WEIGHTS)
            .map(|(x, wt)| wt * local.eval(mid + half * x).0)
            .sum::<f64>()
    };
    if starts[0] == starts[1] {
        integrate(starts[0])
    } else {
        0.5 * (integrate(starts[0]) + integrate(starts[1]))
    }
}

/// Slope of the data at sample `k` from the local degree-4 interpolant
/// through the five nearest samples (fewer for short series).
pub(crate) fn local_slope(series: &Series, k: usize) -> f64 {
    let n = series.len();
    let w = n.min(5);
    let start = k.saturating_sub(2).min(n - w);
    let t = &series.times()[start..start + w];
    let v = &series.values()[start..start + w];
    NewtonPoly::fit(t, v).eval(series.times()[k]).1
}

/// Interpolating polynomial in Newton form.
struct NewtonPoly<'a> {
    nodes: &'a [f64],
    coeffs: [f64; 5],
}

impl<'a> NewtonPoly<'a> {
    fn fit(nodes: &'a [f64], values: &[f64]) -> Self {
        let m = nodes.len();
        debug_assert!(m <= 5);
        let mut coeffs = [0.0; 5];
        coeffs[..m].copy_from_slice(values);
        for level in 1..m {
            for i in (level..m).rev() {
                coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (nodes[i] - nodes[i - level]);
            }
        }
        Self { nodes, coeffs }
    }

    /// Value and first derivative at `x`.
    fn eval(&self, x: f64) -> (f64, f64) {
        let m = self.nodes.len();
        let mut p = self.coeffs[m - 1];
        let mut dp = 0.0;
        for i in (0..m - 1).rev() {
            dp = dp * (x - self.nodes[i]) + p;
            p = p * (x - self.nodes[i]) + self.coeffs[i];
        }
        (p, dp)
    }
}
