//! Fast intrinsic mode decomposition.
//!
//! One step:
//! 1. inflexion points are the extrema of the discrete first derivative;
//! 2. the polyline through them, extended linearly to both ends, estimates
//!    the trend;
//! 3. extrema of `data - estimate` become the control points;
//! 4. the EEF over those control points is the new trend and `data - trend`
//!    the fluctuation.
//!
//! The trend is fed back in until it has at most two extrema.

use alloc::vec;
use alloc::vec::Vec;

use crate::eef::{build_eef_with, EefOptions};
use crate::error::{Error, Result};
use crate::math::max_abs;
use crate::series::{ControlPoints, Series};

/// Differences of the detrended data below this fraction of the data scale
/// are rounding noise and are flattened before extrema are searched.
const NOISE_FLOOR: f64 = 1e-12;

/// One level of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    /// 1-based mode number.
    pub index: usize,
    pub trend: Series,
    /// Previous trend (or the original for mode 1) minus this trend.
    pub fluctuation: Series,
    /// Original minus this trend.
    pub difference: Series,
    pub control: ControlPoints,
    /// No interior control point was found; the trend is the input itself.
    pub degenerate: bool,
}

/// Why [`decompose`] stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The last trend has at most two extrema.
    ExtremaCountReached,
    /// `max_modes` modes were produced.
    MaxModesReached,
    /// The next step found no interior control point, or its trend had
    /// more extrema than its input.
    NoFurtherSeparation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeStack {
    pub original: Series,
    pub modes: Vec<Mode>,
    pub terminated: Termination,
}

impl ModeStack {
    /// Trend of the last mode, or the original when there are no modes.
    pub fn final_trend(&self) -> &Series {
        self.modes.last().map_or(&self.original, |m| &m.trend)
    }

    /// Final trend plus every fluctuation, pointwise.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut acc = self.final_trend().values().to_vec();
        for mode in &self.modes {
            for (a, f) in acc.iter_mut().zip(mode.fluctuation.values()) {
                *a += f;
            }
        }
        acc
    }
}

/// Central differences inside, one-sided differences at the ends. Works on
/// non-uniform spacing.
pub fn discrete_derivative(series: &Series) -> Series {
    let t = series.times();
    let v = series.values();
    let n = series.len();
    let mut d = Vec::with_capacity(n);
    d.push((v[1] - v[0]) / (t[1] - t[0]));
    for k in 1..n - 1 {
        d.push((v[k + 1] - v[k - 1]) / (t[k + 1] - t[k - 1]));
    }
    if n > 2 {
        d.push((v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]));
    }
    series
        .with_values(d)
        .expect("differences of finite samples on increasing times are finite")
}

/// Indices of strict local extrema. A plateau of equal values counts once, at
/// its middle sample (rounded down). The first and last samples are never
/// extrema.
pub fn find_extrema(values: &[f64]) -> Vec<usize> {
    // runs of equal values: (first index, last index)
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if values[run.0] == *v => run.1 = i,
            _ => runs.push((i, i)),
        }
    }
    let mut out = Vec::new();
    for w in runs.windows(3) {
        let (prev, cur, next) = (values[w[0].0], values[w[1].0], values[w[2].0]);
        if (cur > prev && cur > next) || (cur < prev && cur < next) {
            out.push((w[1].0 + w[1].1) / 2);
        }
    }
    out
}

/// Extrema of the discrete derivative.
pub fn find_inflexions(series: &Series) -> Vec<usize> {
    find_extrema(discrete_derivative(series).values())
}

/// Polyline through the samples at `inflexions`, with the first and last
/// pieces extended linearly to the series ends. With fewer than two
/// inflexions this is the chord between the end samples.
pub fn estimate_trend(series: &Series, inflexions: &[usize]) -> Series {
    let t = series.times();
    let v = series.values();
    let n = series.len();
    let nodes: Vec<usize> = if inflexions.len() < 2 {
        vec![0, n - 1]
    } else {
        inflexions.to_vec()
    };
    let line = |a: usize, b: usize, x: f64| v[a] + (v[b] - v[a]) * (x - t[a]) / (t[b] - t[a]);

    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for (k, &x) in t.iter().enumerate() {
        while seg + 2 < nodes.len() && k > nodes[seg + 1] {
            seg += 1;
        }
        let (a, b) = (nodes[seg], nodes[seg + 1]);
        out.push(if k == a {
            v[a]
        } else if k == b {
            v[b]
        } else {
            line(a, b, x)
        });
    }
    series
        .with_values(out)
        .expect("linear interpolation of finite samples is finite")
}

/// One FastIMD step. Without `estimate` the polyline through the inflexion
/// points is used; image decomposition passes the previous slice's trend.
pub fn imd_step(series: &Series, degree: usize, estimate: Option<&Series>) -> Result<Mode> {
    imd_step_with(series, &EefOptions::with_degree(degree), estimate)
}

pub fn imd_step_with(series: &Series, options: &EefOptions, estimate: Option<&Series>) -> Result<Mode> {
    if series.len() < 4 {
        return Err(Error::DegenerateSeries);
    }
    let computed;
    let estimate = match estimate {
        Some(e) => e,
        None => {
            computed = estimate_trend(series, &find_inflexions(series));
            &computed
        }
    };
    let mut detrended = series.minus(estimate)?.values().to_vec();
    let floor = NOISE_FLOOR * max_abs(series.values()).max(max_abs(estimate.values()));
    for d in detrended.iter_mut() {
        if d.abs() <= floor {
            *d = 0.0;
        }
    }
    let control = ControlPoints::with_endpoints(find_extrema(&detrended), series.len())?;

    if control.len() < 3 {
        let zero = series.with_values(vec![0.0; series.len()])?;
        return Ok(Mode {
            index: 1,
            trend: series.clone(),
            fluctuation: zero.clone(),
            difference: zero,
            control,
            degenerate: true,
        });
    }

    let eef = build_eef_with(series, &control, options)?;
    let trend = eef.eef_samples;
    let fluctuation = eef.difference;
    Ok(Mode {
        index: 1,
        trend,
        difference: fluctuation.clone(),
        fluctuation,
        control,
        degenerate: false,
    })
}

/// Repeats [`imd_step`] on successive trends.
///
/// The first step always runs. Afterwards the decomposition stops when the
/// newest trend has at most two extrema, after `max_modes` modes, or when
/// the next step would either find no interior control point or raise the
/// extrema count of the trend; such a step is discarded. Only a failure of
/// the first step is reported as an error.
pub fn decompose(series: &Series, degree: usize, max_modes: usize) -> Result<ModeStack> {
    decompose_with(series, &EefOptions::with_degree(degree), max_modes)
}

pub fn decompose_with(series: &Series, options: &EefOptions, max_modes: usize) -> Result<ModeStack> {
    if series.len() < 4 {
        return Err(Error::DegenerateSeries);
    }
    if max_modes == 0 {
        return Err(Error::InvalidParameter("max_modes must be at least 1"));
    }
    if !(2..=5).contains(&options.degree) {
        return Err(Error::UnsupportedDegree(options.degree));
    }
    let mut modes: Vec<Mode> = Vec::new();
    let terminated = loop {
        if modes.len() == max_modes {
            break Termination::MaxModesReached;
        }
        let current = modes.last().map_or(series, |m| &m.trend);
        let step = match imd_step_with(current, options, None) {
            Ok(step) => step,
            Err(e) if modes.is_empty() => return Err(e),
            Err(_) => break Termination::NoFurtherSeparation,
        };
        let extrema = find_extrema(step.trend.values()).len();
        if !modes.is_empty() && (step.degenerate || extrema > find_extrema(current.values()).len()) {
            break Termination::NoFurtherSeparation;
        }
        let degenerate = step.degenerate;
        let difference = series.minus(&step.trend)?;
        modes.push(Mode {
            index: modes.len() + 1,
            difference,
            ..step
        });
        if extrema <= 2 {
            break Termination::ExtremaCountReached;
        }
        if degenerate {
            break Termination::NoFurtherSeparation;
        }
    };
    Ok(ModeStack {
        original: series.clone(),
        modes,
        terminated,
    })
}
