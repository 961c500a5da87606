//! Interpolating polynomial splines of degree 2 to 5.
//!
//! Odd degrees (3, 5) place breakpoints on the data abscissas. Even degrees
//! (2, 4) place breakpoints between samples at `u_j = alpha x_j + (1 - alpha)
//! x_{j+1}` so that each of the `n` segments holds exactly one sample and
//! both ends receive the same number of boundary equations.
//!
//! Every spline is found by solving one banded linear system whose unknowns
//! are the segment coefficients in the normalised local coordinate
//! `s = (x - b_k) / h_k`. Row `m`-th derivative equations are scaled by
//! `h^m` so that all rows carry comparable magnitudes.

use alloc::vec::Vec;

use crate::banded::LinearSystem;
use crate::error::{Error, Result};
use crate::poly::{falling_factorial, PiecewisePoly};

/// An interpolation node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Constraint applied at one end of a spline.
///
/// What `Natural` means depends on the degree:
///
/// | degree | `Natural`                                                   |
/// |--------|-------------------------------------------------------------|
/// | 2      | first derivative equals the secant slope of the two end samples |
/// | 3      | second derivative vanishes                                  |
/// | 4      | not-a-knot at the outer knot and vanishing fourth derivative |
/// | 5      | third and fourth derivatives vanish                         |
///
/// `FirstDeriv` on degree 4 and 5 also pins the fourth derivative to zero.
/// `FirstAndSecondDeriv` needs two free boundary equations per end, so it is
/// only accepted for degrees 4 and 5.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BoundaryCondition {
    #[default]
    Natural,
    FirstDeriv(f64),
    FirstAndSecondDeriv(f64, f64),
}

impl BoundaryCondition {
    fn is_finite(&self) -> bool {
        match *self {
            BoundaryCondition::Natural => true,
            BoundaryCondition::FirstDeriv(v) => v.is_finite(),
            BoundaryCondition::FirstAndSecondDeriv(a, b) => a.is_finite() && b.is_finite(),
        }
    }
}

/// Position of the interior knots of even-degree splines between samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotPlacement {
    alpha: f64,
}

impl KnotPlacement {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self { alpha })
        } else {
            Err(Error::InvalidAlpha)
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Knot between samples `a < b`.
    pub fn knot(&self, a: f64, b: f64) -> f64 {
        self.alpha * a + (1.0 - self.alpha) * b
    }
}

impl Default for KnotPlacement {
    fn default() -> Self {
        Self { alpha: 0.5 }
    }
}

/// Smallest number of points accepted for a spline degree.
pub fn min_points(degree: usize) -> usize {
    match degree {
        3 => 2,
        _ => 3,
    }
}

/// Builds a cubic or quintic spline through `points`.
pub fn build_odd_spline(
    points: &[Point],
    degree: usize,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<PiecewisePoly> {
    let (system, breakpoints) = odd_spline_system(points, degree, left, right)?;
    finish(&system, breakpoints, degree)
}

/// Builds a quadratic or quartic spline through `points` with knots between
/// the samples.
pub fn build_even_spline(
    points: &[Point],
    degree: usize,
    placement: KnotPlacement,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<PiecewisePoly> {
    let (system, breakpoints) = even_spline_system(points, degree, placement, left, right)?;
    finish(&system, breakpoints, degree)
}

/// Dispatches on the degree. Even degrees use `placement`.
pub fn build_spline(
    points: &[Point],
    degree: usize,
    placement: KnotPlacement,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<PiecewisePoly> {
    match degree {
        3 | 5 => build_odd_spline(points, degree, left, right),
        2 | 4 => build_even_spline(points, degree, placement, left, right),
        d => Err(Error::UnsupportedDegree(d)),
    }
}

/// Assembles the odd-degree interpolation system without solving it.
/// Returns the system and the spline breakpoints.
pub fn odd_spline_system(
    points: &[Point],
    degree: usize,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<(LinearSystem, Vec<f64>)> {
    if degree != 3 && degree != 5 {
        return Err(Error::UnsupportedDegree(degree));
    }
    validate(points, degree, left, right)?;

    let breakpoints: Vec<f64> = points.iter().map(|p| p.x).collect();
    let mut asm = Assembler::new(degree, &breakpoints);
    let segs = asm.segments();

    asm.boundary(End::Left, left, points)?;
    for k in 0..segs {
        asm.value_row(k, 0.0, points[k].y);
        asm.value_row(k, 1.0, points[k + 1].y);
        if k + 1 < segs {
            for m in 1..degree {
                asm.continuity(k, m);
            }
        }
    }
    asm.boundary(End::Right, right, points)?;
    Ok((asm.system, breakpoints))
}

/// Assembles the even-degree interpolation system without solving it. The
/// system is square with `(degree + 1) n` unknowns for `n` points.
pub fn even_spline_system(
    points: &[Point],
    degree: usize,
    placement: KnotPlacement,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<(LinearSystem, Vec<f64>)> {
    if degree != 2 && degree != 4 {
        return Err(Error::UnsupportedDegree(degree));
    }
    validate(points, degree, left, right)?;

    let n = points.len();
    let mut breakpoints = Vec::with_capacity(n + 1);
    breakpoints.push(points[0].x);
    for w in points.windows(2) {
        breakpoints.push(placement.knot(w[0].x, w[1].x));
    }
    breakpoints.push(points[n - 1].x);
    if let Some(i) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
        // alpha so close to 0 or 1 that a knot collapses onto a sample
        return Err(Error::NonIncreasingAbscissa { index: i + 1 });
    }

    let mut asm = Assembler::new(degree, &breakpoints);
    asm.both_natural_short =
        degree == 4 && n == 3 && left == BoundaryCondition::Natural && right == BoundaryCondition::Natural;

    asm.boundary(End::Left, left, points)?;
    for (k, p) in points.iter().enumerate() {
        let s = if k == 0 {
            0.0
        } else if k == n - 1 {
            1.0
        } else {
            (p.x - breakpoints[k]) / asm.widths[k]
        };
        asm.value_row(k, s, p.y);
        if k + 1 < n {
            for m in 0..degree {
                asm.continuity(k, m);
            }
        }
    }
    asm.boundary(End::Right, right, points)?;
    Ok((asm.system, breakpoints))
}

fn validate(points: &[Point], degree: usize, left: BoundaryCondition, right: BoundaryCondition) -> Result<()> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) || !left.is_finite() || !right.is_finite() {
        return Err(Error::NonFinite);
    }
    if let Some(i) = points.windows(2).position(|w| w[1].x <= w[0].x) {
        return Err(Error::NonIncreasingAbscissa { index: i + 1 });
    }
    let needed = min_points(degree);
    if points.len() < needed {
        return Err(Error::TooFewPoints {
            needed,
            got: points.len(),
        });
    }
    for bc in [left, right] {
        if matches!(bc, BoundaryCondition::FirstAndSecondDeriv(..)) && degree < 4 {
            return Err(Error::UnsupportedBoundary { degree });
        }
    }
    Ok(())
}

fn finish(system: &LinearSystem, breakpoints: Vec<f64>, degree: usize) -> Result<PiecewisePoly> {
    let mut coeffs = system.solve()?;
    let stride = degree + 1;
    for (k, seg) in coeffs.chunks_mut(stride).enumerate() {
        let h = breakpoints[k + 1] - breakpoints[k];
        let mut scale = 1.0;
        for c in seg.iter_mut() {
            *c /= scale;
            scale *= h;
        }
    }
    PiecewisePoly::from_flat(breakpoints, degree, coeffs)
}

#[derive(Clone, Copy, PartialEq)]
enum End {
    Left,
    Right,
}

struct Assembler {
    degree: usize,
    widths: Vec<f64>,
    system: LinearSystem,
    // quartic through three points with natural ends on both sides: the two
    // not-a-knot merges leave one quartic, so the ends pin the third
    // derivative instead of the fourth
    both_natural_short: bool,
}

impl Assembler {
    fn new(degree: usize, breakpoints: &[f64]) -> Self {
        let widths: Vec<f64> = breakpoints.windows(2).map(|w| w[1] - w[0]).collect();
        let unknowns = widths.len() * (degree + 1);
        Self {
            degree,
            widths,
            system: LinearSystem::new(unknowns),
            both_natural_short: false,
        }
    }

    fn segments(&self) -> usize {
        self.widths.len()
    }

    fn col(&self, seg: usize, j: usize) -> usize {
        seg * (self.degree + 1) + j
    }

    /// `m`-th derivative of segment `seg` at local coordinate `s` equals
    /// `value` (row scaled by `h^m`).
    fn derivative_row(&mut self, seg: usize, s: f64, m: usize, value: f64) {
        let terms = (m..=self.degree)
            .map(|j| (self.col(seg, j), falling_factorial(j, m) * powi(s, j - m)))
            .collect();
        let rhs = value * powi(self.widths[seg], m);
        self.system.push(terms, rhs);
    }

    fn value_row(&mut self, seg: usize, s: f64, value: f64) {
        self.derivative_row(seg, s, 0, value);
    }

    /// Continuity of the `m`-th derivative between `seg` and `seg + 1`.
    fn continuity(&mut self, seg: usize, m: usize) {
        let ratio = powi(self.widths[seg] / self.widths[seg + 1], m);
        let mut terms: Vec<(usize, f64)> = (m..=self.degree)
            .map(|j| (self.col(seg, j), falling_factorial(j, m)))
            .collect();
        terms.push((self.col(seg + 1, m), -falling_factorial(m, m) * ratio));
        self.system.push(terms, 0.0);
    }

    fn boundary(&mut self, end: End, bc: BoundaryCondition, points: &[Point]) -> Result<()> {
        let d = self.degree;
        let last = self.segments() - 1;
        let (seg, s) = match end {
            End::Left => (0, 0.0),
            End::Right => (last, 1.0),
        };
        match (d, bc) {
            (2, BoundaryCondition::Natural) => {
                let n = points.len();
                let (a, b) = match end {
                    End::Left => (points[0], points[1]),
                    End::Right => (points[n - 2], points[n - 1]),
                };
                self.derivative_row(seg, s, 1, (b.y - a.y) / (b.x - a.x));
            }
            (2, BoundaryCondition::FirstDeriv(v)) | (3, BoundaryCondition::FirstDeriv(v)) => {
                self.derivative_row(seg, s, 1, v);
            }
            (3, BoundaryCondition::Natural) => self.derivative_row(seg, s, 2, 0.0),
            (4, BoundaryCondition::Natural) => {
                let pair = match end {
                    End::Left => 0,
                    End::Right => last - 1,
                };
                self.top_continuity(pair);
                let order = if self.both_natural_short { 3 } else { 4 };
                self.derivative_row(seg, s, order, 0.0);
            }
            (5, BoundaryCondition::Natural) => {
                self.derivative_row(seg, s, 3, 0.0);
                self.derivative_row(seg, s, 4, 0.0);
            }
            (4 | 5, BoundaryCondition::FirstDeriv(v)) => {
                self.derivative_row(seg, s, 1, v);
                self.derivative_row(seg, s, 4, 0.0);
            }
            (4 | 5, BoundaryCondition::FirstAndSecondDeriv(d1, d2)) => {
                self.derivative_row(seg, s, 1, d1);
                self.derivative_row(seg, s, 2, d2);
            }
            _ => return Err(Error::UnsupportedBoundary { degree: d }),
        }
        Ok(())
    }

    /// Continuity of the highest derivative between `seg` and `seg + 1`,
    /// which merges the two segments into one polynomial.
    fn top_continuity(&mut self, seg: usize) {
        let d = self.degree;
        let ratio = powi(self.widths[seg] / self.widths[seg + 1], d);
        let terms = alloc::vec![(self.col(seg, d), 1.0), (self.col(seg + 1, d), -ratio)];
        self.system.push(terms, 0.0);
    }
}

#[inline]
fn powi(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, _| acc * x)
}
