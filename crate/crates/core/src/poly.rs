//! Piecewise polynomials with a uniform segment degree.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A piecewise polynomial on `breakpoints[0] ..= breakpoints[last]`.
///
/// Segment `k` covers `[breakpoints[k], breakpoints[k + 1]]` and is stored as
/// `degree + 1` coefficients of the local polynomial in `x - breakpoints[k]`,
/// lowest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    breakpoints: Vec<f64>,
    degree: usize,
    coefficients: Vec<f64>,
}

impl PiecewisePoly {
    /// Builds a piecewise polynomial from breakpoints and per-segment
    /// coefficient lists.
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: breakpoints.len(),
            });
        }
        if segments.len() != breakpoints.len() - 1 {
            return Err(Error::LengthMismatch {
                expected: breakpoints.len() - 1,
                got: segments.len(),
            });
        }
        let degree = segments[0].len().checked_sub(1).ok_or(Error::UnsupportedDegree(0))?;
        let mut coefficients = Vec::with_capacity(segments.len() * (degree + 1));
        for seg in &segments {
            if seg.len() != degree + 1 {
                return Err(Error::LengthMismatch {
                    expected: degree + 1,
                    got: seg.len(),
                });
            }
            coefficients.extend_from_slice(seg);
        }
        Self::from_flat(breakpoints, degree, coefficients)
    }

    /// Builds from a flat coefficient buffer with stride `degree + 1`.
    pub fn from_flat(breakpoints: Vec<f64>, degree: usize, coefficients: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: breakpoints.len(),
            });
        }
        if breakpoints.iter().chain(&coefficients).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingAbscissa { index: i + 1 });
        }
        let expected = (breakpoints.len() - 1) * (degree + 1);
        if coefficients.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coefficients.len(),
            });
        }
        Ok(Self {
            breakpoints,
            degree,
            coefficients,
        })
    }

    /// The constant `value` on `[start, end]`.
    pub fn constant(start: f64, end: f64, value: f64) -> Result<Self> {
        Self::from_flat(vec![start, end], 0, vec![value])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segment_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Local coefficients of segment `k`, lowest power first.
    pub fn segment(&self, k: usize) -> &[f64] {
        let stride = self.degree + 1;
        &self.coefficients[k * stride..(k + 1) * stride]
    }

    pub fn segments(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coefficients.chunks(self.degree + 1)
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    /// Index of the segment holding `x`. Interior breakpoints belong to the
    /// segment on their right, the last breakpoint to the last segment.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if !(x >= self.start() && x <= self.end()) {
            return Err(Error::OutOfDomain);
        }
        let k = self.breakpoints.partition_point(|&b| b <= x);
        Ok(k.saturating_sub(1).min(self.segment_count() - 1))
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.evaluate_derivative(x, 0)
    }

    /// Value of the `order`-th derivative at `x`.
    pub fn evaluate_derivative(&self, x: f64, order: usize) -> Result<f64> {
        let k = self.locate(x)?;
        Ok(eval_local(self.segment(k), x - self.breakpoints[k], order))
    }

    /// Evaluates segment `k` (or its derivative) at `x`, which may lie outside
    /// the segment. Used to compare one-sided limits at breakpoints.
    pub fn evaluate_segment(&self, k: usize, x: f64, order: usize) -> f64 {
        eval_local(self.segment(k), x - self.breakpoints[k], order)
    }

    /// Evaluates at many increasing points, reusing the segment search.
    pub fn evaluate_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.evaluate(x)).collect()
    }

    /// Term-by-term derivative on the same breakpoints. A degree-0 input
    /// yields the zero constant.
    pub fn derivative(&self) -> Self {
        if self.degree == 0 {
            let zeros = vec![0.0; self.segment_count()];
            return Self {
                breakpoints: self.breakpoints.clone(),
                degree: 0,
                coefficients: zeros,
            };
        }
        let mut coefficients = Vec::with_capacity(self.segment_count() * self.degree);
        for seg in self.segments() {
            coefficients.extend(seg.iter().enumerate().skip(1).map(|(j, c)| j as f64 * c));
        }
        Self {
            breakpoints: self.breakpoints.clone(),
            degree: self.degree - 1,
            coefficients,
        }
    }

    /// Continuous antiderivative equal to `value_at_left` at the left end.
    pub fn antiderivative(&self, value_at_left: f64) -> Self {
        let stride = self.degree + 2;
        let mut coefficients = Vec::with_capacity(self.segment_count() * stride);
        let mut offset = value_at_left;
        for (k, seg) in self.segments().enumerate() {
            coefficients.push(offset);
            coefficients.extend(seg.iter().enumerate().map(|(j, c)| c / (j + 1) as f64));
            let h = self.breakpoints[k + 1] - self.breakpoints[k];
            offset = eval_local(&coefficients[k * stride..], h, 0);
        }
        Self {
            breakpoints: self.breakpoints.clone(),
            degree: self.degree + 1,
            coefficients,
        }
    }

    /// Exact integral over the whole domain.
    pub fn integral(&self) -> f64 {
        let anti = self.antiderivative(0.0);
        let last = anti.segment_count() - 1;
        anti.evaluate_segment(last, self.end(), 0)
    }

    /// Shifts the abscissa: the result at `x + delta` equals `self` at `x`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b + delta).collect(),
            degree: self.degree,
            coefficients: self.coefficients.clone(),
        }
    }
}

/// Horner evaluation of the `order`-th derivative of a local polynomial.
pub(crate) fn eval_local(coeffs: &[f64], dx: f64, order: usize) -> f64 {
    if order >= coeffs.len() {
        return 0.0;
    }
    let mut acc = 0.0;
    for j in (order..coeffs.len()).rev() {
        acc = acc * dx + coeffs[j] * falling_factorial(j, order);
    }
    acc
}

/// `j (j-1) ... (j-m+1)`.
#[inline]
pub(crate) fn falling_factorial(j: usize, m: usize) -> f64 {
    (j + 1 - m..=j).fold(1.0, |acc, v| acc * v as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_evaluates_everywhere() {
        let p = PiecewisePoly::constant(-1.0, 3.0, 5.0).unwrap();
        for x in [-1.0, 0.0, 2.5, 3.0] {
            assert_eq!(p.evaluate(x).unwrap(), 5.0);
        }
        assert_eq!(p.evaluate(3.5), Err(Error::OutOfDomain));
        assert_eq!(p.evaluate(f64::NAN), Err(Error::OutOfDomain));
    }

    #[test]
    fn derivative_of_quadratic_segment() {
        let p = PiecewisePoly::new(vec![0.0, 1.0], vec![vec![1.0, 2.0, 3.0]]).unwrap();
        let d = p.derivative();
        assert_eq!(d.degree(), 1);
        assert_eq!(d.segment(0), &[2.0, 6.0]);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let p = PiecewisePoly::constant(0.0, 2.0, 9.0).unwrap();
        let d = p.derivative();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.evaluate(1.0).unwrap(), 0.0);
    }

    #[test]
    fn antiderivative_examples() {
        let zero = PiecewisePoly::constant(0.0, 3.0, 0.0).unwrap();
        let a = zero.antiderivative(7.0);
        assert_eq!(a.evaluate(0.0).unwrap(), 7.0);
        assert_eq!(a.evaluate(3.0).unwrap(), 7.0);

        let two = PiecewisePoly::constant(0.0, 3.0, 2.0).unwrap();
        let line = two.antiderivative(0.0);
        for x in [0.0, 1.0, 2.5, 3.0] {
            assert!((line.evaluate(x).unwrap() - 2.0 * x).abs() < 1e-15);
        }
        assert!((two.integral() - 6.0).abs() < 1e-15);
    }

    #[test]
    fn antiderivative_is_continuous_across_segments() {
        let p = PiecewisePoly::new(vec![0.0, 1.0, 3.0], vec![vec![1.0, 1.0], vec![2.0, -1.0]]).unwrap();
        let a = p.antiderivative(0.0);
        let left = a.evaluate_segment(0, 1.0, 0);
        let right = a.evaluate_segment(1, 1.0, 0);
        assert!((left - right).abs() < 1e-15);
        assert!((left - 1.5).abs() < 1e-15);
        // second segment: integral of 2 - (x-1) over [1,3] is 2
        assert!((a.evaluate(3.0).unwrap() - 3.5).abs() < 1e-15);
    }

    #[test]
    fn locate_uses_right_segment_at_breakpoints() {
        let p = PiecewisePoly::new(vec![0.0, 1.0, 2.0], vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(p.locate(0.0).unwrap(), 0);
        assert_eq!(p.locate(1.0).unwrap(), 1);
        assert_eq!(p.locate(2.0).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(matches!(
            PiecewisePoly::new(vec![0.0, 0.0], vec![vec![1.0]]),
            Err(Error::NonIncreasingAbscissa { .. })
        ));
        assert!(matches!(
            PiecewisePoly::new(vec![0.0, 1.0, 2.0], vec![vec![1.0]]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    fn arb_poly() -> impl Strategy<Value = PiecewisePoly> {
        (0usize..=4, 1usize..8).prop_flat_map(|(degree, segs)| {
            (
                proptest::collection::vec(0.1f64..2.0, segs),
                proptest::collection::vec(-10.0f64..10.0, segs * (degree + 1)),
                -5.0f64..5.0,
            )
                .prop_map(move |(widths, coeffs, start)| {
                    let mut bps = vec![start];
                    for w in widths {
                        let last = *bps.last().unwrap();
                        bps.push(last + w);
                    }
                    PiecewisePoly::from_flat(bps, degree, coeffs).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn derivative_inverts_antiderivative(p in arb_poly(), c in -3.0f64..3.0) {
            let back = p.antiderivative(c).derivative();
            prop_assert_eq!(back.degree(), p.degree());
            for (a, b) in back.segments().flatten().zip(p.segments().flatten()) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
