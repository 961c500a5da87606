//! Sampled signals and control point sets.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite sampled real function of time.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Series {
    /// At least two samples, all finite, strictly increasing times.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: times.len(),
                got: values.len(),
            });
        }
        if times.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: times.len(),
            });
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingAbscissa { index: i + 1 });
        }
        Ok(Self { times, values })
    }

    /// Samples at times `0, 1, 2, ...`.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| i as f64).collect();
        Self::new(times, values)
    }

    /// Samples `f` at the given times.
    pub fn from_fn(times: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(times, values)
    }

    /// Same times, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            times: self.times.clone(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.len() - 1]
    }

    /// Pointwise `self - other`; both must share their sample times.
    pub fn minus(&self, other: &Series) -> Result<Series> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Series {
            times: self.times.clone(),
            values,
        })
    }

    /// Contiguous sub-series `range.start ..= range.end` (inclusive end).
    pub fn slice(&self, first: usize, last: usize) -> Result<Series> {
        if last >= self.len() || first >= last {
            return Err(Error::InvalidParameter("slice bounds"));
        }
        Series::new(self.times[first..=last].to_vec(), self.values[first..=last].to_vec())
    }
}

/// Strictly increasing sample indices that always include both ends of the
/// series they refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlPoints {
    indices: Vec<usize>,
}

impl ControlPoints {
    /// Validates `indices` against a series of length `len`.
    pub fn new(indices: Vec<usize>, len: usize) -> Result<Self> {
        let ok = len >= 2
            && indices.first() == Some(&0)
            && indices.last() == Some(&(len - 1))
            && indices.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(Self { indices })
        } else {
            Err(Error::InvalidControlPoints)
        }
    }

    /// Sorts, deduplicates and adds both endpoints. Out-of-range indices are
    /// an error.
    pub fn with_endpoints(mut indices: Vec<usize>, len: usize) -> Result<Self> {
        if len < 2 || indices.iter().any(|&i| i >= len) {
            return Err(Error::InvalidControlPoints);
        }
        indices.push(0);
        indices.push(len - 1);
        indices.sort_unstable();
        indices.dedup();
        Ok(Self { indices })
    }

    /// Every sample index.
    pub fn all(len: usize) -> Result<Self> {
        Self::new((0..len).collect(), len)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn series_validation() {
        assert!(Series::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_ok());
        assert_eq!(
            Series::new(vec![0.0, 0.0], vec![1.0, 2.0]),
            Err(Error::NonIncreasingAbscissa { index: 1 })
        );
        assert_eq!(
            Series::new(vec![0.0], vec![1.0]),
            Err(Error::TooFewPoints { needed: 2, got: 1 })
        );
        assert_eq!(
            Series::new(vec![0.0, 1.0], vec![1.0, f64::INFINITY]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn control_points() {
        assert!(ControlPoints::new(vec![0, 3, 5], 6).is_ok());
        assert_eq!(ControlPoints::new(vec![1, 5], 6), Err(Error::InvalidControlPoints));
        assert_eq!(
            ControlPoints::new(vec![0, 3, 3, 5], 6),
            Err(Error::InvalidControlPoints)
        );
        let c = ControlPoints::with_endpoints(vec![4, 2, 2], 6).unwrap();
        assert_eq!(c.indices(), &[0, 2, 4, 5]);
        assert!(ControlPoints::with_endpoints(vec![7], 6).is_err());
    }
}
