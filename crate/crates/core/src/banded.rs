//! Sparse-row assembly of square linear systems and their solution by banded
//! LU factorisation with partial pivoting.
//!
//! Spline systems couple only neighbouring segments, so when equations are
//! emitted in the order of the segments they touch the matrix is banded.
//! The band widths are measured from the assembled rows rather than declared
//! up front.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One equation: sparse coefficients and the right hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// A linear system assembled row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    unknowns: usize,
    equations: Vec<Equation>,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        Self {
            unknowns,
            equations: Vec::with_capacity(unknowns),
        }
    }

    pub fn push(&mut self, terms: Vec<(usize, f64)>, rhs: f64) {
        debug_assert!(terms.iter().all(|&(c, _)| c < self.unknowns));
        self.equations.push(Equation { terms, rhs });
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Lower and upper band widths of the assembled matrix.
    pub fn bandwidths(&self) -> (usize, usize) {
        let mut lower = 0;
        let mut upper = 0;
        for (row, eq) in self.equations.iter().enumerate() {
            for &(col, v) in &eq.terms {
                if v == 0.0 {
                    continue;
                }
                if col < row {
                    lower = lower.max(row - col);
                } else {
                    upper = upper.max(col - row);
                }
            }
        }
        (lower, upper)
    }

    /// Solves the system. Fails with [`Error::SingularSystem`] when it is not
    /// square or a pivot vanishes relative to the matrix scale.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.unknowns;
        if self.equations.len() != n {
            return Err(Error::SingularSystem);
        }
        let (kl, ku) = self.bandwidths();
        let mut band = BandMatrix::new(n, kl, ku);
        let mut rhs = Vec::with_capacity(n);
        for (row, eq) in self.equations.iter().enumerate() {
            for &(col, v) in &eq.terms {
                band.add(row, col, v);
            }
            rhs.push(eq.rhs);
        }
        band.solve_in_place(&mut rhs)?;
        Ok(rhs)
    }
}

/// Row-major band storage with room for the fill-in caused by row swaps.
struct BandMatrix {
    n: usize,
    kl: usize,
    // columns stored per row: i-kl ..= i+ku+kl
    width: usize,
    reach: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            width,
            reach: ku + kl,
            data: vec![0.0; n * width],
        }
    }

    #[inline]
    fn slot(&self, row: usize, col: usize) -> usize {
        debug_assert!(col + self.kl >= row && col <= row + self.reach);
        row * self.width + (col + self.kl - row)
    }

    fn add(&mut self, row: usize, col: usize, v: f64) {
        let s = self.slot(row, col);
        self.data[s] += v;
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> f64 {
        self.data[self.slot(row, col)]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, v: f64) {
        let s = self.slot(row, col);
        self.data[s] = v;
    }

    #[allow(clippy::needless_range_loop)]
    fn solve_in_place(&mut self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !scale.is_finite() {
            return Err(Error::NonFinite);
        }
        if scale == 0.0 {
            return Err(Error::SingularSystem);
        }
        let tiny = scale * 1e-14;

        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + self.reach).min(n - 1);

            let mut pivot = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    pivot = i;
                }
            }
            if best <= tiny {
                return Err(Error::SingularSystem);
            }
            if pivot != k {
                for j in k..=last_col {
                    let a = self.get(k, j);
                    let c = self.get(pivot, j);
                    self.set(k, j, c);
                    self.set(pivot, j, a);
                }
                b.swap(k, pivot);
            }

            let diag = self.get(k, k);
            for i in k + 1..=last_row {
                let factor = self.get(i, k) / diag;
                if factor == 0.0 {
                    continue;
                }
                self.set(i, k, 0.0);
                for j in k + 1..=last_col {
                    let v = self.get(i, j) - factor * self.get(k, j);
                    self.set(i, j, v);
                }
                b[i] -= factor * b[k];
            }
        }

        for i in (0..n).rev() {
            let last_col = (i + self.reach).min(n - 1);
            let mut acc = b[i];
            for j in i + 1..=last_col {
                acc -= self.get(i, j) * b[j];
            }
            b[i] = acc / self.get(i, i);
        }
        Ok(())
    }
}
