//! Periodic tangential grids over `(x2, x3)` and fields stored by their
//! discrete Fourier coefficients.
//!
//! The grid is an `n x n` square of spacing `h` with nodes at
//! `(j - n/2) h`, so the tangential origin is a node. Derivatives are
//! spectral; the Nyquist row and column are given zero wavenumber so that
//! derivatives of real fields stay real.

use crate::fft2::{self, signed_index};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentialGrid {
    pub n: usize,
    pub h: f64,
}

impl TangentialGrid {
    pub fn new(n: usize, h: f64) -> Self {
        assert!(n >= 4 && n % 2 == 0, "tangential grid size must be even");
        Self { n, h }
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Side length of the periodic square.
    pub fn period(&self) -> f64 {
        self.n as f64 * self.h
    }

    /// Coordinate of node `j` along either axis.
    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h
    }

    pub fn origin(&self) -> f64 {
        self.coord(0)
    }

    /// Index of the node at `x`, if `x` is (up to rounding) a node.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let t = x / self.h + (self.n / 2) as f64;
        let j = t.round();
        if (t - j).abs() > 1e-6 || j < 0.0 || j >= self.n as f64 {
            None
        } else {
            Some(j as usize)
        }
    }

    /// Wavenumber of bin `j`, zero on the Nyquist bin.
    pub fn wavenumber(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            2.0 * PI * signed_index(j, self.n) as f64 / self.period()
        }
    }

    pub fn is_nyquist(&self, j: usize) -> bool {
        j == self.n / 2
    }

    fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }
}

/// Real scalar field on a tangential grid, held as Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: TangentialGrid,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: TangentialGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Transforms node values (row index along `x2`).
    pub fn from_physical(grid: TangentialGrid, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.len());
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft2::plan(grid.n, grid.n).forward(&mut coeffs);
        Self { grid, coeffs }
    }

    pub fn from_fn(grid: TangentialGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for a in 0..grid.n {
            for b in 0..grid.n {
                values.push(f(grid.coord(a), grid.coord(b)));
            }
        }
        Self::from_physical(grid, &values)
    }

    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft2::plan(self.grid.n, self.grid.n).inverse(&mut data);
        data.iter().map(|c| c.re).collect()
    }

    pub fn axpy(&self, a: f64, other: &SpectralField) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y * a)
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|x| x * a).collect(),
        }
    }

    /// Multiplies each coefficient by `m(ξ2, ξ3)`.
    pub fn apply_symbol(&self, m: impl Fn(f64, f64) -> Complex64) -> SpectralField {
        let xi = self.grid.wavenumbers();
        let n = self.grid.n;
        let mut coeffs = self.coeffs.clone();
        for a in 0..n {
            for b in 0..n {
                coeffs[a * n + b] *= m(xi[a], xi[b]);
            }
        }
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    /// `∂_2` (axis 0 of the grid) or `∂_3` (axis 1).
    pub fn derivative(&self, axis: usize) -> SpectralField {
        if axis == 0 {
            self.apply_symbol(|x2, _| Complex64::new(0.0, x2))
        } else {
            self.apply_symbol(|_, x3| Complex64::new(0.0, x3))
        }
    }

    pub fn laplacian(&self) -> SpectralField {
        self.apply_symbol(|x2, x3| Complex64::new(-(x2 * x2 + x3 * x3), 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_physical().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mean over the periodic square.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / self.grid.len() as f64
    }

    /// Trigonometric interpolant at an arbitrary tangential point.
    pub fn value_at(&self, x2: f64, x3: f64) -> f64 {
        let g = &self.grid;
        let n = g.n;
        let e2: Vec<Complex64> = (0..n)
            .map(|a| Complex64::from_polar(1.0, g.wavenumber(a) * (x2 - g.origin())))
            .collect();
        let e3: Vec<Complex64> = (0..n)
            .map(|b| Complex64::from_polar(1.0, g.wavenumber(b) * (x3 - g.origin())))
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for b in 0..n {
                row += self.coeffs[a * n + b] * e3[b];
            }
            acc += row * e2[a];
        }
        acc.re / g.len() as f64
    }

    /// Largest magnitude on the outermost ring of nodes.
    pub fn edge_max(&self) -> f64 {
        let v = self.to_physical();
        let n = self.grid.n;
        let mut m: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                if a == 0 || b == 0 || a == n - 1 || b == n - 1 {
                    m = m.max(v[a * n + b].abs());
                }
            }
        }
        m
    }
}
