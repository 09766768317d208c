//! Homogeneous Stokes flow in `x1 > 0` with prescribed wall velocity.
//!
//! Per tangential wavevector `ξ ≠ 0`, with `k = |ξ|`, the solution is
//! `û(x1) = (ĝ + x1 b) e^{-k x1}` and `p̂ = P e^{-k x1}` where
//! `P = 2(k ĝ1 - iξ2 ĝ2 - iξ3 ĝ3)` and `b = P (k, -iξ2, -iξ3) / (2k)`.
//! Wavenumbers are those of [`TangentialGrid::wavenumber`], so the mean
//! mode is carried as a constant with zero pressure and the wall trace is
//! reproduced exactly on the periodic square.

use crate::grid::{GridField, Lattice};
use crate::spectral::{SpectralField, TangentialGrid};
use crate::{par_map_range, Error, Result, Vec3};
use rustfft::num_complex::Complex64;

/// Default edge-decay tolerance, relative to the data's maximum.
pub const DEFAULT_TOL_EDGE: f64 = 5e-2;

/// Fourier representation of a Dirichlet solution.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSolution {
    pub grid: TangentialGrid,
    pub data: [SpectralField; 3],
    /// Largest nodal value of the data's Nyquist row and column. These
    /// modes have no resolved tangential derivative and are carried along
    /// one axis or as constants, like the mean.
    pub nyquist_amplitude: f64,
    /// Mean of each data component (the carried constant mode).
    pub mean: Vec3,
}

struct Mode {
    k: f64,
    xi2: f64,
    xi3: f64,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

impl Mode {
    fn pressure(&self, g: [Complex64; 3]) -> Complex64 {
        (g[0] * self.k - I * self.xi2 * g[1] - I * self.xi3 * g[2]) * 2.0
    }

    fn b(&self, g: [Complex64; 3]) -> [Complex64; 3] {
        if self.k == 0.0 {
            return [Complex64::new(0.0, 0.0); 3];
        }
        let p = self.pressure(g) / (2.0 * self.k);
        [p * self.k, -I * self.xi2 * p, -I * self.xi3 * p]
    }
}

/// Solves homogeneous Stokes flow in `x1 > 0` with `u = g` on `x1 = 0`.
///
/// `g` must decay towards the edge of its periodic square: the largest
/// value on the outer ring may not exceed `tol_edge` times the overall
/// maximum.
pub fn solve_dirichlet_halfspace(
    g: &[SpectralField; 3],
    tol_edge: f64,
) -> Result<DirichletSolution> {
    let grid = g[0].grid;
    if g.iter().any(|c| c.grid != grid) {
        return Err(Error::GridMismatch(
            "trace components on different grids".into(),
        ));
    }
    let top = g.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
    let edge = g.iter().map(|c| c.edge_max()).fold(0.0, f64::max);
    if edge > tol_edge * top {
        return Err(Error::Precondition(format!(
            "wall data does not decay: edge {edge:.3e} vs max {top:.3e} (tol {tol_edge})"
        )));
    }
    let n = grid.n;
    let mut nyquist = SpectralField::zeros(grid);
    let mut nyquist_amplitude: f64 = 0.0;
    for c in g {
        for a in 0..n {
            for b in 0..n {
                let idx = a * n + b;
                nyquist.coeffs[idx] = if grid.is_nyquist(a) || grid.is_nyquist(b) {
                    c.coeffs[idx]
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        nyquist_amplitude = nyquist_amplitude.max(nyquist.max_abs());
    }
    let data = g.clone();
    let mean = Vec3::new(data[0].mean(), data[1].mean(), data[2].mean());
    Ok(DirichletSolution {
        grid,
        data,
        nyquist_amplitude,
        mean,
    })
}

impl DirichletSolution {
    /// The zero solution on `grid`.
    pub fn zero(grid: TangentialGrid) -> Self {
        let z = SpectralField::zeros(grid);
        Self {
            grid,
            data: [z.clone(), z.clone(), z],
            nyquist_amplitude: 0.0,
            mean: Vec3::zeros(),
        }
    }

    fn mode(&self, a: usize, b: usize) -> Mode {
        let xi2 = self.grid.wavenumber(a);
        let xi3 = self.grid.wavenumber(b);
        Mode {
            k: (xi2 * xi2 + xi3 * xi3).sqrt(),
            xi2,
            xi3,
        }
    }

    fn coeff(&self, idx: usize) -> [Complex64; 3] {
        [
            self.data[0].coeffs[idx],
            self.data[1].coeffs[idx],
            self.data[2].coeffs[idx],
        ]
    }

    /// Fourier coefficients of `(u1, u2, u3, ∂1u1, ∂1u2, ∂1u3, p)` on `x1`.
    fn plane_coeffs(&self, x1: f64) -> [Vec<Complex64>; 7] {
        let n = self.grid.n;
        let mut out: [Vec<Complex64>; 7] =
            std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n * n]);
        for a in 0..n {
            for b in 0..n {
                let idx = a * n + b;
                let m = self.mode(a, b);
                let g = self.coeff(idx);
                let bb = m.b(g);
                let decay = (-m.k * x1).exp();
                for c in 0..3 {
                    out[c][idx] = (g[c] + bb[c] * x1) * decay;
                    out[3 + c][idx] = (bb[c] - (g[c] + bb[c] * x1) * m.k) * decay;
                }
                out[6][idx] = if m.k == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    m.pressure(g) * decay
                };
            }
        }
        out
    }

    fn fields(&self, x1: f64, range: std::ops::Range<usize>) -> Vec<SpectralField> {
        let coeffs = self.plane_coeffs(x1);
        range
            .map(|c| SpectralField {
                grid: self.grid,
                coeffs: coeffs[c].clone(),
            })
            .collect()
    }

    pub fn plane_velocity(&self, x1: f64) -> [SpectralField; 3] {
        let v = self.fields(x1, 0..3);
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    /// Analytic `∂1 u` on the plane `x1`.
    pub fn plane_normal_derivative(&self, x1: f64) -> [SpectralField; 3] {
        let v = self.fields(x1, 3..6);
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    pub fn plane_pressure(&self, x1: f64) -> SpectralField {
        self.fields(x1, 6..7).pop().expect("pressure")
    }

    /// Samples `u` and `p` on a lattice in `x1 >= 0` whose tangential nodes
    /// are nodes of the tangential grid.
    pub fn eval_lattice(&self, lattice: &Lattice) -> Result<GridField> {
        if lattice.origin[0] < -1e-12 {
            return Err(Error::Domain("lattice reaches below the wall".into()));
        }
        let [n1, n2, n3] = lattice.dims;
        let mut rows = Vec::with_capacity(n2);
        let mut cols = Vec::with_capacity(n3);
        for j in 0..n2 {
            let x = lattice.origin[1] + j as f64 * lattice.spacing[1];
            rows.push(
                self.grid
                    .node_index(x)
                    .ok_or_else(|| Error::GridMismatch(format!("x2 = {x} is not a node")))?,
            );
        }
        for k in 0..n3 {
            let x = lattice.origin[2] + k as f64 * lattice.spacing[2];
            cols.push(
                self.grid
                    .node_index(x)
                    .ok_or_else(|| Error::GridMismatch(format!("x3 = {x} is not a node")))?,
            );
        }
        let n = self.grid.n;
        let planes = par_map_range(n1, |i| {
            let x1 = lattice.origin[0] + i as f64 * lattice.spacing[0];
            let coeffs = self.plane_coeffs(x1);
            let phys: Vec<Vec<f64>> = [0, 1, 2, 6]
                .iter()
                .map(|&c| {
                    SpectralField {
                        grid: self.grid,
                        coeffs: coeffs[c].clone(),
                    }
                    .to_physical()
                })
                .collect();
            let mut vel = Vec::with_capacity(n2 * n3);
            let mut pr = Vec::with_capacity(n2 * n3);
            for &a in &rows {
                for &b in &cols {
                    let idx = a * n + b;
                    vel.push(Vec3::new(phys[0][idx], phys[1][idx], phys[2][idx]));
                    pr.push(phys[3][idx]);
                }
            }
            (vel, pr)
        });
        let mut velocity = Vec::with_capacity(lattice.len());
        let mut pressure = Vec::with_capacity(lattice.len());
        for (v, p) in planes {
            velocity.extend(v);
            pressure.extend(p);
        }
        Ok(GridField {
            lattice: lattice.clone(),
            velocity,
            pressure: Some(pressure),
        })
    }

    /// Velocity and pressure at an arbitrary point of `x1 >= 0`, by direct
    /// trigonometric summation.
    pub fn eval_point(&self, x: &Vec3) -> Result<(Vec3, f64)> {
        if x[0] < 0.0 {
            return Err(Error::Domain(format!("{x:?} below the wall")));
        }
        let coeffs = self.plane_coeffs(x[0]);
        let f = |c: usize| {
            SpectralField {
                grid: self.grid,
                coeffs: coeffs[c].clone(),
            }
            .value_at(x[1], x[2])
        };
        Ok((Vec3::new(f(0), f(1), f(2)), f(6)))
    }

    /// Largest nodal mismatch between the reconstructed wall trace and `g`,
    /// relative to the largest value of `g`.
    pub fn trace_residual(&self, g: &[SpectralField; 3]) -> f64 {
        let trace = self.plane_velocity(0.0);
        let mut diff: f64 = 0.0;
        let mut top: f64 = 0.0;
        for (t, gc) in trace.iter().zip(g) {
            let a = t.to_physical();
            let b = gc.to_physical();
            for (x, y) in a.iter().zip(&b) {
                diff = diff.max((x - y).abs());
                top = top.max(y.abs());
            }
        }
        if top == 0.0 {
            diff
        } else {
            diff / top
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gradient4;

    fn blob(grid: TangentialGrid, x0: f64, y0: f64, amp: [f64; 3]) -> [SpectralField; 3] {
        amp.map(|a| {
            SpectralField::from_fn(grid, |x, y| {
                a * (-4.0 * ((x - x0).powi(2) + (y - y0).powi(2))).exp()
            })
        })
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = TangentialGrid::new(16, 0.5);
        let z = SpectralField::zeros(g);
        let sol = solve_dirichlet_halfspace(&[z.clone(), z.clone(), z], DEFAULT_TOL_EDGE).unwrap();
        let lat = Lattice::new(Vec3::new(0.0, -1.0, -1.0), [0.5; 3], [3, 5, 5]);
        assert_eq!(sol.eval_lattice(&lat).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn non_decaying_data_is_rejected() {
        let g = TangentialGrid::new(16, 0.5);
        let c = SpectralField::from_fn(g, |_, _| 1.0);
        let z = SpectralField::zeros(g);
        assert!(matches!(
            solve_dirichlet_halfspace(&[c, z.clone(), z], 0.05),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn trace_divergence_and_momentum() {
        let grid = TangentialGrid::new(64, 0.125);
        let g = blob(grid, 0.3, -0.2, [0.4, -1.0, 0.7]);
        let sol = solve_dirichlet_halfspace(&g, DEFAULT_TOL_EDGE).unwrap();
        assert!(sol.trace_residual(&g) < 1e-8);
        let f = |x: &Vec3| sol.eval_point(x).unwrap().0;
        let p = |x: &Vec3| sol.eval_point(x).unwrap().1;
        let h = 1e-3;
        for x in [
            Vec3::new(0.2, 0.1, 0.0),
            Vec3::new(0.5, 0.4, -0.3),
            Vec3::new(1.0, -0.6, 0.2),
        ] {
            let div = crate::quadrature::divergence4(&f, &x, h);
            assert!(div.abs() < 1e-6, "{div}");
            // -Δu + ∇p = 0
            let lap = crate::quadrature::laplacian4(&f, &x, h);
            let gp = gradient4(&p, &x, h);
            assert!((gp - lap).amax() < 1e-4, "{}", (gp - lap).amax());
        }
    }

    #[test]
    fn analytic_normal_derivative_matches_fd() {
        let grid = TangentialGrid::new(64, 0.125);
        let g = blob(grid, 0.0, 0.0, [0.0, 1.0, -0.5]);
        let sol = solve_dirichlet_halfspace(&g, DEFAULT_TOL_EDGE).unwrap();
        let h = 1e-3;
        let du = sol.plane_normal_derivative(0.0).map(|c| c.to_physical());
        let u = |x1: f64, idx: usize| sol.plane_velocity(x1).map(|c| c.to_physical()[idx]);
        for idx in [32 * 64 + 32, 30 * 64 + 35, 40 * 64 + 28] {
            let (a, b, c) = (u(0.0, idx), u(h, idx), u(2.0 * h, idx));
            for k in 0..3 {
                let fd = (-3.0 * a[k] + 4.0 * b[k] - c[k]) / (2.0 * h);
                assert!((fd - du[k][idx]).abs() < 1e-4, "{fd} {}", du[k][idx]);
            }
        }
    }

    #[test]
    fn shift_equivariance() {
        let grid = TangentialGrid::new(32, 0.25);
        let s1 = solve_dirichlet_halfspace(&blob(grid, 0.0, 0.0, [1.0, 0.5, -0.2]), 0.05).unwrap();
        let s2 =
            solve_dirichlet_halfspace(&blob(grid, 0.5, -0.25, [1.0, 0.5, -0.2]), 0.05).unwrap();
        let l1 = Lattice::new(Vec3::new(0.0, -1.0, -1.0), [0.25; 3], [4, 6, 6]);
        let l2 = Lattice::new(Vec3::new(0.0, -0.5, -1.25), [0.25; 3], [4, 6, 6]);
        let a = s1.eval_lattice(&l1).unwrap();
        let b = s2.eval_lattice(&l2).unwrap();
        for (x, y) in a.velocity.iter().zip(&b.velocity) {
            assert!((x - y).amax() < 1e-12);
        }
    }
}
