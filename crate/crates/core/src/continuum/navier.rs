//! Body-force flow with the slip condition `u = ε (0, ∂1u2, ∂1u3)` on
//! `x1 = 0`, written as `u^S = u⁰ + w` with `w` a Dirichlet solution whose
//! wall data `g` solves `g = ε (0, ∂1u⁰_t + ∂1w_t)`.
//!
//! On tangential data the Dirichlet-to-Neumann map is `-k (I + ξξᵀ/k²)`,
//! so the plain iteration `g ← ε(a + Dg)` only contracts where `2εk < 1`.
//! [`NavierMethod::Preconditioned`] divides each residual by
//! `1 + 2εk` along `ξ` and `1 + εk` across it, which contracts on any grid.

use super::dirichlet::{solve_dirichlet_halfspace, DirichletSolution};
use super::{solve_body_force, BodyForceSolution, ContinuumGrid, Forcing, WallTraces};
use crate::grid::GridField;
use crate::spectral::SpectralField;
use crate::{Error, Result};
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NavierMethod {
    /// `g ← ε (a + D g)`.
    Picard,
    /// `g ← g + M⁻¹ (ε (a + D g) - g)` with `M = I - εD` per mode.
    Preconditioned,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NavierOptions {
    pub eps_max: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub method: NavierMethod,
    pub tol_edge: f64,
}

impl Default for NavierOptions {
    fn default() -> Self {
        Self {
            eps_max: 0.5,
            tol: 1e-10,
            max_iter: 50,
            method: NavierMethod::Preconditioned,
            tol_edge: super::DEFAULT_TOL_EDGE,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NavierSolution {
    /// `u^S` and its pressure on the evaluation lattice.
    pub field: GridField,
    pub base: BodyForceSolution,
    /// The Dirichlet part `w`.
    pub correction: DirichletSolution,
    pub iterations: usize,
    /// Largest nodal change of the wall data per iteration.
    pub history: Vec<f64>,
    /// `max |u^S - ε(0, ∂1u^S_2, ∂1u^S_3)|` on the wall.
    pub boundary_residual: f64,
}

/// Iterates the wall data of the slip correction from the wall shear
/// `du0 = ∂1u⁰` of the no-slip solution.
pub fn navier_wall_data(
    du0: &[SpectralField; 3],
    eps: f64,
    opts: &NavierOptions,
) -> Result<(DirichletSolution, Vec<f64>)> {
    if !(eps >= 0.0) || eps > opts.eps_max {
        return Err(Error::Precondition(format!(
            "slip length {eps} outside [0, {}]",
            opts.eps_max
        )));
    }
    let tg = du0[0].grid;
    let zero = SpectralField::zeros(tg);
    if eps == 0.0 {
        let sol = solve_dirichlet_halfspace(&[zero.clone(), zero.clone(), zero], opts.tol_edge)?;
        return Ok((sol, Vec::new()));
    }
    let n = tg.n;
    let a = du0;
    let mut g = [zero.clone(), a[1].scale(eps), a[2].scale(eps)];
    let mut history = Vec::new();
    loop {
        let sol = solve_dirichlet_halfspace(&g, f64::INFINITY)?;
        let dw = sol.plane_normal_derivative(0.0);
        let mut next = g.clone();
        for idx in 0..n * n {
            let (a2, a3) = (a[1].coeffs[idx], a[2].coeffs[idx]);
            let r2 = (a2 + dw[1].coeffs[idx]) * eps - g[1].coeffs[idx];
            let r3 = (a3 + dw[2].coeffs[idx]) * eps - g[2].coeffs[idx];
            let (s2, s3) = match opts.method {
                NavierMethod::Picard => (r2, r3),
                NavierMethod::Preconditioned => {
                    let xi2 = tg.wavenumber(idx / n);
                    let xi3 = tg.wavenumber(idx % n);
                    let k = (xi2 * xi2 + xi3 * xi3).sqrt();
                    if k == 0.0 {
                        (r2, r3)
                    } else {
                        let (e2, e3) = (xi2 / k, xi3 / k);
                        let par: Complex64 = r2 * e2 + r3 * e3;
                        let (p2, p3) = (par * e2, par * e3);
                        let (q2, q3) = (r2 - p2, r3 - p3);
                        let (mp, mq) = (1.0 / (1.0 + 2.0 * eps * k), 1.0 / (1.0 + eps * k));
                        (p2 * mp + q2 * mq, p3 * mp + q3 * mq)
                    }
                }
            };
            next[1].coeffs[idx] += s2;
            next[2].coeffs[idx] += s3;
        }
        let change = next[1]
            .axpy(-1.0, &g[1])
            .max_abs()
            .max(next[2].axpy(-1.0, &g[2]).max_abs());
        history.push(change);
        g = next;
        if change <= opts.tol {
            return Ok((solve_dirichlet_halfspace(&g, f64::INFINITY)?, history));
        }
        if history.len() >= opts.max_iter || !change.is_finite() {
            return Err(Error::NonConvergence {
                iterations: history.len(),
                last_change: change,
                history,
            });
        }
    }
}

/// `max |w - ε(0, a_t + ∂1w_t)|` on the wall.
pub fn slip_residual(du0: &WallTraces, w: &DirichletSolution, eps: f64) -> f64 {
    let trace = w.plane_velocity(0.0).map(|c| c.to_physical());
    let dw = w.plane_normal_derivative(0.0).map(|c| c.to_physical());
    let a = [du0.du[1].to_physical(), du0.du[2].to_physical()];
    let mut r = trace[0].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for c in 0..2 {
        for i in 0..trace[c + 1].len() {
            r = r.max((trace[c + 1][i] - eps * (a[c][i] + dw[c + 1][i])).abs());
        }
    }
    r
}

/// Velocity and pressure of the Navier-slip problem on the lattice of `grid`.
pub fn solve_navier(
    forcing: &Forcing,
    eps: f64,
    grid: &ContinuumGrid,
    opts: &NavierOptions,
) -> Result<NavierSolution> {
    if !(eps >= 0.0) || eps > opts.eps_max {
        return Err(Error::Precondition(format!(
            "slip length {eps} outside [0, {}]",
            opts.eps_max
        )));
    }
    let base = solve_body_force(forcing, 0.0, grid)?;
    let tg = grid.tangential_grid(forcing);
    if eps == 0.0 {
        return Ok(NavierSolution {
            field: base.field.clone(),
            base,
            correction: DirichletSolution::zero(tg),
            iterations: 0,
            history: Vec::new(),
            boundary_residual: 0.0,
        });
    }
    let traces = base.wall_traces(tg)?;
    solve_navier_from(base, &traces, eps, opts)
}

/// As [`solve_navier`], reusing a no-slip solution and its wall traces.
pub fn solve_navier_from(
    base: BodyForceSolution,
    traces: &WallTraces,
    eps: f64,
    opts: &NavierOptions,
) -> Result<NavierSolution> {
    if base.eps != 0.0 {
        return Err(Error::Precondition(
            "the slip problem starts from the eps = 0 solution".into(),
        ));
    }
    let top = traces.du.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
    let edge = traces.du.iter().map(|c| c.edge_max()).fold(0.0, f64::max);
    if edge > opts.tol_edge * top {
        return Err(Error::Precondition(format!(
            "wall shear does not decay on the tangential square: edge {edge:.3e}, max {top:.3e}"
        )));
    }
    let (correction, history) = navier_wall_data(&traces.du, eps, opts)?;
    let w = correction.eval_lattice(&base.field.lattice)?;
    let field = GridField {
        lattice: w.lattice.clone(),
        velocity: base
            .field
            .velocity
            .iter()
            .zip(&w.velocity)
            .map(|(a, b)| a + b)
            .collect(),
        pressure: match (&base.field.pressure, &w.pressure) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => None,
        },
    };
    let boundary_residual = slip_residual(traces, &correction, eps);
    Ok(NavierSolution {
        field,
        base,
        correction,
        iterations: history.len(),
        history,
        boundary_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TangentialGrid;

    fn shear(grid: TangentialGrid) -> [SpectralField; 3] {
        let f = |s: f64| move |x: f64, y: f64| s * (-3.0 * (x * x + y * y)).exp();
        [
            SpectralField::zeros(grid),
            SpectralField::from_fn(grid, f(0.5)),
            SpectralField::from_fn(grid, f(-1.0)),
        ]
    }

    fn traces(du: [SpectralField; 3]) -> WallTraces {
        WallTraces {
            p: SpectralField::zeros(du[0].grid),
            du,
        }
    }

    #[test]
    fn preconditioned_converges_fast() {
        let grid = TangentialGrid::new(128, 0.05);
        let du = shear(grid);
        let opts = NavierOptions::default();
        let (w, hist) = navier_wall_data(&du, 0.05, &opts).unwrap();
        assert!(hist.len() <= 5, "{hist:?}");
        let r = slip_residual(&traces(du), &w, 0.05);
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn picard_contracts_on_coarse_grids_and_slows_with_eps() {
        let grid = TangentialGrid::new(16, 1.0);
        let du = shear(grid);
        let opts = NavierOptions {
            method: NavierMethod::Picard,
            max_iter: 500,
            ..Default::default()
        };
        let counts: Vec<usize> = [0.02, 0.05, 0.08, 0.1]
            .iter()
            .map(|&e| navier_wall_data(&du, e, &opts).unwrap().1.len())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
        assert!(counts[3] > counts[0]);
        // fine grids leave the contraction range of plain iteration
        let fine = TangentialGrid::new(64, 0.05);
        let opts = NavierOptions {
            max_iter: 50,
            ..opts
        };
        assert!(matches!(
            navier_wall_data(&shear(fine), 0.1, &opts),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn eps_checks() {
        let grid = TangentialGrid::new(16, 0.5);
        let opts = NavierOptions::default();
        assert!(navier_wall_data(&shear(grid), 0.6, &opts).is_err());
        let (w, h) = navier_wall_data(&shear(grid), 0.0, &opts).unwrap();
        assert!(h.is_empty());
        assert_eq!(w.plane_velocity(0.3)[2].max_abs(), 0.0);
    }
}
