//! Rates in the layer width: no-slip, first-order corrected and Navier-slip
//! approximations of the flow with a particle-free layer.

use super::{fit_loglog, Check, ExperimentConfig, SlopeFit};
use crate::cascade::{u1_system, InteriorTraces, SpectralSolver};
use crate::continuum::{
    eval_lattice, solve_body_force_on, solve_navier_from, BodyForceSolution, ContinuumGrid,
    Forcing, NavierOptions, SourceLattice,
};
use crate::grid::{norms, GridField};
use crate::spectral::SpectralField;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct EpsRow {
    pub eps: f64,
    /// `|u^ε - u⁰|` in the `H¹(K)` seminorm.
    pub e0: f64,
    /// `|u^ε - u⁰ - ε u¹|`.
    pub e1: f64,
    /// `|u^ε - u^S|`.
    pub e_s: f64,
    pub navier_iterations: usize,
    pub navier_residual: f64,
}

#[derive(Debug, Clone)]
pub struct EpsReport {
    pub rows: Vec<EpsRow>,
    pub fit_e0: SlopeFit,
    pub fit_e1: SlopeFit,
    pub fit_s: SlopeFit,
    /// `|u¹|` in the `H¹(K)` seminorm.
    pub u1_norm: f64,
    pub grid: ContinuumGrid,
}

pub fn exp_eps_convergence(cfg: &ExperimentConfig) -> Result<EpsReport> {
    let forcing = Forcing::sedimenting(cfg.density.clone());
    let grid: ContinuumGrid = cfg.grid.into();
    let h = grid.cell_size(&forcing);
    let sources = SourceLattice::build_with_spacing(&forcing, h)?;
    let lattice = eval_lattice(&cfg.region_k(), h, grid.stride);
    let base: BodyForceSolution = solve_body_force_on(sources.clone(), 0.0, lattice.clone())?;
    let tg = grid.tangential_grid(&forcing);
    let traces = base.wall_traces(tg)?;

    let z = SpectralField::zeros(tg);
    let wall = InteriorTraces { u: [z.clone(), z.clone(), z], du: traces.du.clone(), p: traces.p.clone() };
    let u1 = u1_system(&wall, &SpectralSolver::default())?;
    let u1_field = u1.solution.eval_lattice(&lattice)?;
    let u1_norm = u1_field.h1_seminorm();

    let opts = NavierOptions::default();
    let mut rows = Vec::new();
    for &eps in &cfg.eps.values {
        let layered = solve_body_force_on(sources.clone(), eps, lattice.clone())?.field;
        let first = GridField { pressure: None, ..base.field.axpy(eps, &u1_field)? };
        let slip = solve_navier_from(base.clone(), &traces, eps, &opts)?;
        let bare = |f: &GridField| GridField { pressure: None, ..f.clone() };
        let layered = bare(&layered);
        rows.push(EpsRow {
            eps,
            e0: norms(&layered, &bare(&base.field), cfg.q)?.h1,
            e1: norms(&layered, &first, cfg.q)?.h1,
            e_s: norms(&layered, &bare(&slip.field), cfg.q)?.h1,
            navier_iterations: slip.iterations,
            navier_residual: slip.boundary_residual,
        });
    }
    let pts = |f: fn(&EpsRow) -> f64| rows.iter().map(|r| (r.eps, f(r))).collect::<Vec<_>>();
    Ok(EpsReport {
        fit_e0: fit_loglog(&pts(|r| r.e0))?,
        fit_e1: fit_loglog(&pts(|r| r.e1))?,
        fit_s: fit_loglog(&pts(|r| r.e_s))?,
        rows,
        u1_norm,
        grid,
    })
}

impl EpsReport {
    pub fn checks(&self) -> Vec<Check> {
        let mut c = vec![
            Check::within(4, "slope of |u^eps - u0|_H1(K)", self.fit_e0.slope, 0.8, 1.2),
            Check::within(4, "slope of |u^eps - u^S|_H1(K)", self.fit_s.slope, 1.7, 2.3),
            Check::within(4, "slope of |u^eps - (u0 + eps u1)|_H1(K)", self.fit_e1.slope, 1.7, 2.3),
        ];
        let below = self.rows.iter().all(|r| r.e_s < r.e0);
        let detail = self.rows.iter().map(|r| format!("{:.3e} < {:.3e}", r.e_s, r.e0)).collect::<Vec<_>>().join(", ");
        c.push(Check::new(4, "Navier error below no-slip error at every eps", below, detail));
        if let Some(last) = self.rows.last() {
            let lead = last.eps * self.u1_norm;
            let ratio = last.e0 / lead;
            c.push(Check::new(4, "leading term eps*|u1| explains e0 at the smallest eps", ratio > 0.5 && ratio < 2.0, format!("ratio {ratio:.4}")).diagnostic());
        }
        c
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{:.17e},{:.17e},{:.17e},{},{:.3e},{},{},{}",
                    r.eps, r.e0, r.e1, r.e_s, r.navier_iterations, r.navier_residual, self.grid.n_q, self.grid.stride, self.grid.n_t
                )
            })
            .collect()
    }

    pub const CSV_HEADER: &'static str = "eps,e0,e1,e_s,navier_iterations,navier_residual,n_q,stride,n_t";
}
