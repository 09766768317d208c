//! Structural identities of the corrector cascade and contracts of the
//! continuum solvers.

use super::Check;
use crate::cascade::{u1_data, u2_data, CascadeState, InteriorTraces, SpectralSolver};
use crate::continuum::navier::{navier_wall_data, slip_residual};
use crate::continuum::{
    solve_body_force, solve_dirichlet_halfspace, solve_navier, ContinuumGrid, Forcing,
    NavierOptions, SourceLattice, DEFAULT_TOL_EDGE,
};
use crate::density::DensityField;
use crate::grid::{BoxRegion, Lattice};
use crate::quadrature::divergence4;
use crate::spectral::{SpectralField, TangentialGrid};
use crate::{Result, Vec3};

fn blob() -> Forcing {
    Forcing::sedimenting(DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0))
}

/// Cascade through order 4 on the wall data of a sedimenting blob.
pub fn cascade_checks() -> Result<Vec<Check>> {
    let f = blob();
    let grid = ContinuumGrid { n_q: 8, n_t: 256, ..Default::default() };
    let sol = solve_body_force(&f, 0.0, &grid)?;
    let w = sol.wall_traces(grid.tangential_grid(&f))?;
    let z = SpectralField::zeros(w.p.grid);
    let base = InteriorTraces { u: [z.clone(), z.clone(), z], du: w.du.clone(), p: w.p.clone() };
    // orders 3 and 4 carry slowly decaying tangential derivatives of p⁰
    let solver = SpectralSolver { tol_edge: f64::INFINITY };
    let st = CascadeState::build(base.clone(), 4, &solver)?;
    let scale = w.du.iter().map(|c| c.max_abs()).fold(w.p.max_abs(), f64::max);
    let mut wall = 0.0_f64;
    let mut stress = 0.0_f64;
    let mut exact = true;
    for i in 0..=4 {
        wall = wall.max(st.wall_value(i));
        stress = stress.max(st.stress_residual(i));
        exact &= st.divergence_exact(i);
    }
    let t1 = st.traces(1);
    let bitwise = t1.u == u1_data(&base) && st.traces(2).u == u2_data(&base, &t1);
    Ok(vec![
        Check::at_most(7, "U^i(-1) = 0 through order 4 (relative)", wall / scale, 1e-14),
        Check::new(7, "divergence recursion exact per coefficient", exact, "orders 0..=4"),
        Check::at_most(7, "stress continuity residual through order 4", stress, 1e-8),
        Check::new(7, "closed forms of orders 1 and 2 equal the recursion bitwise", bitwise, "u1 and u2 wall data"),
    ])
}

pub fn solver_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    // trace recovery and the manufactured solution
    let f = Forcing::sedimenting(DensityField::bump(Vec3::new(0.3, 0.0, 0.0), 0.2, 1.0));
    let region = BoxRegion::new(Vec3::new(0.7, -0.75, -0.75), Vec3::new(1.5, 0.75, 0.75));
    let grid = ContinuumGrid { n_q: 8, stride: 2, n_t: 512, region: Some(region) };
    let delta = 0.6;
    let sol = solve_body_force(&f, 0.0, &grid)?;
    let trace = sol.plane_trace(grid.tangential_grid(&f), delta)?;
    let dir = solve_dirichlet_halfspace(&trace.u, DEFAULT_TOL_EDGE)?;
    out.push(Check::at_most(8, "Dirichlet trace recovery (relative)", dir.trace_residual(&trace.u), 1e-8));
    let lat = &sol.field.lattice;
    let shifted = Lattice { origin: [lat.origin[0] - delta, lat.origin[1], lat.origin[2]], ..lat.clone() };
    let w = dir.eval_lattice(&shifted)?;
    let err = w.velocity.iter().zip(&sol.field.velocity).fold(0.0_f64, |m, (a, b)| m.max((a - b).amax())) / sol.field.max_abs();
    out.push(Check::at_most(8, "manufactured solution recovery (relative)", err, 1e-3));

    // Navier fixed point
    let f = blob();
    let grid = ContinuumGrid { n_q: 24, n_t: 256, ..Default::default() };
    let nav = solve_navier(&f, 0.05, &grid, &NavierOptions::default())?;
    out.push(Check::new(8, "Navier fixed point iterations at eps = 0.05", nav.iterations <= 5, format!("{} <= 5", nav.iterations)));
    let traces = nav.base.wall_traces(grid.tangential_grid(&f))?;
    let res = nav.boundary_residual.max(slip_residual(&traces, &nav.correction, 0.05));
    out.push(Check::at_most(8, "Navier boundary residual", res, 1e-8));

    // divergence of what the solvers return
    let cloud = SourceLattice::build(&f, 12)?.to_cloud();
    let pts = [Vec3::new(0.3, 0.2, 0.1), Vec3::new(1.03, -0.41, 0.27), Vec3::new(1.7, 0.6, -0.5)];
    let failed = std::cell::Cell::new(false);
    let ok = |r: Result<Vec3>| r.unwrap_or_else(|_| {
        failed.set(true);
        Vec3::zeros()
    });
    let mut div = 0.0_f64;
    for eps in [0.0, 0.1] {
        for x in &pts {
            div = div.max(divergence4(|p| ok(cloud.velocity(p, eps)), x, 1e-3).abs());
        }
    }
    let tg = TangentialGrid::new(64, 0.05);
    let du = [0.0, 0.5, -1.0].map(|s| SpectralField::from_fn(tg, move |x, y| s * (-3.0 * (x * x + y * y)).exp()));
    let (wd, _) = navier_wall_data(&du, 0.05, &NavierOptions::default())?;
    for x in [Vec3::new(0.05, 0.1, 0.0), Vec3::new(0.3, -0.2, 0.25)] {
        div = div.max(divergence4(|p| ok(wd.eval_point(p).map(|v| v.0)), &x, 1e-3).abs());
    }
    let div = if failed.get() { f64::INFINITY } else { div };
    out.push(Check::at_most(8, "solver outputs divergence-free", div, 1e-4));
    Ok(out)
}
