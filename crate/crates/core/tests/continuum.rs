use halfwall::continuum::navier::{navier_wall_data, slip_residual};
use halfwall::continuum::{
    eval_lattice, solve_body_force, solve_body_force_on, solve_dirichlet_halfspace, solve_navier,
    BodyForce, ContinuumGrid, Forcing, NavierOptions, SourceLattice, DEFAULT_TOL_EDGE,
};
use halfwall::density::DensityField;
use halfwall::grid::{BoxRegion, Lattice};
use halfwall::quadrature::divergence4;
use halfwall::spectral::TangentialGrid;
use halfwall::Vec3;

fn blob() -> Forcing {
    Forcing::sedimenting(DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0))
}

fn k_region() -> BoxRegion {
    BoxRegion::new(Vec3::new(0.25, -0.75, -0.75), Vec3::new(1.75, 0.75, 0.75))
}

fn max_diff(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).amax()))
}

#[test]
fn midpoint_quadrature_self_converges_at_second_order() {
    let f = blob();
    let common = eval_lattice(&k_region(), 1.0 / 8.0, 1);
    let fields: Vec<_> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let src = SourceLattice::build(&f, n).unwrap();
            solve_body_force_on(src, 0.0, common.clone())
                .unwrap()
                .field
                .velocity
        })
        .collect();
    let d1 = max_diff(&fields[0], &fields[1]);
    let d2 = max_diff(&fields[1], &fields[2]);
    let ratio = d1 / d2;
    assert!(
        ratio > 3.5 && ratio < 4.5,
        "refinement ratio {ratio} ({d1:.3e}, {d2:.3e})"
    );
}

#[test]
fn dirichlet_solver_recovers_a_body_force_field_above_its_support() {
    let rho = DensityField::bump(Vec3::new(0.3, 0.0, 0.0), 0.2, 1.0);
    let f = Forcing::sedimenting(rho);
    let grid = ContinuumGrid {
        n_q: 8,
        stride: 2,
        n_t: 512,
        region: None,
    };
    let delta = 0.6;
    let region = BoxRegion::new(Vec3::new(0.7, -0.75, -0.75), Vec3::new(1.5, 0.75, 0.75));
    let grid = ContinuumGrid {
        region: Some(region),
        ..grid
    };
    let sol = solve_body_force(&f, 0.0, &grid).unwrap();
    let tg = grid.tangential_grid(&f);
    let trace = sol.plane_trace(tg, delta).unwrap();
    let dir = solve_dirichlet_halfspace(&trace.u, DEFAULT_TOL_EDGE).unwrap();
    assert!(dir.trace_residual(&trace.u) < 1e-8);
    let lat = &sol.field.lattice;
    let shifted = Lattice {
        origin: [lat.origin[0] - delta, lat.origin[1], lat.origin[2]],
        ..lat.clone()
    };
    let w = dir.eval_lattice(&shifted).unwrap();
    let err = max_diff(&w.velocity, &sol.field.velocity) / sol.field.max_abs();
    assert!(err < 1e-3, "relative error {err:.3e}");
}

#[test]
fn analytic_wall_derivative_matches_one_sided_differences() {
    let f = blob();
    let grid = ContinuumGrid {
        n_q: 24,
        n_t: 128,
        ..Default::default()
    };
    let src = SourceLattice::build(&f, grid.n_q).unwrap();
    let h = src.h;
    let tg = TangentialGrid::new(grid.n_t, h);
    let dx = 1e-3;
    let lat = Lattice::new(
        Vec3::new(0.0, -8.0 * h, -8.0 * h),
        [dx, 4.0 * h, 4.0 * h],
        [3, 5, 5],
    );
    let sol = solve_body_force_on(src, 0.0, lat).unwrap();
    let fd = sol.field.wall_derivative(0.0).unwrap();
    let traces = sol.wall_traces(tg).unwrap();
    let du = traces.du.each_ref().map(|c| c.to_physical());
    let scale = du[2].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for j in 0..5 {
        for k in 0..5 {
            let a = tg.node_index(-8.0 * h + j as f64 * 4.0 * h).unwrap();
            let b = tg.node_index(-8.0 * h + k as f64 * 4.0 * h).unwrap();
            let d = fd.velocity[j * 5 + k];
            for c in 0..3 {
                let err = (d[c] - du[c][a * tg.n + b]).abs() / scale;
                assert!(err < 1e-4, "component {c}: {err:.3e}");
            }
        }
    }
}

#[test]
fn body_force_solver_is_linear_and_translation_equivariant() {
    let shape = DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0);
    let grid = ContinuumGrid {
        n_q: 12,
        stride: 1,
        ..Default::default()
    };
    let dir = [0.3, 1.0, -0.2];
    let both = Forcing {
        rho: shape.clone(),
        body: Some(BodyForce {
            density: shape.clone(),
            direction: dir,
            excluded: vec![],
        }),
    };
    let only_f = Forcing {
        rho: DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 0.0),
        body: Some(BodyForce {
            density: shape.clone(),
            direction: dir,
            excluded: vec![],
        }),
    };
    let eps = 0.1;
    let a = solve_body_force(&both, eps, &grid).unwrap().field;
    let b = solve_body_force(&Forcing::sedimenting(shape), eps, &grid)
        .unwrap()
        .field;
    let c = solve_body_force(&only_f, eps, &grid).unwrap().field;
    let sum = b.axpy(1.0, &c).unwrap();
    assert!(max_diff(&a.velocity, &sum.velocity) < 1e-14 * a.max_abs().max(1.0) * 10.0);

    // shift by four cells along x2
    let h = grid.cell_size(&blob());
    let moved = Forcing::sedimenting(DensityField::bump(Vec3::new(1.0, 4.0 * h, 0.0), 0.5, 1.0));
    let region = blob().support().dilate(1.5);
    let l0 = eval_lattice(&region, h, 2);
    let l1 = Lattice {
        origin: [l0.origin[0], l0.origin[1] + 4.0 * h, l0.origin[2]],
        ..l0.clone()
    };
    let s0 = solve_body_force_on(
        SourceLattice::build_with_spacing(&blob(), h).unwrap(),
        0.0,
        l0,
    )
    .unwrap();
    let s1 = solve_body_force_on(
        SourceLattice::build_with_spacing(&moved, h).unwrap(),
        0.0,
        l1,
    )
    .unwrap();
    assert!(max_diff(&s0.field.velocity, &s1.field.velocity) < 1e-12);
}

#[test]
fn discrete_fields_are_divergence_free() {
    let src = SourceLattice::build(&blob(), 12).unwrap();
    let cloud = src.to_cloud();
    for eps in [0.0, 0.1] {
        let u = |x: &Vec3| cloud.velocity(x, eps).unwrap();
        for x in [
            Vec3::new(0.3, 0.2, 0.1),
            Vec3::new(1.03, -0.41, 0.27),
            Vec3::new(1.7, 0.6, -0.5),
        ] {
            let d = divergence4(u, &x, 1e-3);
            assert!(d.abs() < 1e-4, "{d:.3e}");
        }
    }
    // the Dirichlet part of the Navier solution
    let grid = TangentialGrid::new(64, 0.05);
    let du = [0.0, 0.5, -1.0].map(|s| {
        halfwall::spectral::SpectralField::from_fn(grid, move |x, y| {
            s * (-3.0 * (x * x + y * y)).exp()
        })
    });
    let (w, _) = navier_wall_data(&du, 0.05, &NavierOptions::default()).unwrap();
    let u = |x: &Vec3| w.eval_point(x).unwrap().0;
    for x in [Vec3::new(0.05, 0.1, 0.0), Vec3::new(0.3, -0.2, 0.25)] {
        let d = divergence4(u, &x, 1e-3);
        assert!(d.abs() < 1e-4, "{d:.3e}");
    }
}

#[test]
fn navier_problem_converges_quickly_and_satisfies_the_slip_law() {
    let f = blob();
    let grid = ContinuumGrid {
        n_q: 24,
        n_t: 256,
        ..Default::default()
    };
    let opts = NavierOptions::default();
    let sol = solve_navier(&f, 0.05, &grid, &opts).unwrap();
    assert!(sol.iterations <= 5, "{:?}", sol.history);
    assert!(
        sol.boundary_residual <= 1e-8,
        "{:.3e}",
        sol.boundary_residual
    );
    let zero = solve_navier(&f, 0.0, &grid, &opts).unwrap();
    assert_eq!(zero.field.velocity, zero.base.field.velocity);
    assert!(solve_navier(&f, 0.6, &grid, &opts).is_err());
    let traces = sol.base.wall_traces(grid.tangential_grid(&f)).unwrap();
    assert!(slip_residual(&traces, &sol.correction, 0.05) <= 1e-8);
}
