use halfwall::cascade::{
    u1_data, u1_system, u2_data, u2_system, CascadeState, InteriorField, InteriorTraces,
    SpectralSolver,
};
use halfwall::continuum::{solve_body_force, ContinuumGrid, Forcing};
use halfwall::density::DensityField;
use halfwall::spectral::{SpectralField, TangentialGrid};
use halfwall::Vec3;

fn gaussian_base() -> InteriorTraces<SpectralField> {
    let g = TangentialGrid::new(64, 0.125);
    let bump = |a: f64, c2: f64, c3: f64| {
        SpectralField::from_fn(g, move |x, y| {
            a * (-2.0 * ((x - c2).powi(2) + (y - c3).powi(2))).exp()
        })
    };
    InteriorTraces {
        u: [0; 3].map(|_| SpectralField::zeros(g)),
        du: [bump(0.2, 0.1, 0.0), bump(0.7, 0.0, -0.2), bump(-1.1, 0.3, 0.1)],
        p: bump(0.5, -0.2, 0.4),
    }
}

#[test]
fn recursion_identities_hold_through_fourth_order() {
    let st = CascadeState::build(gaussian_base(), 4, &SpectralSolver::default()).unwrap();
    for i in 0..=4 {
        let w = st.wall_value(i);
        assert!(w <= 1e-14, "order {i}: {w:.3e}");
        assert!(st.divergence_exact(i), "order {i}");
        let r = st.stress_residual(i);
        assert!(r <= 1e-8, "order {i}: {r:.3e}");
        for c in 0..3 {
            assert!(st.profiles[i].u[c].degree() <= i + 1);
        }
    }
}

#[test]
fn closed_forms_agree_bitwise_with_the_recursion() {
    let base = gaussian_base();
    let st = CascadeState::build(base.clone(), 2, &SpectralSolver::default()).unwrap();
    let t1 = st.traces(1);
    assert_eq!(t1.u, u1_data(&base));
    assert_eq!(st.traces(2).u, u2_data(&base, &t1));
    let solver = SpectralSolver::default();
    let s1 = u1_system(&base, &solver).unwrap();
    assert_eq!(s1.traces(), t1);
    let s2 = u2_system(&base, &s1.traces(), &solver).unwrap();
    assert_eq!(s2.traces(), st.traces(2));
}

#[test]
fn cascade_on_a_sedimenting_blob() {
    let f = Forcing::sedimenting(DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0));
    let grid = ContinuumGrid {
        n_q: 8,
        n_t: 256,
        ..Default::default()
    };
    let sol = solve_body_force(&f, 0.0, &grid).unwrap();
    let w = sol.wall_traces(grid.tangential_grid(&f)).unwrap();
    let z = SpectralField::zeros(w.p.grid);
    let base = InteriorTraces {
        u: [z.clone(), z.clone(), z],
        du: w.du.clone(),
        p: w.p.clone(),
    };
    let st = CascadeState::build(base, 2, &SpectralSolver::default()).unwrap();
    for i in 1..=2 {
        assert!(st.stress_residual(i) <= 1e-8);
    }
    // u¹ carries the tangential wall shear of u⁰
    let u1 = st.traces(1).u[2].max_abs();
    assert!(u1 > 0.0 && u1 == w.du[2].max_abs());
}
