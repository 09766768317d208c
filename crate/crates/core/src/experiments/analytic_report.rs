//! Apparent slip in a channel and intrinsic convection of a homogeneous
//! suspension.

use super::Check;
use crate::analytic::*;
use crate::cascade::{u2_data, AffineField, AffineSolver, CascadeState};
use crate::Result;

pub struct AnalyticReport {
    pub checks: Vec<Check>,
    /// `x1, no-slip u2, slip u2, FD no-slip, FD slip`.
    pub profile: Vec<[f64; 5]>,
}

pub fn exp_analytic() -> Result<AnalyticReport> {
    let n = 1000;
    let dir = channel_fd_solver(&ChannelShearProblem::new(WallCondition::Dirichlet, WallCondition::Dirichlet, n))?;
    let nav = WallCondition::Navier { slip: 1.0 };
    let slip = channel_fd_solver(&ChannelShearProblem::new(nav, nav, n))?;
    let mut profile = Vec::with_capacity(n + 1);
    let (mut e_dir, mut e_nav, mut e_diff) = (0.0_f64, 0.0_f64, 0.0_f64);
    for j in 0..=n {
        let x = j as f64 / n as f64;
        let (a, b) = (poiseuille_dirichlet(x)?[1], poiseuille_navier(x)?[1]);
        e_dir = e_dir.max((dir[j] - a).abs());
        e_nav = e_nav.max((slip[j] - b).abs());
        e_diff = e_diff.max((slip[j] - dir[j] + 0.5).abs());
        profile.push([x, a, b, dir[j], slip[j]]);
    }
    let mut checks = vec![
        Check::at_most(2, "FD no-slip channel vs closed form (h = 1e-3)", e_dir, 1e-8),
        Check::at_most(2, "FD slip channel vs closed form (h = 1e-3)", e_nav, 1e-8),
        Check::at_most(2, "slip minus no-slip is -1/2", e_diff, 1e-8),
        Check::new(2, "apparent slip points downward", poiseuille_navier(0.0)?[1] < 0.0, format!("u2(0) = {}", poiseuille_navier(0.0)?[1])),
    ];

    let base = homogeneous_base();
    let st = CascadeState::<AffineField, AffineSolver>::build(base.clone(), 2, &AffineSolver)?;
    let closed = u2_data(&base, &st.traces(1));
    let want = [AffineField::default(), AffineField::default(), AffineField::constant(0.5)];
    checks.push(Check::new(3, "closed-form u2 wall data is (0, 0, 1/2)", closed == want, format!("({}, {}, {})", closed[0].c + 0.0, closed[1].c + 0.0, closed[2].c + 0.0)));
    let generic = st.traces(2).u;
    let err = (0..3).map(|c| (generic[c].c - want[c].c).abs().max(generic[c].a2.abs()).max(generic[c].a3.abs())).fold(0.0, f64::max);
    checks.push(Check::at_most(3, "generic recursion u2 wall data", err, 1e-6));
    let up = intrinsic_convection_dimless(0.1)?;
    checks.push(Check::new(3, "intrinsic convection points upward", up[2] > 0.0, format!("ε = 0.1: {up:?}")));

    let params = DimensionalParams { radius: 1e-5, rho_p: 2500.0, rho_f: 1000.0, gravity: 9.81, viscosity: 1e-3, eps: 3e-5, phi: 0.05 };
    let d = intrinsic_convection_dimensional(&params)?;
    checks.push(Check::at_most(3, "dimensional forms agree", (d.direct - d.via_settling).abs() / d.direct, 4.0 * f64::EPSILON));
    let at_r = intrinsic_convection_dimensional(&DimensionalParams { eps: params.radius, ..params })?;
    let quoted = 2.25 * params.settling_speed() * params.phi;
    checks.push(Check::at_most(3, "ε = R gives (9/4) V0 φ", (at_r.via_settling - quoted).abs() / quoted, 4.0 * f64::EPSILON));
    Ok(AnalyticReport { checks, profile })
}
