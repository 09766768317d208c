//! Browser bindings for a few halfwall operations.

use halfwall::analytic::{
    channel_fd_solver, intrinsic_convection_dimensional, poiseuille_dirichlet, poiseuille_navier,
    ChannelShearProblem, DimensionalParams, WallCondition,
};
use halfwall::{greens, Vec3};
use wasm_bindgen::prelude::*;

fn js(e: halfwall::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Row-major entries of `G(x, y)`.
#[wasm_bindgen]
pub fn greens_eval(x1: f64, x2: f64, x3: f64, y1: f64, y2: f64, y3: f64) -> Result<Vec<f64>, JsError> {
    let g = greens::greens(&Vec3::new(x1, x2, x3), &Vec3::new(y1, y2, y3)).map_err(js)?;
    Ok((0..9).map(|k| g[(k / 3, k % 3)]).collect())
}

/// Channel profiles at `n + 1` nodes, flattened as rows
/// `x1, no-slip, slip, FD no-slip, FD with slip length `slip``.
#[wasm_bindgen]
pub fn channel_profiles(n: usize, slip: f64) -> Result<Vec<f64>, JsError> {
    let dir = channel_fd_solver(&ChannelShearProblem::new(WallCondition::Dirichlet, WallCondition::Dirichlet, n)).map_err(js)?;
    let nav = WallCondition::Navier { slip };
    let fd_slip = channel_fd_solver(&ChannelShearProblem::new(nav, nav, n)).map_err(js)?;
    let mut out = Vec::with_capacity(5 * (n + 1));
    for j in 0..=n {
        let x = j as f64 / n as f64;
        out.extend([x, poiseuille_dirichlet(x).map_err(js)?[1], poiseuille_navier(x).map_err(js)?[1], dir[j], fd_slip[j]]);
    }
    Ok(out)
}

/// Upward wall velocity of a homogeneous suspension in SI units, as
/// `[direct, via settling speed, settling speed]`.
#[wasm_bindgen]
pub fn intrinsic_convection(radius: f64, rho_p: f64, rho_f: f64, gravity: f64, viscosity: f64, eps: f64, phi: f64) -> Result<Vec<f64>, JsError> {
    let p = DimensionalParams { radius, rho_p, rho_f, gravity, viscosity, eps, phi };
    let d = intrinsic_convection_dimensional(&p).map_err(js)?;
    Ok(vec![d.direct, d.via_settling, p.settling_speed()])
}
