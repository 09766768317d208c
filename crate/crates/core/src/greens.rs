//! Free-space Oseen tensor and the Green's function of the Stokes system in
//! the half-space `x1 > 0` with a no-slip wall at `x1 = 0`.
//!
//! The wall-corrected kernel is the free-space Stokeslet, minus its mirror
//! image carrying the reflected force, minus a Papkovich-Neuber field
//! `x1 grad(phi) - e1 phi` built on a harmonic potential `phi` (a charge and
//! a dipole located at the image point). All derivatives are expanded in
//! closed form.
//!
//! Sign conventions: with `u = G(., y) F` and pressure `q`, the pair solves
//! `-Δu + ∇q = F δ_y`, so the traction `σ(u, q) n` integrated over a small
//! sphere around `y` (outward normal) equals `-F`.

use crate::{Error, Mat3, Result, Vec3};
use std::f64::consts::PI;

const INV_8PI: f64 = 1.0 / (8.0 * PI);
const INV_4PI: f64 = 1.0 / (4.0 * PI);

/// Relative radius of the excluded ball around the source point.
pub const SINGULAR_GUARD: f64 = 1e-8;

/// Diagonal of the reflection `F -> F^I`.
const MIRROR: [f64; 3] = [-1.0, 1.0, 1.0];

pub fn image_point(y: &Vec3) -> Vec3 {
    Vec3::new(-y[0], y[1], y[2])
}

pub fn reflect_vector(f: &Vec3) -> Vec3 {
    Vec3::new(-f[0], f[1], f[2])
}

fn nonzero(x: &Vec3, what: &str) -> Result<f64> {
    let r = x.norm();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Singularity(format!("{what} evaluated at |x| = {r}")));
    }
    Ok(r)
}

/// `Φ(x) = (I/|x| + x⊗x/|x|³) / 8π`.
pub fn oseen_tensor(x: &Vec3) -> Result<Mat3> {
    let r = nonzero(x, "Oseen tensor")?;
    Ok(oseen_unchecked(x, r))
}

fn oseen_unchecked(x: &Vec3, r: f64) -> Mat3 {
    let r3 = r * r * r;
    (Mat3::identity() / r + x * x.transpose() / r3) * INV_8PI
}

/// Pressure vector of the free-space Stokeslet, `x / (4π|x|³)`.
pub fn oseen_pressure(x: &Vec3) -> Result<Vec3> {
    let r = nonzero(x, "Oseen pressure")?;
    Ok(x * (INV_4PI / (r * r * r)))
}

/// Validates a target/source pair for the half-space kernels.
pub fn check_pair(x: &Vec3, y: &Vec3) -> Result<()> {
    if !(y[0] > 0.0) {
        return Err(Error::Domain(format!(
            "source {y:?} not strictly inside x1 > 0"
        )));
    }
    if x[0] < 0.0 {
        return Err(Error::Domain(format!("target {x:?} below the wall")));
    }
    let gap = (x - y).norm();
    if gap < SINGULAR_GUARD * y.norm().max(1.0) {
        return Err(Error::Singularity(format!(
            "target {x:?} within {gap:e} of source {y:?}"
        )));
    }
    Ok(())
}

/// Harmonic potential of the Papkovich-Neuber correction for force `f`:
/// `φ = ( -f1/|z| + y1 (z·f^I)/|z|³ ) / 4π`, `z = x - y^I`.
pub fn harmonic_potential(x: &Vec3, y: &Vec3, f: &Vec3) -> Result<f64> {
    let z = x - image_point(y);
    let rho = nonzero(&z, "harmonic potential")?;
    let fi = reflect_vector(f);
    Ok(INV_4PI * (-f[0] / rho + y[0] * z.dot(&fi) / (rho * rho * rho)))
}

/// Closed-form gradient (in `x`) of [`harmonic_potential`].
pub fn harmonic_potential_gradient(x: &Vec3, y: &Vec3, f: &Vec3) -> Result<Vec3> {
    let z = x - image_point(y);
    let rho = nonzero(&z, "harmonic potential")?;
    let fi = reflect_vector(f);
    Ok(potential_gradient(&z, rho, y[0], f[0], &fi))
}

#[inline]
fn potential_gradient(z: &Vec3, rho: f64, y1: f64, f1: f64, fi: &Vec3) -> Vec3 {
    let r2 = rho * rho;
    let r3 = r2 * rho;
    let r5 = r3 * r2;
    let zf = z.dot(fi);
    (z * (f1 / r3) + (fi / r3 - z * (3.0 * zf / r5)) * y1) * INV_4PI
}

/// Hessian `∂_k ∂_i φ`, symmetric; entry `(i, k)`.
#[inline]
fn potential_hessian(z: &Vec3, rho: f64, y1: f64, f1: f64, fi: &Vec3) -> Mat3 {
    let r2 = rho * rho;
    let r3 = r2 * rho;
    let r5 = r3 * r2;
    let r7 = r5 * r2;
    let zf = z.dot(fi);
    let mut h = Mat3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            let dik = if i == k { 1.0 } else { 0.0 };
            let charge = f1 * (dik / r3 - 3.0 * z[i] * z[k] / r5);
            let dipole =
                -3.0 * (fi[i] * z[k] + fi[k] * z[i] + dik * zf) / r5 + 15.0 * z[i] * z[k] * zf / r7;
            h[(i, k)] = INV_4PI * (charge + y1 * dipole);
        }
    }
    h
}

/// Papkovich-Neuber correction matrix `A(x, y)`, column `j` being
/// `x1 ∇φ_j - e1 φ_j` for the unit force `e_j`.
pub fn blake_correction(x: &Vec3, y: &Vec3) -> Result<Mat3> {
    let z = x - image_point(y);
    let rho = nonzero(&z, "Blake correction")?;
    let mut a = Mat3::zeros();
    for j in 0..3 {
        let f = Vec3::ith(j, 1.0);
        let fi = reflect_vector(&f);
        let phi = INV_4PI * (-f[0] / rho + y[0] * z.dot(&fi) / (rho * rho * rho));
        let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
        let mut col = grad * x[0];
        col[0] -= phi;
        a.set_column(j, &col);
    }
    Ok(a)
}

/// Wall-corrected Green's function `G(x, y) = Φ(x-y) - Φ(x-y^I) J - A(x, y)`
/// with `J = diag(-1, 1, 1)` the force reflection.
pub fn greens(x: &Vec3, y: &Vec3) -> Result<Mat3> {
    check_pair(x, y)?;
    let mut g = Mat3::zeros();
    for j in 0..3 {
        g.set_column(j, &apply_unchecked(x, y, &Vec3::ith(j, 1.0)));
    }
    Ok(g)
}

/// `G(x, y) F` without forming the matrix.
pub fn greens_apply(x: &Vec3, y: &Vec3, f: &Vec3) -> Result<Vec3> {
    check_pair(x, y)?;
    Ok(apply_unchecked(x, y, f))
}

/// Pressure companion of `G(·, y) F`:
/// `Q(x-y)·F - Q(x-y^I)·F^I - 2 ∂_1 φ_F`.
pub fn greens_pressure(x: &Vec3, y: &Vec3, f: &Vec3) -> Result<f64> {
    check_pair(x, y)?;
    Ok(pressure_unchecked(x, y, f))
}

/// `grad[k][(i, j)] = ∂_{x_k} G_ij(x, y)`.
pub fn greens_gradient(x: &Vec3, y: &Vec3) -> Result<[Mat3; 3]> {
    check_pair(x, y)?;
    let mut out = [Mat3::zeros(); 3];
    for j in 0..3 {
        let (_, jac) = apply_with_jacobian_unchecked(x, y, &Vec3::ith(j, 1.0));
        for (k, m) in out.iter_mut().enumerate() {
            for i in 0..3 {
                m[(i, j)] = jac[(i, k)];
            }
        }
    }
    Ok(out)
}

/// `grad[k][(i, j)] = ∂_{y_k} G_ij(x, y)`.
pub fn greens_gradient_y(x: &Vec3, y: &Vec3) -> Result<[Mat3; 3]> {
    check_pair(x, y)?;
    let mut out = [Mat3::zeros(); 3];
    for j in 0..3 {
        let jac = source_jacobian_unchecked(x, y, &Vec3::ith(j, 1.0));
        for (k, m) in out.iter_mut().enumerate() {
            for i in 0..3 {
                m[(i, j)] = jac[(i, k)];
            }
        }
    }
    Ok(out)
}

#[inline]
fn stokeslet(d: &Vec3, r: f64, f: &Vec3) -> Vec3 {
    let r3 = r * r * r;
    (f / r + d * (d.dot(f) / r3)) * INV_8PI
}

/// Jacobian `(i, k) = ∂_k [Φ(d) f]_i`.
#[inline]
fn stokeslet_jacobian(d: &Vec3, r: f64, f: &Vec3) -> Mat3 {
    let r3 = r * r * r;
    let r5 = r3 * r * r;
    let df = d.dot(f);
    let mut m = Mat3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            let dik = if i == k { 1.0 } else { 0.0 };
            m[(i, k)] = INV_8PI
                * ((-f[i] * d[k] + dik * df + d[i] * f[k]) / r3 - 3.0 * d[i] * df * d[k] / r5);
        }
    }
    m
}

/// `G(x, y) f`; caller guarantees a valid pair.
#[inline]
pub(crate) fn apply_unchecked(x: &Vec3, y: &Vec3, f: &Vec3) -> Vec3 {
    let d = x - y;
    let r = d.norm();
    let z = x - image_point(y);
    let rho = z.norm();
    let fi = reflect_vector(f);
    let phi = INV_4PI * (-f[0] / rho + y[0] * z.dot(&fi) / (rho * rho * rho));
    let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
    let mut u = stokeslet(&d, r, f) - stokeslet(&z, rho, &fi) - grad * x[0];
    u[0] += phi;
    u
}

#[inline]
pub(crate) fn pressure_unchecked(x: &Vec3, y: &Vec3, f: &Vec3) -> f64 {
    let d = x - y;
    let r = d.norm();
    let z = x - image_point(y);
    let rho = z.norm();
    let fi = reflect_vector(f);
    let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
    INV_4PI * (d.dot(f) / (r * r * r) - z.dot(&fi) / (rho * rho * rho)) - 2.0 * grad[0]
}

/// `(G f, q)` sharing the common subexpressions.
#[inline]
pub(crate) fn velocity_pressure_unchecked(x: &Vec3, y: &Vec3, f: &Vec3) -> (Vec3, f64) {
    let d = x - y;
    let r = d.norm();
    let z = x - image_point(y);
    let rho = z.norm();
    let fi = reflect_vector(f);
    let phi = INV_4PI * (-f[0] / rho + y[0] * z.dot(&fi) / (rho * rho * rho));
    let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
    let mut u = stokeslet(&d, r, f) - stokeslet(&z, rho, &fi) - grad * x[0];
    u[0] += phi;
    let q = INV_4PI * (d.dot(f) / (r * r * r) - z.dot(&fi) / (rho * rho * rho)) - 2.0 * grad[0];
    (u, q)
}

/// `(G f, J)` with `J(i, k) = ∂_{x_k} (G f)_i`.
#[inline]
pub(crate) fn apply_with_jacobian_unchecked(x: &Vec3, y: &Vec3, f: &Vec3) -> (Vec3, Mat3) {
    let d = x - y;
    let r = d.norm();
    let z = x - image_point(y);
    let rho = z.norm();
    let fi = reflect_vector(f);
    let phi = INV_4PI * (-f[0] / rho + y[0] * z.dot(&fi) / (rho * rho * rho));
    let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
    let hess = potential_hessian(&z, rho, y[0], f[0], &fi);

    let mut u = stokeslet(&d, r, f) - stokeslet(&z, rho, &fi) - grad * x[0];
    u[0] += phi;

    let mut jac = stokeslet_jacobian(&d, r, f) - stokeslet_jacobian(&z, rho, &fi) - hess * x[0];
    for i in 0..3 {
        jac[(i, 0)] -= grad[i];
    }
    for k in 0..3 {
        jac[(0, k)] += grad[k];
    }
    (u, jac)
}

/// Jacobian of the wall-induced part `(G - Φ(x - y)) f`, smooth near `y`.
pub(crate) fn wall_part_jacobian_unchecked(x: &Vec3, y: &Vec3, f: &Vec3) -> Mat3 {
    let z = x - image_point(y);
    let rho = z.norm();
    let fi = reflect_vector(f);
    let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
    let hess = potential_hessian(&z, rho, y[0], f[0], &fi);
    let mut jac = -stokeslet_jacobian(&z, rho, &fi) - hess * x[0];
    for i in 0..3 {
        jac[(i, 0)] -= grad[i];
    }
    for k in 0..3 {
        jac[(0, k)] += grad[k];
    }
    jac
}

/// `J(i, k) = ∂_{y_k} (G(x, y) f)_i`.
pub(crate) fn source_jacobian_unchecked(x: &Vec3, y: &Vec3, f: &Vec3) -> Mat3 {
    let d = x - y;
    let r = d.norm();
    let z = x - image_point(y);
    let rho = z.norm();
    let fi = reflect_vector(f);
    let r3 = rho * rho * rho;
    let r5 = r3 * rho * rho;
    let zf = z.dot(&fi);
    let grad = potential_gradient(&z, rho, y[0], f[0], &fi);
    let hess = potential_hessian(&z, rho, y[0], f[0], &fi);
    // Explicit y1 dependence of φ and ∇φ (the dipole strength).
    let dphi_dy1 = INV_4PI * zf / r3;
    let dgrad_dy1 = (fi / r3 - z * (3.0 * zf / r5)) * INV_4PI;

    let direct = stokeslet_jacobian(&d, r, f);
    let image = stokeslet_jacobian(&z, rho, &fi);
    let mut jac = Mat3::zeros();
    for k in 0..3 {
        let s = MIRROR[k];
        let dphi = -s * grad[k] + if k == 0 { dphi_dy1 } else { 0.0 };
        for i in 0..3 {
            let dgrad_i = -s * hess[(i, k)] + if k == 0 { dgrad_dy1[i] } else { 0.0 };
            let mut v = -direct[(i, k)] + s * image[(i, k)] - x[0] * dgrad_i;
            if i == 0 {
                v += dphi;
            }
            jac[(i, k)] = v;
        }
    }
    jac
}

/// `∂_{x1} (G f)` and pressure at once; used for wall traces.
#[inline]
pub(crate) fn normal_derivative_and_pressure_unchecked(
    x: &Vec3,
    y: &Vec3,
    f: &Vec3,
) -> (Vec3, f64) {
    let (_, jac) = apply_with_jacobian_unchecked(x, y, f);
    (jac.column(0).into_owned(), pressure_unchecked(x, y, f))
}
