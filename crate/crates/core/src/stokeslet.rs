//! Velocity field of a single sphere pushed by a force near the wall.
//!
//! The leading term is the wall-corrected point Stokeslet `G(x, y0) F`. The
//! finite-size field adds the potential dipole `(r²/6) ΔΦ(x - y0) F` of a
//! translating sphere, together with its own wall image, so that the free
//! part of the field is the exact Stokes solution of a rigid sphere moving
//! with velocity `F / (6π r)` and the whole field still vanishes on the wall.

use crate::greens::{self, image_point};
use crate::quadrature::{fibonacci_sphere, gauss_legendre_on};
use crate::{Error, Mat3, Result, Vec3};
use nalgebra::{Matrix6, Vector6};
use std::f64::consts::PI;

/// A sphere of radius `radius` centred at `center`, carrying `force`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSource {
    pub center: Vec3,
    pub radius: f64,
    pub force: Vec3,
    pub theta: f64,
}

impl SphereSource {
    pub fn new(center: Vec3, radius: f64, force: Vec3, theta: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Precondition(format!(
                "radius {radius} must be positive"
            )));
        }
        if !(theta > 1.0) {
            return Err(Error::Precondition(format!(
                "safety factor {theta} must exceed 1"
            )));
        }
        if !(center[0] > theta * radius) {
            return Err(Error::Precondition(format!(
                "wall clearance {} not above theta*r = {}",
                center[0],
                theta * radius
            )));
        }
        Ok(Self {
            center,
            radius,
            force,
            theta,
        })
    }

    /// Same sphere with every length divided by `s`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self {
            center: self.center / s,
            radius: self.radius / s,
            ..*self
        }
    }
}

/// Which part of the finite-size field to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPart {
    /// Wall-corrected field.
    Full,
    /// Free-space translating sphere, wall terms dropped.
    FreeSpace,
}

/// Leading point-force term `G(x, y0) F`.
pub fn point_stokeslet(x: &Vec3, src: &SphereSource) -> Result<Vec3> {
    greens::greens_apply(x, &src.center, &src.force)
}

/// Finite-size field outside the sphere.
pub fn finite_sphere_field(x: &Vec3, src: &SphereSource) -> Result<Vec3> {
    outside(x, src)?;
    greens::check_pair(x, &src.center)?;
    Ok(greens::apply_unchecked(x, &src.center, &src.force) + dipole_field(x, src))
}

/// Free-space part only: Stokeslet plus potential dipole.
pub fn free_space_sphere_field(x: &Vec3, src: &SphereSource) -> Result<Vec3> {
    outside(x, src)?;
    let d = x - src.center;
    let free = greens::oseen_tensor(&d)? * src.force;
    Ok(free + potential_dipole(&d, src).0)
}

/// `finite_sphere_field - point_stokeslet`; no wall image of order `r`.
pub fn finite_size_correction(x: &Vec3, src: &SphereSource) -> Result<Vec3> {
    outside(x, src)?;
    greens::check_pair(x, &src.center)?;
    Ok(dipole_field(x, src))
}

fn outside(x: &Vec3, src: &SphereSource) -> Result<()> {
    if (x - src.center).norm() < src.radius {
        return Err(Error::Domain(format!(
            "{x:?} lies inside the sphere at {:?}",
            src.center
        )));
    }
    if x[0] < 0.0 {
        return Err(Error::Domain(format!("{x:?} below the wall")));
    }
    Ok(())
}

/// Contractions of the derivatives of `1/|d|` with `F`:
/// `a_i = F_j ∂_i∂_j`, `b_ik = F_j ∂_i∂_j∂_k`, `c[l]_ik = F_j ∂_i∂_j∂_k∂_l`.
fn inverse_distance_derivatives(d: &Vec3, f: &Vec3, fourth: bool) -> (Vec3, Mat3, [Mat3; 3]) {
    let r2 = d.norm_squared();
    let r = r2.sqrt();
    let r5 = r2 * r2 * r;
    let r7 = r5 * r2;
    let r9 = r7 * r2;
    let df = d.dot(f);
    let a = (d * (3.0 * df) - f * r2) / r5;
    let mut b = Mat3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            let dik = if i == k { 1.0 } else { 0.0 };
            b[(i, k)] =
                -15.0 * d[i] * d[k] * df / r7 + 3.0 * (f[i] * d[k] + dik * df + f[k] * d[i]) / r5;
        }
    }
    let mut c = [Mat3::zeros(); 3];
    if fourth {
        for (l, cl) in c.iter_mut().enumerate() {
            for i in 0..3 {
                for k in 0..3 {
                    let dik = if i == k { 1.0 } else { 0.0 };
                    let dil = if i == l { 1.0 } else { 0.0 };
                    let dkl = if k == l { 1.0 } else { 0.0 };
                    cl[(i, k)] = 105.0 * d[i] * d[k] * d[l] * df / r9
                        - 15.0
                            * (f[i] * d[k] * d[l]
                                + f[k] * d[i] * d[l]
                                + f[l] * d[i] * d[k]
                                + df * (dik * d[l] + dil * d[k] + dkl * d[i]))
                            / r7
                        + 3.0 * (f[i] * dkl + f[k] * dil + f[l] * dik) / r5;
                }
            }
        }
    }
    (a, b, c)
}

/// `(∇ψ, ∇∇ψ)` for `ψ = (r²/24π) d·F/|d|³`.
fn potential_dipole(d: &Vec3, src: &SphereSource) -> (Vec3, Mat3) {
    let c = src.radius * src.radius / (24.0 * PI);
    let (a, b, _) = inverse_distance_derivatives(d, &src.force, false);
    (-a * c, -b * c)
}

const MIRROR: Vec3 = Vec3::new(-1.0, 1.0, 1.0);

/// Wall-corrected dipole: `∇ψ(x) - ∇[ψ(x*)] + x1 ∇χ - e1 χ` with
/// `χ(x) = 2 ∂_1ψ(x*)` and `x*` the mirror point.
fn dipole_field(x: &Vec3, src: &SphereSource) -> Vec3 {
    dipole_field_and_jacobian(x, src, false).0
}

fn dipole_field_and_jacobian(x: &Vec3, src: &SphereSource, with_jac: bool) -> (Vec3, Mat3, Mat3) {
    let c = src.radius * src.radius / (24.0 * PI);
    let d = x - src.center;
    let ds = image_point(x) - src.center;
    let (a, b, _) = inverse_distance_derivatives(&d, &src.force, false);
    let (as_, bs, cs) = inverse_distance_derivatives(&ds, &src.force, with_jac);
    let grad_psi = -a * c;
    let grad_psi_star = -as_ * c;
    let hess_star = -bs * c;
    let chi = 2.0 * grad_psi_star[0];
    // ∂_i χ(x) = 2 s_i (∂_i ∂_1 ψ)(x*)
    let grad_chi = Vec3::from_fn(|i, _| 2.0 * MIRROR[i] * hess_star[(i, 0)]);

    let mut w = grad_psi - grad_psi_star.component_mul(&MIRROR) + grad_chi * x[0];
    w[0] -= chi;
    if !with_jac {
        return (w, Mat3::zeros(), Mat3::zeros());
    }
    let hess = -b * c;
    let mut jac = hess;
    for i in 0..3 {
        for k in 0..3 {
            let third = -c * cs[k][(i, 0)];
            let hess_chi = 2.0 * MIRROR[i] * MIRROR[k] * third;
            let mut v = -MIRROR[i] * MIRROR[k] * hess_star[(i, k)] + x[0] * hess_chi;
            if k == 0 {
                v += grad_chi[i];
            }
            if i == 0 {
                v -= grad_chi[k];
            }
            jac[(i, k)] += v;
        }
    }
    // Jacobian of the dipole's wall part alone, for use inside the sphere.
    let wall = jac - hess;
    (w, jac, wall)
}

/// Velocity gradient `(i, k) = ∂_k u_i` of the finite-size field extended
/// inside the sphere by the rigid translation of its free part.
pub(crate) fn extended_jacobian(x: &Vec3, src: &SphereSource) -> Mat3 {
    let y = &src.center;
    let (_, dip, dip_wall) = dipole_field_and_jacobian(x, src, true);
    if (x - y).norm() < src.radius {
        greens::wall_part_jacobian_unchecked(x, y, &src.force) + dip_wall
    } else {
        let (_, g) = greens::apply_with_jacobian_unchecked(x, y, &src.force);
        g + dip
    }
}

/// Surface deviation of the field from its best-fit rigid motion.
pub fn rigid_deviation(src: &SphereSource, n_samples: usize, part: FieldPart) -> Result<f64> {
    let n_samples = n_samples.max(100);
    let pts = fibonacci_sphere(n_samples);
    // Evaluate a hair outside the surface so the domain check passes.
    let rr = src.radius * (1.0 + 1e-14);
    let mut values = Vec::with_capacity(n_samples);
    for n in &pts {
        let x = src.center + n * rr;
        let u = match part {
            FieldPart::Full => finite_sphere_field(&x, src)?,
            FieldPart::FreeSpace => free_space_sphere_field(&x, src)?,
        };
        values.push((n * src.radius, u));
    }
    let mut ata = Matrix6::<f64>::zeros();
    let mut atb = Vector6::<f64>::zeros();
    for (p, u) in &values {
        let rows = rigid_rows(p);
        for (row, ui) in rows.iter().zip(u.iter()) {
            ata += row * row.transpose();
            atb += row * *ui;
        }
    }
    let sol = ata
        .cholesky()
        .ok_or_else(|| Error::Precondition("degenerate surface sampling".into()))?
        .solve(&atb);
    let mut worst: f64 = 0.0;
    for (p, u) in &values {
        let rows = rigid_rows(p);
        let fit = Vec3::from_fn(|i, _| rows[i].dot(&sol));
        worst = worst.max((u - fit).norm());
    }
    Ok(worst)
}

/// Rows of `(U, ω) -> U + ω × p`.
fn rigid_rows(p: &Vec3) -> [Vector6<f64>; 3] {
    [
        Vector6::new(1.0, 0.0, 0.0, 0.0, p[2], -p[1]),
        Vector6::new(0.0, 1.0, 0.0, -p[2], 0.0, p[0]),
        Vector6::new(0.0, 0.0, 1.0, p[1], -p[0], 0.0),
    ]
}

/// Dirichlet energy `‖∇u‖²` and `2‖Du‖²` of the extended field over the
/// whole half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyIntegrals {
    pub gradient_sq: f64,
    pub twice_strain_sq: f64,
}

/// Evaluates both energies with a product rule in spherical coordinates
/// about the centre (polar axis normal to the wall), splitting the radial
/// integral at the sphere surface and mapping `t = r/s` beyond it.
pub fn energy_integrals(src: &SphereSource, n: usize) -> EnergyIntegrals {
    let y = src.center;
    let r = src.radius;
    let n_phi = 2 * n;
    let inner = gauss_legendre_on(n, 0.0, r);
    let mut grad_sq = 0.0;
    let mut strain_sq = 0.0;
    for &(lo, hi) in &[(-1.0, 0.0), (0.0, 1.0)] {
        for (mu, wmu) in gauss_legendre_on(n, lo, hi) {
            let sin = (1.0 - mu * mu).sqrt();
            let s_min = if mu < 0.0 { -r * mu / y[0] } else { 0.0 };
            let outer = gauss_legendre_on(2 * n, s_min, 1.0);
            for j in 0..n_phi {
                let phi = 2.0 * PI * (j as f64 + 0.5) / n_phi as f64;
                let dir = Vec3::new(mu, sin * phi.cos(), sin * phi.sin());
                let w_ang = wmu * 2.0 * PI / n_phi as f64;
                let mut acc = |t: f64, wt: f64| {
                    let jac = extended_jacobian(&(y + dir * t), src);
                    let sym = (jac + jac.transpose()) * 0.5;
                    let w = w_ang * wt * t * t;
                    grad_sq += w * jac.norm_squared();
                    strain_sq += w * sym.norm_squared();
                };
                for &(t, wt) in &inner {
                    acc(t, wt);
                }
                for &(s, ws) in &outer {
                    acc(r / s, ws * r / (s * s));
                }
            }
        }
    }
    EnergyIntegrals {
        gradient_sq: grad_sq,
        twice_strain_sq: 2.0 * strain_sq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn source(r: f64) -> SphereSource {
        SphereSource::new(
            Vec3::new(1.0, 0.2, -0.1),
            r,
            Vec3::new(0.3, -0.4, -1.0),
            1.5,
        )
        .unwrap()
    }

    fn random_outside(rng: &mut ChaCha8Rng, src: &SphereSource) -> Vec3 {
        loop {
            let x = Vec3::new(
                rng.gen_range(0.0..3.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            if (x - src.center).norm() >= src.theta * src.radius {
                return x;
            }
        }
    }

    #[test]
    fn construction_checks() {
        let c = Vec3::new(0.1, 0.0, 0.0);
        assert!(SphereSource::new(c, 0.1, Vec3::zeros(), 1.5).is_err());
        assert!(SphereSource::new(c, 0.05, Vec3::zeros(), 1.0).is_err());
        assert!(SphereSource::new(c, 0.05, Vec3::zeros(), 1.5).is_ok());
    }

    #[test]
    fn point_term_basic() {
        let src = source(0.1);
        let on_wall = Vec3::new(0.0, 0.5, 0.3);
        assert!(point_stokeslet(&on_wall, &src).unwrap().amax() < 1e-12);
        let zero = SphereSource {
            force: Vec3::zeros(),
            ..src
        };
        assert_eq!(
            point_stokeslet(&Vec3::new(2.0, 0.0, 0.0), &zero).unwrap(),
            Vec3::zeros()
        );
        let x = Vec3::new(0.4, 0.5, 0.3);
        let direct = greens::greens(&x, &src.center).unwrap() * src.force;
        assert!((point_stokeslet(&x, &src).unwrap() - direct).norm() < 1e-15);
    }

    #[test]
    fn vanishes_on_wall() {
        let src = source(0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = Vec3::new(0.0, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            assert!(finite_sphere_field(&x, &src).unwrap().amax() <= 1e-12);
        }
    }

    #[test]
    fn rejects_points_inside() {
        let src = source(0.2);
        let x = src.center + Vec3::new(0.1, 0.0, 0.0);
        assert!(matches!(
            finite_sphere_field(&x, &src),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn free_part_is_rigid_on_surface() {
        let src = source(0.25);
        let target = src.force / (6.0 * PI * src.radius);
        for n in fibonacci_sphere(200) {
            let x = src.center + n * (src.radius * (1.0 + 1e-14));
            let u = free_space_sphere_field(&x, &src).unwrap();
            assert!(
                (u - target).norm() <= 1e-13 * target.norm(),
                "{u} vs {target}"
            );
        }
        assert!(rigid_deviation(&src, 200, FieldPart::FreeSpace).unwrap() <= 1e-12);
    }

    #[test]
    fn scaling_identity() {
        let src = source(0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let x = random_outside(&mut rng, &src);
            let u = finite_sphere_field(&x, &src).unwrap();
            let scaled = src.rescaled(src.radius);
            let v = finite_sphere_field(&(x / src.radius), &scaled).unwrap() / src.radius;
            assert!((u - v).norm() <= 1e-13 * u.norm());
        }
    }

    #[test]
    fn correction_decay_ratio_bounded() {
        let src = source(0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for _ in 0..2000 {
            let x = random_outside(&mut rng, &src);
            let diff = finite_sphere_field(&x, &src).unwrap() - point_stokeslet(&x, &src).unwrap();
            let d = (x - src.center).norm();
            worst = worst.max(diff.norm() * d * d / (src.radius * src.force.norm()));
        }
        assert!(worst < 1.0, "{worst}");
    }

    #[test]
    fn correction_is_quadratic_in_radius() {
        let x = Vec3::new(0.5, 0.9, 0.4);
        let a = finite_size_correction(&x, &source(0.2)).unwrap().norm();
        let b = finite_size_correction(&x, &source(0.1)).unwrap().norm();
        assert!((a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn linear_in_force() {
        let a = source(0.2);
        let b = SphereSource {
            force: Vec3::new(1.0, 0.5, 0.0),
            ..a
        };
        let sum = SphereSource {
            force: a.force * 2.0 + b.force,
            ..a
        };
        let x = Vec3::new(0.7, -0.3, 0.8);
        let lhs = finite_sphere_field(&x, &sum).unwrap();
        let rhs = finite_sphere_field(&x, &a).unwrap() * 2.0 + finite_sphere_field(&x, &b).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn dipole_jacobian_matches_finite_differences() {
        let src = source(0.3);
        let h = 1e-5;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let x = random_outside(&mut rng, &src) + Vec3::new(0.01, 0.0, 0.0);
            let jac = extended_jacobian(&x, &src);
            for k in 0..3 {
                let e = Vec3::ith(k, h);
                let fd = (finite_sphere_field(&(x + e), &src).unwrap()
                    - finite_sphere_field(&(x - e), &src).unwrap())
                    / (2.0 * h);
                assert!((jac.column(k) - fd).norm() <= 1e-6 * jac.norm().max(1e-3));
            }
        }
    }

    #[test]
    fn dipole_image_is_divergence_free() {
        let src = source(0.3);
        let x = Vec3::new(0.4, 0.1, 0.5);
        let div = crate::quadrature::divergence4(|p| dipole_field(p, &src), &x, 1e-3);
        assert!(div.abs() < 1e-8);
        assert!(extended_jacobian(&x, &src).trace().abs() < 1e-12);
    }

    #[test]
    fn rigid_deviation_is_linear_in_radius() {
        let big = rigid_deviation(&source(0.2), 200, FieldPart::Full).unwrap();
        let small = rigid_deviation(&source(0.1), 200, FieldPart::Full).unwrap();
        let ratio = big / small;
        assert!((ratio - 2.0).abs() <= 0.4, "{ratio}");
    }

    #[test]
    fn rigid_deviation_drops_with_clearance() {
        let near = source(0.1);
        let far = SphereSource {
            center: Vec3::new(4.0, 0.2, -0.1),
            ..near
        };
        let a = rigid_deviation(&near, 150, FieldPart::Full).unwrap();
        let b = rigid_deviation(&far, 150, FieldPart::Full).unwrap();
        assert!(b < a);
    }

    #[test]
    fn energy_identity_for_extended_field() {
        let src = SphereSource::new(
            Vec3::new(0.6, 0.0, 0.0),
            0.2,
            Vec3::new(0.2, 0.0, -1.0),
            1.5,
        )
        .unwrap();
        let e = energy_integrals(&src, 24);
        let rel = (e.gradient_sq - e.twice_strain_sq).abs() / e.gradient_sq;
        assert!(rel <= 1e-2, "{e:?}");
        // the jump of ∇u across the surface carries the sphere's drag
        assert!(e.gradient_sq > 0.0);
    }
}
