//! Exactness checks of the half-space Green's function.

use super::Check;
use crate::greens::{self, apply_unchecked, apply_with_jacobian_unchecked, pressure_unchecked};
use crate::quadrature::{divergence4, gradient4, laplacian4, sphere_rule};
use crate::{Mat3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pair(rng: &mut ChaCha8Rng) -> (Vec3, Vec3) {
    loop {
        let x = Vec3::new(rng.gen_range(0.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let y = Vec3::new(rng.gen_range(0.05..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if (x - y).norm() > 0.05 {
            return (x, y);
        }
    }
}

/// Largest `|G(x, y)|` over random `x` on the wall.
pub fn wall_trace(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = Vec3::new(0.0, rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let y = Vec3::new(rng.gen_range(0.01..4.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            greens::greens(&x, &y).map(|g| g.amax()).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

/// Largest relative `|G(x, y) - G(x/r, y/r)/r|`.
pub fn scaling(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for &r in &[0.5, 2.0, 10.0] {
        for _ in 0..n {
            let (x, y) = random_pair(&mut rng);
            let g = greens::greens(&x, &y).unwrap_or(Mat3::repeat(f64::NAN));
            let gs = greens::greens(&(x / r), &(y / r)).unwrap_or(Mat3::repeat(f64::NAN)) / r;
            let e = (g - gs).norm() / g.norm();
            worst = if e.is_nan() { f64::INFINITY } else { worst.max(e) };
        }
    }
    worst
}

/// Largest fourth-order finite-difference divergence of a column of `G`.
pub fn divergence(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let (x, y) = random_pair(&mut rng);
        let h = 1e-3 * (x - y).norm();
        let x = x + Vec3::new(3.0 * h, 0.0, 0.0);
        for j in 0..3 {
            let f = Vec3::ith(j, 1.0);
            worst = worst.max(divergence4(|p| apply_unchecked(p, &y, &f), &x, h).abs());
        }
    }
    worst
}

/// Largest `|-Δ(GF) + ∇q|` with finite differences away from the source.
pub fn momentum(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-3;
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let (x, y) = random_pair(&mut rng);
        let x = x + Vec3::new(0.1, 0.0, 0.0);
        let f = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let lap = laplacian4(|p| apply_unchecked(p, &y, &f), &x, h);
        let gp = gradient4(|p| pressure_unchecked(p, &y, &f), &x, h);
        worst = worst.max((-lap + gp).norm());
    }
    worst
}

/// Relative `|∫ σ n + F|` over a sphere around the source.
pub fn net_traction() -> f64 {
    let y = Vec3::new(0.8, 0.3, -0.4);
    let f = Vec3::new(0.5, -1.0, 2.0);
    let r = y[0] / 2.0;
    let mut total = Vec3::zeros();
    for (n, w) in sphere_rule(24, 48) {
        let x = y + n * r;
        let (_, jac) = apply_with_jacobian_unchecked(&x, &y, &f);
        let q = pressure_unchecked(&x, &y, &f);
        let sigma = jac + jac.transpose() - Mat3::identity() * q;
        total += sigma * n * (w * r * r);
    }
    (total + f).norm() / f.norm()
}

pub fn checks(seed: u64) -> Vec<Check> {
    vec![
        Check::at_most(1, "wall trace of G at 1000 random pairs", wall_trace(1000, seed), 1e-12),
        Check::at_most(1, "scaling identity", scaling(100, seed + 1), 1e-13),
        Check::at_most(1, "finite-difference divergence", divergence(50, seed + 2), 1e-6),
        Check::at_most(1, "momentum residual with pressure", momentum(50, seed + 3), 1e-4),
        Check::at_most(1, "net traction recovers -F", net_traction(), 1e-3),
    ]
}
