//! Quadrature rules and finite-difference stencils shared by the solvers
//! and their verification routines.

use crate::Vec3;
use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut t = ((4 * i + 3) as f64 * PI / (4 * n + 2) as f64).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        x[i] = t;
        x[n - 1 - i] = -t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    x.iter()
        .zip(&w)
        .map(|(&t, &wt)| (a + half * (t + 1.0), wt * half))
        .collect()
}

/// Product rule on the unit sphere: Gauss-Legendre in `cos θ`, trapezoid in
/// azimuth. Exact for spherical harmonics of degree `< min(2 n_theta, n_phi)`.
pub fn sphere_rule(n_theta: usize, n_phi: usize) -> Vec<(Vec3, f64)> {
    let (c, w) = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for (&ct, &wt) in c.iter().zip(&w) {
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        for j in 0..n_phi {
            let phi = (j as f64 + 0.5) * dphi;
            out.push((Vec3::new(st * phi.cos(), st * phi.sin(), ct), wt * dphi));
        }
    }
    out
}

/// Near-uniform spiral point set on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            Vec3::new(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

/// Composite trapezoid weights for `n` equispaced nodes of spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n == 1 {
        w[0] = h;
    } else {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    w
}

/// Fourth-order central first derivative of `f` along `dir`.
pub fn d1_central4(f: impl Fn(&Vec3) -> f64, x: &Vec3, dir: &Vec3, h: f64) -> f64 {
    let at = |t: f64| f(&(x + dir * t));
    (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h)
}

/// Fourth-order central second derivative along a coordinate axis.
pub fn d2_central4(f: impl Fn(&Vec3) -> f64, x: &Vec3, axis: usize, h: f64) -> f64 {
    let e = Vec3::ith(axis, 1.0);
    let at = |t: f64| f(&(x + e * t));
    (-(at(2.0 * h) + at(-2.0 * h)) + 16.0 * (at(h) + at(-h)) - 30.0 * at(0.0)) / (12.0 * h * h)
}

/// Fourth-order divergence of a vector field.
pub fn divergence4(f: impl Fn(&Vec3) -> Vec3, x: &Vec3, h: f64) -> f64 {
    (0..3)
        .map(|k| d1_central4(|p| f(p)[k], x, &Vec3::ith(k, 1.0), h))
        .sum()
}

/// Fourth-order vector Laplacian.
pub fn laplacian4(f: impl Fn(&Vec3) -> Vec3, x: &Vec3, h: f64) -> Vec3 {
    let mut out = Vec3::zeros();
    for i in 0..3 {
        out[i] = (0..3).map(|k| d2_central4(|p| f(p)[i], x, k, h)).sum();
    }
    out
}

/// Fourth-order gradient of a scalar field.
pub fn gradient4(f: impl Fn(&Vec3) -> f64, x: &Vec3, h: f64) -> Vec3 {
    Vec3::from_fn(|k, _| d1_central4(&f, x, &Vec3::ith(k, 1.0), h))
}
