//! Plane-by-plane FFT evaluation of sums `Σ_j K(x, y_j) F_j` over a
//! source lattice, for targets on tangential node windows.
//!
//! The half-space kernels are translation invariant along the wall, so for
//! a fixed target height `x1` and source height `y1` the tangential sum is
//! a discrete 2D convolution. Targets sit at integer multiples of `h`
//! tangentially, sources at half-integer multiples, so no target ever
//! coincides with a source.

use super::sources::SourceLattice;
use crate::{fft2, par_for_each_mut, Vec3};
use rustfft::num_complex::Complex64;

/// Smallest `2^a 3^b 5^c` not below `n`.
pub(crate) fn fft_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Tangential target window: `shape[a]` nodes starting at `start[a] * h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Window {
    pub start: [i64; 2],
    pub shape: [usize; 2],
}

/// Evaluates the `C` kernel outputs at every node of `window` on each of
/// the target `heights`. `kernel(x, y, f)` receives the wall-frame points
/// (already shifted by `eps`) and a unit force.
///
/// Returns `[plane][node]` with nodes row-major over `(x2, x3)`.
pub(crate) fn plane_sums<const C: usize, K>(
    src: &SourceLattice,
    eps: f64,
    heights: &[f64],
    window: Window,
    kernel: K,
) -> Vec<Vec<[f64; C]>>
where
    K: Fn(&Vec3, &Vec3, &Vec3) -> [f64; C] + Sync + Send,
{
    let h = src.h;
    let ns = [src.dims[1], src.dims[2]];
    let ne = window.shape;
    let nk = [ne[0] + ns[0] - 1, ne[1] + ns[1] - 1];
    let len = [fft_len(nk[0]), fft_len(nk[1])];
    let plan = fft2::plan(len[0], len[1]);
    let zero = Complex64::new(0.0, 0.0);
    let size = len[0] * len[1];
    // tangential component of x - y for kernel sample t, in units of h
    let offset = [
        (window.start[0] - src.corner[1] - (ns[0] as i64 - 1)) as f64 - 0.5,
        (window.start[1] - src.corner[2] - (ns[1] as i64 - 1)) as f64 - 0.5,
    ];

    let mut acc: Vec<Vec<Vec<Complex64>>> = vec![vec![vec![zero; size]; C]; heights.len()];
    let plane_len = ns[0] * ns[1];
    for iy in 0..src.dims[0] {
        let y1 = (src.corner[0] as f64 + iy as f64 + 0.5) * h;
        let ys = Vec3::new(y1 + eps, 0.0, 0.0);
        let forces = &src.forces[iy * plane_len..(iy + 1) * plane_len];
        for c in 0..3 {
            if forces.iter().all(|f| f[c] == 0.0) {
                continue;
            }
            let mut s_hat = vec![zero; size];
            for a in 0..ns[0] {
                for b in 0..ns[1] {
                    s_hat[a * len[1] + b] = Complex64::new(forces[a * ns[1] + b][c], 0.0);
                }
            }
            plan.forward(&mut s_hat);
            let mut unit = Vec3::zeros();
            unit[c] = 1.0;
            par_for_each_mut(&mut acc, |ip, out| {
                let xs1 = heights[ip] + eps;
                let mut kers: Vec<Vec<Complex64>> = vec![vec![zero; size]; C];
                for t0 in 0..nk[0] {
                    let d2 = (offset[0] + t0 as f64) * h;
                    for t1 in 0..nk[1] {
                        let d3 = (offset[1] + t1 as f64) * h;
                        let v = kernel(&Vec3::new(xs1, d2, d3), &ys, &unit);
                        for (k, val) in kers.iter_mut().zip(v) {
                            k[t0 * len[1] + t1] = Complex64::new(val, 0.0);
                        }
                    }
                }
                for (k, o) in kers.iter_mut().zip(out.iter_mut()) {
                    plan.forward(k);
                    for ((oi, ki), si) in o.iter_mut().zip(k.iter()).zip(&s_hat) {
                        *oi += ki * si;
                    }
                }
            });
        }
    }

    let mut result: Vec<Vec<[f64; C]>> = vec![vec![[0.0; C]; ne[0] * ne[1]]; heights.len()];
    par_for_each_mut(&mut result, |ip, res| {
        for (k, comp) in acc[ip].iter().enumerate() {
            let mut data = comp.clone();
            plan.inverse(&mut data);
            for p0 in 0..ne[0] {
                for p1 in 0..ne[1] {
                    let m = (p0 + ns[0] - 1) * len[1] + (p1 + ns[1] - 1);
                    res[p0 * ne[1] + p1][k] = data[m].re;
                }
            }
        }
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::sources::Forcing;
    use crate::density::DensityField;
    use crate::greens;

    #[test]
    fn fft_lengths_are_smooth() {
        assert_eq!(fft_len(1), 1);
        assert_eq!(fft_len(7), 8);
        assert_eq!(fft_len(121), 125);
        assert_eq!(fft_len(559), 576);
    }

    #[test]
    fn matches_direct_sum() {
        let rho = DensityField::bump(Vec3::new(0.6, 0.1, 0.0), 0.3, 1.0);
        let lat = SourceLattice::build(&Forcing::sedimenting(rho), 6).unwrap();
        let cloud = lat.to_cloud();
        let window = Window {
            start: [-7, -3],
            shape: [9, 5],
        };
        let heights = [0.0, 0.37, 1.1];
        let eps = 0.05;
        let out = plane_sums::<4, _>(&lat, eps, &heights, window, |x, y, f| {
            let (u, p) = greens::velocity_pressure_unchecked(x, y, f);
            [u[0], u[1], u[2], p]
        });
        for (ip, &x1) in heights.iter().enumerate() {
            for a in 0..9 {
                for b in 0..5 {
                    let x = Vec3::new(x1, (a as f64 - 7.0) * lat.h, (b as f64 - 3.0) * lat.h);
                    let (u, p) = cloud.velocity_pressure(&x, eps).unwrap();
                    let got = out[ip][a * 5 + b];
                    for k in 0..3 {
                        assert!((got[k] - u[k]).abs() < 1e-14, "{got:?} {u}");
                    }
                    assert!((got[3] - p).abs() < 1e-13);
                }
            }
        }
    }
}
