//! Structured 3D lattices, sampled vector fields and their discrete norms.

use crate::quadrature::trapezoid_weights;
use crate::{Error, Result, Vec3};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxRegion {
    pub lo: Vec3,
    pub hi: Vec3,
}

impl BoxRegion {
    pub fn new(lo: Vec3, hi: Vec3) -> Self {
        Self { lo, hi }
    }

    pub fn center(&self) -> Vec3 {
        (self.lo + self.hi) * 0.5
    }

    pub fn extent(&self) -> Vec3 {
        self.hi - self.lo
    }

    pub fn volume(&self) -> f64 {
        let e = self.extent();
        e[0] * e[1] * e[2]
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        (0..3).all(|i| x[i] >= self.lo[i] && x[i] <= self.hi[i])
    }

    /// Box scaled by `factor` about its centre.
    pub fn dilate(&self, factor: f64) -> Self {
        let c = self.center();
        let h = self.extent() * (0.5 * factor);
        Self::new(c - h, c + h)
    }

    /// Box grown by `margin` on every side.
    pub fn pad(&self, margin: f64) -> Self {
        let m = Vec3::repeat(margin);
        Self::new(self.lo - m, self.hi + m)
    }

    pub fn translate(&self, t: &Vec3) -> Self {
        Self::new(self.lo + t, self.hi + t)
    }
}

/// Uniform node lattice; node `(i, j, k)` sits at `origin + (i, j, k) * spacing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
}

impl Lattice {
    pub fn new(origin: Vec3, spacing: [f64; 3], dims: [usize; 3]) -> Self {
        Self {
            origin: origin.into(),
            spacing,
            dims,
        }
    }

    /// Nodes from `region.lo` to (approximately) `region.hi` with spacing `h`.
    pub fn covering(region: &BoxRegion, h: f64) -> Self {
        let e = region.extent();
        let dims = [0, 1, 2].map(|i| (e[i] / h).round() as usize + 1);
        Self::new(region.lo, [h; 3], dims)
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize, k: usize) -> Vec3 {
        Vec3::new(
            self.origin[0] + i as f64 * self.spacing[0],
            self.origin[1] + j as f64 * self.spacing[1],
            self.origin[2] + k as f64 * self.spacing[2],
        )
    }

    pub fn point_at(&self, idx: usize) -> Vec3 {
        let k = idx % self.dims[2];
        let j = (idx / self.dims[2]) % self.dims[1];
        let i = idx / (self.dims[1] * self.dims[2]);
        self.point(i, j, k)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        (0..self.len()).map(move |n| self.point_at(n))
    }

    pub fn bounds(&self) -> BoxRegion {
        let lo = Vec3::from(self.origin);
        let hi = self.point(self.dims[0] - 1, self.dims[1] - 1, self.dims[2] - 1);
        BoxRegion::new(lo, hi)
    }

    /// Trapezoid weights, one per node; they sum to the box volume.
    pub fn weights(&self) -> Vec<f64> {
        let w: Vec<Vec<f64>> = (0..3)
            .map(|a| trapezoid_weights(self.dims[a], self.spacing[a]))
            .collect();
        let mut out = Vec::with_capacity(self.len());
        for wi in &w[0] {
            for wj in &w[1] {
                for wk in &w[2] {
                    out.push(wi * wj * wk);
                }
            }
        }
        out
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights().iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Trilinear interpolation, zero outside the lattice.
    pub fn trilinear(&self, values: &[f64], x: &Vec3) -> f64 {
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let t = (x[a] - self.origin[a]) / self.spacing[a];
            let n = self.dims[a];
            if t < 0.0 || t > (n - 1) as f64 {
                return 0.0;
            }
            let i = (t.floor() as usize).min(n.saturating_sub(2));
            base[a] = i;
            frac[a] = if n == 1 { 0.0 } else { t - i as f64 };
        }
        let mut acc = 0.0;
        for di in 0..2 {
            for dj in 0..2 {
                for dk in 0..2 {
                    let (i, j, k) = (base[0] + di, base[1] + dj, base[2] + dk);
                    if i >= self.dims[0] || j >= self.dims[1] || k >= self.dims[2] {
                        continue;
                    }
                    let w = (if di == 1 { frac[0] } else { 1.0 - frac[0] })
                        * (if dj == 1 { frac[1] } else { 1.0 - frac[1] })
                        * (if dk == 1 { frac[2] } else { 1.0 - frac[2] });
                    acc += w * values[self.index(i, j, k)];
                }
            }
        }
        acc
    }

    fn same_as(&self, other: &Lattice) -> bool {
        self.dims == other.dims
            && (0..3).all(|a| {
                (self.origin[a] - other.origin[a]).abs() <= 1e-12 * (1.0 + self.origin[a].abs())
                    && (self.spacing[a] - other.spacing[a]).abs() <= 1e-12 * self.spacing[a]
            })
    }
}

/// Velocity (and optionally pressure) samples on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub lattice: Lattice,
    pub velocity: Vec<Vec3>,
    pub pressure: Option<Vec<f64>>,
}

/// Distances between two fields on a common lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormPair {
    pub lq: f64,
    pub h1: f64,
}

impl GridField {
    pub fn zeros(lattice: Lattice) -> Self {
        let n = lattice.len();
        Self {
            lattice,
            velocity: vec![Vec3::zeros(); n],
            pressure: None,
        }
    }

    pub fn from_fn(lattice: Lattice, f: impl Fn(&Vec3) -> Vec3 + Sync + Send) -> Self {
        let velocity = crate::par_map_range(lattice.len(), |n| f(&lattice.point_at(n)));
        Self {
            lattice,
            velocity,
            pressure: None,
        }
    }

    pub fn check_same_grid(&self, other: &GridField) -> Result<()> {
        if !self.lattice.same_as(&other.lattice) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.lattice, other.lattice
            )));
        }
        Ok(())
    }

    /// `self + a * other`, pressures combined when both are present.
    pub fn axpy(&self, a: f64, other: &GridField) -> Result<GridField> {
        self.check_same_grid(other)?;
        let velocity = self
            .velocity
            .iter()
            .zip(&other.velocity)
            .map(|(u, v)| u + v * a)
            .collect();
        let pressure = match (&self.pressure, &other.pressure) {
            (Some(p), Some(q)) => Some(p.iter().zip(q).map(|(x, y)| x + a * y).collect()),
            _ => None,
        };
        Ok(GridField {
            lattice: self.lattice.clone(),
            velocity,
            pressure,
        })
    }

    pub fn sub(&self, other: &GridField) -> Result<GridField> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, a: f64) -> GridField {
        GridField {
            lattice: self.lattice.clone(),
            velocity: self.velocity.iter().map(|u| u * a).collect(),
            pressure: self
                .pressure
                .as_ref()
                .map(|p| p.iter().map(|x| x * a).collect()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.velocity.iter().map(|u| u.amax()).fold(0.0, f64::max)
    }

    /// `(Σ w |u|^q)^{1/q}` with trapezoid weights.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let w = self.lattice.weights();
        let s: f64 = w
            .iter()
            .zip(&self.velocity)
            .map(|(w, u)| w * u.norm().powf(q))
            .sum();
        s.powf(1.0 / q)
    }

    /// Velocity gradient at every node, `g[n](i, k) = ∂_k u_i`; centred
    /// differences inside, second-order one-sided ones on the faces.
    pub fn gradient(&self) -> Vec<crate::Mat3> {
        let lat = &self.lattice;
        let [n0, n1, n2] = lat.dims;
        let mut out = vec![crate::Mat3::zeros(); lat.len()];
        for i in 0..n0 {
            for j in 0..n1 {
                for k in 0..n2 {
                    let idx = lat.index(i, j, k);
                    let pos = [i, j, k];
                    for a in 0..3 {
                        let n = lat.dims[a];
                        if n < 3 {
                            continue;
                        }
                        let h = lat.spacing[a];
                        let at = |m: usize| {
                            let mut p = pos;
                            p[a] = m;
                            self.velocity[lat.index(p[0], p[1], p[2])]
                        };
                        let m = pos[a];
                        let d = if m == 0 {
                            (at(0) * -3.0 + at(1) * 4.0 - at(2)) / (2.0 * h)
                        } else if m == n - 1 {
                            (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) / (2.0 * h)
                        } else {
                            (at(m + 1) - at(m - 1)) / (2.0 * h)
                        };
                        out[idx].set_column(a, &d);
                    }
                }
            }
        }
        out
    }

    /// `‖∇u‖_{L²}` over the lattice box.
    pub fn h1_seminorm(&self) -> f64 {
        let w = self.lattice.weights();
        let g = self.gradient();
        w.iter()
            .zip(&g)
            .map(|(w, m)| w * m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest discrete divergence over interior nodes.
    pub fn max_divergence_interior(&self) -> f64 {
        let g = self.gradient();
        let [n0, n1, n2] = self.lattice.dims;
        let mut worst: f64 = 0.0;
        for i in 1..n0.saturating_sub(1) {
            for j in 1..n1.saturating_sub(1) {
                for k in 1..n2.saturating_sub(1) {
                    worst = worst.max(g[self.lattice.index(i, j, k)].trace().abs());
                }
            }
        }
        worst
    }

    /// Normal derivative `∂_1 u` on the face `x1 = origin`, which must be the
    /// wall; one-sided three-point formula.
    pub fn wall_derivative(&self, wall_x1: f64) -> Result<GridField> {
        let lat = &self.lattice;
        if (lat.origin[0] - wall_x1).abs() > 1e-12 || lat.dims[0] < 3 {
            return Err(Error::Domain(format!(
                "lattice starts at x1 = {} (need the wall {wall_x1} and 3 planes)",
                lat.origin[0]
            )));
        }
        let h = lat.spacing[0];
        let face = Lattice {
            dims: [1, lat.dims[1], lat.dims[2]],
            ..lat.clone()
        };
        let mut velocity = Vec::with_capacity(face.len());
        for j in 0..lat.dims[1] {
            for k in 0..lat.dims[2] {
                let u = |i: usize| self.velocity[lat.index(i, j, k)];
                velocity.push((u(0) * -3.0 + u(1) * 4.0 - u(2)) / (2.0 * h));
            }
        }
        Ok(GridField {
            lattice: face,
            velocity,
            pressure: None,
        })
    }

    /// Header line followed by one row per node: `x1,x2,x3,u1,u2,u3[,p]`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let lat = &self.lattice;
        let comps = if self.pressure.is_some() { 4 } else { 3 };
        writeln!(
            w,
            "# origin={:?} spacing={:?} dims={:?} components={comps}",
            lat.origin, lat.spacing, lat.dims
        )?;
        writeln!(w, "x1,x2,x3,u1,u2,u3{}", if comps == 4 { ",p" } else { "" })?;
        for (n, u) in self.velocity.iter().enumerate() {
            let x = lat.point_at(n);
            write!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                x[0], x[1], x[2], u[0], u[1], u[2]
            )?;
            if let Some(p) = &self.pressure {
                write!(w, ",{:.17e}", p[n])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// `L^q` and `H¹`-seminorm distances between two fields on a common grid.
pub fn norms(a: &GridField, b: &GridField, q: f64) -> Result<NormPair> {
    let d = a.sub(b)?;
    Ok(NormPair {
        lq: d.lq_norm(q),
        h1: d.h1_seminorm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_lattice(h: f64) -> Lattice {
        Lattice::covering(&BoxRegion::new(Vec3::zeros(), Vec3::new(1.0, 2.0, 1.0)), h)
    }

    #[test]
    fn identical_fields_have_zero_distance() {
        let f = GridField::from_fn(unit_lattice(0.1), |p| Vec3::new(p[0].sin(), p[1], 0.0));
        let n = norms(&f, &f, 1.2).unwrap();
        assert_eq!(n.lq, 0.0);
        assert_eq!(n.h1, 0.0);
    }

    #[test]
    fn constant_difference() {
        let lat = unit_lattice(0.1);
        let a = GridField::from_fn(lat.clone(), |p| Vec3::new(p[0], 0.0, p[2]));
        let c = Vec3::new(0.3, -0.4, 0.0);
        let b = GridField::from_fn(lat, move |p| Vec3::new(p[0], 0.0, p[2]) + c);
        for q in [1.0, 1.2, 2.0] {
            let n = norms(&a, &b, q).unwrap();
            assert!((n.lq - 0.5 * 2f64.powf(1.0 / q)).abs() < 1e-12);
            assert!(n.h1 < 1e-12);
        }
    }

    #[test]
    fn norms_converge_at_second_order() {
        // u = (sin πx1, 0, 0): ∫|u|² = 1, ∫|∇u|² = π², over [0,1]×[0,2]×[0,1]
        let errs: Vec<(f64, f64)> = [0.05, 0.025]
            .iter()
            .map(|&h| {
                let f = GridField::from_fn(unit_lattice(h), |p| {
                    Vec3::new((std::f64::consts::PI * p[0]).sin(), 0.0, 0.0)
                });
                (
                    (f.lq_norm(2.0) - 1.0).abs(),
                    (f.h1_seminorm() - std::f64::consts::PI).abs(),
                )
            })
            .collect();
        assert!(errs[0].0 / errs[1].0 > 3.5);
        assert!(errs[0].1 / errs[1].1 > 3.0);
        assert!(errs[1].1 < 1e-2);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = GridField::zeros(unit_lattice(0.1));
        let b = GridField::zeros(unit_lattice(0.2));
        assert!(matches!(norms(&a, &b, 1.0), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn wall_derivative_of_shear() {
        let f = GridField::from_fn(unit_lattice(0.1), |p| Vec3::new(0.0, p[0], 0.0));
        let d = f.wall_derivative(0.0).unwrap();
        assert!(d
            .velocity
            .iter()
            .all(|v| (v - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12));
        let shifted = Lattice {
            origin: [0.5, 0.0, 0.0],
            ..unit_lattice(0.1)
        };
        assert!(GridField::zeros(shifted).wall_derivative(0.0).is_err());
    }

    #[test]
    fn divergence_of_solenoidal_polynomial() {
        let f = GridField::from_fn(unit_lattice(0.1), |p| {
            Vec3::new(p[1] * p[2], -p[0] * p[2], p[0] * p[1])
        });
        assert!(f.max_divergence_interior() < 1e-12);
    }

    #[test]
    fn trilinear_reproduces_linear_functions() {
        let lat = unit_lattice(0.25);
        let vals: Vec<f64> = lat
            .points()
            .map(|p| 2.0 * p[0] - p[1] + 0.5 * p[2])
            .collect();
        let x = Vec3::new(0.33, 1.21, 0.77);
        assert!((lat.trilinear(&vals, &x) - (0.66 - 1.21 + 0.385)).abs() < 1e-12);
    }

    #[test]
    fn csv_header() {
        let f = GridField::zeros(unit_lattice(0.5));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# origin="));
        assert_eq!(text.lines().count(), 2 + f.lattice.len());
    }
}
