//! Discrete point-force distributions and their direct-sum fields.

use crate::density::DensityField;
use crate::grid::BoxRegion;
use crate::{e3, greens, Error, Mat3, Result, Vec3};
use serde::{Deserialize, Serialize};

/// Body force `density(y) * direction`, optionally switched off inside
/// a set of balls `(centre, radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyForce {
    pub density: DensityField,
    pub direction: [f64; 3],
    #[serde(default)]
    pub excluded: Vec<([f64; 3], f64)>,
}

/// Right-hand side `f - ρ e` of the continuum problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forcing {
    pub rho: DensityField,
    #[serde(default)]
    pub body: Option<BodyForce>,
}

impl Forcing {
    /// Pure sedimentation, `f = 0`.
    pub fn sedimenting(rho: DensityField) -> Self {
        Self { rho, body: None }
    }

    pub fn value(&self, y: &Vec3) -> Vec3 {
        let mut v = -e3() * self.rho.eval(y);
        if let Some(b) = &self.body {
            let masked = b
                .excluded
                .iter()
                .any(|(c, r)| (y - Vec3::from(*c)).norm() < *r);
            if !masked {
                v += Vec3::from(b.direction) * b.density.eval(y);
            }
        }
        v
    }

    pub fn support(&self) -> BoxRegion {
        let mut s = self.rho.support();
        if let Some(b) = &self.body {
            let t = b.density.support();
            s = BoxRegion::new(s.lo.inf(&t.lo), s.hi.sup(&t.hi));
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.rho.validate()?;
        if let Some(b) = &self.body {
            b.density.validate()?;
        }
        Ok(())
    }
}

/// Point forces at arbitrary positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceCloud {
    pub points: Vec<Vec3>,
    pub forces: Vec<Vec3>,
}

impl SourceCloud {
    pub fn new(points: Vec<Vec3>, forces: Vec<Vec3>) -> Self {
        assert_eq!(points.len(), forces.len());
        Self { points, forces }
    }

    fn check(&self, x: &Vec3, eps: f64) -> Result<()> {
        if x[0] < -eps {
            return Err(Error::Domain(format!("{x:?} below the wall x1 = {}", -eps)));
        }
        Ok(())
    }

    /// `Σ G_ε(x, y_i) F_i`, with the wall at `x1 = -eps`.
    pub fn velocity(&self, x: &Vec3, eps: f64) -> Result<Vec3> {
        self.check(x, eps)?;
        let shift = Vec3::new(eps, 0.0, 0.0);
        let xs = x + shift;
        let mut u = Vec3::zeros();
        for (y, f) in self.points.iter().zip(&self.forces) {
            let ys = y + shift;
            greens::check_pair(&xs, &ys)?;
            u += greens::apply_unchecked(&xs, &ys, f);
        }
        Ok(u)
    }

    pub fn velocity_pressure(&self, x: &Vec3, eps: f64) -> Result<(Vec3, f64)> {
        self.check(x, eps)?;
        let shift = Vec3::new(eps, 0.0, 0.0);
        let xs = x + shift;
        let mut u = Vec3::zeros();
        let mut p = 0.0;
        for (y, f) in self.points.iter().zip(&self.forces) {
            let ys = y + shift;
            greens::check_pair(&xs, &ys)?;
            let (du, dp) = greens::velocity_pressure_unchecked(&xs, &ys, f);
            u += du;
            p += dp;
        }
        Ok((u, p))
    }

    /// Velocity gradient `(i, k) = ∂_k u_i`.
    pub fn jacobian(&self, x: &Vec3, eps: f64) -> Result<Mat3> {
        self.check(x, eps)?;
        let shift = Vec3::new(eps, 0.0, 0.0);
        let xs = x + shift;
        let mut j = Mat3::zeros();
        for (y, f) in self.points.iter().zip(&self.forces) {
            let ys = y + shift;
            greens::check_pair(&xs, &ys)?;
            j += greens::apply_with_jacobian_unchecked(&xs, &ys, f).1;
        }
        Ok(j)
    }
}

/// Midpoint quadrature of a forcing: one cubic cell of side `h` per node,
/// node at the cell centre, weight `h³ (f - ρe)(centre)`.
///
/// Cell faces lie on multiples of `h`, so any lattice of nodes at integer
/// multiples of `h` stays half a cell away from every source in all three
/// directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceLattice {
    pub h: f64,
    /// Integer position of the first cell's lower corner, in units of `h`.
    pub corner: [i64; 3],
    pub dims: [usize; 3],
    pub forces: Vec<Vec3>,
}

impl SourceLattice {
    /// `n_q` cells along the longest side of the forcing support.
    pub fn build(forcing: &Forcing, n_q: usize) -> Result<Self> {
        forcing.validate()?;
        if n_q == 0 {
            return Err(Error::Precondition("n_q must be positive".into()));
        }
        let sup = forcing.support();
        let ext = sup.extent();
        let h = ext.max() / n_q as f64;
        Self::build_with_spacing(forcing, h)
    }

    pub fn build_with_spacing(forcing: &Forcing, h: f64) -> Result<Self> {
        let sup = forcing.support();
        let mut corner = [0i64; 3];
        let mut dims = [0usize; 3];
        for a in 0..3 {
            let lo = (sup.lo[a] / h + 1e-9).floor() as i64;
            let hi = (sup.hi[a] / h - 1e-9).ceil() as i64;
            corner[a] = lo;
            dims[a] = (hi - lo).max(1) as usize;
        }
        if corner[0] < 0 {
            return Err(Error::Precondition(
                "forcing support crosses the wall".into(),
            ));
        }
        let mut lat = Self {
            h,
            corner,
            dims,
            forces: Vec::new(),
        };
        let w = h * h * h;
        let n = dims[0] * dims[1] * dims[2];
        lat.forces = (0..n)
            .map(|idx| forcing.value(&lat.node(idx)) * w)
            .collect();
        Ok(lat)
    }

    pub fn len(&self) -> usize {
        self.forces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forces.is_empty()
    }

    pub fn node(&self, idx: usize) -> Vec3 {
        let k = idx % self.dims[2];
        let j = (idx / self.dims[2]) % self.dims[1];
        let i = idx / (self.dims[1] * self.dims[2]);
        self.node_ijk(i, j, k)
    }

    pub fn node_ijk(&self, i: usize, j: usize, k: usize) -> Vec3 {
        Vec3::new(
            (self.corner[0] as f64 + i as f64 + 0.5) * self.h,
            (self.corner[1] as f64 + j as f64 + 0.5) * self.h,
            (self.corner[2] as f64 + k as f64 + 0.5) * self.h,
        )
    }

    /// Nonzero sources as a cloud, in lattice order.
    pub fn to_cloud(&self) -> SourceCloud {
        let mut c = SourceCloud::default();
        for (idx, f) in self.forces.iter().enumerate() {
            if *f != Vec3::zeros() {
                c.points.push(self.node(idx));
                c.forces.push(*f);
            }
        }
        c
    }

    pub fn total_force(&self) -> Vec3 {
        self.forces.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_is_offset_and_conservative() {
        let rho = DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0);
        let lat = SourceLattice::build(&Forcing::sedimenting(rho), 16).unwrap();
        assert_eq!(lat.dims, [16, 16, 16]);
        assert_eq!(lat.corner, [8, -8, -8]);
        let first = lat.node(0);
        assert!(
            (first - Vec3::new(0.5 + 1.0 / 32.0, -0.5 + 1.0 / 32.0, -0.5 + 1.0 / 32.0)).norm()
                < 1e-15
        );
        // midpoint rule on the bump integrates to its mass up to O(h²)
        let total = lat.total_force();
        assert!((total[2] + 1.0).abs() < 1e-3, "{total}");
        assert_eq!(total[0], 0.0);
    }

    #[test]
    fn masked_body_force() {
        let rho = DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 0.0);
        let body = BodyForce {
            density: DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0),
            direction: [0.0, 1.0, 0.0],
            excluded: vec![([1.0, 0.0, 0.0], 0.1)],
        };
        let f = Forcing {
            rho,
            body: Some(body),
        };
        assert_eq!(f.value(&Vec3::new(1.0, 0.05, 0.0)), Vec3::zeros());
        assert!(f.value(&Vec3::new(1.0, 0.2, 0.0))[1] > 0.0);
    }

    #[test]
    fn cloud_sums_and_wall() {
        let c = SourceCloud::new(
            vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.5, 0.3, 0.1)],
            vec![-e3(), e3() * 0.5],
        );
        let x = Vec3::new(0.0, 0.2, 0.4);
        assert!(c.velocity(&x, 0.0).unwrap().amax() < 1e-12);
        assert!(c.velocity(&Vec3::new(-0.1, 0.2, 0.4), 0.1).unwrap().amax() < 1e-12);
        assert!(c.velocity(&Vec3::new(-0.2, 0.0, 0.0), 0.1).is_err());
        let y = Vec3::new(0.7, -0.1, 0.2);
        let direct = greens::greens(&y, &c.points[0]).unwrap() * c.forces[0]
            + greens::greens(&y, &c.points[1]).unwrap() * c.forces[1];
        assert!((c.velocity(&y, 0.0).unwrap() - direct).norm() < 1e-15);
    }
}
