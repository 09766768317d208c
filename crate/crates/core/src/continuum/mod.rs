//! Continuum problems in the half-space: body-force Stokes flow, Dirichlet
//! wall data, and the Navier slip law.

mod conv;
pub mod dirichlet;
pub mod navier;
pub mod sources;

pub use dirichlet::{solve_dirichlet_halfspace, DirichletSolution, DEFAULT_TOL_EDGE};
pub use navier::{solve_navier, solve_navier_from, NavierMethod, NavierOptions, NavierSolution};
pub use sources::{BodyForce, Forcing, SourceCloud, SourceLattice};

use crate::grid::{BoxRegion, GridField, Lattice};
use crate::spectral::{SpectralField, TangentialGrid};
use crate::{greens, Error, Result, Vec3};
use conv::{plane_sums, Window};

/// Discretisation of a body-force solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumGrid {
    /// Midpoint cells along the longest side of the forcing support.
    pub n_q: usize,
    /// Evaluation box `K`; defaults to the support dilated by 1.5.
    pub region: Option<BoxRegion>,
    /// Evaluation spacing in units of the source cell size.
    pub stride: usize,
    /// Tangential nodes per side for wall traces (spacing = cell size).
    pub n_t: usize,
}

impl Default for ContinuumGrid {
    fn default() -> Self {
        Self {
            n_q: 48,
            region: None,
            stride: 2,
            n_t: 1024,
        }
    }
}

impl ContinuumGrid {
    pub fn cell_size(&self, forcing: &Forcing) -> f64 {
        forcing.support().extent().max() / self.n_q as f64
    }

    pub fn region_for(&self, forcing: &Forcing) -> BoxRegion {
        self.region.unwrap_or_else(|| forcing.support().dilate(1.5))
    }

    pub fn tangential_grid(&self, forcing: &Forcing) -> TangentialGrid {
        TangentialGrid::new(self.n_t, self.cell_size(forcing))
    }
}

/// Lattice of spacing `stride * h` inside `region`, its first node snapped
/// to a multiple of `h`.
pub fn eval_lattice(region: &BoxRegion, h: f64, stride: usize) -> Lattice {
    let s = h * stride as f64;
    let mut origin = [0.0; 3];
    let mut dims = [0usize; 3];
    for a in 0..3 {
        let o = (region.lo[a] / h - 1e-9).ceil() * h;
        origin[a] = o;
        dims[a] = ((region.hi[a] - o) / s + 1e-9).floor() as usize + 1;
    }
    Lattice::new(origin.into(), [s; 3], dims)
}

/// Values `u` and `p` of one body-force solve on its evaluation lattice.
#[derive(Debug, Clone)]
pub struct BodyForceSolution {
    pub field: GridField,
    pub sources: SourceLattice,
    pub eps: f64,
}

/// Traces on a plane `x1 = const`, as tangential spectral fields.
#[derive(Debug, Clone)]
pub struct PlaneTrace {
    pub x1: f64,
    pub u: [SpectralField; 3],
    pub du: [SpectralField; 3],
    pub p: SpectralField,
}

/// Wall data of a body-force solution: `∂1 u` and `p` on `x1 = -eps`.
#[derive(Debug, Clone)]
pub struct WallTraces {
    pub du: [SpectralField; 3],
    pub p: SpectralField,
}

fn tangential_start(x: f64, h: f64) -> Result<i64> {
    let t = x / h;
    if (t - t.round()).abs() > 1e-6 {
        return Err(Error::GridMismatch(format!(
            "tangential coordinate {x} is not a multiple of {h}"
        )));
    }
    Ok(t.round() as i64)
}

/// `u^ε = ∫ G_ε(·, y) (f - ρe)(y) dy` and its pressure on the lattice of
/// `grid`, with the wall at `x1 = -eps`.
pub fn solve_body_force(
    forcing: &Forcing,
    eps: f64,
    grid: &ContinuumGrid,
) -> Result<BodyForceSolution> {
    let sources = SourceLattice::build(forcing, grid.n_q)?;
    let lattice = eval_lattice(&grid.region_for(forcing), sources.h, grid.stride);
    solve_body_force_on(sources, eps, lattice)
}

/// As [`solve_body_force`] with explicit sources and targets. Target
/// nodes must lie on multiples of the cell size along the wall.
pub fn solve_body_force_on(
    sources: SourceLattice,
    eps: f64,
    lattice: Lattice,
) -> Result<BodyForceSolution> {
    if !(eps >= 0.0) {
        return Err(Error::Precondition(format!(
            "layer width {eps} must be >= 0"
        )));
    }
    if lattice.origin[0] < -eps - 1e-12 {
        return Err(Error::Domain(format!(
            "lattice reaches below the wall x1 = {}",
            -eps
        )));
    }
    let h = sources.h;
    let mut stride = [0usize; 2];
    for a in 0..2 {
        let s = lattice.spacing[a + 1] / h;
        if (s - s.round()).abs() > 1e-6 || s.round() < 1.0 {
            return Err(Error::GridMismatch(format!(
                "lattice spacing {} is not a multiple of {h}",
                lattice.spacing[a + 1]
            )));
        }
        stride[a] = s.round() as usize;
    }
    let [n1, n2, n3] = lattice.dims;
    let window = Window {
        start: [
            tangential_start(lattice.origin[1], h)?,
            tangential_start(lattice.origin[2], h)?,
        ],
        shape: [(n2 - 1) * stride[0] + 1, (n3 - 1) * stride[1] + 1],
    };
    let heights: Vec<f64> = (0..n1)
        .map(|i| lattice.origin[0] + i as f64 * lattice.spacing[0])
        .collect();
    let planes = plane_sums::<4, _>(&sources, eps, &heights, window, |x, y, f| {
        let (u, p) = greens::velocity_pressure_unchecked(x, y, f);
        [u[0], u[1], u[2], p]
    });
    let mut velocity = Vec::with_capacity(lattice.len());
    let mut pressure = Vec::with_capacity(lattice.len());
    for plane in &planes {
        for j in 0..n2 {
            for k in 0..n3 {
                let v = plane[j * stride[0] * window.shape[1] + k * stride[1]];
                velocity.push(Vec3::new(v[0], v[1], v[2]));
                pressure.push(v[3]);
            }
        }
    }
    let field = GridField {
        lattice,
        velocity,
        pressure: Some(pressure),
    };
    Ok(BodyForceSolution {
        field,
        sources,
        eps,
    })
}

impl BodyForceSolution {
    fn check_tangential(&self, tgrid: &TangentialGrid) -> Result<Window> {
        if (tgrid.h - self.sources.h).abs() > 1e-12 * self.sources.h {
            return Err(Error::GridMismatch(format!(
                "tangential spacing {} differs from the cell size {}",
                tgrid.h, self.sources.h
            )));
        }
        let half = (tgrid.n / 2) as i64;
        Ok(Window {
            start: [-half, -half],
            shape: [tgrid.n, tgrid.n],
        })
    }

    /// `∂1 u` and `p` on the active wall, sampled on `tgrid`.
    pub fn wall_traces(&self, tgrid: TangentialGrid) -> Result<WallTraces> {
        let window = self.check_tangential(&tgrid)?;
        let plane = plane_sums::<4, _>(&self.sources, self.eps, &[-self.eps], window, |x, y, f| {
            let (d, p) = greens::normal_derivative_and_pressure_unchecked(x, y, f);
            [d[0], d[1], d[2], p]
        })
        .pop()
        .expect("one plane");
        let comp = |k: usize| {
            let v: Vec<f64> = plane.iter().map(|o| o[k]).collect();
            SpectralField::from_physical(tgrid, &v)
        };
        Ok(WallTraces {
            du: [comp(0), comp(1), comp(2)],
            p: comp(3),
        })
    }

    /// `u`, `∂1 u` and `p` on the plane `x1`, sampled on `tgrid`.
    pub fn plane_trace(&self, tgrid: TangentialGrid, x1: f64) -> Result<PlaneTrace> {
        if x1 < -self.eps {
            return Err(Error::Domain(format!("plane x1 = {x1} below the wall")));
        }
        let window = self.check_tangential(&tgrid)?;
        let plane = plane_sums::<7, _>(&self.sources, self.eps, &[x1], window, |x, y, f| {
            let (u, j) = greens::apply_with_jacobian_unchecked(x, y, f);
            let p = greens::pressure_unchecked(x, y, f);
            [u[0], u[1], u[2], j[(0, 0)], j[(1, 0)], j[(2, 0)], p]
        })
        .pop()
        .expect("one plane");
        let comp = |k: usize| {
            let v: Vec<f64> = plane.iter().map(|o| o[k]).collect();
            SpectralField::from_physical(tgrid, &v)
        };
        Ok(PlaneTrace {
            x1,
            u: [comp(0), comp(1), comp(2)],
            du: [comp(3), comp(4), comp(5)],
            p: comp(6),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityField;

    fn bump(c: Vec3, w: f64) -> Forcing {
        Forcing::sedimenting(DensityField::bump(c, w, 1.0))
    }

    #[test]
    fn zero_forcing_gives_zero_field() {
        let f = Forcing::sedimenting(DensityField::bump(Vec3::new(1.0, 0.0, 0.0), 0.5, 0.0));
        let sol = solve_body_force(
            &f,
            0.0,
            &ContinuumGrid {
                n_q: 8,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sol.field.max_abs(), 0.0);
    }

    #[test]
    fn eval_lattice_snaps_to_cells() {
        let region = BoxRegion::new(Vec3::new(0.25, -0.75, -0.75), Vec3::new(1.75, 0.75, 0.75));
        let lat = eval_lattice(&region, 1.0 / 48.0, 2);
        assert_eq!(lat.dims, [37, 37, 37]);
        assert!((lat.origin[0] - 0.25).abs() < 1e-15);
        assert!((lat.bounds().hi - region.hi).norm() < 1e-12);
    }

    #[test]
    fn matches_direct_cloud_and_vanishes_on_wall() {
        let f = bump(Vec3::new(0.8, 0.0, 0.1), 0.4);
        let eps = 0.1;
        let src = SourceLattice::build(&f, 8).unwrap();
        let h = src.h;
        let lat = Lattice::new(
            Vec3::new(-eps, -4.0 * h, -2.0 * h),
            [0.3, 2.0 * h, 3.0 * h],
            [4, 5, 3],
        );
        let sol = solve_body_force_on(src.clone(), eps, lat.clone()).unwrap();
        let cloud = src.to_cloud();
        for (n, x) in lat.points().enumerate() {
            let (u, p) = cloud.velocity_pressure(&x, eps).unwrap();
            assert!((sol.field.velocity[n] - u).amax() < 1e-13);
            assert!((sol.field.pressure.as_ref().unwrap()[n] - p).abs() < 1e-12);
        }
        // the first plane is the active wall
        for n in 0..15 {
            assert!(sol.field.velocity[n].amax() < 1e-14);
        }
        let below = Lattice::new(Vec3::new(-0.2, 0.0, 0.0), [0.1; 3], [2, 2, 2]);
        assert!(solve_body_force_on(src, eps, below).is_err());
    }

    #[test]
    fn wall_traces_match_direct_sum() {
        let f = bump(Vec3::new(0.6, 0.0, 0.0), 0.3);
        let grid = ContinuumGrid {
            n_q: 6,
            n_t: 16,
            ..Default::default()
        };
        let sol = solve_body_force(&f, 0.0, &grid).unwrap();
        let tg = grid.tangential_grid(&f);
        let tr = sol.wall_traces(tg).unwrap();
        let pl = sol.plane_trace(tg, 0.0).unwrap();
        let cloud = sol.sources.to_cloud();
        let du = tr.du.each_ref().map(|s| s.to_physical());
        let du_pl = pl.du.each_ref().map(|s| s.to_physical());
        let p = tr.p.to_physical();
        for a in (0..16).step_by(3) {
            for b in (0..16).step_by(5) {
                let x = Vec3::new(0.0, tg.coord(a), tg.coord(b));
                let j = cloud.jacobian(&x, 0.0).unwrap();
                let (_, pd) = cloud.velocity_pressure(&x, 0.0).unwrap();
                for k in 0..3 {
                    assert!((du[k][a * 16 + b] - j[(k, 0)]).abs() < 1e-13);
                    assert!((du_pl[k][a * 16 + b] - j[(k, 0)]).abs() < 1e-12);
                }
                assert!((p[a * 16 + b] - pd).abs() < 1e-12);
            }
        }
        // a downward-moving blob drags the wall downward
        assert!(du[2].iter().sum::<f64>() < 0.0);
    }
}
