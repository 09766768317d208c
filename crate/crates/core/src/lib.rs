//! Stokes flow in a half-space bounded by a no-slip wall.
//!
//! The crate evaluates the wall-corrected Stokes Green's function, the
//! velocity fields of sedimenting spheres near the wall, continuum
//! approximations of a dilute suspension, the boundary-layer corrector
//! cascade describing a particle-free layer along the wall, and the Navier
//! slip law that summarises it. The [`experiments`] module drives the
//! convergence studies that tie these pieces together.
//!
//! Coordinates: the wall is the plane `x1 = 0` (or `x1 = -eps` when a
//! depletion layer of width `eps` is active), the fluid occupies `x1 > 0`
//! and gravity acts along `-e3`, parallel to the wall.

pub mod analytic;
pub mod cascade;
pub mod continuum;
pub mod density;
mod error;
pub mod experiments;
pub mod fft2;
pub mod greens;
pub mod grid;
pub mod particles;
pub mod quadrature;
pub mod spectral;
pub mod stokeslet;

pub use error::{Error, Result};

/// Three-component vector (positions, forces, velocities).
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3x3 tensor; row = velocity component, column = force direction.
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Unit vector along gravity's opposite direction, `e = (0, 0, 1)`.
pub fn e3() -> Vec3 {
    Vec3::new(0.0, 0.0, 1.0)
}

/// Parallel map over an index range, results in index order.
pub(crate) fn par_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Parallel in-place visit of a slice.
pub(crate) fn par_for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter_mut().enumerate().for_each(|(i, t)| f(i, t));
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().enumerate().for_each(|(i, t)| f(i, t));
    }
}
