//! Compactly supported densities used as sedimenting mass distributions.

use crate::grid::{BoxRegion, Lattice};
use crate::quadrature::gauss_legendre_on;
use crate::{Error, Result, Vec3};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Smooth 1D bump `exp(-1/(1-t²))` on `(-1, 1)`.
pub fn bump_1d(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// `∫ bump_1d` over `(-1, 1)`.
pub fn bump_1d_integral() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| {
        // the integrand is flat to all orders at ±1, so a split Gauss rule
        // converges quickly
        (0..8)
            .map(|k| {
                let a = -1.0 + 0.25 * k as f64;
                gauss_legendre_on(40, a, a + 0.25)
                    .iter()
                    .map(|&(t, w)| w * bump_1d(t))
                    .sum::<f64>()
            })
            .sum()
    })
}

/// A bounded, nonnegative density with compact support in `x1 >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityField {
    /// Product of 1D bumps; integrates to `mass`.
    Bump {
        center: [f64; 3],
        half_widths: [f64; 3],
        mass: f64,
    },
    /// Constant on a box; integrates to `mass`.
    Uniform {
        lo: [f64; 3],
        hi: [f64; 3],
        mass: f64,
    },
    /// Trilinear interpolation of node values, zero outside the lattice.
    Grid { lattice: Lattice, values: Vec<f64> },
}

impl DensityField {
    pub fn bump(center: Vec3, half_width: f64, mass: f64) -> Self {
        DensityField::Bump {
            center: center.into(),
            half_widths: [half_width; 3],
            mass,
        }
    }

    pub fn uniform(region: BoxRegion, mass: f64) -> Self {
        DensityField::Uniform {
            lo: region.lo.into(),
            hi: region.hi.into(),
            mass,
        }
    }

    /// Checks nonnegativity, finiteness and support inside `x1 >= 0`.
    pub fn validate(&self) -> Result<()> {
        let sup = self.support();
        if sup.lo[0] < 0.0 {
            return Err(Error::Precondition(format!(
                "density support {sup:?} crosses the wall"
            )));
        }
        match self {
            DensityField::Bump {
                half_widths, mass, ..
            } => {
                if half_widths.iter().any(|&w| !(w > 0.0)) || !(mass.is_finite() && *mass >= 0.0) {
                    return Err(Error::Precondition(
                        "bump needs positive widths and mass".into(),
                    ));
                }
            }
            DensityField::Uniform { lo, hi, mass } => {
                if (0..3).any(|i| !(hi[i] > lo[i])) || !(mass.is_finite() && *mass >= 0.0) {
                    return Err(Error::Precondition(
                        "uniform density needs a proper box".into(),
                    ));
                }
            }
            DensityField::Grid { lattice, values } => {
                if values.len() != lattice.len() {
                    return Err(Error::GridMismatch(format!(
                        "{} values for {} nodes",
                        values.len(),
                        lattice.len()
                    )));
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::Precondition(
                        "grid density must be finite and >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        match self {
            DensityField::Bump {
                center,
                half_widths,
                mass,
            } => {
                let z = bump_1d_integral();
                let mut v = *mass;
                for i in 0..3 {
                    v *= bump_1d((x[i] - center[i]) / half_widths[i]) / (z * half_widths[i]);
                }
                v
            }
            DensityField::Uniform { lo, hi, mass } => {
                let inside = (0..3).all(|i| x[i] >= lo[i] && x[i] <= hi[i]);
                if inside {
                    mass / self.support().volume()
                } else {
                    0.0
                }
            }
            DensityField::Grid { lattice, values } => lattice.trilinear(values, x),
        }
    }

    /// Closed support box.
    pub fn support(&self) -> BoxRegion {
        match self {
            DensityField::Bump {
                center,
                half_widths,
                ..
            } => {
                let c = Vec3::from(*center);
                let w = Vec3::from(*half_widths);
                BoxRegion::new(c - w, c + w)
            }
            DensityField::Uniform { lo, hi, .. } => BoxRegion::new((*lo).into(), (*hi).into()),
            DensityField::Grid { lattice, .. } => lattice.bounds(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            DensityField::Bump { mass, .. } | DensityField::Uniform { mass, .. } => *mass,
            DensityField::Grid { lattice, values } => lattice.integrate(values),
        }
    }

    /// Upper bound of the density, used as the rejection envelope.
    pub fn max_value(&self) -> f64 {
        match self {
            DensityField::Bump { center, .. } => self.eval(&Vec3::from(*center)),
            DensityField::Uniform { mass, .. } => mass / self.support().volume(),
            DensityField::Grid { values, .. } => values.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Same shape with unit mass.
    pub fn normalized(&self) -> Result<Self> {
        let m = self.total_mass();
        if !(m > 0.0) {
            return Err(Error::Precondition(
                "cannot normalize a zero density".into(),
            ));
        }
        Ok(match self {
            DensityField::Bump {
                center,
                half_widths,
                ..
            } => DensityField::Bump {
                center: *center,
                half_widths: *half_widths,
                mass: 1.0,
            },
            DensityField::Uniform { lo, hi, .. } => DensityField::Uniform {
                lo: *lo,
                hi: *hi,
                mass: 1.0,
            },
            DensityField::Grid { lattice, values } => DensityField::Grid {
                lattice: lattice.clone(),
                values: values.iter().map(|v| v / m).collect(),
            },
        })
    }

    /// One draw from the normalized density by rejection from its support box.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        let sup = self.support();
        let top = self.max_value();
        loop {
            let x = Vec3::from_fn(|i, _| rng.gen_range(sup.lo[i]..=sup.hi[i]));
            if rng.gen::<f64>() * top <= self.eval(&x) {
                return x;
            }
        }
    }

    /// Independent draws, deterministic for a given generator state.
    pub fn sample_iid<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Vec3> {
        (0..n).map(|_| self.sample_point(rng)).collect()
    }
}
