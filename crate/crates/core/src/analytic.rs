//! Closed-form cases: Poiseuille flow between two walls with no-slip or
//! Navier conditions, and the upward flow a homogeneous suspension drives
//! just outside its depletion layer.

use crate::cascade::{AffineField, AffineSolver, CascadeState, InteriorTraces};
use crate::{Error, Result, Vec3};
use serde::{Deserialize, Serialize};

fn check_unit(x1: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x1) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x1 = {x1} outside the channel [0, 1]")))
    }
}

/// No-slip Poiseuille flow `(0, x1(x1-1)/2)` driven by the pressure
/// gradient `-e2` in the channel `0 < x1 < 1`.
pub fn poiseuille_dirichlet(x1: f64) -> Result<[f64; 2]> {
    check_unit(x1)?;
    Ok([0.0, 0.5 * x1 * (x1 - 1.0)])
}

/// The same flow with `u = ∂n u` (slip length 1) on both walls:
/// `(0, x1(x1-1)/2 - 1/2)`.
pub fn poiseuille_navier(x1: f64) -> Result<[f64; 2]> {
    check_unit(x1)?;
    Ok([0.0, 0.5 * x1 * (x1 - 1.0) - 0.5])
}

/// Condition on one channel wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WallCondition {
    Dirichlet,
    /// `u = ℓ ∂n u` with `n` the normal into the fluid.
    Navier { slip: f64 },
}

impl WallCondition {
    fn slip(self) -> f64 {
        match self {
            WallCondition::Dirichlet => 0.0,
            WallCondition::Navier { slip } => slip,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelShearProblem {
    /// Magnitude of the constant driving force.
    pub drive: f64,
    /// Wall at `x1 = 0`.
    pub lower: WallCondition,
    /// Wall at `x1 = 1`.
    pub upper: WallCondition,
    /// Number of intervals.
    pub n: usize,
}

impl ChannelShearProblem {
    pub fn new(lower: WallCondition, upper: WallCondition, n: usize) -> Self {
        Self { drive: 1.0, lower, upper, n }
    }
}

/// Finite-difference solution of `-u2'' = -drive` at the `n + 1` nodes
/// `j/n`, with ghost points closing the Navier conditions at second order.
pub fn channel_fd_solver(problem: &ChannelShearProblem) -> Result<Vec<f64>> {
    let n = problem.n;
    if n < 16 {
        return Err(Error::Precondition(format!("resolution {n} below 16")));
    }
    let (l0, l1) = (problem.lower.slip(), problem.upper.slip());
    if !(l0 >= 0.0 && l1 >= 0.0) {
        return Err(Error::Precondition("slip lengths must be nonnegative".into()));
    }
    let h = 1.0 / n as f64;
    let m = n + 1;
    let (mut a, mut b, mut c, mut d) = (vec![0.0; m], vec![-2.0; m], vec![0.0; m], vec![problem.drive * h * h; m]);
    for j in 1..n {
        a[j] = 1.0;
        c[j] = 1.0;
    }
    // u(0) = l0 u'(0): ghost u_{-1} = u_1 - 2h u_0 / l0
    if l0 == 0.0 {
        b[0] = 1.0;
        d[0] = 0.0;
    } else {
        b[0] = -2.0 - 2.0 * h / l0;
        c[0] = 2.0;
    }
    // u(1) = -l1 u'(1): ghost u_{n+1} = u_{n-1} - 2h u_n / l1
    if l1 == 0.0 {
        b[n] = 1.0;
        d[n] = 0.0;
    } else {
        b[n] = -2.0 - 2.0 * h / l1;
        a[n] = 2.0;
    }
    thomas(&a, &b, &c, &d)
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let m = b.len();
    let (mut cp, mut dp) = (vec![0.0; m], vec![0.0; m]);
    let mut den = b[0];
    for j in 0..m {
        if j > 0 {
            den = b[j] - a[j] * cp[j - 1];
        }
        if den.abs() < 1e-300 {
            return Err(Error::Precondition("singular channel system".into()));
        }
        cp[j] = c[j] / den;
        dp[j] = (d[j] - if j > 0 { a[j] * dp[j - 1] } else { 0.0 }) / den;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = dp[m - 1];
    for j in (0..m - 1).rev() {
        x[j] = dp[j] - cp[j] * x[j + 1];
    }
    Ok(x)
}

/// Wall data of `u⁰ = 0`, `p⁰ = -x3`.
pub fn homogeneous_base() -> InteriorTraces<AffineField> {
    let z = AffineField::default();
    InteriorTraces { u: [z; 3], du: [z; 3], p: AffineField { c: 0.0, a2: 0.0, a3: -1.0 } }
}

/// Velocity just outside the layer of a homogeneous suspension in
/// dimensionless units: `(0, 0, ε²/2)`.
pub fn intrinsic_convection_dimless(eps: f64) -> Result<Vec3> {
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("layer width {eps} must be positive")));
    }
    let st = CascadeState::build(homogeneous_base(), 2, &AffineSolver)?;
    let t = |i: isize, c: usize| st.traces(i).u[c].c;
    Ok(Vec3::new(t(1, 0), t(1, 1), t(1, 2)) * eps + Vec3::new(t(2, 0), t(2, 1), t(2, 2)) * (eps * eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalParams {
    pub radius: f64,
    pub rho_p: f64,
    pub rho_f: f64,
    pub gravity: f64,
    pub viscosity: f64,
    pub eps: f64,
    pub phi: f64,
}

impl DimensionalParams {
    pub fn validate(&self) -> Result<()> {
        let pos = [self.radius, self.rho_p, self.rho_f, self.gravity, self.viscosity, self.eps];
        if pos.iter().any(|v| !(*v > 0.0)) || !(self.phi >= 0.0) {
            return Err(Error::Precondition(format!("non-positive parameter in {self:?}")));
        }
        if self.rho_p <= self.rho_f {
            return Err(Error::Precondition("particles must be denser than the fluid".into()));
        }
        Ok(())
    }

    /// Stokes settling speed `V0 = 2R²(ρp - ρf)g / 9μ`.
    pub fn settling_speed(&self) -> f64 {
        2.0 * self.radius.powi(2) * (self.rho_p - self.rho_f) * self.gravity / (9.0 * self.viscosity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalConvection {
    /// `g ε² (ρp - ρf) φ / 2μ`.
    pub direct: f64,
    /// `(ε/R)² (9/4) V0 φ`.
    pub via_settling: f64,
}

/// Upward wall velocity of a homogeneous suspension in physical units.
pub fn intrinsic_convection_dimensional(p: &DimensionalParams) -> Result<DimensionalConvection> {
    p.validate()?;
    let direct = p.gravity * p.eps.powi(2) * (p.rho_p - p.rho_f) * p.phi / (2.0 * p.viscosity);
    let via_settling = (p.eps / p.radius).powi(2) * 2.25 * p.settling_speed() * p.phi;
    Ok(DimensionalConvection { direct, via_settling })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poiseuille_values() {
        assert_eq!(poiseuille_dirichlet(0.0).unwrap(), [0.0, 0.0]);
        assert_eq!(poiseuille_dirichlet(1.0).unwrap(), [0.0, 0.0]);
        assert_eq!(poiseuille_dirichlet(0.5).unwrap(), [0.0, -0.125]);
        assert_eq!(poiseuille_navier(0.0).unwrap(), [0.0, -0.5]);
        assert!(poiseuille_navier(1.5).is_err());
        assert!(poiseuille_dirichlet(-0.1).is_err());
        for x in [0.1, 0.27, 0.5, 0.9] {
            let (a, b) = (poiseuille_dirichlet(x).unwrap()[1], poiseuille_navier(x).unwrap()[1]);
            assert!((b - a + 0.5).abs() < 1e-15);
            assert!((a - poiseuille_dirichlet(1.0 - x).unwrap()[1]).abs() < 1e-16);
        }
        // u2(0) = ∂1u2(0) = -1/2
        let h = 1e-6;
        let slope = (poiseuille_navier(h).unwrap()[1] - poiseuille_navier(0.0).unwrap()[1]) / h;
        assert!((slope - poiseuille_navier(0.0).unwrap()[1]).abs() < 1e-6);
    }

    #[test]
    fn fd_matches_closed_forms() {
        let n = 1000;
        let dir = channel_fd_solver(&ChannelShearProblem::new(WallCondition::Dirichlet, WallCondition::Dirichlet, n)).unwrap();
        let nav = WallCondition::Navier { slip: 1.0 };
        let slip = channel_fd_solver(&ChannelShearProblem::new(nav, nav, n)).unwrap();
        let zero = WallCondition::Navier { slip: 0.0 };
        let reduced = channel_fd_solver(&ChannelShearProblem::new(zero, zero, n)).unwrap();
        for j in 0..=n {
            let x = j as f64 / n as f64;
            assert!((dir[j] - poiseuille_dirichlet(x).unwrap()[1]).abs() <= 1e-8);
            assert!((slip[j] - poiseuille_navier(x).unwrap()[1]).abs() <= 1e-8);
            assert_eq!(reduced[j], dir[j]);
        }
        assert!(channel_fd_solver(&ChannelShearProblem::new(nav, nav, 8)).is_err());
    }

    #[test]
    fn intrinsic_convection() {
        assert_eq!(intrinsic_convection_dimless(1.0).unwrap(), Vec3::new(0.0, 0.0, 0.5));
        assert!((intrinsic_convection_dimless(0.1).unwrap()[2] - 0.005).abs() < 1e-17);
        assert!(intrinsic_convection_dimless(0.0).is_err());
    }

    #[test]
    fn dimensional_forms_agree() {
        let p = DimensionalParams { radius: 1e-5, rho_p: 2500.0, rho_f: 1000.0, gravity: 9.81, viscosity: 1e-3, eps: 1e-5, phi: 0.05 };
        let r = intrinsic_convection_dimensional(&p).unwrap();
        assert!((r.direct - r.via_settling).abs() <= 1e-14 * r.direct);
        // ε = R gives (9/4) V0 φ
        assert!((r.via_settling - 2.25 * p.settling_speed() * p.phi).abs() <= 1e-15 * r.direct);
        let none = intrinsic_convection_dimensional(&DimensionalParams { phi: 0.0, ..p }).unwrap();
        assert_eq!((none.direct, none.via_settling), (0.0, 0.0));
        assert!(intrinsic_convection_dimensional(&DimensionalParams { rho_p: 900.0, ..p }).is_err());
    }
}
