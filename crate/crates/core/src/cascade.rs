//! Boundary-layer expansion of the depletion-layer problem.
//!
//! Inside the layer `-ε < x1 < 0` the flow is `Σ εⁱ Uⁱ(x1/ε, x2, x3)`,
//! outside it is `Σ εⁱ uⁱ(x)`. Each profile `Uⁱ(s, ·)` is a polynomial
//! in `s ∈ [-1, 0]` whose coefficients are tangential fields; each `uⁱ`
//! (`i ≥ 1`) solves homogeneous Stokes flow with wall data `Uⁱ(0, ·)`.
//!
//! For `i ≥ 1`:
//!
//! ```text
//! Uⁱ₁(s)   = -∫_{-1}^s (∂2 Uⁱ⁻¹₂ + ∂3 Uⁱ⁻¹₃)
//! Pⁱ⁻¹(0)  = ∂s Uⁱ₁(0) - ∂1 uⁱ⁻¹₁ + pⁱ⁻¹
//! Pⁱ⁻¹(s)  = Pⁱ⁻¹(0) + ∂s Uⁱ₁(s) - ∂s Uⁱ₁(0) + ∫_0^s Δ' Uⁱ⁻²₁
//! Uⁱ_k(s)  = (s+1) ∂1 uⁱ⁻¹_k + ∫_{-1}^s ∫_0^t (-Δ' Uⁱ⁻²_k + ∂k Pⁱ⁻²)     k = 2, 3
//! ```
//!
//! with every wall quantity taken at `x1 = 0` and all terms of negative
//! order zero.

use crate::continuum::{solve_dirichlet_halfspace, DirichletSolution, SourceCloud, WallTraces};
use crate::spectral::SpectralField;
use crate::{Error, Result, Vec3};
use std::io::Write;

/// Tangential fields the recursion operates on.
pub trait TangentialAlgebra: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, a: f64) -> Self;
    /// `∂2` for `axis = 0`, `∂3` for `axis = 1`.
    fn d(&self, axis: usize) -> Self;
    /// `∂2² + ∂3²`.
    fn laplacian(&self) -> Self;
    fn value_at(&self, x2: f64, x3: f64) -> f64;
    fn max_abs(&self) -> f64;

    fn neg(&self) -> Self {
        self.scale(-1.0)
    }
}

impl TangentialAlgebra for SpectralField {
    fn zero_like(&self) -> Self {
        SpectralField::zeros(self.grid)
    }
    fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }
    fn scale(&self, a: f64) -> Self {
        SpectralField::scale(self, a)
    }
    fn d(&self, axis: usize) -> Self {
        self.derivative(axis)
    }
    fn laplacian(&self) -> Self {
        SpectralField::laplacian(self)
    }
    fn value_at(&self, x2: f64, x3: f64) -> f64 {
        SpectralField::value_at(self, x2, x3)
    }
    fn max_abs(&self) -> f64 {
        SpectralField::max_abs(self)
    }
}

/// `c + a2 x2 + a3 x3`, for wall data that do not decay (a homogeneous
/// suspension with its hydrostatic pressure).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AffineField {
    pub c: f64,
    pub a2: f64,
    pub a3: f64,
}

impl AffineField {
    pub fn constant(c: f64) -> Self {
        Self { c, a2: 0.0, a3: 0.0 }
    }
}

impl TangentialAlgebra for AffineField {
    fn zero_like(&self) -> Self {
        Self::default()
    }
    fn add(&self, o: &Self) -> Self {
        Self { c: self.c + o.c, a2: self.a2 + o.a2, a3: self.a3 + o.a3 }
    }
    fn sub(&self, o: &Self) -> Self {
        Self { c: self.c - o.c, a2: self.a2 - o.a2, a3: self.a3 - o.a3 }
    }
    fn scale(&self, a: f64) -> Self {
        Self { c: self.c * a, a2: self.a2 * a, a3: self.a3 * a }
    }
    fn d(&self, axis: usize) -> Self {
        Self::constant(if axis == 0 { self.a2 } else { self.a3 })
    }
    fn laplacian(&self) -> Self {
        Self::default()
    }
    fn value_at(&self, x2: f64, x3: f64) -> f64 {
        self.c + self.a2 * x2 + self.a3 * x3
    }
    /// Unbounded unless the slopes vanish.
    fn max_abs(&self) -> f64 {
        if self.a2 == 0.0 && self.a3 == 0.0 {
            self.c.abs()
        } else {
            f64::INFINITY
        }
    }
}

/// Polynomial in `s` stored by Taylor coefficients at `s = 0`:
/// `Σ a_k s^k / k!`. Differentiation and integration from 0 are index
/// shifts, so the divergence relation holds exactly coefficient by
/// coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SPoly<F> {
    pub taylor: Vec<F>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

impl<F: TangentialAlgebra> SPoly<F> {
    pub fn zero() -> Self {
        Self { taylor: Vec::new() }
    }

    /// `a + b s`.
    pub fn linear(a: F, b: F) -> Self {
        Self { taylor: vec![a, b] }
    }

    pub fn is_zero(&self) -> bool {
        self.taylor.is_empty()
    }

    /// Highest stored power.
    pub fn degree(&self) -> usize {
        self.taylor.len().saturating_sub(1)
    }

    /// Taylor coefficient `∂s^k P(0)`, `None` past the degree.
    pub fn coeff(&self, k: usize) -> Option<&F> {
        self.taylor.get(k)
    }

    fn coeff_or(&self, k: usize, zero: &F) -> F {
        self.taylor.get(k).cloned().unwrap_or_else(|| zero.clone())
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Self { taylor: self.taylor.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.taylor.len().max(o.taylor.len());
        let taylor = (0..n)
            .map(|k| match (self.taylor.get(k), o.taylor.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self { taylor }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn derivative(&self) -> Self {
        Self { taylor: self.taylor.iter().skip(1).cloned().collect() }
    }

    pub fn eval(&self, s: f64, zero: &F) -> F {
        let mut acc = zero.clone();
        for (k, c) in self.taylor.iter().enumerate() {
            acc = acc.add(&c.scale(s.powi(k as i32) / factorial(k)));
        }
        acc
    }

    /// `∫_0^s P`.
    pub fn integral_from_zero(&self, zero: &F) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut taylor = vec![zero.clone()];
        taylor.extend(self.taylor.iter().cloned());
        Self { taylor }
    }

    /// `∫_a^s P`.
    pub fn integral_from(&self, a: f64, zero: &F) -> Self {
        let mut q = self.integral_from_zero(zero);
        if !q.is_zero() {
            let at = q.eval(a, zero);
            q.taylor[0] = q.taylor[0].sub(&at);
        }
        q
    }

    pub fn value_at(&self, s: f64, x2: f64, x3: f64) -> f64 {
        self.taylor
            .iter()
            .enumerate()
            .map(|(k, c)| c.value_at(x2, x3) * s.powi(k as i32) / factorial(k))
            .sum()
    }
}

/// Values of an interior field on the wall `x1 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorTraces<F> {
    pub u: [F; 3],
    pub du: [F; 3],
    pub p: F,
}

impl<F: TangentialAlgebra> InteriorTraces<F> {
    pub fn zero(template: &F) -> Self {
        let z = template.zero_like();
        Self { u: [z.clone(), z.clone(), z.clone()], du: [z.clone(), z.clone(), z.clone()], p: z }
    }
}

/// An interior Stokes field known on the wall and pointwise in `x1 >= 0`.
pub trait InteriorField<F> {
    fn traces(&self) -> InteriorTraces<F>;
    fn eval(&self, x: &Vec3) -> Result<Vec3>;
}

/// Homogeneous Stokes solver for wall data in a given algebra.
pub trait InteriorSolver<F> {
    type Solution: InteriorField<F>;
    fn solve(&self, g: &[F; 3]) -> Result<Self::Solution>;
}

/// Dirichlet solves on the periodic tangential square.
#[derive(Debug, Clone, Copy)]
pub struct SpectralSolver {
    pub tol_edge: f64,
}

impl Default for SpectralSolver {
    fn default() -> Self {
        Self { tol_edge: crate::continuum::DEFAULT_TOL_EDGE }
    }
}

/// A Dirichlet solution together with its wall data.
#[derive(Debug, Clone)]
pub struct SpectralInterior {
    pub solution: DirichletSolution,
}

impl InteriorField<SpectralField> for SpectralInterior {
    fn traces(&self) -> InteriorTraces<SpectralField> {
        InteriorTraces {
            u: self.solution.data.clone(),
            du: self.solution.plane_normal_derivative(0.0),
            p: self.solution.plane_pressure(0.0),
        }
    }
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.solution.eval_point(x)?.0)
    }
}

impl InteriorSolver<SpectralField> for SpectralSolver {
    type Solution = SpectralInterior;
    fn solve(&self, g: &[SpectralField; 3]) -> Result<SpectralInterior> {
        Ok(SpectralInterior { solution: solve_dirichlet_halfspace(g, self.tol_edge)? })
    }
}

/// Exact solver for affine wall data: `u = g - x1 (∂2 g2 + ∂3 g3) e1`,
/// `p = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AffineSolver;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineInterior {
    pub g: [AffineField; 3],
}

impl AffineInterior {
    fn div(&self) -> AffineField {
        self.g[1].d(0).add(&self.g[2].d(1))
    }
}

impl InteriorField<AffineField> for AffineInterior {
    fn traces(&self) -> InteriorTraces<AffineField> {
        let z = AffineField::default();
        InteriorTraces { u: self.g, du: [self.div().neg(), z, z], p: z }
    }
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        if x[0] < 0.0 {
            return Err(Error::Domain(format!("{x:?} below the wall")));
        }
        let v = self.g.map(|c| c.value_at(x[1], x[2]));
        Ok(Vec3::new(v[0] - x[0] * self.div().c, v[1], v[2]))
    }
}

impl InteriorSolver<AffineField> for AffineSolver {
    type Solution = AffineInterior;
    fn solve(&self, g: &[AffineField; 3]) -> Result<AffineInterior> {
        Ok(AffineInterior { g: *g })
    }
}

/// The no-slip body-force flow `u⁰` as the cascade's base: wall traces
/// from the solver and pointwise values from its point forces.
#[derive(Debug, Clone)]
pub struct BodyForceBase {
    pub traces: WallTraces,
    pub cloud: SourceCloud,
}

impl InteriorField<SpectralField> for BodyForceBase {
    fn traces(&self) -> InteriorTraces<SpectralField> {
        let z = self.traces.p.zero_like();
        InteriorTraces { u: [z.clone(), z.clone(), z], du: self.traces.du.clone(), p: self.traces.p.clone() }
    }
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        self.cloud.velocity(x, 0.0)
    }
}

/// `Uⁱ` and `Pⁱ⁻¹` for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<F> {
    pub order: usize,
    pub u: [SPoly<F>; 3],
    pub p_prev: SPoly<F>,
}

/// Profiles and interior correctors through some order.
pub struct CascadeState<F, S: InteriorSolver<F>> {
    zero: F,
    /// Wall traces of `u⁰, p⁰`.
    pub base: InteriorTraces<F>,
    /// `U⁰, U¹, …` with the matching `P⁻¹, P⁰, …`.
    pub profiles: Vec<Profile<F>>,
    /// `u¹, u², …`.
    pub interior: Vec<S::Solution>,
}

impl<F: TangentialAlgebra, S: InteriorSolver<F>> CascadeState<F, S> {
    /// Order-0 state: `U⁰ = 0`.
    pub fn new(base: InteriorTraces<F>) -> Self {
        let zero = base.p.zero_like();
        let profile = Profile { order: 0, u: [SPoly::zero(), SPoly::zero(), SPoly::zero()], p_prev: SPoly::zero() };
        Self { zero, base, profiles: vec![profile], interior: Vec::new() }
    }

    /// Highest completed order.
    pub fn order(&self) -> usize {
        self.profiles.len() - 1
    }

    pub fn zero(&self) -> &F {
        &self.zero
    }

    /// Wall traces of `uⁱ`; zero for negative orders.
    pub fn traces(&self, i: isize) -> InteriorTraces<F> {
        match i {
            i if i < 0 => InteriorTraces::zero(&self.zero),
            0 => self.base.clone(),
            i => self.interior[i as usize - 1].traces(),
        }
    }

    fn profile(&self, i: isize) -> Option<&Profile<F>> {
        if i < 0 {
            None
        } else {
            self.profiles.get(i as usize)
        }
    }

    /// Adds order `i = order() + 1`.
    pub fn step(&mut self, solver: &S) -> Result<()> {
        let i = self.profiles.len() as isize;
        let z = self.zero.clone();
        let zp = SPoly::<F>::zero();
        let prev = self.profile(i - 1).ok_or_else(|| Error::Precondition("missing order i-1".into()))?;
        let u_prev2 = match self.profile(i - 2) {
            Some(p) => p.u.clone(),
            None => [zp.clone(), zp.clone(), zp.clone()],
        };
        // P^{i-2} lives on profile i-1
        let p_im2 = prev.p_prev.clone();
        let t_prev = self.traces(i - 1);

        let div = prev.u[1].map(|c| c.d(0)).add(&prev.u[2].map(|c| c.d(1)));
        let u1 = div.neg().integral_from(-1.0, &z);

        let ds_u1 = u1.derivative();
        let p0 = ds_u1.coeff_or(0, &z).sub(&t_prev.du[0]).add(&t_prev.p);
        let mut p = ds_u1.clone();
        if p.is_zero() {
            p.taylor.push(p0);
        } else {
            p.taylor[0] = p0;
        }
        let p = p.add(&u_prev2[0].map(|c| c.laplacian()).integral_from_zero(&z));

        let tangential = |k: usize| {
            let inner = u_prev2[k].map(|c| c.laplacian()).neg().add(&p_im2.map(|c| c.d(k - 1)));
            let integ = inner.integral_from_zero(&z).integral_from(-1.0, &z);
            integ.add(&SPoly::linear(t_prev.du[k].clone(), t_prev.du[k].clone()))
        };
        let u = [u1, tangential(1), tangential(2)];
        let g = [u[0].coeff_or(0, &z), u[1].coeff_or(0, &z), u[2].coeff_or(0, &z)];
        let sol = solver.solve(&g)?;
        self.profiles.push(Profile { order: i as usize, u, p_prev: p });
        self.interior.push(sol);
        Ok(())
    }

    /// Runs [`Self::step`] until order `m`.
    pub fn build(base: InteriorTraces<F>, m: usize, solver: &S) -> Result<Self> {
        let mut st = Self::new(base);
        while st.order() < m {
            st.step(solver)?;
        }
        Ok(st)
    }

    /// `max |∂s Uⁱ₁ + ∂2 Uⁱ⁻¹₂ + ∂3 Uⁱ⁻¹₃|` over all coefficients of order `i`.
    pub fn divergence_residual(&self, i: usize) -> f64 {
        if i == 0 {
            return self.profiles[0].u[0].derivative().taylor.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
        }
        let (cur, prev) = (&self.profiles[i], &self.profiles[i - 1]);
        let div = prev.u[1].map(|c| c.d(0)).add(&prev.u[2].map(|c| c.d(1)));
        let r = cur.u[0].derivative().add(&div);
        r.taylor.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Whether every coefficient of that residual is exactly zero.
    pub fn divergence_exact(&self, i: usize) -> bool {
        if i == 0 {
            return self.profiles[0].u.iter().all(|p| p.is_zero());
        }
        let (cur, prev) = (&self.profiles[i], &self.profiles[i - 1]);
        let div = prev.u[1].map(|c| c.d(0)).add(&prev.u[2].map(|c| c.d(1)));
        let r = cur.u[0].derivative().add(&div);
        r.taylor.iter().all(|c| *c == c.zero_like())
    }

    /// `max |∂s Uⁱ(0) - Pⁱ⁻¹(0) e1 - ∂1 uⁱ⁻¹ + pⁱ⁻¹ e1|`.
    pub fn stress_residual(&self, i: usize) -> f64 {
        if i == 0 {
            return 0.0;
        }
        let z = &self.zero;
        let pr = &self.profiles[i];
        let t = self.traces(i as isize - 1);
        let p0 = pr.p_prev.eval(0.0, z);
        let c = |k: usize| pr.u[k].derivative().eval(0.0, z);
        let r1 = c(0).sub(&p0).sub(&t.du[0]).add(&t.p);
        let r2 = c(1).sub(&t.du[1]);
        let r3 = c(2).sub(&t.du[2]);
        r1.max_abs().max(r2.max_abs()).max(r3.max_abs())
    }

    /// `max |Uⁱ(-1)|`, exactly zero by construction.
    pub fn wall_value(&self, i: usize) -> f64 {
        self.profiles[i].u.iter().map(|p| p.eval(-1.0, &self.zero).max_abs()).fold(0.0, f64::max)
    }

    /// Two-part expansion through order `m` at `x`: the interior sum for
    /// `x1 > 0`, the layer sum with `s = x1/ε` for `-ε <= x1 <= 0`.
    pub fn expansion_eval(&self, base: &dyn InteriorField<F>, m: usize, eps: f64, x: &Vec3) -> Result<Vec3> {
        if m > self.order() {
            return Err(Error::Precondition(format!("expansion order {m} not built (have {})", self.order())));
        }
        if x[0] < -eps {
            return Err(Error::Domain(format!("{x:?} below the wall x1 = {}", -eps)));
        }
        let mut v = Vec3::zeros();
        if x[0] > 0.0 {
            v += base.eval(x)?;
            for i in 1..=m {
                v += self.interior[i - 1].eval(x)? * eps.powi(i as i32);
            }
        } else {
            let s = if eps > 0.0 { x[0] / eps } else { 0.0 };
            for i in 0..=m {
                let w = eps.powi(i as i32);
                for c in 0..3 {
                    v[c] += w * self.profiles[i].u[c].value_at(s, x[1], x[2]);
                }
            }
        }
        Ok(v)
    }

    /// One row per (order, component, Taylor index) with the coefficient's
    /// largest magnitude, then the wall data of each `uⁱ`.
    pub fn write_summary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "order,field,component,taylor_index,max_abs")?;
        for pr in &self.profiles {
            for (c, poly) in pr.u.iter().enumerate() {
                for (k, coef) in poly.taylor.iter().enumerate() {
                    writeln!(w, "{},U,{},{},{:e}", pr.order, c + 1, k, coef.max_abs())?;
                }
            }
            for (k, coef) in pr.p_prev.taylor.iter().enumerate() {
                writeln!(w, "{},P,0,{},{:e}", pr.order, k, coef.max_abs())?;
            }
        }
        for i in 1..=self.order() {
            let t = self.traces(i as isize);
            for c in 0..3 {
                writeln!(w, "{i},u_wall,{},0,{:e}", c + 1, t.u[c].max_abs())?;
            }
        }
        Ok(())
    }
}

/// Wall data of `u¹`: `(0, ∂1u⁰₂, ∂1u⁰₃)`.
pub fn u1_data<F: TangentialAlgebra>(base: &InteriorTraces<F>) -> [F; 3] {
    [base.p.zero_like(), base.du[1].clone(), base.du[2].clone()]
}

/// Wall data of `u²`: `½ ∂1²u⁰₁` and `∂1u¹_k + ½(∂1∂k u⁰₁ - ∂k p⁰)`,
/// with `∂1²u⁰₁ = -(∂2 ∂1u⁰₂ + ∂3 ∂1u⁰₃)` on the wall.
pub fn u2_data<F: TangentialAlgebra>(base: &InteriorTraces<F>, first: &InteriorTraces<F>) -> [F; 3] {
    let d11u1 = base.du[1].d(0).add(&base.du[2].d(1)).neg();
    let p0 = base.p.zero_like().sub(&base.du[0]).add(&base.p);
    let tangential = |k: usize| p0.d(k - 1).scale(0.5).neg().add(&first.du[k]);
    [d11u1.scale(0.5), tangential(1), tangential(2)]
}

/// `u¹` from its closed-form wall data.
pub fn u1_system<F: TangentialAlgebra, S: InteriorSolver<F>>(base: &InteriorTraces<F>, solver: &S) -> Result<S::Solution> {
    solver.solve(&u1_data(base))
}

/// `u²` from its closed-form wall data.
pub fn u2_system<F: TangentialAlgebra, S: InteriorSolver<F>>(
    base: &InteriorTraces<F>,
    first: &InteriorTraces<F>,
    solver: &S,
) -> Result<S::Solution> {
    solver.solve(&u2_data(base, first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TangentialGrid;

    fn homogeneous() -> InteriorTraces<AffineField> {
        let z = AffineField::default();
        InteriorTraces { u: [z; 3], du: [z; 3], p: AffineField { c: 0.0, a2: 0.0, a3: -1.0 } }
    }

    #[test]
    fn polynomial_calculus() {
        let a = AffineField::constant(2.0);
        let z = AffineField::default();
        // 2 + 2s, integrated from -1: 2(s+1) + (s² - 1) ... = (s+1)²
        let p = SPoly::linear(a, a).integral_from(-1.0, &z);
        for s in [-1.0, -0.5, 0.0] {
            assert!((p.eval(s, &z).c - (s + 1.0) * (s + 1.0)).abs() < 1e-15);
        }
        assert_eq!(p.derivative().taylor, vec![a, a]);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn homogeneous_suspension_gives_upward_half() {
        let st = CascadeState::<AffineField, AffineSolver>::build(homogeneous(), 2, &AffineSolver).unwrap();
        let t1 = st.traces(1);
        assert!(t1.u.iter().all(|c| *c == AffineField::default()));
        let want = [AffineField::default(), AffineField::default(), AffineField::constant(0.5)];
        assert_eq!(u2_data(&homogeneous(), &t1), want);
        assert_eq!(st.traces(2).u, want);
        // the upward flow of order ε² just outside the layer
        let u = st.expansion_eval(&AffineInterior { g: [AffineField::default(); 3] }, 2, 0.1, &Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert!((u - Vec3::new(0.0, 0.0, 0.005)).norm() < 1e-15);
    }

    #[test]
    fn zero_input_propagates() {
        let g = TangentialGrid::new(16, 0.25);
        let base = InteriorTraces::zero(&SpectralField::zeros(g));
        let st = CascadeState::<SpectralField, SpectralSolver>::build(base, 3, &SpectralSolver::default()).unwrap();
        for i in 0..=3 {
            assert!(st.profiles[i].u.iter().all(|p| p.taylor.iter().all(|c| c.max_abs() == 0.0)));
        }
    }

    #[test]
    fn first_profile_matches_the_quoted_form() {
        let z = AffineField::default();
        let base = InteriorTraces {
            u: [z; 3],
            du: [AffineField::constant(0.3), AffineField { c: 1.0, a2: 0.5, a3: 0.0 }, AffineField::constant(-2.0)],
            p: AffineField { c: 0.7, a2: 0.0, a3: 1.5 },
        };
        let st = CascadeState::<AffineField, AffineSolver>::build(base.clone(), 2, &AffineSolver).unwrap();
        let pr = &st.profiles[1];
        assert!(pr.u[0].taylor.iter().all(|c| *c == z) || pr.u[0].is_zero());
        assert_eq!(pr.p_prev.eval(0.0, &z), base.p.sub(&base.du[0]));
        assert_eq!(pr.u[1], SPoly::linear(base.du[1], base.du[1]));
        // U²₁ = (s+1)²/2 · ∂1²u⁰₁ with ∂1²u⁰₁ = -∂2 ∂1u⁰₂ = -0.5
        let u21 = &st.profiles[2].u[0];
        for s in [-1.0, -0.3, 0.0] {
            assert!((u21.eval(s, &z).c - 0.5 * (s + 1.0) * (s + 1.0) * -0.5).abs() < 1e-15);
        }
    }
}
