//! Finite clouds of sedimenting spheres: sampling under a minimal-distance
//! constraint, the fields they generate and a few diagnostics.
//!
//! Centres are stored in fluid coordinates. The wall sits at `x1 = -eps`
//! and no centre comes closer to it than `eps`.

use crate::continuum::SourceCloud;
use crate::density::DensityField;
use crate::grid::{BoxRegion, GridField, Lattice};
use crate::stokeslet::{finite_sphere_field, SphereSource};
use crate::{e3, greens, par_map_range, Error, Result, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

/// Default constant in `d_min >= C_d N^{-1/3}`.
pub const DEFAULT_C_D: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleConfig {
    pub centers: Vec<Vec3>,
    pub radius: f64,
    /// Safety factor `θ > 1` in the clearance conditions.
    pub theta: f64,
    /// Width of the particle-free layer along the wall.
    pub eps: f64,
    pub c_d: f64,
    pub support: BoxRegion,
    /// Common force on every sphere.
    pub force: Vec3,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `eps <= θR`.
    Clearance { eps: f64, theta_r: f64 },
    /// `d_min` below `max(C_d N^{-1/3}, 2θR)`.
    MinDistance { d_min: f64, required: f64, pair: (usize, usize) },
    OutsideSupport { index: usize, point: Vec3 },
    BelowLayer { index: usize, x1: f64 },
    BadParameter(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub d_min: f64,
    pub required_d_min: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Parameters for [`ParticleConfig::sample`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    pub radius: f64,
    pub theta: f64,
    pub eps: f64,
    pub c_d: f64,
}

/// Smallest pairwise distance and the pair attaining it.
pub fn min_distance(points: &[Vec3]) -> Option<(f64, (usize, usize))> {
    let mut best: Option<(f64, (usize, usize))> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i] - points[j]).norm();
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, (i, j)));
            }
        }
    }
    best
}

impl ParticleConfig {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `max(C_d N^{-1/3}, 2θR)`.
    pub fn required_d_min(&self) -> f64 {
        required_d_min(self.len(), self.c_d, self.theta, self.radius)
    }

    /// Volume fraction scale `N R³`.
    pub fn volume_fraction(&self) -> f64 {
        self.len() as f64 * self.radius.powi(3)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if !(self.radius > 0.0) || !(self.theta > 1.0) || !(self.c_d >= 0.0) {
            violations.push(Violation::BadParameter(format!(
                "R = {}, θ = {}, C_d = {}",
                self.radius, self.theta, self.c_d
            )));
        }
        let theta_r = self.theta * self.radius;
        if !(self.eps > theta_r) {
            violations.push(Violation::Clearance { eps: self.eps, theta_r });
        }
        let required = self.required_d_min();
        let (d_min, pair) = min_distance(&self.centers).unwrap_or((f64::INFINITY, (0, 0)));
        if d_min < required {
            violations.push(Violation::MinDistance { d_min, required, pair });
        }
        for (index, x) in self.centers.iter().enumerate() {
            if x[0] < 0.0 {
                violations.push(Violation::BelowLayer { index, x1: x[0] });
            }
            if !self.support.contains(x) {
                violations.push(Violation::OutsideSupport { index, point: *x });
            }
        }
        ValidationReport { d_min, required_d_min: required, violations }
    }

    /// Draws `n` centres from `rho` with the default force `-e/N`.
    pub fn sample(rho: &DensityField, n: usize, seed: u64, params: SamplingParams) -> Result<Self> {
        let required = required_d_min(n, params.c_d, params.theta, params.radius);
        let centers = sample_centers(rho, n, seed, required)?;
        let cfg = Self {
            centers,
            radius: params.radius,
            theta: params.theta,
            eps: params.eps,
            c_d: params.c_d,
            support: rho.support(),
            force: -e3() / n as f64,
            seed: Some(seed),
        };
        let report = cfg.validate();
        if !report.is_ok() {
            return Err(Error::Precondition(format!("sampled configuration invalid: {:?}", report.violations)));
        }
        Ok(cfg)
    }

    /// Every centre scaled about the origin by `s`; radius unchanged.
    pub fn scaled_centers(&self, s: f64) -> Self {
        Self { centers: self.centers.iter().map(|c| c * s).collect(), support: BoxRegion::new(self.support.lo * s, self.support.hi * s), ..self.clone() }
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..self.clone() }
    }

    fn wall_frame(&self, x: &Vec3) -> Vec3 {
        Vec3::new(x[0] + self.eps, x[1], x[2])
    }

    fn spheres(&self) -> Result<Vec<SphereSource>> {
        self.centers.iter().map(|c| SphereSource::new(self.wall_frame(c), self.radius, self.force, self.theta)).collect()
    }

    pub fn to_file(&self) -> ParticleConfigFile {
        ParticleConfigFile {
            n: self.len(),
            radius: self.radius,
            theta: self.theta,
            eps: self.eps,
            c_d: self.c_d,
            seed: self.seed,
            support_lo: self.support.lo.into(),
            support_hi: self.support.hi.into(),
            force: self.force.into(),
            centers: self.centers.iter().map(|c| (*c).into()).collect(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&self.to_file()).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: ParticleConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if f.centers.len() != f.n {
            return Err(Error::Config(format!("n = {} but {} centres listed", f.n, f.centers.len())));
        }
        Ok(Self {
            centers: f.centers.into_iter().map(Vec3::from).collect(),
            radius: f.radius,
            theta: f.theta,
            eps: f.eps,
            c_d: f.c_d,
            support: BoxRegion::new(f.support_lo.into(), f.support_hi.into()),
            force: f.force.into(),
            seed: f.seed,
        })
    }
}

/// On-disk form of a [`ParticleConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleConfigFile {
    pub n: usize,
    pub radius: f64,
    pub theta: f64,
    pub eps: f64,
    pub c_d: f64,
    pub seed: Option<u64>,
    pub support_lo: [f64; 3],
    pub support_hi: [f64; 3],
    pub force: [f64; 3],
    pub centers: Vec<[f64; 3]>,
}

pub fn required_d_min(n: usize, c_d: f64, theta: f64, radius: f64) -> f64 {
    (c_d * (n.max(1) as f64).powf(-1.0 / 3.0)).max(2.0 * theta * radius)
}

/// Rejection sampling from `rho` with dart throwing at distance `d_min`.
/// Deterministic for a given seed; gives up after `200 n` rejections.
pub fn sample_centers(rho: &DensityField, n: usize, seed: u64, d_min: f64) -> Result<Vec<Vec3>> {
    rho.validate()?;
    let sup = rho.support();
    let packed = n as f64 * PI / 6.0 * d_min.powi(3);
    if packed > 0.74 * sup.volume() {
        return Err(Error::Infeasible(format!(
            "{n} balls of diameter {d_min} cannot pack into a support of volume {:.3e}",
            sup.volume()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = d_min.max(1e-12);
    let key = |x: &Vec3| -> [i64; 3] { [0, 1, 2].map(|i| ((x[i] - sup.lo[i]) / cell).floor() as i64) };
    let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut pts: Vec<Vec3> = Vec::with_capacity(n);
    let max_rejections = 200 * n;
    let mut rejections = 0;
    while pts.len() < n {
        let x = rho.sample_point(&mut rng);
        let k = key(&x);
        let mut clash = false;
        'near: for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    if let Some(list) = buckets.get(&[k[0] + a, k[1] + b, k[2] + c]) {
                        if list.iter().any(|&j| (pts[j] - x).norm() < d_min) {
                            clash = true;
                            break 'near;
                        }
                    }
                }
            }
        }
        if clash {
            rejections += 1;
            if rejections > max_rejections {
                return Err(Error::Infeasible(format!(
                    "placed {} of {n} centres at distance {d_min} before {max_rejections} rejections",
                    pts.len()
                )));
            }
            continue;
        }
        buckets.entry(k).or_default().push(pts.len());
        pts.push(x);
    }
    Ok(pts)
}

/// `Σ_i U_R[F](x, X_i)` plus the body-force part `body` (evaluated with the
/// same layer shift), for `x` outside all spheres.
pub fn u_app(x: &Vec3, cfg: &ParticleConfig, body: Option<&SourceCloud>) -> Result<Vec3> {
    let xw = cfg.wall_frame(x);
    let mut u = Vec3::zeros();
    for s in cfg.spheres()? {
        u += finite_sphere_field(&xw, &s)?;
    }
    if let Some(b) = body {
        u += b.velocity(x, cfg.eps)?;
    }
    Ok(u)
}

/// Point-force superposition `Σ_i G_ε(x, X_i) F` plus `body`.
pub fn v_n(x: &Vec3, cfg: &ParticleConfig, body: Option<&SourceCloud>) -> Result<Vec3> {
    let xw = cfg.wall_frame(x);
    let mut u = Vec3::zeros();
    for c in &cfg.centers {
        u += greens::greens_apply(&xw, &cfg.wall_frame(c), &cfg.force)?;
    }
    if let Some(b) = body {
        u += b.velocity(x, cfg.eps)?;
    }
    Ok(u)
}

fn on_lattice(lattice: &Lattice, f: impl Fn(&Vec3) -> Result<Vec3> + Sync + Send) -> Result<GridField> {
    let velocity = par_map_range(lattice.len(), |i| f(&lattice.point_at(i))).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(GridField { lattice: lattice.clone(), velocity, pressure: None })
}

/// [`v_n`] at every lattice node.
pub fn v_n_lattice(lattice: &Lattice, cfg: &ParticleConfig, body: Option<&SourceCloud>) -> Result<GridField> {
    on_lattice(lattice, |x| v_n(x, cfg, body))
}

/// `u_app - v_N` at every lattice node. Nodes inside a sphere are set to
/// zero and flagged in the returned mask.
pub fn app_minus_point_lattice(lattice: &Lattice, cfg: &ParticleConfig) -> Result<(GridField, Vec<bool>)> {
    let mask: Vec<bool> = (0..lattice.len())
        .map(|i| {
            let x = lattice.point_at(i);
            cfg.centers.iter().any(|c| (x - c).norm() < cfg.radius)
        })
        .collect();
    let field = on_lattice(lattice, |x| {
        if cfg.centers.iter().any(|c| (x - c).norm() < cfg.radius) {
            return Ok(Vec3::zeros());
        }
        Ok(u_app(x, cfg, None)? - v_n(x, cfg, None)?)
    })?;
    Ok((field, mask))
}

/// `max_i (1/N) Σ_{j≠i} |X_i - X_j|^{-2}`.
pub fn interaction_sum(cfg: &ParticleConfig) -> Result<f64> {
    let n = cfg.len();
    if n < 2 {
        return Err(Error::Precondition("interaction sum needs two particles".into()));
    }
    let per = par_map_range(n, |i| {
        let s: f64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (cfg.centers[i] - cfg.centers[j]).norm_squared()).sum();
        s / n as f64
    });
    Ok(per.into_iter().fold(0.0, f64::max))
}

/// 1D transport distance between two empirical measures with uniform weights.
pub fn w1_1d(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len(), b.len());
    if na == 0 || nb == 0 {
        return 0.0;
    }
    // integrate |F_a^{-1}(t) - F_b^{-1}(t)| over the merged breakpoints
    let (mut i, mut j, mut t, mut acc) = (0, 0, 0.0, 0.0);
    while i < na && j < nb {
        let ta = (i + 1) as f64 / na as f64;
        let tb = (j + 1) as f64 / nb as f64;
        let next = ta.min(tb);
        acc += (next - t) * (a[i] - b[j]).abs();
        t = next;
        if ta <= tb {
            i += 1;
        }
        if tb <= ta {
            j += 1;
        }
    }
    acc
}

/// Number of reference draws standing in for the density's quantiles.
pub const W1_REFERENCE_SAMPLES: usize = 10_000;

/// Sliced W1 between the empirical measure of `points` and `rho`, averaged
/// over `n_slices` random directions.
pub fn estimate_w1(points: &[Vec3], rho: &DensityField, n_slices: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = rho.normalized()?.sample_iid(W1_REFERENCE_SAMPLES, &mut rng);
    Ok(sliced_w1(points, &reference, n_slices, &mut rng))
}

/// Sliced W1 between two point sets.
pub fn sliced_w1<R: Rng + ?Sized>(a: &[Vec3], b: &[Vec3], n_slices: usize, rng: &mut R) -> f64 {
    let mut total = 0.0;
    for _ in 0..n_slices {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let s = (1.0 - z * z).max(0.0).sqrt();
        let dir = Vec3::new(s * phi.cos(), s * phi.sin(), z);
        let mut pa: Vec<f64> = a.iter().map(|p| p.dot(&dir)).collect();
        let mut pb: Vec<f64> = b.iter().map(|p| p.dot(&dir)).collect();
        total += w1_1d(&mut pa, &mut pb);
    }
    total / n_slices.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> DensityField {
        DensityField::uniform(BoxRegion::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 1.0, 1.0)), 1.0)
    }

    fn config(centers: Vec<Vec3>, eps: f64) -> ParticleConfig {
        let n = centers.len();
        ParticleConfig {
            centers,
            radius: 0.01,
            theta: 1.5,
            eps,
            c_d: 0.0,
            support: BoxRegion::new(Vec3::new(0.0, -5.0, -5.0), Vec3::new(5.0, 5.0, 5.0)),
            force: -e3() / n as f64,
            seed: None,
        }
    }

    #[test]
    fn validation_reports_each_hypothesis() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let r = config(vec![x, x], 0.1).validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::MinDistance { .. })));
        let r = config(vec![x], 0.015).validate();
        assert!(matches!(r.violations[..], [Violation::Clearance { .. }]));
        assert!(config(vec![x, Vec3::new(1.5, 0.0, 0.0)], 0.02).validate().is_ok());
        let far = config(vec![Vec3::new(9.0, 0.0, 0.0)], 0.1).validate();
        assert!(matches!(far.violations[..], [Violation::OutsideSupport { index: 0, .. }]));
    }

    #[test]
    fn sampler_feasibility_and_determinism() {
        let rho = unit_cube();
        let a = sample_centers(&rho, 8, 7, 0.4).unwrap();
        assert_eq!(a, sample_centers(&rho, 8, 7, 0.4).unwrap());
        assert_ne!(a, sample_centers(&rho, 8, 8, 0.4).unwrap());
        assert!(min_distance(&a).unwrap().0 >= 0.4);
        assert!(matches!(sample_centers(&rho, 8, 7, 1.0), Err(Error::Infeasible(_))));
        let params = SamplingParams { radius: 1e-4, theta: 2.0, eps: 1e-3, c_d: 0.3 };
        let cfg = ParticleConfig::sample(&rho, 1000, 3, params).unwrap();
        assert!(cfg.validate().is_ok());
        assert!(cfg.validate().d_min >= 0.03);
    }

    #[test]
    fn single_particle_fields() {
        let cfg = config(vec![Vec3::new(0.5, 0.1, -0.2)], 0.05);
        let x = Vec3::new(0.8, 0.3, 0.1);
        let s = SphereSource::new(Vec3::new(0.55, 0.1, -0.2), 0.01, cfg.force, 1.5).unwrap();
        let xw = Vec3::new(0.85, 0.3, 0.1);
        assert!((u_app(&x, &cfg, None).unwrap() - finite_sphere_field(&xw, &s).unwrap()).norm() < 1e-15);
        let g = greens::greens(&xw, &s.center).unwrap() * e3();
        assert!((v_n(&x, &cfg, None).unwrap() + g).norm() < 1e-16);
        // the physical wall
        let w = Vec3::new(-0.05, 0.4, 0.2);
        assert!(u_app(&w, &cfg, None).unwrap().norm() < 1e-12);
        assert!(v_n(&w, &cfg, None).unwrap().norm() < 1e-12);
        assert!(u_app(&Vec3::new(0.505, 0.1, -0.2), &cfg, None).is_err());
    }

    #[test]
    fn interaction_sum_values() {
        let cfg = config(vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0)], 0.1);
        assert!((interaction_sum(&cfg).unwrap() - 0.5).abs() < 1e-15);
        let big = cfg.scaled_centers(2.0);
        assert!((interaction_sum(&big).unwrap() - 0.125).abs() < 1e-15);
        assert!(interaction_sum(&config(vec![Vec3::new(1.0, 0.0, 0.0)], 0.1)).is_err());
    }

    #[test]
    fn w1_basics() {
        let mut a = vec![0.0, 1.0];
        let mut b = vec![0.5];
        assert!((w1_1d(&mut a, &mut b) - 0.5).abs() < 1e-15);
        let pts: Vec<Vec3> = (0..50).map(|i| Vec3::new(i as f64 * 0.01, 0.3, -0.1)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sliced_w1(&pts, &pts, 10, &mut rng), 0.0);
        let moved: Vec<Vec3> = pts.iter().map(|p| p + Vec3::new(0.0, 0.2, 0.0)).collect();
        let d = sliced_w1(&pts, &moved, 10, &mut rng);
        assert!(d > 0.0 && d <= 0.2 + 1e-15);
    }

    #[test]
    fn config_round_trips_through_toml() {
        let rho = unit_cube();
        let params = SamplingParams { radius: 1e-3, theta: 2.0, eps: 1e-2, c_d: 0.3 };
        let cfg = ParticleConfig::sample(&rho, 20, 11, params).unwrap();
        let back = ParticleConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
