//! Size of the finite-sphere correction as the radius shrinks at fixed
//! centres.

use super::{fit_loglog, Check, ExperimentConfig, SlopeFit};
use crate::continuum::{eval_lattice, Forcing};
use crate::particles::{app_minus_point_lattice, ParticleConfig, SamplingParams};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusRow {
    pub radius: f64,
    /// `|u_app - v_N|_{L^q(K)}` per exponent.
    pub norms: Vec<(f64, f64)>,
    /// Lattice nodes falling inside a sphere.
    pub masked: usize,
}

#[derive(Debug, Clone)]
pub struct RadiusReport {
    pub rows: Vec<RadiusRow>,
    /// One fit per exponent, in `q_values` order.
    pub fits: Vec<(f64, SlopeFit)>,
    pub q: f64,
    pub n: usize,
    pub seed: u64,
}

pub fn exp_r_sensitivity(cfg: &ExperimentConfig) -> Result<RadiusReport> {
    let st = &cfg.radius;
    let r_max = st.r0 * st.factors.iter().cloned().fold(0.0, f64::max);
    let params = SamplingParams { radius: r_max, theta: st.theta, eps: st.eps, c_d: cfg.particles.c_d };
    let base = ParticleConfig::sample(&cfg.density, st.n, cfg.seed, params)?;
    let forcing = Forcing::sedimenting(cfg.density.clone());
    let h = crate::continuum::ContinuumGrid::from(cfg.grid).cell_size(&forcing);
    let lattice = eval_lattice(&cfg.region_k(), h, st.stride);
    let mut rows = Vec::new();
    for &f in &st.factors {
        let pc = base.with_radius(st.r0 * f);
        let (diff, mask) = app_minus_point_lattice(&lattice, &pc)?;
        rows.push(RadiusRow {
            radius: pc.radius,
            norms: st.q_values.iter().map(|&q| (q, diff.lq_norm(q))).collect(),
            masked: mask.iter().filter(|m| **m).count(),
        });
    }
    let mut qs = st.q_values.clone();
    if !qs.contains(&cfg.q) {
        qs.push(cfg.q);
        for (row, &f) in rows.iter_mut().zip(&st.factors) {
            let (diff, _) = app_minus_point_lattice(&lattice, &base.with_radius(st.r0 * f))?;
            row.norms.push((cfg.q, diff.lq_norm(cfg.q)));
        }
    }
    let fits = qs
        .iter()
        .enumerate()
        .map(|(k, &q)| Ok((q, fit_loglog(&rows.iter().map(|r| (r.radius, r.norms[k].1)).collect::<Vec<_>>())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadiusReport { rows, fits, q: cfg.q, n: st.n, seed: cfg.seed })
}

impl RadiusReport {
    pub fn fit(&self, q: f64) -> Option<&SlopeFit> {
        self.fits.iter().find(|(p, _)| *p == q).map(|(_, f)| f)
    }

    pub fn checks(&self) -> Vec<Check> {
        let mut c = Vec::new();
        if let Some(f) = self.fit(self.q) {
            c.push(Check::within(5, format!("slope in R of |u_app - v_N|_L^{}(K)", self.q), f.slope, 0.8, 1.2));
        }
        for (q, f) in &self.fits {
            if *q != self.q {
                c.push(Check::within(5, format!("slope in R, q = {q}"), f.slope, 0.8, 1.2).diagnostic());
            }
        }
        c
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            for (q, v) in &r.norms {
                out.push(format!("{},{},{:.17e},{},{},{}", r.radius, q, v, r.masked, self.n, self.seed));
            }
        }
        out
    }

    pub const CSV_HEADER: &'static str = "radius,q,norm,masked_nodes,n,seed";
}
