//! Convergence of point-force superpositions of sampled clouds to the
//! continuum flow as the number of particles grows.

use super::{fit_loglog, Check, ExperimentConfig, SlopeFit};
use crate::continuum::{eval_lattice, solve_body_force_on, ContinuumGrid, Forcing, SourceLattice};
use crate::grid::GridField;
use crate::particles::{estimate_w1, interaction_sum, v_n_lattice, ParticleConfig, SamplingParams};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleRow {
    pub n: usize,
    pub seed: u64,
    pub radius: f64,
    pub eps: f64,
    /// `|v_N - u⁰|_{L¹(K)}`.
    pub error: f64,
    pub w1: f64,
    pub interaction: f64,
    pub d_min: f64,
}

#[derive(Debug, Clone)]
pub struct ParticleReport {
    pub rows: Vec<ParticleRow>,
    /// Seed averages `(N, error, w1)`.
    pub means: Vec<(usize, f64, f64)>,
    pub fit_error: SlopeFit,
    pub fit_w1: SlopeFit,
    pub grid: ContinuumGrid,
}

pub fn exp_particle_convergence(cfg: &ExperimentConfig) -> Result<ParticleReport> {
    let st = &cfg.particles;
    let forcing = Forcing::sedimenting(cfg.density.normalized()?);
    let grid: ContinuumGrid = cfg.grid.into();
    let h = grid.cell_size(&forcing);
    let lattice = eval_lattice(&cfg.region_k(), h, st.stride);
    let sources = SourceLattice::build_with_spacing(&forcing, h)?;
    let u0 = solve_body_force_on(sources, 0.0, lattice.clone())?.field;
    let u0 = GridField { pressure: None, ..u0 };

    let mut rows = Vec::new();
    for &n in &st.n_values {
        let radius = st.radius_coeff / n as f64;
        let eps = 2.0 * st.theta * radius;
        for k in 0..st.seeds {
            let seed = cfg.seed + k as u64;
            let params = SamplingParams { radius, theta: st.theta, eps, c_d: st.c_d };
            let pc = ParticleConfig::sample(&cfg.density, n, seed, params)?;
            let v = v_n_lattice(&lattice, &pc, None)?;
            rows.push(ParticleRow {
                n,
                seed,
                radius,
                eps,
                error: v.sub(&u0)?.lq_norm(1.0),
                w1: estimate_w1(&pc.centers, &cfg.density, st.n_slices, seed.wrapping_add(1 << 32))?,
                interaction: interaction_sum(&pc)?,
                d_min: pc.validate().d_min,
            });
        }
    }
    let means: Vec<(usize, f64, f64)> = st
        .n_values
        .iter()
        .map(|&n| {
            let sel: Vec<&ParticleRow> = rows.iter().filter(|r| r.n == n).collect();
            let m = sel.len() as f64;
            (n, sel.iter().map(|r| r.error).sum::<f64>() / m, sel.iter().map(|r| r.w1).sum::<f64>() / m)
        })
        .collect();
    Ok(ParticleReport {
        fit_error: fit_loglog(&means.iter().map(|m| (m.0 as f64, m.1)).collect::<Vec<_>>())?,
        fit_w1: fit_loglog(&means.iter().map(|m| (m.0 as f64, m.2)).collect::<Vec<_>>())?,
        means,
        rows,
        grid,
    })
}

impl ParticleReport {
    pub fn checks(&self) -> Vec<Check> {
        let decreasing = self.means.windows(2).all(|w| w[1].1 < w[0].1);
        let detail = self.means.iter().map(|m| format!("{}: {:.4e}", m.0, m.1)).collect::<Vec<_>>().join(", ");
        let first = self.rows.iter().filter(|r| r.n == self.means[0].0).map(|r| r.interaction).fold(0.0, f64::max);
        let top = self.rows.iter().map(|r| r.interaction).fold(0.0, f64::max);
        vec![
            Check::new(6, "seed-averaged |v_N - u0|_L1(K) strictly decreasing", decreasing, detail),
            Check::within(6, "slope in N of |v_N - u0|_L1(K)", self.fit_error.slope, -0.5, -0.2),
            Check::within(6, "slope in N of the sliced W1 estimate", self.fit_w1.slope, -0.45, -0.22),
            Check::new(6, "interaction sum stays bounded", top <= 3.0 * first, format!("max {top:.3}, at smallest N {first:.3}")).diagnostic(),
        ]
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{:e},{:e},{:.17e},{:.17e},{:.6e},{:.6e},{},{}",
                    r.n, r.seed, r.radius, r.eps, r.error, r.w1, r.interaction, r.d_min, self.grid.n_q, self.grid.n_t
                )
            })
            .collect()
    }

    pub const CSV_HEADER: &'static str = "n,seed,radius,eps,l1_error,w1,interaction_max,d_min,n_q,n_t";
}
