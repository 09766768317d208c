use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use halfwall::cascade::{CascadeState, InteriorTraces, SpectralSolver};
use halfwall::continuum::{solve_body_force, solve_navier, ContinuumGrid, Forcing, NavierOptions};
use halfwall::experiments::{
    all_passed, analytic_report, eps, green_checks, particle, radius, structure, write_table,
    Check, ExperimentConfig,
};
use halfwall::spectral::SpectralField;
use halfwall::{greens, Vec3};
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Stokes flow near a wall: Green's function, suspensions and wall laws.
#[derive(Parser, Debug)]
#[command(name = "halfwall", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long, global = true, env = "HALFWALL_CONFIG")]
    config: Option<PathBuf>,
    /// Directory for tables and fields.
    #[arg(long, global = true, env = "HALFWALL_OUT", default_value = "out")]
    out: PathBuf,
    /// First random seed.
    #[arg(long, global = true, env = "HALFWALL_SEED")]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "HALFWALL_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Green's function evaluations.
    Greens {
        #[command(subcommand)]
        op: GreensOp,
    },
    /// Continuum flow of the configured density, optionally with a layer.
    Simulate {
        /// Layer width; 0 solves the no-slip problem.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Solve the Navier-slip problem with slip length `eps` instead.
        #[arg(long)]
        navier: bool,
        /// Order of the corrector cascade summary.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Rates in the layer width.
    ConvergeEps,
    /// Particle-to-continuum convergence in N.
    ConvergeN,
    /// Finite-size correction as the radius shrinks.
    ConvergeR,
    /// Channel apparent slip and intrinsic convection.
    Analytic,
    /// Every check, criterion by criterion.
    Acceptance,
}

#[derive(Subcommand, Debug)]
enum GreensOp {
    /// Print the 9 entries of G(x, y), row-major.
    Eval {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
    },
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report(checks: &[Check]) -> bool {
    for c in checks {
        println!("{c}");
    }
    all_passed(checks)
}

fn vec3(v: &[f64], name: &str) -> Result<Vec3> {
    if v.len() != 3 {
        bail!("--{name} takes three comma-separated numbers");
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

fn simulate(cfg: &ExperimentConfig, out: &Path, eps: f64, navier: bool, order: usize) -> Result<()> {
    let forcing = Forcing::sedimenting(cfg.density.clone());
    let grid: ContinuumGrid = cfg.grid.into();
    std::fs::create_dir_all(out)?;
    let base = if navier {
        let sol = solve_navier(&forcing, eps, &grid, &NavierOptions::default())?;
        println!("navier: {} iterations, boundary residual {:.3e}", sol.iterations, sol.boundary_residual);
        sol.field.write_csv(BufWriter::new(File::create(out.join("field.csv"))?))?;
        sol.base
    } else {
        let sol = solve_body_force(&forcing, eps, &grid)?;
        sol.field.write_csv(BufWriter::new(File::create(out.join("field.csv"))?))?;
        if eps != 0.0 {
            solve_body_force(&forcing, 0.0, &grid)?
        } else {
            sol
        }
    };
    println!("field: {} nodes, max |u| {:.6e}", base.field.lattice.len(), base.field.max_abs());
    let traces = base.wall_traces(grid.tangential_grid(&forcing))?;
    let z = SpectralField::zeros(traces.p.grid);
    let wall = InteriorTraces { u: [z.clone(), z.clone(), z], du: traces.du, p: traces.p };
    let solver = SpectralSolver { tol_edge: f64::INFINITY };
    let st = CascadeState::build(wall, order, &solver)?;
    st.write_summary(BufWriter::new(File::create(out.join("cascade.csv"))?))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = &cli.common.out;
    match cli.command {
        Command::Greens { op: GreensOp::Eval { x, y } } => {
            let g = greens::greens(&vec3(&x, "x")?, &vec3(&y, "y")?)?;
            for i in 0..3 {
                for j in 0..3 {
                    println!("{:.16e}", g[(i, j)]);
                }
            }
            Ok(true)
        }
        Command::Simulate { eps, navier, order } => {
            let cfg = load_config(&cli.common)?;
            simulate(&cfg, out, eps, navier, order)?;
            Ok(true)
        }
        Command::ConvergeEps => {
            let cfg = load_config(&cli.common)?;
            let rep = eps::exp_eps_convergence(&cfg)?;
            write_table(out, "converge_eps.csv", eps::EpsReport::CSV_HEADER, &rep.csv_rows())?;
            Ok(report(&rep.checks()))
        }
        Command::ConvergeN => {
            let cfg = load_config(&cli.common)?;
            let rep = particle::exp_particle_convergence(&cfg)?;
            write_table(out, "converge_n.csv", particle::ParticleReport::CSV_HEADER, &rep.csv_rows())?;
            Ok(report(&rep.checks()))
        }
        Command::ConvergeR => {
            let cfg = load_config(&cli.common)?;
            let rep = radius::exp_r_sensitivity(&cfg)?;
            write_table(out, "converge_r.csv", radius::RadiusReport::CSV_HEADER, &rep.csv_rows())?;
            Ok(report(&rep.checks()))
        }
        Command::Analytic => {
            let rep = analytic_report::exp_analytic()?;
            let rows: Vec<String> = rep.profile.iter().map(|r| r.map(|v| format!("{v:.17e}")).join(" ")).collect();
            write_table(out, "channel.dat", "# x1 u2_noslip u2_slip fd_noslip fd_slip", &rows)?;
            Ok(report(&rep.checks))
        }
        Command::Acceptance => {
            let cfg = load_config(&cli.common)?;
            let mut checks = green_checks::checks(cfg.seed);
            checks.extend(analytic_report::exp_analytic()?.checks);
            checks.extend(eps::exp_eps_convergence(&cfg)?.checks());
            checks.extend(radius::exp_r_sensitivity(&cfg)?.checks());
            checks.extend(particle::exp_particle_convergence(&cfg)?.checks());
            checks.extend(structure::cascade_checks()?);
            checks.extend(structure::solver_checks()?);
            let ok = report(&checks);
            for k in 1..=8u8 {
                let mine: Vec<&Check> = checks.iter().filter(|c| c.criterion == k && c.acceptance).collect();
                let tag = if mine.iter().all(|c| c.passed) { "PASS" } else { "FAIL" };
                println!("{tag} criterion {k}");
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
