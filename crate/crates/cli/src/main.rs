//! Command-line front end: runs schemes, exact-solution checks and the
//! verification suites, and writes CSV/JSON artifacts with a manifest.
//!
//! Exit codes: 0 success, 1 a check or suite failed, 2 usage or
//! configuration error, 3 numerical or solver failure.

mod config;
mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use invpdelta::invariants::invariant_shape;
use invpdelta::schemes::variants_for;
use invpdelta::solver::SolutionFn;
use invpdelta::symmetry::apply_group;
use invpdelta::verify::{
    convergence_study, invariance_suite, orbit_test, orthogonal_refinements, preset_refinements, ConvergenceReport,
};
use invpdelta::{
    builtin_algebra, catalog, find_exact, group_element, invariants, make_scheme, monitor_sigma_tau, run, Equation,
    GroupElement, MovingLattice, ResidualStats, Variant,
};
use serde::Serialize;

use config::SolveConfig;
use output::Artifacts;

const SEED_VAR: &str = "INVPDELTA_SEED";

#[derive(Parser)]
#[command(
    name = "invpdelta",
    version,
    about = "Symmetry-preserving difference schemes on evolving lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List equations, scheme variants, mesh presets and exact solutions.
    List,
    /// Print the elementary invariants of one stencil of a lattice CSV.
    Invariants {
        #[arg(long)]
        equation: Equation,
        #[arg(long)]
        lattice: PathBuf,
        /// Time index of the stencil base (default: first level).
        #[arg(long)]
        m: Option<i64>,
        /// Space index of the stencil base (default: middle column).
        #[arg(long)]
        n: Option<i64>,
    },
    /// Residuals of a scheme over a lattice CSV.
    Check {
        #[arg(long)]
        equation: Equation,
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        lattice: PathBuf,
        /// Fail (exit 1) when max |E1|/scale exceeds this.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// March a scheme as described by a TOML configuration.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a catalog solution on its lattice and check its residuals.
    Exact {
        #[arg(long)]
        equation: Equation,
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// On-manifold invariance suite of a scheme under its symmetry algebra.
    Invariance {
        #[arg(long)]
        equation: Equation,
        #[arg(long)]
        variant: Variant,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence study against an exact solution.
    Converge {
        #[arg(long)]
        equation: Equation,
        #[arg(long)]
        variant: Variant,
        /// A catalog entry (refined on its own lattice) or `exp` for
        /// u = exp(t + x) on orthogonal meshes over [0, 1].
        #[arg(long)]
        solution: String,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Coarsest step for `exp`.
        #[arg(long, default_value_t = 0.1)]
        h0: f64,
        /// τ / h² for `exp`.
        #[arg(long, default_value_t = 0.4)]
        ratio: f64,
        /// Final time for `exp`.
        #[arg(long, default_value_t = 0.1)]
        t_end: f64,
        /// Steps of the coarsest run for catalog entries.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Fail unless every observed order is within `order_tol` of this.
        #[arg(long)]
        expect_order: Option<f64>,
        #[arg(long, default_value_t = 0.3)]
        order_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual of a scheme on a catalog solution moved by a group element.
    Orbit {
        #[arg(long)]
        equation: Equation,
        #[arg(long)]
        name: String,
        #[arg(long)]
        variant: Variant,
        /// Composite parameters, one per basis generator.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["generator", "eps"])]
        params: Option<Vec<f64>>,
        /// One-parameter subgroup, 1-based generator index.
        #[arg(long, requires = "eps")]
        generator: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Seed from the environment when set, else the given default.
fn effective_seed(default: Option<u64>) -> Result<Option<u64>> {
    match std::env::var(SEED_VAR) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{SEED_VAR}=`{v}` is not a u64"))?,
        )),
        Err(_) => Ok(default),
    }
}

fn read_lattice(path: &Path, equation: Equation) -> Result<MovingLattice> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(MovingLattice::read_csv(file, equation)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

/// Writes `report.json` (and an optional lattice) to `out`, or prints the
/// report when no directory is given.
fn emit<T: Serialize>(
    command: &str,
    out: Option<&Path>,
    report: &T,
    lattice: Option<&MovingLattice>,
    config: Option<&Path>,
    seed: Option<u64>,
) -> Result<()> {
    let Some(dir) = out else {
        return print_json(report);
    };
    let mut art = Artifacts::create(dir)?;
    if let Some(lat) = lattice {
        art.write("lattice.csv", lat.to_csv_string()?.as_bytes())?;
    }
    art.write_json("report.json", report)?;
    let manifest = art.finish(command, config, seed)?;
    eprintln!("wrote {}", manifest.display());
    Ok(())
}

fn list() {
    println!("equations:");
    for eq in Equation::ALL {
        let vs: Vec<&str> = variants_for(eq).into_iter().map(Variant::tag).collect();
        println!("  {:<18} variants: {}", eq.tag(), vs.join(", "));
    }
    println!("mesh presets: orthogonal, fundamental, galilean");
    println!("exact solutions:");
    for eq in Equation::ALL {
        let names: Vec<String> = catalog(eq).into_iter().map(|s| s.name).collect();
        println!("  {:<18} {}", eq.tag(), names.join(", "));
    }
}

fn cmd_invariants(equation: Equation, lattice: &Path, m: Option<i64>, n: Option<i64>) -> Result<()> {
    let lat = read_lattice(lattice, equation)?;
    let m = m.unwrap_or(*lat.m_range().start());
    let n = n.unwrap_or_else(|| {
        let r = lat.n_range();
        (r.start() + r.end()).div_euclid(2)
    });
    let s = lat.stencil_at(m, n, invariant_shape(equation))?;
    for (name, value) in invariants(equation, &s)?.named() {
        println!("{name}\t{}", invpdelta::lattice::fmt_f64(value));
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    residuals: ResidualStats,
    tolerance: Option<f64>,
    pass: bool,
}

fn cmd_check(
    equation: Equation,
    variant: Variant,
    lattice: &Path,
    tol: Option<f64>,
    out: Option<&Path>,
) -> Result<bool> {
    let lat = read_lattice(lattice, equation)?;
    let residuals = make_scheme(equation, variant)?.lattice_residuals(&lat)?;
    let pass = tol.is_none_or(|t| residuals.max_scaled_e1 <= t);
    emit(
        "check",
        out,
        &CheckReport {
            residuals,
            tolerance: tol,
            pass,
        },
        None,
        None,
        None,
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct SolveReport {
    scheme: String,
    steps: usize,
    seed: Option<u64>,
    boundary: String,
    max_residual: f64,
    newton_iterations: usize,
    sigma_tau_max: f64,
    /// Against the named initial solution; only meaningful without noise.
    max_error: Option<f64>,
    levels: Vec<invpdelta::solver::LevelDiagnostics>,
}

fn cmd_solve(config: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(config).with_context(|| format!("cannot read {}", config.display()))?;
    let cfg = SolveConfig::parse(&text)?;
    let seed = effective_seed(cfg.seed)?;
    let sim = cfg.build(seed.unwrap_or(0))?;
    let traj = run(&sim)?;
    let exact = cfg.solution()?;
    let report = SolveReport {
        scheme: traj.scheme.clone(),
        steps: sim.steps,
        seed,
        boundary: sim.boundary.name().to_string(),
        max_residual: traj.max_residual(),
        newton_iterations: traj.newton_iterations(),
        sigma_tau_max: monitor_sigma_tau(&traj),
        max_error: (cfg.initial.noise == 0.0).then(|| traj.max_error(|x, t| exact(x, t))),
        levels: traj.levels.clone(),
    };
    emit("solve", Some(out), &report, Some(&traj.lattice), Some(config), seed)
}

#[derive(Serialize)]
struct ExactReport {
    equation: Equation,
    name: String,
    description: String,
    provenance: Vec<String>,
    tolerance: f64,
    residuals: Vec<ResidualStats>,
    pass: bool,
}

fn cmd_exact(equation: Equation, name: &str, out: Option<&Path>) -> Result<bool> {
    let sol = find_exact(equation, name)?;
    let lat = sol.window_lattice()?;
    let residuals = sol.residuals()?;
    let pass = residuals.iter().all(|r| r.max_scaled_e1 <= invpdelta::exact::EXACT_TOL);
    let report = ExactReport {
        equation,
        name: sol.name.clone(),
        description: sol.description.clone(),
        provenance: sol.provenance.clone(),
        tolerance: invpdelta::exact::EXACT_TOL,
        residuals,
        pass,
    };
    emit("exact", out, &report, Some(&lat), None, None)?;
    Ok(pass)
}

fn cmd_invariance(equation: Equation, variant: Variant, samples: usize, seed: u64, out: Option<&Path>) -> Result<bool> {
    let seed = effective_seed(Some(seed))?.unwrap_or(seed);
    let report = invariance_suite(
        &make_scheme(equation, variant)?,
        &builtin_algebra(equation),
        samples,
        seed,
    )?;
    if !report.pass {
        eprintln!("{}: not invariant under {}", report.scheme, report.failing().join(", "));
    }
    emit("invariance", out, &report, None, None, Some(seed))?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct ConvergeOutput {
    #[serde(flatten)]
    report: ConvergenceReport,
    solution: String,
    expected_order: Option<f64>,
    pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_converge(
    equation: Equation,
    variant: Variant,
    solution: &str,
    levels: usize,
    (h0, ratio, t_end): (f64, f64, f64),
    steps: usize,
    expect: Option<(f64, f64)>,
    out: Option<&Path>,
) -> Result<bool> {
    if levels < 2 {
        bail!("a convergence study needs at least two levels");
    }
    let scheme = make_scheme(equation, variant)?;
    let (exact, refinements, exact_on_lattice): (SolutionFn, _, bool) = if solution == "exp" {
        if equation != Equation::Heat {
            bail!("`exp` is a heat solution");
        }
        let hs: Vec<f64> = (0..levels).map(|k| h0 / f64::from(1u32 << k)).collect();
        let f: SolutionFn = Arc::new(|x: f64, t: f64| (t + x).exp());
        (f, orthogonal_refinements((0.0, 1.0), 0.0, t_end, ratio, &hs), false)
    } else {
        let sol = find_exact(equation, solution)?;
        if !sol.schemes.contains(&variant) {
            bail!("{solution} is not an exact solution of {}", scheme.name());
        }
        let Some(preset) = sol.mesh.preset else {
            bail!("{solution} has no refinable mesh preset");
        };
        (
            sol.u_fn(),
            preset_refinements(preset, sol.n_range.clone(), steps, levels),
            true,
        )
    };
    let report = convergence_study(&scheme, exact, &refinements)?;
    let mut pass = report.sigma_tau_bounded;
    if exact_on_lattice {
        pass &= report.levels.iter().all(|l| l.err_max <= 1e-9 * l.scale);
    }
    if let Some((p, tol)) = expect {
        pass &= report.orders().iter().all(|o| (o - p).abs() <= tol);
    }
    let output = ConvergeOutput {
        report,
        solution: solution.to_string(),
        expected_order: expect.map(|e| e.0),
        pass,
    };
    emit("converge", out, &output, None, None, None)?;
    Ok(pass)
}

fn cmd_orbit(
    equation: Equation,
    name: &str,
    variant: Variant,
    params: Option<Vec<f64>>,
    one: Option<(usize, f64)>,
    out: Option<&Path>,
) -> Result<bool> {
    let g = match (params, one) {
        (Some(p), _) => group_element(equation, &p)?,
        (None, Some((k, eps))) => {
            if k == 0 {
                bail!("generators are numbered from 1");
            }
            GroupElement::one_parameter(equation, k - 1, eps)?
        }
        (None, None) => bail!("give --params or --generator with --eps"),
    };
    let sol = find_exact(equation, name)?;
    let report = orbit_test(&make_scheme(equation, variant)?, &sol, &g)?;
    let moved = apply_group(&g, &sol.window_lattice()?)?;
    emit("orbit", out, &report, Some(&moved), None, None)?;
    Ok(report.pass)
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List => {
            list();
            Ok(true)
        }
        Command::Invariants {
            equation,
            lattice,
            m,
            n,
        } => cmd_invariants(equation, &lattice, m, n).map(|_| true),
        Command::Check {
            equation,
            variant,
            lattice,
            tol,
            out,
        } => cmd_check(equation, variant, &lattice, tol, out.as_deref()),
        Command::Solve { config, out } => cmd_solve(&config, &out).map(|_| true),
        Command::Exact { equation, name, out } => cmd_exact(equation, &name, out.as_deref()),
        Command::Invariance {
            equation,
            variant,
            samples,
            seed,
            out,
        } => cmd_invariance(equation, variant, samples, seed, out.as_deref()),
        Command::Converge {
            equation,
            variant,
            solution,
            levels,
            h0,
            ratio,
            t_end,
            steps,
            expect_order,
            order_tol,
            out,
        } => cmd_converge(
            equation,
            variant,
            &solution,
            levels,
            (h0, ratio, t_end),
            steps,
            expect_order.map(|p| (p, order_tol)),
            out.as_deref(),
        ),
        Command::Orbit {
            equation,
            name,
            variant,
            params,
            generator,
            eps,
            out,
        } => cmd_orbit(equation, &name, variant, params, generator.zip(eps), out.as_deref()),
    }
}

/// 3 for numerical failures reported by the library, 2 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let numeric = err
        .chain()
        .filter_map(|e| e.downcast_ref::<invpdelta::Error>())
        .any(invpdelta::Error::is_numeric);
    if numeric {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
