use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holder_pg_cli::commands::{
    default_out_path, predict_command, resolve_seed, run_command, sweep_command, validate_command,
    SweepParam,
};
use holder_pg_cli::experiment::{parse_algorithm, ExperimentSpec, ProblemKind};

/// Projected gradient experiments for objectives with Hölder-continuous
/// component gradients.
#[derive(Parser)]
#[command(name = "holder-pg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Problem: example1 | elliptic1 | elliptic2 | quadratic
    #[arg(long, default_value = "example1")]
    problem: String,

    /// Target accuracy epsilon in (0, 1)
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,

    /// Mesh width (PDE problems); must be 1/k for an integer k
    #[arg(long, default_value_t = 0.0625)]
    h: f64,

    /// Coefficient of the positive-part term (elliptic1)
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,

    /// Hölder exponent of the non-Lipschitz term (elliptic problems)
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,

    /// Power of the concave perturbation (elliptic2)
    #[arg(long, default_value_t = 1.5)]
    p: f64,

    /// Coefficient of the Hölder term (elliptic2); requires delta > p/alpha
    #[arg(long, default_value_t = 20.0)]
    delta: f64,

    /// Strong-convexity override
    #[arg(long)]
    mu: Option<f64>,

    /// Probe / sweep seed (default: HOLDER_PG_SEED or 42)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Algorithm: pgdm | upgm | ufgm | ufgm-fixed
    #[arg(long, default_value = "pgdm")]
    algo: String,

    /// Stepsize scale: tau = tau0*h^2 (pgdm) or nu = tau0*h^2 (ufgm-fixed)
    /// on the PDE problems, the raw stepsize on the others. Omit for the
    /// accuracy-matched formula value.
    #[arg(long)]
    tau0: Option<f64>,

    /// Initial line-search constant (upgm/ufgm)
    #[arg(long)]
    rho0: Option<f64>,

    /// Iteration budget (defaults: 1e5 example1, 2e4 elliptic1, 1e4 elliptic2)
    #[arg(long)]
    max_iters: Option<usize>,

    /// Record every k-th iteration in the trace
    #[arg(long, default_value_t = 1)]
    record_every: usize,

    /// Starting point for the univariate problems
    #[arg(long)]
    x0: Option<f64>,

    /// Start the PDE problems from zero instead of the linear solve
    #[arg(long, default_value_t = false)]
    u0_zero: bool,

    /// Run the full iteration budget instead of stopping at the target
    #[arg(long, default_value_t = false)]
    no_stop: bool,

    /// Maintain and check the estimating sequence (ufgm; needs a known
    /// optimal value)
    #[arg(long, default_value_t = false)]
    audit: bool,
}

#[derive(Subcommand)]
enum Command {
    /// One solver run; writes a CSV trace and prints a summary.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Output CSV path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One run per parameter value plus a combined semilog overlay.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Swept parameter: alpha | tau0 | eps
        #[arg(long)]
        param: String,
        /// Comma-separated parameter values
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        /// Directory for the per-run CSVs
        #[arg(long, default_value = "sweep")]
        out_dir: PathBuf,
        /// Overlay SVG path (default: <out-dir>/sweep.svg)
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Runs the full probe suite for a problem; exit 0 iff all probes pass.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Prints the closed-form constants and iteration bounds.
    Predict {
        #[command(flatten)]
        common: CommonArgs,
        /// Distance from the start to the minimizer, when not computable
        #[arg(long)]
        d0: Option<f64>,
    },
}

fn build_spec(common: &CommonArgs, solver: Option<&SolverArgs>) -> anyhow::Result<ExperimentSpec> {
    let problem = ProblemKind::parse(&common.problem)?;
    let algo = match solver {
        Some(s) => parse_algorithm(&s.algo)?,
        None => holder_pg::Algorithm::Pgdm,
    };
    let mut spec = ExperimentSpec::new(problem, algo);
    spec.epsilon = common.eps;
    spec.h = common.h;
    spec.gamma = common.gamma;
    spec.alpha = common.alpha;
    spec.p = common.p;
    spec.delta = common.delta;
    spec.mu_override = common.mu;
    spec.seed = resolve_seed(common.seed);
    if let Some(s) = solver {
        spec.tau0 = s.tau0;
        spec.rho0 = s.rho0;
        spec.max_iters = s.max_iters;
        spec.record_every = s.record_every;
        spec.x0 = s.x0;
        spec.u0_zero = s.u0_zero;
        spec.run_to_max = s.no_stop;
        spec.audit = s.audit;
    }
    Ok(spec)
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Run { common, solver, out } => {
            let spec = build_spec(&common, Some(&solver))?;
            let out = out.unwrap_or_else(|| default_out_path(&spec));
            run_command(&spec, &out)?;
            Ok(true)
        }
        Command::Sweep {
            common,
            solver,
            param,
            values,
            out_dir,
            svg,
        } => {
            let spec = build_spec(&common, Some(&solver))?;
            let param = SweepParam::parse(&param)?;
            let svg = svg.unwrap_or_else(|| out_dir.join("sweep.svg"));
            sweep_command(&spec, param, &values, &out_dir, Some(&svg))?;
            Ok(true)
        }
        Command::Validate { common } => {
            let spec = build_spec(&common, None)?;
            validate_command(&spec)
        }
        Command::Predict { common, d0 } => {
            let spec = build_spec(&common, None)?;
            predict_command(&spec, d0)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
