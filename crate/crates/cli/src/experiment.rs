//! Experiment descriptions: problem/algorithm selection, stepsize flag
//! semantics and per-problem defaults.

use anyhow::{bail, Context, Result};

use holder_pg::problems::{elliptic1, elliptic2, example1, quadratic};
use holder_pg::solvers::{pgdm, ufgm, upgm, SolverConfig};
use holder_pg::stepsize::{alpha_hat, constant_m, ufgm_fixed_nu};
use holder_pg::trace::SolverTrace;
use holder_pg::{Algorithm, DenseVector, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Example1,
    Elliptic1,
    Elliptic2,
    Quadratic,
}

impl ProblemKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "example1" => Ok(Self::Example1),
            "elliptic1" => Ok(Self::Elliptic1),
            "elliptic2" => Ok(Self::Elliptic2),
            "quadratic" => Ok(Self::Quadratic),
            other => bail!("unknown problem `{other}` (expected example1 | elliptic1 | elliptic2 | quadratic)"),
        }
    }

    pub fn is_pde(self) -> bool {
        matches!(self, Self::Elliptic1 | Self::Elliptic2)
    }
}

pub fn parse_algorithm(s: &str) -> Result<Algorithm> {
    match s {
        "pgdm" => Ok(Algorithm::Pgdm),
        "upgm" => Ok(Algorithm::Upgm),
        "ufgm" => Ok(Algorithm::Ufgm),
        "ufgm-fixed" => Ok(Algorithm::UfgmFixed),
        other => bail!("unknown algorithm `{other}` (expected pgdm | upgm | ufgm | ufgm-fixed)"),
    }
}

/// One solver run, fully specified.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problem: ProblemKind,
    pub algo: Algorithm,
    pub epsilon: f64,
    pub h: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub p: f64,
    pub delta: f64,
    /// Stepsize scale: `tau = tau0 h²` (descent) or `nu = tau0 h²` (fixed
    /// fast method) on the PDE problems, the raw stepsize elsewhere.
    pub tau0: Option<f64>,
    pub rho0: Option<f64>,
    pub mu_override: Option<f64>,
    pub max_iters: Option<usize>,
    pub record_every: usize,
    /// Starting point override for the univariate problems.
    pub x0: Option<f64>,
    /// Start the PDE problems from zero instead of the linear solve.
    pub u0_zero: bool,
    pub run_to_max: bool,
    pub audit: bool,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(problem: ProblemKind, algo: Algorithm) -> Self {
        Self {
            problem,
            algo,
            epsilon: 1e-2,
            h: 0.0625,
            gamma: 0.5,
            alpha: 0.5,
            p: 1.5,
            delta: 20.0,
            tau0: None,
            rho0: None,
            mu_override: None,
            max_iters: None,
            record_every: 1,
            x0: None,
            u0_zero: false,
            run_to_max: false,
            audit: false,
            seed: 42,
        }
    }

    pub fn build_problem(&self) -> Result<ProblemInstance> {
        let p = match self.problem {
            ProblemKind::Example1 => example1(),
            ProblemKind::Quadratic => quadratic(1),
            ProblemKind::Elliptic1 => elliptic1(self.h, self.gamma, self.alpha)
                .context("constructing the whole-space elliptic problem")?,
            ProblemKind::Elliptic2 => elliptic2(self.h, self.alpha, self.p, self.delta)
                .context("constructing the box-constrained elliptic problem")?,
        };
        Ok(p)
    }

    pub fn default_max_iters(&self) -> usize {
        match self.problem {
            ProblemKind::Example1 => 100_000,
            ProblemKind::Elliptic1 => 20_000,
            ProblemKind::Elliptic2 => 10_000,
            ProblemKind::Quadratic => 1_000,
        }
    }

    fn stepsize_scale(&self) -> f64 {
        if self.problem.is_pde() {
            self.h * self.h
        } else {
            1.0
        }
    }

    /// Default initial line-search constant for the primal method: the
    /// reciprocal of the `20h²` stepsize preset on the PDE problems, 1
    /// elsewhere.
    fn default_upgm_rho0(&self) -> f64 {
        if self.problem.is_pde() {
            1.0 / (20.0 * self.h * self.h)
        } else {
            1.0
        }
    }

    pub fn build_config(&self, problem: &ProblemInstance) -> Result<SolverConfig> {
        let mu = self.mu_override.unwrap_or(problem.mu);
        let mut cfg = SolverConfig::new(self.epsilon, self.max_iters.unwrap_or_else(|| self.default_max_iters()))?
            .with_record_every(self.record_every)
            .with_stop_on_target(!self.run_to_max)
            .with_audit(self.audit);
        if let Some(m) = self.mu_override {
            cfg = cfg.with_mu_override(m);
        }

        match self.algo {
            Algorithm::Pgdm => {
                if let Some(t0) = self.tau0 {
                    cfg = cfg.with_fixed_step(t0 * self.stepsize_scale());
                }
            }
            Algorithm::Upgm => {
                cfg = cfg.with_rho0(self.rho0.unwrap_or_else(|| self.default_upgm_rho0()));
            }
            Algorithm::Ufgm => {
                cfg = cfg.with_rho0(self.rho0.unwrap_or(mu));
            }
            Algorithm::UfgmFixed => {
                let nu = match self.tau0 {
                    Some(t0) => t0 * self.stepsize_scale(),
                    None => {
                        let m = constant_m(&problem.components, mu)?;
                        let a_hat = alpha_hat(&problem.components)?;
                        ufgm_fixed_nu(self.epsilon, m, mu, a_hat)?
                    }
                };
                cfg = cfg.with_fixed_step(nu);
            }
        }

        if let Some(x0) = self.x0 {
            if self.problem.is_pde() {
                bail!("--x0 applies only to the univariate problems; use --u0-zero for the PDE problems");
            }
            cfg = cfg.with_initial(DenseVector::new(vec![x0])?);
        }
        if self.u0_zero {
            cfg = cfg.with_initial(DenseVector::zeros(problem.dim));
        }
        Ok(cfg)
    }

    pub fn run(&self) -> Result<RunOutcome> {
        let problem = self.build_problem()?;
        let cfg = self.build_config(&problem)?;
        let trace = match self.algo {
            Algorithm::Pgdm => pgdm(&problem, &cfg),
            Algorithm::Upgm => upgm(&problem, &cfg),
            Algorithm::Ufgm | Algorithm::UfgmFixed => ufgm(&problem, &cfg),
        }
        .with_context(|| format!("running {} on {}", self.algo, problem.name))?;
        Ok(RunOutcome { problem, trace })
    }
}

pub struct RunOutcome {
    pub problem: ProblemInstance,
    pub trace: SolverTrace,
}

impl RunOutcome {
    /// Smallest iteration index at which the distance target was met.
    pub fn k_star(&self) -> Option<usize> {
        if self.trace.summary.converged {
            Some(self.trace.summary.iterations)
        } else {
            None
        }
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let s = &self.trace.summary;
        let mut out = vec![
            format!("problem:            {}", self.problem.name),
            format!("iterations:         {}", s.iterations),
            format!("line-search trials: {}", s.total_ls_trials),
            format!("final objective:    {:.10e}", s.final_f),
        ];
        if let Some(d) = s.final_dist {
            out.push(format!("final distance:     {d:.10e}"));
        }
        if let Some(r) = s.final_residual {
            out.push(format!("final residual:     {r:.10e}"));
        }
        out.push(format!(
            "converged:          {} ({} ms)",
            s.converged,
            s.wall_time.as_millis()
        ));
        out
    }
}
