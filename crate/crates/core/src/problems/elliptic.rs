//! Discretized elliptic benchmarks on the unit square: a whole-space problem
//! with a manufactured exact solution and a box-constrained semi-linear
//! problem tracked through its projected-gradient residual.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{build_laplacian_2d, cg_solve_default, laplacian_extreme_eigs, SparseMatrix};
use crate::problem::{ComponentMeta, ProbeRegion, ProblemInstance};
use crate::set::{project, FeasibleSet};
use crate::vector::DenseVector;

/// Manufactured solution `u*(x,y) = ((3r−1)/2)² max{0, r−1/3}`,
/// `r = √(x²+y²)`; nonnegative on the unit square.
pub fn exact_solution(x: f64, y: f64) -> f64 {
    let r = x.hypot(y);
    let q = (3.0 * r - 1.0) / 2.0;
    q * q * (r - 1.0 / 3.0).max(0.0)
}

fn grid_side(h: f64) -> Result<usize> {
    let inv = 1.0 / h;
    let k = inv.round();
    if !(h > 0.0) || (inv - k).abs() > 1e-9 * k.max(1.0) || k < 2.0 {
        return Err(Error::invalid(format!(
            "mesh width must be 1/k for an integer k >= 2, got h = {h}"
        )));
    }
    Ok(k as usize - 1)
}

/// Samples [`exact_solution`] at the interior grid points `(ih, jh)`,
/// row-major with `x` varying fastest.
pub fn exact_solution_grid(h: f64) -> Result<DenseVector> {
    let side = grid_side(h)?;
    DenseVector::from_fn(side * side, |m| {
        let i = m % side + 1;
        let j = m / side + 1;
        exact_solution(i as f64 * h, j as f64 * h)
    })
}

/// Boundary encoding for the five-point stencil: each interior point collects
/// `(1/h²) Σ g(q)` over its boundary neighbors `q`; interior points with no
/// boundary neighbor get zero.
pub fn dirichlet_rhs(h: f64, g: impl Fn(f64, f64) -> f64) -> Result<DenseVector> {
    let side = grid_side(h)?;
    let ih2 = 1.0 / (h * h);
    DenseVector::from_fn(side * side, |m| {
        let i = m % side + 1;
        let j = m / side + 1;
        let mut acc = 0.0;
        if i == 1 {
            acc += ih2 * g(0.0, j as f64 * h);
        }
        if i == side {
            acc += ih2 * g((side + 1) as f64 * h, j as f64 * h);
        }
        if j == 1 {
            acc += ih2 * g(i as f64 * h, 0.0);
        }
        if j == side {
            acc += ih2 * g(i as f64 * h, (side + 1) as f64 * h);
        }
        acc
    })
}

/// Data for the whole-space elliptic problem with objective
/// `f(u) = ½uᵀAu + (γ/(1+α)) Σ (u₊)^{1+α} − (b + c*)ᵀu`,
/// where `c* = A u* + γ (u*)₊^α − b` makes the sampled exact solution
/// stationary.
#[derive(Debug, Clone)]
pub struct Elliptic1Spec {
    pub h: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub matrix: SparseMatrix,
    /// Pure boundary data `b`.
    pub boundary_rhs: DenseVector,
    pub u_star: DenseVector,
    /// Forcing shift `c* = A u* + γ (u*)₊^α − b`.
    pub c_star: DenseVector,
}

impl Elliptic1Spec {
    pub fn new(h: f64, gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "alpha must lie in (0, 1) for the non-Lipschitz term, got {alpha}"
            )));
        }
        let matrix = build_laplacian_2d(h)?;
        let boundary_rhs = dirichlet_rhs(h, exact_solution)?;
        let u_star = exact_solution_grid(h)?;
        let c_star = Self::forcing_shift(&matrix, &u_star, gamma, alpha, &boundary_rhs)?;
        Ok(Self {
            h,
            gamma,
            alpha,
            matrix,
            boundary_rhs,
            u_star,
            c_star,
        })
    }

    fn forcing_shift(
        matrix: &SparseMatrix,
        u_star: &DenseVector,
        gamma: f64,
        alpha: f64,
        b: &DenseVector,
    ) -> Result<DenseVector> {
        let au = matrix.matvec(u_star)?;
        DenseVector::from_fn(u_star.len(), |i| {
            au[i] + gamma * u_star[i].max(0.0).powf(alpha) - b[i]
        })
    }

    /// Recomputes `c*` from the stored fields; must reproduce `c_star`
    /// bit-for-bit.
    pub fn recompute_forcing_shift(&self) -> Result<DenseVector> {
        Self::forcing_shift(
            &self.matrix,
            &self.u_star,
            self.gamma,
            self.alpha,
            &self.boundary_rhs,
        )
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn objective(&self, u: &DenseVector) -> f64 {
        let au = self.matrix.matvec(u).expect("dimension checked");
        let mut quad = 0.0;
        let mut plus_term = 0.0;
        let mut linear = 0.0;
        for i in 0..u.len() {
            quad += u[i] * au[i];
            plus_term += u[i].max(0.0).powf(1.0 + self.alpha);
            linear += (self.boundary_rhs[i] + self.c_star[i]) * u[i];
        }
        0.5 * quad + self.gamma / (1.0 + self.alpha) * plus_term - linear
    }

    pub fn gradient(&self, u: &DenseVector) -> DenseVector {
        let au = self.matrix.matvec(u).expect("dimension checked");
        DenseVector::from_fn(u.len(), |i| {
            au[i] + self.gamma * u[i].max(0.0).powf(self.alpha)
                - (self.boundary_rhs[i] + self.c_star[i])
        })
        .expect("finite")
    }

    /// Harmonic start: the solution of `A u₀ = b`.
    pub fn initial_iterate(&self) -> Result<DenseVector> {
        cg_solve_default(&self.matrix, &self.boundary_rhs)
    }
}

/// Whole-space elliptic instance. The default strong-convexity parameter is
/// `2π²`; the exact discrete value is available from
/// [`laplacian_extreme_eigs`] and can be installed via the solver config.
pub fn elliptic1(h: f64, gamma: f64, alpha: f64) -> Result<ProblemInstance> {
    let spec = Arc::new(Elliptic1Spec::new(h, gamma, alpha)?);
    let n = spec.dim();
    let (_, lambda_max) = laplacian_extreme_eigs(h)?;
    let u0 = spec.initial_iterate()?;
    let f_star = spec.objective(&spec.u_star);

    let s_obj = spec.clone();
    let s_grad = spec.clone();
    let s_g1 = spec.clone();
    let s_g2 = spec.clone();
    ProblemInstance {
        name: "elliptic1".into(),
        dim: n,
        objective: Arc::new(move |u| s_obj.objective(u)),
        gradient: Arc::new(move |u| s_grad.gradient(u)),
        mu: 2.0 * std::f64::consts::PI * std::f64::consts::PI,
        components: vec![
            ComponentMeta::new(1.0, 2.0 * lambda_max)?,
            ComponentMeta::new(alpha, 2.0 * gamma)?,
        ],
        component_gradients: vec![
            Arc::new(move |u| {
                let au = s_g1.matrix.matvec(u).expect("dimension checked");
                DenseVector::from_fn(u.len(), |i| {
                    2.0 * au[i] - 2.0 * (s_g1.boundary_rhs[i] + s_g1.c_star[i])
                })
                .expect("finite")
            }),
            Arc::new(move |u| {
                DenseVector::from_fn(u.len(), |i| {
                    2.0 * s_g2.gamma * u[i].max(0.0).powf(s_g2.alpha)
                })
                .expect("finite")
            }),
        ],
        feasible: FeasibleSet::whole_space(n),
        minimizer: Some(spec.u_star.clone()),
        optimal_value: Some(f_star),
        initial: Some(u0.clone()),
        residual: None,
        probe_region: ProbeRegion::BallAround {
            center: u0,
            radius: 1.0,
        },
    }
    .validated()
}

/// Data for the box-constrained semi-linear problem on `U = [−1,1]ⁿ` with
/// `f(u) = ½uᵀAu + (δ/(1+α)) Σ |u|^{1+α} − (1/(1+p)) Σ |u|^{1+p} − bᵀu`,
/// boundary data `g(x,y) = 0.5 − sin(x) sin(y)`.
#[derive(Debug, Clone)]
pub struct Elliptic2Spec {
    pub h: f64,
    pub alpha: f64,
    pub p: f64,
    pub delta: f64,
    pub matrix: SparseMatrix,
    pub boundary_rhs: DenseVector,
    pub feasible: FeasibleSet,
}

impl Elliptic2Spec {
    pub fn new(h: f64, alpha: f64, p: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !(p > 1.0) {
            return Err(Error::invalid(format!("p must exceed 1, got {p}")));
        }
        if !(delta > p / alpha) {
            return Err(Error::invalid(format!(
                "strong convexity requires delta > p/alpha = {}, got delta = {delta}",
                p / alpha
            )));
        }
        let matrix = build_laplacian_2d(h)?;
        let boundary_rhs = dirichlet_rhs(h, |x, y| 0.5 - x.sin() * y.sin())?;
        let feasible = FeasibleSet::symmetric_box(matrix.dim(), 1.0)?;
        Ok(Self {
            h,
            alpha,
            p,
            delta,
            matrix,
            boundary_rhs,
            feasible,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn objective(&self, u: &DenseVector) -> f64 {
        let au = self.matrix.matvec(u).expect("dimension checked");
        let mut quad = 0.0;
        let mut holder = 0.0;
        let mut power = 0.0;
        let mut linear = 0.0;
        for i in 0..u.len() {
            let a = u[i].abs();
            quad += u[i] * au[i];
            holder += a.powf(1.0 + self.alpha);
            power += a.powf(1.0 + self.p);
            linear += self.boundary_rhs[i] * u[i];
        }
        0.5 * quad + self.delta / (1.0 + self.alpha) * holder - power / (1.0 + self.p) - linear
    }

    pub fn gradient(&self, u: &DenseVector) -> DenseVector {
        let au = self.matrix.matvec(u).expect("dimension checked");
        DenseVector::from_fn(u.len(), |i| {
            let a = u[i].abs();
            let sgn = if u[i] == 0.0 { 0.0 } else { u[i].signum() };
            au[i] + self.delta * a.powf(self.alpha) * sgn
                - a.powf(self.p - 1.0) * u[i]
                - self.boundary_rhs[i]
        })
        .expect("finite")
    }

    /// Projection of the linear solve `A u = b` onto the box.
    pub fn initial_iterate(&self) -> Result<DenseVector> {
        project(&self.feasible, &cg_solve_default(&self.matrix, &self.boundary_rhs)?)
    }
}

/// Projected-gradient fixed-point residual
/// `‖u − Π_U(u − τ ∇f(u))‖`; zero exactly at the constrained solution.
pub fn residual_norm(spec: &Elliptic2Spec, u: &DenseVector, tau: f64) -> Result<f64> {
    if u.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: u.len(),
        });
    }
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("tau must be positive, got {tau}")));
    }
    if !spec.feasible.contains(u, 1e-9) {
        return Err(Error::invalid("residual point lies outside the box"));
    }
    let g = spec.gradient(u);
    let stepped = project(&spec.feasible, &u.minus_scaled(tau, &g))?;
    Ok(u.dist(&stepped))
}

/// Box-constrained semi-linear instance with `μ` equal to the exact smallest
/// eigenvalue of the discrete operator. No analytic minimizer exists; the
/// projected-gradient residual is the progress metric.
pub fn elliptic2(h: f64, alpha: f64, p: f64, delta: f64) -> Result<ProblemInstance> {
    let spec = Arc::new(Elliptic2Spec::new(h, alpha, p, delta)?);
    let n = spec.dim();
    let (lambda_min, lambda_max) = laplacian_extreme_eigs(h)?;
    let u0 = spec.initial_iterate()?;

    let s_obj = spec.clone();
    let s_grad = spec.clone();
    let s_g1 = spec.clone();
    let s_g2 = spec.clone();
    let s_res = spec.clone();
    ProblemInstance {
        name: "elliptic2".into(),
        dim: n,
        objective: Arc::new(move |u| s_obj.objective(u)),
        gradient: Arc::new(move |u| s_grad.gradient(u)),
        mu: lambda_min,
        components: vec![
            ComponentMeta::new(1.0, 2.0 * lambda_max + 2.0 * p)?,
            ComponentMeta::new(alpha, 2.0 * delta * alpha)?,
        ],
        component_gradients: vec![
            Arc::new(move |u| {
                let au = s_g1.matrix.matvec(u).expect("dimension checked");
                DenseVector::from_fn(u.len(), |i| {
                    let a = u[i].abs();
                    2.0 * au[i] - 2.0 * s_g1.boundary_rhs[i] - 2.0 * a.powf(s_g1.p - 1.0) * u[i]
                })
                .expect("finite")
            }),
            Arc::new(move |u| {
                DenseVector::from_fn(u.len(), |i| {
                    let sgn = if u[i] == 0.0 { 0.0 } else { u[i].signum() };
                    2.0 * s_g2.delta * u[i].abs().powf(s_g2.alpha) * sgn
                })
                .expect("finite")
            }),
        ],
        feasible: spec.feasible.clone(),
        minimizer: None,
        optimal_value: None,
        initial: Some(u0.clone()),
        residual: Some(Arc::new(move |u, tau| {
            residual_norm(&s_res, u, tau).unwrap_or(f64::NAN)
        })),
        probe_region: ProbeRegion::BallAround {
            center: u0,
            radius: 1.0,
        },
    }
    .validated()
}
