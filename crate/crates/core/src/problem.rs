//! Problem instances: objective, gradient, smoothness metadata and the
//! feasible set, bundled for the solvers and probes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::set::FeasibleSet;
use crate::vector::DenseVector;

pub type ObjectiveFn = Arc<dyn Fn(&DenseVector) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&DenseVector) -> DenseVector + Send + Sync>;
/// Problem-specific progress metric `(u, stepsize) -> value`, e.g. the
/// projected-gradient fixed-point residual for box-constrained problems.
pub type ResidualFn = Arc<dyn Fn(&DenseVector, f64) -> f64 + Send + Sync>;

/// Smoothness metadata for one component `f_i`: its gradient satisfies
/// `‖∇f_i(u) − ∇f_i(v)‖ ≤ L ‖u − v‖^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentMeta {
    pub alpha: f64,
    pub lipschitz_holder: f64,
}

impl ComponentMeta {
    pub fn new(alpha: f64, lipschitz_holder: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid(format!(
                "component exponent must lie in (0, 1], got {alpha}"
            )));
        }
        if !(lipschitz_holder > 0.0 && lipschitz_holder.is_finite()) {
            return Err(Error::invalid(format!(
                "component constant must be positive and finite, got {lipschitz_holder}"
            )));
        }
        Ok(Self {
            alpha,
            lipschitz_holder,
        })
    }
}

/// Where the validation probes draw their sample points.
#[derive(Debug, Clone)]
pub enum ProbeRegion {
    /// Per-coordinate uniform in `[lo, hi]`.
    UniformBox { lo: f64, hi: f64 },
    /// Uniform in the Euclidean ball around `center`, then projected feasible.
    BallAround { center: DenseVector, radius: f64 },
}

/// A strongly convex instance whose objective is the average of components
/// with Hölder-continuous gradients.
///
/// The convention throughout: `objective = (1/m) Σ f_i`, and the registered
/// `components[i]` / `component_gradients[i]` describe the un-averaged `f_i`.
#[derive(Clone)]
pub struct ProblemInstance {
    pub name: String,
    pub dim: usize,
    pub objective: ObjectiveFn,
    pub gradient: GradientFn,
    /// Strong-convexity parameter of the averaged objective.
    pub mu: f64,
    pub components: Vec<ComponentMeta>,
    /// Gradient of each un-averaged component, aligned with `components`.
    pub component_gradients: Vec<GradientFn>,
    pub feasible: FeasibleSet,
    pub minimizer: Option<DenseVector>,
    pub optimal_value: Option<f64>,
    /// Default starting point for solvers; projection of zero when absent.
    pub initial: Option<DenseVector>,
    pub residual: Option<ResidualFn>,
    pub probe_region: ProbeRegion,
}

impl ProblemInstance {
    /// Validates the cross-field invariants; call after assembling the fields.
    pub fn validated(self) -> Result<Self> {
        if self.dim == 0 {
            return Err(Error::invalid("problem dimension must be positive"));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid(format!("mu must be positive, got {}", self.mu)));
        }
        if self.components.is_empty() {
            return Err(Error::invalid("component list must be nonempty"));
        }
        if self.components.len() != self.component_gradients.len() {
            return Err(Error::invalid(
                "component metadata and gradient lists must have equal length",
            ));
        }
        if self.feasible.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.feasible.dim(),
            });
        }
        if let Some(m) = &self.minimizer {
            if !self.feasible.contains(m, 1e-12) {
                return Err(Error::invalid("declared minimizer is infeasible"));
            }
            if let Some(fstar) = self.optimal_value {
                let f_min = (self.objective)(m);
                let scale = 1.0_f64.max(fstar.abs());
                if (f_min - fstar).abs() > 1e-10 * scale {
                    return Err(Error::ParameterInconsistency(format!(
                        "objective(minimizer) = {f_min} disagrees with optimal_value = {fstar}"
                    )));
                }
            }
        }
        Ok(self)
    }

    pub fn eval_objective(&self, u: &DenseVector) -> Result<f64> {
        let f = (self.objective)(u);
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::non_finite(format!("objective of `{}`", self.name)))
        }
    }

    pub fn eval_gradient(&self, u: &DenseVector) -> Result<DenseVector> {
        let g = (self.gradient)(u);
        g.ensure_finite(&format!("gradient of `{}`", self.name))?;
        Ok(g)
    }
}

impl std::fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("mu", &self.mu)
            .field("components", &self.components)
            .field("has_minimizer", &self.minimizer.is_some())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_meta_validates_ranges() {
        assert!(ComponentMeta::new(0.5, 2.0).is_ok());
        assert!(ComponentMeta::new(0.0, 2.0).is_err());
        assert!(ComponentMeta::new(1.1, 2.0).is_err());
        assert!(ComponentMeta::new(1.0, 0.0).is_err());
    }

    #[test]
    fn inconsistent_optimal_value_rejected() {
        let f: ObjectiveFn = Arc::new(|u: &DenseVector| 0.5 * u[0] * u[0]);
        let g: GradientFn = Arc::new(|u: &DenseVector| u.clone());
        let p = ProblemInstance {
            name: "quad".into(),
            dim: 1,
            objective: f,
            gradient: g,
            mu: 1.0,
            components: vec![ComponentMeta::new(1.0, 1.0).unwrap()],
            component_gradients: vec![Arc::new(|u: &DenseVector| u.clone())],
            feasible: FeasibleSet::whole_space(1),
            minimizer: Some(DenseVector::zeros(1)),
            optimal_value: Some(0.5),
            initial: None,
            residual: None,
            probe_region: ProbeRegion::UniformBox { lo: -1.0, hi: 1.0 },
        };
        assert!(p.validated().is_err());
    }
}
