//! Benchmark problem instances.

mod elliptic;

pub use elliptic::{
    dirichlet_rhs, elliptic1, elliptic2, exact_solution, exact_solution_grid, residual_norm,
    Elliptic1Spec, Elliptic2Spec,
};

use std::sync::Arc;

use crate::problem::{ComponentMeta, GradientFn, ProbeRegion, ProblemInstance};
use crate::set::FeasibleSet;
use crate::vector::DenseVector;

fn sign(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum()
    }
}

/// The univariate stagnation instance
/// `f(x) = x²/2 + (2/3)|x|^{3/2}` on the whole line, with minimizer 0 and
/// `μ = 1`. Under the averaging convention the registered components are
/// `f₁(x) = x²` (`α = 1`, `L = 2`) and `f₂(x) = (4/3)|x|^{3/2}`
/// (`α = 1/2`, `L = 2√2`).
pub fn example1() -> ProblemInstance {
    let grad_f2: GradientFn = Arc::new(|u: &DenseVector| {
        DenseVector::new(vec![2.0 * sign(u[0]) * u[0].abs().sqrt()]).expect("finite")
    });
    ProblemInstance {
        name: "example1".into(),
        dim: 1,
        objective: Arc::new(|u: &DenseVector| {
            let x = u[0];
            0.5 * x * x + 2.0 / 3.0 * x.abs().powf(1.5)
        }),
        gradient: Arc::new(|u: &DenseVector| {
            let x = u[0];
            DenseVector::new(vec![x + sign(x) * x.abs().sqrt()]).expect("finite")
        }),
        mu: 1.0,
        components: vec![
            ComponentMeta::new(1.0, 2.0).expect("valid"),
            ComponentMeta::new(0.5, 2.0 * 2f64.sqrt()).expect("valid"),
        ],
        component_gradients: vec![
            Arc::new(|u: &DenseVector| DenseVector::new(vec![2.0 * u[0]]).expect("finite")),
            grad_f2,
        ],
        feasible: FeasibleSet::whole_space(1),
        minimizer: Some(DenseVector::zeros(1)),
        optimal_value: Some(0.0),
        initial: Some(DenseVector::new(vec![1.0]).expect("finite")),
        residual: None,
        probe_region: ProbeRegion::UniformBox { lo: -10.0, hi: 10.0 },
    }
    .validated()
    .expect("example1 is well-formed")
}

/// Synthetic quadratic `f(u) = ‖u‖²/2` with `μ = L = 1`; the `α̂ = 1`
/// reference case for predictors and solver tests.
pub fn quadratic(dim: usize) -> ProblemInstance {
    ProblemInstance {
        name: "quadratic".into(),
        dim,
        objective: Arc::new(|u: &DenseVector| 0.5 * u.dot(u)),
        gradient: Arc::new(|u: &DenseVector| u.clone()),
        mu: 1.0,
        components: vec![ComponentMeta::new(1.0, 1.0).expect("valid")],
        component_gradients: vec![Arc::new(|u: &DenseVector| u.clone())],
        feasible: FeasibleSet::whole_space(dim),
        minimizer: Some(DenseVector::zeros(dim)),
        optimal_value: Some(0.0),
        initial: Some(DenseVector::from_elem(dim, 1.0).expect("finite")),
        residual: None,
        probe_region: ProbeRegion::UniformBox { lo: -10.0, hi: 10.0 },
    }
    .validated()
    .expect("quadratic is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_values() {
        let p = example1();
        let at = |x: f64| {
            let u = DenseVector::new(vec![x]).unwrap();
            ((p.objective)(&u), (p.gradient)(&u)[0])
        };
        let (f0, g0) = at(0.0);
        assert_eq!(f0, 0.0);
        assert_eq!(g0, 0.0);
        let (f1, g1) = at(1.0);
        assert!((f1 - 7.0 / 6.0).abs() < 1e-15);
        assert!((g1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn example1_component_two_is_holder_half() {
        // |∇f₂(x) − ∇f₂(y)| <= 2√2 |x−y|^{1/2} on a deterministic pair grid.
        let p = example1();
        let g2 = &p.component_gradients[1];
        let l = 2.0 * 2f64.sqrt();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..100 {
            for j in 0..100 {
                let x = -10.0 + 0.2020203 * i as f64;
                let y = -10.0 + 0.1999999 * j as f64 + 0.05;
                let gx = g2(&DenseVector::new(vec![x]).unwrap())[0];
                let gy = g2(&DenseVector::new(vec![y]).unwrap())[0];
                worst = worst.max((gx - gy).abs() - l * (x - y).abs().sqrt());
            }
        }
        assert!(worst <= 1e-9, "worst margin {worst}");
    }
}
