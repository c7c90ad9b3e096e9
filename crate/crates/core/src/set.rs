//! Feasible sets and the Euclidean projection.

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// The constraint set: either all of `R^n` or a per-coordinate box.
#[derive(Debug, Clone)]
pub enum FeasibleSet {
    WholeSpace { dim: usize },
    Box { lower: DenseVector, upper: DenseVector },
}

impl FeasibleSet {
    pub fn whole_space(dim: usize) -> Self {
        FeasibleSet::WholeSpace { dim }
    }

    pub fn new_box(lower: DenseVector, upper: DenseVector) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for i in 0..lower.len() {
            if lower[i] > upper[i] {
                return Err(Error::invalid(format!(
                    "box bounds inverted at coordinate {i}: {} > {}",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// A centered box `[-r, r]^n`.
    pub fn symmetric_box(dim: usize, r: f64) -> Result<Self> {
        Self::new_box(DenseVector::from_elem(dim, -r)?, DenseVector::from_elem(dim, r)?)
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::WholeSpace { dim } => *dim,
            FeasibleSet::Box { lower, .. } => lower.len(),
        }
    }

    pub fn contains(&self, u: &DenseVector, tol: f64) -> bool {
        match self {
            FeasibleSet::WholeSpace { dim } => u.len() == *dim,
            FeasibleSet::Box { lower, upper } => {
                u.len() == lower.len()
                    && (0..u.len()).all(|i| u[i] >= lower[i] - tol && u[i] <= upper[i] + tol)
            }
        }
    }
}

/// Euclidean projection onto the set. The whole space returns `u` unchanged;
/// a box clamps each coordinate into `[lower[i], upper[i]]`.
pub fn project(set: &FeasibleSet, u: &DenseVector) -> Result<DenseVector> {
    if u.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: u.len(),
        });
    }
    match set {
        FeasibleSet::WholeSpace { .. } => Ok(u.clone()),
        FeasibleSet::Box { lower, upper } => Ok(DenseVector::from_fn(u.len(), |i| {
            u[i].max(lower[i]).min(upper[i])
        })?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box2() -> FeasibleSet {
        FeasibleSet::symmetric_box(2, 1.0).unwrap()
    }

    #[test]
    fn whole_space_is_identity() {
        let s = FeasibleSet::whole_space(2);
        let u = DenseVector::new(vec![3.5, -2.0]).unwrap();
        assert_eq!(project(&s, &u).unwrap(), u);
    }

    #[test]
    fn box_clamps_componentwise() {
        let u = DenseVector::new(vec![2.0, -0.5]).unwrap();
        let p = project(&unit_box2(), &u).unwrap();
        assert_eq!(p.as_slice(), &[1.0, -0.5]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let u = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(project(&unit_box2(), &u).is_err());
    }

    #[test]
    fn inverted_bounds_rejected() {
        let lo = DenseVector::new(vec![1.0]).unwrap();
        let hi = DenseVector::new(vec![0.0]).unwrap();
        assert!(FeasibleSet::new_box(lo, hi).is_err());
    }
}
