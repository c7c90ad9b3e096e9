//! Dense 64-bit float vectors with a finiteness invariant.

use crate::error::{Error, Result};

/// A dense vector of `f64` entries. Construction rejects NaN and infinities;
/// solvers re-check the invariant after every evaluator call.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    values: Vec<f64>,
}

impl DenseVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::non_finite(format!("DenseVector entry {i}")));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    pub fn from_elem(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dist: length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `self − c·other`, the gradient-step workhorse.
    pub fn minus_scaled(&self, c: f64, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - c * b)
    }

    /// `a·u + b·v`.
    pub fn combine(a: f64, u: &Self, b: f64, v: &Self) -> Self {
        u.zip_with(v, |x, y| a * x + b * y)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "element-wise op: length mismatch");
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// Enforces the no-NaN/Inf invariant at solver checkpoints.
    pub fn ensure_finite(&self, context: &str) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::non_finite(context.to_string()))
        }
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Vec<f64> {
        v.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        assert!(DenseVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(DenseVector::new(vec![f64::INFINITY]).is_err());
        assert!(DenseVector::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn basic_arithmetic() {
        let u = DenseVector::new(vec![3.0, 4.0]).unwrap();
        let v = DenseVector::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(u.norm(), 5.0);
        assert_eq!(u.dot(&v), -1.0);
        assert_eq!(u.minus(&v).as_slice(), &[2.0, 5.0]);
        assert_eq!(u.minus_scaled(2.0, &v).as_slice(), &[1.0, 6.0]);
        assert_eq!(DenseVector::combine(0.5, &u, 0.5, &v).as_slice(), &[2.0, 1.5]);
    }

    #[test]
    fn ensure_finite_flags_overflow() {
        let u = DenseVector::new(vec![f64::MAX]).unwrap();
        let doubled = u.scaled(2.0);
        assert!(doubled.ensure_finite("test").is_err());
    }
}
