use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered set of unique type labels (the index set of a population).
///
/// Cloning is cheap: the labels are shared.
#[derive(Debug, Clone)]
pub struct TypeSet {
    labels: Arc<[String]>,
}

impl PartialEq for TypeSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for TypeSet {}

impl TypeSet {
    /// Builds a type set, rejecting empty or duplicated labels.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Invalid("a type set needs at least one label".into()));
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("duplicate type label {:?}", w[0])));
        }
        Ok(Self { labels: labels.into() })
    }

    /// Labels `prefix0, prefix1, …` for `k ≥ 1` types.
    pub fn indexed(prefix: &str, k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| format!("{prefix}{i}")))
    }

    /// Number of types K.
    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false (a type set has K ≥ 1); provided for clippy symmetry.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in order.
    #[inline]
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Position of a label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The sub-type-set at the given (increasing) positions.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        Self::new(keep.iter().map(|&i| self.labels[i].clone()))
    }
}

/// A finite population: non-negative weights μ_i over a type set, with
/// total size N = Σ μ_i > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    types: TypeSet,
    weights: Vec<f64>,
    size: f64,
}

impl Population {
    /// Validates lengths, non-negativity and a positive total.
    pub fn new(types: TypeSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != types.len() {
            return Err(Error::Shape(format!(
                "{} weights for {} types",
                weights.len(),
                types.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::Negative(format!("weight {w} for type {:?}", types.labels()[i])));
        }
        let size: f64 = weights.iter().sum();
        if !(size > 0.0) {
            return Err(Error::Degenerate("population size N must be positive".into()));
        }
        Ok(Self { types, weights, size })
    }

    /// Population over labels `t0, t1, …`.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let types = TypeSet::indexed("t", weights.len().max(1))?;
        Self::new(types, weights)
    }

    /// The underlying type set.
    #[inline]
    pub fn types(&self) -> &TypeSet {
        &self.types
    }

    /// Weights μ_i.
    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of types K.
    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Always false for a valid population.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total size N.
    #[inline]
    pub fn size(&self) -> f64 {
        self.size
    }

    /// Normalised weights μ_i / N.
    pub fn probabilities(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w / self.size).collect()
    }

    /// Whether `other` has the same type set and weights equal within a
    /// relative tolerance `rel` (scaled by the larger population size).
    pub fn approx_eq(&self, other: &Population, rel: f64) -> bool {
        if self.types != other.types {
            return false;
        }
        let scale = self.size.max(other.size).max(1.0);
        self.weights.iter().zip(&other.weights).all(|(a, b)| (a - b).abs() <= rel * scale)
    }
}

/// A real-valued observable X : I → ℝ.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    types: TypeSet,
    values: Vec<f64>,
}

impl Observable {
    /// Validates that there is one value per type.
    pub fn new(types: TypeSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != types.len() {
            return Err(Error::Shape(format!(
                "{} observable values for {} types",
                values.len(),
                types.len()
            )));
        }
        Ok(Self { types, values })
    }

    /// Observable on the types of `pop`.
    pub fn on(pop: &Population, values: Vec<f64>) -> Result<Self> {
        Self::new(pop.types().clone(), values)
    }

    /// The constant observable `c`.
    pub fn constant(types: &TypeSet, c: f64) -> Self {
        Self { types: types.clone(), values: vec![c; types.len()] }
    }

    /// Applies `f` pointwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { types: self.types.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination of two observables on the same type set.
    pub fn zip_with(&self, other: &Observable, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            types: self.types.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Observable) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// The type set.
    #[inline]
    pub fn types(&self) -> &TypeSet {
        &self.types
    }

    /// Values X(i).
    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Consumes the observable and returns its values.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Errors unless both observables share a type set.
    pub fn check_same(&self, other: &Observable) -> Result<()> {
        if self.types != other.types {
            return Err(Error::TypeMismatch("observables live on different type sets".into()));
        }
        Ok(())
    }

    /// Errors unless the observable lives on `pop`'s type set.
    pub fn check_on(&self, pop: &Population) -> Result<()> {
        if &self.types != pop.types() {
            return Err(Error::TypeMismatch(
                "observable is not defined on the population's type set".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_set_rejects_duplicates_and_empty() {
        assert!(TypeSet::new(["a", "a"]).is_err());
        assert!(TypeSet::new(Vec::<String>::new()).is_err());
        assert_eq!(TypeSet::new(["a", "b"]).unwrap().len(), 2);
    }

    #[test]
    fn population_validation() {
        assert!(Population::from_weights(vec![1.0, -1.0]).is_err());
        assert!(Population::from_weights(vec![0.0, 0.0]).is_err());
        let p = Population::from_weights(vec![1.0, 3.0]).unwrap();
        assert_eq!(p.size(), 4.0);
        assert_eq!(p.probabilities(), vec![0.25, 0.75]);
    }

    #[test]
    fn observable_shape_checked() {
        let p = Population::from_weights(vec![1.0, 1.0]).unwrap();
        assert!(Observable::on(&p, vec![1.0]).is_err());
        let q = Population::from_weights(vec![1.0, 1.0, 1.0]).unwrap();
        let x = Observable::on(&p, vec![1.0, 2.0]).unwrap();
        assert!(x.check_on(&q).is_err());
    }
}
