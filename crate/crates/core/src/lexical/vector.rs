use serde::{Deserialize, Serialize};
use termbench_stats::summary::compensated_sum;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("embedding vector has dimension 0".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("embedding component {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v * v)).sqrt()
    }
}

impl TryFrom<Vec<f64>> for EmbeddingVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<EmbeddingVector> for Vec<f64> {
    fn from(v: EmbeddingVector) -> Self {
        v.values
    }
}

/// Componentwise mean of the token rows.
pub fn mean_pool(rows: &[Vec<f64>]) -> Result<EmbeddingVector> {
    let first = rows.first().ok_or_else(|| Error::Domain("cannot pool an empty token matrix".into()))?;
    let dim = first.len();
    if let Some(r) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::Domain(format!("token rows have dimensions {dim} and {}", r.len())));
    }
    let n = rows.len() as f64;
    EmbeddingVector::new((0..dim).map(|j| compensated_sum(rows.iter().map(|r| r[j])) / n).collect())
}

/// Cosine similarity clamped to `[-1, 1]`.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!("cosine of vectors with dimensions {} and {}", a.dim(), b.dim())));
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Domain("cosine of a zero vector".into()));
    }
    let dot = compensated_sum(a.values.iter().zip(&b.values).map(|(x, y)| x * y));
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[f64]) -> EmbeddingVector {
        EmbeddingVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn pooling() {
        assert_eq!(mean_pool(&[vec![1.0, 2.0, 3.0]]).unwrap(), v(&[1.0, 2.0, 3.0]));
        assert_eq!(mean_pool(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(), v(&[0.5, 0.5]));
        assert!(matches!(mean_pool(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn cosine_cases() {
        assert_eq!(cosine(&v(&[0.3, -2.0]), &v(&[0.3, -2.0])).unwrap(), 1.0);
        assert_eq!(cosine(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(cosine(&v(&[1.0, 0.0]), &v(&[-1.0, 0.0])).unwrap(), -1.0);
        assert!(cosine(&v(&[0.0, 0.0]), &v(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(EmbeddingVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(serde_json::from_str::<EmbeddingVector>("[]").is_err());
    }

    proptest! {
        #[test]
        fn cosine_symmetric_and_scale_invariant(
            a in prop::collection::vec(-10.0f64..10.0, 8),
            b in prop::collection::vec(-10.0f64..10.0, 8),
            alpha in 0.01f64..100.0,
        ) {
            let (va, vb) = (v(&a), v(&b));
            prop_assume!(va.norm() > 1e-6 && vb.norm() > 1e-6);
            let c = cosine(&va, &vb).unwrap();
            prop_assert_eq!(c, cosine(&vb, &va).unwrap());
            let scaled = v(&a.iter().map(|x| x * alpha).collect::<Vec<_>>());
            prop_assert!((cosine(&scaled, &vb).unwrap() - c).abs() < 1e-12);
        }

        #[test]
        fn pooling_is_size_weighted(
            m1 in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 1..6),
            m2 in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 1..6),
        ) {
            let all: Vec<Vec<f64>> = m1.iter().chain(&m2).cloned().collect();
            let (p1, p2, p) = (mean_pool(&m1).unwrap(), mean_pool(&m2).unwrap(), mean_pool(&all).unwrap());
            let (n1, n2) = (m1.len() as f64, m2.len() as f64);
            for j in 0..3 {
                let w = (n1 * p1.values()[j] + n2 * p2.values()[j]) / (n1 + n2);
                prop_assert!((p.values()[j] - w).abs() < 1e-12);
            }
        }
    }
}
