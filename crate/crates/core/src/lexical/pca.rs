use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use termbench_stats::summary::compensated_sum;

use super::vector::EmbeddingVector;
use crate::popularity::csv_error;
use crate::{Error, Result, Terminology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Term,
    Identifier,
}

impl PointClass {
    pub fn code(self) -> &'static str {
        match self {
            PointClass::Term => "term",
            PointClass::Identifier => "identifier",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVector {
    pub label: String,
    pub class: PointClass,
    pub terminology: Terminology,
    pub vector: EmbeddingVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaPoint {
    pub label: String,
    pub class: PointClass,
    pub terminology: Terminology,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaProjection {
    /// `k` orthonormal vectors of length `dim`.
    pub components: Vec<Vec<f64>>,
    /// Top-`k` eigenvalues over the total variance.
    pub explained_variance: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub mean: Vec<f64>,
    pub rank: usize,
    pub points: Vec<PcaPoint>,
}

/// Projects mean-centred vectors onto their top `k` principal components.
///
/// The eigendecomposition runs on the `dim × dim` covariance when
/// `dim ≤ n`, otherwise on the `n × n` Gram matrix with components mapped
/// back through the data. Each component is signed so that its
/// largest-magnitude coordinate is positive.
pub fn pca_project(vectors: &[LabeledVector], k: usize) -> Result<PcaProjection> {
    let n = vectors.len();
    if k == 0 {
        return Err(Error::Domain("PCA needs k ≥ 1".into()));
    }
    if n < k + 1 {
        return Err(Error::Domain(format!("PCA with k = {k} needs at least {} vectors, got {n}", k + 1)));
    }
    let dim = vectors[0].vector.dim();
    if let Some(v) = vectors.iter().find(|v| v.vector.dim() != dim) {
        return Err(Error::Domain(format!("{} has dim {}, expected {dim}", v.label, v.vector.dim())));
    }

    let mean: Vec<f64> =
        (0..dim).map(|j| compensated_sum(vectors.iter().map(|v| v.vector.values()[j])) / n as f64).collect();
    let x = DMatrix::from_fn(n, dim, |i, j| vectors[i].vector.values()[j] - mean[j]);
    let scale = 1.0 / (n as f64 - 1.0);
    let total = compensated_sum(x.iter().map(|v| v * v)) * scale;

    let (mut eigenvalues, mut components): (Vec<f64>, Vec<Vec<f64>>) = if dim <= n {
        let cov = (x.transpose() * &x) * scale;
        let eig = SymmetricEigen::new(cov);
        let order = descending(eig.eigenvalues.as_slice());
        (
            order.iter().map(|&i| eig.eigenvalues[i]).collect(),
            order.iter().take(k).map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect(),
        )
    } else {
        let gram = (&x * x.transpose()) * scale;
        let eig = SymmetricEigen::new(gram);
        let order = descending(eig.eigenvalues.as_slice());
        let comps = order
            .iter()
            .take(k)
            .map(|&i| {
                let v = x.transpose() * eig.eigenvectors.column(i);
                let norm = v.norm();
                v.iter().map(|c| if norm > 0.0 { c / norm } else { 0.0 }).collect()
            })
            .collect();
        (order.iter().map(|&i| eig.eigenvalues[i]).collect(), comps)
    };
    for ev in eigenvalues.iter_mut() {
        *ev = ev.max(0.0);
    }

    let lead = eigenvalues.first().copied().unwrap_or(0.0);
    let tol = lead * f64::EPSILON * (n.max(dim) as f64) * 16.0;
    let rank = if lead > 0.0 { eigenvalues.iter().filter(|&&ev| ev > tol).count() } else { 0 };
    if rank < k {
        return Err(Error::Domain(format!(
            "degenerate rank: centred data has rank {rank}, fewer than the {k} components requested"
        )));
    }

    for c in components.iter_mut() {
        let (mut best, mut best_abs) = (0usize, -1.0f64);
        for (j, v) in c.iter().enumerate() {
            if v.abs() > best_abs {
                best = j;
                best_abs = v.abs();
            }
        }
        if c[best] < 0.0 {
            c.iter_mut().for_each(|v| *v = -*v);
        }
    }

    eigenvalues.truncate(k);
    let explained_variance = eigenvalues.iter().map(|ev| ev / total).collect();
    let points = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| PcaPoint {
            label: v.label.clone(),
            class: v.class,
            terminology: v.terminology,
            coords: components
                .iter()
                .map(|c| compensated_sum((0..dim).map(|j| x[(i, j)] * c[j])))
                .collect(),
        })
        .collect();
    Ok(PcaProjection { components, explained_variance, eigenvalues, mean, rank, points })
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx
}

/// `label,class,terminology,x,y` for a two-component projection.
pub fn write_pca_points<W: Write>(writer: W, projection: &PcaProjection) -> Result<()> {
    if projection.components.len() != 2 {
        return Err(Error::Domain(format!(
            "point table needs 2 components, projection has {}",
            projection.components.len()
        )));
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["label", "class", "terminology", "x", "y"]).map_err(csv_error)?;
    for p in &projection.points {
        w.write_record([
            p.label.as_str(),
            p.class.code(),
            p.terminology.code(),
            &format!("{:.6}", p.coords[0]),
            &format!("{:.6}", p.coords[1]),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io("writing PCA points", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(rows: Vec<Vec<f64>>) -> Vec<LabeledVector> {
        rows.into_iter()
            .enumerate()
            .map(|(i, r)| LabeledVector {
                label: format!("p{i}"),
                class: PointClass::Term,
                terminology: Terminology::Hpo,
                vector: EmbeddingVector::new(r).unwrap(),
            })
            .collect()
    }

    #[test]
    fn rank_one_line() {
        let v = [0.3, -1.0, 2.0, 0.5];
        let rows = (0..10).map(|t| v.iter().map(|c| c * (t as f64 - 4.0)).collect()).collect();
        let p = pca_project(&labeled(rows), 1).unwrap();
        assert!(p.explained_variance[0] >= 1.0 - 1e-10);
        // sign convention: largest-magnitude coordinate (2.0) positive
        assert!(p.components[0][2] > 0.0);
    }

    #[test]
    fn rank_deficit_reports_rank() {
        let rows = (0..5).map(|t| vec![t as f64, 2.0 * t as f64, 0.0]).collect();
        let err = pca_project(&labeled(rows), 2).unwrap_err();
        assert!(err.to_string().contains("rank 1"), "{err}");
    }

    #[test]
    fn plane_in_ten_dims_both_routes() {
        for n in [6usize, 30] {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let (a, b) = ((i as f64 * 0.7).sin() * 3.0, (i as f64 * 1.3).cos());
                    (0..10).map(|j| a * (j as f64 + 1.0) + b * (10.0 - j as f64 * j as f64 * 0.1)).collect()
                })
                .collect();
            let p = pca_project(&labeled(rows), 2).unwrap();
            let s: f64 = p.explained_variance.iter().sum();
            assert!((s - 1.0).abs() < 1e-10, "n={n}: {s}");
            assert!(p.explained_variance[0] >= p.explained_variance[1]);
            let dot: f64 = p.components[0].iter().zip(&p.components[1]).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-8);
        }
    }

    #[test]
    fn needs_k_plus_one_points() {
        assert!(pca_project(&labeled(vec![vec![1.0, 2.0], vec![2.0, 1.0]]), 2).is_err());
    }
}
