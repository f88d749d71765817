//! PCA checked against a cyclic Jacobi eigensolver on the explicit
//! covariance matrix.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256StarStar;
use termbench_core::lexical::{pca_project, EmbeddingVector, LabeledVector, PointClass};
use termbench_core::Terminology;

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
fn jacobi(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = order.iter().map(|&i| (0..n).map(|r| v[r][i]).collect()).collect();
    (vals, vecs)
}

fn sign_fix(mut c: Vec<f64>) -> Vec<f64> {
    let big = c.iter().cloned().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap().0;
    if c[big] < 0.0 {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

fn data(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|j| { let z: f64 = StandardNormal.sample(&mut rng); z } * (1.0 + j as f64 * 0.37)).collect())
        .collect()
}

fn check(n: usize, dim: usize, seed: u64) {
    let rows = data(n, dim, seed);
    let vectors: Vec<LabeledVector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| LabeledVector {
            label: i.to_string(),
            class: PointClass::Identifier,
            terminology: Terminology::GoCc,
            vector: EmbeddingVector::new(r.clone()).unwrap(),
        })
        .collect();
    let p = pca_project(&vectors, 2).unwrap();

    let mean: Vec<f64> = (0..dim).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let cov: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| rows.iter().map(|r| (r[a] - mean[a]) * (r[b] - mean[b])).sum::<f64>() / (n as f64 - 1.0))
                .collect()
        })
        .collect();
    let total: f64 = (0..dim).map(|i| cov[i][i]).sum();
    let (vals, vecs) = jacobi(cov);
    for c in 0..2 {
        let oracle = sign_fix(vecs[c].clone());
        for j in 0..dim {
            assert!((p.components[c][j] - oracle[j]).abs() < 1e-6, "component {c}[{j}]");
        }
        assert!((p.explained_variance[c] - vals[c] / total).abs() < 1e-9);
        for (r, pt) in rows.iter().zip(&p.points) {
            let proj: f64 = (0..dim).map(|j| (r[j] - mean[j]) * oracle[j]).sum();
            assert!((pt.coords[c] - proj).abs() < 1e-6);
        }
    }
    for a in 0..2 {
        for b in 0..2 {
            let dot: f64 = p.components[a].iter().zip(&p.components[b]).map(|(x, y)| x * y).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-8);
        }
    }
}

#[test]
fn covariance_route_matches_jacobi() {
    check(100, 20, 1);
}

#[test]
fn gram_route_matches_jacobi() {
    check(15, 20, 2);
}
