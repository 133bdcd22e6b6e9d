#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;
use zoquad_core::{jacobi_eigh, SymmetricMatrix};

/// Rows of a random orthogonal matrix, taken from the eigenvectors of a
/// random symmetric Gaussian matrix.
pub fn random_orthogonal<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    let mut m = SymmetricMatrix::zeros(d).unwrap();
    for i in 0..d {
        for j in i..d {
            m.set(i, j, rng.sample(StandardNormal));
        }
    }
    let eig = jacobi_eigh(&m).unwrap();
    eig.eigenvectors().flat_map(|v| v.to_vec()).collect()
}

/// `Q diag(λ) Qᵀ` with a random orthogonal `Q`.
pub fn rotated<R: Rng>(rng: &mut R, eigenvalues: &[f64]) -> SymmetricMatrix {
    let q = random_orthogonal(rng, eigenvalues.len());
    SymmetricMatrix::diagonal(eigenvalues).unwrap().conjugate(&q).unwrap()
}

pub fn random_in_ball<R: Rng>(rng: &mut R, d: usize, radius: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    g.iter().map(|v| v * r / n).collect()
}

pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}
