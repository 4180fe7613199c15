//! Seeded random matrices for tests, sweeps and the command line.

use rand::Rng;

use crate::field::Field;
use crate::linalg::inverse;
use crate::matrix::Matrix;

pub fn random_matrix<F: Field, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Matrix<F> {
    let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
    Matrix::new(field.clone(), rows, cols, data).expect("length matches")
}

/// A random nonsingular matrix, by rejection.
pub fn random_nonsingular<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Matrix<F> {
    loop {
        let m = random_matrix(field, n, n, rng);
        if inverse(&m).is_some() {
            return m;
        }
    }
}

/// A random matrix of rank exactly `min(rank, rows, cols)`, as `P·diag(I_r, 0)·Q`.
pub fn random_low_rank<F: Field, R: Rng + ?Sized>(
    field: &F,
    rows: usize,
    cols: usize,
    rank: usize,
    rng: &mut R,
) -> Matrix<F> {
    let r = rank.min(rows).min(cols);
    let p = random_nonsingular(field, rows, rng);
    let q = random_nonsingular(field, cols, rng);
    let core = Matrix::partial_identity(field.clone(), rows, cols, r);
    Matrix::product(&[&p, &core, &q]).expect("conforming")
}

/// Random matrix whose rank is drawn uniformly from `0..=min(rows, cols)`. Uniform
/// entries almost always give full rank, which hides the interesting cases.
pub fn random_mixed_rank<F: Field, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Matrix<F> {
    let r = rng.gen_range(0..=rows.min(cols));
    random_low_rank(field, rows, cols, r, rng)
}
