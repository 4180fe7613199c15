//! Exact elimination: rank, reduced row echelon form, kernels, inverses and the
//! rank normal form `P·A·Q = diag(I_d, 0)`.
//!
//! Pivoting is deterministic everywhere: the leftmost column with a nonzero entry
//! at or below the current row, and within it the topmost such row.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Plain Gaussian elimination. Fields with cheaper or better-behaved rank routines
/// override [`Field::rank`].
pub fn rank_by_elimination<F: Field>(m: &Matrix<F>) -> usize {
    let mut work = m.clone();
    echelon_in_place(&mut work, false).len()
}

/// Reduce to row echelon form in place and return the pivot columns. With
/// `reduced`, pivots are scaled to one and cleared above as well.
fn echelon_in_place<F: Field>(m: &mut Matrix<F>, reduced: bool) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let field = m.field().clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        if reduced {
            m.scale_row(r, &inv);
        }
        let start = if reduced { 0 } else { r + 1 };
        for i in (start..rows).filter(|&i| i != r) {
            let v = m.get(i, c).clone();
            if field.is_zero(&v) {
                continue;
            }
            let factor = if reduced {
                field.neg(&v)
            } else {
                field.neg(&field.mul(&v, &inv))
            };
            m.add_row_multiple(i, r, &factor);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form together with the invertible `E` such that `E·A = R`.
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub transform: Matrix<F>,
    pub pivots: Vec<usize>,
}

pub fn rref<F: Field>(a: &Matrix<F>) -> Rref<F> {
    let (rows, cols) = a.shape();
    let field = a.field().clone();
    let mut aug = a
        .hcat(&Matrix::identity(field, rows))
        .expect("identity has matching rows");
    let pivots: Vec<usize> = echelon_in_place(&mut aug, true)
        .into_iter()
        .take_while(|&c| c < cols)
        .collect();
    Rref {
        reduced: aug.submatrix(0, rows, 0, cols),
        transform: aug.submatrix(0, rows, cols, cols + rows),
        pivots,
    }
}

/// Basis of `{x : A·x = 0}` as the columns of an `n × (n − rank)` matrix.
pub fn nullspace<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let field = a.field().clone();
    let n = a.cols();
    let mut work = a.clone();
    let pivots = echelon_in_place(&mut work, true);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(field.clone(), n, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis.set(f, k, field.one());
        for (i, &p) in pivots.iter().enumerate() {
            basis.set(p, k, field.neg(work.get(i, f)));
        }
    }
    basis
}

/// Indices of a maximal independent set of columns (the pivot columns).
pub fn independent_columns<F: Field>(a: &Matrix<F>) -> Vec<usize> {
    let mut work = a.clone();
    echelon_in_place(&mut work, false)
}

/// Columns of `candidates` that extend the (independent) columns of `base` to a
/// basis of the span of both, chosen in order.
pub fn extend_basis<F: Field>(base: &Matrix<F>, candidates: &Matrix<F>) -> Result<Matrix<F>> {
    let k = base.cols();
    let both = base.hcat(candidates)?;
    let pivots = independent_columns(&both);
    if pivots.iter().take(k).copied().ne(0..k) {
        return Err(Error::Internal("extend_basis: base columns are dependent".into()));
    }
    let picked: Vec<usize> = pivots.into_iter().skip(k).map(|c| c - k).collect();
    Ok(candidates.select_cols(&picked))
}

/// Columns extending `base` to a basis of the whole space.
pub fn complete_basis<F: Field>(base: &Matrix<F>) -> Result<Matrix<F>> {
    extend_basis(base, &Matrix::identity(base.field().clone(), base.rows()))
}

pub fn inverse<F: Field>(a: &Matrix<F>) -> Option<Matrix<F>> {
    if !a.is_square() {
        return None;
    }
    let r = rref(a);
    if r.pivots.len() == a.rows() {
        Some(r.transform)
    } else {
        None
    }
}

/// Some `X` with `A·X = B`, or `None` if the system is inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Option<Matrix<F>>> {
    if a.rows() != b.rows() {
        return Err(Error::shape("solve", "rhs", format!("{} rows", a.rows()), b.shape()));
    }
    let field = a.field().clone();
    let n = a.cols();
    let r = rref(a);
    let rhs = r.transform.mul(b)?;
    let rank = r.pivots.len();
    if (rank..a.rows()).any(|i| rhs.row(i).iter().any(|x| !field.is_zero(x))) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(field, n, b.cols());
    for (i, &p) in r.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, rhs.get(i, j).clone());
        }
    }
    Ok(Some(x))
}

/// Nonsingular `P`, `Q` with `P·A·Q = diag(I_d, 0)`.
#[derive(Debug, Clone)]
pub struct RankNormalForm<F: Field> {
    pub p_factor: Matrix<F>,
    pub q_factor: Matrix<F>,
    pub p_inverse: Matrix<F>,
    pub q_inverse: Matrix<F>,
    pub rank: usize,
}

impl<F: Field> RankNormalForm<F> {
    /// `diag(I_d, 0)` in the shape of the original matrix.
    pub fn normal(&self) -> Matrix<F> {
        Matrix::partial_identity(
            self.p_factor.field().clone(),
            self.p_factor.rows(),
            self.q_factor.cols(),
            self.rank,
        )
    }

    /// Exact reconstruction check `P·A·Q − diag(I_d, 0) = 0`.
    pub fn verify(&self, a: &Matrix<F>) -> Result<bool> {
        let paq = Matrix::product(&[&self.p_factor, a, &self.q_factor])?;
        Ok(paq == self.normal())
    }
}

pub fn rank_normal_form<F: Field>(a: &Matrix<F>) -> Result<RankNormalForm<F>> {
    let rows = rref(a);
    // R^T has its first d columns independent and the rest zero, so its RREF is
    // diag(I_d, 0) and the column transform is read off the transpose.
    let cols = rref(&rows.reduced.transpose());
    let p_factor = rows.transform;
    let q_factor = cols.transform.transpose();
    let p_inverse =
        inverse(&p_factor).ok_or_else(|| Error::Internal("row transform is singular".into()))?;
    let q_inverse =
        inverse(&q_factor).ok_or_else(|| Error::Internal("column transform is singular".into()))?;
    let form = RankNormalForm {
        p_factor,
        q_factor,
        p_inverse,
        q_inverse,
        rank: rows.pivots.len(),
    };
    if !form.verify(a)? {
        return Err(Error::Internal("rank normal form failed reconstruction".into()));
    }
    Ok(form)
}
