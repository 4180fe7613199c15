//! Dense row-major matrices over an exact field.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                op: "Matrix::new",
                operand: "entries".into(),
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        Self::partial_identity(field, n, n, n)
    }

    /// `diag(I_rank, 0)` of shape `rows × cols`.
    pub fn partial_identity(field: F, rows: usize, cols: usize, rank: usize) -> Self {
        debug_assert!(rank <= rows.min(cols));
        let mut m = Self::zeros(field, rows, cols);
        let one = m.field.one();
        for i in 0..rank {
            m.set(i, i, one.clone());
        }
        m
    }

    /// Square diagonal matrix.
    pub fn diagonal(field: F, diag: Vec<F::Elem>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, bad)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(Error::Shape {
                op: "Matrix::from_rows",
                operand: format!("row {i}"),
                expected: format!("{c} entries"),
                found: format!("{} entries", bad.len()),
            });
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience for literals: entries are mapped into the field.
    pub fn from_i64(field: F, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    /// Column vectors assembled side by side into a `len × k` matrix.
    pub fn from_columns(field: F, len: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), len);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn spec(&self) -> FieldSpec {
        self.field.spec()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn rank(&self) -> usize {
        self.field.rank(self)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        self.map(|f, x| f.neg(x))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map(|f, x| f.mul(s, x))
    }

    fn map(&self, op: impl Fn(&F, &F::Elem) -> F::Elem) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| op(&self.field, x)).collect(),
        }
    }

    fn check_same_field(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Field(format!(
                "{op}: operands live over {} and {}",
                self.spec(),
                other.spec()
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem,
    ) -> Result<Self> {
        self.check_same_field(other, op)?;
        if self.shape() != other.shape() {
            return Err(Error::shape(
                op,
                "rhs",
                format!("{}x{}", self.rows, self.cols),
                other.shape(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(&self.field, a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |f, a, b| f.sub(a, b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other, "mul")?;
        if self.cols != other.rows {
            return Err(Error::shape(
                "mul",
                "rhs",
                format!("{} rows", self.cols),
                other.shape(),
            ));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Product of a chain of matrices, left to right.
    pub fn product(factors: &[&Self]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Precondition("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
    }

    /// `[self, other]`
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other, "hcat")?;
        if self.rows != other.rows {
            return Err(Error::shape(
                "hcat",
                "rhs",
                format!("{} rows", self.rows),
                other.shape(),
            ));
        }
        let mut out = Self::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    /// `[self; other]`
    pub fn vcat(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other, "vcat")?;
        if self.cols != other.cols {
            return Err(Error::shape(
                "vcat",
                "rhs",
                format!("{} columns", self.cols),
                other.shape(),
            ));
        }
        let mut out = Self::zeros(self.field.clone(), self.rows + other.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, other);
        Ok(out)
    }

    /// `[[a, b], [c, d]]`
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        a.hcat(b)?.vcat(&c.hcat(d)?)
    }

    /// `diag(a, b)`
    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        a.check_same_field(b, "direct_sum")?;
        let mut out = Self::zeros(a.field.clone(), a.rows + b.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        Ok(out)
    }

    /// Copy of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut out = Self::zeros(self.field.clone(), r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                out.set(r - r0, c - c0, self.get(r, c).clone());
            }
        }
        out
    }

    /// Overwrite the block starting at `(r0, c0)` with `block`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Rows picked in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field.clone(), idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    /// Columns picked in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &F::Elem) {
        for c in 0..self.cols {
            let v = self.field.mul(factor, self.get(src, c));
            let idx = dst * self.cols + c;
            self.data[idx] = self.field.add(&self.data[idx], &v);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, factor: &F::Elem) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = self.field.mul(factor, &self.data[idx]);
        }
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}]", self.rows, self.cols, self.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format_elem(x)).collect();
            write!(f, "\n  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_matrix(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn blocks_and_products() {
        let q = Rationals;
        let a = Matrix::from_i64(q, &[&[1, 2], &[3, 4]]).unwrap();
        let i = Matrix::identity(q, 2);
        assert_eq!(a.mul(&i).unwrap(), a);
        let m = Matrix::block2x2(&a, &i, &i, &Matrix::zeros(q, 2, 2)).unwrap();
        assert_eq!(m.shape(), (4, 4));
        assert_eq!(m.submatrix(0, 2, 2, 4), i);
        assert_eq!(m.submatrix(2, 4, 0, 2), i);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(
            a.transpose(),
            Matrix::from_i64(q, &[&[1, 3], &[2, 4]]).unwrap()
        );
    }

    #[test]
    fn shape_errors_name_the_operand() {
        let q = Rationals;
        let a = Matrix::zeros(q, 2, 3);
        let b = Matrix::zeros(q, 2, 3);
        let err = a.mul(&b).unwrap_err();
        assert!(matches!(err, Error::Shape { op: "mul", .. }));
        assert!(a.vcat(&Matrix::zeros(q, 1, 2)).is_err());
        assert!(a.hcat(&Matrix::zeros(q, 3, 2)).is_err());
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let f2 = PrimeField::new(2).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        let a = Matrix::identity(f2, 2);
        let b = Matrix::identity(f3, 2);
        assert!(matches!(a.add(&b), Err(Error::Field(_))));
    }

    #[test]
    fn empty_shapes_are_allowed() {
        let q = Rationals;
        let a = Matrix::zeros(q, 0, 3);
        let b = Matrix::zeros(q, 3, 0);
        assert_eq!(a.mul(&b).unwrap().shape(), (0, 0));
        assert_eq!(b.mul(&a).unwrap().shape(), (3, 3));
        assert!(b.mul(&a).unwrap().is_zero());
        assert_eq!(a.rank(), 0);
    }
}
