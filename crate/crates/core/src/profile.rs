//! Block assembly `G = [A, B]`, `H = [A; C]`, `M = [[A, B], [C, 0]]` and the rank
//! profile `(r(A), r(G), r(H), r(M))` that every closed-form formula consumes.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Dimensions of a triple: `A` is `m × n`, `B` is `m × p`, `C` is `q × n`, and the
/// variable `X` of `A + BXC` is `p × q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize, p: usize, q: usize) -> Self {
        Dims { m, n, p, q }
    }

    /// Largest rank a `p × q` variable matrix can have.
    pub fn max_x_rank(&self) -> usize {
        self.p.min(self.q)
    }

    /// Dimensions of the transposed triple `(Aᵀ, Cᵀ, Bᵀ)`.
    pub fn transposed(&self) -> Self {
        Dims::new(self.n, self.m, self.q, self.p)
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} p={} q={}", self.m, self.n, self.p, self.q)
    }
}

/// The four ranks `r(A)`, `r[A, B]`, `r[A; C]` and `r[[A, B], [C, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankProfile {
    pub r_a: usize,
    pub r_g: usize,
    pub r_h: usize,
    pub r_m: usize,
}

impl RankProfile {
    /// Validated constructor: `r_a ≤ r_g, r_h ≤ r_m ≤ min(m + q, n + p)` together
    /// with the trivial size bounds.
    pub fn new(r_a: usize, r_g: usize, r_h: usize, r_m: usize, dims: Dims) -> Result<Self> {
        let prof = RankProfile { r_a, r_g, r_h, r_m };
        prof.check(dims)?;
        Ok(prof)
    }

    pub fn check(&self, dims: Dims) -> Result<()> {
        let Dims { m, n, p, q } = dims;
        let checks = [
            (self.r_a <= m.min(n), "r(A) <= min(m, n)"),
            (self.r_g <= m.min(n + p), "r(G) <= min(m, n + p)"),
            (self.r_h <= n.min(m + q), "r(H) <= min(n, m + q)"),
            (self.r_a <= self.r_g, "r(A) <= r(G)"),
            (self.r_a <= self.r_h, "r(A) <= r(H)"),
            (self.r_g <= self.r_m, "r(G) <= r(M)"),
            (self.r_h <= self.r_m, "r(H) <= r(M)"),
            (self.r_m <= (m + q).min(n + p), "r(M) <= min(m + q, n + p)"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, rule)) => Err(Error::Consistency(format!("{self} violates {rule}"))),
            None => Ok(()),
        }
    }

    /// Profile of the transposed triple `(Aᵀ, Cᵀ, Bᵀ)`.
    pub fn transposed(&self) -> Self {
        RankProfile {
            r_a: self.r_a,
            r_g: self.r_h,
            r_h: self.r_g,
            r_m: self.r_m,
        }
    }
}

impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r(A)={} r(G)={} r(H)={} r(M)={}",
            self.r_a, self.r_g, self.r_h, self.r_m
        )
    }
}

/// The assembled blocks of a triple.
#[derive(Debug, Clone)]
pub struct Assembled<F: Field> {
    pub g: Matrix<F>,
    pub h: Matrix<F>,
    pub m: Matrix<F>,
}

/// Shape check for `A (m×n)`, `B (m×p)`, `C (q×n)`; returns the dimensions.
pub fn triple_dims<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Result<Dims> {
    let (m, n) = a.shape();
    if b.rows() != m {
        return Err(Error::shape("assemble", "B", format!("{m} rows (matching A)"), b.shape()));
    }
    if c.cols() != n {
        return Err(Error::shape("assemble", "C", format!("{n} columns (matching A)"), c.shape()));
    }
    if a.field() != b.field() || a.field() != c.field() {
        return Err(Error::Field("A, B and C must share a field".into()));
    }
    Ok(Dims::new(m, n, b.cols(), c.rows()))
}

pub fn assemble<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Result<Assembled<F>> {
    let dims = triple_dims(a, b, c)?;
    let zero = Matrix::zeros(a.field().clone(), dims.q, dims.p);
    Ok(Assembled {
        g: a.hcat(b)?,
        h: a.vcat(c)?,
        m: Matrix::block2x2(a, b, c, &zero)?,
    })
}

pub fn rank_profile<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Result<RankProfile> {
    let blocks = assemble(a, b, c)?;
    Ok(RankProfile {
        r_a: a.rank(),
        r_g: blocks.g.rank(),
        r_h: blocks.h.rank(),
        r_m: blocks.m.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn q(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_i64(Rationals, rows).unwrap()
    }

    #[test]
    fn assemble_one_by_one() {
        let one = q(&[&[1]]);
        let blocks = assemble(&one, &one, &one).unwrap();
        assert_eq!(blocks.g, q(&[&[1, 1]]));
        assert_eq!(blocks.h, q(&[&[1], &[1]]));
        assert_eq!(blocks.m, q(&[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn antidiagonal_identity() {
        let z = Matrix::zeros(Rationals, 2, 2);
        let i = Matrix::identity(Rationals, 2);
        let blocks = assemble(&z, &i, &i).unwrap();
        assert_eq!(blocks.m.rank(), 4);
        assert_eq!(
            rank_profile(&z, &i, &i).unwrap(),
            RankProfile { r_a: 0, r_g: 2, r_h: 2, r_m: 4 }
        );
    }

    #[test]
    fn profile_examples() {
        let i = Matrix::identity(Rationals, 2);
        assert_eq!(
            rank_profile(&i, &i, &i).unwrap(),
            RankProfile { r_a: 2, r_g: 2, r_h: 2, r_m: 4 }
        );
        // Hand elimination: M = [[1,0,1],[0,0,0],[1,0,0]] has rank 2.
        let a = q(&[&[1, 0], &[0, 0]]);
        let b = q(&[&[1], &[0]]);
        let c = q(&[&[1, 0]]);
        let blocks = assemble(&a, &b, &c).unwrap();
        assert_eq!(blocks.g.rank(), 1);
        assert_eq!(blocks.h.rank(), 1);
        assert_eq!(blocks.m.rank(), 2);
        assert_eq!(
            rank_profile(&a, &b, &c).unwrap(),
            RankProfile { r_a: 1, r_g: 1, r_h: 1, r_m: 2 }
        );
    }

    #[test]
    fn shape_errors_name_the_operand() {
        let a = Matrix::zeros(Rationals, 2, 2);
        let bad_b = Matrix::zeros(Rationals, 3, 1);
        let c = Matrix::zeros(Rationals, 1, 2);
        match assemble(&a, &bad_b, &c) {
            Err(Error::Shape { operand, .. }) => assert_eq!(operand, "B"),
            other => panic!("unexpected {other:?}"),
        }
        let b = Matrix::zeros(Rationals, 2, 1);
        let bad_c = Matrix::zeros(Rationals, 1, 3);
        match assemble(&a, &b, &bad_c) {
            Err(Error::Shape { operand, .. }) => assert_eq!(operand, "C"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_profiles_are_rejected() {
        let dims = Dims::new(2, 2, 2, 2);
        assert!(RankProfile::new(2, 1, 2, 4, dims).is_err());
        assert!(RankProfile::new(0, 2, 2, 5, dims).is_err());
        assert!(RankProfile::new(1, 2, 2, 3, dims).is_ok());
    }
}
