//! Simultaneous decomposition `A = P·Σ_A·Q`, `B = P·Σ_B·U`, `C = V·Σ_C·Q`.
//!
//! The factors are built from subspaces rather than by repeated block
//! elimination. Write `R = Q⁻¹` and read the three identities column by column:
//! `A·R = P·Σ_A`, `C·R = V·Σ_C` and `B·U⁻¹ = P·Σ_B`. Every block of `R` is then a
//! basis of a subspace of `Fⁿ` fixed by `N(A)`, `N(C)`, `R(B)` and their
//! intersections, and `P`, `U⁻¹`, `V` are images or preimages of those bases.
//! The diagonal blocks `S_A`, `S_B`, `S_C` come out as identities.
//!
//! Column blocks of `R`, in order:
//!
//! | block | size | spanned by |
//! |-------|------|------------|
//! | `E_j` | `j`  | `x ∈ N(C)` with `Ax ∈ R(B)`, modulo `N(A) ∩ N(C)` |
//! | `E_k` | `k`  | the rest of `N(C)` modulo `N(A) ∩ N(C)` |
//! | `E_l` | `l`  | a complement of `E_u` beyond `N(A) + N(C)` |
//! | `E_u` | `u`  | `x` with `Ax ∈ R(B)` but `Cx ≠ 0` |
//! | `S_1` | `s₁` | `N(A)` modulo `N(A) ∩ N(C)` |
//! | `T_1` | `t₁` | `N(A) ∩ N(C)` |

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{complete_basis, extend_basis, independent_columns, inverse, nullspace, solve};
use crate::matrix::Matrix;
use crate::profile::{rank_profile, triple_dims, Dims, RankProfile};

/// The eight structural parameters of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Parameters {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub u: usize,
    pub s1: usize,
    pub s2: usize,
    pub t1: usize,
    pub t2: usize,
}

impl Parameters {
    pub fn r_a(&self) -> usize {
        self.j + self.k + self.l + self.u
    }

    pub fn r_b(&self) -> usize {
        self.j + self.u + self.s2
    }

    pub fn r_c(&self) -> usize {
        self.l + self.u + self.s1
    }

    pub fn m(&self) -> usize {
        self.r_a() + self.s2 + self.t2
    }

    pub fn n(&self) -> usize {
        self.r_a() + self.s1 + self.t1
    }

    /// The rank profile these parameters describe.
    pub fn profile(&self) -> RankProfile {
        let r_a = self.r_a();
        RankProfile {
            r_a,
            r_g: r_a + self.s2,
            r_h: r_a + self.s1,
            r_m: self.j + self.k + self.l + 2 * self.u + self.s1 + self.s2,
        }
    }

    /// Free rows and columns of the variable in canonical coordinates: rank placed
    /// there changes `r(X)` but not the objective.
    pub fn padding_capacity(&self, dims: Dims) -> usize {
        (dims.p - self.u - self.s2) + (dims.q - self.u - self.s1)
    }

    /// The identities tying the parameters to ranks and dimensions.
    pub fn check(&self, prof: &RankProfile, r_b: usize, r_c: usize, dims: Dims) -> Result<()> {
        let checks = [
            (self.r_a() == prof.r_a, "j+k+l+u = r(A)"),
            (self.r_b() == r_b, "j+u+s2 = r(B)"),
            (self.r_c() == r_c, "l+u+s1 = r(C)"),
            (self.n() == dims.n, "j+k+l+u+s1+t1 = n"),
            (self.m() == dims.m, "j+k+l+u+s2+t2 = m"),
            (self.profile() == *prof, "profile reproduced"),
            (r_b <= dims.p && r_c <= dims.q, "r(B) <= p, r(C) <= q"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, rule)) => Err(Error::Consistency(format!("{self} violates {rule}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "j={} k={} l={} u={} s1={} s2={} t1={} t2={}",
            self.j, self.k, self.l, self.u, self.s1, self.s2, self.t1, self.t2
        )
    }
}

/// The eight parameters from the profile together with `r(B)` and `r(C)`, which
/// the profile alone does not determine.
pub fn parameters_from_profile(prof: &RankProfile, r_b: usize, r_c: usize, dims: Dims) -> Result<Parameters> {
    let (ra, rg, rh, rm) = (prof.r_a as i64, prof.r_g as i64, prof.r_h as i64, prof.r_m as i64);
    let (rb, rc) = (r_b as i64, r_c as i64);
    let values = [
        ("j = r(H)+r(B)-r(M)", rh + rb - rm),
        ("k = r(M)-r(B)-r(C)", rm - rb - rc),
        ("l = r(G)+r(C)-r(M)", rg + rc - rm),
        ("u = r(M)+r(A)-r(H)-r(G)", rm + ra - rh - rg),
        ("s1 = r(H)-r(A)", rh - ra),
        ("s2 = r(G)-r(A)", rg - ra),
        ("t1 = n-r(H)", dims.n as i64 - rh),
        ("t2 = m-r(G)", dims.m as i64 - rg),
    ];
    if let Some((name, v)) = values.iter().find(|(_, v)| *v < 0) {
        return Err(Error::Consistency(format!("{name} would be {v} for {prof}")));
    }
    let v = values.map(|(_, v)| v as usize);
    let params = Parameters {
        j: v[0],
        k: v[1],
        l: v[2],
        u: v[3],
        s1: v[4],
        s2: v[5],
        t1: v[6],
        t2: v[7],
    };
    params.check(prof, r_b, r_c, dims)?;
    Ok(params)
}

/// Every realizable `(profile, dims, r(B), r(C))` with all dimensions in `1..=max_dim`.
/// A parameter tuple is realizable exactly when the Σ-blocks it describes fit.
pub fn realizable_profiles_with_bc(max_dim: usize) -> Vec<(RankProfile, Dims, usize, usize)> {
    let mut out = BTreeSet::new();
    for m in 1..=max_dim {
        for n in 1..=max_dim {
            for p in 1..=max_dim {
                for q in 1..=max_dim {
                    let dims = Dims::new(m, n, p, q);
                    for params in parameters_fitting(dims) {
                        let prof = params.profile();
                        out.insert((m, n, p, q, prof.r_a, prof.r_g, prof.r_h, prof.r_m, params.r_b(), params.r_c()));
                    }
                }
            }
        }
    }
    out.into_iter()
        .map(|(m, n, p, q, r_a, r_g, r_h, r_m, rb, rc)| {
            (RankProfile { r_a, r_g, r_h, r_m }, Dims::new(m, n, p, q), rb, rc)
        })
        .collect()
}

/// Every realizable `(profile, dims)` with all dimensions in `1..=max_dim`.
pub fn realizable_profiles(max_dim: usize) -> Vec<(RankProfile, Dims)> {
    let mut seen = BTreeSet::new();
    realizable_profiles_with_bc(max_dim)
        .into_iter()
        .filter(|(prof, dims, _, _)| seen.insert((dims.m, dims.n, dims.p, dims.q, prof.r_a, prof.r_g, prof.r_h, prof.r_m)))
        .map(|(prof, dims, _, _)| (prof, dims))
        .collect()
}

fn parameters_fitting(dims: Dims) -> Vec<Parameters> {
    let Dims { m, n, p, q } = dims;
    let mut out = Vec::new();
    for j in 0..=m.min(n) {
        for k in 0..=m.min(n) - j {
            for l in 0..=m.min(n) - j - k {
                for u in 0..=m.min(n) - j - k - l {
                    let ra = j + k + l + u;
                    for s1 in 0..=n - ra {
                        for s2 in 0..=m - ra {
                            let params = Parameters {
                                j,
                                k,
                                l,
                                u,
                                s1,
                                s2,
                                t1: n - ra - s1,
                                t2: m - ra - s2,
                            };
                            if params.r_b() <= p && params.r_c() <= q {
                                out.push(params);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) fn small_profiles(max_dim: usize) -> Vec<(RankProfile, Dims)> {
    realizable_profiles(max_dim)
}

#[cfg(test)]
pub(crate) fn small_profiles_with_bc(max_dim: usize) -> Vec<(RankProfile, Dims, usize, usize)> {
    realizable_profiles_with_bc(max_dim)
}

/// Block sizes of the Σ matrices.
struct Layout {
    a_rows: [usize; 6],
    a_cols: [usize; 6],
    b_rows: [usize; 5],
    b_cols: [usize; 4],
    c_rows: [usize; 4],
    c_cols: [usize; 5],
}

impl Layout {
    fn new(pr: &Parameters, dims: Dims) -> Self {
        let Parameters { j, k, l, u, s1, s2, t1, t2 } = *pr;
        Layout {
            a_rows: [j, k, l, u, s2, t2],
            a_cols: [j, k, l, u, s1, t1],
            b_rows: [j, k + l, u, s2, t2],
            b_cols: [j, dims.p - j - u - s2, u, s2],
            c_rows: [dims.q - l - u - s1, l, u, s1],
            c_cols: [j + k, l, u, s1, t1],
        }
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = vec![0];
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

/// Builds a block matrix with the given identity (or diagonal) blocks.
fn block_pattern<F: Field>(
    field: &F,
    rows: &[usize],
    cols: &[usize],
    diag_blocks: &[(usize, usize, &Matrix<F>)],
) -> Matrix<F> {
    let ro = offsets(rows);
    let co = offsets(cols);
    let mut out = Matrix::zeros(field.clone(), *ro.last().unwrap(), *co.last().unwrap());
    for &(bi, bj, block) in diag_blocks {
        out.set_block(ro[bi], co[bj], block);
    }
    out
}

/// Check that `sigma` is zero outside the listed blocks, and that each listed
/// block is diagonal with nonzero diagonal (identity when `identity` is set).
fn conforms<F: Field>(sigma: &Matrix<F>, rows: &[usize], cols: &[usize], blocks: &[(usize, usize, bool)]) -> bool {
    let ro = offsets(rows);
    let co = offsets(cols);
    if sigma.shape() != (*ro.last().unwrap(), *co.last().unwrap()) {
        return false;
    }
    let field = sigma.field();
    let block_of = |offs: &[usize], idx: usize| (0..offs.len() - 1).find(|&b| offs[b] <= idx && idx < offs[b + 1]);
    for r in 0..sigma.rows() {
        for c in 0..sigma.cols() {
            let (br, bc) = (block_of(&ro, r).unwrap(), block_of(&co, c).unwrap());
            let v = sigma.get(r, c);
            let listed = blocks.iter().find(|(i, j, _)| *i == br && *j == bc);
            let ok = match listed {
                None => field.is_zero(v),
                Some(&(_, _, identity)) => {
                    let on_diag = r - ro[br] == c - co[bc];
                    if !on_diag {
                        field.is_zero(v)
                    } else if identity {
                        *v == field.one()
                    } else {
                        !field.is_zero(v)
                    }
                }
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct CanonicalDecomposition<F: Field> {
    pub dims: Dims,
    pub params: Parameters,
    pub p_factor: Matrix<F>,
    pub q_factor: Matrix<F>,
    pub u_factor: Matrix<F>,
    pub v_factor: Matrix<F>,
    pub u_inverse: Matrix<F>,
    pub v_inverse: Matrix<F>,
    pub sigma_a: Matrix<F>,
    pub sigma_b: Matrix<F>,
    pub sigma_c: Matrix<F>,
    pub s_a: Matrix<F>,
    pub s_b: Matrix<F>,
    pub s_c: Matrix<F>,
}

fn internal(what: &str) -> Error {
    Error::Internal(format!("decompose: {what}"))
}

/// Columns `x` of the span of `basis` with `A·x ∈ R(B) + A·span(extra)`, as a basis
/// in the coordinates of `basis`, together with the matching combination of
/// `extra` (so that `A·(basis·α − extra·γ) ∈ R(B)`).
fn preimage_in_range<F: Field>(
    a: &Matrix<F>,
    basis: &Matrix<F>,
    b: &Matrix<F>,
    extra: &Matrix<F>,
) -> Result<(Matrix<F>, Matrix<F>)> {
    let w = basis.cols();
    let ab = a.mul(basis)?;
    let ae = a.mul(extra)?;
    let system = ab.hcat(&b.neg())?.hcat(&ae.neg())?;
    let kernel = nullspace(&system);
    let alpha_all = kernel.submatrix(0, w, 0, kernel.cols());
    let picked = independent_columns(&alpha_all);
    let alpha = alpha_all.select_cols(&picked);
    let gamma = kernel
        .submatrix(w + b.cols(), kernel.rows(), 0, kernel.cols())
        .select_cols(&picked);
    Ok((alpha, gamma))
}

/// Some `X` with `A·X = B`; the caller guarantees consistency.
fn preimage<F: Field>(a: &Matrix<F>, rhs: &Matrix<F>) -> Result<Matrix<F>> {
    solve(a, rhs)?.ok_or_else(|| internal("image vector outside the range of B"))
}

pub fn decompose<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Result<CanonicalDecomposition<F>> {
    let dims = triple_dims(a, b, c)?;
    let field = a.field().clone();
    let Dims { m, n, p, q } = dims;
    let prof = rank_profile(a, b, c)?;
    let (r_b, r_c) = (b.rank(), c.rank());
    let params = parameters_from_profile(&prof, r_b, r_c, dims)?;
    let h = a.vcat(c)?;

    // Column space Fⁿ.
    let t1 = nullspace(&h);
    let s1 = extend_basis(&t1, &nullspace(a))?;
    let jk = extend_basis(&t1, &nullspace(c))?;
    let kernels = t1.hcat(&s1)?.hcat(&jk)?;
    let w = complete_basis(&kernels)?;

    let empty = Matrix::zeros(field.clone(), n, 0);
    let (alpha_j, _) = preimage_in_range(a, &jk, b, &empty)?;
    let ej = jk.mul(&alpha_j)?;
    let ek = jk.mul(&complete_basis(&alpha_j)?)?;

    let (alpha_u, gamma_u) = preimage_in_range(a, &w, b, &jk)?;
    let eu = w.mul(&alpha_u)?.sub(&jk.mul(&gamma_u)?)?;
    let el = w.mul(&complete_basis(&alpha_u)?)?;

    let sizes = [ej.cols(), ek.cols(), el.cols(), eu.cols()];
    if sizes != [params.j, params.k, params.l, params.u] {
        return Err(internal(&format!("block sizes {sizes:?} disagree with {params}")));
    }

    let r = ej.hcat(&ek)?.hcat(&el)?.hcat(&eu)?.hcat(&s1)?.hcat(&t1)?;
    let q_factor = inverse(&r).ok_or_else(|| internal("column basis is singular"))?;

    // Row space Fᵐ.
    let (aej, aek, ael, aeu) = (a.mul(&ej)?, a.mul(&ek)?, a.mul(&el)?, a.mul(&eu)?);
    let shared = aej.hcat(&aeu)?;
    let ps2 = extend_basis(&shared, b)?;
    let image = aej.hcat(&aek)?.hcat(&ael)?.hcat(&aeu)?.hcat(&ps2)?;
    let pt2 = complete_basis(&image)?;
    let p_factor = image.hcat(&pt2)?;
    if p_factor.shape() != (m, m) {
        return Err(internal("row basis has the wrong size"));
    }

    // Fᵖ: U⁻¹ = [f_j, N(B), f_u, f_s2] with B·f = matching columns of P.
    let u_inverse = preimage(b, &aej)?
        .hcat(&nullspace(b))?
        .hcat(&preimage(b, &aeu)?)?
        .hcat(&preimage(b, &ps2)?)?;
    let u_factor = inverse(&u_inverse).ok_or_else(|| internal("U is singular"))?;

    // F^q: V = [completion, C·E_l, C·E_u, C·S_1].
    let cimg = c.mul(&el)?.hcat(&c.mul(&eu)?)?.hcat(&c.mul(&s1)?)?;
    let v_factor = complete_basis(&cimg)?.hcat(&cimg)?;
    let v_inverse = inverse(&v_factor).ok_or_else(|| internal("V is singular"))?;
    if u_factor.shape() != (p, p) || v_factor.shape() != (q, q) {
        return Err(internal("U or V has the wrong size"));
    }

    let dec = CanonicalDecomposition::from_factors(dims, params, p_factor, q_factor, u_factor, v_factor, u_inverse, v_inverse);
    dec.verify(a, b, c)?;
    Ok(dec)
}

impl<F: Field> CanonicalDecomposition<F> {
    #[allow(clippy::too_many_arguments)]
    fn from_factors(
        dims: Dims,
        params: Parameters,
        p_factor: Matrix<F>,
        q_factor: Matrix<F>,
        u_factor: Matrix<F>,
        v_factor: Matrix<F>,
        u_inverse: Matrix<F>,
        v_inverse: Matrix<F>,
    ) -> Self {
        let field = p_factor.field().clone();
        let lay = Layout::new(&params, dims);
        let eye = |k| Matrix::identity(field.clone(), k);
        let Parameters { j, k, l, u, s1, s2, .. } = params;
        let (s_a, s_b, s_c) = (eye(u), eye(u), eye(u));
        let sigma_a = block_pattern(
            &field,
            &lay.a_rows,
            &lay.a_cols,
            &[(0, 0, &eye(j)), (1, 1, &eye(k)), (2, 2, &eye(l)), (3, 3, &s_a)],
        );
        let sigma_b = block_pattern(&field, &lay.b_rows, &lay.b_cols, &[(0, 0, &eye(j)), (2, 2, &s_b), (3, 3, &eye(s2))]);
        let sigma_c = block_pattern(&field, &lay.c_rows, &lay.c_cols, &[(1, 1, &eye(l)), (2, 2, &s_c), (3, 3, &eye(s1))]);
        CanonicalDecomposition {
            dims,
            params,
            p_factor,
            q_factor,
            u_factor,
            v_factor,
            u_inverse,
            v_inverse,
            sigma_a,
            sigma_b,
            sigma_c,
            s_a,
            s_b,
            s_c,
        }
    }

    fn field(&self) -> &F {
        self.p_factor.field()
    }

    /// Exact reconstruction of all three matrices plus the Σ patterns.
    pub fn verify(&self, a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Result<()> {
        let ra = Matrix::product(&[&self.p_factor, &self.sigma_a, &self.q_factor])?;
        let rb = Matrix::product(&[&self.p_factor, &self.sigma_b, &self.u_factor])?;
        let rc = Matrix::product(&[&self.v_factor, &self.sigma_c, &self.q_factor])?;
        if ra != *a || rb != *b || rc != *c {
            return Err(internal("reconstruction mismatch"));
        }
        if !self.shapes_conform() {
            return Err(internal("Σ blocks do not follow the canonical pattern"));
        }
        Ok(())
    }

    /// Every entry of `Σ_A`, `Σ_B`, `Σ_C` outside the canonical pattern is zero,
    /// identity blocks are identities and the `S` blocks are invertible diagonals.
    pub fn shapes_conform(&self) -> bool {
        let lay = Layout::new(&self.params, self.dims);
        conforms(&self.sigma_a, &lay.a_rows, &lay.a_cols, &[(0, 0, true), (1, 1, true), (2, 2, true), (3, 3, false)])
            && conforms(&self.sigma_b, &lay.b_rows, &lay.b_cols, &[(0, 0, true), (2, 2, false), (3, 3, true)])
            && conforms(&self.sigma_c, &lay.c_rows, &lay.c_cols, &[(1, 1, true), (2, 2, false), (3, 3, true)])
    }

    /// `S′ = S_B⁻¹·S_A·S_C⁻¹`.
    pub fn s_prime(&self) -> Result<Matrix<F>> {
        let sb = inverse(&self.s_b).ok_or_else(|| internal("S_B is singular"))?;
        let sc = inverse(&self.s_c).ok_or_else(|| internal("S_C is singular"))?;
        Matrix::product(&[&sb, &self.s_a, &sc])
    }

    /// Rows of `Y = U·X·V` that meet `Σ_B`'s `u` and `s₂` blocks.
    pub fn core_rows(&self) -> Range<usize> {
        self.dims.p - self.params.u - self.params.s2..self.dims.p
    }

    /// Columns of `Y` that meet `Σ_C`'s `u` and `s₁` blocks.
    pub fn core_cols(&self) -> Range<usize> {
        self.dims.q - self.params.u - self.params.s1..self.dims.q
    }

    pub fn padding_capacity(&self) -> usize {
        self.params.padding_capacity(self.dims)
    }

    /// `Y = U·X·V`.
    pub fn to_canonical(&self, x: &Matrix<F>) -> Result<Matrix<F>> {
        self.check_variable(x, "X")?;
        Matrix::product(&[&self.u_factor, x, &self.v_factor])
    }

    /// `X = U⁻¹·Y·V⁻¹`.
    pub fn from_canonical(&self, y: &Matrix<F>) -> Result<Matrix<F>> {
        self.check_variable(y, "Y")?;
        Matrix::product(&[&self.u_inverse, y, &self.v_inverse])
    }

    fn check_variable(&self, y: &Matrix<F>, name: &str) -> Result<()> {
        let (p, q) = (self.dims.p, self.dims.q);
        if y.shape() != (p, q) {
            return Err(Error::shape("canonical variable", name, format!("{p}x{q}"), y.shape()));
        }
        if y.field() != self.field() {
            return Err(Error::Field(format!("{name} is over {}, expected {}", y.spec(), self.field().spec())));
        }
        Ok(())
    }

    /// `[[S′ + Y₃₃, Y₃₄], [Y₄₃, Y₄₄]]`: the part of `Y` that the objective sees.
    pub fn core_block(&self, y: &Matrix<F>) -> Result<Matrix<F>> {
        self.check_variable(y, "Y")?;
        let (rows, cols) = (self.core_rows(), self.core_cols());
        let mut block = y.submatrix(rows.start, rows.end, cols.start, cols.end);
        let u = self.params.u;
        let shifted = block.submatrix(0, u, 0, u).add(&self.s_prime()?)?;
        block.set_block(0, 0, &shifted);
        Ok(block)
    }

    /// `r(Σ_A + Σ_B·Y·Σ_C)`, checked against `j + k + l + r(core block)`.
    pub fn canonical_objective_rank(&self, y: &Matrix<F>) -> Result<usize> {
        self.check_variable(y, "Y")?;
        let full = self.sigma_a.add(&Matrix::product(&[&self.sigma_b, y, &self.sigma_c])?)?.rank();
        let Parameters { j, k, l, .. } = self.params;
        let split = j + k + l + self.core_block(y)?.rank();
        if full != split {
            return Err(internal(&format!("rank split fails: {full} != {split}")));
        }
        Ok(full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::random::{random_matrix, random_mixed_rank};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_i64(Rationals, rows).unwrap()
    }

    fn eye(n: usize) -> Matrix<Rationals> {
        Matrix::identity(Rationals, n)
    }

    fn params_of(a: &Matrix<Rationals>, b: &Matrix<Rationals>, c: &Matrix<Rationals>) -> Parameters {
        let dims = triple_dims(a, b, c).unwrap();
        parameters_from_profile(&rank_profile(a, b, c).unwrap(), b.rank(), c.rank(), dims).unwrap()
    }

    #[test]
    fn parameter_examples() {
        let p = params_of(&eye(2), &eye(2), &eye(2));
        assert_eq!((p.j, p.k, p.l, p.u, p.s1, p.s2, p.t1, p.t2), (0, 0, 0, 2, 0, 0, 0, 0));
        let z = Matrix::zeros(Rationals, 2, 2);
        let p = params_of(&z, &z, &z);
        assert_eq!((p.j, p.k, p.l, p.u, p.s1, p.s2, p.t1, p.t2), (0, 0, 0, 0, 0, 0, 2, 2));
        let p = params_of(&z, &eye(2), &eye(2));
        assert_eq!((p.j, p.k, p.l, p.u, p.s1, p.s2, p.t1, p.t2), (0, 0, 0, 0, 2, 2, 0, 0));
        let p = params_of(&q(&[&[1, 0], &[0, 0]]), &q(&[&[1], &[0]]), &q(&[&[1, 0]]));
        assert_eq!((p.j, p.k, p.l, p.u, p.s1, p.s2, p.t1, p.t2), (0, 0, 0, 1, 0, 0, 1, 1));
    }

    #[test]
    fn negative_parameter_is_named() {
        let dims = Dims::new(2, 2, 2, 2);
        let prof = RankProfile { r_a: 1, r_g: 1, r_h: 1, r_m: 2 };
        match parameters_from_profile(&prof, 2, 2, dims) {
            Err(Error::Consistency(msg)) => assert!(msg.contains("k ="), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decompose_examples() {
        let one = eye(1);
        let d = decompose(&one, &one, &one).unwrap();
        assert_eq!(d.params.u, 1);
        for f in [&d.p_factor, &d.q_factor, &d.u_factor, &d.v_factor, &d.sigma_a, &d.sigma_b, &d.sigma_c] {
            assert_eq!(*f, one);
        }

        let z = Matrix::zeros(Rationals, 2, 2);
        let d = decompose(&z, &eye(2), &eye(2)).unwrap();
        assert!(d.sigma_a.is_zero());
        assert_eq!((d.params.s1, d.params.s2), (2, 2));
        assert_eq!(d.sigma_b, eye(2));
        assert_eq!(d.sigma_c, eye(2));

        let (a, b, c) = (q(&[&[1, 0], &[0, 0]]), q(&[&[1], &[0]]), q(&[&[1, 0]]));
        let d = decompose(&a, &b, &c).unwrap();
        assert_eq!(d.params, params_of(&a, &b, &c));
        d.verify(&a, &b, &c).unwrap();
    }

    #[test]
    fn objective_rank_examples() {
        let d = decompose(&eye(2), &eye(2), &eye(2)).unwrap();
        let zero = Matrix::zeros(Rationals, 2, 2);
        assert_eq!(d.canonical_objective_rank(&zero).unwrap(), 2);
        let y = d.to_canonical(&eye(2).neg()).unwrap();
        assert_eq!(d.canonical_objective_rank(&y).unwrap(), 0);

        let (a, b, c) = (q(&[&[1, 0], &[0, 0]]), q(&[&[1], &[0]]), q(&[&[1, 0]]));
        let d = decompose(&a, &b, &c).unwrap();
        let y = d.to_canonical(&q(&[&[-1]])).unwrap();
        assert_eq!(d.canonical_objective_rank(&y).unwrap(), 0);
        assert_eq!(d.from_canonical(&y).unwrap(), q(&[&[-1]]));
        assert!(matches!(d.canonical_objective_rank(&eye(2)), Err(Error::Shape { .. })));
    }

    #[test]
    fn pattern_check_rejects_stray_entries() {
        let d = decompose(&eye(2), &eye(2), &eye(2)).unwrap();
        let mut broken = d.clone();
        broken.sigma_b.set(0, 1, Rationals.one());
        assert!(d.shapes_conform());
        assert!(!broken.shapes_conform());
    }

    fn random_triples<F: Field>(field: &F, count: usize, max_dim: usize, seed: u64) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let (m, n, p, qq) = (
                rng.gen_range(1..=max_dim),
                rng.gen_range(1..=max_dim),
                rng.gen_range(1..=max_dim),
                rng.gen_range(1..=max_dim),
            );
            let a = random_mixed_rank(field, m, n, &mut rng);
            let b = random_mixed_rank(field, m, p, &mut rng);
            let c = random_mixed_rank(field, qq, n, &mut rng);
            let d = decompose(&a, &b, &c).unwrap();
            for _ in 0..5 {
                let x = random_matrix(field, p, qq, &mut rng);
                let y = d.to_canonical(&x).unwrap();
                let direct = a.add(&Matrix::product(&[&b, &x, &c]).unwrap()).unwrap().rank();
                assert_eq!(d.canonical_objective_rank(&y).unwrap(), direct);
            }
        }
    }

    #[test]
    fn random_triples_over_gf3_and_q() {
        random_triples(&PrimeField::new(3).unwrap(), 200, 4, 11);
        random_triples(&PrimeField::new(2).unwrap(), 200, 4, 12);
        random_triples(&Rationals, 40, 4, 13);
    }

    #[test]
    fn realizable_profiles_are_realized() {
        let profiles = realizable_profiles_with_bc(2);
        assert!(!profiles.is_empty());
        for (prof, dims, rb, rc) in profiles {
            let params = parameters_from_profile(&prof, rb, rc, dims).unwrap();
            assert_eq!(params.profile(), prof);
        }
    }
}
