//! Explicit variable matrices attaining the extremal ranks.
//!
//! Every construction works in coordinates where the problem is a core block:
//! for `A + X` the rank normal form of `A`, for `A + BXC` the canonical form of
//! the decomposition. There the objective is `r(D + X′)` with
//! `D = diag(I_u, 0)` of size `a × b`, and `X′` ranges over matrices of rank `ρ`.
//! The rest of the variable is padding, placed with the completion lemma so that
//! `r(X)` reaches `t` without touching the objective.
//!
//! Every witness is verified with exact ranks before it is returned.

use std::fmt;

use crate::decomposition::{decompose, CanonicalDecomposition};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::formulas::{
    bxc_extremal, bxc_extremal_fixed, completion_extremal, sum_extremal_fixed, ConstraintKind, ExtremalResult,
    RankConstraint,
};
use crate::linalg::rank_normal_form;
use crate::matrix::Matrix;
use crate::profile::triple_dims;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Max,
    Min,
}

impl Target {
    pub fn pick(&self, r: &ExtremalResult) -> usize {
        match self {
            Target::Max => r.max_rank,
            Target::Min => r.min_rank,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Max => "max",
            Target::Min => "min",
        })
    }
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Target::Max),
            "min" => Ok(Target::Min),
            _ => Err(Error::Precondition(format!("target must be `max` or `min`, got `{s}`"))),
        }
    }
}

/// How the rank of the variable is split between the core block and the padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessPlan {
    /// Rank of the core block.
    pub rho: usize,
    /// Rank carried by the free rows and columns, `t − rho`.
    pub pad: usize,
    /// Padding capacity: number of free rows plus free columns.
    pub z: usize,
}

#[derive(Debug, Clone)]
pub struct Witness<F: Field> {
    pub x: Matrix<F>,
    pub x_rank: usize,
    pub objective_rank: usize,
    pub target: Target,
    pub formula_value: usize,
    pub plan: Option<WitnessPlan>,
}

fn unattainable(what: String) -> Error {
    Error::Precondition(format!("{what} is not attainable over this field"))
}

// ---------------------------------------------------------------------------
// Bordered and completed block matrices

/// `(X, Y, Z)` with `r[[X, Y], [Z, 0]] = t`, where `X` is `m × n`, `Y` is `m × p`
/// and `Z` is `q × n`. Rank `min(t, q, n)` goes into `Z`; the remainder is an
/// identity in the top rows placed against the right edge, so it fills `Y` first
/// and spills into `X` only when `Y` is too narrow.
pub fn bordered_rank_witness<F: Field>(
    field: &F,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    t: usize,
) -> Result<(Matrix<F>, Matrix<F>, Matrix<F>)> {
    let hi = (m + q).min(n + p).min(m + n);
    if t > hi {
        return Err(Error::constraint("t", 0, hi, t));
    }
    let z_rank = t.min(q).min(n);
    let y_rank = t - z_rank;
    let mut top = Matrix::zeros(field.clone(), m, n + p);
    for i in 0..y_rank {
        top.set(i, n + p - y_rank + i, field.one());
    }
    let z = Matrix::partial_identity(field.clone(), q, n, z_rank);
    let x = top.submatrix(0, m, 0, n);
    let y = top.submatrix(0, m, n, n + p);
    let check = Matrix::block2x2(&x, &y, &z, &Matrix::zeros(field.clone(), q, p))?.rank();
    if check != t {
        return Err(Error::Internal(format!("bordered witness has rank {check}, wanted {t}")));
    }
    Ok((x, y, z))
}

/// Upper end of the completion range: `min{m + q, n + p, r(A) + p + q}`.
pub fn completion_rank_bound(m: usize, n: usize, p: usize, q: usize, r_a: usize) -> usize {
    (m + q).min(n + p).min(r_a + p + q)
}

/// `(Y, Z, U)` with `r[[A, Y], [Z, U]] = t`, `Y` being `m × p`, `Z` `q × n` and
/// `U` `q × p`. In rank normal form `A = diag(I_d, 0)`, so with the top `d` rows of
/// `Y` and the left `d` columns of `Z` set to zero the rank is `d` plus the rank of
/// a bordered matrix in the remaining blocks.
pub fn completion_rank_witness<F: Field>(
    a: &Matrix<F>,
    p: usize,
    q: usize,
    t: usize,
) -> Result<(Matrix<F>, Matrix<F>, Matrix<F>)> {
    let field = a.field().clone();
    let (m, n) = a.shape();
    let nf = rank_normal_form(a)?;
    let d = nf.rank;
    let hi = completion_rank_bound(m, n, p, q, d);
    if t < d || t > hi {
        return Err(Error::constraint("t", d, hi, t));
    }
    // [[U, Ẑ₂], [Ŷ₂, 0]] in the bordered shape: U is q × p, Ẑ₂ is q × (n − d),
    // Ŷ₂ is (m − d) × p.
    let (u, z2, y2) = bordered_rank_witness(&field, q, p, n - d, m - d, t - d)?;
    let mut y_hat = Matrix::zeros(field.clone(), m, p);
    y_hat.set_block(d, 0, &y2);
    let mut z_hat = Matrix::zeros(field.clone(), q, n);
    z_hat.set_block(0, d, &z2);
    // A = P⁻¹·D·Q⁻¹, so [[A, Y], [Z, U]] = diag(P⁻¹, I)·[[D, P·Y], [Z·Q, U]]·diag(Q⁻¹, I).
    let y = nf.p_inverse.mul(&y_hat)?;
    let z = z_hat.mul(&nf.q_inverse)?;
    let check = Matrix::block2x2(a, &y, &z, &u)?.rank();
    if check != t {
        return Err(Error::Internal(format!("completion witness has rank {check}, wanted {t}")));
    }
    Ok((y, z, u))
}

// ---------------------------------------------------------------------------
// The core block

/// Companion matrix of `x² + x + 1` or `x³ + x + 1`: over GF(2) both it and
/// `I` plus it are nonsingular, since neither polynomial has 0 or 1 as a root.
fn gf2_companion<F: Field>(field: &F, size: usize) -> Matrix<F> {
    let rows: &[&[i64]] = match size {
        2 => &[&[0, 1], &[1, 1]],
        3 => &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]],
        _ => unreachable!("only sizes 2 and 3 are used"),
    };
    Matrix::from_i64(field.clone(), rows).expect("literal")
}

/// Nonsingular `N` of size `o ≥ 2` with `I + N` nonsingular over GF(2).
fn gf2_shift_safe<F: Field>(field: &F, o: usize) -> Matrix<F> {
    let mut out = Matrix::zeros(field.clone(), 0, 0);
    let mut left = o;
    while left > 0 {
        let size = if left % 2 == 1 { 3 } else { 2 };
        out = Matrix::direct_sum(&out, &gf2_companion(field, size)).expect("square");
        left -= size;
    }
    out
}

/// `X′` of rank `rho` maximizing `r(D + X′)` where `D = diag(I_u, 0)` is `a × b`.
/// Returns `None` only over GF(2) when `a = b = u = rho = 1`.
fn core_max<F: Field>(field: &F, a: usize, b: usize, u: usize, rho: usize) -> Option<Matrix<F>> {
    let mut x = Matrix::zeros(field.clone(), a, b);
    let overlap = (u + rho).saturating_sub(a);
    if a != b || overlap == 0 || field.characteristic() != 2 {
        // Identity against the bottom-right corner. When a ≠ b the two diagonals
        // never cancel; when a = b they can only meet on entries equal to 2.
        for i in 0..rho {
            x.set(a - rho + i, b - rho + i, field.one());
        }
        return Some(x);
    }
    let start = a - rho;
    if overlap >= 2 {
        let block = Matrix::direct_sum(&gf2_shift_safe(field, overlap), &Matrix::identity(field.clone(), rho - overlap))
            .expect("square");
        x.set_block(start, start, &block);
    } else if rho >= 2 {
        // D restricted to rows start, start+1 is diag(1, 0); the swap turns it into
        // [[1, 1], [1, 0]].
        let swap = Matrix::from_i64(field.clone(), &[&[0, 1], &[1, 0]]).expect("literal");
        let block = Matrix::direct_sum(&swap, &Matrix::identity(field.clone(), rho - 2)).expect("square");
        x.set_block(start, start, &block);
    } else if a >= 2 {
        // u = a, rho = 1: I + E₀₁ is unipotent.
        x.set(0, 1, field.one());
    } else {
        return None;
    }
    Some(x)
}

/// `X′` of rank `rho` minimizing `r(D + X′)`: cancel as much of `I_u` as possible,
/// then add fresh identity beyond it.
fn core_min<F: Field>(field: &F, a: usize, b: usize, u: usize, rho: usize) -> Matrix<F> {
    let mut x = Matrix::zeros(field.clone(), a, b);
    let minus_one = field.neg(&field.one());
    for i in 0..rho.min(u) {
        x.set(i, i, minus_one.clone());
    }
    for i in u..rho {
        x.set(i, i, field.one());
    }
    x
}

/// Core witness for rank in `[lo, hi]`: returns `(rho, X′)` reaching `target`.
fn core_witness<F: Field>(
    field: &F,
    (a, b, u): (usize, usize, usize),
    (lo, hi): (usize, usize),
    target: Target,
) -> Option<(usize, Matrix<F>)> {
    match target {
        Target::Max => {
            if field.characteristic() == 2 && a == 1 && b == 1 && u == 1 && hi == 1 {
                // The only rank-1 X′ is 1, which cancels D; rank 0 keeps it.
                return (lo == 0).then(|| (0, Matrix::zeros(field.clone(), 1, 1)));
            }
            core_max(field, a, b, u, hi).map(|x| (hi, x))
        }
        Target::Min => {
            let rho = u.clamp(lo, hi);
            Some((rho, core_min(field, a, b, u, rho)))
        }
    }
}

// ---------------------------------------------------------------------------
// A + X

pub fn sum_witness<F: Field>(a: &Matrix<F>, t: usize, target: Target) -> Result<Witness<F>> {
    let field = a.field().clone();
    let (m, n) = a.shape();
    let formula = sum_extremal_fixed(a, t)?;
    let want = target.pick(&formula);
    let nf = rank_normal_form(a)?;
    let (_, core) = core_witness(&field, (m, n, nf.rank), (t, t), target)
        .ok_or_else(|| unattainable(format!("the {target} rank {want} of A + X with r(X) = {t}")))?;
    let x = Matrix::product(&[&nf.p_inverse, &core, &nf.q_inverse])?;
    finish(x, t, target, want, None, |x| a.add(x))
}

fn finish<F: Field>(
    x: Matrix<F>,
    t: usize,
    target: Target,
    want: usize,
    plan: Option<WitnessPlan>,
    objective: impl Fn(&Matrix<F>) -> Result<Matrix<F>>,
) -> Result<Witness<F>> {
    let x_rank = x.rank();
    let objective_rank = objective(&x)?.rank();
    if x_rank != t || objective_rank != want {
        return Err(Error::Internal(format!(
            "witness check failed: r(X)={x_rank} (wanted {t}), objective rank {objective_rank} (wanted {want})"
        )));
    }
    Ok(Witness {
        x,
        x_rank,
        objective_rank,
        target,
        formula_value: want,
        plan,
    })
}

// ---------------------------------------------------------------------------
// A + BXC

/// Canonical-coordinate witness for `A + BXC` at fixed rank `t`, reusing a
/// decomposition.
pub fn bxc_witness_with<F: Field>(
    dec: &CanonicalDecomposition<F>,
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    t: usize,
    target: Target,
) -> Result<Witness<F>> {
    let field = a.field().clone();
    let dims = dec.dims;
    let formula = bxc_extremal_fixed(&dec.params.profile(), dims, t)?;
    let want = target.pick(&formula);
    let pr = dec.params;
    let (ca, cb) = (pr.u + pr.s2, pr.u + pr.s1);
    let (free_rows, free_cols) = (dims.p - ca, dims.q - cb);
    let z = free_rows + free_cols;
    let lo = t.saturating_sub(z);
    let hi = t.min(ca).min(cb);
    if lo > hi {
        return Err(Error::Internal(format!("empty core rank interval [{lo}, {hi}] for t={t}")));
    }
    let (rho, core) = core_witness(&field, (ca, cb, pr.u), (lo, hi), target)
        .ok_or_else(|| unattainable(format!("the {target} rank {want} of A + BXC with r(X) = {t}")))?;

    // Ŷ = diag(S′, I)·X′ turns D + X′ into the displayed core block up to a
    // nonsingular factor.
    let scale = Matrix::direct_sum(&dec.s_prime()?, &Matrix::identity(field.clone(), pr.s2))?;
    let y_hat = scale.mul(&core)?;

    // Fill the free rows and columns so that r(Y) = t.
    let (y_cf, z_fc, u_ff) = completion_rank_witness(&y_hat, free_cols, free_rows, t)?;
    let mut y = Matrix::zeros(field.clone(), dims.p, dims.q);
    y.set_block(0, 0, &u_ff);
    y.set_block(0, free_cols, &z_fc);
    y.set_block(free_rows, 0, &y_cf);
    y.set_block(free_rows, free_cols, &y_hat);

    let canonical = dec.canonical_objective_rank(&y)?;
    if canonical != want {
        return Err(Error::Internal(format!("canonical objective rank {canonical}, wanted {want}")));
    }
    let x = dec.from_canonical(&y)?;
    let plan = WitnessPlan { rho, pad: t - rho, z };
    finish(x, t, target, want, Some(plan), |x| {
        a.add(&Matrix::product(&[b, x, c])?)
    })
}

pub fn bxc_witness<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, t: usize, target: Target) -> Result<Witness<F>> {
    let dec = decompose(a, b, c)?;
    bxc_witness_with(&dec, a, b, c, t, target)
}

/// Witness for `s ≤ r(X) ≤ t`. For the minimum the rank is the smallest `l`
/// minimizing `u_l`; for the maximum it is `t`, falling back to smaller ranks only
/// over GF(2) where the top rank can be unattainable.
pub fn bxc_range_witness<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    s: usize,
    t: usize,
    target: Target,
) -> Result<Witness<F>> {
    let dims = triple_dims(a, b, c)?;
    let dec = decompose(a, b, c)?;
    let prof = dec.params.profile();
    let range = bxc_extremal(&prof, dims, RankConstraint::range(s, t))?;
    let want = target.pick(&range);
    let order: Vec<usize> = match target {
        Target::Min => {
            let l = range
                .min_terms
                .iter()
                .position(|term| term.value == want as i64)
                .map(|i| s + i)
                .ok_or_else(|| Error::Internal("no rank attains the range minimum".into()))?;
            vec![l]
        }
        Target::Max => (s..=t).rev().collect(),
    };
    let mut last_err = None;
    for l in order {
        if target == Target::Max && bxc_extremal_fixed(&prof, dims, l)?.max_rank != want {
            continue;
        }
        match bxc_witness_with(&dec, a, b, c, l, target) {
            Ok(w) => return Ok(w),
            Err(e @ Error::Precondition(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| unattainable(format!("the range {target} rank {want}"))))
}

/// Witness for the completion `[[A, B], [C, X]]` with `X` of size `q × p`, via
/// `A′ + B′·X·C′` with `A′ = [[A, B], [C, 0]]`, `B′ = [0; I_q]`, `C′ = [0, I_p]`.
pub fn completion_witness<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, t: usize, target: Target) -> Result<Witness<F>> {
    let dims = triple_dims(a, b, c)?;
    let field = a.field().clone();
    let (m, n, p, q) = (dims.m, dims.n, dims.p, dims.q);
    let want = target.pick(&completion_extremal(a, b, c, RankConstraint::fixed(t))?);
    let big = Matrix::block2x2(a, b, c, &Matrix::zeros(field.clone(), q, p))?;
    let left = Matrix::zeros(field.clone(), m, q).vcat(&Matrix::identity(field.clone(), q))?;
    let right = Matrix::zeros(field.clone(), p, n).hcat(&Matrix::identity(field.clone(), p))?;
    let w = bxc_witness(&big, &left, &right, t, target)?;
    if w.objective_rank != want {
        return Err(Error::Internal(format!(
            "embedded witness reaches {}, completion formula says {want}",
            w.objective_rank
        )));
    }
    let plan = w.plan;
    finish(w.x, t, target, want, plan, |x| Matrix::block2x2(a, b, c, x))
}

/// Fixed-rank or range witness, by constraint kind.
pub fn witness_for_constraint<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    constraint: RankConstraint,
    target: Target,
) -> Result<Witness<F>> {
    match constraint.kind {
        ConstraintKind::Fixed => bxc_witness(a, b, c, constraint.t, target),
        ConstraintKind::Range => bxc_range_witness(a, b, c, constraint.s, constraint.t, target),
    }
}
